//! Build one pipeline by hand, inspect its fitted state and check that test
//! data never influences it.
//!
//! Run with: cargo run --release --example custom_pipeline

use flowbench::bench::{
    fit_pipeline, run_pipeline, ModelKind, Normalization, PipelineConfig, Selection, Transformation,
};
use flowbench::ingest::{generate_synthetic, split};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec::default())?;
    let pair = split(&d, 0.8, 1)?;

    let mut cfg = PipelineConfig::new(
        1,
        ModelKind::GBoost,
        Normalization::MinMax,
        Transformation::YeoJohnson,
        Selection::Chi2 { k: 10 },
    );
    cfg.seed = 1;
    cfg.hyperparameters.gboost.n_estimators = 50;
    println!("config: {}", serde_json::to_string(&cfg)?);

    let fitted = fit_pipeline(&cfg, &pair.train)?;
    println!("scalers: {}", fitted.scalers.len());
    println!("kept columns: {:?}", fitted.mask.kept_indices);
    println!("fitted digest: {}", fitted.digest());

    let result = run_pipeline(&cfg, &pair);
    println!("status {:?}, scores {:?}", result.status, result.scores);

    let mut shifted = pair.clone();
    let moved = shifted.test.features().map_columns(|_, v| v + 100.0);
    shifted.test = shifted.test.with_features(moved)?;
    let again = run_pipeline(&cfg, &shifted);
    assert_eq!(again.fitted_digest, result.fitted_digest);
    println!(
        "digest unchanged after editing test rows; accuracy now {:?}",
        again.scores.map(|s| s.accuracy)
    );
    Ok(())
}
