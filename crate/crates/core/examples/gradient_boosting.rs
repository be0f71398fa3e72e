//! Train the boosted-tree classifier and inspect the fitted ensemble.
//!
//! Run with: cargo run --release --example gradient_boosting

use flowbench::gboost::{feature_importances, gboost_fit, gboost_predict, GBoostConfig};
use flowbench::ingest::{generate_synthetic, split};
use flowbench::metrics::{confusion, format_percent, Scores};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec {
        n_rows: 2000,
        n_informative: 4,
        n_noise: 4,
        ..SyntheticSpec::default()
    })?;
    let pair = split(&d, 0.8, 7)?;

    let model = gboost_fit(&pair.train, &GBoostConfig::default())?;
    let losses = &model.train_log_loss;
    println!("base score {:.4}", model.base_score);
    println!(
        "train log-loss: {:.4} -> {:.4} over {} stages",
        losses[0],
        losses[losses.len() - 1],
        model.trees.len()
    );

    let pred = gboost_predict(&model, pair.test.features(), 0.5)?;
    let s = Scores::from(&confusion(pair.test.labels(), &pred)?);
    println!(
        "test accuracy {} f1 {}",
        format_percent(s.accuracy),
        format_percent(s.f1)
    );

    for (name, imp) in d.feature_names().iter().zip(feature_importances(&model)) {
        println!("importance {name:>9}: {imp:.3}");
    }
    println!("first tree: {}", serde_json::to_string(&model.trees[0])?);
    Ok(())
}
