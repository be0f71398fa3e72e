//! Chi2 top-k and RFECV on a dataset with 3 informative and 7 noise columns.
//!
//! Run with: cargo run --release --example feature_selection

use flowbench::ingest::generate_synthetic;
use flowbench::scale::{apply_minmax, fit_minmax};
use flowbench::select::{chi2_scores, rfecv, select_top_k, RfecvConfig};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec {
        n_rows: 600,
        n_informative: 3,
        n_noise: 7,
        anomaly_rate: 0.5,
        mean_shift: 2.0,
        seed: 42,
    })?;

    // Chi2 needs non-negative input, hence min-max first.
    let scaled = apply_minmax(&fit_minmax(d.features())?, d.features())?;
    let scores = chi2_scores(&scaled, d.labels())?;
    for (name, s) in d.feature_names().iter().zip(&scores) {
        println!("chi2 {name:>10}: {s:.3}");
    }
    println!("top 3: {:?}", select_top_k(&scores, 3)?.kept_indices);

    let cfg = RfecvConfig {
        seed: 42,
        ..RfecvConfig::default()
    };
    let (mask, report) = rfecv(&d, &cfg)?;
    print!("{}", report.to_csv());
    println!("elimination order: {:?}", report.ranking);
    println!(
        "chosen size {} -> keep {:?}",
        report.chosen_size, mask.kept_indices
    );
    Ok(())
}
