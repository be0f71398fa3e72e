//! Train the reconstruction autoencoder on normal traffic and sweep its
//! threshold.
//!
//! Run with: cargo run --release --example autoencoder_detector

use flowbench::ingest::{generate_synthetic, split};
use flowbench::metrics::{confusion, format_percent, Scores};
use flowbench::neural::{ae_fit, ae_predict_with_threshold, ae_score, AeConfig, TrainSchedule};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec {
        n_rows: 2000,
        anomaly_rate: 0.5,
        ..SyntheticSpec::default()
    })?;
    let pair = split(&d, 0.8, 5)?;
    let model = ae_fit(
        &pair.train,
        &AeConfig::default(),
        &TrainSchedule::default(),
        5,
    )?;
    println!("threshold {:.5}", model.threshold);

    let scores = ae_score(&model, pair.test.features())?;
    let mean = |label: u8| {
        let v: Vec<f64> = scores
            .iter()
            .zip(pair.test.labels())
            .filter(|(_, &l)| l == label)
            .map(|(s, _)| *s)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    println!("mean error: normal {:.5}, anomaly {:.5}", mean(0), mean(1));

    for scale in [0.5, 1.0, 2.0] {
        let tau = model.threshold * scale;
        let pred = ae_predict_with_threshold(&model, pair.test.features(), tau)?;
        let s = Scores::from(&confusion(pair.test.labels(), &pred)?);
        println!(
            "tau x{scale}: precision {} recall {}",
            format_percent(s.precision),
            format_percent(s.recall)
        );
    }
    Ok(())
}
