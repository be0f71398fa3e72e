//! Train the LSTM classifier on single flows and on windows of 4 flows.
//!
//! Run with: cargo run --release --example lstm_classifier

use flowbench::ingest::{generate_synthetic, split};
use flowbench::metrics::{confusion, format_percent, Scores};
use flowbench::neural::{lstm_fit, lstm_predict, LstmConfig, TrainSchedule};
use flowbench::scale::{apply_zscore, fit_zscore};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec {
        n_rows: 1500,
        ..SyntheticSpec::default()
    })?;
    let pair = split(&d, 0.8, 3)?;
    let z = fit_zscore(pair.train.features())?;
    let train = pair
        .train
        .with_features(apply_zscore(&z, pair.train.features())?)?;
    let test_x = apply_zscore(&z, pair.test.features())?;

    for window_size in [1, 4] {
        let cfg = LstmConfig {
            window_size,
            ..LstmConfig::default()
        };
        let model = lstm_fit(&train, &cfg, &TrainSchedule::default(), 11)?;
        let pred = lstm_predict(&model, &test_x)?;
        let s = Scores::from(&confusion(pair.test.labels(), &pred)?);
        println!(
            "window {window_size}: loss {:.4} -> {:.4}, test accuracy {}",
            model.epoch_losses[0],
            model.epoch_losses[model.epoch_losses.len() - 1],
            format_percent(s.accuracy)
        );
    }
    Ok(())
}
