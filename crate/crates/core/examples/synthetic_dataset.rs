//! Generate a synthetic flow dataset, round-trip it through CSV, clean it and
//! split it 80/20.
//!
//! Run with: cargo run --example synthetic_dataset

use flowbench::ingest::{clean, generate_synthetic, parse_flow_csv, split, split_stratified};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let spec = SyntheticSpec {
        n_rows: 1000,
        ..SyntheticSpec::default()
    };
    let d = generate_synthetic(&spec)?;
    println!(
        "{} rows, {} features, positive rate {:.4}",
        d.n_rows(),
        d.n_cols(),
        d.positive_rate()
    );
    println!("first columns: {:?}", &d.feature_names()[..4]);

    let csv = d.to_csv();
    let parsed = parse_flow_csv(&csv, "Label", "Anomaly")?;
    assert_eq!(parsed, d);
    println!("CSV round trip: {} bytes, exact", csv.len());

    let messy = format!("{csv}{}", csv.lines().nth(1).unwrap());
    let cleaned = clean(&parse_flow_csv(&messy, "Label", "Anomaly")?)?;
    println!("duplicate appended and removed: {} rows", cleaned.n_rows());

    let pair = split(&cleaned, 0.8, 42)?;
    println!(
        "split: {} train / {} test",
        pair.train.n_rows(),
        pair.test.n_rows()
    );
    let strat = split_stratified(&cleaned, 0.8, 42)?;
    println!(
        "stratified split positive rates: train {:.4}, test {:.4}",
        strat.train.positive_rate(),
        strat.test.positive_rate()
    );
    Ok(())
}
