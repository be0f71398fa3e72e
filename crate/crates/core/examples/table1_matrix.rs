//! Run the full 34-config matrix on synthetic data and print the report.
//!
//! Run with: cargo run --release --example table1_matrix

use flowbench::bench::{emit_report, enumerate_table1, run_matrix, ReportFormat};
use flowbench::ingest::{generate_synthetic, split};
use flowbench::SyntheticSpec;

fn main() -> flowbench::Result<()> {
    let d = generate_synthetic(&SyntheticSpec::default())?;
    let pair = split(&d, 0.8, 42)?;
    let configs = enumerate_table1(42);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let results = run_matrix(&configs, &pair, threads);
    print!("{}", emit_report(&results, ReportFormat::Markdown));
    let total: f64 = results
        .iter()
        .map(|r| r.fit_seconds + r.predict_seconds)
        .sum();
    eprintln!("{} configs, {total:.1}s of pipeline time", results.len());
    Ok(())
}
