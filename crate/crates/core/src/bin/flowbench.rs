use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use flowbench::bench::{
    emit_report, enumerate_table1, parse_report_csv, render_rows, run_matrix, PipelineConfig,
    ReportFormat, RunStatus,
};
use flowbench::ingest::{
    clean, generate_synthetic, parse_flow_csv_with, split, split_stratified, subsample,
    NonNumericPolicy, ParseOptions, SyntheticSpec,
};

#[derive(Parser)]
#[command(
    name = "flowbench",
    version,
    about = "IoT flow anomaly-detection benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic flow dataset as CSV.
    Generate {
        /// JSON synthetic spec; omitted fields take defaults.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the experiment matrix or a single pipeline config.
    Run {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "Label")]
        label_col: String,
        #[arg(long, default_value = "Anomaly")]
        positive: String,
        /// Named matrix; only `table1` is defined.
        #[arg(long, conflicts_with = "config")]
        matrix: Option<String>,
        /// JSON file with one pipeline config.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Full results (status, timings, digests) as JSON.
        #[arg(long)]
        results_json: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Keep a random subset of this many cleaned rows.
        #[arg(long)]
        subsample: Option<usize>,
        #[arg(long)]
        stratify: bool,
        /// Drop non-numeric columns instead of failing on them.
        #[arg(long)]
        drop_non_numeric: bool,
        /// Comma-separated columns to ignore.
        #[arg(long, value_delimiter = ',')]
        drop_cols: Vec<String>,
    },
    /// Re-render a CSV report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { spec, out } => {
            let spec: SyntheticSpec = match spec {
                Some(p) => serde_json::from_str(&fs::read_to_string(&p)?)
                    .with_context(|| format!("parsing {}", p.display()))?,
                None => SyntheticSpec::default(),
            };
            let d = generate_synthetic(&spec)?;
            fs::write(&out, d.to_csv())?;
            eprintln!(
                "wrote {} rows x {} features to {}",
                d.n_rows(),
                d.n_cols(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            data,
            label_col,
            positive,
            matrix,
            config,
            seed,
            out,
            results_json,
            parallel,
            subsample: sub,
            stratify,
            drop_non_numeric,
            drop_cols,
        } => {
            let configs: Vec<PipelineConfig> = match (matrix.as_deref(), config) {
                (_, Some(p)) => vec![serde_json::from_str(&fs::read_to_string(&p)?)
                    .with_context(|| format!("parsing {}", p.display()))?],
                (Some("table1") | None, None) => enumerate_table1(seed),
                (Some(other), None) => bail!("unknown matrix {other:?}"),
            };

            let mut opts = ParseOptions::new(label_col, positive);
            opts.drop_columns = drop_cols;
            if drop_non_numeric {
                opts.non_numeric = NonNumericPolicy::Drop;
            }
            let text =
                fs::read_to_string(&data).with_context(|| format!("reading {}", data.display()))?;
            let mut dataset = clean(&parse_flow_csv_with(&text, &opts)?)?;
            if let Some(m) = sub {
                dataset = subsample(&dataset, m, seed);
            }
            let pair = if stratify {
                split_stratified(&dataset, 0.8, seed)?
            } else {
                split(&dataset, 0.8, seed)?
            };
            eprintln!(
                "{} train / {} test rows, {} features, {} configs",
                pair.train.n_rows(),
                pair.test.n_rows(),
                dataset.n_cols(),
                configs.len()
            );

            let results = run_matrix(&configs, &pair, parallel);
            let mut failed = false;
            for r in &results {
                match &r.status {
                    RunStatus::Ok => {}
                    RunStatus::Skipped(why) => eprintln!("config {} skipped: {why}", r.config.id),
                    RunStatus::Failed(why) => {
                        failed = true;
                        eprintln!("config {} failed: {why}", r.config.id);
                    }
                }
            }
            let report = emit_report(&results, ReportFormat::Csv);
            match out {
                Some(p) => fs::write(p, &report)?,
                None => print!("{report}"),
            }
            if let Some(p) = results_json {
                fs::write(p, serde_json::to_string_pretty(&results)?)?;
            }
            Ok(if failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Report { input, format } => {
            let format: ReportFormat = format.parse()?;
            let rows = parse_report_csv(&fs::read_to_string(&input)?)?;
            print!("{}", render_rows(&rows, format));
            Ok(ExitCode::SUCCESS)
        }
    }
}
