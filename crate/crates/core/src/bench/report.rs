use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ExperimentResult, RunStatus};
use crate::metrics::format_percent;

pub const REPORT_COLUMNS: [&str; 10] = [
    "Model",
    "ID",
    "Normalization",
    "Transformation",
    "Features Selection",
    "Features #",
    "Accuracy",
    "Precision",
    "Recall",
    "F1-Score",
];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown report format {0:?} (expected csv or markdown)")]
    UnknownFormat(String),
    #[error("report header does not match the expected columns")]
    BadHeader,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

/// One rendered report line, all cells already formatted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(rename = "Model")]
    pub model: String,
    #[serde(rename = "ID")]
    pub id: String,
    #[serde(rename = "Normalization")]
    pub normalization: String,
    #[serde(rename = "Transformation")]
    pub transformation: String,
    #[serde(rename = "Features Selection")]
    pub selection: String,
    #[serde(rename = "Features #")]
    pub n_features: String,
    #[serde(rename = "Accuracy")]
    pub accuracy: String,
    #[serde(rename = "Precision")]
    pub precision: String,
    #[serde(rename = "Recall")]
    pub recall: String,
    #[serde(rename = "F1-Score")]
    pub f1: String,
}

impl ReportRow {
    fn cells(&self) -> [&str; 10] {
        [
            &self.model,
            &self.id,
            &self.normalization,
            &self.transformation,
            &self.selection,
            &self.n_features,
            &self.accuracy,
            &self.precision,
            &self.recall,
            &self.f1,
        ]
    }
}

impl From<&ExperimentResult> for ReportRow {
    fn from(r: &ExperimentResult) -> Self {
        let c = &r.config;
        let status_cell = match &r.status {
            RunStatus::Ok => "",
            RunStatus::Skipped(_) => "skipped",
            RunStatus::Failed(_) => "failed",
        };
        let metric = |f: fn(&crate::metrics::Scores) -> f64| {
            r.scores
                .as_ref()
                .map_or_else(|| status_cell.to_string(), |s| format_percent(f(s)))
        };
        Self {
            model: c.model.to_string(),
            id: c.id.to_string(),
            normalization: c.normalization.to_string(),
            transformation: c.transformation.to_string(),
            selection: c.selection.to_string(),
            n_features: r
                .n_features_used
                .map_or_else(|| status_cell.to_string(), |n| n.to_string()),
            accuracy: metric(|s| s.accuracy),
            precision: metric(|s| s.precision),
            recall: metric(|s| s.recall),
            f1: metric(|s| s.f1),
        }
    }
}

fn model_rank(model: &str) -> usize {
    match model {
        "RNN-LSTM" => 0,
        "Autoencoder" => 1,
        "GBoosting" => 2,
        _ => 3,
    }
}

/// Renders pre-formatted rows, grouped by model (LSTM, autoencoder,
/// boosting) and otherwise in input order.
pub fn render_rows(rows: &[ReportRow], format: ReportFormat) -> String {
    let mut ordered: Vec<&ReportRow> = rows.iter().collect();
    ordered.sort_by_key(|r| model_rank(&r.model));
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(REPORT_COLUMNS).expect("in-memory write");
            for r in ordered {
                w.write_record(r.cells()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        ReportFormat::Markdown => {
            let mut out = format!("| {} |\n", REPORT_COLUMNS.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(REPORT_COLUMNS.len())));
            for r in ordered {
                let cells: Vec<String> = r.cells().iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out
        }
    }
}

pub fn emit_report(results: &[ExperimentResult], format: ReportFormat) -> String {
    let rows: Vec<ReportRow> = results.iter().map(ReportRow::from).collect();
    render_rows(&rows, format)
}

/// Reads a CSV report written by [`emit_report`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>, ReportError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != REPORT_COLUMNS {
        return Err(ReportError::BadHeader);
    }
    reader
        .deserialize()
        .map(|r| r.map_err(ReportError::from))
        .collect()
}
