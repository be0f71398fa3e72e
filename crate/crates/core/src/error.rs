use thiserror::Error;

use crate::bench::{ConfigError, ReportError};
use crate::gboost::GBoostError;
use crate::ingest::IngestError;
use crate::metrics::MetricsError;
use crate::neural::NeuralError;
use crate::scale::ScaleError;
use crate::select::SelectError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Umbrella error for code that crosses stage boundaries.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    GBoost(#[from] GBoostError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
