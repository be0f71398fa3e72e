//! Experiment-matrix runner.
//!
//! A [`PipelineConfig`] names one normalization x transformation x selection
//! x model combination. [`enumerate_table1`] yields the 34 reference
//! combinations, [`run_pipeline`] executes one against a [`SplitPair`], and
//! [`emit_report`] renders results as CSV or a markdown pipe table.
//!
//! [`SplitPair`]: crate::ingest::SplitPair

mod pipeline;
mod report;

pub use pipeline::{
    fit_pipeline, run_matrix, run_pipeline, ExperimentResult, FittedPipeline, RunStatus,
    TrainedModel,
};
pub use report::{
    emit_report, parse_report_csv, render_rows, ReportError, ReportFormat, ReportRow,
    REPORT_COLUMNS,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gboost::GBoostConfig;
use crate::neural::{AeConfig, LstmConfig, TrainSchedule};
use crate::select::{RfecvConfig, DEFAULT_CHI2_K};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error(
        "chi2 selection needs non-negative input and therefore min-max normalization, got {0}"
    )]
    Chi2RequiresMinMax(Normalization),
    #[error("chi2 k must be >= 1")]
    BadK,
    #[error("invalid hyperparameter: {0}")]
    Hyperparameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    MinMax,
    ZScore,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transformation {
    YeoJohnson,
    None,
}

fn default_k() -> usize {
    DEFAULT_CHI2_K
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Chi2 {
        #[serde(default = "default_k")]
        k: usize,
    },
    Rfecv,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lstm,
    Autoencoder,
    GBoost,
}

impl ModelKind {
    /// Position of the model's block in the report.
    pub fn report_order(self) -> usize {
        match self {
            ModelKind::Lstm => 0,
            ModelKind::Autoencoder => 1,
            ModelKind::GBoost => 2,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Lstm => "RNN-LSTM",
            ModelKind::Autoencoder => "Autoencoder",
            ModelKind::GBoost => "GBoosting",
        })
    }
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Normalization::MinMax => "min-max scaling",
            Normalization::ZScore => "z-score",
            Normalization::None => "N/A",
        })
    }
}

impl std::fmt::Display for Transformation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Transformation::YeoJohnson => "Yeo-Johnson",
            Transformation::None => "N/A",
        })
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Selection::Chi2 { .. } => "Chi2",
            Selection::Rfecv => "RFECV",
            Selection::None => "N/A",
        })
    }
}

/// Model and selector settings. Defaults are the reference settings:
/// 100 trees of depth 3 at rate 0.1, a 32-unit LSTM with dropout 0.2, a
/// 16-unit autoencoder, Adam at 0.001, 30 epochs of batch 32, and 5-fold
/// RFECV ranked by 50-tree boosting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct Hyperparameters {
    pub gboost: GBoostConfig,
    pub lstm: LstmConfig,
    pub autoencoder: AeConfig,
    pub schedule: TrainSchedule,
    pub rfecv: RfecvConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub id: u32,
    pub model: ModelKind,
    pub normalization: Normalization,
    pub transformation: Transformation,
    pub selection: Selection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub hyperparameters: Hyperparameters,
}

impl PipelineConfig {
    pub fn new(
        id: u32,
        model: ModelKind,
        normalization: Normalization,
        transformation: Transformation,
        selection: Selection,
    ) -> Self {
        Self {
            id,
            model,
            normalization,
            transformation,
            selection,
            seed: 0,
            hyperparameters: Hyperparameters::default(),
        }
    }
}

/// Checks that a configuration can run: chi2 only after min-max (so its
/// input is non-negative), `k >= 1`, and sane hyperparameters.
pub fn validate(config: &PipelineConfig) -> Result<(), ConfigError> {
    if let Selection::Chi2 { k } = config.selection {
        if config.normalization != Normalization::MinMax {
            return Err(ConfigError::Chi2RequiresMinMax(config.normalization));
        }
        if k == 0 {
            return Err(ConfigError::BadK);
        }
    }
    let h = &config.hyperparameters;
    let bad = |msg: String| Err(ConfigError::Hyperparameter(msg));
    if let Err(e) = h.schedule.validate() {
        return bad(e.to_string());
    }
    match config.model {
        ModelKind::GBoost => {
            if let Err(e) = h.gboost.validate() {
                return bad(e.to_string());
            }
        }
        ModelKind::Lstm => {
            if h.lstm.hidden_size == 0 || h.lstm.window_size == 0 {
                return bad("lstm hidden_size and window_size must be >= 1".into());
            }
            if !(0.0..1.0).contains(&h.lstm.dropout_rate) {
                return bad(format!("lstm dropout_rate {}", h.lstm.dropout_rate));
            }
        }
        ModelKind::Autoencoder => {
            if h.autoencoder.hidden == 0 {
                return bad("autoencoder hidden must be >= 1".into());
            }
        }
    }
    if config.selection == Selection::Rfecv {
        if h.rfecv.folds < 2 {
            return bad("rfecv folds must be >= 2".into());
        }
        if let Err(e) = h.rfecv.estimator.validate() {
            return bad(e.to_string());
        }
    }
    Ok(())
}

/// The 34 reference combinations in report order, ids 1 to 34. Each
/// config's seed is `seed + id`.
pub fn enumerate_table1(seed: u64) -> Vec<PipelineConfig> {
    use Normalization as N;
    use Selection as S;
    use Transformation as T;
    let chi2 = S::Chi2 { k: DEFAULT_CHI2_K };
    let neural_rows = [
        (N::MinMax, T::YeoJohnson, chi2),
        (N::MinMax, T::YeoJohnson, S::Rfecv),
        (N::MinMax, T::YeoJohnson, S::None),
        (N::MinMax, T::None, chi2),
        (N::MinMax, T::None, S::Rfecv),
        (N::MinMax, T::None, S::None),
        (N::ZScore, T::YeoJohnson, S::Rfecv),
        (N::ZScore, T::YeoJohnson, S::None),
        (N::ZScore, T::None, S::Rfecv),
        (N::ZScore, T::None, S::None),
        (N::None, T::YeoJohnson, S::None),
        (N::None, T::None, S::None),
    ];
    let boosting_rows = [
        (N::MinMax, T::YeoJohnson, chi2),
        (N::MinMax, T::YeoJohnson, S::Rfecv),
        (N::MinMax, T::YeoJohnson, S::None),
        (N::MinMax, T::None, chi2),
        (N::MinMax, T::None, S::Rfecv),
        (N::MinMax, T::None, S::None),
        (N::ZScore, T::YeoJohnson, S::None),
        (N::ZScore, T::None, S::None),
        (N::None, T::YeoJohnson, S::None),
        (N::None, T::None, S::None),
    ];
    let blocks = [
        (ModelKind::Lstm, &neural_rows[..]),
        (ModelKind::Autoencoder, &neural_rows[..]),
        (ModelKind::GBoost, &boosting_rows[..]),
    ];
    let mut out = Vec::with_capacity(34);
    for (model, rows) in blocks {
        for &(n, t, s) in rows {
            let id = out.len() as u32 + 1;
            let mut cfg = PipelineConfig::new(id, model, n, t, s);
            cfg.seed = seed.wrapping_add(u64::from(id));
            out.push(cfg);
        }
    }
    out
}
