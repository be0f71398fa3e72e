use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{validate, ModelKind, Normalization, PipelineConfig, Selection, Transformation};
use crate::error::Result;
use crate::gboost::{gboost_fit, gboost_predict, GBoostModel};
use crate::ingest::{Dataset, SplitPair};
use crate::matrix::Matrix;
use crate::metrics::{confusion, Scores};
use crate::neural::{ae_fit, ae_predict, lstm_fit, lstm_predict, AEModel, LstmModel};
use crate::scale::{fit_minmax, fit_yeojohnson, fit_zscore, ScalerParams};
use crate::select::{chi2_select, rfecv, FeatureMask, RfecvConfig, RfecvReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    GBoost(GBoostModel),
    Lstm(LstmModel),
    Autoencoder(AEModel),
}

/// Everything fitted on the training split, in application order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPipeline {
    pub scalers: Vec<ScalerParams>,
    pub mask: FeatureMask,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rfecv_report: Option<RfecvReport>,
    pub model: TrainedModel,
}

impl FittedPipeline {
    pub fn transform(&self, m: &Matrix) -> Result<Matrix> {
        let mut x = m.clone();
        for s in &self.scalers {
            x = s.apply(&x)?;
        }
        Ok(self.mask.apply(&x))
    }

    pub fn predict(&self, m: &Matrix) -> Result<Vec<u8>> {
        let x = self.transform(m)?;
        Ok(match &self.model {
            TrainedModel::GBoost(model) => gboost_predict(model, &x, 0.5)?,
            TrainedModel::Lstm(model) => lstm_predict(model, &x)?,
            TrainedModel::Autoencoder(model) => ae_predict(model, &x)?,
        })
    }

    /// SHA-256 of the JSON-serialized fitted state.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("fitted state serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Fits normalization, transformation, selection and the model on `train`,
/// strictly in that order.
pub fn fit_pipeline(config: &PipelineConfig, train: &Dataset) -> Result<FittedPipeline> {
    validate(config)?;
    let h = &config.hyperparameters;
    let mut x = train.features().clone();
    let mut scalers = Vec::new();
    let normalization = match config.normalization {
        Normalization::MinMax => Some(ScalerParams::MinMax(fit_minmax(&x)?)),
        Normalization::ZScore => Some(ScalerParams::ZScore(fit_zscore(&x)?)),
        Normalization::None => None,
    };
    if let Some(s) = normalization {
        x = s.apply(&x)?;
        scalers.push(s);
    }
    if config.transformation == Transformation::YeoJohnson {
        let s = ScalerParams::YeoJohnson(fit_yeojohnson(&x)?);
        x = s.apply(&x)?;
        scalers.push(s);
    }
    let prepared = train.with_features(x)?;

    let (mask, rfecv_report) = match config.selection {
        Selection::Chi2 { k } => (
            chi2_select(prepared.features(), prepared.labels(), k)?,
            None,
        ),
        Selection::Rfecv => {
            let cfg = RfecvConfig {
                seed: config.seed,
                ..h.rfecv.clone()
            };
            let (mask, report) = rfecv(&prepared, &cfg)?;
            (mask, Some(report))
        }
        Selection::None => (FeatureMask::all(prepared.n_cols()), None),
    };
    let selected = mask.apply_dataset(&prepared);

    let model = match config.model {
        ModelKind::GBoost => {
            let mut cfg = h.gboost.clone();
            cfg.seed = config.seed;
            TrainedModel::GBoost(gboost_fit(&selected, &cfg)?)
        }
        ModelKind::Lstm => {
            TrainedModel::Lstm(lstm_fit(&selected, &h.lstm, &h.schedule, config.seed)?)
        }
        ModelKind::Autoencoder => {
            TrainedModel::Autoencoder(ae_fit(&selected, &h.autoencoder, &h.schedule, config.seed)?)
        }
    };
    Ok(FittedPipeline {
        scalers,
        mask,
        rfecv_report,
        model,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: PipelineConfig,
    pub n_features_used: Option<usize>,
    /// Test-set metrics; present iff the run succeeded.
    pub scores: Option<Scores>,
    pub fit_seconds: f64,
    pub predict_seconds: f64,
    pub status: RunStatus,
    /// Digest of all fitted state, independent of the test split.
    pub fitted_digest: Option<String>,
}

impl ExperimentResult {
    fn not_run(config: &PipelineConfig, status: RunStatus, fit_seconds: f64) -> Self {
        Self {
            config: config.clone(),
            n_features_used: None,
            scores: None,
            fit_seconds,
            predict_seconds: 0.0,
            status,
            fitted_digest: None,
        }
    }
}

/// Fits on `data.train`, evaluates on `data.test`. Errors never escape:
/// invalid configs are reported as skipped and stage failures as failed.
pub fn run_pipeline(config: &PipelineConfig, data: &SplitPair) -> ExperimentResult {
    if let Err(e) = validate(config) {
        return ExperimentResult::not_run(config, RunStatus::Skipped(e.to_string()), 0.0);
    }
    let start = Instant::now();
    let fitted = match fit_pipeline(config, &data.train) {
        Ok(f) => f,
        Err(e) => {
            let elapsed = start.elapsed().as_secs_f64();
            return ExperimentResult::not_run(config, RunStatus::Failed(e.to_string()), elapsed);
        }
    };
    let fit_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let evaluated = fitted
        .predict(data.test.features())
        .and_then(|pred| Ok(confusion(data.test.labels(), &pred)?));
    let predict_seconds = start.elapsed().as_secs_f64();
    match evaluated {
        Ok(cm) => ExperimentResult {
            config: config.clone(),
            n_features_used: Some(fitted.mask.len()),
            scores: Some(Scores::from(&cm)),
            fit_seconds,
            predict_seconds,
            status: RunStatus::Ok,
            fitted_digest: Some(fitted.digest()),
        },
        Err(e) => ExperimentResult::not_run(config, RunStatus::Failed(e.to_string()), fit_seconds),
    }
}

/// Runs every config against the same split. Results come back in input
/// order whatever the degree of parallelism.
pub fn run_matrix(
    configs: &[PipelineConfig],
    data: &SplitPair,
    parallelism: usize,
) -> Vec<ExperimentResult> {
    if parallelism <= 1 {
        return configs.iter().map(|c| run_pipeline(c, data)).collect();
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
    {
        Ok(pool) => pool.install(|| configs.par_iter().map(|c| run_pipeline(c, data)).collect()),
        Err(_) => configs.iter().map(|c| run_pipeline(c, data)).collect(),
    }
}
