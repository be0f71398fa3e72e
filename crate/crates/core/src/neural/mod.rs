//! Small from-scratch neural networks trained with Adam.
//!
//! Parameters of every network live in one flat, row-major `Vec<f64>` so
//! that the optimizer, the gradient checker and JSON persistence all see the
//! same layout. Forward and backward passes are hand-written; there is no
//! autodiff.

mod adam;
mod autoencoder;
mod gradcheck;
mod layers;
mod lstm;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use autoencoder::{
    ae_fit, ae_predict, ae_predict_with_threshold, ae_score, AEModel, AeConfig, AeShape,
};
pub use gradcheck::{
    gradcheck, gradcheck_autoencoder, gradcheck_dense, gradcheck_lstm, AutoencoderProbe,
    DenseProbe, Differentiable, LstmProbe, FD_STEP,
};
pub use layers::{bce, bce_with_logit};
pub use lstm::{
    lstm_cell_backward, lstm_cell_forward, lstm_fit, lstm_predict, lstm_predict_proba, CellCache,
    LstmConfig, LstmModel, LstmShape,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NeuralError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("autoencoder needs at least {needed} normal rows, got {got}")]
    TooFewNormals { needed: usize, got: usize },
    #[error("invalid training setup: {0}")]
    InvalidConfig(String),
}

/// Epoch and batch settings shared by both networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainSchedule {
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for TrainSchedule {
    fn default() -> Self {
        Self {
            epochs: 30,
            batch_size: 32,
        }
    }
}

impl TrainSchedule {
    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(NeuralError::InvalidConfig(
                "epochs and batch_size must be >= 1".into(),
            ));
        }
        Ok(())
    }
}
