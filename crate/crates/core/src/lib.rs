//! Multi-step anomaly detection benchmark for IoT network flows.
//!
//! The crate is organised as a pipeline of independent stages, each of which
//! fits its state on a training split only and can then be applied anywhere:
//!
//! - [`ingest`]: CSV parsing, cleaning, 80/20 splitting and synthetic data
//! - [`scale`]: min-max, z-score and Yeo-Johnson with per-feature lambda fitting
//! - [`select`]: chi-squared top-k and recursive feature elimination with CV
//! - [`gboost`]: gradient-boosted regression trees on the logistic loss
//! - [`neural`]: Adam, an LSTM classifier and a dense autoencoder, plus a
//!   finite-difference gradient checker
//! - [`metrics`]: confusion-matrix metrics with anomaly as the positive class
//! - [`bench`]: the 34-row experiment matrix, the pipeline runner and reports
//!
//! See the `examples/` directory of this crate for one runnable program per
//! stage.

pub mod bench;
pub mod error;
pub mod gboost;
pub mod ingest;
pub mod matrix;
pub mod metrics;
pub mod neural;
pub mod scale;
pub mod select;

pub use error::{Error, Result};
pub use ingest::{Dataset, SplitPair, SyntheticSpec};
pub use matrix::Matrix;
