//! Dense autoencoder detector: `n_in -> hidden (ReLU) -> n_in (sigmoid)`,
//! trained with binary cross-entropy on normal rows only. A row is flagged
//! anomalous when its mean reconstruction BCE exceeds the fitted threshold.
//!
//! Inputs are rescaled to `[0, 1]` with training min/max (clipped at apply
//! time) so that BCE targets are valid whatever scaling ran upstream.
//!
//! Parameter layout: `W1 [H x n] | b1 [H] | W2 [n x H] | b2 [n]`.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::layers::{bce_with_logit, dense_backward, dense_forward, glorot_uniform, sigmoid};
use super::{NeuralError, TrainSchedule};
use crate::ingest::Dataset;
use crate::matrix::Matrix;
use crate::metrics::{confusion, f1};
use crate::scale::{fit_minmax, MinMaxColumn};

pub const MIN_NORMAL_ROWS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AeShape {
    pub n_in: usize,
    pub hidden: usize,
}

impl AeShape {
    pub fn new(n_in: usize, hidden: usize) -> Self {
        Self { n_in, hidden }
    }

    pub fn w1_range(&self) -> Range<usize> {
        0..self.hidden * self.n_in
    }

    pub fn b1_range(&self) -> Range<usize> {
        let s = self.w1_range().end;
        s..s + self.hidden
    }

    pub fn w2_range(&self) -> Range<usize> {
        let s = self.b1_range().end;
        s..s + self.n_in * self.hidden
    }

    pub fn b2_range(&self) -> Range<usize> {
        let s = self.w2_range().end;
        s..s + self.n_in
    }

    pub fn n_params(&self) -> usize {
        self.b2_range().end
    }

    pub fn init_params(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut p = vec![0.0; self.n_params()];
        glorot_uniform(rng, self.n_in, self.hidden, &mut p[self.w1_range()]);
        glorot_uniform(rng, self.hidden, self.n_in, &mut p[self.w2_range()]);
        p
    }
}

struct Forward {
    pre_hidden: Vec<f64>,
    hidden: Vec<f64>,
    logits: Vec<f64>,
}

fn forward(shape: &AeShape, params: &[f64], x: &[f64]) -> Forward {
    let mut pre_hidden = vec![0.0; shape.hidden];
    dense_forward(
        &params[shape.w1_range()],
        &params[shape.b1_range()],
        x,
        &mut pre_hidden,
    );
    let hidden: Vec<f64> = pre_hidden.iter().map(|&a| a.max(0.0)).collect();
    let mut logits = vec![0.0; shape.n_in];
    dense_forward(
        &params[shape.w2_range()],
        &params[shape.b2_range()],
        &hidden,
        &mut logits,
    );
    Forward {
        pre_hidden,
        hidden,
        logits,
    }
}

/// Mean BCE over features between `x` and its reconstruction.
pub(crate) fn sample_loss(shape: &AeShape, params: &[f64], x: &[f64]) -> f64 {
    let f = forward(shape, params, x);
    x.iter()
        .zip(&f.logits)
        .map(|(&t, &z)| bce_with_logit(t, z))
        .sum::<f64>()
        / shape.n_in as f64
}

/// Reconstruction loss of one row; gradients scaled by `scale` are added to
/// `grads`.
pub(crate) fn sample_loss_and_grad(
    shape: &AeShape,
    params: &[f64],
    x: &[f64],
    scale: f64,
    grads: &mut [f64],
) -> f64 {
    let f = forward(shape, params, x);
    let n = shape.n_in as f64;
    let mut loss = 0.0;
    let d_logits: Vec<f64> = x
        .iter()
        .zip(&f.logits)
        .map(|(&t, &z)| {
            loss += bce_with_logit(t, z);
            scale * (sigmoid(z) - t) / n
        })
        .collect();

    let (head, tail) = grads.split_at_mut(shape.w2_range().start);
    let (dw2, db2) = tail.split_at_mut(shape.w2_range().len());
    let mut d_hidden = vec![0.0; shape.hidden];
    dense_backward(
        &params[shape.w2_range()],
        &f.hidden,
        &d_logits,
        dw2,
        db2,
        Some(&mut d_hidden),
    );
    for (d, &a) in d_hidden.iter_mut().zip(&f.pre_hidden) {
        if a <= 0.0 {
            *d = 0.0;
        }
    }
    let (dw1, db1) = head.split_at_mut(shape.w1_range().len());
    dense_backward(&params[shape.w1_range()], x, &d_hidden, dw1, db1, None);
    loss / n
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AeConfig {
    pub hidden: usize,
    /// Share of normal training rows held out for threshold selection.
    pub validation_fraction: f64,
    pub adam: AdamConfig,
}

impl Default for AeConfig {
    fn default() -> Self {
        Self {
            hidden: 16,
            validation_fraction: 0.2,
            adam: AdamConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AEModel {
    pub shape: AeShape,
    pub params: Vec<f64>,
    /// Per-feature affine map onto `[0, 1]` applied before the network.
    pub rescale: Vec<MinMaxColumn>,
    /// Rows scoring strictly above this are anomalous.
    pub threshold: f64,
    #[serde(default)]
    pub epoch_losses: Vec<f64>,
}

impl AEModel {
    fn rescale_row(&self, row: &[f64], out: &mut [f64]) {
        for ((o, &v), col) in out.iter_mut().zip(row).zip(&self.rescale) {
            let range = col.max - col.min;
            *o = if range > 0.0 {
                ((v - col.min) / range).clamp(0.0, 1.0)
            } else {
                0.0
            };
        }
    }

    fn rescaled(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            self.rescale_row(m.row(r), out.row_mut(r));
        }
        out
    }
}

/// Threshold maximizing F1 of `score > threshold` against `labels`.
///
/// Candidates are `-1` (everything positive), midpoints between consecutive
/// distinct scores, and the maximum score (nothing positive). Among equal F1
/// values the largest threshold wins.
pub(crate) fn best_f1_threshold(scores: &[f64], labels: &[u8]) -> f64 {
    let mut unique: Vec<f64> = scores.to_vec();
    unique.sort_by(f64::total_cmp);
    unique.dedup();
    let mut candidates = vec![-1.0];
    candidates.extend(unique.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if let Some(&last) = unique.last() {
        candidates.push(last);
    }
    let mut best = (f64::NEG_INFINITY, -1.0);
    for tau in candidates {
        let pred: Vec<u8> = scores.iter().map(|&s| u8::from(s > tau)).collect();
        let score = f1(&confusion(labels, &pred).expect("binary labels"));
        if score >= best.0 {
            best = (score, tau);
        }
    }
    best.1
}

pub fn ae_fit(
    train: &Dataset,
    cfg: &AeConfig,
    schedule: &TrainSchedule,
    seed: u64,
) -> Result<AEModel, NeuralError> {
    schedule.validate()?;
    if cfg.hidden == 0 || !(0.0..1.0).contains(&cfg.validation_fraction) {
        return Err(NeuralError::InvalidConfig(
            "hidden must be >= 1 and validation_fraction in [0, 1)".into(),
        ));
    }
    let mut normals = train.rows_with_label(0);
    if normals.len() < MIN_NORMAL_ROWS {
        return Err(NeuralError::TooFewNormals {
            needed: MIN_NORMAL_ROWS,
            got: normals.len(),
        });
    }
    let rescale = fit_minmax(train.features())
        .expect("non-empty training set")
        .columns;
    let shape = AeShape::new(train.n_cols(), cfg.hidden);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = AEModel {
        shape,
        params: shape.init_params(&mut rng),
        rescale,
        threshold: f64::INFINITY,
        epoch_losses: Vec::with_capacity(schedule.epochs),
    };
    let x = model.rescaled(train.features());

    normals.shuffle(&mut rng);
    let n_val = ((cfg.validation_fraction * normals.len() as f64).floor() as usize).max(1);
    let (val_normals, fit_normals) = normals.split_at(n_val);

    let mut adam = AdamState::new(model.params.len(), cfg.adam);
    let mut grads = vec![0.0; model.params.len()];
    let mut order = fit_normals.to_vec();
    for _ in 0..schedule.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(schedule.batch_size) {
            grads.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for &r in batch {
                epoch_loss +=
                    sample_loss_and_grad(&shape, &model.params, x.row(r), scale, &mut grads);
            }
            adam.step(&mut model.params, &grads)?;
        }
        model.epoch_losses.push(epoch_loss / order.len() as f64);
    }

    let mut thr_rows = val_normals.to_vec();
    thr_rows.extend(train.rows_with_label(1));
    let scores: Vec<f64> = thr_rows
        .iter()
        .map(|&r| sample_loss(&shape, &model.params, x.row(r)))
        .collect();
    let labels: Vec<u8> = thr_rows.iter().map(|&r| train.labels()[r]).collect();
    model.threshold = best_f1_threshold(&scores, &labels);
    Ok(model)
}

/// Mean BCE reconstruction error per row.
pub fn ae_score(model: &AEModel, rows: &Matrix) -> Result<Vec<f64>, NeuralError> {
    if rows.cols() != model.shape.n_in {
        return Err(NeuralError::ShapeMismatch {
            expected: model.shape.n_in,
            got: rows.cols(),
        });
    }
    let x = model.rescaled(rows);
    Ok(x.iter_rows()
        .map(|row| sample_loss(&model.shape, &model.params, row))
        .collect())
}

pub fn ae_predict_with_threshold(
    model: &AEModel,
    rows: &Matrix,
    threshold: f64,
) -> Result<Vec<u8>, NeuralError> {
    Ok(ae_score(model, rows)?
        .into_iter()
        .map(|s| u8::from(s > threshold))
        .collect())
}

pub fn ae_predict(model: &AEModel, rows: &Matrix) -> Result<Vec<u8>, NeuralError> {
    ae_predict_with_threshold(model, rows, model.threshold)
}
