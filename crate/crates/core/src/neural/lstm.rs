//! Single-layer LSTM classifier: an LSTM over a window of consecutive rows,
//! inverted dropout on the final hidden state, then a dense sigmoid output.
//!
//! Parameter layout (row-major, gate order input, forget, candidate, output):
//! `W [4H x I] | U [4H x H] | b [4H] | w_out [H] | b_out [1]`.

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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LstmShape {
    pub input_size: usize,
    pub hidden_size: usize,
}

impl LstmShape {
    pub fn new(input_size: usize, hidden_size: usize) -> Self {
        Self {
            input_size,
            hidden_size,
        }
    }

    fn gates(&self) -> usize {
        4 * self.hidden_size
    }

    pub fn w_range(&self) -> Range<usize> {
        0..self.gates() * self.input_size
    }

    pub fn u_range(&self) -> Range<usize> {
        let start = self.w_range().end;
        start..start + self.gates() * self.hidden_size
    }

    pub fn b_range(&self) -> Range<usize> {
        let start = self.u_range().end;
        start..start + self.gates()
    }

    pub fn out_w_range(&self) -> Range<usize> {
        let start = self.b_range().end;
        start..start + self.hidden_size
    }

    pub fn out_b_range(&self) -> Range<usize> {
        let start = self.out_w_range().end;
        start..start + 1
    }

    pub fn n_params(&self) -> usize {
        self.out_b_range().end
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init_params(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut p = vec![0.0; self.n_params()];
        let (i, h) = (self.input_size, self.hidden_size);
        glorot_uniform(rng, i, 4 * h, &mut p[self.w_range()]);
        glorot_uniform(rng, h, 4 * h, &mut p[self.u_range()]);
        glorot_uniform(rng, h, 1, &mut p[self.out_w_range()]);
        p
    }
}

/// Activations saved by [`lstm_cell_forward`] for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCache {
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    pub input_gate: Vec<f64>,
    pub forget_gate: Vec<f64>,
    pub candidate: Vec<f64>,
    pub output_gate: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

/// One LSTM step. Returns `(h_t, c_t, cache)`.
pub fn lstm_cell_forward(
    shape: &LstmShape,
    params: &[f64],
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
) -> (Vec<f64>, Vec<f64>, CellCache) {
    let h = shape.hidden_size;
    let mut pre = vec![0.0; 4 * h];
    dense_forward(
        &params[shape.w_range()],
        &params[shape.b_range()],
        x,
        &mut pre,
    );
    let u = &params[shape.u_range()];
    for (k, a) in pre.iter_mut().enumerate() {
        *a += u[k * h..(k + 1) * h]
            .iter()
            .zip(h_prev)
            .map(|(w, v)| w * v)
            .sum::<f64>();
    }
    let input_gate: Vec<f64> = pre[..h].iter().map(|&a| sigmoid(a)).collect();
    let forget_gate: Vec<f64> = pre[h..2 * h].iter().map(|&a| sigmoid(a)).collect();
    let candidate: Vec<f64> = pre[2 * h..3 * h].iter().map(|a| a.tanh()).collect();
    let output_gate: Vec<f64> = pre[3 * h..].iter().map(|&a| sigmoid(a)).collect();

    let c: Vec<f64> = (0..h)
        .map(|j| forget_gate[j] * c_prev[j] + input_gate[j] * candidate[j])
        .collect();
    let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
    let h_t: Vec<f64> = (0..h).map(|j| output_gate[j] * tanh_c[j]).collect();
    let cache = CellCache {
        x: x.to_vec(),
        h_prev: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        input_gate,
        forget_gate,
        candidate,
        output_gate,
        tanh_c,
    };
    (h_t, c, cache)
}

/// Backward pass of one step given upstream `dh` and `dc`. Accumulates
/// parameter gradients into `grads` (full model layout) and returns
/// `(dh_prev, dc_prev)`.
pub fn lstm_cell_backward(
    shape: &LstmShape,
    params: &[f64],
    cache: &CellCache,
    dh: &[f64],
    dc: &[f64],
    grads: &mut [f64],
) -> (Vec<f64>, Vec<f64>) {
    let h = shape.hidden_size;
    let mut d_pre = vec![0.0; 4 * h];
    let mut dc_prev = vec![0.0; h];
    for j in 0..h {
        let (i, f, g, o) = (
            cache.input_gate[j],
            cache.forget_gate[j],
            cache.candidate[j],
            cache.output_gate[j],
        );
        let tc = cache.tanh_c[j];
        let dc_total = dc[j] + dh[j] * o * (1.0 - tc * tc);
        d_pre[j] = dc_total * g * i * (1.0 - i);
        d_pre[h + j] = dc_total * cache.c_prev[j] * f * (1.0 - f);
        d_pre[2 * h + j] = dc_total * i * (1.0 - g * g);
        d_pre[3 * h + j] = dh[j] * tc * o * (1.0 - o);
        dc_prev[j] = dc_total * f;
    }

    let (w_r, u_r, b_r) = (shape.w_range(), shape.u_range(), shape.b_range());
    let (head, tail) = grads.split_at_mut(u_r.start);
    let (du, rest) = tail.split_at_mut(u_r.len());
    let db = &mut rest[..b_r.len()];
    dense_backward(
        &params[w_r.clone()],
        &cache.x,
        &d_pre,
        &mut head[w_r],
        db,
        None,
    );
    // the U product shares the bias with W, so its bias gradient is discarded
    let mut unused_db = vec![0.0; b_r.len()];
    let mut dh_prev = vec![0.0; h];
    dense_backward(
        &params[u_r],
        &cache.h_prev,
        &d_pre,
        du,
        &mut unused_db,
        Some(&mut dh_prev),
    );
    (dh_prev, dc_prev)
}

/// Runs the LSTM over `window` and returns the logit, the per-step caches
/// and the final hidden state.
fn sequence_forward(
    shape: &LstmShape,
    params: &[f64],
    window: &[&[f64]],
    dropout_mask: Option<&[f64]>,
) -> (f64, Vec<CellCache>, Vec<f64>) {
    let h = shape.hidden_size;
    let mut h_t = vec![0.0; h];
    let mut c_t = vec![0.0; h];
    let mut caches = Vec::with_capacity(window.len());
    for x in window {
        let (nh, nc, cache) = lstm_cell_forward(shape, params, x, &h_t, &c_t);
        h_t = nh;
        c_t = nc;
        caches.push(cache);
    }
    if let Some(mask) = dropout_mask {
        h_t.iter_mut().zip(mask).for_each(|(v, m)| *v *= m);
    }
    let mut logit = [0.0];
    dense_forward(
        &params[shape.out_w_range()],
        &params[shape.out_b_range()],
        &h_t,
        &mut logit,
    );
    (logit[0], caches, h_t)
}

/// BCE loss of one labelled window; gradients scaled by `scale` are added
/// to `grads`.
pub(crate) fn sequence_loss_and_grad(
    shape: &LstmShape,
    params: &[f64],
    window: &[&[f64]],
    label: f64,
    dropout_mask: Option<&[f64]>,
    scale: f64,
    grads: &mut [f64],
) -> f64 {
    let h = shape.hidden_size;
    let (logit, caches, h_out) = sequence_forward(shape, params, window, dropout_mask);
    let loss = bce_with_logit(label, logit);
    let d_logit = [scale * (sigmoid(logit) - label)];

    let mut dh = vec![0.0; h];
    {
        let ow = shape.out_w_range();
        let ob = shape.out_b_range();
        let (head, tail) = grads.split_at_mut(ob.start);
        dense_backward(
            &params[ow.clone()],
            &h_out,
            &d_logit,
            &mut head[ow],
            &mut tail[..1],
            Some(&mut dh),
        );
    }
    if let Some(mask) = dropout_mask {
        dh.iter_mut().zip(mask).for_each(|(v, m)| *v *= m);
    }
    let mut dc = vec![0.0; h];
    for cache in caches.iter().rev() {
        let (dh_prev, dc_prev) = lstm_cell_backward(shape, params, cache, &dh, &dc, grads);
        dh = dh_prev;
        dc = dc_prev;
    }
    loss
}

pub(crate) fn sequence_loss(
    shape: &LstmShape,
    params: &[f64],
    window: &[&[f64]],
    label: f64,
) -> f64 {
    let (logit, _, _) = sequence_forward(shape, params, window, None);
    bce_with_logit(label, logit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LstmConfig {
    pub hidden_size: usize,
    pub dropout_rate: f64,
    /// Consecutive rows per sequence; the label is the last row's label.
    pub window_size: usize,
    pub adam: AdamConfig,
}

impl Default for LstmConfig {
    fn default() -> Self {
        Self {
            hidden_size: 32,
            dropout_rate: 0.2,
            window_size: 1,
            adam: AdamConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmModel {
    pub shape: LstmShape,
    pub window_size: usize,
    pub dropout_rate: f64,
    pub params: Vec<f64>,
    /// Mean training loss per epoch (with dropout active).
    #[serde(default)]
    pub epoch_losses: Vec<f64>,
}

/// Window ending at row `r`; rows before the start of the data repeat row 0.
fn window_at(m: &Matrix, r: usize, w: usize) -> Vec<&[f64]> {
    (0..w)
        .map(|k| m.row((r + k + 1).saturating_sub(w)))
        .collect()
}

pub fn lstm_fit(
    train: &Dataset,
    cfg: &LstmConfig,
    schedule: &TrainSchedule,
    seed: u64,
) -> Result<LstmModel, NeuralError> {
    schedule.validate()?;
    if cfg.window_size == 0 || cfg.hidden_size == 0 {
        return Err(NeuralError::InvalidConfig(
            "window_size and hidden_size must be >= 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&cfg.dropout_rate) {
        return Err(NeuralError::InvalidConfig(format!(
            "dropout_rate {} outside [0, 1)",
            cfg.dropout_rate
        )));
    }
    if !train.has_both_classes() {
        return Err(NeuralError::SingleClass);
    }
    let x = train.features();
    let y = train.labels();
    let shape = LstmShape::new(x.cols(), cfg.hidden_size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = shape.init_params(&mut rng);
    let mut adam = AdamState::new(params.len(), cfg.adam);
    let mut grads = vec![0.0; params.len()];
    let keep = 1.0 - cfg.dropout_rate;
    let mut mask = vec![1.0; cfg.hidden_size];
    let mut order: Vec<usize> = (0..x.rows()).collect();
    let mut epoch_losses = Vec::with_capacity(schedule.epochs);

    for _ in 0..schedule.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(schedule.batch_size) {
            grads.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for &r in batch {
                for m in mask.iter_mut() {
                    *m = if cfg.dropout_rate > 0.0 && rng.random::<f64>() >= keep {
                        0.0
                    } else {
                        1.0 / keep
                    };
                }
                let window = window_at(x, r, cfg.window_size);
                epoch_loss += sequence_loss_and_grad(
                    &shape,
                    &params,
                    &window,
                    f64::from(y[r]),
                    Some(&mask),
                    scale,
                    &mut grads,
                );
            }
            adam.step(&mut params, &grads)?;
        }
        epoch_losses.push(epoch_loss / x.rows() as f64);
    }

    Ok(LstmModel {
        shape,
        window_size: cfg.window_size,
        dropout_rate: cfg.dropout_rate,
        params,
        epoch_losses,
    })
}

/// Positive-class probability per row (dropout disabled).
pub fn lstm_predict_proba(model: &LstmModel, m: &Matrix) -> Result<Vec<f64>, NeuralError> {
    if m.cols() != model.shape.input_size {
        return Err(NeuralError::ShapeMismatch {
            expected: model.shape.input_size,
            got: m.cols(),
        });
    }
    Ok((0..m.rows())
        .map(|r| {
            let window = window_at(m, r, model.window_size);
            let (logit, _, _) = sequence_forward(&model.shape, &model.params, &window, None);
            sigmoid(logit)
        })
        .collect())
}

pub fn lstm_predict(model: &LstmModel, m: &Matrix) -> Result<Vec<u8>, NeuralError> {
    Ok(lstm_predict_proba(model, m)?
        .into_iter()
        .map(|p| u8::from(p >= 0.5))
        .collect())
}
