//! Central finite-difference gradient checking.
//!
//! Each probe wraps a tiny network plus a fixed batch, and exposes the same
//! forward/backward code the trainers use. [`gradcheck`] compares the
//! analytic gradient against `(L(p + h) - L(p - h)) / 2h` for every
//! parameter and reports the worst relative error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::autoencoder::{sample_loss, sample_loss_and_grad, AeShape};
use super::layers::{bce_with_logit, dense_backward, dense_forward, sigmoid};
use super::lstm::{sequence_loss, sequence_loss_and_grad, LstmShape};

pub const FD_STEP: f64 = 1e-5;

/// A scalar loss over a flat parameter vector with an analytic gradient.
pub trait Differentiable {
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];
    fn loss(&self) -> f64;
    fn loss_and_grad(&self) -> (f64, Vec<f64>);
}

/// Max over parameters of `|analytic - numeric| / max(1e-8, |numeric|)`.
pub fn gradcheck<D: Differentiable>(net: &mut D, step: f64) -> f64 {
    let (_, analytic) = net.loss_and_grad();
    let mut worst = 0.0f64;
    for (i, &a) in analytic.iter().enumerate() {
        let original = net.params()[i];
        net.params_mut()[i] = original + step;
        let up = net.loss();
        net.params_mut()[i] = original - step;
        let down = net.loss();
        net.params_mut()[i] = original;
        let numeric = (up - down) / (2.0 * step);
        let rel = (a - numeric).abs() / numeric.abs().max(1e-8);
        worst = worst.max(rel);
    }
    worst
}

const PROBE_SAMPLES: usize = 8;

fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Dense layer with sigmoid outputs and mean BCE against binary targets.
#[derive(Debug, Clone)]
pub struct DenseProbe {
    pub n_in: usize,
    pub n_out: usize,
    pub params: Vec<f64>,
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
}

impl DenseProbe {
    pub fn random(seed: u64, n_in: usize, n_out: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = uniform_vec(&mut rng, n_out * n_in + n_out, -1.0, 1.0);
        let inputs = (0..PROBE_SAMPLES)
            .map(|_| uniform_vec(&mut rng, n_in, -1.0, 1.0))
            .collect();
        let targets = (0..PROBE_SAMPLES)
            .map(|_| {
                (0..n_out)
                    .map(|_| f64::from(rng.random::<bool>()))
                    .collect()
            })
            .collect();
        Self {
            n_in,
            n_out,
            params,
            inputs,
            targets,
        }
    }

    fn split(&self) -> (&[f64], &[f64]) {
        self.params.split_at(self.n_out * self.n_in)
    }

    fn scale(&self) -> f64 {
        1.0 / (self.inputs.len() * self.n_out) as f64
    }
}

impl Differentiable for DenseProbe {
    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn loss(&self) -> f64 {
        let (w, b) = self.split();
        let mut z = vec![0.0; self.n_out];
        let mut total = 0.0;
        for (x, t) in self.inputs.iter().zip(&self.targets) {
            dense_forward(w, b, x, &mut z);
            total += t
                .iter()
                .zip(&z)
                .map(|(&t, &z)| bce_with_logit(t, z))
                .sum::<f64>();
        }
        total * self.scale()
    }

    fn loss_and_grad(&self) -> (f64, Vec<f64>) {
        let (w, b) = self.split();
        let mut grads = vec![0.0; self.params.len()];
        let (dw, db) = grads.split_at_mut(self.n_out * self.n_in);
        let mut z = vec![0.0; self.n_out];
        let mut total = 0.0;
        for (x, t) in self.inputs.iter().zip(&self.targets) {
            dense_forward(w, b, x, &mut z);
            total += t
                .iter()
                .zip(&z)
                .map(|(&t, &z)| bce_with_logit(t, z))
                .sum::<f64>();
            let dz: Vec<f64> = t
                .iter()
                .zip(&z)
                .map(|(&t, &z)| self.scale() * (sigmoid(z) - t))
                .collect();
            dense_backward(w, x, &dz, dw, db, None);
        }
        (total * self.scale(), grads)
    }
}

/// Autoencoder over inputs in `[0, 1]` with mean reconstruction BCE.
#[derive(Debug, Clone)]
pub struct AutoencoderProbe {
    pub shape: AeShape,
    pub params: Vec<f64>,
    pub inputs: Vec<Vec<f64>>,
}

impl AutoencoderProbe {
    pub fn random(seed: u64, n_in: usize, hidden: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = AeShape::new(n_in, hidden);
        let params = uniform_vec(&mut rng, shape.n_params(), -1.0, 1.0);
        let inputs = (0..PROBE_SAMPLES)
            .map(|_| uniform_vec(&mut rng, n_in, 0.0, 1.0))
            .collect();
        Self {
            shape,
            params,
            inputs,
        }
    }
}

impl Differentiable for AutoencoderProbe {
    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn loss(&self) -> f64 {
        let scale = 1.0 / self.inputs.len() as f64;
        self.inputs
            .iter()
            .map(|x| sample_loss(&self.shape, &self.params, x))
            .sum::<f64>()
            * scale
    }

    fn loss_and_grad(&self) -> (f64, Vec<f64>) {
        let scale = 1.0 / self.inputs.len() as f64;
        let mut grads = vec![0.0; self.params.len()];
        let loss = self
            .inputs
            .iter()
            .map(|x| sample_loss_and_grad(&self.shape, &self.params, x, scale, &mut grads))
            .sum::<f64>();
        (loss * scale, grads)
    }
}

/// LSTM classifier over fixed-length sequences, gradients by BPTT.
#[derive(Debug, Clone)]
pub struct LstmProbe {
    pub shape: LstmShape,
    pub params: Vec<f64>,
    pub sequences: Vec<Vec<Vec<f64>>>,
    pub labels: Vec<f64>,
}

impl LstmProbe {
    pub fn random(seed: u64, n_in: usize, hidden: usize, seq_len: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = LstmShape::new(n_in, hidden);
        let params = uniform_vec(&mut rng, shape.n_params(), -1.0, 1.0);
        let sequences = (0..PROBE_SAMPLES)
            .map(|_| {
                (0..seq_len)
                    .map(|_| uniform_vec(&mut rng, n_in, -1.0, 1.0))
                    .collect()
            })
            .collect();
        let labels = (0..PROBE_SAMPLES)
            .map(|_| f64::from(rng.random::<bool>()))
            .collect();
        Self {
            shape,
            params,
            sequences,
            labels,
        }
    }

    fn windows(&self) -> impl Iterator<Item = (Vec<&[f64]>, f64)> {
        self.sequences
            .iter()
            .map(|s| s.iter().map(Vec::as_slice).collect())
            .zip(self.labels.iter().copied())
    }
}

impl Differentiable for LstmProbe {
    fn params(&self) -> &[f64] {
        &self.params
    }

    fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn loss(&self) -> f64 {
        let scale = 1.0 / self.labels.len() as f64;
        self.windows()
            .map(|(w, y)| sequence_loss(&self.shape, &self.params, &w, y))
            .sum::<f64>()
            * scale
    }

    fn loss_and_grad(&self) -> (f64, Vec<f64>) {
        let scale = 1.0 / self.labels.len() as f64;
        let mut grads = vec![0.0; self.params.len()];
        let loss = self
            .windows()
            .map(|(w, y)| {
                sequence_loss_and_grad(&self.shape, &self.params, &w, y, None, scale, &mut grads)
            })
            .sum::<f64>();
        (loss * scale, grads)
    }
}

/// Gradient check of a 5-input, 3-output dense sigmoid layer.
pub fn gradcheck_dense(seed: u64) -> f64 {
    gradcheck(&mut DenseProbe::random(seed, 5, 3), FD_STEP)
}

/// Gradient check of a 5 -> 4 -> 5 autoencoder.
pub fn gradcheck_autoencoder(seed: u64) -> f64 {
    gradcheck(&mut AutoencoderProbe::random(seed, 5, 4), FD_STEP)
}

/// Gradient check of a 3-input, 4-unit LSTM classifier over `seq_len` steps.
pub fn gradcheck_lstm(seed: u64, seq_len: usize) -> f64 {
    gradcheck(&mut LstmProbe::random(seed, 3, 4, seq_len), FD_STEP)
}
