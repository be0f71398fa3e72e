use rand::Rng;

/// `ln(1 + e^z)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    crate::gboost::sigmoid(z)
}

/// Binary cross-entropy of a sigmoid output given its logit `z`:
/// `-(t ln s(z) + (1 - t) ln(1 - s(z)))`, computed without forming `s(z)`.
#[inline]
pub fn bce_with_logit(target: f64, z: f64) -> f64 {
    softplus(z) - target * z
}

/// Binary cross-entropy between a target in `[0, 1]` and a probability.
/// Probabilities are clamped away from 0 and 1.
pub fn bce(target: f64, prob: f64) -> f64 {
    let p = prob.clamp(1e-15, 1.0 - 1e-15);
    -(target * p.ln() + (1.0 - target) * (1.0 - p).ln())
}

/// Fills `out` from `uniform(-s, s)` with `s = sqrt(6 / (fan_in + fan_out))`.
pub(crate) fn glorot_uniform(rng: &mut impl Rng, fan_in: usize, fan_out: usize, out: &mut [f64]) {
    let s = (6.0 / (fan_in + fan_out) as f64).sqrt();
    for v in out {
        *v = rng.random_range(-s..s);
    }
}

/// `out = W x + b` with `W` stored row-major as `out.len() x x.len()`.
pub(crate) fn dense_forward(w: &[f64], b: &[f64], x: &[f64], out: &mut [f64]) {
    let n_in = x.len();
    for (o, (row, bias)) in out.iter_mut().zip(w.chunks_exact(n_in).zip(b)) {
        *o = bias + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

/// Accumulates `dW += dout x^T`, `db += dout` and, if requested,
/// `dx += W^T dout`.
pub(crate) fn dense_backward(
    w: &[f64],
    x: &[f64],
    dout: &[f64],
    dw: &mut [f64],
    db: &mut [f64],
    dx: Option<&mut [f64]>,
) {
    let n_in = x.len();
    for (j, &d) in dout.iter().enumerate() {
        db[j] += d;
        for (g, &xi) in dw[j * n_in..(j + 1) * n_in].iter_mut().zip(x) {
            *g += d * xi;
        }
    }
    if let Some(dx) = dx {
        for (j, &d) in dout.iter().enumerate() {
            for (g, &wji) in dx.iter_mut().zip(&w[j * n_in..(j + 1) * n_in]) {
                *g += d * wji;
            }
        }
    }
}
