//! Fit-on-train, apply-anywhere feature scaling.
//!
//! Three scalers are provided: min-max rescaling onto the training range,
//! z-score standardization (population standard deviation), and the
//! Yeo-Johnson power transform with one lambda per feature chosen by
//! maximizing the Gaussian profile log-likelihood.
//!
//! Constant training columns never produce NaN: min-max and z-score map
//! them to 0 and Yeo-Johnson uses lambda = 1. Out-of-range test values are
//! never clipped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot fit on an empty matrix")]
    EmptyInput,
    #[error("column is constant")]
    ConstantColumn,
}

fn check_cols(expected: usize, m: &Matrix) -> Result<(), ScaleError> {
    if m.cols() != expected {
        return Err(ScaleError::DimensionMismatch {
            expected,
            got: m.cols(),
        });
    }
    Ok(())
}

fn check_non_empty(m: &Matrix) -> Result<(), ScaleError> {
    if m.rows() == 0 {
        return Err(ScaleError::EmptyInput);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxColumn {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MinMaxParams {
    pub columns: Vec<MinMaxColumn>,
}

pub fn fit_minmax(train: &Matrix) -> Result<MinMaxParams, ScaleError> {
    check_non_empty(train)?;
    let mut columns = vec![
        MinMaxColumn {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        };
        train.cols()
    ];
    for row in train.iter_rows() {
        for (col, &v) in columns.iter_mut().zip(row) {
            col.min = col.min.min(v);
            col.max = col.max.max(v);
        }
    }
    Ok(MinMaxParams { columns })
}

pub fn apply_minmax(p: &MinMaxParams, m: &Matrix) -> Result<Matrix, ScaleError> {
    check_cols(p.columns.len(), m)?;
    Ok(m.map_columns(|c, x| {
        let MinMaxColumn { min, max } = p.columns[c];
        let range = max - min;
        if range > 0.0 {
            (x - min) / range
        } else {
            0.0
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScoreColumn {
    pub mean: f64,
    /// Population standard deviation (divides by N).
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZScoreParams {
    pub columns: Vec<ZScoreColumn>,
}

fn mean_and_population_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn fit_zscore(train: &Matrix) -> Result<ZScoreParams, ScaleError> {
    check_non_empty(train)?;
    let columns = (0..train.cols())
        .map(|c| {
            let (mean, std) = mean_and_population_std(&train.column(c));
            ZScoreColumn { mean, std }
        })
        .collect();
    Ok(ZScoreParams { columns })
}

pub fn apply_zscore(p: &ZScoreParams, m: &Matrix) -> Result<Matrix, ScaleError> {
    check_cols(p.columns.len(), m)?;
    Ok(m.map_columns(|c, x| {
        let ZScoreColumn { mean, std } = p.columns[c];
        if std > 0.0 {
            (x - mean) / std
        } else {
            0.0
        }
    }))
}

/// Below this distance from 0 (x >= 0) or 2 (x < 0) the logarithmic branch
/// of Yeo-Johnson is used.
const YJ_BRANCH_EPS: f64 = 1e-8;

pub const LAMBDA_MIN: f64 = -5.0;
pub const LAMBDA_MAX: f64 = 5.0;
pub const LAMBDA_TOL: f64 = 1e-4;

/// The four-branch Yeo-Johnson transform of a single value.
pub fn yj_value(x: f64, lambda: f64) -> f64 {
    if x >= 0.0 {
        if lambda.abs() < YJ_BRANCH_EPS {
            x.ln_1p()
        } else {
            ((x + 1.0).powf(lambda) - 1.0) / lambda
        }
    } else {
        let mirrored = 2.0 - lambda;
        if mirrored.abs() < YJ_BRANCH_EPS {
            -(-x).ln_1p()
        } else {
            -((1.0 - x).powf(mirrored) - 1.0) / mirrored
        }
    }
}

/// Gaussian profile log-likelihood of a column after transforming with
/// `lambda`, up to an additive constant:
/// `-(n/2) ln(var(y)) + (lambda - 1) * sum(sign(x) ln(|x| + 1))`.
pub fn yj_log_likelihood(column: &[f64], lambda: f64) -> Result<f64, ScaleError> {
    if column.is_empty() {
        return Err(ScaleError::EmptyInput);
    }
    let first = column[0];
    if column.iter().all(|&x| x == first) {
        return Err(ScaleError::ConstantColumn);
    }
    let n = column.len() as f64;
    let transformed: Vec<f64> = column.iter().map(|&x| yj_value(x, lambda)).collect();
    let (_, std) = mean_and_population_std(&transformed);
    let var = std * std;
    if var <= 0.0 {
        return Err(ScaleError::ConstantColumn);
    }
    let jacobian: f64 = column.iter().map(|&x| x.signum() * x.abs().ln_1p()).sum();
    Ok(-0.5 * n * var.ln() + (lambda - 1.0) * jacobian)
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Maximum-likelihood lambda for one column; constant columns get 1.
pub fn fit_lambda(column: &[f64]) -> f64 {
    if yj_log_likelihood(column, 1.0) == Err(ScaleError::ConstantColumn) {
        return 1.0;
    }
    let objective = |lambda: f64| match yj_log_likelihood(column, lambda) {
        Ok(ll) if ll.is_finite() => ll,
        _ => f64::NEG_INFINITY,
    };
    golden_section_max(objective, LAMBDA_MIN, LAMBDA_MAX, LAMBDA_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YeoJohnsonColumn {
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YeoJohnsonParams {
    pub columns: Vec<YeoJohnsonColumn>,
}

impl YeoJohnsonParams {
    pub fn lambdas(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.lambda).collect()
    }
}

pub fn fit_yeojohnson(train: &Matrix) -> Result<YeoJohnsonParams, ScaleError> {
    check_non_empty(train)?;
    let columns = (0..train.cols())
        .map(|c| YeoJohnsonColumn {
            lambda: fit_lambda(&train.column(c)),
        })
        .collect();
    Ok(YeoJohnsonParams { columns })
}

pub fn apply_yeojohnson(p: &YeoJohnsonParams, m: &Matrix) -> Result<Matrix, ScaleError> {
    check_cols(p.columns.len(), m)?;
    Ok(m.map_columns(|c, x| yj_value(x, p.columns[c].lambda)))
}

/// Any fitted scaler, serialized as `{"kind": ..., "per_feature": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "per_feature", rename_all = "lowercase")]
pub enum ScalerParams {
    MinMax(MinMaxParams),
    ZScore(ZScoreParams),
    YeoJohnson(YeoJohnsonParams),
}

impl ScalerParams {
    pub fn apply(&self, m: &Matrix) -> Result<Matrix, ScaleError> {
        match self {
            Self::MinMax(p) => apply_minmax(p, m),
            Self::ZScore(p) => apply_zscore(p, m),
            Self::YeoJohnson(p) => apply_yeojohnson(p, m),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Self::MinMax(p) => p.columns.len(),
            Self::ZScore(p) => p.columns.len(),
            Self::YeoJohnson(p) => p.columns.len(),
        }
    }
}
