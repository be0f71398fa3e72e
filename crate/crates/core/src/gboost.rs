//! Gradient-boosted regression trees for binary classification.
//!
//! Each stage fits a depth-limited CART tree (squared error) to the negative
//! gradient of the logistic loss, `y - p`, and sets every leaf to the Newton
//! step `sum(y - p) / sum(p (1 - p))`. Splits route `x <= threshold` to the
//! left child; thresholds are midpoints between consecutive distinct values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Dataset;
use crate::matrix::Matrix;

#[derive(Debug, Error, PartialEq)]
pub enum GBoostError {
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

const HESSIAN_FLOOR: f64 = 1e-12;
const MIN_GAIN: f64 = 1e-12;
/// Gains within this relative margin count as tied, so the earlier
/// (lower feature, lower threshold) candidate is kept.
const TIE_MARGIN: f64 = 1e-12;
const PROBA_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GBoostConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Carried for reproducibility bookkeeping; the fit itself uses no
    /// randomness.
    pub seed: u64,
}

impl Default for GBoostConfig {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            learning_rate: 0.1,
            max_depth: 3,
            min_samples_leaf: 1,
            seed: 0,
        }
    }
}

impl GBoostConfig {
    pub fn validate(&self) -> Result<(), GBoostError> {
        if self.n_estimators == 0 {
            return Err(GBoostError::InvalidConfig(
                "n_estimators must be >= 1".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(GBoostError::InvalidConfig(format!(
                "learning_rate {} must be positive",
                self.learning_rate
            )));
        }
        if self.min_samples_leaf == 0 {
            return Err(GBoostError::InvalidConfig(
                "min_samples_leaf must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        /// Variance reduction achieved by this split.
        gain: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if row[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Number of split levels; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn add_gains(&self, out: &mut [f64]) {
        if let TreeNode::Split {
            feature,
            gain,
            left,
            right,
            ..
        } = self
        {
            out[*feature] += gain;
            left.add_gains(out);
            right.add_gains(out);
        }
    }
}

/// Per-feature row orderings, sorted by value. Computed once per fit.
struct Presorted {
    rows: Vec<usize>,
    orders: Vec<Vec<usize>>,
}

impl Presorted {
    fn new(x: &Matrix, rows: &[usize]) -> Self {
        let orders = (0..x.cols())
            .map(|f| {
                let mut order = rows.to_vec();
                order.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)));
                order
            })
            .collect();
        Self {
            rows: rows.to_vec(),
            orders,
        }
    }
}

struct TreeBuilder<'a> {
    x: &'a Matrix,
    target: &'a [f64],
    hessians: &'a [f64],
    min_samples_leaf: usize,
    goes_left: Vec<bool>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl TreeBuilder<'_> {
    fn leaf(&self, rows: &[usize]) -> TreeNode {
        let (num, den) = rows.iter().fold((0.0, 0.0), |(n, d), &r| {
            (n + self.target[r], d + self.hessians[r])
        });
        TreeNode::Leaf {
            value: num / den.max(HESSIAN_FLOOR),
        }
    }

    fn best_split(&self, sorted: &[Vec<usize>]) -> Option<BestSplit> {
        let rows = &sorted[0];
        let n = rows.len();
        let total: f64 = rows.iter().map(|&r| self.target[r]).sum();
        let parent = total * total / n as f64;
        let mut best: Option<BestSplit> = None;
        for (feature, order) in sorted.iter().enumerate() {
            let mut left_sum = 0.0;
            for i in 0..n - 1 {
                let r = order[i];
                left_sum += self.target[r];
                let n_left = i + 1;
                let n_right = n - n_left;
                if n_left < self.min_samples_leaf || n_right < self.min_samples_leaf {
                    continue;
                }
                let here = self.x.get(r, feature);
                let next = self.x.get(order[i + 1], feature);
                if here >= next {
                    continue;
                }
                let right_sum = total - left_sum;
                let gain = left_sum * left_sum / n_left as f64
                    + right_sum * right_sum / n_right as f64
                    - parent;
                if gain > MIN_GAIN
                    && best
                        .as_ref()
                        .is_none_or(|b| gain > b.gain * (1.0 + TIE_MARGIN))
                {
                    let mid = 0.5 * (here + next);
                    best = Some(BestSplit {
                        feature,
                        threshold: if mid < next { mid } else { here },
                        gain,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, sorted: Vec<Vec<usize>>, depth_budget: usize) -> TreeNode {
        if sorted.is_empty() || depth_budget == 0 || sorted[0].len() < 2 {
            let rows = sorted.first().map(Vec::as_slice).unwrap_or(&[]);
            return self.leaf(rows);
        }
        let Some(split) = self.best_split(&sorted) else {
            return self.leaf(&sorted[0]);
        };
        for &r in &sorted[0] {
            self.goes_left[r] = self.x.get(r, split.feature) <= split.threshold;
        }
        let (left, right): (Vec<_>, Vec<_>) = sorted
            .into_iter()
            .map(|order| order.into_iter().partition(|&r| self.goes_left[r]))
            .unzip();
        TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            gain: split.gain,
            left: Box::new(self.build(left, depth_budget - 1)),
            right: Box::new(self.build(right, depth_budget - 1)),
        }
    }
}

/// Fits one regression tree to `-gradients` over `rows` of `x`, with Newton
/// leaf values. `gradients` and `hessians` are indexed by row of `x`.
pub fn tree_fit(
    x: &Matrix,
    rows: &[usize],
    gradients: &[f64],
    hessians: &[f64],
    max_depth: usize,
    min_samples_leaf: usize,
) -> TreeNode {
    let target: Vec<f64> = gradients.iter().map(|g| -g).collect();
    let presorted = Presorted::new(x, rows);
    fit_presorted(
        x,
        &presorted,
        &target,
        hessians,
        max_depth,
        min_samples_leaf,
    )
}

fn fit_presorted(
    x: &Matrix,
    presorted: &Presorted,
    target: &[f64],
    hessians: &[f64],
    max_depth: usize,
    min_samples_leaf: usize,
) -> TreeNode {
    let mut builder = TreeBuilder {
        x,
        target,
        hessians,
        min_samples_leaf: min_samples_leaf.max(1),
        goes_left: vec![false; x.rows()],
    };
    if presorted.orders.is_empty() {
        return builder.leaf(&presorted.rows);
    }
    builder.build(presorted.orders.clone(), max_depth)
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Mean logistic loss of raw scores against binary labels.
pub fn log_loss_from_scores(scores: &[f64], labels: &[u8]) -> f64 {
    let sum: f64 = scores
        .iter()
        .zip(labels)
        .map(|(&z, &y)| softplus(z) - f64::from(y) * z)
        .sum();
    sum / scores.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GBoostModel {
    /// Initial log-odds of the positive class.
    pub base_score: f64,
    pub learning_rate: f64,
    pub n_features: usize,
    pub trees: Vec<TreeNode>,
    /// Mean training log-loss before the first stage and after each stage.
    #[serde(default)]
    pub train_log_loss: Vec<f64>,
}

pub fn gboost_fit(train: &Dataset, cfg: &GBoostConfig) -> Result<GBoostModel, GBoostError> {
    cfg.validate()?;
    if !train.has_both_classes() {
        return Err(GBoostError::SingleClass);
    }
    let x = train.features();
    let y = train.labels();
    let n = x.rows();
    let positive = y.iter().filter(|&&l| l == 1).count() as f64 / n as f64;
    let base_score = (positive / (1.0 - positive)).ln();

    let rows: Vec<usize> = (0..n).collect();
    let presorted = Presorted::new(x, &rows);
    let mut scores = vec![base_score; n];
    let mut target = vec![0.0; n];
    let mut hessians = vec![0.0; n];
    let mut trees = Vec::with_capacity(cfg.n_estimators);
    let mut train_log_loss = Vec::with_capacity(cfg.n_estimators + 1);
    train_log_loss.push(log_loss_from_scores(&scores, y));

    for _ in 0..cfg.n_estimators {
        for i in 0..n {
            let p = sigmoid(scores[i]);
            target[i] = f64::from(y[i]) - p;
            hessians[i] = p * (1.0 - p);
        }
        let tree = fit_presorted(
            x,
            &presorted,
            &target,
            &hessians,
            cfg.max_depth,
            cfg.min_samples_leaf,
        );
        for (i, s) in scores.iter_mut().enumerate() {
            *s += cfg.learning_rate * tree.predict(x.row(i));
        }
        train_log_loss.push(log_loss_from_scores(&scores, y));
        trees.push(tree);
    }

    Ok(GBoostModel {
        base_score,
        learning_rate: cfg.learning_rate,
        n_features: x.cols(),
        trees,
        train_log_loss,
    })
}

impl GBoostModel {
    fn check(&self, m: &Matrix) -> Result<(), GBoostError> {
        if m.cols() != self.n_features {
            return Err(GBoostError::DimensionMismatch {
                expected: self.n_features,
                got: m.cols(),
            });
        }
        Ok(())
    }

    /// Raw additive score (log-odds) using only the first `stages` trees.
    pub fn decision_function_staged(&self, row: &[f64], stages: usize) -> f64 {
        self.base_score
            + self.trees[..stages.min(self.trees.len())]
                .iter()
                .map(|t| self.learning_rate * t.predict(row))
                .sum::<f64>()
    }

    pub fn decision_function(&self, row: &[f64]) -> f64 {
        self.decision_function_staged(row, self.trees.len())
    }
}

pub fn gboost_predict_proba(model: &GBoostModel, m: &Matrix) -> Result<Vec<f64>, GBoostError> {
    model.check(m)?;
    Ok(m.iter_rows()
        .map(|row| sigmoid(model.decision_function(row)).clamp(PROBA_CLAMP, 1.0 - PROBA_CLAMP))
        .collect())
}

pub fn gboost_predict(
    model: &GBoostModel,
    m: &Matrix,
    threshold: f64,
) -> Result<Vec<u8>, GBoostError> {
    Ok(gboost_predict_proba(model, m)?
        .into_iter()
        .map(|p| u8::from(p >= threshold))
        .collect())
}

/// Total split gain per feature normalized to sum 1; all zeros when the
/// model never split.
pub fn feature_importances(model: &GBoostModel) -> Vec<f64> {
    let mut out = vec![0.0; model.n_features];
    for tree in &model.trees {
        tree.add_gains(&mut out);
    }
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        out.iter_mut().for_each(|v| *v /= total);
    }
    out
}
