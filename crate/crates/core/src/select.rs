//! Feature selection: chi-squared top-k scoring and recursive feature
//! elimination with cross-validation (RFECV).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gboost::{feature_importances, gboost_fit, gboost_predict, GBoostConfig, GBoostError};
use crate::ingest::Dataset;
use crate::matrix::Matrix;

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("chi2 needs non-negative input; found {value} at row {row}, column {col}")]
    NegativeInput { row: usize, col: usize, value: f64 },
    #[error("labels contain a single class")]
    SingleClass,
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("k = {k} is outside 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("each class needs at least {folds} rows for {folds}-fold cv")]
    TooFewRows { folds: usize },
    #[error("ranking estimator: {0}")]
    Estimator(#[from] GBoostError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskOrigin {
    Chi2,
    Rfecv,
    None,
}

/// Strictly increasing subset of column indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMask {
    pub origin: MaskOrigin,
    pub kept_indices: Vec<usize>,
}

impl FeatureMask {
    /// Keeps every column.
    pub fn all(n_cols: usize) -> Self {
        Self {
            origin: MaskOrigin::None,
            kept_indices: (0..n_cols).collect(),
        }
    }

    fn from_unsorted(origin: MaskOrigin, mut kept: Vec<usize>) -> Self {
        kept.sort_unstable();
        kept.dedup();
        Self {
            origin,
            kept_indices: kept,
        }
    }

    pub fn len(&self) -> usize {
        self.kept_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept_indices.is_empty()
    }

    pub fn apply(&self, m: &Matrix) -> Matrix {
        m.select_columns(&self.kept_indices)
    }

    pub fn apply_dataset(&self, d: &Dataset) -> Dataset {
        d.select_columns(&self.kept_indices)
    }
}

/// Chi-squared statistic per feature in the frequency-sum form: for class
/// `c`, `observed_c` is the feature's total over rows of class `c` and
/// `expected_c` is the feature's overall total times the class prior. A
/// feature with zero total mass scores 0.
pub fn chi2_scores(m: &Matrix, labels: &[u8]) -> Result<Vec<f64>, SelectError> {
    if m.rows() != labels.len() {
        return Err(SelectError::LengthMismatch {
            rows: m.rows(),
            labels: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    if n_pos == 0 || n_pos == labels.len() {
        return Err(SelectError::SingleClass);
    }
    let n = labels.len() as f64;
    let priors = [(labels.len() - n_pos) as f64 / n, n_pos as f64 / n];

    let mut observed = vec![[0.0f64; 2]; m.cols()];
    for (r, row) in m.iter_rows().enumerate() {
        let class = usize::from(labels[r] == 1);
        for (c, &v) in row.iter().enumerate() {
            if v < 0.0 {
                return Err(SelectError::NegativeInput {
                    row: r,
                    col: c,
                    value: v,
                });
            }
            observed[c][class] += v;
        }
    }
    Ok(observed
        .iter()
        .map(|obs| {
            let total = obs[0] + obs[1];
            if total <= 0.0 {
                return 0.0;
            }
            obs.iter()
                .zip(priors)
                .map(|(&o, prior)| {
                    let e = total * prior;
                    (o - e) * (o - e) / e
                })
                .sum()
        })
        .collect())
}

pub const DEFAULT_CHI2_K: usize = 20;

/// Indices of the `k` largest scores, ties broken towards the lower index.
pub fn select_top_k(scores: &[f64], k: usize) -> Result<FeatureMask, SelectError> {
    if k == 0 || k > scores.len() {
        return Err(SelectError::BadK { k, n: scores.len() });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    Ok(FeatureMask::from_unsorted(MaskOrigin::Chi2, order))
}

/// Chi-squared scoring followed by top-k selection.
pub fn chi2_select(m: &Matrix, labels: &[u8], k: usize) -> Result<FeatureMask, SelectError> {
    select_top_k(&chi2_scores(m, labels)?, k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RfecvConfig {
    pub folds: usize,
    pub seed: u64,
    /// Ranking and scoring estimator.
    pub estimator: GBoostConfig,
}

impl Default for RfecvConfig {
    fn default() -> Self {
        Self {
            folds: 5,
            seed: 0,
            estimator: GBoostConfig {
                n_estimators: 50,
                ..GBoostConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvPoint {
    pub n_features: usize,
    pub mean_cv_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfecvReport {
    /// One point per subset size, ascending by size.
    pub cv_curve: Vec<CvPoint>,
    pub chosen_size: usize,
    /// Original column indices in elimination order; the last entry is the
    /// final survivor.
    pub ranking: Vec<usize>,
}

impl RfecvReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,mean_cv_accuracy\n");
        for p in &self.cv_curve {
            out.push_str(&format!("{},{:?}\n", p.n_features, p.mean_cv_accuracy));
        }
        out
    }
}

/// Stratified k-fold assignment: each class is shuffled and dealt
/// round-robin across folds.
pub fn stratified_folds(labels: &[u8], folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for class in [0u8, 1] {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        rows.shuffle(&mut rng);
        for r in rows {
            out[next % folds].push(r);
            next += 1;
        }
    }
    for fold in &mut out {
        fold.sort_unstable();
    }
    out
}

fn cv_accuracy(
    data: &Dataset,
    folds: &[Vec<usize>],
    cfg: &GBoostConfig,
) -> Result<f64, SelectError> {
    let per_fold: Vec<Result<f64, SelectError>> = (0..folds.len())
        .into_par_iter()
        .map(|k| {
            let mut train_rows: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            train_rows.sort_unstable();
            let model = gboost_fit(&data.select_rows(&train_rows), cfg)?;
            let held = data.select_rows(&folds[k]);
            let pred = gboost_predict(&model, held.features(), 0.5)?;
            let correct = pred
                .iter()
                .zip(held.labels())
                .filter(|(p, t)| p == t)
                .count();
            Ok(correct as f64 / held.n_rows() as f64)
        })
        .collect();
    let mut sum = 0.0;
    for acc in per_fold {
        sum += acc?;
    }
    Ok(sum / folds.len() as f64)
}

/// Recursive feature elimination, one feature per round, scoring every
/// subset size by mean stratified k-fold accuracy. The chosen size is the
/// curve's argmax with ties going to the smaller subset.
pub fn rfecv(
    train: &Dataset,
    cfg: &RfecvConfig,
) -> Result<(FeatureMask, RfecvReport), SelectError> {
    let folds_n = cfg.folds.max(2);
    if !train.has_both_classes() {
        return Err(SelectError::SingleClass);
    }
    for class in [0u8, 1] {
        if train.rows_with_label(class).len() < folds_n {
            return Err(SelectError::TooFewRows { folds: folds_n });
        }
    }
    let folds = stratified_folds(train.labels(), folds_n, cfg.seed);

    let mut remaining: Vec<usize> = (0..train.n_cols()).collect();
    let mut ranking = Vec::with_capacity(train.n_cols());
    let mut curve = Vec::with_capacity(train.n_cols());
    while !remaining.is_empty() {
        let current = train.select_columns(&remaining);
        curve.push(CvPoint {
            n_features: remaining.len(),
            mean_cv_accuracy: cv_accuracy(&current, &folds, &cfg.estimator)?,
        });
        if remaining.len() == 1 {
            ranking.push(remaining.pop().expect("one left"));
            break;
        }
        let ranker = gboost_fit(&current, &cfg.estimator)?;
        let importances = feature_importances(&ranker);
        // least important; among equals the highest column index goes first
        let drop = (0..remaining.len())
            .rev()
            .min_by(|&a, &b| importances[a].total_cmp(&importances[b]))
            .expect("non-empty");
        ranking.push(remaining.remove(drop));
    }
    curve.reverse();

    let chosen = curve
        .iter()
        .fold(None::<CvPoint>, |best, &p| match best {
            Some(b) if b.mean_cv_accuracy >= p.mean_cv_accuracy => Some(b),
            _ => Some(p),
        })
        .expect("non-empty curve");
    let kept = ranking[ranking.len() - chosen.n_features..].to_vec();
    Ok((
        FeatureMask::from_unsorted(MaskOrigin::Rfecv, kept),
        RfecvReport {
            cv_curve: curve,
            chosen_size: chosen.n_features,
            ranking,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_worked_example() {
        let m = Matrix::column_vector(&[1.0, 1.0, 0.0, 0.0]);
        let s = chi2_scores(&m, &[1, 1, 0, 0]).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chi2_constant_feature_scores_zero() {
        let m = Matrix::column_vector(&[1.0; 4]);
        assert_eq!(chi2_scores(&m, &[1, 0, 1, 0]).unwrap(), vec![0.0]);
        let zeros = Matrix::column_vector(&[0.0; 4]);
        assert_eq!(chi2_scores(&zeros, &[1, 0, 1, 0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn chi2_scales_linearly() {
        let m = Matrix::column_vector(&[0.2, 3.0, 1.5, 0.0, 4.0]);
        let labels = [1, 0, 1, 0, 1];
        let base = chi2_scores(&m, &labels).unwrap()[0];
        let scaled = chi2_scores(&m.map_columns(|_, v| 2.5 * v), &labels).unwrap()[0];
        assert!((scaled - 2.5 * base).abs() < 1e-12 * scaled.max(1.0));
    }

    #[test]
    fn chi2_errors() {
        let m = Matrix::column_vector(&[1.0, -0.5]);
        assert!(matches!(
            chi2_scores(&m, &[0, 1]),
            Err(SelectError::NegativeInput { row: 1, col: 0, .. })
        ));
        let m = Matrix::column_vector(&[1.0, 0.5]);
        assert_eq!(
            chi2_scores(&m, &[1, 1]).unwrap_err(),
            SelectError::SingleClass
        );
        assert!(matches!(
            chi2_scores(&m, &[1]),
            Err(SelectError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn top_k_selection() {
        assert_eq!(
            select_top_k(&[3.0, 1.0, 2.0], 2).unwrap().kept_indices,
            vec![0, 2]
        );
        assert_eq!(
            select_top_k(&[3.0, 1.0, 2.0], 3).unwrap().kept_indices,
            vec![0, 1, 2]
        );
        assert_eq!(
            select_top_k(&[1.0, 5.0, 1.0, 1.0], 2).unwrap().kept_indices,
            vec![0, 1]
        );
        assert_eq!(
            select_top_k(&[1.0], 0).unwrap_err(),
            SelectError::BadK { k: 0, n: 1 }
        );
        assert!(select_top_k(&[1.0], 2).is_err());
        let scores: Vec<f64> = (0..31).map(|i| ((i * 13) % 31) as f64).collect();
        assert_eq!(select_top_k(&scores, 20).unwrap().len(), 20);
    }

    #[test]
    fn mask_json_shape() {
        let mask = FeatureMask {
            origin: MaskOrigin::Rfecv,
            kept_indices: vec![1, 4],
        };
        assert_eq!(
            serde_json::to_value(&mask).unwrap(),
            serde_json::json!({"origin": "rfecv", "kept_indices": [1, 4]})
        );
    }

    #[test]
    fn folds_are_stratified_partition() {
        let labels: Vec<u8> = (0..53).map(|i| u8::from(i % 4 != 0)).collect();
        let folds = stratified_folds(&labels, 5, 9);
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..53).collect::<Vec<_>>());
        for f in &folds {
            assert!(f.iter().any(|&i| labels[i] == 0));
        }
    }

    #[test]
    fn report_csv() {
        let r = RfecvReport {
            cv_curve: vec![
                CvPoint {
                    n_features: 1,
                    mean_cv_accuracy: 0.5,
                },
                CvPoint {
                    n_features: 2,
                    mean_cv_accuracy: 0.75,
                },
            ],
            chosen_size: 2,
            ranking: vec![0, 1],
        };
        assert_eq!(r.to_csv(), "size,mean_cv_accuracy\n1,0.5\n2,0.75\n");
    }

    #[test]
    fn rfecv_too_few_rows() {
        let d = Dataset::new(
            Matrix::column_vector(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]),
            vec![0, 0, 1, 1, 1, 1],
            vec!["a".into()],
        )
        .unwrap();
        assert_eq!(
            rfecv(&d, &RfecvConfig::default()).unwrap_err(),
            SelectError::TooFewRows { folds: 5 }
        );
    }
}
