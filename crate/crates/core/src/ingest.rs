//! Flow-record ingestion: CSV parsing, cleaning, train/test splitting and a
//! synthetic generator used as a desk-scale stand-in for real captures.
//!
//! Labels are binary throughout with `1` meaning anomalous (the positive
//! class for every metric).

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;

/// Name of the label column written by [`Dataset::to_csv`].
pub const LABEL_COLUMN: &str = "Label";
pub const POSITIVE_NAME: &str = "Anomaly";
pub const NEGATIVE_NAME: &str = "Normal";

/// Anomaly prevalence of the reference IoT capture.
pub const DEFAULT_ANOMALY_RATE: f64 = 0.9432;

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("csv input has no header row")]
    MissingHeader,
    #[error("label column {0:?} not found in header")]
    UnknownLabelColumn(String),
    #[error("non-numeric value {value:?} at data row {row}, column {column:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("malformed csv: {0}")]
    Malformed(String),
    #[error("duplicate or empty feature name {0:?}")]
    BadFeatureName(String),
    #[error("dataset shape mismatch: {0}")]
    Shape(String),
    #[error("label {0} is not binary")]
    NonBinaryLabel(u8),
    #[error("no rows remain after cleaning")]
    EmptyAfterCleaning,
    #[error("need at least {needed} rows to split, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("train fraction {0} leaves an empty side")]
    BadFraction(f64),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

/// Feature matrix with binary labels and column names.
///
/// Cells may be non-finite straight out of the parser; [`clean`] removes such
/// rows and everything downstream assumes a cleaned dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<u8>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Matrix,
        labels: Vec<u8>,
        feature_names: Vec<String>,
    ) -> Result<Self, IngestError> {
        if features.rows() != labels.len() {
            return Err(IngestError::Shape(format!(
                "{} rows but {} labels",
                features.rows(),
                labels.len()
            )));
        }
        if features.cols() != feature_names.len() {
            return Err(IngestError::Shape(format!(
                "{} columns but {} names",
                features.cols(),
                feature_names.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(IngestError::NonBinaryLabel(bad));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(IngestError::BadFeatureName(name.clone()));
            }
        }
        Ok(Self {
            features,
            labels,
            feature_names,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.features.cols()
    }

    /// Fraction of rows labelled anomalous.
    pub fn positive_rate(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.labels.iter().filter(|&&l| l == 1).count() as f64 / self.labels.len() as f64
    }

    pub fn has_both_classes(&self) -> bool {
        self.labels.contains(&0) && self.labels.contains(&1)
    }

    pub fn is_finite(&self) -> bool {
        self.features.as_slice().iter().all(|v| v.is_finite())
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select_columns(indices),
            labels: self.labels.clone(),
            feature_names: indices
                .iter()
                .map(|&i| self.feature_names[i].clone())
                .collect(),
        }
    }

    /// Same labels and names with a replacement feature matrix.
    pub fn with_features(&self, features: Matrix) -> Result<Self, IngestError> {
        Self::new(features, self.labels.clone(), self.feature_names.clone())
    }

    /// Rows whose label equals `label`, in dataset order.
    pub fn rows_with_label(&self, label: u8) -> Vec<usize> {
        (0..self.n_rows())
            .filter(|&i| self.labels[i] == label)
            .collect()
    }

    /// Serializes to CSV with the label as the final `Label` column
    /// (`Normal` / `Anomaly`). Floats are written in round-trip form.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        header.push(LABEL_COLUMN);
        w.write_record(&header).expect("in-memory write");
        let mut record: Vec<String> = Vec::with_capacity(self.n_cols() + 1);
        for (r, row) in self.features.iter_rows().enumerate() {
            record.clear();
            record.extend(row.iter().map(|v| format!("{v:?}")));
            record.push(
                if self.labels[r] == 1 {
                    POSITIVE_NAME
                } else {
                    NEGATIVE_NAME
                }
                .to_string(),
            );
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// What to do with feature columns that contain non-numeric cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonNumericPolicy {
    #[default]
    Reject,
    /// Drop every column holding at least one non-numeric cell
    /// (identifiers, IP addresses, timestamps).
    Drop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOptions {
    pub label_column: String,
    pub positive_label: String,
    pub non_numeric: NonNumericPolicy,
    /// Columns removed before numeric parsing, e.g. secondary label columns.
    pub drop_columns: Vec<String>,
}

impl ParseOptions {
    pub fn new(label_column: impl Into<String>, positive_label: impl Into<String>) -> Self {
        Self {
            label_column: label_column.into(),
            positive_label: positive_label.into(),
            non_numeric: NonNumericPolicy::Reject,
            drop_columns: Vec::new(),
        }
    }
}

/// Parses a flow CSV. Every column except `label_column` must be numeric;
/// `label_column` maps `positive_label` to 1 and everything else to 0.
pub fn parse_flow_csv(
    text: &str,
    label_column: &str,
    positive_label: &str,
) -> Result<Dataset, IngestError> {
    parse_flow_csv_with(text, &ParseOptions::new(label_column, positive_label))
}

/// Empty cells parse as NaN so that [`clean`] treats them as missing values.
fn parse_cell(raw: &str) -> Option<f64> {
    let t = raw.trim();
    if t.is_empty() {
        return Some(f64::NAN);
    }
    t.parse::<f64>().ok()
}

pub fn parse_flow_csv_with(text: &str, opts: &ParseOptions) -> Result<Dataset, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| IngestError::Malformed(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(IngestError::MissingHeader);
    }
    let label_idx = header
        .iter()
        .position(|h| *h == opts.label_column)
        .ok_or_else(|| IngestError::UnknownLabelColumn(opts.label_column.clone()))?;

    let mut candidate_cols: Vec<usize> = (0..header.len())
        .filter(|&c| c != label_idx && !opts.drop_columns.contains(&header[c]))
        .collect();

    let mut records = Vec::new();
    for rec in reader.records() {
        records.push(rec.map_err(|e| IngestError::Malformed(e.to_string()))?);
    }

    if opts.non_numeric == NonNumericPolicy::Drop {
        candidate_cols.retain(|&c| records.iter().all(|r| parse_cell(&r[c]).is_some()));
    }

    let n_cols = candidate_cols.len();
    let mut data = Vec::with_capacity(records.len() * n_cols);
    let mut labels = Vec::with_capacity(records.len());
    for (row, rec) in records.iter().enumerate() {
        for &c in &candidate_cols {
            let raw = &rec[c];
            let v = parse_cell(raw).ok_or_else(|| IngestError::NonNumericCell {
                row,
                column: header[c].clone(),
                value: raw.to_string(),
            })?;
            data.push(v);
        }
        labels.push(u8::from(rec[label_idx].trim() == opts.positive_label));
    }
    let names = candidate_cols.iter().map(|&c| header[c].clone()).collect();
    Dataset::new(Matrix::from_vec(records.len(), n_cols, data), labels, names)
}

/// Drops rows with NaN or infinite cells, then exact duplicates (features
/// bitwise equal and same label), keeping the first occurrence.
pub fn clean(d: &Dataset) -> Result<Dataset, IngestError> {
    let mut seen: HashSet<(Vec<u64>, u8)> = HashSet::with_capacity(d.n_rows());
    let keep: Vec<usize> = (0..d.n_rows())
        .filter(|&r| {
            let row = d.features.row(r);
            if !row.iter().all(|v| v.is_finite()) {
                return false;
            }
            let key = (row.iter().map(|v| v.to_bits()).collect(), d.labels[r]);
            seen.insert(key)
        })
        .collect();
    if keep.is_empty() {
        return Err(IngestError::EmptyAfterCleaning);
    }
    Ok(d.select_rows(&keep))
}

/// Train/test partition of a source dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    pub seed: u64,
    /// Source row indices that went to each side, in split order.
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
}

pub const MIN_SPLIT_ROWS: usize = 5;

fn train_count(n: usize, train_fraction: f64) -> Result<usize, IngestError> {
    if n < MIN_SPLIT_ROWS {
        return Err(IngestError::TooFewRows {
            needed: MIN_SPLIT_ROWS,
            got: n,
        });
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(IngestError::BadFraction(train_fraction));
    }
    let k = (train_fraction * n as f64).floor() as usize;
    if k == 0 || k == n {
        return Err(IngestError::BadFraction(train_fraction));
    }
    Ok(k)
}

/// Uniform shuffle under `seed`; the first `floor(train_fraction * n)` rows
/// of the permutation become the training set.
pub fn split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<SplitPair, IngestError> {
    let n = d.n_rows();
    let k = train_count(n, train_fraction)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (train_rows, test_rows) = perm.split_at(k);
    Ok(SplitPair {
        train: d.select_rows(train_rows),
        test: d.select_rows(test_rows),
        seed,
        train_rows: train_rows.to_vec(),
        test_rows: test_rows.to_vec(),
    })
}

/// Like [`split`] but preserves the class ratio: each class contributes
/// `floor(train_fraction * n_class)` rows to train.
pub fn split_stratified(
    d: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitPair, IngestError> {
    train_count(d.n_rows(), train_fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for label in [0u8, 1] {
        let mut rows = d.rows_with_label(label);
        rows.shuffle(&mut rng);
        let k = (train_fraction * rows.len() as f64).floor() as usize;
        train_rows.extend_from_slice(&rows[..k]);
        test_rows.extend_from_slice(&rows[k..]);
    }
    if train_rows.is_empty() || test_rows.is_empty() {
        return Err(IngestError::BadFraction(train_fraction));
    }
    train_rows.shuffle(&mut rng);
    test_rows.shuffle(&mut rng);
    Ok(SplitPair {
        train: d.select_rows(&train_rows),
        test: d.select_rows(&test_rows),
        seed,
        train_rows,
        test_rows,
    })
}

/// Random subset of `m` rows under `seed`, kept in source order. Returns a
/// clone when `m >= n_rows`.
pub fn subsample(d: &Dataset, m: usize, seed: u64) -> Dataset {
    if m >= d.n_rows() {
        return d.clone();
    }
    let mut perm: Vec<usize> = (0..d.n_rows()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut keep = perm[..m].to_vec();
    keep.sort_unstable();
    d.select_rows(&keep)
}

/// Parameters of the synthetic two-class generator.
///
/// The first `n_informative` columns are drawn from `N(0, 1)` for normal rows
/// and `N(mean_shift, 1)` for anomalous rows; the remaining `n_noise` columns
/// are `N(0, 1)` regardless of class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_rows: usize,
    pub n_informative: usize,
    pub n_noise: usize,
    pub anomaly_rate: f64,
    pub mean_shift: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_rows: 2000,
            n_informative: 8,
            n_noise: 23,
            anomaly_rate: DEFAULT_ANOMALY_RATE,
            mean_shift: 2.0,
            seed: 42,
        }
    }
}

impl SyntheticSpec {
    pub fn n_cols(&self) -> usize {
        self.n_informative + self.n_noise
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if self.n_rows == 0 {
            return Err(IngestError::InvalidSpec("n_rows must be positive".into()));
        }
        if self.n_cols() == 0 {
            return Err(IngestError::InvalidSpec("no feature columns".into()));
        }
        if !(self.anomaly_rate > 0.0 && self.anomaly_rate < 1.0) {
            return Err(IngestError::InvalidSpec(format!(
                "anomaly_rate {} outside (0, 1)",
                self.anomaly_rate
            )));
        }
        if !self.mean_shift.is_finite() {
            return Err(IngestError::InvalidSpec("mean_shift must be finite".into()));
        }
        Ok(())
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset, IngestError> {
    spec.validate()?;
    let n_cols = spec.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut data = Vec::with_capacity(spec.n_rows * n_cols);
    let mut labels = Vec::with_capacity(spec.n_rows);
    for _ in 0..spec.n_rows {
        let label = u8::from(rng.random::<f64>() < spec.anomaly_rate);
        let shift = if label == 1 { spec.mean_shift } else { 0.0 };
        for c in 0..n_cols {
            let z: f64 = rng.sample(StandardNormal);
            data.push(if c < spec.n_informative { z + shift } else { z });
        }
        labels.push(label);
    }
    let width = n_cols.saturating_sub(1).to_string().len();
    let names = (0..n_cols)
        .map(|c| {
            if c < spec.n_informative {
                format!("inf_{c:0width$}")
            } else {
                format!("noise_{c:0width$}")
            }
        })
        .collect();
    Dataset::new(Matrix::from_vec(spec.n_rows, n_cols, data), labels, names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(rows: &[[f64; 2]], labels: &[u8]) -> Dataset {
        Dataset::new(
            Matrix::from_rows(rows),
            labels.to_vec(),
            vec!["a".into(), "b".into()],
        )
        .unwrap()
    }

    #[test]
    fn parses_three_rows() {
        let csv = "dur,bytes,Label\n1.5,10,Anomaly\n2,20,Normal\n3,30,Anomaly\n";
        let d = parse_flow_csv(csv, "Label", "Anomaly").unwrap();
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.n_cols(), 2);
        assert_eq!(d.labels(), &[1, 0, 1]);
        assert_eq!(d.feature_names(), &["dur", "bytes"]);
        assert_eq!(d.features().row(0), &[1.5, 10.0]);
    }

    #[test]
    fn all_normal_labels_are_zero() {
        let csv = "x,Label\n1,Normal\n2,Normal\n";
        let d = parse_flow_csv(csv, "Label", "Anomaly").unwrap();
        assert_eq!(d.labels(), &[0, 0]);
    }

    #[test]
    fn label_column_may_be_anywhere_and_quoted() {
        let csv = "\"Label\",\"a,b\",c\n\"Anomaly\",\"1\",2\n";
        let d = parse_flow_csv(csv, "Label", "Anomaly").unwrap();
        assert_eq!(d.feature_names(), &["a,b", "c"]);
        assert_eq!(d.labels(), &[1]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_flow_csv("", "Label", "Anomaly").unwrap_err(),
            IngestError::MissingHeader
        );
        assert_eq!(
            parse_flow_csv("a,b\n1,2\n", "Label", "Anomaly").unwrap_err(),
            IngestError::UnknownLabelColumn("Label".into())
        );
        assert_eq!(
            parse_flow_csv(
                "a,ip,Label\n1,2,Normal\n3,10.0.0.1,Normal\n",
                "Label",
                "Anomaly"
            )
            .unwrap_err(),
            IngestError::NonNumericCell {
                row: 1,
                column: "ip".into(),
                value: "10.0.0.1".into()
            }
        );
        assert!(matches!(
            parse_flow_csv("a,Label\n1,Normal,extra\n", "Label", "Anomaly").unwrap_err(),
            IngestError::Malformed(_)
        ));
        assert!(matches!(
            parse_flow_csv("a,a,Label\n1,2,Normal\n", "Label", "Anomaly").unwrap_err(),
            IngestError::BadFeatureName(_)
        ));
    }

    #[test]
    fn drop_policy_and_drop_columns() {
        let csv = "id,a,Cat,Label\nx1,1,DoS,Anomaly\nx2,2,Normal,Normal\n";
        let mut opts = ParseOptions::new("Label", "Anomaly");
        opts.non_numeric = NonNumericPolicy::Drop;
        let d = parse_flow_csv_with(csv, &opts).unwrap();
        assert_eq!(d.feature_names(), &["a"]);

        let csv = "a,Sub,Label\n1,3,Anomaly\n";
        let mut opts = ParseOptions::new("Label", "Anomaly");
        opts.drop_columns.push("Sub".into());
        assert_eq!(parse_flow_csv_with(csv, &opts).unwrap().n_cols(), 1);
    }

    #[test]
    fn empty_and_infinite_cells_parse_then_clean_away() {
        let csv = "a,Label\n,Normal\ninf,Anomaly\n1,Normal\n";
        let d = parse_flow_csv(csv, "Label", "Anomaly").unwrap();
        assert!(d.features().get(0, 0).is_nan());
        assert!(d.features().get(1, 0).is_infinite());
        assert_eq!(clean(&d).unwrap().n_rows(), 1);
    }

    #[test]
    fn clean_drops_single_nan_row() {
        let mut rows: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 2.0 * i as f64]).collect();
        rows[4][1] = f64::NAN;
        let d = toy(&rows, &[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let c = clean(&d).unwrap();
        assert_eq!(c.n_rows(), 9);
        assert_eq!(c.n_cols(), 2);
    }

    #[test]
    fn clean_drops_infinity_row() {
        let d = toy(
            &[[1.0, f64::INFINITY], [2.0, 3.0], [f64::NEG_INFINITY, 0.0]],
            &[0, 1, 1],
        );
        let c = clean(&d).unwrap();
        assert_eq!(c.n_rows(), 1);
        assert_eq!(c.features().row(0), &[2.0, 3.0]);
    }

    #[test]
    fn clean_dedupes_keeping_first() {
        let d = toy(
            &[[1.0, 2.0], [3.0, 4.0], [1.0, 2.0], [1.0, 2.0]],
            &[0, 0, 0, 1],
        );
        let c = clean(&d).unwrap();
        // same features with a different label is not a duplicate
        assert_eq!(c.n_rows(), 3);
        assert_eq!(c.labels(), &[0, 0, 1]);
        assert_eq!(c.features().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn clean_all_invalid_is_error() {
        let d = toy(&[[f64::NAN, 0.0]], &[0]);
        assert_eq!(clean(&d).unwrap_err(), IngestError::EmptyAfterCleaning);
    }

    #[test]
    fn split_sizes_and_determinism() {
        let rows: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 0.0]).collect();
        let d = toy(&rows, &[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let a = split(&d, 0.8, 7).unwrap();
        assert_eq!(a.train.n_rows(), 8);
        assert_eq!(a.test.n_rows(), 2);
        assert_eq!(a, split(&d, 0.8, 7).unwrap());
    }

    #[test]
    fn split_seeds_differ() {
        let rows: Vec<[f64; 2]> = (0..100).map(|i| [i as f64, 0.0]).collect();
        let d = toy(&rows, &[0; 100]);
        let a = split(&d, 0.8, 1).unwrap();
        let b = split(&d, 0.8, 2).unwrap();
        let mut ta = a.test_rows.clone();
        let mut tb = b.test_rows.clone();
        ta.sort_unstable();
        tb.sort_unstable();
        assert_ne!(ta, tb);
    }

    #[test]
    fn split_too_few_rows() {
        let d = toy(&[[0.0, 0.0]; 4], &[0; 4]);
        assert_eq!(
            split(&d, 0.8, 0).unwrap_err(),
            IngestError::TooFewRows { needed: 5, got: 4 }
        );
    }

    #[test]
    fn stratified_split_keeps_ratio() {
        let rows: Vec<[f64; 2]> = (0..100).map(|i| [i as f64, 0.0]).collect();
        let labels: Vec<u8> = (0..100).map(|i| u8::from(i < 90)).collect();
        let d = toy(&rows, &labels);
        let s = split_stratified(&d, 0.8, 3).unwrap();
        assert_eq!(s.train.n_rows(), 80);
        assert_eq!(s.train.rows_with_label(1).len(), 72);
        assert_eq!(s.test.rows_with_label(0).len(), 2);
    }

    #[test]
    fn synthetic_rate_and_determinism() {
        let spec = SyntheticSpec {
            n_rows: 1000,
            ..SyntheticSpec::default()
        };
        let d = generate_synthetic(&spec).unwrap();
        assert!((d.positive_rate() - 0.9432).abs() <= 0.03);
        assert_eq!(d, generate_synthetic(&spec).unwrap());
        assert_eq!(d.n_cols(), 31);
    }

    #[test]
    fn synthetic_invalid_specs() {
        for spec in [
            SyntheticSpec {
                anomaly_rate: 0.0,
                ..Default::default()
            },
            SyntheticSpec {
                anomaly_rate: 1.0,
                ..Default::default()
            },
            SyntheticSpec {
                n_informative: 0,
                n_noise: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                generate_synthetic(&spec),
                Err(IngestError::InvalidSpec(_))
            ));
        }
    }

    #[test]
    fn synthetic_spec_json_defaults() {
        let spec: SyntheticSpec = serde_json::from_str(r#"{"n_rows": 50, "seed": 3}"#).unwrap();
        assert_eq!(spec.n_rows, 50);
        assert_eq!(spec.anomaly_rate, DEFAULT_ANOMALY_RATE);
    }
}
