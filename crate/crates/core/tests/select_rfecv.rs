mod common;

use flowbench::gboost::GBoostConfig;
use flowbench::select::{
    chi2_scores, chi2_select, rfecv, select_top_k, stratified_folds, MaskOrigin, RfecvConfig,
    SelectError,
};
use flowbench::Matrix;

fn cfg(seed: u64) -> RfecvConfig {
    RfecvConfig {
        seed,
        ..RfecvConfig::default()
    }
}

#[test]
fn recovers_informative_features() {
    let d = common::synthetic(600, 3, 7, 0.5, 42);
    let (mask, report) = rfecv(&d, &cfg(42)).unwrap();
    assert_eq!(mask.origin, MaskOrigin::Rfecv);
    for i in 0..3 {
        assert!(mask.kept_indices.contains(&i), "{:?}", mask.kept_indices);
    }
    assert_eq!(report.cv_curve.len(), 10);
    assert_eq!(mask.len(), report.chosen_size);
}

#[test]
fn chosen_size_is_curve_argmax_with_smaller_ties() {
    let d = common::synthetic(300, 2, 4, 0.5, 7);
    let (_, report) = rfecv(&d, &cfg(7)).unwrap();
    let sizes: Vec<usize> = report.cv_curve.iter().map(|p| p.n_features).collect();
    assert_eq!(sizes, (1..=6).collect::<Vec<_>>());
    let best = report
        .cv_curve
        .iter()
        .map(|p| p.mean_cv_accuracy)
        .fold(f64::NEG_INFINITY, f64::max);
    let expected = report
        .cv_curve
        .iter()
        .find(|p| p.mean_cv_accuracy == best)
        .unwrap()
        .n_features;
    assert_eq!(report.chosen_size, expected);
}

#[test]
fn identical_copies_collapse_to_one_feature() {
    let base = common::synthetic(200, 1, 0, 0.5, 3);
    let col = base.features().column(0);
    let rows: Vec<Vec<f64>> = col.iter().map(|&v| vec![v; 4]).collect();
    let d = common::dataset(rows, base.labels().to_vec());
    let (mask, report) = rfecv(&d, &cfg(3)).unwrap();
    assert_eq!(report.chosen_size, 1);
    assert_eq!(mask.len(), 1);
    assert_eq!(report.cv_curve.len(), 4);
}

#[test]
fn ranking_lists_every_column_once() {
    let d = common::synthetic(200, 2, 3, 0.5, 1);
    let (mask, report) = rfecv(&d, &cfg(1)).unwrap();
    let mut seen = report.ranking.clone();
    seen.sort_unstable();
    assert_eq!(seen, (0..5).collect::<Vec<_>>());
    let mut survivors: Vec<usize> = report.ranking[5 - report.chosen_size..].to_vec();
    survivors.sort_unstable();
    assert_eq!(survivors, mask.kept_indices);
}

#[test]
fn deterministic_under_seed() {
    let d = common::synthetic(200, 2, 3, 0.5, 9);
    assert_eq!(rfecv(&d, &cfg(5)).unwrap(), rfecv(&d, &cfg(5)).unwrap());
}

#[test]
fn too_few_rows_per_class() {
    let d = common::dataset(
        (0..8).map(|i| vec![i as f64]).collect(),
        vec![0, 0, 0, 1, 1, 1, 1, 1],
    );
    assert!(matches!(
        rfecv(&d, &cfg(0)),
        Err(SelectError::TooFewRows { .. })
    ));
}

#[test]
fn report_csv_has_one_line_per_size() {
    let d = common::synthetic(150, 1, 2, 0.5, 4);
    let small = RfecvConfig {
        estimator: GBoostConfig {
            n_estimators: 5,
            ..Default::default()
        },
        ..cfg(4)
    };
    let (_, report) = rfecv(&d, &small).unwrap();
    let csv = report.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "size,mean_cv_accuracy");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn folds_are_stratified_and_disjoint() {
    let labels: Vec<u8> = (0..103).map(|i| u8::from(i % 10 != 0)).collect();
    let folds = stratified_folds(&labels, 5, 11);
    assert_eq!(folds.len(), 5);
    let mut all: Vec<usize> = folds.concat();
    all.sort_unstable();
    assert_eq!(all, (0..103).collect::<Vec<_>>());
    for f in &folds {
        let neg = f.iter().filter(|&&r| labels[r] == 0).count();
        assert!((2..=3).contains(&neg), "fold negatives {neg}");
    }
}

#[test]
fn chi2_matches_event_expansion() {
    let rows: Vec<Vec<u32>> = vec![
        vec![3, 0, 1, 5],
        vec![0, 2, 1, 5],
        vec![4, 1, 0, 5],
        vec![1, 7, 2, 5],
        vec![0, 0, 3, 5],
        vec![2, 2, 2, 5],
    ];
    let labels = [1, 0, 1, 0, 0, 1];
    let m = Matrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&v| f64::from(v)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let expected = common::chi2_by_events(&rows, &labels);
    let got = chi2_scores(&m, &labels).unwrap();
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).abs() < 1e-12, "{g} vs {e}");
    }
    assert_eq!(got[3], 0.0);
}

#[test]
fn chi2_selects_twenty_of_thirty_one() {
    let d = common::synthetic(300, 8, 23, 0.9432, 42);
    let m = d.features().map_columns(|_, v| v.abs());
    let mask = chi2_select(&m, d.labels(), 20).unwrap();
    assert_eq!(mask.len(), 20);
    assert_eq!(mask.origin, MaskOrigin::Chi2);
    assert!(matches!(
        select_top_k(&[1.0], 2),
        Err(SelectError::BadK { .. })
    ));
}
