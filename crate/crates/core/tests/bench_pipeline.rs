mod common;

use flowbench::bench::{
    emit_report, enumerate_table1, fit_pipeline, run_matrix, run_pipeline, validate, ConfigError,
    ExperimentResult, ModelKind, Normalization, PipelineConfig, ReportFormat, RunStatus, Selection,
    Transformation,
};
use flowbench::ingest::{split, SplitPair};
use flowbench::neural::TrainSchedule;

fn data(n: usize, seed: u64) -> SplitPair {
    split(&common::synthetic(n, 4, 4, 0.7, seed), 0.8, seed).unwrap()
}

/// Short schedules keep whole-matrix tests fast.
fn quick(mut c: PipelineConfig) -> PipelineConfig {
    let h = &mut c.hyperparameters;
    h.schedule = TrainSchedule {
        epochs: 3,
        batch_size: 32,
    };
    h.gboost.n_estimators = 20;
    h.rfecv.estimator.n_estimators = 5;
    h.lstm.hidden_size = 8;
    c
}

fn cfg(
    id: u32,
    model: ModelKind,
    n: Normalization,
    t: Transformation,
    s: Selection,
) -> PipelineConfig {
    PipelineConfig::new(id, model, n, t, s)
}

fn strip_timings(mut r: Vec<ExperimentResult>) -> Vec<ExperimentResult> {
    for x in &mut r {
        x.fit_seconds = 0.0;
        x.predict_seconds = 0.0;
    }
    r
}

#[test]
fn table1_shape() {
    let configs = enumerate_table1(42);
    assert_eq!(configs.len(), 34);
    for (i, c) in configs.iter().enumerate() {
        assert_eq!(c.id as usize, i + 1);
        assert_eq!(c.seed, 42 + c.id as u64);
        assert!(validate(c).is_ok());
        if matches!(c.selection, Selection::Chi2 { .. }) {
            assert_eq!(c.normalization, Normalization::MinMax);
        }
    }
    let counts = [ModelKind::Lstm, ModelKind::Autoencoder, ModelKind::GBoost]
        .map(|m| configs.iter().filter(|c| c.model == m).count());
    assert_eq!(counts, [12, 12, 10]);
    let c32 = &configs[31];
    assert_eq!(
        (
            c32.model,
            c32.normalization,
            c32.transformation,
            c32.selection
        ),
        (
            ModelKind::GBoost,
            Normalization::ZScore,
            Transformation::None,
            Selection::None
        )
    );
    let c11 = &configs[10];
    assert_eq!(
        (
            c11.model,
            c11.normalization,
            c11.transformation,
            c11.selection
        ),
        (
            ModelKind::Lstm,
            Normalization::None,
            Transformation::YeoJohnson,
            Selection::None
        )
    );
}

#[test]
fn validation_rules() {
    let chi2 = Selection::Chi2 { k: 20 };
    let bad = cfg(
        1,
        ModelKind::GBoost,
        Normalization::ZScore,
        Transformation::None,
        chi2,
    );
    assert!(matches!(
        validate(&bad),
        Err(ConfigError::Chi2RequiresMinMax(_))
    ));
    let raw = cfg(
        1,
        ModelKind::GBoost,
        Normalization::None,
        Transformation::None,
        chi2,
    );
    assert!(validate(&raw).is_err());
    let k0 = cfg(
        1,
        ModelKind::Lstm,
        Normalization::MinMax,
        Transformation::None,
        Selection::Chi2 { k: 0 },
    );
    assert!(matches!(validate(&k0), Err(ConfigError::BadK)));
    let ok = cfg(
        11,
        ModelKind::Lstm,
        Normalization::None,
        Transformation::YeoJohnson,
        Selection::None,
    );
    assert!(validate(&ok).is_ok());
}

#[test]
fn zscore_boosting_scores_well() {
    let d = data(600, 1);
    let r = run_pipeline(
        &cfg(
            32,
            ModelKind::GBoost,
            Normalization::ZScore,
            Transformation::None,
            Selection::None,
        ),
        &d,
    );
    assert_eq!(r.status, RunStatus::Ok);
    assert!(r.scores.unwrap().accuracy >= 0.95, "{:?}", r.scores);
    assert_eq!(r.n_features_used, Some(8));
}

#[test]
fn rfecv_feature_count_is_mask_size() {
    let d = data(300, 2);
    let c = quick(cfg(
        9,
        ModelKind::GBoost,
        Normalization::ZScore,
        Transformation::None,
        Selection::Rfecv,
    ));
    let fitted = fit_pipeline(&c, &d.train).unwrap();
    let report = fitted.rfecv_report.as_ref().unwrap();
    assert_eq!(fitted.mask.len(), report.chosen_size);
    assert_eq!(
        run_pipeline(&c, &d).n_features_used,
        Some(report.chosen_size)
    );
}

#[test]
fn single_feature_autoencoder_still_reports() {
    let d = data(400, 3);
    let c = quick(cfg(
        14,
        ModelKind::Autoencoder,
        Normalization::MinMax,
        Transformation::YeoJohnson,
        Selection::Chi2 { k: 1 },
    ));
    let r = run_pipeline(&c, &d);
    assert_eq!(r.status, RunStatus::Ok);
    assert_eq!(r.n_features_used, Some(1));
    assert!(r.scores.is_some());
}

#[test]
fn failures_and_skips_do_not_abort_siblings() {
    let d = split(&common::synthetic(120, 2, 1, 0.95, 4), 0.8, 4).unwrap();
    let configs = vec![
        cfg(
            1,
            ModelKind::GBoost,
            Normalization::ZScore,
            Transformation::None,
            Selection::Chi2 { k: 2 },
        ),
        quick(cfg(
            2,
            ModelKind::Autoencoder,
            Normalization::None,
            Transformation::None,
            Selection::None,
        )),
        quick(cfg(
            3,
            ModelKind::GBoost,
            Normalization::None,
            Transformation::None,
            Selection::None,
        )),
    ];
    let r = run_matrix(&configs, &d, 1);
    assert!(matches!(r[0].status, RunStatus::Skipped(_)));
    assert!(matches!(r[1].status, RunStatus::Failed(_)));
    assert_eq!(r[2].status, RunStatus::Ok);
    for x in &r[..2] {
        assert!(x.scores.is_none() && x.fitted_digest.is_none());
    }
    let csv = emit_report(&r, ReportFormat::Csv);
    assert!(csv.contains(",skipped,skipped,skipped,skipped"));
    assert!(csv.contains(",failed,failed,failed,failed"));
}

#[test]
fn test_rows_never_touch_fitted_state() {
    let d = data(300, 5);
    let mut poisoned = d.clone();
    let noisy = poisoned
        .test
        .features()
        .map_columns(|c, v| v * 1e3 + c as f64);
    poisoned.test = poisoned.test.with_features(noisy).unwrap();
    for c in [
        quick(cfg(
            1,
            ModelKind::Lstm,
            Normalization::MinMax,
            Transformation::YeoJohnson,
            Selection::Chi2 { k: 3 },
        )),
        quick(cfg(
            2,
            ModelKind::Autoencoder,
            Normalization::ZScore,
            Transformation::YeoJohnson,
            Selection::Rfecv,
        )),
        quick(cfg(
            3,
            ModelKind::GBoost,
            Normalization::ZScore,
            Transformation::None,
            Selection::None,
        )),
    ] {
        let a = run_pipeline(&c, &d);
        let b = run_pipeline(&c, &poisoned);
        assert!(a.fitted_digest.is_some());
        assert_eq!(a.fitted_digest, b.fitted_digest, "config {}", c.id);
    }
}

#[test]
fn matrix_is_reproducible_and_parallelism_free() {
    let d = split(&common::synthetic(250, 8, 23, 0.7, 6), 0.8, 6).unwrap();
    let configs: Vec<PipelineConfig> = enumerate_table1(7).into_iter().map(quick).collect();
    let serial = strip_timings(run_matrix(&configs, &d, 1));
    let parallel = strip_timings(run_matrix(&configs, &d, 3));
    assert_eq!(serial, parallel);
    for r in &serial {
        assert_eq!(r.status, RunStatus::Ok, "config {}", r.config.id);
    }
    let ids: Vec<u32> = serial.iter().map(|r| r.config.id).collect();
    assert_eq!(ids, (1..=34).collect::<Vec<_>>());
    let again = run_matrix(&configs, &d, 2);
    assert_eq!(
        emit_report(&again, ReportFormat::Csv),
        emit_report(&serial, ReportFormat::Csv)
    );
    assert_eq!(emit_report(&serial, ReportFormat::Csv).lines().count(), 35);
}

#[test]
fn config_json_round_trip() {
    for c in enumerate_table1(3) {
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<PipelineConfig>(&json).unwrap(), c);
    }
    let minimal: PipelineConfig = serde_json::from_str(
        r#"{"id":5,"model":"gboost","normalization":"minmax","transformation":"none","selection":{"chi2":{"k":4}}}"#,
    )
    .unwrap();
    assert_eq!(minimal.selection, Selection::Chi2 { k: 4 });
    assert_eq!(minimal.hyperparameters.gboost.n_estimators, 100);
}
