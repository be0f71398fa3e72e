#![allow(dead_code)]

use flowbench::{Dataset, Matrix, SyntheticSpec};

pub fn dataset(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
    let cols = rows.first().map_or(0, Vec::len);
    let names = (0..cols).map(|c| format!("f{c}")).collect();
    Dataset::new(Matrix::from_rows(&rows), labels, names).unwrap()
}

pub fn synthetic(
    n_rows: usize,
    n_informative: usize,
    n_noise: usize,
    rate: f64,
    seed: u64,
) -> Dataset {
    flowbench::ingest::generate_synthetic(&SyntheticSpec {
        n_rows,
        n_informative,
        n_noise,
        anomaly_rate: rate,
        mean_shift: 2.0,
        seed,
    })
    .unwrap()
}

/// 1-D data with x < 0 labelled 0 and x > 0 labelled 1, balanced.
pub fn separable_1d(n: usize) -> Dataset {
    let half = n / 2;
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = u8::from(i >= half);
        let mag = 0.1 + (i % half) as f64 / half as f64;
        rows.push(vec![if label == 1 { mag } else { -mag }]);
        labels.push(label);
    }
    dataset(rows, labels)
}

pub fn accuracy(truth: &[u8], pred: &[u8]) -> f64 {
    truth.iter().zip(pred).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Chi2 by expanding an integer-valued matrix into unit events: every unit of
/// feature mass is one observation tagged with its row's class.
pub fn chi2_by_events(rows: &[Vec<u32>], labels: &[u8]) -> Vec<f64> {
    let n_pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let n = labels.len() as f64;
    let cols = rows[0].len();
    (0..cols)
        .map(|c| {
            let mut events: Vec<u8> = Vec::new();
            for (row, &label) in rows.iter().zip(labels) {
                for _ in 0..row[c] {
                    events.push(label);
                }
            }
            if events.is_empty() {
                return 0.0;
            }
            let total = events.len() as f64;
            let mut score = 0.0;
            for (class, prior) in [(0u8, (n - n_pos) / n), (1u8, n_pos / n)] {
                let observed = events.iter().filter(|&&e| e == class).count() as f64;
                let expected = total * prior;
                score += (observed - expected).powi(2) / expected;
            }
            score
        })
        .collect()
}
