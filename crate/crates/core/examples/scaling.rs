//! Fit scalers on a training matrix and apply them to unseen rows.
//!
//! Run with: cargo run --example scaling

use flowbench::scale::{
    apply_minmax, apply_yeojohnson, apply_zscore, fit_minmax, fit_yeojohnson, fit_zscore,
    ScalerParams,
};
use flowbench::Matrix;

fn main() -> flowbench::Result<()> {
    // Packet counts (right-skewed), a signed delta and a constant column.
    let train = Matrix::from_rows(&[
        [1.0, -3.0, 7.0],
        [2.0, -1.0, 7.0],
        [3.0, 0.0, 7.0],
        [8.0, 1.0, 7.0],
        [40.0, 2.0, 7.0],
        [250.0, 4.0, 7.0],
    ]);
    let test = Matrix::from_rows(&[[500.0, -10.0, 9.0], [5.0, 0.5, 7.0]]);

    let mm = fit_minmax(&train)?;
    println!(
        "min-max test rows (not clipped): {:?}",
        apply_minmax(&mm, &test)?.as_slice()
    );

    let z = fit_zscore(&train)?;
    println!(
        "z-score test rows: {:?}",
        apply_zscore(&z, &test)?.as_slice()
    );

    let yj = fit_yeojohnson(&train)?;
    println!("Yeo-Johnson lambdas: {:?}", yj.lambdas());
    println!(
        "transformed test rows: {:?}",
        apply_yeojohnson(&yj, &test)?.as_slice()
    );

    let doc = ScalerParams::MinMax(mm);
    println!("persisted: {}", serde_json::to_string(&doc)?);
    Ok(())
}
