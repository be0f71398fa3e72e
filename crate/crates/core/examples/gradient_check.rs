//! Compare analytic gradients against central finite differences.
//!
//! Run with: cargo run --example gradient_check

use flowbench::neural::{
    gradcheck, gradcheck_autoencoder, gradcheck_dense, gradcheck_lstm, LstmProbe, FD_STEP,
};

fn main() {
    for seed in 0..5 {
        println!(
            "seed {seed}: dense {:.2e}  autoencoder {:.2e}  lstm(T=3) {:.2e}",
            gradcheck_dense(seed),
            gradcheck_autoencoder(seed),
            gradcheck_lstm(seed, 3)
        );
    }
    for seq_len in [1, 5, 10] {
        let mut probe = LstmProbe::random(99, 4, 3, seq_len);
        println!("lstm T={seq_len}: {:.2e}", gradcheck(&mut probe, FD_STEP));
    }
}
