//! The twisted double integral of |D_n(x) − e^{iα}D_n(y)|-type kernels
//! against 4π‖D_n‖.

use std::f64::consts::PI;

use simplex_lebesgue::norm::{double_integral_ld2, NormEngine};

fn main() -> simplex_lebesgue::Result<()> {
    let engine = NormEngine::default();
    for n in [16usize, 64, 256] {
        for (a, b) in [(0.4, -1.3), (2.2, 0.7)] {
            let r = double_integral_ld2(&engine, n, a, b)?;
            let diff = r.value - 4.0 * PI * r.norm_d;
            println!(
                "n = {n:>3}, α = {a:>4}, β = {b:>4}: {:.5} − 4π‖D‖ = {diff:.5} ({:.3} per ln ln n)",
                r.value,
                diff / (n as f64).ln().ln()
            );
        }
    }
    Ok(())
}
