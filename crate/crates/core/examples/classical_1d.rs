//! One-dimensional Lebesgue constants against (8/π) ln n.

use simplex_lebesgue::asymptotics::classical_1d;
use simplex_lebesgue::norm::{Kernel, NormEngine};
use simplex_lebesgue::simplex::DilationVector;

fn main() -> simplex_lebesgue::Result<()> {
    let engine = NormEngine::default();
    println!("{:>6} {:>12} {:>12} {:>9}", "n", "‖D_n‖", "(8/π)ln n", "diff");
    for j in 4..=14 {
        let n = (1u32 << j) as f64;
        let v = engine.l1_norm(Kernel::D, &DilationVector::new(vec![n])?)?.value;
        println!("{n:>6} {v:>12.6} {:>12.6} {:>9.5}", classical_1d(n), v - classical_1d(n));
    }
    Ok(())
}
