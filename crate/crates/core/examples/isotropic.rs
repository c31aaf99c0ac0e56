//! Two-dimensional isotropic norms against (24/π) ln² n.

use simplex_lebesgue::asymptotics::isotropic_constant;
use simplex_lebesgue::norm::{Kernel, NormEngine};
use simplex_lebesgue::simplex::DilationVector;

fn main() -> simplex_lebesgue::Result<()> {
    let engine = NormEngine::default();
    for n in [16.0f64, 32.0, 64.0, 128.0, 256.0] {
        let r = engine.l1_norm(Kernel::D, &DilationVector::isotropic(n, 2)?)?;
        let main = isotropic_constant(n, 2);
        let ratio = (r.value - main).abs() / (n.ln() * n.ln().ln());
        println!("n = {n:>4}: ‖D‖ = {:>10.4}, main {main:>10.4}, |diff|/(ln n ln ln n) = {ratio:.3} on {}", r.value, r.grid_label());
    }
    Ok(())
}
