//! Pointwise values of D, S, F and R, and the decomposition residual.
//!
//! cargo run --example kernels

use simplex_lebesgue::kernel::{PointEvaluator, TorusPoint};
use simplex_lebesgue::simplex::DilationVector;

fn main() -> simplex_lebesgue::Result<()> {
    let n = DilationVector::new(vec![7.3, 19.6])?;
    let ev = PointEvaluator::new(&n)?;
    println!("n = {n}: {} lattice points", ev.lattice_points());
    for x in [[0.3, -1.1], [2.0, 0.05], [-2.9, 3.0]] {
        let p = TorusPoint::new(x.to_vec());
        let head = TorusPoint::new(vec![x[0]]);
        let d = ev.d(&p)?;
        let s = ev.s(&p)?;
        let f = ev.f(&head)?;
        let (r, tail) = ev.r(&p, 4096)?;
        let (res, bound) = ev.identity_residual(&p, 4096)?;
        println!("x = {x:?}");
        println!("  D = {d:.6}  S = {s:.6}");
        println!("  F = {f:.6}  R = {r:.6} (tail ≤ {tail:.2e})");
        println!("  |D − S + e^{{i n_d x_d}} F − R| = {res:.2e} ≤ {bound:.2e}");
    }
    Ok(())
}
