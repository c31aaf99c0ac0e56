//! Main term, 𝔉ᵏ corrections and the residual envelope for one dilation.
//!
//! cargo run --example predictor -- 8,32,128

use std::collections::BTreeMap;

use simplex_lebesgue::asymptotics::{full_predictor, remainder_envelope};
use simplex_lebesgue::norm::{frak_f, Kernel, MuRange, NormEngine, DEFAULT_T_NODES};

fn main() -> simplex_lebesgue::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "8,32,128".into());
    let n = simplex_lebesgue::run::parse_dilation(&arg)?;
    let engine = NormEngine::default();

    let mut frak = BTreeMap::new();
    for k in 2..=n.dim() {
        let f = frak_f(&engine, k, &n, DEFAULT_T_NODES, MuRange::Theorem)?;
        println!("𝔉^{k} = {:.6} ({} l-terms, t error {:.1e})", f.value, f.terms.len(), f.t_error_estimate);
        frak.insert(k, f.value);
    }
    let p = full_predictor(&n, &frak)?;
    let norm = engine.l1_norm(Kernel::D, &n)?.value;
    println!("‖D‖ = {norm:.6}");
    println!("main term {:.6} + 𝔉 part {:.6} = {:.6}", p.main_term, p.frak_contribution(), p.total);
    let envelope = remainder_envelope(&n);
    println!("residual {:.6}, envelope {envelope:.6}, ratio {:.4}", p.residual(norm), p.residual(norm) / envelope);
    Ok(())
}
