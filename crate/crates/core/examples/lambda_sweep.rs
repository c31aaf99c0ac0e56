//! ‖F‖ along n₂ = λn₁ + p: bounded in λ, and identically zero for p = 0.

use simplex_lebesgue::asymptotics::{multiple_check, lambda_sweep};
use simplex_lebesgue::norm::NormEngine;
use simplex_lebesgue::simplex::DilationVector;

fn main() -> simplex_lebesgue::Result<()> {
    let engine = NormEngine::default();
    let lambdas: Vec<u64> = (1..=12).collect();
    for p in [0, 3, 7] {
        let s = lambda_sweep(&engine, 20, p, &lambdas)?;
        let norms: Vec<String> = s.rows.iter().map(|r| format!("{:.3}", r.norm_f)).collect();
        println!("p = {p}: {}", norms.join(" "));
    }
    let report = multiple_check(&engine, &DilationVector::new(vec![20.0, 60.0, 180.0])?)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}
