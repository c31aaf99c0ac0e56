//! Growth of I_n(α) relative to ln² n, and the behaviour at convergent
//! denominators.
//!
//! cargo run --example irrational_growth -- golden

use simplex_lebesgue::irrational::{liouville_dip_scan, study_ratio, AlphaSpec};
use simplex_lebesgue::norm::NormEngine;

fn main() -> simplex_lebesgue::Result<()> {
    let alpha = AlphaSpec::parse(&std::env::args().nth(1).unwrap_or_else(|| "golden".into()))?;
    let engine = NormEngine::default();
    let grid: Vec<u64> = (8..=48).map(|j| (2f64.powf(j as f64 / 4.0)).round() as u64).collect();
    let study = study_ratio(&engine, &alpha, &grid)?;
    for r in &study.records {
        let mark = if r.is_convergent_q { "  q" } else { "" };
        println!("{:>6}  I_n = {:>9.4}  ratio {:.4}{mark}", r.n, r.i_n, r.ratio);
    }
    println!("running min {:.4}, running max {:.4}", study.omega_estimate, study.big_omega_estimate);

    let dip = liouville_dip_scan(&engine, &alpha, 16, 4096)?;
    for d in &dip.dips {
        println!("q = {:>5}: ratio {:.4}, nearby median {:.4}, factor {:.3}", d.q, d.ratio_at_q, d.generic_median, d.factor);
    }
    if let Some(f) = dip.factor {
        println!("overall dip factor {f:.3}");
    }
    Ok(())
}
