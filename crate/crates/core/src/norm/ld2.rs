//! The one-dimensional double integral
//! `L(n; α, β) = ∫∫_{T²} |e^{i(αy+β)} D_n(x−y) − D_n(x)| dx dy`
//! and its comparison with `‖D_n‖`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{grid_eval, next_smooth, plan, GridSpec};
use crate::simplex::{indicator_coefficients, DilationVector, SimplexLattice};

use super::quadrature::{Kernel, NormEngine, RefinementStep};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ld2Result {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    /// `‖D_n‖` on `T`.
    pub norm_d: f64,
    pub history: Vec<RefinementStep>,
    pub error_estimate: f64,
}

fn dirichlet_values(n: usize, m: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    // D_n(2πj/M), j = 0..M, by an unshifted inverse DFT of the indicator.
    let mut origin = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..=n {
        origin[k % m] += Complex64::new(1.0, 0.0);
    }
    plan(m).process(&mut origin);
    let dv = DilationVector::new(vec![n as f64])?;
    let lattice = SimplexLattice::build(&dv, 1, u128::MAX)?;
    let field = indicator_coefficients(&lattice)?;
    let centred = grid_eval(&field, &GridSpec::new(vec![m])?)?.values;
    Ok((origin, centred))
}

/// One level: Riemann sum in `x` (periodic), trapezoid in `y` because the
/// phase `e^{iαy}` is not periodic unless α is an integer.
fn level(n: usize, alpha: f64, beta: f64, m: usize) -> Result<f64> {
    let (origin, centred) = dirichlet_values(n, m)?;
    // x_t = −π + 2πt/M, y_s = −π + 2πs/M, so x_t − y_s = 2π(t−s)/M.
    let total: f64 = (0..=m)
        .into_par_iter()
        .map(|s| {
            let y = -PI + 2.0 * PI * s as f64 / m as f64;
            let phase = Complex64::from_polar(1.0, alpha * y + beta);
            let w = if s == 0 || s == m { 0.5 } else { 1.0 };
            let row: f64 = (0..m)
                .map(|t| {
                    let shifted = origin[(t + m - s % m) % m];
                    (phase * shifted - centred[t]).norm()
                })
                .sum();
            w * row
        })
        .sum();
    let h = 2.0 * PI / m as f64;
    Ok(total * h * h)
}

pub fn double_integral_ld2(
    engine: &NormEngine,
    n: usize,
    alpha: f64,
    beta: f64,
) -> Result<Ld2Result> {
    if n <= 3 {
        return Err(Error::InvalidArgument(format!("n must exceed 3, got {n}")));
    }
    let cfg = engine.config();
    let norm_d = engine
        .l1_norm(Kernel::D, &DilationVector::new(vec![n as f64])?)?
        .value;
    let mut m = next_smooth(cfg.rho.max(1) * (n + 1));
    let mut history: Vec<RefinementStep> = Vec::new();
    for _ in 0..=cfg.max_doublings {
        let cells = (m as u128) * (m as u128 + 1);
        if cells > cfg.budget.saturating_mul(64) {
            return Err(Error::ResourceLimit {
                what: "double integral grid",
                estimate: cells,
                budget: cfg.budget.saturating_mul(64),
            });
        }
        let riemann = level(n, alpha, beta, m)?;
        let extrapolated = history.last().map(|p| (4.0 * riemann - p.riemann) / 3.0);
        history.push(RefinementStep {
            grid: vec![m, m + 1],
            riemann,
            extrapolated,
        });
        if history.len() >= 3 {
            let a = history[history.len() - 1].extrapolated.unwrap_or(0.0);
            let b = history[history.len() - 2].extrapolated.unwrap_or(0.0);
            let err = (a - b).abs();
            if err <= cfg.tol * a.abs() {
                return Ok(Ld2Result {
                    n,
                    alpha,
                    beta,
                    value: a,
                    norm_d,
                    history,
                    error_estimate: err,
                });
            }
        }
        m *= 2;
    }
    Err(Error::NotConverged {
        tol: cfg.tol,
        history,
    })
}
