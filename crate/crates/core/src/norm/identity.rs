//! Pointwise check of the splitting `D = S − e^{i n_d x_d} F(x' − x_d m) + R`
//! at seeded random torus points.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{PointEvaluator, TorusPoint};
use crate::simplex::DilationVector;

/// Floating-point slack per lattice point on top of the analytic ν-tail.
pub const ROUNDING_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityPoint {
    pub x: Vec<f64>,
    pub residual: f64,
    pub tail_bound: f64,
    pub allowed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub dilation: Vec<f64>,
    pub nu_max: usize,
    pub seed: Option<u64>,
    pub lattice_points: u128,
    pub points: Vec<IdentityPoint>,
    pub median_residual: f64,
    pub max_residual: f64,
    /// Largest `residual − allowed`; non-positive when every point passes.
    pub worst_excess: f64,
    pub passed: bool,
}

/// Checks the identity at `num_points` uniform points drawn from a ChaCha8
/// stream seeded with `seed`.
pub fn verify_identity(
    n: &DilationVector,
    num_points: usize,
    nu_max: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..num_points)
        .map(|_| (0..n.dim()).map(|_| rng.gen_range(-PI..PI)).collect())
        .collect();
    let mut report = verify_identity_at(n, &points, nu_max)?;
    report.seed = Some(seed);
    Ok(report)
}

/// Checks the identity at explicit points.
pub fn verify_identity_at(
    n: &DilationVector,
    points: &[Vec<f64>],
    nu_max: usize,
) -> Result<IdentityReport> {
    if n.dim() < 2 {
        return Err(Error::InvalidDilation(
            "the identity needs at least two dimensions".into(),
        ));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != n.dim()) {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            got: bad.len(),
        });
    }
    let eval = PointEvaluator::new(n)?;
    let slack = ROUNDING_SLACK * eval.lattice_points().max(1) as f64;
    let checked: Vec<IdentityPoint> = points
        .par_iter()
        .map(|p| {
            let x = TorusPoint::new(p.clone());
            let (residual, tail_bound) = eval.identity_residual(&x, nu_max)?;
            Ok(IdentityPoint {
                x: x.coords().to_vec(),
                residual,
                tail_bound,
                allowed: tail_bound + slack,
            })
        })
        .collect::<Result<_>>()?;
    let mut sorted: Vec<f64> = checked.iter().map(|p| p.residual).collect();
    sorted.sort_by(f64::total_cmp);
    let median_residual = match sorted.len() {
        0 => 0.0,
        m if m % 2 == 1 => sorted[m / 2],
        m => 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]),
    };
    let worst_excess = checked
        .iter()
        .map(|p| p.residual - p.allowed)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(IdentityReport {
        dilation: n.entries().to_vec(),
        nu_max,
        seed: None,
        lattice_points: eval.lattice_points(),
        median_residual,
        max_residual: sorted.last().copied().unwrap_or(0.0),
        worst_excess: if checked.is_empty() { 0.0 } else { worst_excess },
        passed: checked.iter().all(|p| p.residual <= p.allowed),
        points: checked,
    })
}
