//! The 𝔉ᵏ functional: F-norms of partially collapsed dilation vectors plus
//! a μ-weighted integral of δ-shifted F-norms.
//!
//! For `l = 0..=k−2`, with `ñ = (n₁·1^l, n₂, …, n_{k−l−1})` (length `k−2`),
//!
//! ```text
//! 𝔉ᵏ = 2π Σ_l ( ‖F_{n₁1^l, n^{k−l}}‖ − ‖F_{n₁1^l, n^{k−l−1}, n₁}‖
//!               + Σ_{1≤|μ|≤M_l} |μ|⁻¹ ∫_{−π}^{π} ‖δ_{n₁(t+2πμ), 1/ñ} G‖ − 2‖G‖ dt )
//! ```
//!
//! where `G = F_{ñ, n₁}` and `M_l = [n_{k−l}/n₁]`. At `k = 2` the vector `ñ` is
//! empty, `G` is the constant `{n₁}` and its norm is its absolute value.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::apply_delta;
use crate::simplex::{fractional_coefficients_with_budget, snapped_floor, DilationVector};

use super::quadrature::{Kernel, NormEngine};

pub const DEFAULT_T_NODES: usize = 64;

/// Upper end of the μ-sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MuRange {
    /// `[n_{k−l}/n₁]`.
    #[default]
    Theorem,
    /// `[n_{k−l}/(2n₁)]`.
    Proof,
}

impl MuRange {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(MuRange::Theorem),
            "proof" => Ok(MuRange::Proof),
            other => Err(Error::Parse(format!(
                "unknown mu range {other:?} (expected theorem or proof)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MuRange::Theorem => "theorem",
            MuRange::Proof => "proof",
        }
    }

    fn upper(&self, top: f64, n1: f64) -> usize {
        let q = match self {
            MuRange::Theorem => top / n1,
            MuRange::Proof => top / (2.0 * n1),
        };
        snapped_floor(q, q.max(1.0), 1).max(0) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrakMuTerm {
    pub mu: i64,
    /// `∫ ‖δ G‖ − 2‖G‖ dt` on the refined node set.
    pub integral: f64,
    /// Same integral on the coarse node set.
    pub integral_coarse: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrakLTerm {
    pub l: usize,
    /// `‖F_{n₁1^l, n^{k−l}}‖`.
    pub norm_full: f64,
    /// `‖F_{n₁1^l, n^{k−l−1}, n₁}‖`.
    pub norm_swapped: f64,
    pub tilde: Vec<f64>,
    /// `‖F_{ñ, n₁}‖`.
    pub norm_g: f64,
    pub mu_max: usize,
    pub mu_terms: Vec<FrakMuTerm>,
}

impl FrakLTerm {
    pub fn mu_sum(&self) -> f64 {
        self.mu_terms
            .iter()
            .map(|m| m.integral / m.mu.unsigned_abs() as f64)
            .sum()
    }

    pub fn contribution(&self) -> f64 {
        2.0 * PI * (self.norm_full - self.norm_swapped + self.mu_sum())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrakFValue {
    pub k: usize,
    pub dilation: Vec<f64>,
    pub value: f64,
    pub terms: Vec<FrakLTerm>,
    pub t_nodes: usize,
    /// `2π Σ |I_fine − I_coarse| / |μ|`.
    pub t_error_estimate: f64,
    pub mu_range: MuRange,
    /// Set when a 0-variate kernel entered the sum (its norm is `|c|`).
    pub zero_dim_convention: bool,
}

fn dv(entries: Vec<f64>) -> Result<DilationVector> {
    DilationVector::new(entries)
}

/// Computes 𝔉ᵏ for the first `k` entries of `n`.
pub fn frak_f(
    engine: &NormEngine,
    k: usize,
    n: &DilationVector,
    t_nodes: usize,
    mu_range: MuRange,
) -> Result<FrakFValue> {
    if k < 2 || k > n.dim() {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 2..={}, got {k}",
            n.dim()
        )));
    }
    if t_nodes < 2 {
        return Err(Error::InvalidArgument("t_nodes must be at least 2".into()));
    }
    let nk = n.prefix(k)?;
    if !nk.is_sorted_ascending() {
        return Err(Error::InvalidDilation(format!(
            "the functional needs ascending entries, got {nk}"
        )));
    }
    let e = nk.entries();
    let n1 = e[0];
    let fine = 2 * t_nodes - 1;
    let t_at = |j: usize| -PI + 2.0 * PI * j as f64 / (fine - 1) as f64;

    let mut terms = Vec::with_capacity(k - 1);
    let mut t_error = 0.0;
    for l in 0..=k - 2 {
        let ones = vec![n1; l];
        let mut full = ones.clone();
        full.extend_from_slice(&e[..k - l]);
        let mut swapped = ones.clone();
        swapped.extend_from_slice(&e[..k - l - 1]);
        swapped.push(n1);
        let mut tilde = ones;
        tilde.extend_from_slice(&e[1..k - l - 1]);
        let mut g_vec = tilde.clone();
        g_vec.push(n1);

        let norm_full = engine.l1_norm(Kernel::F, &dv(full)?)?.value;
        let norm_swapped = engine.l1_norm(Kernel::F, &dv(swapped)?)?.value;
        let g = fractional_coefficients_with_budget(&dv(g_vec)?, engine.config().budget)?;
        let norm_g = engine.l1_norm_field(&g)?.value;
        let xi: Vec<f64> = tilde.iter().map(|v| 1.0 / v).collect();

        let mu_max = mu_range.upper(e[k - l - 1], n1);
        let mus: Vec<i64> = (1..=mu_max as i64).flat_map(|m| [-m, m]).collect();
        let mu_terms: Vec<FrakMuTerm> = mus
            .par_iter()
            .map(|&mu| {
                let values: Vec<f64> = (0..fine)
                    .into_par_iter()
                    .map(|j| {
                        let h = n1 * (t_at(j) + 2.0 * PI * mu as f64);
                        let shifted = apply_delta(&g, h, &xi)?;
                        Ok(engine.l1_norm_field(&shifted)?.value - 2.0 * norm_g)
                    })
                    .collect::<Result<_>>()?;
                let h_fine = 2.0 * PI / (fine - 1) as f64;
                let trap = |vals: &[f64], h: f64| {
                    let m = vals.len();
                    h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[m - 1]))
                };
                let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
                Ok(FrakMuTerm {
                    mu,
                    integral: trap(&values, h_fine),
                    integral_coarse: trap(&coarse, 2.0 * h_fine),
                })
            })
            .collect::<Result<_>>()?;
        t_error += mu_terms
            .iter()
            .map(|m| (m.integral - m.integral_coarse).abs() / m.mu.unsigned_abs() as f64)
            .sum::<f64>();
        terms.push(FrakLTerm {
            l,
            norm_full,
            norm_swapped,
            tilde,
            norm_g,
            mu_max,
            mu_terms,
        });
    }
    let value = terms.iter().map(FrakLTerm::contribution).sum();
    Ok(FrakFValue {
        k,
        dilation: e.to_vec(),
        value,
        // tilde is empty exactly when l = 0 and k = 2.
        zero_dim_convention: terms.iter().any(|t| t.tilde.is_empty()),
        terms,
        t_nodes,
        t_error_estimate: 2.0 * PI * t_error,
        mu_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> NormEngine {
        NormEngine::default()
    }

    #[test]
    fn two_three_example() {
        let n = dv(vec![2.0, 3.0]).unwrap();
        let f = frak_f(&engine(), 2, &n, DEFAULT_T_NODES, MuRange::Theorem).unwrap();
        assert_eq!(f.terms.len(), 1);
        let t = &f.terms[0];
        assert!((t.norm_full - PI).abs() < 1e-9);
        assert_eq!(t.norm_swapped, 0.0);
        assert_eq!(t.mu_max, 1);
        // {2} = 0, so every μ integrand vanishes.
        assert!(t.mu_terms.iter().all(|m| m.integral == 0.0));
        assert!((f.value - 2.0 * PI * PI).abs() < 1e-8);
        assert!(f.zero_dim_convention);
    }

    #[test]
    fn equal_integer_entries_vanish() {
        let n = dv(vec![5.0, 5.0]).unwrap();
        let f = frak_f(&engine(), 2, &n, 16, MuRange::Theorem).unwrap();
        assert_eq!(f.value, 0.0);
    }

    #[test]
    fn zero_dim_integrand_matches_closed_form() {
        // G = {n₁}; ‖δ_h G‖ = |e^{ih} − 1| {n₁} = 2|sin(h/2)| {n₁}.
        let n1 = 2.5f64;
        let n = dv(vec![n1, 6.0]).unwrap();
        let f = frak_f(&engine(), 2, &n, 256, MuRange::Theorem).unwrap();
        let t = &f.terms[0];
        assert_eq!(t.mu_max, 2);
        assert!((t.norm_g - 0.5).abs() < 1e-15);
        for m in &t.mu_terms {
            // ∫_{−π}^{π} |sin(n₁(t+2πμ)/2)| dt for n₁ = 5/2 by fine midpoint sums.
            let steps = 200_000;
            let h = 2.0 * PI / steps as f64;
            let mut acc = 0.0;
            for j in 0..steps {
                let t = -PI + (j as f64 + 0.5) * h;
                acc += (n1 * (t + 2.0 * PI * m.mu as f64) / 2.0).sin().abs();
            }
            let oracle = 0.5 * (2.0 * acc * h) - 2.0 * 0.5 * 2.0 * PI;
            assert!((m.integral - oracle).abs() < 1e-3, "{} vs {oracle}", m.integral);
        }
    }

    #[test]
    fn proof_range_halves_mu() {
        let n = dv(vec![2.5, 6.0]).unwrap();
        let f = frak_f(&engine(), 2, &n, 8, MuRange::Proof).unwrap();
        assert_eq!(f.terms[0].mu_max, 1);
    }

    #[test]
    fn empty_mu_range_is_zero_not_error() {
        let n = dv(vec![4.5, 5.0, 7.0]).unwrap();
        let f = frak_f(&engine(), 3, &n, 8, MuRange::Theorem).unwrap();
        assert_eq!(f.terms.len(), 2);
        assert!(f.terms.iter().all(|t| t.mu_max == 1));
        let n = dv(vec![4.5, 5.0, 7.0]).unwrap();
        let f = frak_f(&engine(), 3, &n, 8, MuRange::Proof).unwrap();
        assert!(f.terms.iter().all(|t| t.mu_terms.is_empty()));
    }

    #[test]
    fn rejects_descending_and_bad_k() {
        let n = dv(vec![5.0, 3.0]).unwrap();
        assert!(frak_f(&engine(), 2, &n, 8, MuRange::Theorem).is_err());
        let n = dv(vec![3.0, 5.0]).unwrap();
        assert!(frak_f(&engine(), 3, &n, 8, MuRange::Theorem).is_err());
        assert!(frak_f(&engine(), 1, &n, 8, MuRange::Theorem).is_err());
    }

    #[test]
    fn three_dim_structure() {
        // l = 0: ‖F_{n1,n2,n3}‖ − ‖F_{n1,n2,n1}‖, G = F_{n2,n1}, ξ = 1/n2, μ ≤ [n3/n1].
        // l = 1: ‖F_{n1,n1,n2}‖ − ‖F_{n1,n1,n1}‖, G = F_{n1,n1}, μ ≤ [n2/n1].
        let n = dv(vec![3.0, 7.5, 10.0]).unwrap();
        let f = frak_f(&engine(), 3, &n, 8, MuRange::Theorem).unwrap();
        assert_eq!(f.terms[0].tilde, vec![7.5]);
        assert_eq!(f.terms[0].mu_max, 3);
        assert_eq!(f.terms[1].tilde, vec![3.0]);
        assert_eq!(f.terms[1].mu_max, 2);
        assert!(!f.zero_dim_convention);
        let e = engine();
        let nf = e
            .l1_norm(Kernel::F, &dv(vec![3.0, 7.5, 10.0]).unwrap())
            .unwrap()
            .value;
        assert_eq!(f.terms[0].norm_full, nf);
    }
}
