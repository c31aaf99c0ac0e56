//! Two special regimes: last entry an integer combination of the
//! others, and last entry dominating the rest logarithmically.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{Kernel, NormEngine};
use crate::simplex::DilationVector;

use super::predictor::{main_term, remainder_envelope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultipleRelation {
    pub j: usize,
    pub lambda: u64,
    pub p: u64,
}

fn as_integer(v: f64) -> Option<u64> {
    (v.fract() == 0.0 && v >= 1.0 && v < 2f64.powi(53)).then_some(v as u64)
}

/// `n_d = λ_j n_j + p_j` with `0 ≤ p_j < n_j` for every `j < d`; integer
/// entries only.
pub fn multiple_relations(n: &DilationVector) -> Result<Vec<MultipleRelation>> {
    let ints: Option<Vec<u64>> = n.entries().iter().map(|v| as_integer(*v)).collect();
    let ints = ints.ok_or_else(|| {
        Error::InvalidDilation(format!("the multiple relation needs integer entries, got {n}"))
    })?;
    let last = *ints.last().expect("non-empty");
    Ok(ints[..ints.len() - 1]
        .iter()
        .enumerate()
        .map(|(j, nj)| MultipleRelation {
            j: j + 1,
            lambda: last / nj,
            p: last % nj,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultipleReport {
    pub n: Vec<f64>,
    pub relations: Vec<MultipleRelation>,
    pub norm_d: f64,
    pub norm_f: f64,
    pub main_term: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
    /// Every `p_j` is zero, which forces `F ≡ 0`.
    pub exact_multiples: bool,
}

/// Residual of `‖D_n‖` against the main term alone.
pub fn multiple_check(engine: &NormEngine, n: &DilationVector) -> Result<MultipleReport> {
    if n.dim() < 2 {
        return Err(Error::InvalidDilation("needs at least two entries".into()));
    }
    let relations = multiple_relations(n)?;
    let main = main_term(n)?;
    let norm_d = engine.l1_norm(Kernel::D, n)?.value;
    let norm_f = engine.l1_norm(Kernel::F, n)?.value;
    let envelope = remainder_envelope(n);
    let residual = norm_d - main;
    Ok(MultipleReport {
        n: n.entries().to_vec(),
        exact_multiples: relations.iter().all(|r| r.p == 0),
        relations,
        norm_d,
        norm_f,
        main_term: main,
        residual,
        envelope,
        ratio: residual / envelope,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaRow {
    pub lambda: u64,
    pub n2: f64,
    pub norm_f: f64,
    pub f_identically_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSweep {
    pub n1: u64,
    pub p: u64,
    pub rows: Vec<LambdaRow>,
}

impl LambdaSweep {
    /// `max_λ ‖F‖ / min_{λ ≥ from} ‖F‖`.
    pub fn growth_ratio(&self, from: u64) -> f64 {
        let max = self.rows.iter().map(|r| r.norm_f).fold(0.0, f64::max);
        let min = self
            .rows
            .iter()
            .filter(|r| r.lambda >= from)
            .map(|r| r.norm_f)
            .fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// `‖F_{(n₁, λn₁+p)}‖` across λ.
pub fn lambda_sweep(engine: &NormEngine, n1: u64, p: u64, lambdas: &[u64]) -> Result<LambdaSweep> {
    if p >= n1 {
        return Err(Error::InvalidArgument(format!("need p < n1, got p = {p}, n1 = {n1}")));
    }
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let n2 = (lambda * n1 + p) as f64;
            let n = DilationVector::new(vec![n1 as f64, n2])?;
            let field = crate::simplex::fractional_coefficients(&n)?;
            Ok(LambdaRow {
                lambda,
                n2,
                norm_f: engine.l1_norm(Kernel::F, &n)?.value,
                f_identically_zero: field.is_zero(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(LambdaSweep { n1, p, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerRegimeReport {
    pub predictor: f64,
    pub envelope: f64,
    pub residual: f64,
    pub ratio: f64,
}

/// `(2^{d+1}/π)(1 + Σ_{j<d} ln n₁/ln n_j) Π ln n_i` against the envelope
/// `(ln n_{d−1}/ln n_d + ln ln n₁/ln n₁) Π ln n_k`. Requires `n_d > n_{d−1}`.
pub fn power_regime(n: &DilationVector, norm_d: f64) -> Result<PowerRegimeReport> {
    let d = n.dim();
    if d < 2 || n.n(d) <= n.n(d - 1) {
        return Err(Error::InvalidDilation(format!(
            "the regime needs n_d > n_(d-1), got {n}"
        )));
    }
    main_term(n)?;
    let l1 = n.first().ln();
    let sum: f64 = n.entries()[..d - 1].iter().map(|v| l1 / v.ln()).sum();
    let prod = n.log_product();
    let predictor = 2f64.powi(d as i32 + 1) / PI * (1.0 + sum) * prod;
    let envelope = (n.n(d - 1).ln() / n.n(d).ln() + l1.ln() / l1) * prod;
    let residual = norm_d - predictor;
    Ok(PowerRegimeReport {
        predictor,
        envelope,
        residual,
        ratio: residual / envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[f64]) -> DilationVector {
        DilationVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn relations() {
        let r = multiple_relations(&dv(&[20.0, 30.0, 83.0])).unwrap();
        assert_eq!(r[0], MultipleRelation { j: 1, lambda: 4, p: 3 });
        assert_eq!(r[1], MultipleRelation { j: 2, lambda: 2, p: 23 });
        assert!(multiple_relations(&dv(&[20.5, 83.0])).is_err());
    }

    #[test]
    fn exact_multiples_kill_f() {
        let e = NormEngine::default();
        let s = lambda_sweep(&e, 20, 0, &[1, 2, 3]).unwrap();
        assert!(s.rows.iter().all(|r| r.f_identically_zero && r.norm_f == 0.0));
        let s = lambda_sweep(&e, 20, 3, &[1, 2]).unwrap();
        assert!(s.rows.iter().all(|r| !r.f_identically_zero && r.norm_f > 0.0));
        assert!(lambda_sweep(&e, 20, 20, &[1]).is_err());
    }

    #[test]
    fn multiple_check_isotropic_matches_constant() {
        let e = NormEngine::default();
        let r = multiple_check(&e, &dv(&[16.0, 16.0])).unwrap();
        assert!(r.exact_multiples);
        assert_eq!(r.norm_f, 0.0);
        assert!((r.main_term - super::super::isotropic_constant(16.0, 2)).abs() < 1e-12);
    }

    #[test]
    fn power_regime_envelope_shrinks() {
        assert!(power_regime(&dv(&[10.0, 10.0]), 1.0).is_err());
        let a = power_regime(&dv(&[10.0, 1e4]), 0.0).unwrap();
        let b = power_regime(&dv(&[10.0, 1e8]), 0.0).unwrap();
        let prod_a = 10f64.ln() * 1e4f64.ln();
        let prod_b = 10f64.ln() * 1e8f64.ln();
        assert!(b.envelope / prod_b < a.envelope / prod_a);
        // d = 2: 8/π · (1 + 1) · ln n₁ ln n₂.
        assert!((a.predictor - 16.0 / PI * prod_a).abs() < 1e-10);
    }
}
