use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::DilationVector;

fn check_hypothesis(n: &DilationVector) -> Result<()> {
    if !n.is_sorted_ascending() {
        return Err(Error::InvalidDilation(format!("entries must be ascending, got {n}")));
    }
    if let Some(bad) = n.entries().iter().find(|v| **v <= 3.0) {
        return Err(Error::InvalidDilation(format!(
            "every entry must exceed 3, got {bad}"
        )));
    }
    Ok(())
}

/// `2^{d+1}/π · (1 + Σ_j ln n₁/ln n_j) · Π ln n_i`.
pub fn main_term(n: &DilationVector) -> Result<f64> {
    check_hypothesis(n)?;
    let d = n.dim() as i32;
    let l1 = n.first().ln();
    let sum: f64 = n.entries().iter().map(|v| l1 / v.ln()).sum();
    Ok(2f64.powi(d + 1) / PI * (1.0 + sum) * n.log_product())
}

/// `2^{d+1}(d+1)/π · ln^d n`, the isotropic value of [`main_term`].
pub fn isotropic_constant(n: f64, d: usize) -> f64 {
    2f64.powi(d as i32 + 1) * (d as f64 + 1.0) / PI * n.ln().powi(d as i32)
}

/// `(8/π) ln n`: the one-dimensional main term of `∫_T |D_n|`.
pub fn classical_1d(n: f64) -> f64 {
    8.0 / PI * n.ln()
}

/// `ln ln n₁ · Π_{j≥2} ln n_j`.
pub fn remainder_envelope(n: &DilationVector) -> f64 {
    let e = n.entries();
    e[0].ln().ln() * e[1..].iter().map(|v| v.ln()).product::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaWeight {
    pub eta: Vec<u8>,
    pub weight: f64,
}

/// All `η ∈ {0,1}^d` with `|η| = d−k`, in lexicographic order, weighted by
/// `Π_{i: η_i = 1} ln(n_{d−i+1}/n₁)`.
pub fn eta_weights(n: &DilationVector, k: usize) -> Result<Vec<EtaWeight>> {
    let d = n.dim();
    if k < 2 || k > d {
        return Err(Error::InvalidArgument(format!("k must lie in 2..={d}, got {k}")));
    }
    if !n.is_sorted_ascending() {
        return Err(Error::InvalidDilation(format!("entries must be ascending, got {n}")));
    }
    let ones = d - k;
    let n1 = n.first();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << d) {
        if mask.count_ones() as usize != ones {
            continue;
        }
        // Bit d−i (from the left) is η_i, so ascending masks are lexicographic.
        let eta: Vec<u8> = (1..=d).map(|i| ((mask >> (d - i)) & 1) as u8).collect();
        let weight = eta
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == 1)
            .map(|(i0, _)| (n.n(d - (i0 + 1) + 1) / n1).ln())
            .product();
        out.push(EtaWeight { eta, weight });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrakTerm {
    pub k: usize,
    pub frak: f64,
    pub etas: Vec<EtaWeight>,
    pub weight_sum: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictorValue {
    pub main_term: f64,
    pub frak_terms: Vec<FrakTerm>,
    /// `main_term + Σ contributions`.
    pub total: f64,
    /// `ln ln n₁ · Π_{j≥2} ln n_j`.
    pub envelope: f64,
}

impl PredictorValue {
    pub fn frak_contribution(&self) -> f64 {
        self.frak_terms.iter().map(|t| t.contribution).sum()
    }

    pub fn residual(&self, norm: f64) -> f64 {
        norm - self.total
    }
}

/// Main term plus `Σ_k 𝔉ᵏ Σ_η weight(η)`; needs 𝔉ᵏ for every `k = 2..=d`.
pub fn full_predictor(n: &DilationVector, frak: &BTreeMap<usize, f64>) -> Result<PredictorValue> {
    let main = main_term(n)?;
    let mut frak_terms = Vec::new();
    for k in 2..=n.dim() {
        let value = *frak.get(&k).ok_or_else(|| {
            Error::InvalidArgument(format!("missing value of the functional for k = {k}"))
        })?;
        let etas = eta_weights(n, k)?;
        let weight_sum: f64 = etas.iter().map(|e| e.weight).sum();
        frak_terms.push(FrakTerm {
            k,
            frak: value,
            contribution: value * weight_sum,
            weight_sum,
            etas,
        });
    }
    let total = main + frak_terms.iter().map(|t| t.contribution).sum::<f64>();
    Ok(PredictorValue {
        main_term: main,
        frak_terms,
        total,
        envelope: remainder_envelope(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[f64]) -> DilationVector {
        DilationVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_dim_example() {
        let e = std::f64::consts::E;
        let v = main_term(&dv(&[e * e, e * e * e])).unwrap();
        assert!((v - 128.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn isotropic_reduces() {
        for d in 1..=4 {
            for n in [3.5, 10.0, 1000.0] {
                let v = main_term(&DilationVector::isotropic(n, d).unwrap()).unwrap();
                let w = isotropic_constant(n, d);
                assert!((v - w).abs() <= 1e-12 * w, "{v} {w}");
            }
        }
        assert!((isotropic_constant(100.0, 1) - classical_1d(100.0)).abs() < 1e-12);
    }

    #[test]
    fn three_dim_expansion() {
        let (a, b, c) = (5.0f64, 11.0f64, 40.0f64);
        let v = main_term(&dv(&[a, b, c])).unwrap();
        let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
        let expect = 16.0 / PI * (2.0 * la * lb * lc + lb * la * la + lc * la * la);
        assert!((v - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn rejects_hypothesis_violations() {
        assert!(main_term(&dv(&[3.0, 5.0])).is_err());
        assert!(main_term(&dv(&[6.0, 5.0])).is_err());
    }

    #[test]
    fn eta_weight_examples() {
        let w = eta_weights(&dv(&[4.0, 9.0]), 2).unwrap();
        assert_eq!(w, vec![EtaWeight { eta: vec![0, 0], weight: 1.0 }]);
        let n = dv(&[4.0, 9.0, 30.0]);
        let w = eta_weights(&n, 2).unwrap();
        let got: Vec<f64> = w.iter().map(|e| e.weight).collect();
        assert_eq!(w.len(), 3);
        assert!((got[0] - 0.0).abs() < 1e-15); // η = (0,0,1): ln(n₁/n₁)
        assert!((got[1] - (9.0f64 / 4.0).ln()).abs() < 1e-15);
        assert!((got[2] - (30.0f64 / 4.0).ln()).abs() < 1e-15);
        let iso = eta_weights(&DilationVector::isotropic(7.0, 4).unwrap(), 2).unwrap();
        assert!(iso.iter().all(|e| e.weight == 0.0));
        assert_eq!(iso.len(), 6);
    }

    #[test]
    fn predictor_d2_and_missing() {
        let n = dv(&[10.0, 50.0]);
        let mut f = BTreeMap::new();
        assert!(full_predictor(&n, &f).is_err());
        f.insert(2, 1.25);
        let p = full_predictor(&n, &f).unwrap();
        let (l1, l2) = (10f64.ln(), 50f64.ln());
        let expect = 16.0 / PI * l1 * l2 + 8.0 / PI * l1 * l1 + 1.25;
        assert!((p.total - expect).abs() < 1e-12);
        assert!((p.envelope - l1.ln() * l2).abs() < 1e-15);
        assert!((p.residual(100.0) - (100.0 - expect)).abs() < 1e-12);
    }
}
