//! `I_n(α) = ∫_T |Σ_{0≤k≤n} {αk} e^{ikx}|` and its growth against `ln² n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{NormEngine, NormResult};
use crate::simplex::CoefficientField;

use super::alpha::{AlphaSpec, DEFAULT_PRECISION_BITS};
use super::cf::cf_expand;

/// Partial quotients requested when listing convergent denominators.
const CF_TERMS: usize = 200;

pub fn frac_field(alpha: &AlphaSpec, n: u64) -> Result<CoefficientField> {
    let w = alpha.frac_multiples(n, DEFAULT_PRECISION_BITS)?;
    Ok(CoefficientField::from_real_1d(&w, format!("I|alpha={alpha}|n={n}")))
}

pub fn i_n_result(engine: &NormEngine, alpha: &AlphaSpec, n: u64) -> Result<NormResult> {
    engine.l1_norm_field(&frac_field(alpha, n)?)
}

pub fn i_n(engine: &NormEngine, alpha: &AlphaSpec, n: u64) -> Result<f64> {
    Ok(i_n_result(engine, alpha, n)?.value)
}

/// Convergent denominators of α that fit in a `u64`.
pub fn convergent_denominators(alpha: &AlphaSpec) -> BTreeSet<u64> {
    cf_expand(alpha, CF_TERMS)
        .denominators()
        .filter_map(BigInt::to_u64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRecord {
    pub n: u64,
    pub i_n: f64,
    /// `I_n / ln² n`.
    pub ratio: f64,
    pub is_convergent_q: bool,
    pub running_min: f64,
    pub running_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioStudy {
    pub alpha: AlphaSpec,
    pub records: Vec<RatioRecord>,
    /// Finite-n estimator of `lim inf I_n/ln² n` (the running minimum).
    pub omega_estimate: f64,
    /// Finite-n estimator of `lim sup I_n/ln² n` (the running maximum).
    pub big_omega_estimate: f64,
}

pub fn study_ratio(engine: &NormEngine, alpha: &AlphaSpec, n_grid: &[u64]) -> Result<RatioStudy> {
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("empty n grid".into()));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) || n_grid[0] < 2 {
        return Err(Error::InvalidArgument(
            "n grid must be strictly increasing with entries ≥ 2".into(),
        ));
    }
    let qs = convergent_denominators(alpha);
    let values: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| i_n(engine, alpha, n))
        .collect::<Result<_>>()?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let records: Vec<RatioRecord> = n_grid
        .iter()
        .zip(values)
        .map(|(&n, v)| {
            let ratio = v / (n as f64).ln().powi(2);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            RatioRecord {
                n,
                i_n: v,
                ratio,
                is_convergent_q: qs.contains(&n),
                running_min: lo,
                running_max: hi,
            }
        })
        .collect();
    Ok(RatioStudy {
        alpha: alpha.clone(),
        records,
        omega_estimate: lo,
        big_omega_estimate: hi,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDip {
    pub q: u64,
    pub ratio_at_q: f64,
    /// Median ratio over non-convergent `n ∈ [q/√2, q√2]`.
    pub generic_median: f64,
    /// `generic_median / ratio_at_q`; above 1 means a dip.
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DipReport {
    pub alpha: AlphaSpec,
    pub range: (u64, u64),
    pub dips: Vec<LocalDip>,
    /// Median of the generic ratios over the whole range divided by the
    /// median ratio at the convergent denominators; `None` without any.
    pub factor: Option<f64>,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Samples per local neighbourhood of a convergent denominator.
const GENERIC_SAMPLES: usize = 12;

/// Compares `I_q/ln² q` at convergent denominators `q ∈ [lo, hi]` with
/// generic `n` nearby. Exact rationals have no convergent tail to study and
/// return an empty report.
pub fn liouville_dip_scan(
    engine: &NormEngine,
    alpha: &AlphaSpec,
    lo: u64,
    hi: u64,
) -> Result<DipReport> {
    if lo < 2 || hi < lo {
        return Err(Error::InvalidArgument(format!("bad range [{lo}, {hi}]")));
    }
    let empty = DipReport {
        alpha: alpha.clone(),
        range: (lo, hi),
        dips: Vec::new(),
        factor: None,
    };
    if alpha.is_declared_rational() {
        return Ok(empty);
    }
    let qs = convergent_denominators(alpha);
    let targets: Vec<u64> = qs.range(lo..=hi).copied().collect();
    if targets.is_empty() {
        return Ok(empty);
    }
    let ratio = |n: u64| -> Result<f64> { Ok(i_n(engine, alpha, n)? / (n as f64).ln().powi(2)) };
    let dips: Vec<(LocalDip, Vec<f64>)> = targets
        .par_iter()
        .map(|&q| {
            let a = ((q as f64) / 2f64.sqrt()).ceil().max(2.0);
            let b = (q as f64) * 2f64.sqrt();
            let mut ns: BTreeSet<u64> = BTreeSet::new();
            for j in 0..GENERIC_SAMPLES {
                let t = j as f64 / (GENERIC_SAMPLES - 1) as f64;
                let n = (a * (b / a).powf(t)).round() as u64;
                if !qs.contains(&n) {
                    ns.insert(n);
                }
            }
            let mut generic: Vec<f64> = ns.iter().map(|&n| ratio(n)).collect::<Result<_>>()?;
            let all = generic.clone();
            let ratio_at_q = ratio(q)?;
            let generic_median = median(&mut generic);
            Ok((
                LocalDip {
                    q,
                    ratio_at_q,
                    generic_median,
                    factor: generic_median / ratio_at_q,
                },
                all,
            ))
        })
        .collect::<Result<_>>()?;
    let mut generic: Vec<f64> = dips.iter().flat_map(|(_, g)| g.iter().copied()).collect();
    let mut at_q: Vec<f64> = dips.iter().map(|(d, _)| d.ratio_at_q).collect();
    let factor = median(&mut generic) / median(&mut at_q);
    Ok(DipReport {
        alpha: alpha.clone(),
        range: (lo, hi),
        dips: dips.into_iter().map(|(d, _)| d).collect(),
        factor: Some(factor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn half_at_four_is_four() {
        let e = NormEngine::default();
        let v = i_n(&e, &AlphaSpec::rational(1, 2).unwrap(), 4).unwrap();
        assert!((v - 4.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn integer_alpha_vanishes_and_shift_invariance() {
        let e = NormEngine::default();
        assert_eq!(i_n(&e, &AlphaSpec::rational(3, 1).unwrap(), 50).unwrap(), 0.0);
        let a = AlphaSpec::parse("surd:1,1,5,2").unwrap();
        let b = AlphaSpec::parse("surd:3,1,5,2").unwrap(); // φ + 1
        assert_eq!(i_n(&e, &a, 200).unwrap(), i_n(&e, &b, 200).unwrap());
    }

    #[test]
    fn rational_period_structure_oracle() {
        // Σ_k {pk/q} e^{ikx} = Σ_r {pr/q} e^{irx} Σ_{j: r+jq ≤ n} e^{ijqx}.
        let (p, q, n) = (3i64, 7i64, 60usize);
        let e = NormEngine::new(crate::norm::NormConfig {
            tol: 1e-5,
            max_doublings: 6,
            ..Default::default()
        });
        let got = i_n(&e, &AlphaSpec::rational(p, q).unwrap(), n as u64).unwrap();
        let m = 1 << 15;
        let mut acc = 0.0;
        for t in 0..m {
            let x = -PI + 2.0 * PI * (t as f64 + 0.5) / m as f64;
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..q as usize {
                let w = ((p * r as i64).rem_euclid(q)) as f64 / q as f64;
                let reps = (n - r) / q as usize;
                let inner = crate::kernel::geometric(reps as i64, q as f64 * x);
                s += w * Complex64::from_polar(1.0, r as f64 * x) * inner;
            }
            acc += s.norm();
        }
        let oracle = acc * 2.0 * PI / m as f64;
        assert!((got - oracle).abs() < 1e-4 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn golden_matches_brute_force_at_1024() {
        let e = NormEngine::new(crate::norm::NormConfig {
            tol: 1e-5,
            max_doublings: 6,
            ..Default::default()
        });
        let n = 1024usize;
        let got = i_n(&e, &AlphaSpec::golden(), n as u64).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let w: Vec<f64> = (0..=n).map(|k| (phi * k as f64).fract()).collect();
        // Dense midpoint rule with direct summation.
        let m = 32 * (n + 1);
        let acc: f64 = (0..m)
            .into_par_iter()
            .map(|t| {
                let x = -PI + 2.0 * PI * (t as f64 + 0.5) / m as f64;
                let s: Complex64 = w
                    .iter()
                    .enumerate()
                    .map(|(k, wk)| wk * Complex64::from_polar(1.0, k as f64 * x))
                    .sum();
                s.norm()
            })
            .sum();
        let oracle = acc * 2.0 * PI / m as f64;
        assert!((got - oracle).abs() < 1e-4 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn study_running_extrema() {
        let e = NormEngine::default();
        let s = study_ratio(&e, &AlphaSpec::golden(), &[16]).unwrap();
        assert_eq!(s.omega_estimate, s.big_omega_estimate);
        let s = study_ratio(&e, &AlphaSpec::golden(), &[16, 21, 32, 34]).unwrap();
        assert!(s.records[1].is_convergent_q && s.records[3].is_convergent_q);
        assert!(!s.records[0].is_convergent_q);
        assert!(s.records.iter().all(|r| r.running_min <= r.ratio && r.ratio <= r.running_max));
        assert!(study_ratio(&e, &AlphaSpec::golden(), &[32, 16]).is_err());
    }

    #[test]
    fn rational_dip_scan_is_empty() {
        let e = NormEngine::default();
        let r = liouville_dip_scan(&e, &AlphaSpec::rational(415, 93).unwrap(), 16, 1024).unwrap();
        assert!(r.dips.is_empty() && r.factor.is_none());
        let r = liouville_dip_scan(&e, &AlphaSpec::golden(), 16, 100).unwrap();
        let qs: Vec<u64> = r.dips.iter().map(|d| d.q).collect();
        assert_eq!(qs, vec![21, 34, 55, 89]);
    }
}
