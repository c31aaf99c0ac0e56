//! Empirical O-constants: ratios of residuals to envelopes across a sweep.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: Vec<f64>,
    pub norm_d: f64,
    pub norm_s: Option<f64>,
    pub norm_f: Option<f64>,
    /// 𝔉ᵏ for `k = 2..=d`, in order.
    pub frak: Vec<f64>,
    pub main_term: f64,
    /// `Σ_k 𝔉ᵏ · Σ_η weight(η)`.
    pub frak_contribution: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub grid: String,
    pub seconds: f64,
}

impl SweepRecord {
    /// `norm_d − (main_term + frak_contribution)`, from the stored fields.
    pub fn recomputed_residual(&self) -> f64 {
        self.norm_d - (self.main_term + self.frak_contribution)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeFit {
    /// `max |residual| / envelope`.
    pub c_hat: f64,
    pub ratios: Vec<f64>,
    /// `max |ratio| / min |ratio|`; infinite when some residual vanishes.
    pub spread: f64,
    pub non_increasing: bool,
    pub non_decreasing: bool,
}

pub fn fit_envelope(residuals: &[f64], envelopes: &[f64]) -> Result<EnvelopeFit> {
    if residuals.is_empty() {
        return Err(Error::InvalidArgument("no records to fit".into()));
    }
    if residuals.len() != envelopes.len() {
        return Err(Error::DimensionMismatch {
            expected: residuals.len(),
            got: envelopes.len(),
        });
    }
    if let Some(bad) = envelopes.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::InvalidArgument(format!("envelope must be positive, got {bad}")));
    }
    let ratios: Vec<f64> = residuals.iter().zip(envelopes).map(|(r, e)| r / e).collect();
    let abs: Vec<f64> = ratios.iter().map(|r| r.abs()).collect();
    let max = abs.iter().copied().fold(0.0, f64::max);
    let min = abs.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if max == 0.0 { 1.0 } else { max / min };
    Ok(EnvelopeFit {
        c_hat: max,
        non_increasing: abs.windows(2).all(|w| w[1] <= w[0]),
        non_decreasing: abs.windows(2).all(|w| w[1] >= w[0]),
        ratios,
        spread,
    })
}

pub fn fit_records(records: &[SweepRecord]) -> Result<EnvelopeFit> {
    let r: Vec<f64> = records.iter().map(|r| r.residual).collect();
    let e: Vec<f64> = records.iter().map(|r| r.envelope).collect();
    fit_envelope(&r, &e)
}

/// Two-sided constants `C₁ ≤ norm / ln^d(n+1) ≤ C₂` over isotropic records.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BilateralFit {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub ratios: Vec<f64>,
}

pub fn fit_bilateral(samples: &[(f64, usize, f64)]) -> Result<BilateralFit> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no records to fit".into()));
    }
    let ratios: Vec<f64> = samples
        .iter()
        .map(|(n, d, norm)| norm / (n + 1.0).ln().powi(*d as i32))
        .collect();
    Ok(BilateralFit {
        c1_hat: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        c2_hat: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
    })
}
