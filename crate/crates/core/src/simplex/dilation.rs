use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Values of Λ that land within this many ulps (scaled by the magnitude of
/// the dilation entry and the recursion depth) of an integer are treated as
/// that integer. Without it `n_s - (n_s/n_j)·k_j` routinely lands one ulp
/// below an integer and the floor drops a lattice point.
const SNAP_ULPS: f64 = 8.0;

/// The dilation tuple `n = (n_1, …, n_d)` of the simplex
/// `Δ(n) = {ξ ≥ 0 : Σ ξ_j / n_j ≤ 1}`.
///
/// Entries are arbitrary positive reals; nothing here requires them to be
/// integers or sorted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationVector {
    entries: Vec<f64>,
}

impl DilationVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDilation("dimension must be at least 1".into()));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidDilation(format!(
                "entries must be finite and strictly positive, got {bad}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn isotropic(n: f64, d: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry `n_j` with 1-based `j`, matching the usual indexing of the tuple.
    pub fn n(&self, j: usize) -> f64 {
        self.entries[j - 1]
    }

    pub fn first(&self) -> f64 {
        self.entries[0]
    }

    pub fn last(&self) -> f64 {
        self.entries[self.entries.len() - 1]
    }

    pub fn is_sorted_ascending(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// `m^{(s)} = (n_{s+1}/n_1, …, n_{s+1}/n_s)` for `1 ≤ s < d`.
    pub fn ratios(&self, s: usize) -> Vec<f64> {
        assert!(s >= 1 && s < self.dim(), "ratio index {s} out of range");
        let top = self.entries[s];
        self.entries[..s].iter().map(|nj| top / nj).collect()
    }

    /// The leading sub-tuple `n^s`.
    pub fn prefix(&self, s: usize) -> Result<Self> {
        if s == 0 || s > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: s,
            });
        }
        Ok(Self {
            entries: self.entries[..s].to_vec(),
        })
    }

    /// All entries except the last (`n'`), or `None` in dimension one.
    pub fn head(&self) -> Option<Self> {
        (self.dim() > 1).then(|| Self {
            entries: self.entries[..self.dim() - 1].to_vec(),
        })
    }

    /// `[n_j] + 1` for every axis: the extent of the bounding box of Δ(n)∩Z^d.
    pub fn box_extents(&self) -> Vec<usize> {
        self.entries
            .iter()
            .map(|v| snapped_floor(*v, *v, 1).max(0) as usize + 1)
            .collect()
    }

    /// `Π(n) = Π_j ln n_j`.
    pub fn log_product(&self) -> f64 {
        self.entries.iter().map(|v| v.ln()).product()
    }

    pub fn lambda(&self) -> LambdaEvaluator {
        LambdaEvaluator::new(self)
    }

    /// Simplex membership `Σ k_j / n_j ≤ 1` for the leading `k.len()` axes.
    pub fn contains(&self, k: &[i64]) -> bool {
        if k.iter().any(|v| *v < 0) || k.len() > self.dim() {
            return false;
        }
        let s: f64 = k
            .iter()
            .zip(&self.entries)
            .map(|(kj, nj)| *kj as f64 / nj)
            .sum();
        s <= 1.0 + SNAP_ULPS * f64::EPSILON * (k.len() as f64 + 1.0)
    }
}

impl fmt::Display for DilationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

fn snap_tolerance(scale: f64, depth: usize) -> f64 {
    SNAP_ULPS * f64::EPSILON * scale.abs().max(1.0) * depth.max(1) as f64
}

/// `[value]` with near-integers snapped; `scale` is the magnitude the value
/// was computed from.
pub(crate) fn snapped_floor(value: f64, scale: f64, depth: usize) -> i64 {
    let r = value.round();
    if (value - r).abs() <= snap_tolerance(scale, depth) {
        r as i64
    } else {
        value.floor() as i64
    }
}

/// `{value}` with near-integers snapped to exactly zero.
pub(crate) fn snapped_frac(value: f64, scale: f64, depth: usize) -> f64 {
    let r = value.round();
    if (value - r).abs() <= snap_tolerance(scale, depth) {
        0.0
    } else {
        value - value.floor()
    }
}

/// Evaluates the affine bounds `Λ_1 = n_1`, `Λ_s(ξ) = n_s − (m^{(s−1)}, ξ)`.
#[derive(Clone, Debug)]
pub struct LambdaEvaluator {
    entries: Vec<f64>,
    ratios: Vec<Vec<f64>>,
}

impl LambdaEvaluator {
    fn new(n: &DilationVector) -> Self {
        let ratios = (1..n.dim()).map(|s| n.ratios(s)).collect();
        Self {
            entries: n.entries.clone(),
            ratios,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `Λ_s(ξ^{s−1})` with 1-based `s`; `xi` must have length `s − 1`.
    pub fn eval(&self, s: usize, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), s - 1);
        let ns = self.entries[s - 1];
        if s == 1 {
            return ns;
        }
        let m = &self.ratios[s - 2];
        ns - m.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>()
    }

    /// The equivalent form `n_s (1 − Σ_{j<s} ξ_j / n_j)`.
    pub fn eval_scaled(&self, s: usize, xi: &[f64]) -> f64 {
        let ns = self.entries[s - 1];
        ns * (1.0
            - xi
                .iter()
                .zip(&self.entries)
                .map(|(x, nj)| x / nj)
                .sum::<f64>())
    }

    /// `Λ_s` at an integer point.
    pub fn at(&self, s: usize, k: &[i64]) -> f64 {
        let xi: Vec<f64> = k.iter().map(|v| *v as f64).collect();
        self.eval(s, &xi)
    }

    /// `[Λ_s(k)]`, negative when the point lies outside the simplex.
    pub fn floor_at(&self, s: usize, k: &[i64]) -> i64 {
        snapped_floor(self.at(s, k), self.entries[s - 1], s)
    }

    /// `{Λ_s(k)}` in `[0, 1)`.
    pub fn frac_at(&self, s: usize, k: &[i64]) -> f64 {
        snapped_frac(self.at(s, k), self.entries[s - 1], s)
    }
}
