use std::f64::consts::PI;

use serde::Serialize;

/// A point of `T^s ≃ (−π, π]^s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPoint(Vec<f64>);

/// Reduces an angle into `(−π, π]`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords.into_iter().map(reduce_angle).collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `x'`: every coordinate but the last.
    pub fn head(&self) -> &[f64] {
        &self.0[..self.0.len() - 1]
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

impl From<&[f64]> for TorusPoint {
    fn from(v: &[f64]) -> Self {
        Self::new(v.to_vec())
    }
}
