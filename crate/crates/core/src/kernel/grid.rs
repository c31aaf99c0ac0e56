//! Uniform torus grids and discrete Fourier synthesis of coefficient fields.
//!
//! Nodes sit at `x_t = −π + 2πt/M` on every axis. For a mode `k` this gives
//! `e^{ik x_t} = (−1)^k e^{2πi k t / M}`, so synthesis is: multiply `c[k]` by
//! `(−1)^{Σ k_j}`, zero-pad into the `M`-box, then apply the unnormalised
//! inverse DFT (kernel `e^{+2πi k t/M}`) along every axis. The result equals
//! the trigonometric sum at each node up to transform roundoff, provided
//! `M_j` is at least the box extent on every axis (no wrap-around).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{CoefficientField, DEFAULT_BUDGET};

/// Columns gathered per block when transforming along the leading axis.
const COLUMN_BLOCK: usize = 32;

pub(crate) fn plan(len: usize) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<usize, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = plans.lock().expect("fft plan cache poisoned");
    guard
        .entry(len)
        .or_insert_with(|| FftPlanner::new().plan_fft_inverse(len))
        .clone()
}

/// Smallest integer `≥ m` whose prime factors are all in {2, 3, 5, 7}.
pub fn next_smooth(m: usize) -> usize {
    let mut c = m.max(1);
    loop {
        let mut x = c;
        for p in [2, 3, 5, 7] {
            while x % p == 0 {
                x /= p;
            }
        }
        if x == 1 {
            return c;
        }
        c += 1;
    }
}

/// Per-axis sample counts of a uniform grid on the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GridSpec {
    sizes: Vec<usize>,
    rho: usize,
}

impl GridSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.iter().any(|m| *m == 0) {
            return Err(Error::InvalidArgument("grid sizes must be positive".into()));
        }
        Ok(Self { sizes, rho: 1 })
    }

    /// `M_j = next_smooth(ρ · K_j)` for box extents `K_j`.
    pub fn for_extents(extents: &[usize], rho: usize) -> Self {
        let rho = rho.max(1);
        Self {
            sizes: extents.iter().map(|k| next_smooth(rho * k.max(&1))).collect(),
            rho,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> u128 {
        self.sizes.iter().map(|m| *m as u128).product()
    }

    pub fn node(&self, axis: usize, t: usize) -> f64 {
        -PI + 2.0 * PI * t as f64 / self.sizes[axis] as f64
    }

    /// Quadrature cell volume `Π 2π / M_j`.
    pub fn cell(&self) -> f64 {
        self.sizes.iter().map(|m| 2.0 * PI / *m as f64).product()
    }

    pub fn doubled(&self) -> Self {
        Self {
            sizes: self.sizes.iter().map(|m| 2 * m).collect(),
            rho: self.rho * 2,
        }
    }

    pub fn label(&self) -> String {
        self.sizes
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    fn check_fits(&self, field: &CoefficientField) -> Result<()> {
        if field.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: field.dim(),
                got: self.dim(),
            });
        }
        if let Some((k, m)) = field
            .extents()
            .iter()
            .zip(&self.sizes)
            .find(|(k, m)| k > m)
        {
            return Err(Error::InvalidArgument(format!(
                "extent overflow: box extent {k} exceeds grid size {m}"
            )));
        }
        Ok(())
    }
}

/// Kernel values on every node of a grid, row-major.
#[derive(Clone, Debug)]
pub struct GridField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    pub tag: String,
}

impl GridField {
    pub fn get(&self, t: &[usize]) -> Complex64 {
        let o = t
            .iter()
            .zip(self.grid.sizes())
            .fold(0usize, |acc, (tj, m)| acc * m + tj);
        self.values[o]
    }

    /// `(1/ΠM) Σ |v|²`.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    /// Riemann sum `Π(2π/M_j) Σ |v|`.
    pub fn riemann_l1(&self) -> f64 {
        self.grid.cell() * self.values.iter().map(|v| v.norm()).sum::<f64>()
    }
}

fn sign(k_sum: usize) -> f64 {
    if k_sum % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Scatters `(−1)^{Σk} c[k]` into a zeroed buffer laid out on `sizes`.
fn scatter(field: &CoefficientField, sizes: &[usize]) -> Vec<Complex64> {
    let total: usize = sizes.iter().product();
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for (i, w) in field.weights().iter().enumerate() {
        if w.re == 0.0 && w.im == 0.0 {
            continue;
        }
        let k = field.index_of(i);
        let o = k.iter().zip(sizes).fold(0usize, |acc, (kj, m)| acc * m + kj);
        buf[o] = w * sign(k.iter().sum());
    }
    buf
}

/// In-place unnormalised inverse DFT along one axis of a row-major array.
fn transform_axis(buf: &mut [Complex64], sizes: &[usize], axis: usize) {
    let len = sizes[axis];
    if len == 1 {
        return;
    }
    let stride: usize = sizes[axis + 1..].iter().product();
    let fft = plan(len);
    if stride == 1 {
        buf.par_chunks_mut(len.max(4096 / len * len)).for_each(|chunk| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(chunk, &mut scratch);
        });
        return;
    }
    buf.par_chunks_mut(len * stride).for_each(|block| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let width = COLUMN_BLOCK.min(stride);
        let mut cols = vec![Complex64::new(0.0, 0.0); len * width];
        let mut i0 = 0;
        while i0 < stride {
            let w = width.min(stride - i0);
            for t in 0..len {
                let row = &block[t * stride + i0..t * stride + i0 + w];
                for (c, v) in row.iter().enumerate() {
                    cols[c * len + t] = *v;
                }
            }
            fft.process_with_scratch(&mut cols[..w * len], &mut scratch);
            for t in 0..len {
                let row = &mut block[t * stride + i0..t * stride + i0 + w];
                for (c, v) in row.iter_mut().enumerate() {
                    *v = cols[c * len + t];
                }
            }
            i0 += w;
        }
    });
}

/// Dense synthesis of `Σ c[k] e^{i(k,x)}` on every node of `grid`.
pub fn grid_eval(field: &CoefficientField, grid: &GridSpec) -> Result<GridField> {
    grid_eval_with_budget(field, grid, DEFAULT_BUDGET)
}

pub fn grid_eval_with_budget(
    field: &CoefficientField,
    grid: &GridSpec,
    budget: u128,
) -> Result<GridField> {
    grid.check_fits(field)?;
    if grid.total() > budget {
        return Err(Error::ResourceLimit {
            what: "grid field",
            estimate: grid.total(),
            budget,
        });
    }
    let mut buf = scatter(field, grid.sizes());
    for axis in 0..grid.dim() {
        transform_axis(&mut buf, grid.sizes(), axis);
    }
    Ok(GridField {
        grid: grid.clone(),
        values: buf,
        tag: field.tag().to_string(),
    })
}

/// `Σ_t |v_t|` and `Σ_t |v_t|²` over a grid, computed without holding the
/// full grid when the field has two or more axes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GridMoments {
    pub sum_abs: f64,
    pub sum_sq: f64,
}

impl GridMoments {
    fn add(self, other: Self) -> Self {
        Self {
            sum_abs: self.sum_abs + other.sum_abs,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    fn of(values: &[Complex64]) -> Self {
        values.iter().fold(Self::default(), |acc, v| Self {
            sum_abs: acc.sum_abs + v.norm(),
            sum_sq: acc.sum_sq + v.norm_sqr(),
        })
    }
}

/// Moments of the synthesised field on `grid`. Memory is
/// `K_0 · Π_{j≥1} M_j` instead of `Π M_j`: the trailing axes are synthesised
/// per leading mode, then the leading axis is transformed column block by
/// column block. Partial sums are combined in a fixed order so the result
/// does not depend on the thread count.
pub fn grid_moments(field: &CoefficientField, grid: &GridSpec, budget: u128) -> Result<GridMoments> {
    grid.check_fits(field)?;
    match field.dim() {
        0 => {
            let c = field.weights()[0];
            return Ok(GridMoments {
                sum_abs: c.norm(),
                sum_sq: c.norm_sqr(),
            });
        }
        1 => {
            let g = grid_eval_with_budget(field, grid, budget)?;
            return Ok(GridMoments::of(&g.values));
        }
        _ => {}
    }
    let k0 = field.extents()[0];
    let m0 = grid.sizes()[0];
    let rest = GridSpec {
        sizes: grid.sizes()[1..].to_vec(),
        rho: grid.rho,
    };
    let r = rest.total();
    let estimate = (k0 as u128) * r;
    if estimate > budget {
        return Err(Error::ResourceLimit {
            what: "grid quadrature",
            estimate,
            budget,
        });
    }
    let r = r as usize;
    let rows: Vec<Option<Vec<Complex64>>> = (0..k0)
        .into_par_iter()
        .map(|k| {
            let sub = field.leading_slice(k);
            if sub.is_zero() {
                return Ok(None);
            }
            let mut vals = grid_eval_with_budget(&sub, &rest, budget)?.values;
            if k % 2 == 1 {
                vals.iter_mut().for_each(|v| *v = -*v);
            }
            Ok(Some(vals))
        })
        .collect::<Result<_>>()?;
    let fft = plan(m0);
    let blocks = r.div_ceil(COLUMN_BLOCK);
    let partial: Vec<GridMoments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let i0 = b * COLUMN_BLOCK;
            let w = COLUMN_BLOCK.min(r - i0);
            let mut cols = vec![Complex64::new(0.0, 0.0); w * m0];
            for (k, row) in rows.iter().enumerate() {
                if let Some(row) = row {
                    for c in 0..w {
                        cols[c * m0 + k] = row[i0 + c];
                    }
                }
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(&mut cols, &mut scratch);
            GridMoments::of(&cols)
        })
        .collect();
    Ok(partial.into_iter().fold(GridMoments::default(), GridMoments::add))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{build_lattice, indicator_coefficients, DilationVector};

    #[test]
    fn smooth_numbers() {
        assert_eq!(next_smooth(1), 1);
        assert_eq!(next_smooth(11), 12);
        assert_eq!(next_smooth(4100), 4116);
        assert_eq!(next_smooth(4096), 4096);
    }

    #[test]
    fn constant_field_gives_ones() {
        let f = CoefficientField::from_real_1d(&[1.0], "one");
        let g = grid_eval(&f, &GridSpec::new(vec![8]).unwrap()).unwrap();
        assert!(g.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn matches_direct_sum_at_every_node() {
        let n = DilationVector::new(vec![2.0, 2.0]).unwrap();
        let f = indicator_coefficients(&build_lattice(&n, 2).unwrap()).unwrap();
        let grid = GridSpec::new(vec![16, 16]).unwrap();
        let g = grid_eval(&f, &grid).unwrap();
        let mut worst = 0.0f64;
        for t0 in 0..16 {
            for t1 in 0..16 {
                let x = [grid.node(0, t0), grid.node(1, t1)];
                worst = worst.max((g.get(&[t0, t1]) - f.eval_direct(&x)).norm());
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn streamed_moments_match_dense() {
        let n = DilationVector::new(vec![3.5, 5.0, 4.2]).unwrap();
        let f = indicator_coefficients(&build_lattice(&n, 3).unwrap()).unwrap();
        let grid = GridSpec::for_extents(f.extents(), 3);
        let dense = grid_eval(&f, &grid).unwrap();
        let m = grid_moments(&f, &grid, DEFAULT_BUDGET).unwrap();
        let total = dense.values.len() as f64;
        assert!((m.sum_sq / total - dense.mean_square()).abs() < 1e-10);
        let l1 = grid.cell() * m.sum_abs;
        assert!((l1 - dense.riemann_l1()).abs() < 1e-9 * l1);
        // Parseval: mean square equals the number of lattice points.
        assert!((dense.mean_square() - f.energy()).abs() < 1e-10 * f.energy());
    }

    #[test]
    fn rejects_overflowing_extent() {
        let f = CoefficientField::from_real_1d(&[1.0; 9], "x");
        assert!(grid_eval(&f, &GridSpec::new(vec![8]).unwrap()).is_err());
    }
}
