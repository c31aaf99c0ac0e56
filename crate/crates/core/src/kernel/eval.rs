//! Pointwise evaluation of `D_n`, `F_n`, `S_n`, `R_n` and the twisted
//! difference operator `δ_{h,ξ} f(x) = e^{ih} f(x − hξ) − f(x)`.
//!
//! # Tail bound for the ν-series of R
//!
//! `R_n(x) = D_{n'}(x') + ½ δ_{n_d x_d} D_{n'}(x') − x_d/(2πi) Σ_{ν≠0} δ_{n_d(2πν+x_d)} D_{n'}(x') / (ν(2πν+x_d))`,
//! with `δ = δ_{·, 1/n'}`. Per mode this is Poisson summation of
//! `Σ_{0≤k≤Λ} e^{ikx}` plus the sawtooth series of `{Λ} − ½`; the leading
//! `D_{n'}` is what makes `R(x', 0) = D_{n'}(x')` when `S(x', 0) = Σ Λ e^{i(k',x')}`.
//! Every `δ D_{n'}` is bounded by `2 sup|D_{n'}| ≤ 2P'` with `P'` the number
//! of points of the `(d−1)`-lattice, and for `|x_d| ≤ π` we have
//! `|2πν + x_d| ≥ 2π|ν| − π`. A discarded term is therefore at most
//! `2P'|x_d| / (2π|ν|(2π|ν| − π))`. The summand decreases in `|ν|`, so the
//! sum over `ν > N` is below `∫_N^∞ dν / (ν(2πν − π)) = ln(2N/(2N−1)) / π`.
//! Both signs of ν together give
//!
//! `tail(N) = 2P'|x_d| ln(2N/(2N−1)) / π²`,
//!
//! which is what [`eval_r`] returns next to the truncated value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simplex::{
    expm1_i, s_weight, slice_coefficients_on, slice_lattice, snapped_floor, snapped_frac,
    CoefficientField, DilationVector, SimplexLattice, SliceKernel,
};

use super::grid::{grid_eval, GridField, GridSpec};
use super::torus::{reduce_angle, TorusPoint};

pub const DEFAULT_NU_MAX: usize = 4096;

/// `Σ_{k=0}^{L} e^{ikx}` in closed form.
pub(crate) fn geometric(l: i64, x: f64) -> Complex64 {
    if l < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let x = reduce_angle(x);
    let half = 0.5 * x;
    let den = half.sin();
    if den == 0.0 {
        return Complex64::new(l as f64 + 1.0, 0.0);
    }
    let amp = ((l as f64 + 1.0) * half).sin() / den;
    Complex64::from_polar(amp, l as f64 * half)
}

/// `R` slice weight for one mode with `Λ_d(k') = lambda`, ν-series truncated
/// at `|ν| ≤ nu_max` and summed in ±ν pairs from the smallest terms up.
pub(crate) fn r_weight(lambda: f64, x_d: f64, nu_max: usize) -> Complex64 {
    let mut series = Complex64::new(0.0, 0.0);
    for nu in (1..=nu_max).rev() {
        let a = 2.0 * PI * nu as f64;
        let plus = expm1_i(lambda * (a + x_d)) / (nu as f64 * (a + x_d));
        let minus = expm1_i(lambda * (x_d - a)) / (nu as f64 * (a - x_d));
        series += plus + minus;
    }
    // −x_d / (2πi) = i x_d / (2π)
    Complex64::new(1.0, 0.0) + 0.5 * expm1_i(lambda * x_d)
        + Complex64::new(0.0, x_d / (2.0 * PI)) * series
}

/// Rigorous bound on the discarded part of the ν-series.
pub fn r_tail_bound(head_points: usize, x_d: f64, nu_max: usize) -> f64 {
    let n = nu_max as f64;
    2.0 * head_points as f64 * x_d.abs() * (-(-1.0 / (2.0 * n)).ln_1p()) / (PI * PI)
}

/// Reusable evaluator: builds the `(d−1)`-lattice once.
#[derive(Clone, Debug)]
pub struct PointEvaluator {
    n: DilationVector,
    head: Option<SimplexLattice>,
    full_points: u128,
}

impl PointEvaluator {
    pub fn new(n: &DilationVector) -> Result<Self> {
        let head = if n.dim() >= 2 {
            Some(slice_lattice(n)?)
        } else {
            None
        };
        Ok(Self {
            n: n.clone(),
            head,
            full_points: crate::simplex::count_points(n, n.dim()),
        })
    }

    pub fn dilation(&self) -> &DilationVector {
        &self.n
    }

    /// Number of points of the full `d`-lattice (`P = D_n(0)`).
    pub fn lattice_points(&self) -> u128 {
        self.full_points
    }

    /// Number of points of the `(d−1)`-lattice.
    pub fn head_points(&self) -> usize {
        self.head.as_ref().map_or(1, |h| h.len())
    }

    fn head(&self) -> Result<&SimplexLattice> {
        self.head
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("kernel needs dimension at least 2".into()))
    }

    fn check_dim(&self, x: &TorusPoint, expected: usize) -> Result<()> {
        if x.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// Sum over the head lattice of `w(k', Λ_d(k')) e^{i(k',x')}`.
    fn head_sum<W>(&self, x_head: &[f64], mut weight: W) -> Result<Complex64>
    where
        W: FnMut(f64) -> Complex64,
    {
        let head = self.head()?;
        let lambdas = head.next_lambda().expect("head lattice caches Λ_d");
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, lam) in head.points().zip(lambdas) {
            let w = weight(*lam);
            if w.re == 0.0 && w.im == 0.0 {
                continue;
            }
            let phase: f64 = p.iter().zip(x_head).map(|(k, x)| *k as f64 * x).sum();
            acc += w * Complex64::from_polar(1.0, phase);
        }
        Ok(acc)
    }

    /// `D_n(x)`, innermost axis summed as a geometric series.
    pub fn d(&self, x: &TorusPoint) -> Result<Complex64> {
        self.check_dim(x, self.n.dim())?;
        let d = self.n.dim();
        let x_d = x.last();
        if d == 1 {
            return Ok(geometric(snapped_floor(self.n.first(), self.n.first(), 1), x_d));
        }
        let scale = self.n.last();
        self.head_sum(x.head(), |lam| geometric(snapped_floor(lam, scale, d), x_d))
    }

    /// `F_n(x')`; in dimension one the constant `{n_1}` (with `x'` empty).
    pub fn f(&self, x_head: &TorusPoint) -> Result<Complex64> {
        let d = self.n.dim();
        self.check_dim(x_head, d - 1)?;
        if d == 1 {
            return Ok(Complex64::new(snapped_frac(self.n.first(), self.n.first(), 1), 0.0));
        }
        let scale = self.n.last();
        self.head_sum(x_head.coords(), |lam| {
            Complex64::new(snapped_frac(lam, scale, d), 0.0)
        })
    }

    /// `e^{i n_d x_d} F_n(x' − x_d m^{(d−1)})`, evaluated from its slice weights.
    pub fn f_composite(&self, x: &TorusPoint) -> Result<Complex64> {
        self.check_dim(x, self.n.dim())?;
        let d = self.n.dim();
        let scale = self.n.last();
        let x_d = x.last();
        self.head_sum(x.head(), |lam| {
            Complex64::from_polar(snapped_frac(lam, scale, d), lam * x_d)
        })
    }

    /// `S_n(x) = Σ e^{i(k',x')} (e^{iΛ_d x_d} − 1)/(i x_d)`; the removable
    /// singularity at `x_d = 0` evaluates to `Σ Λ_d e^{i(k',x')}`.
    pub fn s(&self, x: &TorusPoint) -> Result<Complex64> {
        self.check_dim(x, self.n.dim())?;
        let x_d = x.last();
        self.head_sum(x.head(), |lam| s_weight(lam, x_d))
    }

    /// Second form of S: `(1/(i x_d)) δ_{n_d x_d, 1/n'} D_{n'}(x')`.
    /// Loses accuracy as `x_d → 0`; used as a cross-check.
    pub fn s_via_delta(&self, x: &TorusPoint) -> Result<Complex64> {
        self.check_dim(x, self.n.dim())?;
        let x_d = x.last();
        if x_d == 0.0 {
            return Err(Error::NearSingularity { x_d });
        }
        let head = self.n.head().ok_or_else(|| {
            Error::InvalidArgument("kernel needs dimension at least 2".into())
        })?;
        let inner = PointEvaluator::new(&head)?;
        let n_d = self.n.last();
        let shifted: Vec<f64> = x
            .head()
            .iter()
            .zip(head.entries())
            .map(|(xj, nj)| xj - x_d * n_d / nj)
            .collect();
        let a = inner.d(&TorusPoint::new(shifted))?;
        let b = inner.d(&TorusPoint::new(x.head().to_vec()))?;
        let delta = Complex64::from_polar(1.0, n_d * x_d) * a - b;
        Ok(delta / Complex64::new(0.0, x_d))
    }

    /// Truncated `R_n(x)` together with the bound on what was discarded.
    pub fn r(&self, x: &TorusPoint, nu_max: usize) -> Result<(Complex64, f64)> {
        if nu_max < 1 {
            return Err(Error::InvalidArgument("nu_max must be at least 1".into()));
        }
        self.check_dim(x, self.n.dim())?;
        let x_d = x.last();
        let value = self.head_sum(x.head(), |lam| r_weight(lam, x_d, nu_max))?;
        Ok((value, r_tail_bound(self.head_points(), x_d, nu_max)))
    }

    /// `|D − (S − e^{i n_d x_d} F(x' − x_d m) + R)|` and the tail bound of R.
    pub fn identity_residual(&self, x: &TorusPoint, nu_max: usize) -> Result<(f64, f64)> {
        let d = self.d(x)?;
        let s = self.s(x)?;
        let fc = self.f_composite(x)?;
        let (r, tail) = self.r(x, nu_max)?;
        Ok(((d - (s - fc + r)).norm(), tail))
    }
}

pub fn eval_d(n: &DilationVector, x: &TorusPoint) -> Result<Complex64> {
    PointEvaluator::new(n)?.d(x)
}

pub fn eval_f(n: &DilationVector, x_head: &TorusPoint) -> Result<Complex64> {
    PointEvaluator::new(n)?.f(x_head)
}

pub fn eval_s(n: &DilationVector, x: &TorusPoint) -> Result<Complex64> {
    PointEvaluator::new(n)?.s(x)
}

pub fn eval_r(n: &DilationVector, x: &TorusPoint, nu_max: usize) -> Result<(Complex64, f64)> {
    PointEvaluator::new(n)?.r(x, nu_max)
}

/// Fourier-side action of `δ_{h,ξ}`: `c[k] ↦ (e^{ih(1 − (ξ,k))} − 1) c[k]`.
pub fn apply_delta(field: &CoefficientField, h: f64, xi: &[f64]) -> Result<CoefficientField> {
    if xi.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: xi.len(),
        });
    }
    let mut out = field.clone().with_tag(format!("delta[{}]|h={h}", field.tag()));
    let extents = field.extents().to_vec();
    for (i, w) in out.weights_mut().iter_mut().enumerate() {
        if w.re == 0.0 && w.im == 0.0 {
            continue;
        }
        let mut rem = i;
        let mut dot = 0.0;
        for (j, e) in extents.iter().enumerate().rev() {
            dot += xi[j] * (rem % e) as f64;
            rem /= e;
        }
        *w *= expm1_i(h * (1.0 - dot));
    }
    Ok(out)
}

/// Kernels that are not trigonometric polynomials in `x_d` and are therefore
/// synthesised one `x_d`-slice at a time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlicedKernel {
    S,
    Fcomposite,
    R { nu_max: usize },
}

impl SlicedKernel {
    pub fn name(&self) -> &'static str {
        match self {
            SlicedKernel::S => "S",
            SlicedKernel::Fcomposite => "Fcomposite",
            SlicedKernel::R { .. } => "R",
        }
    }
}

/// The `(d−1)`-dimensional coefficient field of one `x_d`-slice.
pub(crate) fn slice_field(
    head: &SimplexLattice,
    kernel: SlicedKernel,
    x_d: f64,
) -> Result<CoefficientField> {
    match kernel {
        SlicedKernel::S => slice_coefficients_on(head, SliceKernel::S, x_d, true),
        SlicedKernel::Fcomposite => slice_coefficients_on(head, SliceKernel::Fcomposite, x_d, true),
        SlicedKernel::R { nu_max } => {
            let lambdas = head.next_lambda().expect("head lattice caches Λ_d");
            let mut field =
                CoefficientField::zeros(head.extents(), format!("R|x_d={x_d}|nu_max={nu_max}"))?;
            for (p, lam) in head.points().zip(lambdas) {
                let k: Vec<usize> = p.iter().map(|v| *v as usize).collect();
                field.set(&k, r_weight(*lam, x_d, nu_max));
            }
            Ok(field)
        }
    }
}

/// Full `d`-dimensional grid of a sliced kernel: one `(d−1)`-dimensional
/// synthesis per `x_d` node. `grid` has `d` axes; its first `d−1` sizes must
/// cover the head lattice box.
pub fn grid_eval_sliced(
    n: &DilationVector,
    kernel: SlicedKernel,
    grid: &GridSpec,
) -> Result<GridField> {
    if n.dim() < 2 || grid.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim().max(2),
            got: grid.dim(),
        });
    }
    let head = slice_lattice(n)?;
    let head_grid = GridSpec::new(grid.sizes()[..n.dim() - 1].to_vec())?;
    let m_d = grid.sizes()[n.dim() - 1];
    let per_slice = head_grid.total() as usize;
    let slices: Vec<Vec<Complex64>> = (0..m_d)
        .into_par_iter()
        .map(|t| {
            let field = slice_field(&head, kernel, grid.node(n.dim() - 1, t))?;
            Ok(grid_eval(&field, &head_grid)?.values)
        })
        .collect::<Result<_>>()?;
    // Slices are indexed by the last axis, which is the fastest in row-major
    // order: interleave.
    let mut values = vec![Complex64::new(0.0, 0.0); per_slice * m_d];
    for (t, slice) in slices.iter().enumerate() {
        for (i, v) in slice.iter().enumerate() {
            values[i * m_d + t] = *v;
        }
    }
    Ok(GridField {
        grid: grid.clone(),
        values,
        tag: format!("{}|n={n}", kernel.name()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::grid::grid_eval;
    use crate::simplex::{build_lattice, fractional_coefficients, indicator_coefficients};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dv(v: &[f64]) -> DilationVector {
        DilationVector::new(v.to_vec()).unwrap()
    }

    fn tp(v: &[f64]) -> TorusPoint {
        TorusPoint::new(v.to_vec())
    }

    fn brute_d(n: &DilationVector, x: &[f64]) -> Complex64 {
        let lat = build_lattice(n, n.dim()).unwrap();
        lat.points()
            .map(|p| {
                let ph: f64 = p.iter().zip(x).map(|(k, xj)| *k as f64 * xj).sum();
                Complex64::from_polar(1.0, ph)
            })
            .sum()
    }

    #[test]
    fn d_examples() {
        assert!((eval_d(&dv(&[2.0, 2.0]), &tp(&[0.0, 0.0])).unwrap() - 6.0).norm() < 1e-14);
        assert!(eval_d(&dv(&[5.0]), &tp(&[PI])).unwrap().norm() < 1e-14);
        let n = dv(&[2.0, 3.0]);
        let x = [PI, PI / 2.0];
        assert!((eval_d(&n, &tp(&x)).unwrap() - brute_d(&n, &x)).norm() < 1e-13);
    }

    #[test]
    fn d_matches_brute_force_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [dv(&[7.3, 19.6]), dv(&[5.0, 9.5, 23.0]), dv(&[3.3, 4.1, 2.2])] {
            for _ in 0..20 {
                let x: Vec<f64> = (0..n.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
                let a = eval_d(&n, &tp(&x)).unwrap();
                let b = brute_d(&n, &x);
                assert!((a - b).norm() < 1e-10, "{n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(eval_f(&dv(&[2.0, 4.0]), &tp(&[1.234])).unwrap().norm(), 0.0);
        assert!((eval_f(&dv(&[2.0, 3.0]), &tp(&[0.0])).unwrap() - 0.5).norm() < 1e-15);
        assert!((eval_f(&dv(&[2.0, 3.0]), &tp(&[PI])).unwrap() + 0.5).norm() < 1e-15);
    }

    #[test]
    fn s_examples() {
        let n = dv(&[2.0, 2.0]);
        assert!((eval_s(&n, &tp(&[0.0, 0.0])).unwrap() - 3.0).norm() < 1e-14);
        // x_d = 0 row: Σ Λ_d e^{ik'x'}
        let n = dv(&[2.0, 3.0]);
        let x1 = 0.9;
        let expect = Complex64::new(3.0, 0.0) + 1.5 * Complex64::from_polar(1.0, x1);
        assert!((eval_s(&n, &tp(&[x1, 0.0])).unwrap() - expect).norm() < 1e-14);
    }

    #[test]
    fn s_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [dv(&[7.3, 19.6]), dv(&[5.0, 9.5, 23.0])] {
            let ev = PointEvaluator::new(&n).unwrap();
            for _ in 0..100 {
                let mut x: Vec<f64> = (0..n.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
                if x[n.dim() - 1].abs() < 1e-3 {
                    x[n.dim() - 1] = 0.5;
                }
                let a = ev.s(&tp(&x)).unwrap();
                let b = ev.s_via_delta(&tp(&x)).unwrap();
                assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn f_composite_is_shifted_f() {
        let n = dv(&[7.3, 19.6, 31.1]);
        let ev = PointEvaluator::new(&n).unwrap();
        let x = [0.4, -1.3, 2.2];
        let m = n.ratios(2);
        let shifted = tp(&[x[0] - x[2] * m[0], x[1] - x[2] * m[1]]);
        let expect = Complex64::from_polar(1.0, n.last() * x[2]) * ev.f(&shifted).unwrap();
        assert!((ev.f_composite(&tp(&x)).unwrap() - expect).norm() < 1e-10);
    }

    #[test]
    fn r_is_head_kernel_at_zero_and_tail_shrinks() {
        let n = dv(&[2.0, 3.0]);
        let (v, tail) = eval_r(&n, &tp(&[1.0, 0.0]), 16).unwrap();
        let head = eval_d(&dv(&[2.0]), &tp(&[1.0])).unwrap();
        assert!((v - head).norm() < 1e-15);
        assert_eq!(tail, 0.0);
        let x = tp(&[1.0, 1.0]);
        assert!(r_tail_bound(3, 1.0, 200) < r_tail_bound(3, 1.0, 100));
        let (a, ta) = eval_r(&n, &x, 10_000).unwrap();
        let (b, _) = eval_r(&n, &x, 20_000).unwrap();
        assert!((a - b).norm() <= ta, "{} > {ta}", (a - b).norm());
        assert!(eval_r(&n, &x, 0).is_err());
    }

    #[test]
    fn identity_holds_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [dv(&[2.0, 3.0]), dv(&[7.3, 19.6]), dv(&[5.0, 9.5, 23.0])] {
            let ev = PointEvaluator::new(&n).unwrap();
            for _ in 0..10 {
                let x: Vec<f64> = (0..n.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
                let (res, tail) = ev.identity_residual(&tp(&x), 512).unwrap();
                assert!(res <= tail + 1e-9 * ev.lattice_points() as f64, "{n} {res} {tail}");
            }
        }
    }

    #[test]
    fn delta_examples() {
        let f = fractional_coefficients(&dv(&[7.3, 19.6])).unwrap();
        assert!(apply_delta(&f, 0.0, &[0.3]).unwrap().is_zero());
        // single mode with (ξ,k) = 1 is annihilated
        let mut single = CoefficientField::zeros(vec![3], "m").unwrap();
        single.set(&[2], Complex64::new(1.0, 0.0));
        for h in [0.3, 1.7, -5.0] {
            assert!(apply_delta(&single, h, &[0.5]).unwrap().is_zero());
        }
        assert!(apply_delta(&f, 1.0, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn delta_matches_pointwise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let extents = vec![4, 3];
        let weights: Vec<Complex64> = (0..12)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let field = CoefficientField::from_weights(extents, weights, "rand").unwrap();
        let h = rng.gen_range(-4.0..4.0);
        let xi = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let out = apply_delta(&field, h, &xi).unwrap();
        for _ in 0..20 {
            let x = [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)];
            let shifted = [x[0] - h * xi[0], x[1] - h * xi[1]];
            let expect = Complex64::from_polar(1.0, h) * field.eval_direct(&shifted)
                - field.eval_direct(&x);
            assert!((out.eval_direct(&x) - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn sliced_grids_satisfy_identity() {
        let n = dv(&[2.0, 3.0]);
        let grid = GridSpec::new(vec![8, 12]).unwrap();
        let nu_max = 256;
        let s = grid_eval_sliced(&n, SlicedKernel::S, &grid).unwrap();
        let fc = grid_eval_sliced(&n, SlicedKernel::Fcomposite, &grid).unwrap();
        let r = grid_eval_sliced(&n, SlicedKernel::R { nu_max }, &grid).unwrap();
        let d = grid_eval(
            &indicator_coefficients(&build_lattice(&n, 2).unwrap()).unwrap(),
            &grid,
        )
        .unwrap();
        for t0 in 0..8 {
            for t1 in 0..12 {
                let t = [t0, t1];
                let lhs = d.get(&t);
                let rhs = s.get(&t) - fc.get(&t) + r.get(&t);
                let tail = r_tail_bound(3, grid.node(1, t1), nu_max);
                assert!((lhs - rhs).norm() <= tail + 1e-9 * 6.0);
            }
        }
        // x_d = 0 is node 6 of 12: S row is Σ Λ_d e^{ik'x'}
        let x1 = grid.node(0, 3);
        let expect = Complex64::new(3.0, 0.0) + 1.5 * Complex64::from_polar(1.0, x1);
        assert!((s.get(&[3, 6]) - expect).norm() < 1e-12);
    }

    #[test]
    fn fcomposite_grid_zero_for_integral_lambda() {
        let g = grid_eval_sliced(
            &dv(&[2.0, 4.0]),
            SlicedKernel::Fcomposite,
            &GridSpec::new(vec![6, 10]).unwrap(),
        )
        .unwrap();
        assert!(g.values.iter().all(|v| v.norm() == 0.0));
    }
}
