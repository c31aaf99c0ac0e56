use num_complex::Complex64;

use crate::error::{Error, Result};

use super::dilation::{snapped_frac, DilationVector};
use super::lattice::{SimplexLattice, DEFAULT_BUDGET};

/// Below this `|x_d|` the S weight `(e^{iΛx_d} − 1)/(i x_d)` is only returned
/// when the caller asks for the limit branch.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// Dense complex weights `c[k]` on the integer box `[0, M_1) × … × [0, M_s)`,
/// row-major with the last axis fastest. A field with no axes is a single
/// complex constant.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientField {
    extents: Vec<usize>,
    weights: Vec<Complex64>,
    tag: String,
}

impl CoefficientField {
    pub fn zeros(extents: Vec<usize>, tag: impl Into<String>) -> Result<Self> {
        Self::zeros_with_budget(extents, tag, DEFAULT_BUDGET)
    }

    pub fn zeros_with_budget(
        extents: Vec<usize>,
        tag: impl Into<String>,
        budget: u128,
    ) -> Result<Self> {
        let total: u128 = extents.iter().map(|e| *e as u128).product();
        if total > budget {
            return Err(Error::ResourceLimit {
                what: "coefficient field",
                estimate: total,
                budget,
            });
        }
        Ok(Self {
            weights: vec![Complex64::new(0.0, 0.0); total as usize],
            extents,
            tag: tag.into(),
        })
    }

    pub fn constant(value: Complex64, tag: impl Into<String>) -> Self {
        Self {
            extents: Vec::new(),
            weights: vec![value],
            tag: tag.into(),
        }
    }

    /// Builds a field from explicit weights; `weights.len()` must equal the
    /// product of `extents`.
    pub fn from_weights(
        extents: Vec<usize>,
        weights: Vec<Complex64>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        let total: usize = extents.iter().product();
        if total != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: weights.len(),
            });
        }
        Ok(Self {
            extents,
            weights,
            tag: tag.into(),
        })
    }

    /// 1-D field from real weights `c[0..len)`.
    pub fn from_real_1d(weights: &[f64], tag: impl Into<String>) -> Self {
        Self {
            extents: vec![weights.len()],
            weights: weights.iter().map(|w| Complex64::new(*w, 0.0)).collect(),
            tag: tag.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [Complex64] {
        &mut self.weights
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn offset(&self, k: &[usize]) -> usize {
        debug_assert_eq!(k.len(), self.extents.len());
        k.iter()
            .zip(&self.extents)
            .fold(0usize, |acc, (kj, e)| acc * e + kj)
    }

    pub fn get(&self, k: &[usize]) -> Complex64 {
        self.weights[self.offset(k)]
    }

    pub fn set(&mut self, k: &[usize], value: Complex64) {
        let o = self.offset(k);
        self.weights[o] = value;
    }

    /// Multi-index of a flat offset.
    pub fn index_of(&self, mut offset: usize) -> Vec<usize> {
        let mut k = vec![0usize; self.extents.len()];
        for (j, e) in self.extents.iter().enumerate().rev() {
            k[j] = offset % e;
            offset /= e;
        }
        k
    }

    /// Iterates `(multi-index, weight)` over every box entry.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| (self.index_of(i), *w))
    }

    /// `Σ |c[k]|²`, the right-hand side of Parseval.
    pub fn energy(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| w.re == 0.0 && w.im == 0.0)
    }

    /// Sub-field with the leading axis fixed at `k0`.
    pub fn leading_slice(&self, k0: usize) -> CoefficientField {
        let stride: usize = self.extents[1..].iter().product();
        CoefficientField {
            extents: self.extents[1..].to_vec(),
            weights: self.weights[k0 * stride..(k0 + 1) * stride].to_vec(),
            tag: self.tag.clone(),
        }
    }

    /// Exact trigonometric sum `Σ c[k] e^{i(k,x)}` by direct summation.
    pub fn eval_direct(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim(), "point dimension");
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.re != 0.0 || w.im != 0.0)
            .map(|(i, w)| {
                let k = self.index_of(i);
                let phase: f64 = k.iter().zip(x).map(|(kj, xj)| *kj as f64 * xj).sum();
                w * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }
}

/// Unit weight at every lattice point, zero elsewhere in the box.
pub fn indicator_coefficients(lattice: &SimplexLattice) -> Result<CoefficientField> {
    let mut field = CoefficientField::zeros(lattice.extents(), "D")?;
    let one = Complex64::new(1.0, 0.0);
    for p in lattice.points() {
        let k: Vec<usize> = p.iter().map(|v| *v as usize).collect();
        field.set(&k, one);
    }
    Ok(field)
}

/// Builds the `(d−1)`-dimensional lattice carrying `Λ_d(k')`.
fn head_lattice(n: &DilationVector, budget: u128) -> Result<SimplexLattice> {
    SimplexLattice::build(n, n.dim() - 1, budget)
}

/// Weights `{Λ_d(k')}` of `F_n` on the `(d−1)`-lattice. In dimension one the
/// field is the constant `{n_1}`.
pub fn fractional_coefficients(n: &DilationVector) -> Result<CoefficientField> {
    fractional_coefficients_with_budget(n, DEFAULT_BUDGET)
}

pub fn fractional_coefficients_with_budget(
    n: &DilationVector,
    budget: u128,
) -> Result<CoefficientField> {
    let d = n.dim();
    if d == 1 {
        let v = snapped_frac(n.first(), n.first(), 1);
        return Ok(CoefficientField::constant(Complex64::new(v, 0.0), "F"));
    }
    let lattice = head_lattice(n, budget)?;
    let lambdas = lattice.next_lambda().expect("head lattice caches Λ_d");
    let mut field = CoefficientField::zeros_with_budget(lattice.extents(), "F", budget)?;
    let scale = n.last();
    for (p, lam) in lattice.points().zip(lambdas) {
        let k: Vec<usize> = p.iter().map(|v| *v as usize).collect();
        field.set(&k, Complex64::new(snapped_frac(*lam, scale, d), 0.0));
    }
    Ok(field)
}

/// Which `x_d`-slice to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SliceKernel {
    /// `S_n(·, x_d)`: weight `(e^{iΛ_d x_d} − 1)/(i x_d)`.
    S,
    /// `e^{i n_d x_d} F_n(x' − x_d m^{(d−1)})`: weight `{Λ_d} e^{iΛ_d x_d}`.
    Fcomposite,
    /// The mode weights of `δ_{h, 1/n'} D_{n'}`: `e^{iΛ_d h / n_d} − 1`.
    Rdelta { h: f64 },
}

/// `(e^{iΛx} − 1)/(i x)`, written as `2 sin(Λx/2) e^{iΛx/2} / x` so it stays
/// accurate as `x → 0`; exactly `Λ` at `x = 0`.
pub(crate) fn s_weight(lambda: f64, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(lambda, 0.0);
    }
    let half = 0.5 * lambda * x;
    Complex64::from_polar(2.0 * half.sin() / x, half)
}

/// `e^{iθ} − 1` without cancellation for small `θ`.
pub(crate) fn expm1_i(theta: f64) -> Complex64 {
    let half = 0.5 * theta;
    Complex64::from_polar(2.0 * half.sin(), half) * Complex64::new(0.0, 1.0)
}

/// Field whose synthesis over `x'` equals the `x_d`-slice of the requested
/// kernel. `allow_limit` must be set to evaluate S within the singularity
/// threshold of `x_d = 0`.
pub fn slice_coefficients(
    n: &DilationVector,
    kernel: SliceKernel,
    x_d: f64,
    allow_limit: bool,
) -> Result<CoefficientField> {
    let lattice = slice_lattice(n)?;
    slice_coefficients_on(&lattice, kernel, x_d, allow_limit)
}

pub(crate) fn slice_lattice(n: &DilationVector) -> Result<SimplexLattice> {
    if n.dim() < 2 {
        return Err(Error::InvalidArgument(
            "slice kernels need dimension at least 2".into(),
        ));
    }
    head_lattice(n, DEFAULT_BUDGET)
}

pub(crate) fn slice_coefficients_on(
    lattice: &SimplexLattice,
    kernel: SliceKernel,
    x_d: f64,
    allow_limit: bool,
) -> Result<CoefficientField> {
    if !x_d.is_finite() {
        return Err(Error::InvalidArgument(format!("x_d must be finite, got {x_d}")));
    }
    if kernel == SliceKernel::S && x_d.abs() < SINGULARITY_THRESHOLD && !allow_limit {
        return Err(Error::NearSingularity { x_d });
    }
    let n = lattice.dilation();
    let d = n.dim();
    let n_d = n.last();
    let lambdas = lattice.next_lambda().expect("head lattice caches Λ_d");
    let tag = match kernel {
        SliceKernel::S => format!("S|x_d={x_d}"),
        SliceKernel::Fcomposite => format!("Fcomposite|x_d={x_d}"),
        SliceKernel::Rdelta { h } => format!("Rdelta|h={h}"),
    };
    let mut field = CoefficientField::zeros(lattice.extents(), tag)?;
    for (p, lam) in lattice.points().zip(lambdas) {
        let k: Vec<usize> = p.iter().map(|v| *v as usize).collect();
        let w = match kernel {
            SliceKernel::S => s_weight(*lam, x_d),
            SliceKernel::Fcomposite => {
                Complex64::from_polar(snapped_frac(*lam, n_d, d), lam * x_d)
            }
            SliceKernel::Rdelta { h } => expm1_i(lam * h / n_d),
        };
        field.set(&k, w);
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::build_lattice;
    use std::f64::consts::PI;

    fn dv(v: &[f64]) -> DilationVector {
        DilationVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn indicator_has_unit_weights_on_lattice() {
        let f = indicator_coefficients(&build_lattice(&dv(&[2.0, 2.0]), 2).unwrap()).unwrap();
        assert_eq!(f.extents(), &[3, 3]);
        let ones = f.weights().iter().filter(|w| w.re == 1.0).count();
        assert_eq!(ones, 6);
        assert_eq!(f.energy(), 6.0);
        // (1,2) lies outside: 1/2 + 2/2 > 1
        assert_eq!(f.get(&[1, 2]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn indicator_degenerate_and_1d() {
        let f = indicator_coefficients(&build_lattice(&dv(&[0.5, 0.5]), 2).unwrap()).unwrap();
        assert_eq!(f.extents(), &[1, 1]);
        assert_eq!(f.weights(), &[Complex64::new(1.0, 0.0)]);
        let g = indicator_coefficients(&build_lattice(&dv(&[5.0]), 1).unwrap()).unwrap();
        assert_eq!(g.extents(), &[6]);
        assert!(g.weights().iter().all(|w| *w == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn fractional_examples() {
        let f = fractional_coefficients(&dv(&[2.0, 4.0])).unwrap();
        assert!(f.is_zero());
        let f = fractional_coefficients(&dv(&[2.0, 3.0])).unwrap();
        let w: Vec<f64> = f.weights().iter().map(|c| c.re).collect();
        assert_eq!(w, vec![0.0, 0.5, 0.0]);
        let f = fractional_coefficients(&dv(&[2.75])).unwrap();
        assert_eq!(f.dim(), 0);
        assert_eq!(f.weights()[0].re, 0.75);
    }

    #[test]
    fn integral_lambdas_give_zero_field() {
        for (a, b) in [(3.0, 12.0), (4.0, 4.0), (5.0, 35.0), (2.0, 9.0 * 2.0)] {
            assert!(fractional_coefficients(&dv(&[a, b])).unwrap().is_zero());
        }
        assert!(fractional_coefficients(&dv(&[2.0, 4.0, 8.0])).unwrap().is_zero());
    }

    #[test]
    fn s_slice_limit_and_pi() {
        let n = dv(&[2.0, 3.0]);
        let s0 = slice_coefficients(&n, SliceKernel::S, 0.0, true).unwrap();
        let w: Vec<f64> = s0.weights().iter().map(|c| c.re).collect();
        assert_eq!(w, vec![3.0, 1.5, 0.0]);
        assert!(matches!(
            slice_coefficients(&n, SliceKernel::S, 1e-9, false),
            Err(Error::NearSingularity { .. })
        ));

        let s = slice_coefficients(&dv(&[2.0, 2.0]), SliceKernel::S, PI, false).unwrap();
        let expect = Complex64::new(0.0, 2.0 / PI);
        assert!((s.get(&[1]) - expect).norm() < 1e-15);
    }

    #[test]
    fn fcomposite_at_zero_is_fractional() {
        let n = dv(&[2.0, 3.0]);
        let a = slice_coefficients(&n, SliceKernel::Fcomposite, 0.0, false).unwrap();
        let b = fractional_coefficients(&n).unwrap();
        assert_eq!(a.weights(), b.weights());
    }

    #[test]
    fn s_slice_continuous_at_zero() {
        let n = dv(&[7.3, 19.6]);
        let a = slice_coefficients(&n, SliceKernel::S, 1e-6, false).unwrap();
        let b = slice_coefficients(&n, SliceKernel::S, 0.0, true).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).norm() <= 1e-5 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn direct_eval_matches_definition() {
        let f = CoefficientField::from_real_1d(&[1.0, 2.0, 3.0], "t");
        let x = 0.7f64;
        let expect = Complex64::new(1.0, 0.0)
            + 2.0 * Complex64::from_polar(1.0, x)
            + 3.0 * Complex64::from_polar(1.0, 2.0 * x);
        assert!((f.eval_direct(&[x]) - expect).norm() < 1e-14);
    }
}
