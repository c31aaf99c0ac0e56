//! Dilation data, the Λ recursion, lattice enumeration and the coefficient
//! fields every kernel is built from.

mod dilation;
mod field;
mod lattice;

pub use dilation::{DilationVector, LambdaEvaluator};
pub(crate) use dilation::{snapped_floor, snapped_frac};
pub use field::{
    fractional_coefficients, fractional_coefficients_with_budget, indicator_coefficients,
    slice_coefficients, CoefficientField, SliceKernel, SINGULARITY_THRESHOLD,
};
pub(crate) use field::{expm1_i, s_weight, slice_coefficients_on, slice_lattice};
pub use lattice::{build_lattice, count_points, SimplexLattice, DEFAULT_BUDGET};
