//! Kernel evaluation: pointwise sums, the δ operator, and grid synthesis.

mod eval;
mod grid;
mod torus;

pub use eval::{
    apply_delta, eval_d, eval_f, eval_r, eval_s, grid_eval_sliced, r_tail_bound,
    PointEvaluator, SlicedKernel, DEFAULT_NU_MAX,
};
#[cfg(test)]
pub(crate) use eval::geometric;
pub(crate) use eval::slice_field;
pub use grid::{
    grid_eval, grid_eval_with_budget, grid_moments, next_smooth, GridField, GridMoments, GridSpec,
};
pub(crate) use grid::plan;
pub use torus::{reduce_angle, TorusPoint};
