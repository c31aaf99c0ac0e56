//! Fractional-part kernels `Σ {αk} e^{ikx}` for rational, quadratic,
//! Liouville-type and decimal α, with exact arithmetic for `{αk}`.

mod alpha;
mod cf;
mod study;

pub use alpha::{AlphaSpec, DEFAULT_PRECISION_BITS};
pub use cf::{cf_expand, cf_expand_with_precision, ContinuedFraction};
pub use study::{
    convergent_denominators, frac_field, i_n, i_n_result, liouville_dip_scan, study_ratio,
    DipReport, LocalDip, RatioRecord, RatioStudy,
};
