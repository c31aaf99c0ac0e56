//! L1 norms of the kernels, the 𝔉ᵏ functional, the pointwise identity check
//! and the one-dimensional double integral.

mod frak;
mod identity;
mod ld2;
mod quadrature;

pub use frak::{frak_f, FrakFValue, FrakLTerm, FrakMuTerm, MuRange, DEFAULT_T_NODES};
pub use identity::{verify_identity, verify_identity_at, IdentityPoint, IdentityReport, ROUNDING_SLACK};
pub use ld2::{double_integral_ld2, Ld2Result};
pub use quadrature::{
    Kernel, NormConfig, NormEngine, NormResult, ParsevalAudit, RefinementStep,
};
