//! Closed-form predictors and the residual fits that compare them with
//! computed norms. Natural logarithms throughout.

mod regimes;
mod fit;
mod predictor;

pub use regimes::{
    multiple_check, power_regime, lambda_sweep, multiple_relations, MultipleReport,
    PowerRegimeReport, LambdaRow, LambdaSweep, MultipleRelation,
};
pub use fit::{fit_bilateral, fit_envelope, fit_records, BilateralFit, EnvelopeFit, SweepRecord};
pub use predictor::{
    classical_1d, eta_weights, full_predictor, isotropic_constant, main_term, remainder_envelope,
    EtaWeight, FrakTerm, PredictorValue,
};
