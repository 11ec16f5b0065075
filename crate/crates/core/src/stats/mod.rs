//! Concentration experiments, exponent estimation and variance diagnostics.

mod concentration;
mod estimate;
mod variance;

pub use concentration::{
    azuma_bound, azuma_rate, concentration_experiment, deviation_threshold, sup_deviation,
    DegreeDeviation, ExperimentConfig, ExperimentReport, GraphSummary,
};
pub(crate) use concentration::median;
pub use estimate::{
    estimate_exponent_mle, estimate_exponent_regression, estimator_bias_harness,
    hurwitz_zeta_with_log, BiasRow, BiasTable, Estimator, HarnessConfig, MleFit, RegressionFit,
    MLE_LOWER, MLE_UPPER,
};
pub use variance::{
    compound_variance, variance_diagnostic, variance_with_se, GraphSource, VarianceMcConfig,
    VarianceReport,
};
