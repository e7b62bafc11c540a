//! Bootstrap inference for AR(1) impulse responses via lag-augmented local
//! projections.
//!
//! The crate estimates impulse response coefficients `rho^h` of an AR(1)
//! model with a two-regressor local projection, attaches HC/HC2/HC3
//! standard errors, and builds confidence intervals from either normal
//! critical values or residual/wild bootstrap critical values. A parallel,
//! seed-reproducible Monte Carlo harness measures coverage probabilities
//! and median interval lengths over a grid of shock designs.

pub mod bootstrap;
pub mod dgp;
pub mod error;
pub mod intervals;
pub mod lp;
pub mod numerics;
pub mod study;

pub use bootstrap::{
    bootstrap_roots, centered_residuals, critical_value_sym, quantile_pair_equal_tail,
    BootstrapDraws, BootstrapScheme, BootstrapSpec,
};
pub use dgp::{
    generate_shocks, simulate_ar1, Innovation, RngStream, Series, ShockDesign, VarianceConvention,
};
pub use error::{Error, Result};
pub use intervals::{build_interval, ConfidenceInterval, IntervalMethod};
pub use lp::{fit_lp, impulse_response, rho_hat_full, LpFit, Root, SeKind};
pub use study::{run_replication, run_study, CellPlan, CellRecord, CoverageReport, StudyConfig};
