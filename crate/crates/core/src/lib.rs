//! Fractional (Caputo) growth dynamics and the production-function
//! invariants they induce.
//!
//! Each production factor follows ᶜD^α x = b·x with 0 < α ≤ 1, solved by
//! x(t) = x0·E_α(b t^α). Eliminating t between labor, capital and output
//! yields a generalised Cobb-Douglas surface that reduces to the classical
//! one when every α = 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod caputo;
pub mod cli;
pub mod error;
pub mod gamma;
pub mod growth;
pub mod mittag_leffler;
pub mod surface;

pub use calibration::{fit_economy, fit_factor, Bounds, EconomyFit, FitResult, ThetaChoice};
pub use caputo::{
    abm_max_rel_error, caputo_l1, solve_fode_abm, verify_eigenproperty, TimeGrid, Trajectory,
};
pub use error::{Error, Result};
pub use growth::{
    level_at, sample_trajectory, semigroup_defect, time_from_level, FactorParams, GrowthFactor,
};
pub use mittag_leffler::{
    ml_derivative, ml_eval, ml_eval2, ml_eval_report, ml_inverse, Branch, FracOrder, MLEvalReport,
};
pub use surface::{
    classical_cd, classical_limit_params, crs_theta, invariant_residuals, limit_convergence_probe,
    surface_residual, surface_sample, y_composite, y_from_capital, y_from_labor, ClassicalParams,
    CrsTheta, EconomySpec, SurfacePoint,
};
