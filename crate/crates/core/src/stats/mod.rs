//! Regression and correlation toolkit.
//!
//! [`ols_fit`] fits a linear model with intercept by Householder QR and
//! reports the ANOVA table, model summary and per-coefficient t-tests;
//! [`backward_stepwise`] wraps it in backward elimination. p-values come
//! from the regularized incomplete beta function in [`special`].

mod correlation;
mod ols;
pub mod special;
mod stepwise;

pub use correlation::{correlation_matrix, correlation_p_value, pearson};
pub use ols::{ols_fit, Anova, CoefficientStat, Elimination, FitReport, FitSummary, CONSTANT};
pub use special::{f_p_value, reg_incomplete_beta, t_p_value};
pub use stepwise::{backward_stepwise, DEFAULT_ALPHA_REMOVE};
