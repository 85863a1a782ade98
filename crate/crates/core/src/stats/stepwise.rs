//! Backward stepwise elimination.

use super::ols::{ols_fit, Elimination, FitReport};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Removal threshold used when none is given.
pub const DEFAULT_ALPHA_REMOVE: f64 = 0.10;

/// Starts from all `candidates` and repeatedly drops the predictor with the
/// largest coefficient p-value while that p-value exceeds `alpha_remove`,
/// refitting after each removal. Ties go to the predictor listed later in
/// `candidates`. The returned report carries the removals in order.
pub fn backward_stepwise(
    d: &Dataset,
    response: &str,
    candidates: &[&str],
    alpha_remove: f64,
) -> Result<FitReport> {
    if !(alpha_remove > 0.0 && alpha_remove <= 1.0) {
        return Err(Error::Domain(format!(
            "alpha_remove must lie in (0, 1], got {alpha_remove}"
        )));
    }
    let mut active: Vec<&str> = candidates.to_vec();
    let mut trace = Vec::new();
    loop {
        let mut fit = ols_fit(d, response, &active)?;
        // coefficients[0] is the intercept; predictors follow in `active` order.
        let p_values: Vec<f64> = fit.coefficients[1..].iter().map(|c| c.p_value).collect();
        match least_significant(&p_values) {
            Some((i, p)) if p > alpha_remove => {
                trace.push(Elimination {
                    predictor: active[i].to_string(),
                    p_value: p,
                });
                active.remove(i);
            }
            _ => {
                fit.elimination_trace = trace;
                return Ok(fit);
            }
        }
    }
}

/// Index and value of the largest p-value, preferring the last on ties.
fn least_significant(p_values: &[f64]) -> Option<(usize, f64)> {
    p_values
        .iter()
        .copied()
        .enumerate()
        .fold(None, |best, (i, p)| match best {
            Some((_, worst)) if p < worst => best,
            _ => Some((i, p)),
        })
}
