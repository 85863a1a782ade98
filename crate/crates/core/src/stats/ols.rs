//! Ordinary least squares with an intercept, solved by Householder QR.

use serde_json::{json, Value};

use super::special::{f_p_value, t_p_value};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::format::json_number;
use crate::models::LinearModel;

/// Label of the intercept row in coefficient tables.
pub const CONSTANT: &str = "(Constant)";

// A column whose component orthogonal to the earlier columns is below this
// fraction of its own norm is treated as collinear.
const RANK_TOL: f64 = 1e-10;
// Residual sum of squares below this fraction of the total sum of squares
// marks an exact (saturated) fit.
const SATURATION_TOL: f64 = 1e-20;
// In a saturated fit, a term whose contribution to the fitted values is
// below this fraction of the response spread counts as exactly zero.
const NEGLIGIBLE_TERM: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientStat {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

/// Regression ANOVA table.
///
/// For an intercept-only model (`df_regression == 0`) the regression mean
/// square, `f_value` and `f_p_value` are undefined and set to NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anova {
    pub ss_regression: f64,
    pub ss_residual: f64,
    pub ss_total: f64,
    pub df_regression: usize,
    pub df_residual: usize,
    pub ms_regression: f64,
    pub ms_residual: f64,
    pub f_value: f64,
    pub f_p_value: f64,
}

impl Anova {
    /// Completes the table from its sums of squares and degrees of freedom,
    /// taking the total as `ss_regression + ss_residual`.
    pub fn from_sums(
        ss_regression: f64,
        ss_residual: f64,
        df_regression: usize,
        df_residual: usize,
    ) -> Result<Anova> {
        Anova::with_total(
            ss_regression,
            ss_residual,
            ss_regression + ss_residual,
            df_regression,
            df_residual,
        )
    }

    pub fn with_total(
        ss_regression: f64,
        ss_residual: f64,
        ss_total: f64,
        df_regression: usize,
        df_residual: usize,
    ) -> Result<Anova> {
        if df_residual == 0 {
            return Err(Error::Domain(
                "residual degrees of freedom must be positive".into(),
            ));
        }
        let ms_residual = ss_residual / df_residual as f64;
        let (ms_regression, f_value, f_p) = if df_regression == 0 {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let ms = ss_regression / df_regression as f64;
            let f = if ms_residual > 0.0 {
                ms / ms_residual
            } else {
                f64::INFINITY
            };
            (ms, f, f_p_value(f, df_regression, df_residual)?)
        };
        Ok(Anova {
            ss_regression,
            ss_residual,
            ss_total,
            df_regression,
            df_residual,
            ms_regression,
            ms_residual,
            f_value,
            f_p_value: f_p,
        })
    }

    pub fn df_total(&self) -> usize {
        self.df_regression + self.df_residual
    }
}

/// Model summary: multiple R, R², adjusted R² and the standard error of
/// the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSummary {
    pub r: f64,
    pub r_squared: f64,
    pub adjusted_r_squared: f64,
    pub std_error_of_estimate: f64,
}

impl FitSummary {
    pub fn from_anova(anova: &Anova) -> FitSummary {
        let r_squared = if anova.ss_total > 0.0 {
            (anova.ss_regression / anova.ss_total).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let n_minus_1 = anova.df_total() as f64;
        let adjusted = 1.0 - (1.0 - r_squared) * n_minus_1 / anova.df_residual as f64;
        FitSummary {
            r: r_squared.sqrt(),
            r_squared,
            adjusted_r_squared: adjusted,
            std_error_of_estimate: anova.ms_residual.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Elimination {
    pub predictor: String,
    pub p_value: f64,
}

/// Everything a regression run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub response: String,
    pub model: LinearModel,
    pub n: usize,
    /// Intercept first (named [`CONSTANT`]), then predictors in fit order.
    pub coefficients: Vec<CoefficientStat>,
    pub anova: Anova,
    pub summary: FitSummary,
    pub residuals: Vec<f64>,
    pub elimination_trace: Vec<Elimination>,
    /// Exact fit: residuals vanish, so standard errors are reported as 0
    /// and each t statistic is ±∞ (p = 0), or 0 (p = 1) for terms that
    /// contribute nothing.
    pub saturated: bool,
}

impl FitReport {
    pub fn predictors(&self) -> impl Iterator<Item = &str> {
        self.model.predictors()
    }

    pub fn coefficient(&self, name: &str) -> Option<&CoefficientStat> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    /// JSON rendering with floats at 17 significant digits. Undefined or
    /// infinite statistics become `null`.
    pub fn to_json(&self) -> Value {
        let a = &self.anova;
        let s = &self.summary;
        json!({
            "response": self.response,
            "n": self.n,
            "saturated": self.saturated,
            "model": self.model.to_json(),
            "anova": {
                "ss_regression": json_number(a.ss_regression),
                "ss_residual": json_number(a.ss_residual),
                "ss_total": json_number(a.ss_total),
                "df_regression": a.df_regression,
                "df_residual": a.df_residual,
                "df_total": a.df_total(),
                "ms_regression": json_number(a.ms_regression),
                "ms_residual": json_number(a.ms_residual),
                "f_value": json_number(a.f_value),
                "f_p_value": json_number(a.f_p_value),
            },
            "summary": {
                "r": json_number(s.r),
                "r_squared": json_number(s.r_squared),
                "adjusted_r_squared": json_number(s.adjusted_r_squared),
                "std_error_of_estimate": json_number(s.std_error_of_estimate),
            },
            "coefficients": self.coefficients.iter().map(|c| json!({
                "name": c.name,
                "estimate": json_number(c.estimate),
                "std_error": json_number(c.std_error),
                "t_value": json_number(c.t_value),
                "p_value": json_number(c.p_value),
            })).collect::<Vec<_>>(),
            "elimination_trace": self.elimination_trace.iter().map(|e| json!({
                "predictor": e.predictor,
                "p_value": json_number(e.p_value),
            })).collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|r| json_number(*r)).collect::<Vec<_>>(),
        })
    }
}

/// Fits `response ~ 1 + predictors` by least squares.
pub fn ols_fit(d: &Dataset, response: &str, predictors: &[&str]) -> Result<FitReport> {
    let y = d.column(response)?;
    let mut columns = vec![vec![1.0; d.n_rows()]];
    for p in predictors {
        columns.push(d.column(p)?);
    }
    let n = y.len();
    let p = columns.len();
    if n < p + 1 {
        return Err(Error::TooFewRows {
            needed: p + 1,
            found: n,
        });
    }

    let mean_y = y.iter().sum::<f64>() / n as f64;
    let ss_total: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    if ss_total == 0.0 {
        return Err(Error::ConstantVector(format!("response `{response}`")));
    }

    let qr = HouseholderQr::new(&columns, &y);
    for j in 0..p {
        let norm = columns[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if qr.r[j][j].abs() <= RANK_TOL * norm || norm == 0.0 {
            let name = if j == 0 { CONSTANT } else { predictors[j - 1] };
            return Err(Error::RankDeficient(name.to_string()));
        }
    }
    let beta = qr.solve();

    let residuals: Vec<f64> = (0..n)
        .map(|i| y[i] - (0..p).map(|j| columns[j][i] * beta[j]).sum::<f64>())
        .collect();
    let ss_residual: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_regression: f64 = y
        .iter()
        .zip(&residuals)
        .map(|(yi, ri)| (yi - ri - mean_y).powi(2))
        .sum();

    let df_regression = p - 1;
    let df_residual = n - p;
    let anova = Anova::with_total(
        ss_regression,
        ss_residual,
        ss_total,
        df_regression,
        df_residual,
    )?;
    let summary = FitSummary::from_anova(&anova);
    let saturated = ss_residual <= SATURATION_TOL * ss_total;

    let xtx_inv_diag = qr.inverse_gram_diagonal();
    let mut coefficients = Vec::with_capacity(p);
    for j in 0..p {
        let name = if j == 0 { CONSTANT } else { predictors[j - 1] };
        let estimate = beta[j];
        let (std_error, t_value, p_value) = if saturated {
            let norm = columns[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if estimate.abs() * norm <= NEGLIGIBLE_TERM * ss_total.sqrt() {
                (0.0, 0.0, 1.0)
            } else {
                (0.0, f64::INFINITY.copysign(estimate), 0.0)
            }
        } else {
            let se = summary.std_error_of_estimate * xtx_inv_diag[j].sqrt();
            let t = estimate / se;
            (se, t, t_p_value(t, df_residual)?)
        };
        coefficients.push(CoefficientStat {
            name: name.to_string(),
            estimate,
            std_error,
            t_value,
            p_value,
        });
    }

    let model = LinearModel::new(
        response,
        beta[0],
        predictors.iter().zip(&beta[1..]).map(|(n, b)| (*n, *b)),
    )?;

    Ok(FitReport {
        response: response.to_string(),
        model,
        n,
        coefficients,
        anova,
        summary,
        residuals,
        elimination_trace: Vec::new(),
        saturated,
    })
}

/// Householder QR of an `n × p` design (stored by column), applied to the
/// response as it goes. Only `R` and `Qᵀy` are kept.
struct HouseholderQr {
    r: Vec<Vec<f64>>, // r[i][j], upper triangle
    qty: Vec<f64>,
}

impl HouseholderQr {
    fn new(columns: &[Vec<f64>], y: &[f64]) -> Self {
        let n = y.len();
        let p = columns.len();
        let mut a: Vec<Vec<f64>> = columns.to_vec();
        let mut qty = y.to_vec();

        for j in 0..p {
            let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let alpha = if a[j][j] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = a[j][j..].to_vec();
            v[0] -= alpha;
            let vv: f64 = v.iter().map(|x| x * x).sum();
            if vv == 0.0 {
                continue;
            }
            let reflect = |col: &mut [f64]| {
                let s = 2.0 * v.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>() / vv;
                for (c, vi) in col.iter_mut().zip(&v) {
                    *c -= s * vi;
                }
            };
            for col in a.iter_mut().skip(j) {
                reflect(&mut col[j..n]);
            }
            reflect(&mut qty[j..n]);
        }

        let r = (0..p)
            .map(|i| (0..p).map(|j| if j >= i { a[j][i] } else { 0.0 }).collect())
            .collect();
        HouseholderQr { r, qty }
    }

    fn solve(&self) -> Vec<f64> {
        let p = self.r.len();
        let mut beta = vec![0.0; p];
        for i in (0..p).rev() {
            let s: f64 = (i + 1..p).map(|j| self.r[i][j] * beta[j]).sum();
            beta[i] = (self.qty[i] - s) / self.r[i][i];
        }
        beta
    }

    /// Diagonal of `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`, i.e. squared row norms of `R⁻¹`.
    #[allow(clippy::needless_range_loop)]
    fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let p = self.r.len();
        // Columns of R⁻¹ by back substitution on unit vectors.
        let mut inv = vec![vec![0.0; p]; p];
        for k in 0..p {
            for i in (0..=k).rev() {
                let e = if i == k { 1.0 } else { 0.0 };
                let s: f64 = (i + 1..=k).map(|j| self.r[i][j] * inv[j][k]).sum();
                inv[i][k] = (e - s) / self.r[i][i];
            }
        }
        inv.iter()
            .map(|row| row.iter().map(|v| v * v).sum())
            .collect()
    }
}
