//! Pearson correlation.

use super::special::t_p_value;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Sample Pearson correlation, computed from mean-centred values and
/// clamped to [-1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantVector("first vector".into()));
    }
    if syy == 0.0 {
        return Err(Error::ConstantVector("second vector".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided p-value for `r` over `n` pairs, from `t = r √((n-2)/(1-r²))`
/// on `n - 2` degrees of freedom.
pub fn correlation_p_value(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(
            "correlation test needs at least 3 pairs".into(),
        ));
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("correlation {r} outside [-1, 1]")));
    }
    let df = n - 2;
    let t = if r.abs() == 1.0 {
        f64::INFINITY
    } else {
        r * (df as f64 / (1.0 - r * r)).sqrt()
    };
    t_p_value(t, df)
}

/// Pairwise Pearson correlations of the named columns. The diagonal is
/// exactly 1 and the matrix is symmetric by construction.
pub fn correlation_matrix(d: &Dataset, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let data: Vec<Vec<f64>> = columns.iter().map(|c| d.column(c)).collect::<Result<_>>()?;
    let k = data.len();
    let mut m = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in 0..i {
            let r = pearson(&data[i], &data[j]).map_err(|e| match e {
                Error::ConstantVector(_) => {
                    let name = if data[i].iter().all(|v| *v == data[i][0]) {
                        columns[i]
                    } else {
                        columns[j]
                    };
                    Error::ConstantVector(format!("column `{name}`"))
                }
                other => other,
            })?;
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    if k == 1 {
        // a lone column still has to be usable
        let col = &data[0];
        if col.len() < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: col.len(),
            });
        }
        if col.iter().all(|v| *v == col[0]) {
            return Err(Error::ConstantVector(format!("column `{}`", columns[0])));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACTUAL: [f64; 7] = [5.0, 4.0, 6.0, 3.0, 3.0, 2.0, 2.0];

    #[test]
    fn published_validation_correlations() {
        let modifiability = [6.02, 4.28, 6.56, 2.56, 2.19, 1.75, 1.43];
        let understandability = [5.12, 4.73, 5.87, 2.68, 2.31, 2.45, 1.93];
        assert!((pearson(&modifiability, &ACTUAL).unwrap() - 0.983).abs() < 0.0005);
        assert!((pearson(&understandability, &ACTUAL).unwrap() - 0.955).abs() < 0.0005);
    }

    #[test]
    fn self_correlation_is_one() {
        let x = [0.3, -1.2, 4.4, 2.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed() {
        // x = 1..4, y = (1, 3, 2, 4): Sxy = 4, Sxx = Syy = 5, r = 0.8
        let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(
            pearson(&[1.0, 2.0], &[1.0]).unwrap_err().code(),
            "E_LENGTH_MISMATCH"
        );
        assert_eq!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]).unwrap_err().code(),
            "E_CONSTANT_VECTOR"
        );
        assert_eq!(
            pearson(&[1.0, 2.0], &[3.0, 3.0]).unwrap_err().code(),
            "E_CONSTANT_VECTOR"
        );
        assert_eq!(
            pearson(&[1.0], &[1.0]).unwrap_err().code(),
            "E_TOO_FEW_ROWS"
        );
    }

    #[test]
    fn published_correlations_are_significant_at_one_percent() {
        for r in [0.983, 0.955] {
            assert!(correlation_p_value(r, 7).unwrap() < 0.01);
        }
        assert_eq!(correlation_p_value(1.0, 7).unwrap(), 0.0);
        assert_eq!(correlation_p_value(0.0, 7).unwrap(), 1.0);
        assert!(correlation_p_value(0.5, 2).is_err());
    }

    fn frame(cols: &[&str], data: &[&[f64]]) -> Dataset {
        let rows = (0..data[0].len())
            .map(|i| data.iter().map(|c| c[i]).collect())
            .collect();
        Dataset::new(cols.iter().map(|c| c.to_string()).collect(), rows).unwrap()
    }

    #[test]
    fn matrix_shapes() {
        let d = frame(
            &["a", "b", "c"],
            &[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]],
        );
        assert_eq!(correlation_matrix(&d, &["a"]).unwrap(), vec![vec![1.0]]);
        let m = correlation_matrix(&d, &["a", "b"]).unwrap();
        for row in &m {
            for v in row {
                assert!((v - 1.0).abs() < 1e-15);
            }
        }
        let m = correlation_matrix(&d, &["a", "b", "c"]).unwrap();
        for (i, row) in m.iter().enumerate() {
            assert_eq!(row[i], 1.0);
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, m[j][i]);
            }
        }
        assert_eq!(
            m[2][0],
            pearson(&[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap()
        );
    }

    #[test]
    fn matrix_errors_name_the_column() {
        let d = frame(&["a", "k"], &[&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]]);
        assert_eq!(
            correlation_matrix(&d, &["a", "k"]).unwrap_err(),
            Error::ConstantVector("column `k`".into())
        );
        assert_eq!(
            correlation_matrix(&d, &["k"]).unwrap_err().code(),
            "E_CONSTANT_VECTOR"
        );
        assert_eq!(
            correlation_matrix(&d, &["zz"]).unwrap_err().code(),
            "E_UNKNOWN_COLUMN"
        );
    }
}
