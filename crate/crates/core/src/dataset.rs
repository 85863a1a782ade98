//! Numeric tabular datasets: CSV ingestion, persistence, holdout splits and
//! model validation.
//!
//! The CSV dialect is deliberately small: comma separated, no quoting,
//! `\n` or `\r\n` line endings, a header row of identifiers, and finite
//! numeric fields only. Missing values are an error.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::g17;
use crate::is_identifier;
use crate::models::LinearModel;
use crate::stats::pearson;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Dataset {
    /// Builds a dataset, checking column names and that every row is
    /// rectangular and finite. Row errors report `line = index + 2`, the
    /// line the row would occupy in a CSV file.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_header(&columns)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::RaggedRow {
                    line: i + 2,
                    expected: columns.len(),
                    found: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NotNumeric {
                    line: i + 2,
                    column: j + 1,
                    text: row[j].to_string(),
                });
            }
        }
        Ok(Dataset { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Returns a copy with `values` appended as a new last column.
    pub fn with_column(&self, name: &str, values: Vec<f64>) -> Result<Dataset> {
        if values.len() != self.rows.len() {
            return Err(Error::LengthMismatch(self.rows.len(), values.len()));
        }
        let mut columns = self.columns.clone();
        columns.push(name.to_string());
        let rows = self
            .rows
            .iter()
            .zip(values)
            .map(|(r, v)| {
                let mut r = r.clone();
                r.push(v);
                r
            })
            .collect();
        Dataset::new(columns, rows)
    }

    /// Rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

fn check_header(columns: &[String]) -> Result<()> {
    for (i, name) in columns.iter().enumerate() {
        if !is_identifier(name) {
            return Err(Error::BadIdentifier(name.clone()));
        }
        if columns[..i].contains(name) {
            return Err(Error::DuplicateColumn(name.clone()));
        }
    }
    Ok(())
}

pub fn read_csv(source: &str) -> Result<Dataset> {
    let mut lines = source
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (_, header) = lines.next().ok_or(Error::Empty)?;
    let columns: Vec<String> = header.split(',').map(|f| f.trim().to_string()).collect();
    check_header(&columns)?;

    let mut rows = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::RaggedRow {
                line,
                expected: columns.len(),
                found: fields.len(),
            });
        }
        let row = fields
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let f = f.trim();
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::NotNumeric {
                        line,
                        column: j + 1,
                        text: f.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Dataset { columns, rows })
}

/// Header plus one line per row, values at 17 significant digits so that
/// [`read_csv`] restores them exactly.
pub fn write_csv(d: &Dataset) -> String {
    let mut out = d.columns.join(",");
    out.push('\n');
    for row in &d.rows {
        let fields: Vec<String> = row.iter().map(|v| g17(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Seeded permutation of `0..n`.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`;
/// the shuffle is Fisher–Yates from the last position down, drawing
/// `j = (next_u64() * (i + 1)) >> 64` for position `i`. Both steps are
/// fixed so a published seed reproduces the split anywhere.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = ((rng.next_u64() as u128 * (i as u128 + 1)) >> 64) as usize;
        idx.swap(i, j);
    }
    idx
}

/// Number of training rows for a split: `ceil(fraction * n)`, kept within
/// `1..=n-1` so neither side is empty.
pub fn train_size(n: usize, train_fraction: f64) -> usize {
    // The epsilon absorbs products such as 0.7 * 10 = 7.000000000000001.
    let k = (train_fraction * n as f64 - 1e-9).ceil() as usize;
    k.clamp(1, n.saturating_sub(1).max(1))
}

/// Shuffles rows with [`shuffled_indices`] and cuts after
/// [`train_size`] rows.
pub fn holdout_split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let n = d.n_rows();
    if n < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: n,
        });
    }
    let order = shuffled_indices(n, seed);
    let k = train_size(n, train_fraction);
    Ok((d.select_rows(&order[..k]), d.select_rows(&order[k..])))
}

/// Predictions of a model on a holdout set, with the matching observed
/// values and their Pearson correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub predictions: Vec<f64>,
    pub actuals: Vec<f64>,
    pub r: f64,
}

pub fn predict(model: &LinearModel, d: &Dataset) -> Result<Vec<f64>> {
    let idx: Vec<(&str, usize)> = model
        .predictors()
        .map(|p| d.column_index(p).map(|j| (p, j)))
        .collect::<Result<_>>()?;
    d.rows()
        .iter()
        .map(|row| {
            model.evaluate_with(|name| idx.iter().find(|(p, _)| *p == name).map(|&(_, j)| row[j]))
        })
        .collect()
}

pub fn validate_model(model: &LinearModel, d: &Dataset, response: &str) -> Result<Validation> {
    let actuals = d.column(response)?;
    let predictions = predict(model, d)?;
    if d.n_rows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: d.n_rows(),
        });
    }
    if actuals.iter().all(|v| *v == actuals[0]) {
        return Err(Error::ConstantVector(format!("response `{response}`")));
    }
    let r = pearson(&predictions, &actuals)?;
    Ok(Validation {
        predictions,
        actuals,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_csv() {
        let d = read_csv("NC,NGenH\n3,1\n").unwrap();
        assert_eq!(d.columns(), ["NC", "NGenH"]);
        assert_eq!(d.rows(), [vec![3.0, 1.0]]);
    }

    #[test]
    fn number_forms_and_spacing() {
        let d = read_csv(" a , b ,c\r\n 1 , -2.5 , 3e-2 \r\n\r\n4,.5,1E3\n").unwrap();
        assert_eq!(d.columns(), ["a", "b", "c"]);
        assert_eq!(d.rows(), [vec![1.0, -2.5, 0.03], vec![4.0, 0.5, 1000.0]]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = read_csv("a,b\n1,2\n3\n").unwrap_err();
        assert_eq!(err.code(), "E_RAGGED_ROW");
        assert!(matches!(err, Error::RaggedRow { line: 3, .. }));
    }

    #[test]
    fn not_numeric_reports_position() {
        let err = read_csv("a,b\n1,x\n").unwrap_err();
        assert_eq!(
            err,
            Error::NotNumeric {
                line: 2,
                column: 2,
                text: "x".into()
            }
        );
        for bad in ["a\nNaN\n", "a\ninf\n", "a\n1,\n"] {
            assert!(read_csv(bad).is_err(), "{bad:?}");
        }
        assert_eq!(read_csv("a\nNaN\n").unwrap_err().code(), "E_NOT_NUMERIC");
        assert_eq!(read_csv("a,b\n1,\n").unwrap_err().code(), "E_NOT_NUMERIC");
    }

    #[test]
    fn header_errors() {
        assert_eq!(read_csv("").unwrap_err(), Error::Empty);
        assert_eq!(read_csv("\n  \n").unwrap_err(), Error::Empty);
        assert_eq!(read_csv("a,a\n").unwrap_err().code(), "E_DUP_COLUMN");
        assert_eq!(read_csv("a,b c\n").unwrap_err().code(), "E_BAD_IDENT");
    }

    #[test]
    fn header_only_is_valid() {
        let d = read_csv("x,y\n").unwrap();
        assert_eq!(d.n_rows(), 0);
        assert_eq!(write_csv(&d), "x,y\n");
    }

    #[test]
    fn writes_single_value() {
        let d = Dataset::new(vec!["col".into()], vec![vec![0.5]]).unwrap();
        assert_eq!(write_csv(&d), "col\n0.5\n");
    }

    #[test]
    fn new_validates_rows() {
        let err = Dataset::new(vec!["a".into()], vec![vec![1.0], vec![]]).unwrap_err();
        assert!(matches!(err, Error::RaggedRow { line: 3, .. }));
        let err = Dataset::new(vec!["a".into()], vec![vec![f64::NAN]]).unwrap_err();
        assert_eq!(err.code(), "E_NOT_NUMERIC");
    }

    fn numbered(n: usize) -> Dataset {
        Dataset::new(
            vec!["id".into(), "sq".into()],
            (0..n).map(|i| vec![i as f64, (i * i) as f64]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn split_28_rows_three_quarters() {
        let (train, test) = holdout_split(&numbered(28), 0.75, 42).unwrap();
        assert_eq!((train.n_rows(), test.n_rows()), (21, 7));
    }

    #[test]
    fn split_two_rows() {
        let (train, test) = holdout_split(&numbered(2), 0.5, 1).unwrap();
        assert_eq!((train.n_rows(), test.n_rows()), (1, 1));
        let (train, test) = holdout_split(&numbered(2), 0.99, 1).unwrap();
        assert_eq!((train.n_rows(), test.n_rows()), (1, 1));
    }

    #[test]
    fn split_errors() {
        assert_eq!(
            holdout_split(&numbered(1), 0.75, 0).unwrap_err().code(),
            "E_TOO_FEW_ROWS"
        );
        assert_eq!(
            holdout_split(&numbered(5), 1.0, 0).unwrap_err().code(),
            "E_DOMAIN"
        );
        assert_eq!(
            holdout_split(&numbered(5), 0.0, 0).unwrap_err().code(),
            "E_DOMAIN"
        );
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let d = numbered(28);
        assert_eq!(
            holdout_split(&d, 0.75, 7).unwrap(),
            holdout_split(&d, 0.75, 7).unwrap()
        );
        assert_ne!(shuffled_indices(28, 7), shuffled_indices(28, 8));
    }

    #[test]
    fn train_size_rounding() {
        assert_eq!(train_size(10, 0.7), 7);
        assert_eq!(train_size(28, 0.75), 21);
        assert_eq!(train_size(7, 0.75), 6);
        assert_eq!(train_size(3, 0.01), 1);
    }

    #[test]
    fn validation_with_exact_model() {
        let d = read_csv("x,y\n1,5\n2,7\n3,9\n4,11\n").unwrap();
        let m = LinearModel::new("y", 3.0, [("x", 2.0)]).unwrap();
        let v = validate_model(&m, &d, "y").unwrap();
        assert_eq!(v.predictions, v.actuals);
        assert!((v.r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        let d = read_csv("x,y\n1,5\n2,5\n").unwrap();
        let m = LinearModel::new("y", 0.0, [("x", 1.0)]).unwrap();
        assert_eq!(
            validate_model(&m, &d, "y").unwrap_err().code(),
            "E_CONSTANT_VECTOR"
        );
        assert_eq!(
            validate_model(&m, &d, "z").unwrap_err().code(),
            "E_UNKNOWN_COLUMN"
        );
        let m = LinearModel::new("y", 0.0, [("w", 1.0)]).unwrap();
        assert_eq!(
            validate_model(&m, &d, "y").unwrap_err().code(),
            "E_UNKNOWN_COLUMN"
        );
    }
}
