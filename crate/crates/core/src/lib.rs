//! Design-phase maintainability estimation for UML class diagrams.
//!
//! The crate is organised as a pipeline:
//!
//! - [`parser`] reads the plain-text Class Diagram Language (`.cdl`) into a
//!   [`diagram::ClassDiagram`].
//! - [`metrics`] computes the eleven size and structural-complexity metrics
//!   (NC, NA, NM, NAssoc, NAgg, NDep, NGen, NAggH, NGenH, MaxDIT, MaxHAgg).
//! - [`models`] evaluates linear quality models and ships the fitted
//!   understandability, modifiability and maintainability models.
//! - [`stats`] holds the regression toolkit used to fit and validate such
//!   models: OLS via Householder QR, ANOVA, coefficient t-tests, backward
//!   stepwise elimination, Pearson correlation and the special functions
//!   behind the p-values.
//! - [`dataset`] ingests, splits and persists numeric CSV datasets.
//!
//! Every module is free of I/O; callers hand in text and get text back.

pub mod dataset;
pub mod diagram;
pub mod error;
pub mod format;
pub mod metrics;
pub mod models;
pub mod parser;
pub mod stats;

pub use dataset::Dataset;
pub use diagram::{ClassDef, ClassDiagram, RelKind, Relationship};
pub use error::{Error, Result};
pub use metrics::MetricVector;
pub use models::{LinearModel, QualityScores};
pub use stats::FitReport;

/// Identifier lexical rule shared by class names, members and dataset
/// columns: `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
