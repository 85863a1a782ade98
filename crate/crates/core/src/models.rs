//! Linear quality models and the built-in maintainability models.
//!
//! Understandability and modifiability are linear in class-diagram
//! metrics; maintainability is linear in those two scores:
//!
//! ```text
//! Understandability = 1.166 + 0.256 NC - 0.394 NGenH
//! Modifiability     = 0.629 + 0.471 NC - 0.173 NGen - 0.616 NAggH
//!                           - 0.696 NGenH + 0.396 MaxDIT
//! Maintainability   = -0.126 + 0.645 Understandability + 0.502 Modifiability
//! ```

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagram::ClassDiagram;
use crate::error::{Error, Result};
use crate::format::json_number;
use crate::metrics::{compute_metrics, MetricVector};

/// `intercept + Σ coefficient · input`, with named predictors kept in
/// insertion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDoc")]
pub struct LinearModel {
    name: String,
    intercept: f64,
    coefficients: IndexMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    name: String,
    intercept: f64,
    coefficients: IndexMap<String, f64>,
}

impl TryFrom<ModelDoc> for LinearModel {
    type Error = Error;

    fn try_from(doc: ModelDoc) -> Result<Self> {
        LinearModel::new(doc.name, doc.intercept, doc.coefficients)
    }
}

impl LinearModel {
    pub fn new<I, S>(name: impl Into<String>, intercept: f64, coefficients: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        if !intercept.is_finite() {
            return Err(Error::InvalidModel("intercept is not finite".into()));
        }
        let mut map = IndexMap::new();
        for (name, value) in coefficients {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidModel("empty predictor name".into()));
            }
            if !value.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "coefficient of `{name}` is not finite"
                )));
            }
            if map.insert(name.clone(), value).is_some() {
                return Err(Error::InvalidModel(format!(
                    "predictor `{name}` appears twice"
                )));
            }
        }
        Ok(LinearModel {
            name: name.into(),
            intercept,
            coefficients: map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&str, f64)> {
        self.coefficients.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn coefficient(&self, predictor: &str) -> Option<f64> {
        self.coefficients.get(predictor).copied()
    }

    pub fn predictors(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    /// Evaluates the model, looking inputs up by predictor name. Terms are
    /// summed in coefficient order, starting from the intercept.
    pub fn evaluate_with<F>(&self, mut lookup: F) -> Result<f64>
    where
        F: FnMut(&str) -> Option<f64>,
    {
        let mut y = self.intercept;
        for (name, beta) in &self.coefficients {
            let x = lookup(name).ok_or_else(|| Error::MissingPredictor(name.clone()))?;
            y += beta * x;
        }
        Ok(y)
    }

    /// Extra keys in `inputs` are ignored.
    pub fn evaluate(&self, inputs: &BTreeMap<String, f64>) -> Result<f64> {
        self.evaluate_with(|name| inputs.get(name).copied())
    }

    /// Model document `{"name", "intercept", "coefficients"}` with numbers
    /// printed to 17 significant digits.
    pub fn to_json(&self) -> Value {
        let coefficients: serde_json::Map<String, Value> = self
            .coefficients
            .iter()
            .map(|(k, v)| (k.clone(), json_number(*v)))
            .collect();
        json!({
            "name": self.name,
            "intercept": json_number(self.intercept),
            "coefficients": coefficients,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))
    }
}

impl std::fmt::Display for LinearModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.name, self.intercept)?;
        for (name, beta) in &self.coefficients {
            let sign = if *beta < 0.0 { '-' } else { '+' };
            write!(f, " {sign} {} * {name}", beta.abs())?;
        }
        Ok(())
    }
}

pub const UNDERSTANDABILITY: &str = "Understandability";
pub const MODIFIABILITY: &str = "Modifiability";
pub const MAINTAINABILITY: &str = "Maintainability";

pub fn builtin_understandability() -> LinearModel {
    LinearModel::new(UNDERSTANDABILITY, 1.166, [("NC", 0.256), ("NGenH", -0.394)])
        .expect("valid built-in")
}

pub fn builtin_modifiability() -> LinearModel {
    LinearModel::new(
        MODIFIABILITY,
        0.629,
        [
            ("NC", 0.471),
            ("NGen", -0.173),
            ("NAggH", -0.616),
            ("NGenH", -0.696),
            ("MaxDIT", 0.396),
        ],
    )
    .expect("valid built-in")
}

pub fn builtin_maintainability() -> LinearModel {
    LinearModel::new(
        MAINTAINABILITY,
        -0.126,
        [(UNDERSTANDABILITY, 0.645), (MODIFIABILITY, 0.502)],
    )
    .expect("valid built-in")
}

/// Looks up a built-in model by its command-line name.
pub fn builtin(name: &str) -> Option<LinearModel> {
    match name.to_ascii_lowercase().as_str() {
        "understandability" => Some(builtin_understandability()),
        "modifiability" => Some(builtin_modifiability()),
        "memood" | "maintainability" => Some(builtin_maintainability()),
        _ => None,
    }
}

/// Lowest and highest quality scores seen in the published validation
/// sets; scores outside this band are extrapolations.
pub const OBSERVED_RANGE: (f64, f64) = (1.43, 6.56);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityScores {
    pub understandability: f64,
    pub modifiability: f64,
    pub maintainability: f64,
}

impl QualityScores {
    /// Names of the scores lying outside [`OBSERVED_RANGE`].
    pub fn extrapolated(&self) -> Vec<&'static str> {
        let (lo, hi) = OBSERVED_RANGE;
        [
            ("understandability", self.understandability),
            ("modifiability", self.modifiability),
            ("maintainability", self.maintainability),
        ]
        .into_iter()
        .filter(|(_, v)| *v < lo || *v > hi)
        .map(|(n, _)| n)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assessment {
    pub metrics: MetricVector,
    pub scores: QualityScores,
}

/// Scores a metric vector with the built-in models: understandability
/// first, then modifiability, then maintainability from the two.
pub fn score_metrics(metrics: &MetricVector) -> QualityScores {
    let lookup = |name: &str| metrics.get(name).map(|v| v as f64);
    let understandability = builtin_understandability()
        .evaluate_with(lookup)
        .expect("metric predictors");
    let modifiability = builtin_modifiability()
        .evaluate_with(lookup)
        .expect("metric predictors");
    let maintainability = memood(understandability, modifiability);
    QualityScores {
        understandability,
        modifiability,
        maintainability,
    }
}

/// Maintainability from understandability and modifiability.
pub fn memood(understandability: f64, modifiability: f64) -> f64 {
    builtin_maintainability()
        .evaluate_with(|name| match name {
            UNDERSTANDABILITY => Some(understandability),
            MODIFIABILITY => Some(modifiability),
            _ => None,
        })
        .expect("maintainability predictors")
}

pub fn assess(d: &ClassDiagram) -> Assessment {
    let metrics = compute_metrics(d);
    Assessment {
        metrics,
        scores: score_metrics(&metrics),
    }
}
