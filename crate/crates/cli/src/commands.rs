use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use memood::dataset::{holdout_split, predict, read_csv, validate_model, write_csv};
use memood::format::{fixed3, json_number};
use memood::models::{assess, builtin, OBSERVED_RANGE};
use memood::parser::{parse, ParseDiagnostic, Severity};
use memood::stats::{backward_stepwise, correlation_p_value, CONSTANT};
use memood::{Dataset, Error, FitReport, LinearModel};
use serde_json::{json, Value};

use crate::table::Table;
use crate::{AnalyzeArgs, FitArgs, ScoreArgs, SplitArgs, ValidateArgs};

/// Why a command failed; each kind maps to a fixed exit code.
pub enum Failure {
    Usage(String),
    Parse {
        path: String,
        diagnostics: Vec<ParseDiagnostic>,
    },
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse { .. } => 2,
            Failure::Data(_) => 3,
        }
    }

    pub fn report(&self, style: &Style) {
        match self {
            Failure::Usage(msg) => eprintln!("{}: {msg}", style.error("error")),
            Failure::Parse { path, diagnostics } => {
                for d in diagnostics {
                    eprintln!("{}", style.diagnostic(path, d));
                }
            }
            Failure::Data(e) => eprintln!("{}: {e}", style.error(&format!("error[{}]", e.code()))),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// ANSI styling for the error stream, off when it is not a terminal or
/// `MEMOOD_NO_COLOR` is set.
pub struct Style {
    enabled: bool,
}

impl Style {
    pub fn detect() -> Style {
        Style {
            enabled: std::env::var_os("MEMOOD_NO_COLOR").is_none()
                && std::io::stderr().is_terminal(),
        }
    }

    fn paint(&self, text: &str, code: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn error(&self, text: &str) -> String {
        self.paint(text, "1;31")
    }

    fn diagnostic(&self, path: &str, d: &ParseDiagnostic) -> String {
        let line = format!("{path}:{d}");
        match d.severity {
            Severity::Error => self.paint(&line, "31"),
            Severity::Warning => self.paint(&line, "33"),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_dataset(path: &Path) -> Result<Dataset, Failure> {
    Ok(read_csv(&read_text(path)?)?)
}

fn emit(output: Option<&PathBuf>, text: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// A built-in model name or a path to a model JSON file.
fn load_model(name_or_path: &str) -> Result<LinearModel, Failure> {
    if let Some(model) = builtin(name_or_path) {
        return Ok(model);
    }
    let path = Path::new(name_or_path);
    if !path.is_file() {
        return Err(Failure::Usage(format!(
            "`{name_or_path}` is neither a built-in model (understandability, modifiability, memood) nor a model file"
        )));
    }
    Ok(LinearModel::from_json(&read_text(path)?)?)
}

pub fn analyze(args: &AnalyzeArgs, style: &Style) -> CmdResult {
    let path = args.file.display().to_string();
    let source = read_text(&args.file)?;
    let parsed = parse(&source, args.strict).map_err(|f| Failure::Parse {
        path: path.clone(),
        diagnostics: f.diagnostics,
    })?;
    let assessment = assess(&parsed.diagram);
    let scores = assessment.scores;
    let extrapolated = scores.extrapolated();

    if args.json {
        let value = json!({
            "metrics": serde_json::to_value(assessment.metrics).expect("serializable"),
            "scores": {
                "understandability": json_number(scores.understandability),
                "modifiability": json_number(scores.modifiability),
                "maintainability": json_number(scores.maintainability),
            },
            "warnings": serde_json::to_value(&parsed.warnings).expect("serializable"),
            "extrapolated": extrapolated,
        });
        return emit(args.output.as_ref(), &to_json_text(&value));
    }

    for w in &parsed.warnings {
        eprintln!("{}", style.diagnostic(&path, w));
    }
    let mut metrics = Table::new(["Metric", "Value"]);
    for (name, value) in assessment.metrics.iter() {
        metrics.row([name.to_string(), value.to_string()]);
    }
    let mut quality = Table::new(["Score", "Value", ""]);
    for (name, key, value) in [
        (
            "Understandability",
            "understandability",
            scores.understandability,
        ),
        ("Modifiability", "modifiability", scores.modifiability),
        ("Maintainability", "maintainability", scores.maintainability),
    ] {
        let note = if extrapolated.contains(&key) { "*" } else { "" };
        quality.row([name.to_string(), fixed3(value), note.to_string()]);
    }
    let mut out = format!("{}\n{}", metrics.render(), quality.render());
    if !extrapolated.is_empty() {
        out.push_str(&format!(
            "* extrapolated: outside the observed range {} to {}\n",
            OBSERVED_RANGE.0, OBSERVED_RANGE.1
        ));
    }
    emit(args.output.as_ref(), &out)
}

pub fn fit(args: &FitArgs) -> CmdResult {
    let d = read_dataset(&args.csv)?;
    let candidates: Vec<&str> = args.predictors.iter().map(|s| s.trim()).collect();
    let report = backward_stepwise(&d, &args.response, &candidates, args.alpha_remove)?;
    if args.json {
        let mut value = report.to_json();
        value
            .as_object_mut()
            .expect("object")
            .insert("alpha_remove".into(), json_number(args.alpha_remove));
        return emit(args.output.as_ref(), &to_json_text(&value));
    }
    emit(
        args.output.as_ref(),
        &render_fit(&report, args.alpha_remove),
    )
}

/// ANOVA, model summary and coefficient tables at three decimals, then the
/// elimination trace.
fn render_fit(r: &FitReport, alpha: f64) -> String {
    let a = &r.anova;
    let s = &r.summary;
    let predictors: Vec<&str> = std::iter::once(CONSTANT).chain(r.predictors()).collect();
    let footer = format!(
        "Predictors: {}\nDependent Variable: {}\n",
        predictors.join(", "),
        r.response
    );

    let mut anova = Table::new([
        "Model",
        "Sum of Squares",
        "DF",
        "Mean Square",
        "F",
        "Significance",
    ]);
    anova.row([
        "Regression".to_string(),
        fixed3(a.ss_regression),
        a.df_regression.to_string(),
        fixed3(a.ms_regression),
        fixed3(a.f_value),
        fixed3(a.f_p_value),
    ]);
    anova.row([
        "Residual".to_string(),
        fixed3(a.ss_residual),
        a.df_residual.to_string(),
        fixed3(a.ms_residual),
    ]);
    anova.row([
        "Total".to_string(),
        fixed3(a.ss_total),
        a.df_total().to_string(),
    ]);

    let mut summary = Table::new([
        "R",
        "R Square",
        "Adjusted R Square",
        "Std. Error of the Estimate",
    ]);
    summary.row([
        fixed3(s.r),
        fixed3(s.r_squared),
        fixed3(s.adjusted_r_squared),
        fixed3(s.std_error_of_estimate),
    ]);

    let mut coefs = Table::new(["Term", "Coefficients", "Std. Error", "t", "Significance"]);
    for c in &r.coefficients {
        coefs.row([
            c.name.clone(),
            fixed3(c.estimate),
            fixed3(c.std_error),
            fixed3(c.t_value),
            fixed3(c.p_value),
        ]);
    }

    let mut out = format!("ANOVA (n = {})\n{}{}\n", r.n, anova.render(), footer);
    out.push_str(&format!("Model Summary\n{}\n", summary.render()));
    out.push_str(&format!(
        "Coefficients\n{}Dependent Variable: {}\n\n",
        coefs.render(),
        r.response
    ));
    out.push_str(&format!(
        "Backward elimination (alpha-remove = {})\n",
        fixed3(alpha)
    ));
    if r.elimination_trace.is_empty() {
        out.push_str("No predictors removed\n");
    } else {
        let mut trace = Table::new(["Step", "Removed", "Significance"]);
        for (i, e) in r.elimination_trace.iter().enumerate() {
            trace.row([(i + 1).to_string(), e.predictor.clone(), fixed3(e.p_value)]);
        }
        out.push_str(&trace.render());
    }
    if r.saturated {
        out.push_str("Note: exact fit, residual variance is zero\n");
    }
    out
}

pub fn score(args: &ScoreArgs) -> CmdResult {
    let model = load_model(&args.model)?;
    let d = read_dataset(&args.csv)?;
    if let Some(missing) = model.predictors().find(|p| d.column_index(p).is_err()) {
        return Err(Error::MissingPredictor(missing.to_string()).into());
    }
    let predictions = predict(&model, &d)?;
    let scored = d.with_column(&format!("{}_Calculated", model.name()), predictions)?;
    emit(args.output.as_ref(), &write_csv(&scored))
}

pub fn validate(args: &ValidateArgs) -> CmdResult {
    let model = load_model(&args.model)?;
    let d = read_dataset(&args.csv)?;
    let v = validate_model(&model, &d, &args.response)?;
    let n = v.actuals.len();
    let p = correlation_p_value(v.r, n).ok();

    if args.json {
        let value = json!({
            "model": model.name(),
            "response": args.response,
            "n": n,
            "r": json_number(v.r),
            "p_value": p.map_or(Value::Null, json_number),
            "predictions": v.predictions.iter().map(|x| json_number(*x)).collect::<Vec<_>>(),
            "actuals": v.actuals.iter().map(|x| json_number(*x)).collect::<Vec<_>>(),
        });
        return emit(args.output.as_ref(), &to_json_text(&value));
    }

    let mut t = Table::new(["Row", "Calculated", "Actual"]);
    for (i, (pred, act)) in v.predictions.iter().zip(&v.actuals).enumerate() {
        t.row([(i + 1).to_string(), fixed3(*pred), fixed3(*act)]);
    }
    let note = match p {
        None => "Too few rows for a significance test".to_string(),
        Some(p) if p < 0.01 => format!(
            "Correlation is significant at the 0.01 level (two-tailed p = {})",
            fixed3(p)
        ),
        Some(p) if p < 0.05 => format!(
            "Correlation is significant at the 0.05 level (two-tailed p = {})",
            fixed3(p)
        ),
        Some(p) => format!(
            "Correlation is not significant at the 0.05 level (two-tailed p = {})",
            fixed3(p)
        ),
    };
    let out = format!(
        "{} vs {} (n = {n})\n{}Pearson r = {}\n{note}\n",
        model.name(),
        args.response,
        t.render(),
        fixed3(v.r)
    );
    emit(args.output.as_ref(), &out)
}

pub fn split(args: &SplitArgs) -> CmdResult {
    let d = read_dataset(&args.csv)?;
    let (train, test) = holdout_split(&d, args.train_frac, args.seed)?;
    let stem = args
        .csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    let dir = match &args.output {
        Some(dir) => dir.clone(),
        None => args
            .csv
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    let train_path = dir.join(format!("{stem}.train.csv"));
    let test_path = dir.join(format!("{stem}.test.csv"));
    for (path, part) in [(&train_path, &train), (&test_path, &test)] {
        fs::write(path, write_csv(part))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    println!(
        "{} ({} rows)\n{} ({} rows)\nseed {}, train fraction {}",
        train_path.display(),
        train.n_rows(),
        test_path.display(),
        test.n_rows(),
        args.seed,
        args.train_frac
    );
    Ok(())
}
