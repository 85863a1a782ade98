mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Design-phase maintainability estimation for UML class diagrams.
#[derive(Debug, Parser)]
#[command(name = "memood", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute metrics and quality scores of a .cdl class diagram.
    Analyze(AnalyzeArgs),
    /// Fit a linear model by backward stepwise regression.
    Fit(FitArgs),
    /// Append model predictions to a CSV as `<model>_Calculated`.
    Score(ScoreArgs),
    /// Correlate model predictions with an observed column.
    Validate(ValidateArgs),
    /// Split a CSV into seeded training and test files.
    Split(SplitArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// Treat implicit classes and duplicate relationships as errors.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    csv: PathBuf,
    #[arg(long, value_name = "COL")]
    response: String,
    #[arg(
        long,
        value_name = "COL,COL,...",
        value_delimiter = ',',
        required = true
    )]
    predictors: Vec<String>,
    /// Remove the least significant predictor while its p-value exceeds this.
    #[arg(long, value_name = "F", default_value_t = 0.10, value_parser = alpha_in_range)]
    alpha_remove: f64,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    csv: PathBuf,
    /// Model JSON file, or one of: understandability, modifiability, memood.
    #[arg(long, value_name = "PATH|NAME")]
    model: String,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    csv: PathBuf,
    /// Model JSON file, or one of: understandability, modifiability, memood.
    #[arg(long, value_name = "PATH|NAME")]
    model: String,
    #[arg(long, value_name = "COL")]
    response: String,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SplitArgs {
    csv: PathBuf,
    #[arg(long, value_name = "F", default_value_t = 0.75, value_parser = fraction_in_range)]
    train_frac: f64,
    #[arg(long, value_name = "N", default_value_t = 42)]
    seed: u64,
    /// Directory for the two output files (defaults to the input's).
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
}

fn alpha_in_range(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1]"))
    }
}

fn fraction_in_range(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let style = commands::Style::detect();
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a, &style),
        Command::Fit(a) => commands::fit(a),
        Command::Score(a) => commands::score(a),
        Command::Validate(a) => commands::validate(a),
        Command::Split(a) => commands::split(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            failure.report(&style);
            ExitCode::from(failure.exit_code())
        }
    }
}
