//! `fairaudit`: audit linear regression models for omitted-variable bias and
//! group fairness.
//!
//! Exit codes: `0` success, `1` runtime or domain error, `2` usage error.
//! Every failure prints one JSON object on standard error and leaves no
//! output file behind.

mod canonical;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairaudit_core::robust::sweep_csv;
use fairaudit_core::{
    generate, load_csv, tradeoff_sweep, Error, FeatureSelection, GroupAssignment, Roles, SanitizationPolicy,
    ScenarioSpec,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "fairaudit",
    version,
    about = "Omitted-variable-bias and fairness audits for linear regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit full, omitted and sanitized models and write a JSON audit report.
    Audit {
        csv: PathBuf,
        #[command(flatten)]
        roles: RoleArgs,
        #[arg(long, default_value = "population_mean", value_parser = parse_policy)]
        policy: SanitizationPolicy,
        #[arg(long)]
        out: PathBuf,
        /// Recorded in the report for provenance.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a synthetic dataset from a scenario spec and write it as CSV.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the spec.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Penalized fits over a lambda grid; `.csv` output writes CSV, anything
    /// else JSON.
    Sweep {
        csv: PathBuf,
        #[command(flatten)]
        roles: RoleArgs,
        /// Comma-separated, strictly ascending, non-negative.
        #[arg(long, allow_hyphen_values = true)]
        lambdas: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RoleArgs {
    #[arg(long)]
    target: String,
    #[arg(long)]
    sensitive: String,
    /// Comma-separated feature columns, or `all`.
    #[arg(long, default_value = "all")]
    features: String,
}

impl RoleArgs {
    fn roles(&self) -> Roles {
        let roles = Roles::new(&self.target, &self.sensitive);
        if self.features.trim() == "all" {
            roles
        } else {
            Roles {
                features: FeatureSelection::Named(self.features.split(',').map(|s| s.trim().to_string()).collect()),
                ..roles
            }
        }
    }
}

fn parse_policy(s: &str) -> Result<SanitizationPolicy, String> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Usage { kind: String, message: String },
    Runtime { kind: String, message: String },
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure::Usage {
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = e.kind().to_string();
        let message = e.to_string();
        match e {
            // naming a column that is absent or reused is a mistake in the
            // invocation, not in the data
            Error::MissingColumn(_) | Error::DuplicateRole(_) => Failure::Usage { kind, message },
            _ => Failure::Runtime { kind, message },
        }
    }
}

fn parse_lambdas(text: &str) -> Result<Vec<f64>, Failure> {
    let lambdas = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| Failure::usage("InvalidLambda", format!("`{s}` is not a non-negative number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if lambdas.is_empty() {
        return Err(Failure::usage("InvalidLambda", "at least one lambda is required"));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage("InvalidLambda", "lambdas must ascend"));
    }
    Ok(lambdas)
}

/// Writes through a sibling temporary file so that a failed run never leaves
/// a truncated output.
fn write_atomically(path: &Path, contents: &str) -> Result<(), Failure> {
    let io_failure = |e: std::io::Error| Failure::Runtime {
        kind: "Io".into(),
        message: format!("{}: {e}", path.display()),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| Failure::usage("InvalidPath", format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(io_failure)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_failure(e)
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Audit {
            csv,
            roles,
            policy,
            out,
            seed,
        } => {
            let d = load_csv(&csv, &roles.roles())?;
            let report = report::build(&d, policy, seed)?;
            let mut text = canonical::to_canonical_string(&report).expect("report serializes");
            text.push('\n');
            write_atomically(&out, &text)
        }
        Command::Simulate { spec, out, seed } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Failure::Runtime {
                kind: "Io".into(),
                message: format!("{}: {e}", spec.display()),
            })?;
            let mut spec = ScenarioSpec::from_json(&text)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let d = generate(&spec)?;
            write_atomically(&out, &d.to_csv_string())
        }
        Command::Sweep {
            csv,
            roles,
            lambdas,
            out,
        } => {
            let lambdas = parse_lambdas(&lambdas)?;
            let d = load_csv(&csv, &roles.roles())?;
            let groups = GroupAssignment::from_sensitive(d.sensitive())?;
            let points = tradeoff_sweep(&d, &groups, &lambdas)?;
            let text = if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                sweep_csv(&points)
            } else {
                let mut s = canonical::to_canonical_string(&points).expect("points serialize");
                s.push('\n');
                s
            };
            write_atomically(&out, &text)
        }
    }
}

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message = rendered
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            return fail(2, "UsageError", message);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage { kind, message }) => fail(2, &kind, &message),
        Err(Failure::Runtime { kind, message }) => fail(1, &kind, &message),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambdas("0, 1,1e6").unwrap(), [0.0, 1.0, 1e6]);
        assert!(matches!(parse_lambdas(""), Err(Failure::Usage { .. })));
        assert!(matches!(parse_lambdas("1,-2"), Err(Failure::Usage { .. })));
        match parse_lambdas("1,0.5") {
            Err(Failure::Usage { message, .. }) => assert_eq!(message, "lambdas must ascend"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_classes() {
        assert!(matches!(
            Failure::from(Error::MissingColumn("g".into())),
            Failure::Usage { .. }
        ));
        assert!(matches!(
            Failure::from(Error::InvalidSpec("x".into())),
            Failure::Runtime { .. }
        ));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
