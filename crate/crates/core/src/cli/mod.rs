//! Command-line front end.
//!
//! Every command prints a one-line JSON report to stdout and writes the same
//! report, pretty-printed, plus its artifacts into `--out`. Exit codes:
//! 0 success, 1 invalid input, 2 numerical failure, 3 escape (a result, not a
//! failure), 4 inconclusive verdict.
//!
//! `--config FILE` reads `key = value` lines (`#` starts a comment). Keys are
//! flag names without the dashes; flags given on the command line win.

mod commands;
mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::{Error, C64};

pub use svg::render_portrait;

pub const SCHEMA: &str = "holoflow.report.v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_ESCAPE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "holoflow", version, about = "Holomorphic semiflows and composition semigroups", args_override_self = true)]
pub struct Cli {
    /// `key = value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one trajectory and write it as CSV.
    Flow(FlowArgs),
    /// Draw trajectories from the domain's sample grid as SVG.
    Portrait(PortraitArgs),
    /// Berkson–Porta classification of a symbol on the unit disc.
    Classify(ClassifyArgs),
    /// Apply the composition semigroup to a series and export the operator matrix.
    Evolve(EvolveArgs),
    /// Decide the evaluation condition (E) for a coefficient space.
    CheckE(CheckEArgs),
    /// Check the generator identity A f = G f' by difference quotients.
    GeneratorCheck(GeneratorArgs),
    /// Run the radius-2 counterexample flow.
    Counterexample(CounterexampleArgs),
    /// Check flow conjugation under a conformal map.
    TransferCheck(TransferArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for the report and artifacts.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    #[arg(long, default_value = "unitdisc")]
    pub domain: String,
    /// Start point as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    #[arg(long, default_value = "unitdisc")]
    pub domain: String,
    #[arg(long, default_value_t = 2)]
    pub density: usize,
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    #[arg(long, default_value_t = 2)]
    pub density: usize,
    /// Distance within which a zero counts as lying on the closed disc.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_b: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    /// Function to evolve, in the expression grammar.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Truncation degree.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value = "h2")]
    pub space: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CheckEArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct GeneratorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value = "h2")]
    pub space: String,
    /// Largest difference step; the check also runs at h/2 and h/4.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, default_value = "1.5,0", allow_hyphen_values = true)]
    pub b: String,
    /// Herglotz factor on the radius-2 disc.
    #[arg(long = "F", default_value = "1", allow_hyphen_values = true)]
    pub big_f: String,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long, default_value_t = 20.0)]
    pub t_long: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dw_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TransferArgs {
    /// Symbol on the target domain.
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: String,
    /// `cayley` or `mobius:a,b,c,d` (complex coefficients as `re:im`).
    #[arg(long, default_value = "cayley")]
    pub map: String,
    /// Target domain of the map; the source is the unit disc.
    #[arg(long, default_value = "halfplane:upper")]
    pub domain: String,
    /// Start point in the unit disc as `re,im`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `re,im` or a bare real.
pub fn parse_complex(s: &str) -> crate::Result<C64> {
    let bad = || Error::parse(0, format!("expected re,im but got '{s}'"));
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)),
        None => Ok(C64::new(s.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::BadParameter(_) | Error::Domain { .. } => EXIT_INPUT,
        Error::Escape { .. } => EXIT_ESCAPE,
        _ => EXIT_NUMERIC,
    }
}

/// Outcome of a command before it is written out.
pub(crate) struct Outcome {
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub artifacts: Vec<String>,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    command: &'a str,
    exit_code: i32,
    inputs: &'a Value,
    result: &'a Value,
    artifacts: &'a [String],
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema: &'static str,
    command: &'a str,
    exit_code: i32,
    error: String,
}

/// Splices `--key=value` pairs from the config file in right after the
/// subcommand name so that later command-line flags override them.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--config" {
            path = args.get(i + 1).cloned();
            break;
        }
        if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            break;
        }
        i += 1;
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut injected = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key = value", lineno + 1))?;
        let key = key.trim();
        if key.is_empty() || key == "config" || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(format!("{path}:{}: bad key '{key}'", lineno + 1));
        }
        let value = value.trim().trim_matches('"');
        injected.push(format!("--{}={value}", key.replace('_', "-")));
    }
    let names = ["flow", "portrait", "classify", "evolve", "check-e", "generator-check", "counterexample", "transfer-check"];
    let Some(pos) = args.iter().skip(1).position(|a| names.contains(&a.as_str())) else { return Ok(args) };
    let pos = pos + 2;
    let mut out = args[..pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos..]);
    Ok(out)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_INPUT,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let (name, out_dir, result) = commands::dispatch(&cli.command, stderr);
    match result {
        Ok(outcome) => emit(&outcome, &out_dir, stdout, stderr),
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(stderr, "error: {e}");
            let rep = ErrorReport { schema: SCHEMA, command: name, exit_code: code, error: e.to_string() };
            let _ = writeln!(stdout, "{}", serde_json::to_string(&rep).expect("report serializes"));
            code
        }
    }
}

fn emit(o: &Outcome, out_dir: &std::path::Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let rep = Report {
        schema: SCHEMA,
        command: o.command,
        exit_code: o.exit_code,
        inputs: &o.inputs,
        result: &o.result,
        artifacts: &o.artifacts,
    };
    let path = out_dir.join(format!("{}.json", o.command));
    let pretty = serde_json::to_string_pretty(&rep).expect("report serializes") + "\n";
    if let Err(e) = std::fs::write(&path, pretty) {
        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
        return EXIT_NUMERIC;
    }
    let _ = writeln!(stdout, "{}", serde_json::to_string(&rep).expect("report serializes"));
    o.exit_code
}
