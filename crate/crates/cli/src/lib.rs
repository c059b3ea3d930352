//! Command-line front end: configuration parsing, validation and report
//! output for every toolkit operation.
//!
//! A run is `fracpoly <subcommand> --key value ...`. Subcommand parameters
//! may also come from a TOML file (`--config`), which explicit flags
//! override; `FRACPOLY_THREADS` sets the default thread count. Reports are
//! JSON objects tagged `"schema": "fracpoly/1"`, or CSV with `--format csv`.
//! Exit codes: 0 success, 2 invalid input, 3 numerical budget or precision
//! failure.

pub mod commands;
pub mod config;
pub mod output;
pub mod sets;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Map, Value};

pub use config::{validate, Format, RunConfig, Subcommand, Violation};

pub const SCHEMA: &str = "fracpoly/1";
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fracpoly",
    about = "Fractional parts of polynomials at primes: counts, sums, sieve integrals, searches",
    after_help = "Subcommands: convergents schedule inequalities count-nk count-mk enum-a lemma6 \
lemma10 expsum weyl lemma7 type1 type2 omega integral critical sift identity decompose search density\n\
Parameters follow the subcommand as --key value."
)]
struct Cli {
    /// TOML file of key = value parameters; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    subcommand: String,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    params: Vec<String>,
}

/// Turn `--key value` / `--key=value` tokens into a map. A flag followed
/// by another flag (or nothing) means `true`.
pub fn parse_pairs(tokens: &[String]) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        let key = t
            .strip_prefix("--")
            .ok_or_else(|| format!("expected --key, found {t:?}"))?;
        if let Some((k, v)) = key.split_once('=') {
            out.insert(k.to_string(), v.to_string());
            i += 1;
            continue;
        }
        match tokens.get(i + 1) {
            Some(v) if !v.starts_with("--") => {
                out.insert(key.to_string(), v.clone());
                i += 2;
            }
            _ => {
                out.insert(key.to_string(), "true".into());
                i += 1;
            }
        }
    }
    Ok(out)
}

fn toml_pairs(text: &str) -> Result<BTreeMap<String, String>, String> {
    let table: toml::Table = text.parse().map_err(|e| format!("config file: {e}"))?;
    let mut out = BTreeMap::new();
    for (k, v) in table {
        let s = match v {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Boolean(b) => b.to_string(),
            other => return Err(format!("config key {k}: unsupported value {other}")),
        };
        out.insert(k, s);
    }
    Ok(out)
}

fn default_threads() -> usize {
    std::env::var("FRACPOLY_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Why no configuration could be built.
#[derive(Debug, Clone, PartialEq)]
pub enum ArgsError {
    /// `--help` or `--version`: print and exit successfully.
    Info(String),
    Invalid(String),
}

impl From<String> for ArgsError {
    fn from(s: String) -> Self {
        ArgsError::Invalid(s)
    }
}

/// Build a configuration from command-line arguments (including the
/// program name).
pub fn config_from_args<I, T>(args: I) -> Result<RunConfig, ArgsError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ArgsError::Info(e.to_string()),
        _ => ArgsError::Invalid(e.to_string()),
    })?;
    let subcommand: Subcommand = cli.subcommand.parse().map_err(ArgsError::Invalid)?;
    let mut params = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            toml_pairs(&text)?
        }
        None => BTreeMap::new(),
    };
    params.extend(parse_pairs(&cli.params)?);
    let mut take = |k: &str| params.remove(k);
    let format = match cli.format.or_else(|| take("format")) {
        Some(f) => f.parse()?,
        None => Format::Json,
    };
    let threads = match cli.threads {
        Some(t) => t,
        None => match take("threads") {
            Some(t) => t.parse().map_err(|_| format!("bad thread count {t:?}"))?,
            None => default_threads(),
        },
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match take("seed") {
            Some(s) => s.parse().map_err(|_| format!("bad seed {s:?}"))?,
            None => 0,
        },
    };
    params.remove("config");
    Ok(RunConfig {
        subcommand,
        params,
        format,
        threads,
        seed,
    })
}

/// Exit code and rendered report of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Map<String, Value>,
}

fn error_code(e: &fracpoly::Error) -> &'static str {
    use fracpoly::Error::*;
    match e {
        Domain(_) => "domain",
        Parse { .. } => "parse",
        Size { .. } => "size",
        ScheduleInconsistent(_) => "schedule_inconsistent",
        CapExceeded { .. } => "cap_exceeded",
        PrecisionExhausted { .. } => "precision_exhausted",
        Precision { .. } => "precision",
        Budget { .. } => "budget",
        OperationCap { .. } => "operation_cap",
        Bracket { .. } => "bracket",
    }
}

fn render(doc: &Map<String, Value>, format: Format, table: Option<commands::Table>) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serialisable") + "\n",
        Format::Csv => output::to_csv(doc, table),
    }
}

/// Validate and execute `config`.
pub fn run(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let (resolved, _) = config::resolve(config.subcommand, &config.params);
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(config.subcommand.name()));
    doc.insert(
        "config".into(),
        json!({
            "subcommand": config.subcommand,
            "params": resolved,
            "format": config.format,
            "threads": config.threads,
            "seed": config.seed,
        }),
    );
    let violations = validate(config);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        doc.insert(
            "error".into(),
            json!({"code": "validation", "message": msg.join("; "), "violations": violations}),
        );
        return Outcome {
            exit_code: EXIT_INVALID,
            stdout: render(&doc, Format::Json, None),
            stderr: format!("invalid configuration: {}\n", msg.join("; ")),
            report: doc,
        };
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
        Ok(p) => p,
        Err(e) => {
            doc.insert("error".into(), json!({"code": "threads", "message": e.to_string()}));
            return Outcome {
                exit_code: EXIT_INVALID,
                stdout: render(&doc, Format::Json, None),
                stderr: format!("{e}\n"),
                report: doc,
            };
        }
    };
    let args = config::Args(&resolved);
    let result = pool.install(|| commands::run_command(config.subcommand, &args, config.seed));
    let elapsed = start.elapsed().as_millis() as u64;
    match result {
        Ok(out) => {
            for (k, v) in out.fields {
                doc.insert(k, v);
            }
            doc.insert("runtime_ms".into(), json!(elapsed));
            Outcome {
                exit_code: EXIT_OK,
                stdout: render(&doc, config.format, out.table),
                stderr: String::new(),
                report: doc,
            }
        }
        Err(e) => {
            let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID };
            doc.insert("error".into(), json!({"code": error_code(&e), "message": e.to_string()}));
            doc.insert("runtime_ms".into(), json!(elapsed));
            Outcome {
                exit_code: code,
                stdout: render(&doc, Format::Json, None),
                stderr: format!("{e}\n"),
                report: doc,
            }
        }
    }
}
