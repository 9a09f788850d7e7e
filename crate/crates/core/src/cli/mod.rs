//! JSON front end: spec documents in, report documents out.
//!
//! [`execute`] runs one command on the text of a spec document and returns
//! the report together with the process exit status: 0 on success, 2 for
//! bad input, 3 when a mathematical invariant failed to hold.

mod commands;
mod render;
mod spec;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;

pub use render::render_table;
pub use spec::{parse_spec, parse_spec_unchecked, ParsedSpec, KINDS};

/// Version of the report layout, bumped on incompatible changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Environment variable consulted for the default seed.
pub const SEED_ENV: &str = "SQHOM_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sqhom", version, about = "Homology of truncated simplicial sets, exact and simulated")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; `table` is a plain rendering of the same report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the simplicial relations exhaustively.
    Validate {
        /// Spec document, or `-` for standard input.
        spec: PathBuf,
    },
    /// Simplex counts, non-degenerate counts and register widths.
    Census { spec: PathBuf },
    /// Betti numbers by one or more methods; methods must agree below the cutoff.
    Betti {
        spec: PathBuf,
        /// Repeatable; defaults to exact, hodge and normalized.
        #[arg(long = "method", value_enum)]
        methods: Vec<BettiMethodArg>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[command(flatten)]
        qsim: QsimFlags,
    },
    /// Every defect matrix up to the scan depth.
    Defects {
        spec: PathBuf,
        /// Highest degree scanned; defaults to cutoff − 2.
        #[arg(long)]
        scan_depth: Option<usize>,
    },
    /// Perfect, quasi-perfect or semi-perfect classification from the defects.
    Perfectness {
        spec: PathBuf,
        #[arg(long)]
        scan_depth: Option<usize>,
    },
    /// Bit-string encoding of every simplex, with the bit-level maps verified.
    Encode {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = SchemeArg::Enumerative)]
        scheme: SchemeArg,
        /// Bits per slot for the register schemes; smallest sufficient by default.
        #[arg(long)]
        slot_bits: Option<u32>,
        /// Bits of the degree field in the nerve scheme.
        #[arg(long)]
        degree_bits: Option<u32>,
    },
    /// Build and validate a simple circuit, by default the multiplication of a simplicial group.
    Circuit {
        spec: PathBuf,
        /// JSON file `{"target": <spec>, "maps": [[...], ...]}` describing a
        /// morphism into a simplicial group.
        #[arg(long)]
        from_morphism: Option<PathBuf>,
    },
    /// Desk-scale simulation of the quantum pipeline.
    Qsim {
        #[arg(value_enum)]
        algorithm: QsimAlgorithm,
        spec: PathBuf,
        /// Single degree to run; all degrees by default.
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        flags: QsimFlags,
        /// Cap on Grover iterations.
        #[arg(long)]
        max_iters: Option<usize>,
    },
}

#[derive(Clone, Debug, Default, clap::Args)]
pub struct QsimFlags {
    /// Clock register size; 6 for counting and 8 for phase estimation by default.
    #[arg(long)]
    pub clock_bits: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    /// Defaults to $SQHOM_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BettiMethodArg {
    Exact,
    Hodge,
    Normalized,
    Qsim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    Enumerative,
    Nerve,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QsimAlgorithm {
    Grover,
    Count,
    Qpe,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandRecord {
    pub name: &'static str,
    pub args: BTreeMap<&'static str, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputSummary {
    pub cutoff: usize,
    pub counts: Vec<usize>,
    pub nondegenerate: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// The single output of every command. Byte-identical across runs for the
/// same input, flags and seed, unless timing was requested.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub report_schema: u32,
    /// `sha256:` followed by the hex digest of the spec bytes.
    pub input_digest: Option<String>,
    pub command: CommandRecord,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// A finished command: the report and the exit status it implies.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: ReportDocument,
    pub exit_code: i32,
}

/// What a command handler produced: results, and optionally a failure
/// that still comes with results worth reporting.
pub(crate) struct CommandOutput {
    pub results: Value,
    pub failure: Option<Error>,
}

impl CommandOutput {
    pub fn ok(results: impl Serialize) -> Self {
        CommandOutput {
            results: serde_json::to_value(results).expect("results serialize"),
            failure: None,
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::DegreeOutOfRange { .. } => "degree_out_of_range",
        Error::NoTarget(_) => "no_target",
        Error::Unsupported(_) => "unsupported",
        Error::AmbiguousSpectrum { .. } => "ambiguous_spectrum",
        Error::Config(_) => "config",
        Error::InvariantViolation(_) => "invariant_violation",
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Seed from the flag, then from `env_seed` (the value of [`SEED_ENV`]), then 0.
pub fn resolve_seed(flag: Option<u64>, env_seed: Option<&str>) -> Result<u64, Error> {
    match (flag, env_seed) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        (None, None) => Ok(0),
    }
}

/// Runs `command` on the spec text. `env_seed` is the value of [`SEED_ENV`]
/// if set; the caller reads the environment so this stays pure.
pub fn execute(cli: &Cli, spec_text: &str, env_seed: Option<&str>) -> Outcome {
    let start = cli.timing.then(Instant::now);
    let (name, args) = commands::describe(&cli.command);
    let mut report = ReportDocument {
        tool: "sqhom",
        version: env!("CARGO_PKG_VERSION"),
        report_schema: REPORT_SCHEMA_VERSION,
        input_digest: Some(digest(spec_text.as_bytes())),
        command: CommandRecord { name, args },
        status: "ok",
        input: None,
        error: None,
        results: Value::Null,
        timing: None,
    };
    let result = commands::run(&cli.command, spec_text, env_seed, &mut report);
    let failure = match result {
        Ok(CommandOutput { results, failure }) => {
            report.results = results;
            failure
        }
        Err(e) => Some(e),
    };
    let exit_code = match failure {
        None => EXIT_OK,
        Some(e) => {
            let code = e.exit_code();
            report.status = if code == EXIT_INVARIANT { "invariant_violation" } else { "input_error" };
            report.error = Some(ErrorRecord {
                kind: error_kind(&e),
                message: e.to_string(),
            });
            code
        }
    };
    if let Some(t) = start {
        report.timing = Some(Timing {
            elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
        });
    }
    Outcome { report, exit_code }
}

/// Report for a spec that could not be read at all.
pub fn unreadable(cli: &Cli, message: String) -> Outcome {
    let (name, args) = commands::describe(&cli.command);
    Outcome {
        report: ReportDocument {
            tool: "sqhom",
            version: env!("CARGO_PKG_VERSION"),
            report_schema: REPORT_SCHEMA_VERSION,
            input_digest: None,
            command: CommandRecord { name, args },
            status: "input_error",
            input: None,
            error: Some(ErrorRecord {
                kind: "invalid_input",
                message,
            }),
            results: Value::Null,
            timing: None,
        },
        exit_code: EXIT_INPUT,
    }
}

impl Cli {
    /// Parses an argument list whose first entry is the program name; the
    /// error is clap's rendered message.
    pub fn try_parse_from_args<S: AsRef<str>>(args: &[S]) -> Result<Cli, String> {
        Cli::try_parse_from(args.iter().map(AsRef::as_ref)).map_err(|e| e.to_string())
    }
}

impl Command {
    pub fn spec_path(&self) -> &PathBuf {
        match self {
            Command::Validate { spec }
            | Command::Census { spec }
            | Command::Betti { spec, .. }
            | Command::Defects { spec, .. }
            | Command::Perfectness { spec, .. }
            | Command::Encode { spec, .. }
            | Command::Circuit { spec, .. }
            | Command::Qsim { spec, .. } => spec,
        }
    }
}

/// Formats an outcome for printing.
pub fn format_outcome(cli: &Cli, outcome: &Outcome) -> String {
    match cli.format {
        Format::Json => outcome.report.to_json(),
        Format::Table => render_table(&outcome.report),
    }
}

#[cfg(test)]
mod tests;
