//! Batch front end: TOML problem documents in, TOML reports out.
//!
//! A problem document looks like
//!
//! ```toml
//! version = 1
//! command = "weightfilt"
//!
//! [options]          # every key optional
//! oracle = "both"
//! degree_bound = 12
//!
//! [payload]
//! nilpotents = [[[[0, 1], [0, 1]], [[0, 1], [0, 1]]],
//!               [[[1, 1], [0, 1]], [[0, 1], [0, 1]]]]
//! ```
//!
//! Rationals are `[numerator, denominator]` pairs and matrices are lists
//! of rows. The report carries the normalized document under `input`
//! (defaults filled in, options spelled out) and the outcome under
//! `result`. Feeding `input` back through [`run_document`] reproduces the
//! report byte for byte. Unknown keys anywhere are rejected.

mod commands;

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::Rat;

pub use commands::RATIO_BOUND;

/// Schema version accepted and emitted.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Weightfilt,
    Prolong,
    SsheafGens,
    L2Test,
    CksScan,
    NakanoCheck,
    Resolve,
    MultIdeal,
    JumpScan,
    TameCheck,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Weightfilt,
        Command::Prolong,
        Command::SsheafGens,
        Command::L2Test,
        Command::CksScan,
        Command::NakanoCheck,
        Command::Resolve,
        Command::MultIdeal,
        Command::JumpScan,
        Command::TameCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Weightfilt => "weightfilt",
            Command::Prolong => "prolong",
            Command::SsheafGens => "ssheaf-gens",
            Command::L2Test => "l2-test",
            Command::CksScan => "cks-scan",
            Command::NakanoCheck => "nakano-check",
            Command::Resolve => "resolve",
            Command::MultIdeal => "mult-ideal",
            Command::JumpScan => "jump-scan",
            Command::TameCheck => "tame-check",
        }
    }

    /// Whether the report depends only on exact arithmetic.
    pub fn is_symbolic(self) -> bool {
        matches!(
            self,
            Command::Weightfilt
                | Command::Prolong
                | Command::SsheafGens
                | Command::Resolve
                | Command::MultIdeal
                | Command::JumpScan
        )
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// Which verdicts an oracle-backed command computes. `Both` fails the
/// command when the two disagree outside the documented boundary cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    Symbolic,
    Numeric,
    Both,
}

impl OracleMode {
    pub fn symbolic(self) -> bool {
        self != OracleMode::Numeric
    }

    pub fn numeric(self) -> bool {
        self != OracleMode::Symbolic
    }
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symbolic" => Ok(OracleMode::Symbolic),
            "numeric" => Ok(OracleMode::Numeric),
            "both" => Ok(OracleMode::Both),
            _ => Err(format!("unknown oracle mode {s:?} (symbolic, numeric, both)")),
        }
    }
}

fn default_oracle() -> OracleMode {
    OracleMode::Both
}

fn default_degree() -> u32 {
    crate::resolution::DEFAULT_DEGREE
}

fn default_samples() -> usize {
    1000
}

fn default_tolerance() -> Rat {
    Rat::new(1, 1_000_000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_oracle")]
    pub oracle: OracleMode,
    #[serde(default = "default_degree")]
    pub degree_bound: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: Rat,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            oracle: default_oracle(),
            degree_bound: default_degree(),
            samples: default_samples(),
            seed: 0,
            tolerance: default_tolerance(),
        }
    }
}

/// Command-line values that take precedence over the document's options.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub oracle: Option<OracleMode>,
    pub degree_bound: Option<u32>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<Rat>,
}

impl Overrides {
    fn apply(&self, o: &mut Options) {
        if let Some(v) = self.oracle {
            o.oracle = v;
        }
        if let Some(v) = self.degree_bound {
            o.degree_bound = v;
        }
        if let Some(v) = self.samples {
            o.samples = v;
        }
        if let Some(v) = self.seed {
            o.seed = v;
        }
        if let Some(v) = &self.tolerance {
            o.tolerance = v.clone();
        }
    }
}

/// Structured failure record: which module rejected which field, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub module: String,
    pub kind: String,
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn new(module: &str, kind: &str, field: &str, message: impl Into<String>) -> Self {
        CliError {
            module: module.to_string(),
            kind: kind.to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn schema(field: &str, message: impl Into<String>) -> Self {
        Self::new("cli", "SchemaViolation", field, message)
    }

    /// Wraps a module error, naming it by its innermost variant.
    pub(crate) fn from_module<E: fmt::Debug + fmt::Display>(module: &str, field: &str, e: E) -> Self {
        Self::new(module, &innermost_variant(&format!("{e:?}")), field, e.to_string())
    }

    /// Exit status for the binary: 2 for malformed input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.kind == "SchemaViolation" {
            2
        } else {
            1
        }
    }

    /// The record as a TOML document under an `[error]` table.
    pub fn to_document(&self) -> String {
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: &'a CliError,
        }
        toml::to_string(&Wrapper { error: self }).expect("strings always serialize")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}::{} at {}: {}", self.module, self.kind, self.field, self.message)
    }
}

impl std::error::Error for CliError {}

/// `Prolongation(NonCommuting(0, 1))` becomes `NonCommuting`.
fn innermost_variant(debug: &str) -> String {
    let mut rest = debug;
    let mut name = "Error";
    loop {
        let end = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let ident = &rest[..end];
        if !ident.starts_with(|c: char| c.is_ascii_uppercase()) {
            break;
        }
        name = ident;
        match rest[end..].strip_prefix('(') {
            Some(inner) => rest = inner,
            None => break,
        }
    }
    name.to_string()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    command: Option<Command>,
    options: Option<Options>,
    payload: toml::Value,
}

pub(crate) fn parse_payload<P: DeserializeOwned>(payload: toml::Value) -> Result<P, CliError> {
    serde_path_to_error::deserialize(payload).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "payload".to_string() } else { format!("payload.{path}") };
        CliError::schema(&field, first_line(&e.into_inner().message().to_string()))
    })
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().trim().to_string()
}

pub(crate) fn to_value<T: Serialize>(x: &T, field: &str) -> Result<toml::Value, CliError> {
    toml::Value::try_from(x).map_err(|e| CliError::new("cli", "Unserializable", field, e.to_string()))
}

/// Parses a problem document and runs it.
///
/// `expected` is the subcommand the caller was invoked as, if any; the
/// document's own `command` key must agree with it when both are present.
pub fn run_document(text: &str, expected: Option<Command>, overrides: &Overrides) -> Result<String, CliError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::schema("document", e.message().to_string()))?;
    let raw: RawDocument = serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
        let path = e.path().to_string();
        CliError::schema(if path == "." { "document" } else { &path }, first_line(e.into_inner().message()))
    })?;
    if raw.version != SCHEMA_VERSION {
        return Err(CliError::schema(
            "version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", raw.version),
        ));
    }
    let command = match (raw.command, expected) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::schema(
                "command",
                format!("document is a {a} problem but was run as {b}"),
            ))
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(CliError::schema("command", "no command given")),
    };
    let mut options = raw.options.unwrap_or_default();
    overrides.apply(&mut options);
    let (payload, result) = commands::dispatch(command, raw.payload, &options)?;

    let mut input = toml::Table::new();
    input.insert("version".into(), toml::Value::Integer(SCHEMA_VERSION as i64));
    input.insert("command".into(), toml::Value::String(command.name().into()));
    input.insert("options".into(), to_value(&options, "options")?);
    input.insert("payload".into(), payload);
    let mut report = toml::Table::new();
    report.insert("version".into(), toml::Value::Integer(SCHEMA_VERSION as i64));
    report.insert("command".into(), toml::Value::String(command.name().into()));
    report.insert("input".into(), toml::Value::Table(input));
    report.insert("result".into(), result);
    toml::to_string(&report).map_err(|e| CliError::new("cli", "Unserializable", "report", e.to_string()))
}

/// The normalized problem document embedded in a report.
pub fn embedded_input(report: &str) -> Result<String, CliError> {
    let table: toml::Table = toml::from_str(report).map_err(|e| CliError::schema("report", e.message().to_string()))?;
    let input = table
        .get("input")
        .ok_or_else(|| CliError::schema("input", "report has no embedded input"))?;
    toml::to_string(input).map_err(|e| CliError::new("cli", "Unserializable", "input", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_names() {
        assert_eq!(innermost_variant("Prolongation(NonCommuting(0, 1))"), "NonCommuting");
        assert_eq!(innermost_variant("StepTooLarge { disagreement: 1.0 }"), "StepTooLarge");
        assert_eq!(innermost_variant("Weight(NotNilpotent { dim: 2 })"), "NotNilpotent");
        assert_eq!(innermost_variant("UnsupportedGerm(\"x\")"), "UnsupportedGerm");
    }

    #[test]
    fn header_errors() {
        let e = run_document("version = 2\ncommand = \"weightfilt\"\n[payload]\nnilpotents = []\n", None, &Overrides::default())
            .unwrap_err();
        assert_eq!(e.field, "version");
        let e = run_document("version = 1\nbogus = 3\n[payload]\n", Some(Command::Resolve), &Overrides::default())
            .unwrap_err();
        assert_eq!(e.kind, "SchemaViolation");
        let e = run_document("version = 1\ncommand = \"resolve\"\n[payload]\n", Some(Command::Prolong), &Overrides::default())
            .unwrap_err();
        assert_eq!(e.field, "command");
    }
}
