//! Golden problem documents with tagged expectations.
//!
//! Each file under `corpus/` holds one [`GoldenCase`]:
//!
//! ```toml
//! name = "cusp-five-sixths"
//! description = "..."
//!
//! [provenance]
//! source = "oracle"            # literature | by-inspection | oracle
//! reference = "..."            # where the value comes from
//! oracle = "howald-binomial"   # required for oracle cases
//!
//! [problem]                    # an ordinary problem document
//! version = 1
//! command = "mult-ideal"
//! [problem.payload]
//! ...
//!
//! [expected]                   # static values, compared against `result`
//! ```
//!
//! Oracle cases store no values of their own. Their expectation is rebuilt
//! from the problem by an independent routine every time the corpus is
//! checked, so a stale file cannot mask a change in the implementation.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Rat;
use crate::cli::{run_document, CliError, Overrides};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("case {case}: {message}")]
    Malformed { case: String, message: String },
    #[error("case {case}: unknown oracle {oracle:?}")]
    UnknownOracle { case: String, oracle: String },
    #[error("case {case}: {source}")]
    Run { case: String, source: CliError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// A standard published value.
    Literature,
    /// Small enough to check by hand.
    ByInspection,
    /// Recomputed by a named independent routine.
    Oracle,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub source: Source,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenCase {
    pub name: String,
    pub description: String,
    pub provenance: Provenance,
    pub problem: toml::Table,
    #[serde(default)]
    pub expected: toml::Table,
}

impl GoldenCase {
    /// Provenance rules: oracle cases name a known oracle and carry no
    /// static values; every other case carries at least one value.
    pub fn check_tags(&self) -> Result<(), CorpusError> {
        let malformed = |message: &str| CorpusError::Malformed {
            case: self.name.clone(),
            message: message.to_string(),
        };
        if self.provenance.reference.trim().is_empty() {
            return Err(malformed("provenance.reference is empty"));
        }
        match (self.provenance.source, &self.provenance.oracle) {
            (Source::Oracle, None) => Err(malformed("oracle case without provenance.oracle")),
            (Source::Oracle, Some(o)) => {
                if !ORACLES.contains(&o.as_str()) {
                    return Err(CorpusError::UnknownOracle {
                        case: self.name.clone(),
                        oracle: o.clone(),
                    });
                }
                if !self.expected.is_empty() {
                    return Err(malformed("oracle cases must not store static expectations"));
                }
                Ok(())
            }
            (_, Some(_)) => Err(malformed("provenance.oracle is only allowed for oracle cases")),
            (_, None) if self.expected.is_empty() => Err(malformed("no expected values")),
            _ => Ok(()),
        }
    }
}

/// Location of the bundled corpus.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load_case(path: &Path) -> Result<GoldenCase, CorpusError> {
    let read_err = |message: String| CorpusError::Read {
        path: path.to_path_buf(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| read_err(e.to_string()))?;
    let case: GoldenCase = toml::from_str(&text).map_err(|e| read_err(e.to_string()))?;
    case.check_tags()?;
    Ok(case)
}

/// Every `*.toml` case in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<GoldenCase>, CorpusError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CorpusError::Read {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_case(p)).collect()
}

/// A fresh report and the values it is expected to contain.
#[derive(Debug, Clone)]
pub struct Regenerated {
    pub report: String,
    pub result: toml::Value,
    pub expected: toml::Table,
}

/// Runs the problem and, for oracle cases, replays the oracle.
pub fn regenerate(case: &GoldenCase) -> Result<Regenerated, CorpusError> {
    let text = toml::to_string(&case.problem).map_err(|e| CorpusError::Malformed {
        case: case.name.clone(),
        message: e.to_string(),
    })?;
    let report = run_document(&text, None, &Overrides::default()).map_err(|source| CorpusError::Run {
        case: case.name.clone(),
        source,
    })?;
    let parsed: toml::Table = toml::from_str(&report).expect("reports are valid TOML");
    let result = parsed["result"].clone();
    let expected = match &case.provenance.oracle {
        Some(name) => run_oracle(case, name)?,
        None => case.expected.clone(),
    };
    Ok(Regenerated {
        report,
        result,
        expected,
    })
}

/// One mismatch between an expected and a produced value.
#[derive(Debug, Clone, PartialEq)]
pub struct Drift {
    pub path: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Drift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, found {}", self.path, self.expected, self.found)
    }
}

/// Relative tolerance for floating point leaves.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Structural comparison: every key of `expected` must be present in
/// `found` with an equal value; extra keys in `found` are ignored.
pub fn diff(expected: &toml::Value, found: Option<&toml::Value>, path: &str, out: &mut Vec<Drift>) {
    use toml::Value as V;
    let Some(found) = found else {
        out.push(Drift {
            path: path.to_string(),
            expected: expected.to_string(),
            found: "(missing)".to_string(),
        });
        return;
    };
    let mut mismatch = || {
        out.push(Drift {
            path: path.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        })
    };
    match (expected, found) {
        (V::Table(e), V::Table(f)) => {
            for (k, v) in e {
                diff(v, f.get(k), &format!("{path}.{k}"), out);
            }
        }
        (V::Array(e), V::Array(f)) => {
            if e.len() != f.len() {
                mismatch();
                return;
            }
            for (i, (a, b)) in e.iter().zip(f).enumerate() {
                diff(a, Some(b), &format!("{path}[{i}]"), out);
            }
        }
        (V::Float(a), V::Float(b)) => {
            if (a - b).abs() > FLOAT_TOLERANCE * a.abs().max(b.abs()).max(1.0) {
                mismatch();
            }
        }
        (a, b) => {
            if a != b {
                mismatch();
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: String,
    pub source: Source,
    pub drift: Vec<Drift>,
    pub error: Option<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.drift.is_empty()
    }
}

pub fn verify(case: &GoldenCase) -> CaseOutcome {
    let mut outcome = CaseOutcome {
        name: case.name.clone(),
        source: case.provenance.source,
        drift: Vec::new(),
        error: None,
    };
    match regenerate(case) {
        Ok(r) => diff(&toml::Value::Table(r.expected), Some(&r.result), "result", &mut outcome.drift),
        Err(e) => outcome.error = Some(e.to_string()),
    }
    outcome
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub outcomes: Vec<CaseOutcome>,
}

impl Summary {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.outcomes.len()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.passed() { "ok" } else { "DRIFT" };
            writeln!(f, "{status:5} {} ({:?})", o.name, o.source)?;
            if let Some(e) = &o.error {
                writeln!(f, "      error: {e}")?;
            }
            for d in &o.drift {
                writeln!(f, "      {d}")?;
            }
        }
        write!(f, "{}/{} cases pass", self.passed(), self.outcomes.len())
    }
}

/// Verifies every case in `dir`, one thread per case.
pub fn verify_all(dir: &Path) -> Result<Summary, CorpusError> {
    let cases = load_dir(dir)?;
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || verify(c))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread")).collect()
    });
    Ok(Summary { outcomes })
}

// ------------------------------------------------------------------ oracles

/// Names accepted in `provenance.oracle`.
pub const ORACLES: [&str; 5] = [
    "howald-binomial",
    "snc-floor",
    "floor-shifts",
    "tate-closed-form",
    "disc-closed-form",
];

fn payload<'a>(case: &'a GoldenCase) -> Result<&'a toml::Table, CorpusError> {
    case.problem
        .get("payload")
        .and_then(toml::Value::as_table)
        .ok_or_else(|| CorpusError::Malformed {
            case: case.name.clone(),
            message: "problem has no payload table".to_string(),
        })
}

fn field<T: serde::de::DeserializeOwned>(case: &GoldenCase, t: &toml::Table, key: &str) -> Result<T, CorpusError> {
    t.get(key)
        .cloned()
        .ok_or_else(|| format!("missing {key}"))
        .and_then(|v| v.try_into().map_err(|e: toml::de::Error| format!("{key}: {}", e.message())))
        .map_err(|message| CorpusError::Malformed {
            case: case.name.clone(),
            message,
        })
}

fn degree_bound(case: &GoldenCase) -> u32 {
    case.problem
        .get("options")
        .and_then(|o| o.get("degree_bound"))
        .and_then(toml::Value::as_integer)
        .map_or(crate::resolution::DEFAULT_DEGREE, |d| d as u32)
}

fn table_value(monomials: Vec<(u32, u32)>) -> toml::Value {
    toml::Value::Array(
        monomials
            .into_iter()
            .map(|(i, j)| toml::Value::Array(vec![(i as i64).into(), (j as i64).into()]))
            .collect(),
    )
}

fn run_oracle(case: &GoldenCase, name: &str) -> Result<toml::Table, CorpusError> {
    let p = payload(case)?;
    let malformed = |message: &str| CorpusError::Malformed {
        case: case.name.clone(),
        message: message.to_string(),
    };
    let mut out = toml::Table::new();
    match name {
        // Newton polygon criterion for c · {z^p = w^q}, 0 <= c < 1.
        "howald-binomial" => {
            let divisor: Vec<toml::Table> = field(case, p, "divisor")?;
            let [component] = divisor.as_slice() else {
                return Err(malformed("howald-binomial needs exactly one component"));
            };
            let curve: toml::Table = field(case, component, "curve")?;
            let (zp, wq): (i64, i64) = (field(case, &curve, "p")?, field(case, &curve, "q")?);
            let c: Rat = field(case, component, "coefficient")?;
            if c >= Rat::one() {
                return Err(malformed("howald-binomial applies for coefficients below 1"));
            }
            let d = degree_bound(case);
            let mut table = Vec::new();
            for total in 0..=d {
                for i in 0..=total {
                    let j = total - i;
                    let lhs = Rat::new(i as i64 + 1, zp) + Rat::new(j as i64 + 1, wq);
                    if lhs > c {
                        table.push((i, j));
                    }
                }
            }
            table.sort();
            out.insert("is_unit".into(), table.contains(&(0, 0)).into());
            out.insert("table".into(), table_value(table));
        }
        // O(-⌊a⌋{z=0} - ⌊b⌋{w=0}): monomials z^i w^j with i >= ⌊a⌋, j >= ⌊b⌋.
        "snc-floor" => {
            let divisor: Vec<toml::Table> = field(case, p, "divisor")?;
            let (mut fz, mut fw) = (Rat::zero(), Rat::zero());
            for component in &divisor {
                let curve: toml::Table = field(case, component, "curve")?;
                let c: Rat = field(case, component, "coefficient")?;
                match curve.get("kind").and_then(toml::Value::as_str) {
                    Some("axis-z") => fz = fz + c,
                    Some("axis-w") => fw = fw + c,
                    Some("node") => {
                        fz = fz + c.clone();
                        fw = fw + c;
                    }
                    _ => return Err(malformed("snc-floor accepts axis-z, axis-w and node only")),
                }
            }
            let (a, b) = (fz.floor_i64(), fw.floor_i64());
            let d = degree_bound(case) as i64;
            let mut table = Vec::new();
            for i in a..=d {
                for j in b..=d - i {
                    table.push((i as u32, j as u32));
                }
            }
            table.sort();
            out.insert("generators".into(), table_value(vec![(a as u32, b as u32)]));
            out.insert("table".into(), table_value(table));
        }
        // Trivial local system: every shift is ⌊r_i / m⌋.
        "floor-shifts" => {
            let twist: toml::Table = field(case, p, "twist")?;
            let r: Vec<Rat> = field(case, &twist, "r")?;
            let m: i64 = field(case, &twist, "m")?;
            let monodromy: toml::Table = field(case, p, "monodromy")?;
            let hodge: toml::Table = field(case, p, "hodge")?;
            let selector: Vec<usize> = field(case, &hodge, "selector")?;
            let nilpotents: Vec<toml::Value> = field(case, &monodromy, "nilpotents")?;
            if monodromy.contains_key("blocks") || nilpotents.len() != r.len() {
                return Err(malformed("floor-shifts needs unipotent monodromy and one r per axis"));
            }
            let row: Vec<toml::Value> = r
                .iter()
                .map(|ri| toml::Value::Integer((ri.clone() / Rat::from_int(m)).floor_i64()))
                .collect();
            out.insert(
                "shifts".into(),
                toml::Value::Array(vec![toml::Value::Array(row); selector.len()]),
            );
        }
        // h(t, θ) = [[t/π + x²π/t, xπ/t], [xπ/t, π/t]], x = θ/2π.
        "tate-closed-form" => {
            let points: Vec<toml::Table> = field(case, p, "evaluate")?;
            let pi = std::f64::consts::PI;
            let mut metrics = Vec::new();
            for pt in &points {
                let t: Vec<Rat> = field(case, pt, "t_over_pi")?;
                let x: Vec<Rat> = if pt.contains_key("theta_over_2pi") {
                    field(case, pt, "theta_over_2pi")?
                } else {
                    vec![Rat::zero()]
                };
                let (t, x) = (pi * t[0].to_f64(), x[0].to_f64());
                let m = [[t / pi + x * x * pi / t, x * pi / t], [x * pi / t, pi / t]];
                let mut entry = toml::Table::new();
                entry.insert(
                    "matrix".into(),
                    toml::Value::Array(m.iter().map(|r| toml::Value::Array(vec![r[0].into(), r[1].into()])).collect()),
                );
                metrics.push(toml::Value::Table(entry));
            }
            out.insert("metrics".into(), toml::Value::Array(metrics));
        }
        // ∫_{|z|<1/2} |z|^{2s} = 2π (1/2)^{2s+2} / (2s+2) for s > -1.
        "disc-closed-form" => {
            let v: i64 = field(case, p, "v")?;
            let a: Rat = field(case, p, "a")?;
            let s = Rat::from_int(v) + a;
            let integrable = s > Rat::from_int(-1);
            out.insert("symbolic".into(), integrable.into());
            if integrable {
                let s = s.to_f64();
                let exact = 2.0 * std::f64::consts::PI * 0.5f64.powf(2.0 * s + 2.0) / (2.0 * s + 2.0);
                out.insert("closed_form".into(), exact.into());
                out.insert("numeric_value".into(), exact.into());
            }
        }
        other => {
            return Err(CorpusError::UnknownOracle {
                case: case.name.clone(),
                oracle: other.to_string(),
            })
        }
    }
    Ok(out)
}
