//! Payload schemas and handlers, one pair per command.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{parse_payload, to_value, CliError, Command, OracleMode, Options};
use crate::algebra::{Rat, RatMatrix, RatVector, Subspace};
use crate::cks::{self, OrbitModel, ScanOptions};
use crate::l2::{self, quadrature, LaurentSection, SliceVerdict, SmoothFactor, Term, Trend, WeightProfile};
use crate::prolongation::{self, Generator, LocalMonodromy, MonodromyBlock};
use crate::resolution::{
    self, BlowupSequence, Center, CurveSpec, ExceptionalRecord, PolyTerm, Polynomial, QDivisorGerm, SncDefect,
};
use crate::ssheaf::{self, GeneratorEntry, HodgeFiberData, TwistSpec};
use crate::weight::{self, FiltrationLevel};

/// Largest `max/min` accepted by `cks-scan` before the scan is flagged
/// unbounded.
pub const RATIO_BOUND: f64 = 10.0;

pub(super) fn dispatch(
    command: Command,
    payload: toml::Value,
    opts: &Options,
) -> Result<(toml::Value, toml::Value), CliError> {
    match command {
        Command::Weightfilt => handle(payload, |p| weightfilt(p)),
        Command::Prolong => handle(payload, |p| prolong(p)),
        Command::SsheafGens => handle(payload, |p| ssheaf_gens(p)),
        Command::L2Test => handle(payload, |p| l2_test(p, opts)),
        Command::CksScan => handle(payload, |p| cks_scan(p, opts)),
        Command::NakanoCheck => handle(payload, |p| nakano_check(p, opts)),
        Command::Resolve => handle(payload, |p| resolve(p)),
        Command::MultIdeal => handle(payload, |p| mult_ideal(p, opts)),
        Command::JumpScan => handle(payload, |p| jump_scan(p, opts)),
        Command::TameCheck => handle(payload, |p| tame_check(p)),
    }
}

fn handle<P, R>(
    payload: toml::Value,
    f: impl FnOnce(P) -> Result<(P, R), CliError>,
) -> Result<(toml::Value, toml::Value), CliError>
where
    P: DeserializeOwned + Serialize,
    R: Serialize,
{
    let (normalized, result) = f(parse_payload(payload)?)?;
    Ok((to_value(&normalized, "payload")?, to_value(&result, "result")?))
}

// ---------------------------------------------------------------- weightfilt

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightfiltPayload {
    nilpotents: Vec<RatMatrix>,
}

#[derive(Serialize)]
struct GradedDim {
    level: i64,
    dim: usize,
}

#[derive(Serialize)]
struct FiltrationReport {
    /// Which partial sum `N_1 + ... + N_k` the filtration belongs to.
    operator: String,
    levels: Vec<FiltrationLevel>,
    graded: Vec<GradedDim>,
    axioms_hold: bool,
}

#[derive(Serialize)]
struct WeightfiltResult {
    filtrations: Vec<FiltrationReport>,
}

fn weightfilt(p: WeightfiltPayload) -> Result<(WeightfiltPayload, WeightfiltResult), CliError> {
    let ws = weight::relative_weight_sequence(&p.nilpotents)
        .map_err(|e| CliError::from_module("weight_filtration", "nilpotents", e))?;
    let mut partial = RatMatrix::zeros(ws[0].ambient(), ws[0].ambient());
    let mut filtrations = Vec::new();
    for (k, (w, n)) in ws.iter().zip(&p.nilpotents).enumerate() {
        partial = &partial + n;
        if let Err(why) = w.check_weight_axioms(&partial) {
            return Err(CliError::new(
                "weight_filtration",
                "AxiomViolation",
                &format!("nilpotents[{k}]"),
                why,
            ));
        }
        filtrations.push(FiltrationReport {
            operator: (1..=k + 1).map(|i| format!("N{i}")).collect::<Vec<_>>().join("+"),
            levels: w.describe(),
            graded: weight::graded_dims(w)
                .into_iter()
                .map(|(level, dim)| GradedDim { level, dim })
                .collect(),
            axioms_hold: true,
        });
    }
    Ok((p, WeightfiltResult { filtrations }))
}

// ------------------------------------------------------------------ prolong

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    alpha: Vec<Rat>,
    basis: Vec<RatVector>,
}

/// Local monodromy; omitting `blocks` means unipotent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonodromyDoc {
    dim: usize,
    #[serde(default)]
    blocks: Vec<BlockDoc>,
    nilpotents: Vec<RatMatrix>,
}

impl MonodromyDoc {
    fn build(&mut self, field: &str) -> Result<LocalMonodromy, CliError> {
        if self.blocks.is_empty() {
            self.blocks.push(BlockDoc {
                alpha: vec![Rat::zero(); self.nilpotents.len()],
                basis: Subspace::full(self.dim).basis().to_vec(),
            });
        }
        let mut blocks = Vec::new();
        for (b, block) in self.blocks.iter_mut().enumerate() {
            let space = Subspace::span(self.dim, &block.basis)
                .map_err(|e| CliError::from_module("prolongation", &format!("{field}.blocks[{b}].basis"), e))?;
            block.basis = space.basis().to_vec();
            blocks.push(MonodromyBlock {
                alpha: block.alpha.clone(),
                space,
            });
        }
        LocalMonodromy::new(self.dim, blocks, self.nilpotents.clone())
            .map_err(|e| CliError::from_module("prolongation", field, e))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProlongPayload {
    monodromy: MonodromyDoc,
    window: Vec<Rat>,
}

#[derive(Serialize)]
struct ProlongResult {
    generators: Vec<Generator>,
    residue_spectra: Vec<Vec<Rat>>,
    monodromy_consistent: bool,
}

fn prolong(mut p: ProlongPayload) -> Result<(ProlongPayload, ProlongResult), CliError> {
    let m = p.monodromy.build("monodromy")?;
    let basis =
        prolongation::deligne_basis(&m, &p.window).map_err(|e| CliError::from_module("prolongation", "window", e))?;
    let result = ProlongResult {
        residue_spectra: (0..m.boundary_count())
            .map(|i| prolongation::residue_spectrum(&basis, i))
            .collect(),
        monodromy_consistent: prolongation::monodromy_consistency(&basis, &m),
        generators: basis.generators,
    };
    Ok((p, result))
}

// -------------------------------------------------------------- ssheaf-gens

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeNumber {
    p: i64,
    q: i64,
    dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeDoc {
    weight: i64,
    numbers: Vec<HodgeNumber>,
    selector: Vec<usize>,
}

impl HodgeDoc {
    fn build(&mut self) -> Result<HodgeFiberData, CliError> {
        self.numbers.sort_by_key(|h| (h.p, h.q));
        let mut hodge_numbers = std::collections::BTreeMap::new();
        for (k, h) in self.numbers.iter().enumerate() {
            if hodge_numbers.insert((h.p, h.q), h.dim).is_some() {
                return Err(CliError::new(
                    "s_sheaf",
                    "DuplicateHodgeType",
                    &format!("hodge.numbers[{k}]"),
                    format!("Hodge type ({}, {}) listed twice", h.p, h.q),
                ));
            }
        }
        Ok(HodgeFiberData {
            weight: self.weight,
            hodge_numbers,
            selector: self.selector.clone(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SsheafPayload {
    monodromy: MonodromyDoc,
    hodge: HodgeDoc,
    twist: TwistSpec,
}

/// Standing assumption printed with every generator report.
pub const ORTHOGONALITY_ASSUMPTION: &str =
    "the flat basis is taken to be orthogonal for the polarization; this is not verified";

#[derive(Serialize)]
struct SsheafResult {
    generators: Vec<GeneratorEntry>,
    shifts: Vec<Vec<i64>>,
    limit_positivity: bool,
    assumptions: Vec<String>,
}

fn ssheaf_gens(mut p: SsheafPayload) -> Result<(SsheafPayload, SsheafResult), CliError> {
    let m = p.monodromy.build("monodromy")?;
    let h = p.hodge.build()?;
    let lattice = ssheaf::r_lattice(&m, &h).map_err(|e| CliError::from_module("s_sheaf", "hodge", e))?;
    let generators =
        ssheaf::generator_report(&lattice, &p.twist).map_err(|e| CliError::from_module("s_sheaf", "twist", e))?;
    let limit_positivity =
        ssheaf::validate_limit_positivity(&m, &h).map_err(|e| CliError::from_module("s_sheaf", "hodge", e))?;
    let result = SsheafResult {
        shifts: generators.iter().map(|g| g.shifts.clone()).collect(),
        generators,
        limit_positivity,
        assumptions: vec![ORTHOGONALITY_ASSUMPTION.to_string()],
    };
    Ok((p, result))
}

// ------------------------------------------------------------------ l2-test

fn one_factor() -> SmoothFactor {
    SmoothFactor::One
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionDoc {
    boundary_axes: usize,
    #[serde(default)]
    interior_axes: usize,
    rank: usize,
    terms: Vec<Term>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
enum L2Payload {
    /// `|z|^{2v} |z|^{2a}` on the disc of radius 1/2.
    Monomial { v: i64, a: Rat },
    /// A frame-valued Laurent section against per-generator exponents.
    Section {
        section: SectionDoc,
        weights: Vec<Vec<Rat>>,
        #[serde(default = "one_factor")]
        factor: SmoothFactor,
    },
}

#[derive(Serialize, Default)]
struct L2Result {
    symbolic: Option<bool>,
    /// `CONVERGENT`, `DIVERGENT` or `INDETERMINATE`.
    numeric: Option<Trend>,
    numeric_value: Option<f64>,
    closed_form: Option<f64>,
    relative_error: Option<f64>,
    within_tolerance: Option<bool>,
    cutoffs: usize,
    nodes_per_shell: usize,
    tolerance: f64,
    agreement: Option<bool>,
    note: Option<String>,
    slices: Vec<SliceVerdict>,
}

fn l2_test(mut p: L2Payload, opts: &Options) -> Result<(L2Payload, L2Result), CliError> {
    let mode = opts.oracle;
    let mut out = L2Result {
        cutoffs: (quadrature::LAST_LEVEL - quadrature::FIRST_LEVEL + 1) as usize,
        nodes_per_shell: quadrature::GAUSS_POINTS,
        tolerance: opts.tolerance.to_f64(),
        ..Default::default()
    };
    // whether an indeterminate numeric verdict sits on the documented boundary
    let boundary;
    match &mut p {
        L2Payload::Monomial { v, a } => {
            let s = Rat::from_int(*v) + a.clone();
            boundary = s == Rat::from_int(-1);
            if mode.symbolic() {
                out.symbolic = Some(l2::is_integrable_1d(*v, a));
            }
            if mode.numeric() {
                match l2::numeric_integral(*v, a) {
                    Ok(n) => {
                        out.numeric = Some(if n.convergent { Trend::Convergent } else { Trend::Divergent });
                        out.numeric_value = n.value;
                        if n.convergent {
                            let sf = s.to_f64();
                            let exact = 2.0 * std::f64::consts::PI * 0.5f64.powf(2.0 * sf + 2.0) / (2.0 * sf + 2.0);
                            out.closed_form = Some(exact);
                            if let Some(val) = n.value {
                                let rel = (val - exact).abs() / exact.abs();
                                out.relative_error = Some(rel);
                                out.within_tolerance = Some(rel <= out.tolerance);
                            }
                        }
                    }
                    Err(l2::L2Error::Indeterminate { .. }) => out.numeric = Some(Trend::Indeterminate),
                    Err(e) => return Err(CliError::from_module("l2_oracle", "payload", e)),
                }
            }
        }
        L2Payload::Section {
            section,
            weights,
            factor,
        } => {
            let f = LaurentSection::from_terms(
                section.boundary_axes,
                section.interior_axes,
                section.rank,
                std::mem::take(&mut section.terms),
            )
            .map_err(|e| CliError::from_module("l2_oracle", "section.terms", e))?;
            section.terms = f.terms();
            let w = WeightProfile::new(weights.clone());
            if mode.symbolic() {
                out.symbolic =
                    Some(l2::membership(&f, &w).map_err(|e| CliError::from_module("l2_oracle", "weights", e))?);
            }
            let mut on_boundary = true;
            if mode.numeric() {
                let phi = *factor;
                let n = l2::membership_numeric(&f, &w, &|z| phi.eval(z))
                    .map_err(|e| CliError::from_module("l2_oracle", "weights", e))?;
                on_boundary = n
                    .slices
                    .iter()
                    .filter(|s| s.trend == Trend::Indeterminate)
                    .all(|s| Rat::from_int(s.valuation) + s.exponent.clone() == Rat::from_int(-1));
                out.numeric = Some(match n.verdict {
                    Some(true) => Trend::Convergent,
                    Some(false) => Trend::Divergent,
                    None => Trend::Indeterminate,
                });
                out.slices = n.slices;
            }
            boundary = on_boundary;
        }
    }
    if mode == OracleMode::Both {
        let symbolic = out.symbolic.expect("computed in both mode");
        match out.numeric.expect("computed in both mode") {
            Trend::Indeterminate if boundary => {
                out.agreement = Some(true);
                out.note = Some(
                    "v + a = -1: the cutoff integrals grow by a constant per shell, so the \
                     quadrature reports no trend; the exact verdict is not integrable"
                        .to_string(),
                );
            }
            Trend::Indeterminate => {
                return Err(CliError::new(
                    "l2_oracle",
                    "Indeterminate",
                    "payload",
                    "quadrature established no trend away from the boundary v + a = -1",
                ))
            }
            trend => {
                let numeric = trend == Trend::Convergent;
                if numeric != symbolic {
                    return Err(CliError::new(
                        "l2_oracle",
                        "OracleDisagreement",
                        "payload",
                        format!("symbolic verdict {symbolic}, numeric verdict {trend:?}"),
                    ));
                }
                out.agreement = Some(true);
            }
        }
    }
    Ok((p, out))
}

// ----------------------------------------------------------------- cks-scan

fn one() -> Rat {
    Rat::one()
}

fn default_spread() -> f64 {
    ScanOptions::default().spread
}

/// A point given by `t_i = π · t_over_pi[i]` and `θ_i = 2π · theta_over_2pi[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalPoint {
    t_over_pi: Vec<Rat>,
    #[serde(default)]
    theta_over_2pi: Vec<Rat>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CksPayload {
    model: String,
    vector: Vec<Rat>,
    #[serde(default = "one")]
    epsilon: Rat,
    #[serde(default = "default_spread")]
    spread: f64,
    #[serde(default)]
    vary_angle: bool,
    #[serde(default)]
    evaluate: Vec<EvalPoint>,
}

#[derive(Serialize)]
struct EvaluatedMetric {
    t_over_pi: Vec<Rat>,
    theta_over_2pi: Vec<Rat>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CksResult {
    levels: Vec<i64>,
    min: f64,
    max: f64,
    ratio: f64,
    ratio_bound: f64,
    bounded: bool,
    /// `(max - min) / max`.
    relative_spread: f64,
    constant_within_tolerance: bool,
    tolerance: f64,
    samples: usize,
    seed: u64,
    metrics: Vec<EvaluatedMetric>,
}

fn model(id: &str) -> Result<OrbitModel, CliError> {
    OrbitModel::builtin(id).map_err(|e| CliError::from_module("cks_models", "model", e))
}

fn cks_scan(mut p: CksPayload, opts: &Options) -> Result<(CksPayload, CksResult), CliError> {
    let m = model(&p.model)?;
    if opts.samples == 0 {
        return Err(CliError::schema("options.samples", "at least one sample is required"));
    }
    if !(p.spread > 1.0 && p.spread.is_finite()) || !Rat::zero().lt(&p.epsilon) {
        return Err(CliError::schema("payload", "need epsilon > 0 and a finite spread > 1"));
    }
    let scan = cks::cks_ratio_scan(
        &m,
        &p.vector,
        &ScanOptions {
            epsilon: p.epsilon.to_f64(),
            samples: opts.samples,
            seed: opts.seed,
            spread: p.spread,
            vary_angle: p.vary_angle,
        },
    )
    .map_err(|e| CliError::from_module("cks_models", "vector", e))?;
    let n = m.boundary_count();
    let mut metrics = Vec::new();
    for (k, pt) in p.evaluate.iter_mut().enumerate() {
        if pt.theta_over_2pi.is_empty() {
            pt.theta_over_2pi = vec![Rat::zero(); n];
        }
        if pt.t_over_pi.len() != n || pt.theta_over_2pi.len() != n {
            return Err(CliError::from_module(
                "cks_models",
                &format!("evaluate[{k}]"),
                cks::CksError::PointShape {
                    expected: n,
                    found: pt.t_over_pi.len(),
                },
            ));
        }
        let pi = std::f64::consts::PI;
        let t: Vec<f64> = pt.t_over_pi.iter().map(|x| pi * x.to_f64()).collect();
        if t.iter().any(|&x| x <= 0.0) {
            return Err(CliError::from_module(
                "cks_models",
                &format!("evaluate[{k}].t_over_pi"),
                cks::CksError::OutsidePolydisc { axis: 0 },
            ));
        }
        let theta: Vec<f64> = pt.theta_over_2pi.iter().map(|x| 2.0 * pi * x.to_f64()).collect();
        let h = m.lifted_metric(&t, &theta);
        metrics.push(EvaluatedMetric {
            t_over_pi: pt.t_over_pi.clone(),
            theta_over_2pi: pt.theta_over_2pi.clone(),
            matrix: h.row_iter().map(|r| r.iter().cloned().collect()).collect(),
        });
    }
    let ratio = scan.max / scan.min;
    let relative_spread = (scan.max - scan.min) / scan.max;
    let tolerance = opts.tolerance.to_f64();
    let result = CksResult {
        levels: scan.levels,
        min: scan.min,
        max: scan.max,
        ratio,
        ratio_bound: RATIO_BOUND,
        bounded: ratio <= RATIO_BOUND,
        relative_spread,
        constant_within_tolerance: relative_spread <= tolerance,
        tolerance,
        samples: scan.samples,
        seed: opts.seed,
        metrics,
    };
    Ok((p, result))
}

// ------------------------------------------------------------- nakano-check

fn default_step() -> Rat {
    Rat::new(1, 1000)
}

fn default_rings() -> usize {
    5
}

fn default_angles() -> usize {
    8
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NakanoPayload {
    model: String,
    #[serde(default = "default_step")]
    step: Rat,
    #[serde(default = "default_rings")]
    rings: usize,
    #[serde(default = "default_angles")]
    angles: usize,
}

#[derive(Serialize)]
struct NakanoResult {
    #[serde(flatten)]
    report: cks::NakanoReport,
    /// `max_error / max_error_half_step`; near 4 for a second-order stencil.
    error_ratio: Option<f64>,
    semipositive: bool,
    tolerance: f64,
}

fn nakano_check(p: NakanoPayload, opts: &Options) -> Result<(NakanoPayload, NakanoResult), CliError> {
    let m = model(&p.model)?;
    if p.rings == 0 || p.angles == 0 || !Rat::zero().lt(&p.step) {
        return Err(CliError::schema("payload", "need rings, angles >= 1 and step > 0"));
    }
    let grid = cks::nakano_grid(&m, p.rings, p.angles);
    let report = cks::nakano_check(&m, &grid, p.step.to_f64()).map_err(|e| CliError::from_module("cks_models", "step", e))?;
    let tolerance = opts.tolerance.to_f64();
    let error_ratio = match (report.max_error, report.max_error_half_step) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    };
    let result = NakanoResult {
        semipositive: report.min_eigenvalue >= -tolerance,
        error_ratio,
        tolerance,
        report,
    };
    Ok((p, result))
}

// ---------------------------------------------------- resolve and relatives

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    curve: CurveSpec,
    coefficient: Rat,
}

fn build_divisor(divisor: &[ComponentDoc]) -> Result<QDivisorGerm, CliError> {
    let specs: Vec<(CurveSpec, Rat)> = divisor.iter().map(|c| (c.curve.clone(), c.coefficient.clone())).collect();
    QDivisorGerm::from_specs(&specs).map_err(|e| CliError::from_module("resolution2d", "divisor", e))
}

fn build_sequence(a: &QDivisorGerm, extra: &[Center]) -> Result<BlowupSequence, CliError> {
    let mut seq = resolution::log_resolve(a);
    for (k, c) in extra.iter().enumerate() {
        seq.blow_up(c.clone())
            .map_err(|e| CliError::from_module("resolution2d", &format!("extra_centers[{k}]"), e))?;
    }
    Ok(seq)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolvePayload {
    divisor: Vec<ComponentDoc>,
    #[serde(default)]
    extra_centers: Vec<Center>,
}

#[derive(Serialize)]
struct ResolveResult {
    curves: Vec<String>,
    blowups: Vec<ExceptionalRecord>,
    fan: Vec<[i64; 2]>,
    snc: bool,
    defects: Vec<SncDefect>,
    available_centers: Vec<Center>,
}

fn resolve(p: ResolvePayload) -> Result<(ResolvePayload, ResolveResult), CliError> {
    let a = build_divisor(&p.divisor)?;
    let seq = build_sequence(&a, &p.extra_centers)?;
    let result = ResolveResult {
        curves: seq.curves().iter().map(|c| c.name()).collect(),
        blowups: seq.records().to_vec(),
        fan: seq.fan().to_vec(),
        snc: seq.is_snc(),
        defects: seq.snc_defects(),
        available_centers: seq.available_centers(),
    };
    Ok((p, result))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultIdealPayload {
    divisor: Vec<ComponentDoc>,
    #[serde(default)]
    extra_centers: Vec<Center>,
    #[serde(default)]
    queries: Vec<Vec<PolyTerm>>,
}

#[derive(Serialize)]
struct QueryAnswer {
    polynomial: Vec<PolyTerm>,
    member: bool,
}

#[derive(Serialize)]
struct IndependenceCheck {
    over_resolutions: usize,
    identical: bool,
}

#[derive(Serialize)]
struct MultIdealResult {
    #[serde(flatten)]
    ideal: resolution::PushforwardIdeal,
    is_unit: bool,
    queries: Vec<QueryAnswer>,
    /// Present unless the oracle mode is symbolic: the table recomputed on
    /// every one-step over-resolution.
    independence: Option<IndependenceCheck>,
}

fn resolved_or_fail(seq: &BlowupSequence) -> Result<(), CliError> {
    match seq.snc_defects().first() {
        Some(d) => Err(CliError::new("resolution2d", "NotResolved", "extra_centers", d.reason.clone())),
        None => Ok(()),
    }
}

fn mult_ideal(p: MultIdealPayload, opts: &Options) -> Result<(MultIdealPayload, MultIdealResult), CliError> {
    let a = build_divisor(&p.divisor)?;
    let seq = build_sequence(&a, &p.extra_centers)?;
    resolved_or_fail(&seq)?;
    let ideal = resolution::pushforward_ideal(&seq, &a, opts.degree_bound)
        .map_err(|e| CliError::from_module("resolution2d", "divisor", e))?;
    let queries = p
        .queries
        .iter()
        .map(|q| {
            let f = Polynomial::from_terms(q.iter().map(|t| ((t.exponent[0], t.exponent[1]), t.coefficient.clone())));
            QueryAnswer {
                polynomial: f.to_terms(),
                member: ideal.contains(&seq, &f),
            }
        })
        .collect();
    let independence = if opts.oracle.numeric() {
        let centers = seq.available_centers();
        let mut identical = true;
        for c in &centers {
            let mut t = seq.clone();
            t.blow_up(c.clone())
                .map_err(|e| CliError::from_module("resolution2d", "extra_centers", e))?;
            identical &= resolution::resolution_independence(&a, &seq, &t, opts.degree_bound)
                .map_err(|e| CliError::from_module("resolution2d", "extra_centers", e))?;
        }
        if !identical && opts.oracle == OracleMode::Both {
            return Err(CliError::new(
                "resolution2d",
                "OracleDisagreement",
                "divisor",
                "membership table changes under a further blowup",
            ));
        }
        Some(IndependenceCheck {
            over_resolutions: centers.len(),
            identical,
        })
    } else {
        None
    };
    let result = MultIdealResult {
        is_unit: ideal.is_unit(),
        ideal,
        queries,
        independence,
    };
    Ok((p, result))
}

/// Either an explicit `grid`, or `step` and `max` for `step, 2·step, …, max`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpPayload {
    divisor: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    step: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max: Option<Rat>,
}

#[derive(Serialize)]
struct JumpRow {
    c: Rat,
    generators: Vec<(u32, u32)>,
    monomials: usize,
}

#[derive(Serialize)]
struct JumpResult {
    first_jump: Option<Rat>,
    changes: Vec<Rat>,
    entries: Vec<JumpRow>,
}

/// Longest grid a `step`/`max` pair may expand to.
const MAX_GRID: usize = 10_000;

fn jump_scan(mut p: JumpPayload, opts: &Options) -> Result<(JumpPayload, JumpResult), CliError> {
    let grid = match (p.grid.take(), p.step.take(), p.max.take()) {
        (Some(g), None, None) => g,
        (None, Some(step), Some(max)) => {
            if !Rat::zero().lt(&step) {
                return Err(CliError::schema("payload.step", "step must be positive"));
            }
            let mut g = Vec::new();
            let mut c = step.clone();
            while c <= max {
                if g.len() == MAX_GRID {
                    return Err(CliError::schema("payload.step", format!("grid longer than {MAX_GRID}")));
                }
                g.push(c.clone());
                c = c + step.clone();
            }
            g
        }
        _ => return Err(CliError::schema("payload", "give either grid, or both step and max")),
    };
    let a = build_divisor(&p.divisor)?;
    let scan = resolution::jumping_scan(&a, &grid, opts.degree_bound)
        .map_err(|e| CliError::from_module("resolution2d", "divisor", e))?;
    p.grid = Some(grid);
    let result = JumpResult {
        first_jump: scan.changes.first().cloned(),
        changes: scan.changes,
        entries: scan
            .entries
            .into_iter()
            .map(|e| JumpRow {
                c: e.c,
                monomials: e.table.len(),
                generators: e.generators,
            })
            .collect(),
    };
    Ok((p, result))
}

// --------------------------------------------------------------- tame-check

fn default_shells() -> usize {
    20
}

fn default_per_shell() -> usize {
    8
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TamePayload {
    model: String,
    #[serde(default = "one")]
    c: Rat,
    #[serde(default = "default_shells")]
    shells: usize,
    #[serde(default = "default_per_shell")]
    per_shell: usize,
}

#[derive(Serialize)]
struct TameResult {
    #[serde(flatten)]
    report: l2::TamenessReport,
    samples: usize,
    growth_allowed: f64,
}

fn tame_check(p: TamePayload) -> Result<(TamePayload, TameResult), CliError> {
    let m = model(&p.model)?;
    if p.shells < 2 || p.per_shell == 0 || p.c.is_negative() {
        return Err(CliError::schema("payload", "need shells >= 2, per_shell >= 1 and c >= 0"));
    }
    let samples = cks::tameness_samples(&m, p.shells, p.per_shell);
    let result = TameResult {
        report: l2::tameness_check(&samples, &p.c),
        samples: samples.len(),
        growth_allowed: l2::TAME_GROWTH,
    };
    Ok((p, result))
}
