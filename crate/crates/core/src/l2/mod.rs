//! Local L² membership of sections near a normal crossing boundary.
//!
//! A section is a Laurent polynomial in the boundary coordinates (and an
//! ordinary polynomial in the interior ones) with values in a prolonged
//! frame. Membership is decided two ways:
//!
//! * symbolically, through valuations: `|z|^{2v}|z|^{2a}` is integrable
//!   near `0` exactly when `v + a > -1`;
//! * numerically, by cutoff quadrature of the actual integrand on a slice
//!   through a fixed generic point.
//!
//! # The slack lemma
//!
//! Near the boundary the squared norm of frame vector `j` is
//! `λ_j · ∏ |z_i|^{2a_{j,i}}` with `1 ≲ λ_j ≲ |z_1⋯z_r|^{-ε}` for every
//! `ε > 0`. The factor `λ_j` never changes a verdict:
//!
//! * if `v + a > -1`, then `v + a - ε > -1` for the rational
//!   `ε = (v + a + 1) / 2`, so the upper bound stays integrable;
//! * if `v + a <= -1`, then `λ_j >= 1` already bounds the integrand below
//!   by the divergent monomial.
//!
//! Both cases rest on strict inequalities between rationals, which is why
//! [`WeightProfile`] records `λ_j` only as its bound class and
//! [`slack_margin`] exhibits the `ε` explicitly.

pub mod quadrature;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Rat;
use crate::prolongation::ProlongedBasis;
use crate::ssheaf::TwistSpec;
pub use quadrature::{CutoffSeries, Trend};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum L2Error {
    #[error("section vanishes identically along axis {axis}")]
    ZeroSection { axis: usize },
    #[error("axis {axis} out of range (section has {count} boundary axes)")]
    AxisOutOfRange { axis: usize, count: usize },
    #[error("section has {found} frame components, weight profile has {expected}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("section has {found} boundary axes, weight profile has {expected}")]
    AxisMismatch { expected: usize, found: usize },
    #[error("term has shape ({boundary}, {interior}, {rank}), section expects ({eb}, {ei}, {er})")]
    TermShape {
        boundary: usize,
        interior: usize,
        rank: usize,
        eb: usize,
        ei: usize,
        er: usize,
    },
    #[error("no trend established by the last cutoff for v = {v}, a = {a}")]
    Indeterminate { v: i64, a: Rat },
}

/// Exponents of one monomial: integers on boundary axes, naturals inside.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub boundary: Vec<i64>,
    #[serde(default)]
    pub interior: Vec<u32>,
}

impl Monomial {
    pub fn constant(boundary: usize, interior: usize) -> Self {
        Monomial {
            boundary: vec![0; boundary],
            interior: vec![0; interior],
        }
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            boundary: self.boundary.iter().zip(&other.boundary).map(|(a, b)| a + b).collect(),
            interior: self.interior.iter().zip(&other.interior).map(|(a, b)| a + b).collect(),
        }
    }

    fn eval(&self, boundary: &[Complex64], interior: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (z, &e) in boundary.iter().zip(&self.boundary) {
            acc *= z.powi(e as i32);
        }
        for (z, &e) in interior.iter().zip(&self.interior) {
            acc *= z.powi(e as i32);
        }
        acc
    }
}

/// One term of a [`LaurentSection`] in serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub boundary: Vec<i64>,
    #[serde(default)]
    pub interior: Vec<u32>,
    pub coefficients: Vec<Rat>,
}

impl Term {
    pub fn monomial(&self) -> Monomial {
        Monomial {
            boundary: self.boundary.clone(),
            interior: self.interior.clone(),
        }
    }
}

/// A frame-valued Laurent polynomial `Σ_m z^m · Σ_j c_{m,j} e_j`.
///
/// Terms whose coefficient vector vanishes are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSection {
    boundary: usize,
    interior: usize,
    rank: usize,
    terms: BTreeMap<Monomial, Vec<Rat>>,
}

impl LaurentSection {
    pub fn zero(boundary: usize, interior: usize, rank: usize) -> Self {
        LaurentSection {
            boundary,
            interior,
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// `z^boundary · e_generator` with no interior variables.
    pub fn monomial(boundary: &[i64], rank: usize, generator: usize) -> Self {
        let mut c = vec![Rat::zero(); rank];
        c[generator] = Rat::one();
        let mut s = Self::zero(boundary.len(), 0, rank);
        s.add_term(
            Monomial {
                boundary: boundary.to_vec(),
                interior: vec![],
            },
            c,
        )
        .expect("shape matches by construction");
        s
    }

    pub fn from_terms(
        boundary: usize,
        interior: usize,
        rank: usize,
        terms: Vec<Term>,
    ) -> Result<Self, L2Error> {
        let mut s = Self::zero(boundary, interior, rank);
        for t in terms {
            s.add_term(t.monomial(), t.coefficients)?;
        }
        Ok(s)
    }

    pub fn add_term(&mut self, m: Monomial, coefficients: Vec<Rat>) -> Result<(), L2Error> {
        if m.boundary.len() != self.boundary
            || m.interior.len() != self.interior
            || coefficients.len() != self.rank
        {
            return Err(L2Error::TermShape {
                boundary: m.boundary.len(),
                interior: m.interior.len(),
                rank: coefficients.len(),
                eb: self.boundary,
                ei: self.interior,
                er: self.rank,
            });
        }
        let slot = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| vec![Rat::zero(); coefficients.len()]);
        for (s, c) in slot.iter_mut().zip(coefficients) {
            *s += c;
        }
        if slot.iter().all(Rat::is_zero) {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn boundary_axes(&self) -> usize {
        self.boundary
    }

    pub fn interior_axes(&self) -> usize {
        self.interior
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(m, c)| Term {
                boundary: m.boundary.clone(),
                interior: m.interior.clone(),
                coefficients: c.clone(),
            })
            .collect()
    }

    /// The scalar coefficient function of frame vector `j`, as a rank-1 section.
    pub fn component(&self, j: usize) -> LaurentSection {
        let mut out = Self::zero(self.boundary, self.interior, 1);
        for (m, c) in &self.terms {
            if !c[j].is_zero() {
                out.terms.insert(m.clone(), vec![c[j].clone()]);
            }
        }
        out
    }

    /// Frame vectors whose coefficient function is not identically zero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.rank)
            .filter(|&j| self.terms.values().any(|c| !c[j].is_zero()))
            .collect()
    }

    /// Multiplies the coefficient function of `e_j` by a scalar polynomial.
    pub fn scale_component(&self, j: usize, factor: &[(Monomial, Rat)]) -> LaurentSection {
        let mut out = Self::zero(self.boundary, self.interior, self.rank);
        for (m, c) in &self.terms {
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                if k == j {
                    for (fm, fc) in factor {
                        let mut v = vec![Rat::zero(); self.rank];
                        v[k] = ck * fc;
                        out.add_term(m.times(fm), v).expect("same shape");
                    }
                } else {
                    let mut v = vec![Rat::zero(); self.rank];
                    v[k] = ck.clone();
                    out.add_term(m.clone(), v).expect("same shape");
                }
            }
        }
        out
    }

    pub fn add(&self, other: &LaurentSection) -> Result<LaurentSection, L2Error> {
        let mut out = self.clone();
        for t in other.terms() {
            out.add_term(t.monomial(), t.coefficients)?;
        }
        Ok(out)
    }

    /// Value of the coefficient function of `e_j` at a point.
    pub fn eval_component(&self, j: usize, boundary: &[Complex64], interior: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .filter(|(_, c)| !c[j].is_zero())
            .map(|(m, c)| m.eval(boundary, interior) * c[j].to_f64())
            .sum()
    }
}

impl Serialize for LaurentSection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            boundary_axes: usize,
            interior_axes: usize,
            rank: usize,
            terms: Vec<Term>,
        }
        Repr {
            boundary_axes: self.boundary,
            interior_axes: self.interior,
            rank: self.rank,
            terms: self.terms(),
        }
        .serialize(s)
    }
}

/// Minimal exponent of `z_axis` among terms with a nonzero coefficient.
pub fn valuation(f: &LaurentSection, axis: usize) -> Result<i64, L2Error> {
    if axis >= f.boundary {
        return Err(L2Error::AxisOutOfRange {
            axis,
            count: f.boundary,
        });
    }
    f.terms
        .keys()
        .map(|m| m.boundary[axis])
        .min()
        .ok_or(L2Error::ZeroSection { axis })
}

/// `v + a > -1`.
pub fn is_integrable_1d(v: i64, a: &Rat) -> bool {
    Rat::from_int(v) + a > Rat::from_int(-1)
}

/// A rational `ε > 0` with `v + a - ε > -1`, when one exists.
pub fn slack_margin(v: i64, a: &Rat) -> Option<Rat> {
    let gap = Rat::from_int(v) + a + Rat::one();
    (gap > Rat::zero()).then(|| gap / Rat::from_int(2))
}

/// Two-sided bound class of the slack factor `λ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlackBound {
    /// `1 ≲ λ ≲ |z|^{-ε}` for every `ε > 0`.
    LogBounded,
}

/// Per-generator, per-axis weight exponents `β_{j,i} - r_i/m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightProfile {
    pub exponents: Vec<Vec<Rat>>,
    #[serde(default = "default_slack")]
    pub slack: SlackBound,
}

fn default_slack() -> SlackBound {
    SlackBound::LogBounded
}

impl WeightProfile {
    pub fn new(exponents: Vec<Vec<Rat>>) -> Self {
        WeightProfile {
            exponents,
            slack: SlackBound::LogBounded,
        }
    }

    /// All exponents zero: the trivial variation with no twist.
    pub fn trivial(rank: usize, axes: usize) -> Self {
        Self::new(vec![vec![Rat::zero(); axes]; rank])
    }

    pub fn from_basis(b: &ProlongedBasis, t: &TwistSpec) -> Self {
        Self::new(
            b.generators
                .iter()
                .map(|g| {
                    g.exponents
                        .iter()
                        .enumerate()
                        .map(|(i, beta)| beta - &t.weight(i))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn axes(&self) -> usize {
        self.exponents.first().map_or(0, Vec::len)
    }
}

fn check_shapes(f: &LaurentSection, w: &WeightProfile) -> Result<(), L2Error> {
    if f.rank != w.rank() {
        return Err(L2Error::IndexMismatch {
            expected: w.rank(),
            found: f.rank,
        });
    }
    if let Some(bad) = w.exponents.iter().find(|e| e.len() != f.boundary) {
        return Err(L2Error::AxisMismatch {
            expected: bad.len(),
            found: f.boundary,
        });
    }
    Ok(())
}

/// Symbolic membership: every nonzero component passes the one-variable
/// test on every boundary axis.
pub fn membership(f: &LaurentSection, w: &WeightProfile) -> Result<bool, L2Error> {
    check_shapes(f, w)?;
    for j in f.support() {
        let fj = f.component(j);
        for (i, a) in w.exponents[j].iter().enumerate() {
            if !is_integrable_1d(valuation(&fj, i)?, a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the cutoff quadrature of `|z|^{2(v+a)}` over the disc of
/// radius 1/2.
#[derive(Debug, Clone, Serialize)]
pub struct NumericIntegral {
    pub convergent: bool,
    /// Disc integral, when convergent.
    pub value: Option<f64>,
    /// The radial integral `∫ r^{2(v+a)+1} dr`, when convergent.
    pub radial: Option<f64>,
    pub series: CutoffSeries,
}

pub fn numeric_integral(v: i64, a: &Rat) -> Result<NumericIntegral, L2Error> {
    let p = 2.0 * (v as f64 + a.to_f64()) + 1.0;
    let series = quadrature::radial_series(&|r: f64| r.powf(p));
    match series.trend {
        Trend::Indeterminate => Err(L2Error::Indeterminate { v, a: a.clone() }),
        Trend::Convergent => {
            let radial = series.extrapolated;
            Ok(NumericIntegral {
                convergent: true,
                value: radial.map(|r| 2.0 * PI * r),
                radial,
                series,
            })
        }
        Trend::Divergent => Ok(NumericIntegral {
            convergent: false,
            value: None,
            radial: None,
            series,
        }),
    }
}

/// Bounded positive smooth factors used to probe twist invariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothFactor {
    One,
    /// `2 + sin |z|²`
    TwoPlusSin,
    /// `e^{Re z}`
    ExpRe,
    /// `1 / (1 + |z|²)`
    Lorentzian,
    /// `3 + cos(4 Im z) + Re z`
    Wobble,
}

impl SmoothFactor {
    pub const ALL: [SmoothFactor; 5] = [
        SmoothFactor::One,
        SmoothFactor::TwoPlusSin,
        SmoothFactor::ExpRe,
        SmoothFactor::Lorentzian,
        SmoothFactor::Wobble,
    ];

    pub fn eval(self, z: Complex64) -> f64 {
        match self {
            SmoothFactor::One => 1.0,
            SmoothFactor::TwoPlusSin => 2.0 + z.norm_sqr().sin(),
            SmoothFactor::ExpRe => z.re.exp(),
            SmoothFactor::Lorentzian => 1.0 / (1.0 + z.norm_sqr()),
            SmoothFactor::Wobble => 3.0 + (4.0 * z.im).cos() + z.re,
        }
    }
}

/// Coordinates of the generic point through which numeric slices are taken.
pub fn generic_point(boundary: usize, interior: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let pick = |k: usize, seed: f64| {
        let t = seed + 0.731 * k as f64;
        Complex64::from_polar(0.3 + 0.07 * (k % 3) as f64, t)
    };
    (
        (0..boundary).map(|k| pick(k, 0.4142)).collect(),
        (0..interior).map(|k| pick(k, 1.1892)).collect(),
    )
}

/// Numeric verdict of one (generator, axis) slice.
#[derive(Debug, Clone, Serialize)]
pub struct SliceVerdict {
    pub generator: usize,
    pub axis: usize,
    pub exponent: Rat,
    pub valuation: i64,
    pub trend: Trend,
    pub value: Option<f64>,
}

/// Numeric membership: `Some(verdict)`, or `None` when some slice is
/// indeterminate and none diverges.
#[derive(Debug, Clone, Serialize)]
pub struct NumericMembership {
    pub verdict: Option<bool>,
    pub slices: Vec<SliceVerdict>,
}

/// Integrates `|f_j|² |z_i|^{2a_{j,i}} φ(z_i)` over the punctured disc in
/// `z_i`, the other coordinates frozen at [`generic_point`].
pub fn membership_numeric(
    f: &LaurentSection,
    w: &WeightProfile,
    phi: &dyn Fn(Complex64) -> f64,
) -> Result<NumericMembership, L2Error> {
    check_shapes(f, w)?;
    let (base, interior) = generic_point(f.boundary, f.interior);
    let mut slices = Vec::new();
    for j in f.support() {
        let fj = f.component(j);
        for (i, a) in w.exponents[j].iter().enumerate() {
            let lo = valuation(&fj, i)?;
            let hi = fj.terms.keys().map(|m| m.boundary[i]).max().unwrap_or(lo);
            let angular = 2 * (hi - lo) as usize + 33;
            let af = a.to_f64();
            let integrand = |z: Complex64| {
                let mut p = base.clone();
                p[i] = z;
                f.eval_component(j, &p, &interior).norm_sqr() * z.norm().powf(2.0 * af) * phi(z)
            };
            let series = quadrature::disc_series(&integrand, angular);
            slices.push(SliceVerdict {
                generator: j,
                axis: i,
                exponent: a.clone(),
                valuation: lo,
                trend: series.trend,
                value: series.extrapolated,
            });
        }
    }
    let verdict = if slices.iter().any(|s| s.trend == Trend::Divergent) {
        Some(false)
    } else if slices.iter().all(|s| s.trend == Trend::Convergent) {
        Some(true)
    } else {
        None
    };
    Ok(NumericMembership { verdict, slices })
}

/// Numeric verdicts with and without a smooth twist factor.
#[derive(Debug, Clone, Serialize)]
pub struct TwistComparison {
    pub symbolic: bool,
    pub plain: Option<bool>,
    pub twisted: Option<bool>,
    pub unchanged: bool,
}

pub fn smooth_twist_invariance(
    f: &LaurentSection,
    w: &WeightProfile,
    phi: &dyn Fn(Complex64) -> f64,
) -> Result<TwistComparison, L2Error> {
    let symbolic = membership(f, w)?;
    let plain = membership_numeric(f, w, &|_| 1.0)?.verdict;
    let twisted = membership_numeric(f, w, phi)?.verdict;
    Ok(TwistComparison {
        symbolic,
        plain,
        twisted,
        unchanged: plain == twisted,
    })
}

/// One sample point for [`tameness_check`].
#[derive(Debug, Clone)]
pub struct MetricSample {
    /// Distance class of the point from the boundary; larger is closer.
    pub shell: usize,
    /// Gram matrix of the singular metric in a fixed frame.
    pub model: DMatrix<f64>,
    /// Gram matrix of the smooth reference metric in the same frame.
    pub reference: DMatrix<f64>,
    /// Values of the ideal generators `f_i`.
    pub ideal: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TamenessReport {
    pub tame: bool,
    /// Smallest `C` valid on every sample.
    pub constant: f64,
    /// Largest required `C` per shell, outermost first.
    pub shell_max: Vec<f64>,
}

/// Allowed growth of the required constant from the outer to the inner
/// half of the shells.
pub const TAME_GROWTH: f64 = 10.0;

/// Largest `λ` with `A v = λ B v`, for symmetric `A` and positive definite `B`.
pub fn max_generalized_eigenvalue(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    let l = b.clone().cholesky()?.l();
    let li = l.try_inverse()?;
    let m = &li * a * li.transpose();
    let m = (&m + m.transpose()) * 0.5;
    m.symmetric_eigenvalues().iter().cloned().reduce(f64::max)
}

/// Tests `(Σ|f_i|²)^c · h_reference ≤ C · h_model` on the samples.
///
/// `C` is estimated per sample as the largest generalized eigenvalue of the
/// pair. The inequality is accepted when the requirement stays bounded
/// toward the boundary: the worst sample in the inner half of the shells
/// needs at most [`TAME_GROWTH`] times the outer half's worst `C`.
pub fn tameness_check(samples: &[MetricSample], c: &Rat) -> TamenessReport {
    let c = c.to_f64();
    let mut per_shell: BTreeMap<usize, f64> = BTreeMap::new();
    for s in samples {
        let ideal: f64 = s.ideal.iter().map(|f| f.norm_sqr()).sum();
        let need = match max_generalized_eigenvalue(&s.reference, &s.model) {
            Some(l) => ideal.powf(c) * l,
            None => f64::INFINITY,
        };
        let slot = per_shell.entry(s.shell).or_insert(0.0);
        *slot = slot.max(need);
    }
    let shell_max: Vec<f64> = per_shell.into_values().collect();
    let constant = shell_max.iter().cloned().fold(0.0, f64::max);
    let half = shell_max.len() / 2;
    let outer = shell_max[..half.max(1).min(shell_max.len())]
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let inner = shell_max[half..].iter().cloned().fold(0.0, f64::max);
    let tame = constant.is_finite() && inner <= TAME_GROWTH * outer.max(f64::MIN_POSITIVE);
    TamenessReport {
        tame,
        constant,
        shell_max,
    }
}

/// Samples `z = ρ e^{iθ}` on shells `ρ = 2^{-k}`, `k = 1..=shells`, for a
/// one-variable model given as a Gram-matrix function of `z`.
pub fn radial_samples(
    shells: usize,
    per_shell: usize,
    model: &dyn Fn(Complex64) -> DMatrix<f64>,
    reference: &dyn Fn(Complex64) -> DMatrix<f64>,
    ideal: &dyn Fn(Complex64) -> Vec<Complex64>,
) -> Vec<MetricSample> {
    let mut out = Vec::new();
    for k in 1..=shells {
        for t in 0..per_shell {
            let z = Complex64::from_polar(0.5f64.powi(k as i32), 2.0 * PI * (t as f64 + 0.5) / per_shell as f64);
            out.push(MetricSample {
                shell: k,
                model: model(z),
                reference: reference(z),
                ideal: ideal(z),
            });
        }
    }
    out
}
