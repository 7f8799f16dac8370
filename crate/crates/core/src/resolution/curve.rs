use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ResolutionError;
use crate::algebra::Rat;

/// A polynomial in `z, w` with rational coefficients, keyed by `(i, j)` for
/// `z^i w^j`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(BTreeMap<(u32, u32), Rat>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exponent: [u32; 2],
    pub coefficient: Rat,
}

impl Polynomial {
    pub fn monomial(i: u32, j: u32) -> Self {
        Self::from_terms([((i, j), Rat::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut p = Polynomial::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rat) {
        let slot = self.0.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for ((a, b), c) in &self.0 {
            for ((d, e), f) in &other.0 {
                out.add_term((a + d, b + e), c * f);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::monomial(0, 0), |acc, _| acc.mul(self))
    }

    /// `self / g` when `g` divides `self` in `Q[z, w]`.
    ///
    /// A single generator is a Gröbner basis of the ideal it spans, so the
    /// lex division remainder vanishes exactly when `g` divides.
    pub fn divide_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        let (&(gi, gj), gc) = g.0.iter().next_back()?;
        let mut rest = self.clone();
        let mut quotient = Polynomial::default();
        while let Some((&(ri, rj), rc)) = rest.0.iter().next_back() {
            if ri < gi || rj < gj {
                return None;
            }
            let q = ((ri - gi, rj - gj), rc / gc);
            let step = Polynomial::from_terms([q.clone()]).mul(g);
            quotient.add_term(q.0, q.1);
            for (e, c) in step.0 {
                rest.add_term(e, -c);
            }
        }
        Some(quotient)
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.0
            .iter()
            .map(|(&(i, j), c)| PolyTerm {
                exponent: [i, j],
                coefficient: c.clone(),
            })
            .collect()
    }
}

/// Shapes the resolution machinery understands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum CurveShape {
    /// `{z = 0}`
    AxisZ,
    /// `{w = 0}`
    AxisW,
    /// `{z^p = λ w^q}` with `gcd(p, q) = 1` and `λ ≠ 0`.
    Binomial { p: u32, q: u32, lambda: Rat },
}

/// An irreducible plane curve germ through the origin from the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneCurveGerm {
    pub shape: CurveShape,
    #[serde(skip)]
    pub polynomial: Polynomial,
    pub irreducible: bool,
}

impl PlaneCurveGerm {
    pub fn axis_z() -> Self {
        Self::from_shape(CurveShape::AxisZ)
    }

    pub fn axis_w() -> Self {
        Self::from_shape(CurveShape::AxisW)
    }

    pub fn binomial(p: u32, q: u32, lambda: Rat) -> Result<Self, ResolutionError> {
        if p == 0 || q == 0 || p.gcd(&q) != 1 || lambda.is_zero() {
            return Err(ResolutionError::UnsupportedGerm(format!(
                "z^{p} - ({lambda}) w^{q} is not an irreducible binomial"
            )));
        }
        Ok(Self::from_shape(CurveShape::Binomial { p, q, lambda }))
    }

    pub fn cusp(p: u32, q: u32) -> Result<Self, ResolutionError> {
        Self::binomial(p, q, Rat::one())
    }

    /// The smooth curve `z = slope · w`.
    pub fn line(slope: Rat) -> Result<Self, ResolutionError> {
        Self::binomial(1, 1, slope)
    }

    fn from_shape(shape: CurveShape) -> Self {
        let polynomial = match &shape {
            CurveShape::AxisZ => Polynomial::monomial(1, 0),
            CurveShape::AxisW => Polynomial::monomial(0, 1),
            CurveShape::Binomial { p, q, lambda } => {
                Polynomial::from_terms([((*p, 0), Rat::one()), ((0, *q), -lambda)])
            }
        };
        PlaneCurveGerm {
            shape,
            polynomial,
            irreducible: true,
        }
    }

    /// Recognizes a catalog curve from its defining polynomial.
    pub fn from_polynomial(f: &Polynomial) -> Result<Self, ResolutionError> {
        if f.is_zero() {
            return Err(ResolutionError::ZeroPolynomial);
        }
        if f.0.contains_key(&(0, 0)) {
            return Err(ResolutionError::NotThroughOrigin);
        }
        let terms: Vec<(&(u32, u32), &Rat)> = f.terms().collect();
        let unsupported = || ResolutionError::UnsupportedGerm(format_poly(f));
        match terms.as_slice() {
            [(&(1, 0), _)] => Ok(Self::axis_z()),
            [(&(0, 1), _)] => Ok(Self::axis_w()),
            // ascending key order puts the pure w-power first
            [(&(0, q), cw), (&(p, 0), cz)] => {
                let lambda = -((*cw).clone() / (*cz).clone());
                Self::binomial(p, q, lambda).map_err(|_| unsupported())
            }
            _ => Err(unsupported()),
        }
    }

    /// Primitive ray of the toric divisor this curve lives on, or for
    /// binomials, the ray whose divisor its strict transform meets.
    pub fn ray(&self) -> [i64; 2] {
        match &self.shape {
            CurveShape::AxisZ => [1, 0],
            CurveShape::AxisW => [0, 1],
            CurveShape::Binomial { p, q, .. } => [*q as i64, *p as i64],
        }
    }

    pub fn is_axis(&self) -> bool {
        !matches!(self.shape, CurveShape::Binomial { .. })
    }

    /// `ord_C(z^i w^j)`.
    pub fn monomial_order(&self, i: u32, j: u32) -> u32 {
        match self.shape {
            CurveShape::AxisZ => i,
            CurveShape::AxisW => j,
            CurveShape::Binomial { .. } => 0,
        }
    }

    /// Vanishing order of `f` along the curve, by repeated exact division.
    pub fn polynomial_order(&self, f: &Polynomial) -> Option<u32> {
        if f.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut g = f.clone();
        while let Some(q) = g.divide_exact(&self.polynomial) {
            g = q;
            k += 1;
        }
        Some(k)
    }

    pub fn name(&self) -> String {
        match &self.shape {
            CurveShape::AxisZ => "{z=0}".into(),
            CurveShape::AxisW => "{w=0}".into(),
            CurveShape::Binomial { p, q, lambda } => {
                let coeff = if *lambda == 1 { String::new() } else { format!("({lambda})") };
                format!("{{z^{p}={coeff}w^{q}}}")
            }
        }
    }
}

pub(crate) fn format_poly(f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.terms()
        .map(|((i, j), c)| format!("({c})z^{i}w^{j}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Catalog entry addressable by name, as read from input documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    AxisZ,
    AxisW,
    /// Both axes: `{zw = 0}`.
    Node,
    Line { slope: Rat },
    Cusp { p: u32, q: u32 },
    Binomial { p: u32, q: u32, lambda: Rat },
    Polynomial { terms: Vec<PolyTerm> },
}

impl CurveSpec {
    /// Irreducible components, each with multiplicity.
    pub fn components(&self) -> Result<Vec<(PlaneCurveGerm, u32)>, ResolutionError> {
        Ok(match self {
            CurveSpec::AxisZ => vec![(PlaneCurveGerm::axis_z(), 1)],
            CurveSpec::AxisW => vec![(PlaneCurveGerm::axis_w(), 1)],
            CurveSpec::Node => vec![(PlaneCurveGerm::axis_z(), 1), (PlaneCurveGerm::axis_w(), 1)],
            CurveSpec::Line { slope } => vec![(PlaneCurveGerm::line(slope.clone())?, 1)],
            CurveSpec::Cusp { p, q } => vec![(PlaneCurveGerm::cusp(*p, *q)?, 1)],
            CurveSpec::Binomial { p, q, lambda } => {
                vec![(PlaneCurveGerm::binomial(*p, *q, lambda.clone())?, 1)]
            }
            CurveSpec::Polynomial { terms } => {
                let f = Polynomial::from_terms(
                    terms
                        .iter()
                        .map(|t| ((t.exponent[0], t.exponent[1]), t.coefficient.clone())),
                );
                // a monomial z^a w^b splits into the axes
                let ts: Vec<_> = f.terms().collect();
                if let [(&(a, b), _)] = ts.as_slice() {
                    if a + b == 0 {
                        return Err(ResolutionError::NotThroughOrigin);
                    }
                    let mut out = Vec::new();
                    if a > 0 {
                        out.push((PlaneCurveGerm::axis_z(), a));
                    }
                    if b > 0 {
                        out.push((PlaneCurveGerm::axis_w(), b));
                    }
                    out
                } else {
                    vec![(PlaneCurveGerm::from_polynomial(&f)?, 1)]
                }
            }
        })
    }
}

/// Effective Q-divisor germ `Σ c_k C_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QDivisorGerm {
    components: Vec<(PlaneCurveGerm, Rat)>,
}

impl QDivisorGerm {
    pub fn zero() -> Self {
        QDivisorGerm { components: vec![] }
    }

    /// Builds the divisor, merging repeated curves.
    pub fn new(components: Vec<(PlaneCurveGerm, Rat)>) -> Result<Self, ResolutionError> {
        let mut merged: Vec<(PlaneCurveGerm, Rat)> = Vec::new();
        for (c, a) in components {
            if a.is_negative() {
                return Err(ResolutionError::NegativeCoefficient(a));
            }
            match merged.iter_mut().find(|(d, _)| *d == c) {
                Some(slot) => slot.1 += a,
                None => merged.push((c, a)),
            }
        }
        Ok(QDivisorGerm { components: merged })
    }

    pub fn single(c: PlaneCurveGerm, coefficient: Rat) -> Result<Self, ResolutionError> {
        Self::new(vec![(c, coefficient)])
    }

    pub fn from_specs(specs: &[(CurveSpec, Rat)]) -> Result<Self, ResolutionError> {
        let mut comps = Vec::new();
        for (s, a) in specs {
            for (c, mult) in s.components()? {
                comps.push((c, a * &Rat::from_int(mult as i64)));
            }
        }
        Self::new(comps)
    }

    pub fn components(&self) -> &[(PlaneCurveGerm, Rat)] {
        &self.components
    }

    pub fn curves(&self) -> Vec<PlaneCurveGerm> {
        self.components.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn coefficients(&self) -> Vec<Rat> {
        self.components.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn scaled(&self, c: &Rat) -> QDivisorGerm {
        QDivisorGerm {
            components: self
                .components
                .iter()
                .map(|(k, a)| (k.clone(), a * c))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn catalog_recognition() {
        let cusp = Polynomial::from_terms([((2, 0), rat(1, 1)), ((0, 3), rat(-1, 1))]);
        assert_eq!(PlaneCurveGerm::from_polynomial(&cusp).unwrap(), PlaneCurveGerm::cusp(2, 3).unwrap());
        let zw2 = Polynomial::from_terms([((2, 0), rat(1, 1)), ((0, 4), rat(-1, 1))]);
        assert!(PlaneCurveGerm::from_polynomial(&zw2).is_err());
        let three = Polynomial::from_terms([((1, 0), rat(1, 1)), ((0, 2), rat(1, 1)), ((1, 1), rat(1, 1))]);
        assert!(matches!(
            PlaneCurveGerm::from_polynomial(&three),
            Err(ResolutionError::UnsupportedGerm(_))
        ));
        let unit = Polynomial::from_terms([((0, 0), rat(1, 1)), ((1, 0), rat(1, 1))]);
        assert_eq!(PlaneCurveGerm::from_polynomial(&unit), Err(ResolutionError::NotThroughOrigin));
    }

    #[test]
    fn exact_division() {
        let cusp = PlaneCurveGerm::cusp(2, 3).unwrap();
        let f = cusp.polynomial.pow(2).mul(&Polynomial::monomial(1, 1));
        assert_eq!(cusp.polynomial_order(&f), Some(2));
        assert_eq!(cusp.polynomial_order(&Polynomial::monomial(4, 4)), Some(0));
        let zw = Polynomial::monomial(1, 1);
        assert_eq!(
            Polynomial::monomial(3, 2).divide_exact(&zw),
            Some(Polynomial::monomial(2, 1))
        );
        assert_eq!(Polynomial::monomial(3, 0).divide_exact(&zw), None);
    }
}
