//! Multiplier-type ideals `π_*(ω(-⌊π*A⌋))` on the germ of `C²` at the
//! origin, computed through explicit point blowups.

pub mod blowup;
pub mod curve;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::Rat;
pub use blowup::{log_resolve_curves, BlowupSequence, Center, DivisorId, ExceptionalRecord, SncDefect};
pub use curve::{CurveShape, CurveSpec, PlaneCurveGerm, PolyTerm, Polynomial, QDivisorGerm};

/// Largest total degree listed by default in membership tables.
pub const DEFAULT_DEGREE: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolutionError {
    #[error("curve outside the supported catalog: {0}")]
    UnsupportedGerm(String),
    #[error("polynomial does not vanish at the origin")]
    NotThroughOrigin,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("negative coefficient {0}")]
    NegativeCoefficient(Rat),
    #[error("invalid center {0}")]
    InvalidCenter(String),
    #[error("blowup sequence is built over different curves than the divisor")]
    CurveMismatch,
    #[error("configuration is not simple normal crossing: {0}")]
    NotResolved(String),
}

/// Log resolution of the support of `A`.
pub fn log_resolve(a: &QDivisorGerm) -> BlowupSequence {
    log_resolve_curves(a.curves())
}

/// `ord_D(f) ≥ bound`, with `ord_D(z^i w^j) = weights · (i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub divisor: String,
    pub exceptional: bool,
    pub weights: [i64; 2],
    /// `⌊ord_D π*A⌋` before subtracting the discrepancy.
    pub floor_order: i64,
    pub discrepancy: i64,
    pub bound: i64,
}

impl Condition {
    pub fn admits(&self, i: u32, j: u32) -> bool {
        self.weights[0] * i as i64 + self.weights[1] * j as i64 >= self.bound
    }
}

/// Valuative description of the pushed-forward ideal plus its monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PushforwardIdeal {
    pub conditions: Vec<Condition>,
    pub degree_bound: u32,
    /// Monomials `z^i w^j` with `i + j ≤ degree_bound` in the ideal.
    pub table: BTreeSet<(u32, u32)>,
    /// Minimal elements of the table under divisibility.
    pub generators: Vec<(u32, u32)>,
}

impl PushforwardIdeal {
    pub fn is_unit(&self) -> bool {
        self.table.contains(&(0, 0))
    }

    /// Membership of a polynomial. Exceptional valuations are evaluated as
    /// monomial valuations on what remains after dividing out the curves
    /// of the configuration; this is exact when that cofactor's strict
    /// transform avoids the non-toric centers.
    pub fn contains(&self, seq: &BlowupSequence, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        let mut rest = f.clone();
        let mut powers = vec![0i64; seq.curves().len()];
        for (k, c) in seq.curves().iter().enumerate() {
            while let Some(q) = rest.divide_exact(&c.polynomial) {
                rest = q;
                powers[k] += 1;
            }
        }
        let monomial_min = |w: [i64; 2]| {
            rest.terms()
                .map(|((i, j), _)| w[0] * *i as i64 + w[1] * *j as i64)
                .min()
                .unwrap_or(0)
        };
        self.conditions.iter().all(|cond| {
            let from_curves: i64 = if cond.exceptional {
                let r = seq
                    .records()
                    .iter()
                    .find(|r| r.id.to_string() == cond.divisor)
                    .expect("condition names a recorded divisor");
                powers.iter().zip(&r.curve_orders).map(|(p, o)| p * o).sum()
            } else {
                let k = seq
                    .curves()
                    .iter()
                    .position(|c| c.name() == cond.divisor)
                    .expect("condition names a curve");
                powers[k]
            };
            from_curves + monomial_min(cond.weights) >= cond.bound
        })
    }
}

fn strict_weights(c: &PlaneCurveGerm) -> [i64; 2] {
    match c.shape {
        CurveShape::AxisZ => [1, 0],
        CurveShape::AxisW => [0, 1],
        CurveShape::Binomial { .. } => [0, 0],
    }
}

/// Conditions and monomial table of `π_*(ω_{X̃}(-⌊π*A⌋))`, with `ω`
/// factored out.
pub fn pushforward_ideal(
    seq: &BlowupSequence,
    a: &QDivisorGerm,
    degree_bound: u32,
) -> Result<PushforwardIdeal, ResolutionError> {
    if seq.curves() != a.curves().as_slice() {
        return Err(ResolutionError::CurveMismatch);
    }
    let coeffs = a.coefficients();
    let mut conditions = Vec::new();
    for r in seq.records() {
        let order: Rat = r
            .curve_orders
            .iter()
            .zip(&coeffs)
            .map(|(o, c)| c * &Rat::from_int(*o))
            .sum();
        let floor_order = order.floor_i64();
        conditions.push(Condition {
            divisor: r.id.to_string(),
            exceptional: true,
            weights: r.monomial_valuation,
            floor_order,
            discrepancy: r.discrepancy,
            bound: floor_order - r.discrepancy,
        });
    }
    for (c, coeff) in a.components() {
        let floor_order = coeff.floor_i64();
        conditions.push(Condition {
            divisor: c.name(),
            exceptional: false,
            weights: strict_weights(c),
            floor_order,
            discrepancy: 0,
            bound: floor_order,
        });
    }
    let mut table = BTreeSet::new();
    for total in 0..=degree_bound {
        for i in 0..=total {
            let j = total - i;
            if conditions.iter().all(|c| c.admits(i, j)) {
                table.insert((i, j));
            }
        }
    }
    let generators = table
        .iter()
        .filter(|&&(i, j)| {
            !(i > 0 && table.contains(&(i - 1, j))) && !(j > 0 && table.contains(&(i, j - 1)))
        })
        .cloned()
        .collect();
    Ok(PushforwardIdeal {
        conditions,
        degree_bound,
        table,
        generators,
    })
}

/// Whether two resolutions of `A` give the same monomial table.
pub fn resolution_independence(
    a: &QDivisorGerm,
    s1: &BlowupSequence,
    s2: &BlowupSequence,
    degree_bound: u32,
) -> Result<bool, ResolutionError> {
    for s in [s1, s2] {
        if let Some(d) = s.snc_defects().first() {
            return Err(ResolutionError::NotResolved(d.reason.clone()));
        }
    }
    Ok(pushforward_ideal(s1, a, degree_bound)?.table == pushforward_ideal(s2, a, degree_bound)?.table)
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpEntry {
    pub c: Rat,
    pub table: BTreeSet<(u32, u32)>,
    pub generators: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpScan {
    pub entries: Vec<JumpEntry>,
    /// Grid values whose table differs from the previous grid value's.
    pub changes: Vec<Rat>,
}

/// Tables of `c·A` over a grid of `c` values, on one fixed resolution.
pub fn jumping_scan(a: &QDivisorGerm, grid: &[Rat], degree_bound: u32) -> Result<JumpScan, ResolutionError> {
    let seq = log_resolve(a);
    let mut entries: Vec<JumpEntry> = Vec::new();
    let mut changes = Vec::new();
    for c in grid {
        let ideal = pushforward_ideal(&seq, &a.scaled(c), degree_bound)?;
        if let Some(prev) = entries.last() {
            if prev.table != ideal.table {
                changes.push(c.clone());
            }
        }
        entries.push(JumpEntry {
            c: c.clone(),
            table: ideal.table,
            generators: ideal.generators,
        });
    }
    Ok(JumpScan { entries, changes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn cusp(c: Rat) -> QDivisorGerm {
        QDivisorGerm::single(PlaneCurveGerm::cusp(2, 3).unwrap(), c).unwrap()
    }

    #[test]
    fn half_axis_is_unit() {
        let a = QDivisorGerm::single(PlaneCurveGerm::axis_z(), rat(1, 2)).unwrap();
        let s = log_resolve(&a);
        assert!(s.is_empty());
        assert!(pushforward_ideal(&s, &a, 12).unwrap().is_unit());
    }

    #[test]
    fn cusp_thresholds() {
        let a = cusp(rat(4, 5));
        let s = log_resolve(&a);
        assert!(pushforward_ideal(&s, &a, 12).unwrap().is_unit());
        let a = cusp(rat(5, 6));
        let ideal = pushforward_ideal(&s, &a, 12).unwrap();
        assert!(!ideal.is_unit());
        assert_eq!(ideal.generators, vec![(0, 1), (1, 0)]);
        assert_eq!(ideal.table.len(), (1..=12).map(|d| d + 1).sum::<usize>());
    }

    #[test]
    fn scans() {
        let grid: Vec<Rat> = (1..=6).map(|k| rat(k, 6)).collect();
        let scan = jumping_scan(&cusp(Rat::one()), &grid, 12).unwrap();
        assert_eq!(scan.changes.first(), Some(&rat(5, 6)));
        let axis = QDivisorGerm::single(PlaneCurveGerm::axis_z(), Rat::one()).unwrap();
        let scan = jumping_scan(&axis, &[rat(1, 2), rat(1, 1), rat(3, 2)], 12).unwrap();
        assert_eq!(scan.changes, vec![rat(1, 1)]);
        let node = QDivisorGerm::from_specs(&[(CurveSpec::Node, Rat::one())]).unwrap();
        let scan = jumping_scan(&node, &[rat(1, 2), rat(1, 1)], 12).unwrap();
        assert_eq!(scan.changes, vec![rat(1, 1)]);
    }

    #[test]
    fn independence_under_extra_blowups() {
        let a = cusp(rat(5, 6));
        let s = log_resolve(&a);
        for center in s.available_centers() {
            let mut t = s.clone();
            t.blow_up(center).unwrap();
            assert!(resolution_independence(&a, &s, &t, 12).unwrap());
        }
        let zero = QDivisorGerm::zero();
        let s = log_resolve(&zero);
        assert!(pushforward_ideal(&s, &zero, 12).unwrap().is_unit());
    }

    #[test]
    fn polynomial_membership() {
        let a = cusp(rat(11, 6));
        let s = log_resolve(&a);
        let ideal = pushforward_ideal(&s, &a, 12).unwrap();
        assert!(ideal.table.is_empty());
        let f = a.curves()[0].polynomial.mul(&Polynomial::monomial(1, 0));
        assert!(ideal.contains(&s, &f));
        assert!(!ideal.contains(&s, &a.curves()[0].polynomial));
    }
}
