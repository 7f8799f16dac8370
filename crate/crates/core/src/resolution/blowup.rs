//! Point blowups over the origin of `C²`.
//!
//! Blowups at torus-fixed points are tracked through the fan: rays
//! `(1,0) = {z=0}` to `(0,1) = {w=0}` with consecutive rays spanning
//! unimodular cones, and blowing up a cone's fixed point inserts the sum of
//! its rays. Blowups elsewhere (a general point of an exceptional curve,
//! the point where a curve's strict transform crosses one, or a crossing
//! created by earlier such blowups) produce "free" divisors that the fan
//! does not see.
//!
//! The ledger stores, for every exceptional divisor `E`, the valuation of
//! `z` and `w` along `E`, `ord_E(π*C)` for every curve `C` of the
//! configuration, and the discrepancy `a(E)`. All three are filled in by
//! the recursions over the divisors through the blown-up point.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::curve::{CurveShape, PlaneCurveGerm};
use super::ResolutionError;

fn det(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// A prime divisor of the blown-up surface that may carry conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorId {
    /// Toric divisor of a primitive ray.
    Ray([i64; 2]),
    /// The `k`-th non-toric exceptional divisor.
    Free(usize),
}

impl fmt::Display for DivisorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorId::Ray([a, b]) => write!(f, "E({a},{b})"),
            DivisorId::Free(k) => write!(f, "F{k}"),
        }
    }
}

/// A point to blow up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Center {
    /// Fixed point of the cone spanned by two consecutive rays.
    Toric { left: [i64; 2], right: [i64; 2] },
    /// A general point of an exceptional divisor.
    Generic { divisor: DivisorId },
    /// Where the strict transform of curve `curve` meets the exceptional set.
    CurveMeets { curve: usize },
    /// A non-toric crossing of two exceptional divisors.
    Crossing { first: DivisorId, second: DivisorId },
}

/// Ledger entry of one exceptional divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalRecord {
    pub id: DivisorId,
    pub center: Center,
    /// Exceptional divisors through the center.
    pub through: Vec<DivisorId>,
    /// `(ord_E z, ord_E w)`; `ord_E(z^i w^j)` is the dot product.
    pub monomial_valuation: [i64; 2],
    /// `ord_E(π*C)` per curve.
    pub curve_orders: Vec<i64>,
    /// `mult_center` of each curve's strict transform.
    pub center_multiplicities: Vec<i64>,
    pub discrepancy: i64,
}

/// Local shape of a binomial's strict transform at a torus-fixed point:
/// `x^a = μ y^b`, where `{x=0}` is the left ray's divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LocalBranch {
    a: i64,
    b: i64,
}

impl LocalBranch {
    fn multiplicity(self) -> i64 {
        self.a.min(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tangent {
    Left,
    Right,
    Slope(usize),
}

/// Why a torus-fixed point is not simple normal crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SncDefect {
    pub left: [i64; 2],
    pub right: [i64; 2],
    pub reason: String,
}

/// A tree of point blowups together with its ledgers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupSequence {
    curves: Vec<PlaneCurveGerm>,
    fan: Vec<[i64; 2]>,
    records: Vec<ExceptionalRecord>,
    /// Where each released binomial currently meets the exceptional set.
    curve_ends: Vec<Option<DivisorId>>,
    crossings: BTreeSet<(DivisorId, DivisorId)>,
    free_count: usize,
}

impl BlowupSequence {
    /// The identity: no blowups over the configuration `curves`.
    pub fn new(curves: Vec<PlaneCurveGerm>) -> Self {
        let n = curves.len();
        BlowupSequence {
            curves,
            fan: vec![[1, 0], [0, 1]],
            records: vec![],
            curve_ends: vec![None; n],
            crossings: BTreeSet::new(),
            free_count: 0,
        }
    }

    pub fn curves(&self) -> &[PlaneCurveGerm] {
        &self.curves
    }

    pub fn fan(&self) -> &[[i64; 2]] {
        &self.fan
    }

    pub fn records(&self) -> &[ExceptionalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(&self, id: DivisorId) -> Option<&ExceptionalRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    fn is_exceptional(&self, id: DivisorId) -> bool {
        self.record(id).is_some()
    }

    /// Whether the toric divisor of `ray` is part of the configuration.
    fn counts(&self, ray: [i64; 2]) -> bool {
        self.is_exceptional(DivisorId::Ray(ray))
            || self.curves.iter().any(|c| c.is_axis() && c.ray() == ray)
    }

    fn branch(&self, curve: usize, left: [i64; 2], right: [i64; 2]) -> Option<LocalBranch> {
        let c = &self.curves[curve];
        let CurveShape::Binomial { p, q, .. } = c.shape else {
            return None;
        };
        let rho = c.ray();
        if det(left, rho) <= 0 || det(rho, right) <= 0 {
            return None;
        }
        // z = x^{l0} y^{r0}, w = x^{l1} y^{r1}
        let (p, q) = (p as i64, q as i64);
        Some(LocalBranch {
            a: (p * left[0] - q * left[1]).abs(),
            b: (p * right[0] - q * right[1]).abs(),
        })
    }

    fn tangent(&self, curve: usize, br: LocalBranch) -> Tangent {
        match (br.a, br.b) {
            (1, 1) => Tangent::Slope(curve),
            (1, _) => Tangent::Left,
            _ => Tangent::Right,
        }
    }

    /// Consecutive ray pairs of the fan.
    pub fn toric_points(&self) -> Vec<([i64; 2], [i64; 2])> {
        self.fan.windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn snc_defect_at(&self, left: [i64; 2], right: [i64; 2]) -> Option<String> {
        let mut count = self.counts(left) as usize + self.counts(right) as usize;
        let mut tangents = Vec::new();
        for k in 0..self.curves.len() {
            let Some(br) = self.branch(k, left, right) else {
                continue;
            };
            count += 1;
            if br.multiplicity() > 1 {
                return Some(format!("{} is singular here", self.curves[k].name()));
            }
            let t = self.tangent(k, br);
            if t == Tangent::Left && self.counts(left) {
                return Some(format!("{} is tangent to E{:?}", self.curves[k].name(), left));
            }
            if t == Tangent::Right && self.counts(right) {
                return Some(format!("{} is tangent to E{:?}", self.curves[k].name(), right));
            }
            tangents.push(t);
        }
        if count > 2 {
            return Some(format!("{count} components meet"));
        }
        if tangents.len() == 2 && tangents[0] == tangents[1] {
            return Some("two curves are tangent".into());
        }
        None
    }

    /// Torus-fixed points where the configuration fails to be SNC. Every
    /// other point is SNC by construction: released binomials cross their
    /// divisor transversally, and free crossings are transverse.
    pub fn snc_defects(&self) -> Vec<SncDefect> {
        self.toric_points()
            .into_iter()
            .filter_map(|(left, right)| {
                self.snc_defect_at(left, right).map(|reason| SncDefect { left, right, reason })
            })
            .collect()
    }

    pub fn is_snc(&self) -> bool {
        self.snc_defects().is_empty()
    }

    /// Every center [`blow_up`](Self::blow_up) currently accepts.
    pub fn available_centers(&self) -> Vec<Center> {
        let mut out: Vec<Center> = self
            .toric_points()
            .into_iter()
            .map(|(left, right)| Center::Toric { left, right })
            .collect();
        out.extend(self.records.iter().map(|r| Center::Generic { divisor: r.id }));
        out.extend(
            self.curve_ends
                .iter()
                .enumerate()
                .filter(|(_, e)| e.is_some())
                .map(|(curve, _)| Center::CurveMeets { curve }),
        );
        out.extend(
            self.crossings
                .iter()
                .map(|&(first, second)| Center::Crossing { first, second }),
        );
        out
    }

    fn monomial_valuation(&self, id: DivisorId) -> [i64; 2] {
        match self.record(id) {
            Some(r) => r.monomial_valuation,
            None => match id {
                DivisorId::Ray(r) => r,
                DivisorId::Free(_) => unreachable!("free divisors are always recorded"),
            },
        }
    }

    /// Blows up `center`, returning the new divisor.
    pub fn blow_up(&mut self, center: Center) -> Result<DivisorId, ResolutionError> {
        let invalid = |why: &str| ResolutionError::InvalidCenter(format!("{center:?}: {why}"));
        let n = self.curves.len();
        // (through, mult of each strict transform at the center, monomial valuation)
        let (through, mults, monomial): (Vec<DivisorId>, Vec<i64>, [i64; 2]) = match &center {
            Center::Toric { left, right } => {
                let pos = self
                    .fan
                    .windows(2)
                    .position(|w| w[0] == *left && w[1] == *right)
                    .ok_or_else(|| invalid("not a pair of consecutive rays"))?;
                let mults = (0..n)
                    .map(|k| {
                        let c = &self.curves[k];
                        if c.is_axis() {
                            (c.ray() == *left || c.ray() == *right) as i64
                        } else {
                            self.branch(k, *left, *right).map_or(0, LocalBranch::multiplicity)
                        }
                    })
                    .collect();
                let through = [*left, *right]
                    .into_iter()
                    .map(DivisorId::Ray)
                    .filter(|d| self.is_exceptional(*d))
                    .collect();
                let new = [left[0] + right[0], left[1] + right[1]];
                self.fan.insert(pos + 1, new);
                (through, mults, new)
            }
            Center::Generic { divisor } => {
                if !self.is_exceptional(*divisor) {
                    return Err(invalid("not an exceptional divisor"));
                }
                (vec![*divisor], vec![0; n], self.monomial_valuation(*divisor))
            }
            Center::CurveMeets { curve } => {
                let d = self
                    .curve_ends
                    .get(*curve)
                    .copied()
                    .flatten()
                    .ok_or_else(|| invalid("curve does not yet meet the exceptional set transversally"))?;
                let mut mults = vec![0; n];
                mults[*curve] = 1;
                (vec![d], mults, self.monomial_valuation(d))
            }
            Center::Crossing { first, second } => {
                let key = ordered(*first, *second);
                if !self.crossings.contains(&key) {
                    return Err(invalid("no such non-toric crossing"));
                }
                let a = self.monomial_valuation(*first);
                let b = self.monomial_valuation(*second);
                (vec![*first, *second], vec![0; n], [a[0] + b[0], a[1] + b[1]])
            }
        };

        let curve_orders: Vec<i64> = (0..n)
            .map(|k| {
                mults[k]
                    + through
                        .iter()
                        .map(|d| self.record(*d).unwrap().curve_orders[k])
                        .sum::<i64>()
            })
            .collect();
        let discrepancy = 1 + through
            .iter()
            .map(|d| self.record(*d).unwrap().discrepancy)
            .sum::<i64>();

        let id = match &center {
            Center::Toric { .. } => DivisorId::Ray(monomial),
            _ => {
                self.free_count += 1;
                DivisorId::Free(self.free_count - 1)
            }
        };
        match &center {
            Center::Toric { .. } => {
                for (k, c) in self.curves.iter().enumerate() {
                    if !c.is_axis() && c.ray() == monomial {
                        self.curve_ends[k] = Some(id);
                    }
                }
            }
            Center::Generic { divisor } => {
                self.crossings.insert(ordered(id, *divisor));
            }
            Center::CurveMeets { curve } => {
                let d = self.curve_ends[*curve].unwrap();
                self.crossings.insert(ordered(id, d));
                self.curve_ends[*curve] = Some(id);
            }
            Center::Crossing { first, second } => {
                self.crossings.remove(&ordered(*first, *second));
                self.crossings.insert(ordered(id, *first));
                self.crossings.insert(ordered(id, *second));
            }
        }
        self.records.push(ExceptionalRecord {
            id,
            center,
            through,
            monomial_valuation: monomial,
            curve_orders,
            center_multiplicities: mults,
            discrepancy,
        });
        Ok(id)
    }

    /// Replays the recorded centers from scratch and compares ledgers.
    pub fn replay_matches(&self) -> bool {
        let mut fresh = BlowupSequence::new(self.curves.clone());
        for r in &self.records {
            if fresh.blow_up(r.center.clone()).is_err() {
                return false;
            }
        }
        fresh == *self
    }
}

fn ordered(a: DivisorId, b: DivisorId) -> (DivisorId, DivisorId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Toric blowups at non-SNC fixed points until none remain.
pub fn log_resolve_curves(curves: Vec<PlaneCurveGerm>) -> BlowupSequence {
    let mut s = BlowupSequence::new(curves);
    while let Some(d) = s.snc_defects().into_iter().next() {
        s.blow_up(Center::Toric {
            left: d.left,
            right: d.right,
        })
        .expect("defects sit at toric points");
    }
    s
}
