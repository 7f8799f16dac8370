//! Local generators of the twisted S-sheaf in the log smooth case.
//!
//! `R_X(V) = V_{>-1} ∩ j_* S(V)` is spanned by the prolonged selector
//! vectors; twisting by `A = Σ (r_i/m) E_i` multiplies generator `j` by
//! `z_i^{⌊-β_{j,i} + r_i/m⌋}` on each axis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Rat, RatVector, Subspace};
use crate::prolongation::{prolong_vectors, LocalMonodromy, ProlongationError, ProlongedBasis};
use crate::weight::{weight_filtration, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SheafError {
    #[error("Hodge numbers sum to {found}, local system has rank {expected}")]
    HodgeRank { expected: usize, found: usize },
    #[error("Hodge type ({p},{q}) does not have weight {weight}")]
    HodgeType { p: i64, q: i64, weight: i64 },
    #[error("S(V) selector is empty")]
    EmptySelector,
    #[error("selector has {found} vectors, dim S(V) = {expected}")]
    SelectorSize { expected: usize, found: usize },
    #[error("selector index {index} out of range for rank {dim}")]
    SelectorIndex { index: usize, dim: usize },
    #[error("selector index {index} repeated")]
    SelectorRepeat { index: usize },
    #[error("selected flat vector e_{index} straddles two monodromy blocks")]
    Straddles { index: usize },
    #[error("twist: coefficient r_{axis} = {value} is negative")]
    NegativeTwist { axis: usize, value: Rat },
    #[error("twist: denominator m must be at least 1")]
    ZeroDenominator,
    #[error("twist has {found} coefficients, expected {expected}")]
    TwistLength { expected: usize, found: usize },
    #[error("generators must be prolonged over the window (-1, ..., -1)")]
    WrongWindow,
    #[error(transparent)]
    Prolongation(#[from] ProlongationError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Limit Hodge data at the boundary point: the Hodge numbers of the fiber
/// and a selector of standard basis vectors `e_k` spanning `S(V)|_0`.
///
/// The selected vectors are taken to be orthogonal for the polarization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeFiberData {
    pub weight: i64,
    /// `(p, q) -> dim V^{p,q}`.
    pub hodge_numbers: BTreeMap<(i64, i64), usize>,
    pub selector: Vec<usize>,
}

impl HodgeFiberData {
    /// Largest `p` with `V^{p, k-p} != 0`.
    pub fn p_max(&self) -> Option<i64> {
        self.hodge_numbers
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&(p, _), _)| p)
            .max()
    }

    pub fn validate(&self, rank: usize) -> Result<(), SheafError> {
        for &(p, q) in self.hodge_numbers.keys() {
            if p + q != self.weight {
                return Err(SheafError::HodgeType {
                    p,
                    q,
                    weight: self.weight,
                });
            }
        }
        let total: usize = self.hodge_numbers.values().sum();
        if total != rank {
            return Err(SheafError::HodgeRank {
                expected: rank,
                found: total,
            });
        }
        if self.selector.is_empty() {
            return Err(SheafError::EmptySelector);
        }
        let top = self
            .p_max()
            .map(|p| self.hodge_numbers[&(p, self.weight - p)])
            .unwrap_or(0);
        if self.selector.len() != top {
            return Err(SheafError::SelectorSize {
                expected: top,
                found: self.selector.len(),
            });
        }
        let mut seen = vec![false; rank];
        for &index in &self.selector {
            if index >= rank {
                return Err(SheafError::SelectorIndex { index, dim: rank });
            }
            if std::mem::replace(&mut seen[index], true) {
                return Err(SheafError::SelectorRepeat { index });
            }
        }
        Ok(())
    }

    pub fn selected_vectors(&self, rank: usize) -> Vec<RatVector> {
        self.selector.iter().map(|&k| unit_vector(rank, k)).collect()
    }
}

fn unit_vector(n: usize, k: usize) -> RatVector {
    (0..n)
        .map(|i| if i == k { Rat::one() } else { Rat::zero() })
        .collect()
}

/// `A = Σ (r_i / m) E_i`, i.e. the `(1/m) D` part of a twist `mL = B + D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistSpec {
    pub r: Vec<Rat>,
    pub m: u64,
}

impl TwistSpec {
    pub fn untwisted(n: usize) -> Self {
        TwistSpec {
            r: vec![Rat::zero(); n],
            m: 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), SheafError> {
        if self.m == 0 {
            return Err(SheafError::ZeroDenominator);
        }
        if self.r.len() != n {
            return Err(SheafError::TwistLength {
                expected: n,
                found: self.r.len(),
            });
        }
        if let Some((axis, value)) = self.r.iter().enumerate().find(|(_, r)| r.is_negative()) {
            return Err(SheafError::NegativeTwist {
                axis,
                value: value.clone(),
            });
        }
        Ok(())
    }

    /// `r_i / m`.
    pub fn weight(&self, axis: usize) -> Rat {
        &self.r[axis] / &Rat::from_int(self.m as i64)
    }
}

/// Frame of `R_X(V)`: the selected flat vectors prolonged over `(-1, 0]`.
pub fn r_lattice(m: &LocalMonodromy, h: &HodgeFiberData) -> Result<ProlongedBasis, SheafError> {
    h.validate(m.dim())?;
    let vectors = h.selected_vectors(m.dim());
    let window = vec![Rat::from_int(-1); m.boundary_count()];
    prolong_vectors(m, &window, &vectors, &h.selector).map_err(|e| match e {
        ProlongationError::Straddles { index } => SheafError::Straddles {
            index: h.selector[index],
        },
        other => other.into(),
    })
}

/// `W_{-1}(N_i) ∩ S(V)|_0 = 0` for every boundary component. Limits of
/// polarized variations always satisfy this; `false` flags input that
/// cannot come from one.
pub fn validate_limit_positivity(
    m: &LocalMonodromy,
    h: &HodgeFiberData,
) -> Result<bool, SheafError> {
    h.validate(m.dim())?;
    let s = Subspace::span(m.dim(), &h.selected_vectors(m.dim())).expect("unit vectors");
    for n in m.nilpotents() {
        let w = weight_filtration(n)?;
        if !w.get(-1).intersect(&s).expect("same ambient").is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `shift[j][i] = ⌊-β_{j,i} + r_i/m⌋`. Ties resolve exactly as the floor
/// dictates: the window for `A` is half-open, `(r_i - 1, r_i]`.
pub fn twisted_exponents(b: &ProlongedBasis, t: &TwistSpec) -> Result<Vec<Vec<i64>>, SheafError> {
    let n = b.boundary_count();
    t.validate(n)?;
    if b.window.iter().any(|a| *a != -1) {
        return Err(SheafError::WrongWindow);
    }
    Ok(b.generators
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| (t.weight(i) - &g.exponents[i]).floor_i64())
                .collect()
        })
        .collect())
}

/// Human- and machine-readable description of one local generator of
/// `S_X(V, -A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorEntry {
    pub label: usize,
    pub vector: RatVector,
    pub block: usize,
    /// Residue exponents of the untwisted frame vector.
    pub base_exponents: Vec<Rat>,
    pub shifts: Vec<i64>,
    /// `base_exponents + shifts`.
    pub exponents: Vec<Rat>,
    /// Axes `i` whose nilpotent acts nontrivially on the vector.
    pub twisted_axes: Vec<usize>,
    pub display: String,
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Deterministic, lossless listing of the twisted generators, in frame order.
pub fn generator_report(b: &ProlongedBasis, t: &TwistSpec) -> Result<Vec<GeneratorEntry>, SheafError> {
    let shifts = twisted_exponents(b, t)?;
    Ok(b.generators
        .iter()
        .zip(shifts)
        .map(|(g, s)| {
            let twisted_axes: Vec<usize> = g
                .twist
                .iter()
                .enumerate()
                .filter(|(_, n)| n.apply(&g.vector).iter().any(|x| !x.is_zero()))
                .map(|(i, _)| i)
                .collect();
            let mut monomial: Vec<String> = s
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, e)| format!("z{}^{}", subscript(i + 1), e))
                .collect();
            if monomial.is_empty() {
                monomial.push("z^0".to_string());
            }
            let mut display = format!("{} · v{}", monomial.join("·"), subscript(g.label + 1));
            if !twisted_axes.is_empty() {
                let terms: Vec<String> = twisted_axes
                    .iter()
                    .map(|&i| format!("log z{}·N{}", subscript(i + 1), subscript(i + 1)))
                    .collect();
                display.push_str(&format!(" · exp({})", terms.join(" + ")));
            }
            GeneratorEntry {
                label: g.label,
                vector: g.vector.clone(),
                block: g.block,
                base_exponents: g.exponents.clone(),
                exponents: g
                    .exponents
                    .iter()
                    .zip(&s)
                    .map(|(e, k)| e + Rat::from_int(*k))
                    .collect(),
                shifts: s,
                twisted_axes,
                display,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, RatMatrix};
    use crate::prolongation::{monodromy_consistency, MonodromyBlock};

    fn trivial(n: usize) -> (LocalMonodromy, HodgeFiberData) {
        let m = LocalMonodromy::unipotent(vec![RatMatrix::zeros(1, 1); n]).unwrap();
        let h = HodgeFiberData {
            weight: 0,
            hodge_numbers: BTreeMap::from([((0, 0), 1)]),
            selector: vec![0],
        };
        (m, h)
    }

    /// Weight-one rank-two orbit, `N e_1 = e_0`; `S(V)` is chosen by index.
    fn tate(selected: usize) -> (LocalMonodromy, HodgeFiberData) {
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let m = LocalMonodromy::unipotent(vec![n]).unwrap();
        let h = HodgeFiberData {
            weight: 1,
            hodge_numbers: BTreeMap::from([((1, 0), 1), ((0, 1), 1)]),
            selector: vec![selected],
        };
        (m, h)
    }

    #[test]
    fn trivial_vhs_lattice() {
        let (m, h) = trivial(1);
        let b = r_lattice(&m, &h).unwrap();
        assert_eq!(b.rank(), 1);
        assert_eq!(b.generators[0].exponents, vec![rat(0, 1)]);
        assert!(monodromy_consistency(&b, &m));
    }

    #[test]
    fn orbit_lattice_carries_twist() {
        let (m, h) = tate(1);
        let b = r_lattice(&m, &h).unwrap();
        assert_eq!(b.generators[0].exponents, vec![rat(0, 1)]);
        let report = generator_report(&b, &TwistSpec::untwisted(1)).unwrap();
        assert_eq!(report[0].twisted_axes, vec![0]);
        assert_eq!(report[0].display, "z^0 · v₂ · exp(log z₁·N₁)");
    }

    #[test]
    fn empty_selector_rejected() {
        let (m, mut h) = trivial(1);
        h.selector.clear();
        assert_eq!(r_lattice(&m, &h).unwrap_err(), SheafError::EmptySelector);
    }

    #[test]
    fn straddling_selector_rejected() {
        // blocks span{e0 + e1} and span{e1}; e0 lies in neither
        let m = LocalMonodromy::new(
            2,
            vec![
                MonodromyBlock {
                    alpha: vec![Rat::zero()],
                    space: Subspace::span(2, &[vec![rat(1, 1), rat(1, 1)]]).unwrap(),
                },
                MonodromyBlock {
                    alpha: vec![rat(-1, 2)],
                    space: Subspace::span(2, &[vec![rat(0, 1), rat(1, 1)]]).unwrap(),
                },
            ],
            vec![RatMatrix::zeros(2, 2)],
        )
        .unwrap();
        let h = HodgeFiberData {
            weight: 0,
            hodge_numbers: BTreeMap::from([((0, 0), 2)]),
            selector: vec![0, 1],
        };
        assert_eq!(r_lattice(&m, &h).unwrap_err(), SheafError::Straddles { index: 0 });
    }

    #[test]
    fn limit_positivity() {
        let (m, h) = trivial(1);
        assert!(validate_limit_positivity(&m, &h).unwrap());
        // im N = span{e0} = W_{-1}
        let (m, h) = tate(0);
        assert!(!validate_limit_positivity(&m, &h).unwrap());
        let (m, h) = tate(1);
        assert!(validate_limit_positivity(&m, &h).unwrap());
    }

    #[test]
    fn floor_shifts() {
        let (m, h) = trivial(2);
        let b = r_lattice(&m, &h).unwrap();
        assert_eq!(
            twisted_exponents(&b, &TwistSpec::untwisted(2)).unwrap(),
            vec![vec![0, 0]]
        );
        let t = TwistSpec {
            r: vec![rat(5, 6), rat(3, 2)],
            m: 1,
        };
        assert_eq!(twisted_exponents(&b, &t).unwrap(), vec![vec![0, 1]]);
        assert_eq!(generator_report(&b, &t).unwrap()[0].display, "z₂^1 · v₁");
        assert_eq!(
            generator_report(&b, &TwistSpec::untwisted(2)).unwrap()[0].display,
            "z^0 · v₁"
        );
    }

    #[test]
    fn half_exponent_shift() {
        let m = LocalMonodromy::new(
            1,
            vec![MonodromyBlock {
                alpha: vec![rat(-1, 2)],
                space: Subspace::full(1),
            }],
            vec![RatMatrix::zeros(1, 1)],
        )
        .unwrap();
        let (_, h) = trivial(1);
        let b = r_lattice(&m, &h).unwrap();
        let t = TwistSpec {
            r: vec![rat(1, 1)],
            m: 2,
        };
        assert_eq!(twisted_exponents(&b, &t).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn twist_validation() {
        let (m, h) = trivial(1);
        let b = r_lattice(&m, &h).unwrap();
        let bad = TwistSpec {
            r: vec![rat(-1, 2)],
            m: 1,
        };
        assert!(matches!(
            twisted_exponents(&b, &bad),
            Err(SheafError::NegativeTwist { .. })
        ));
        let bad = TwistSpec { r: vec![rat(1, 2)], m: 0 };
        assert_eq!(twisted_exponents(&b, &bad).unwrap_err(), SheafError::ZeroDenominator);
    }
}
