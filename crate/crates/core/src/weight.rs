//! Monodromy weight filtrations of nilpotent operators, centered at 0.
//!
//! For nilpotent `N` the filtration is the unique increasing filtration with
//! `N W_l ⊆ W_{l-2}` and `N^l : Gr_l -> Gr_{-l}` an isomorphism for `l >= 0`.
//! It is computed from kernels and images of powers of `N`:
//!
//! ```text
//! W_l = sum_{j >= max(0, -l)} ker N^{l+j+1} ∩ im N^j
//! ```
//!
//! On a Jordan block `e_1 <- e_2 <- ... <- e_s` this puts `e_i` in level
//! `2i - s - 1`, and the formula is additive over Jordan blocks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{image, kernel, AlgebraError, RatMatrix, RatVector, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("operator is not nilpotent (N^{dim} != 0)")]
    NotNilpotent { dim: usize },
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("operator {index} is not square or has dimension {found}, expected {expected}")]
    Shape {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty operator list")]
    Empty,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Increasing filtration `W_l` of Q^n with bounded support: `W_l = 0` for
/// `l < lo` and `W_l = Q^n` for `l >= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    ambient: usize,
    lo: i64,
    levels: Vec<Subspace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationLevel {
    pub level: i64,
    pub dim: usize,
    pub basis: Vec<RatVector>,
}

impl Filtration {
    /// Builds a filtration from the explicit levels `lo, lo+1, ...`.
    pub fn from_levels(ambient: usize, lo: i64, levels: Vec<Subspace>) -> Self {
        let mut f = Filtration {
            ambient,
            lo,
            levels,
        };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.levels.first().is_some_and(Subspace::is_zero) {
            self.levels.remove(0);
            self.lo += 1;
        }
        while self.levels.len() >= 2
            && self.levels[self.levels.len() - 2].dim() == self.ambient
        {
            self.levels.pop();
        }
        if self.levels.is_empty() {
            self.levels.push(Subspace::full(self.ambient));
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Lowest level with `W_l != 0`.
    pub fn lowest(&self) -> i64 {
        self.lo
    }

    /// Lowest level with `W_l = Q^n`.
    pub fn highest(&self) -> i64 {
        self.lo + self.levels.len() as i64 - 1
    }

    pub fn get(&self, l: i64) -> Subspace {
        if l < self.lo {
            Subspace::zero(self.ambient)
        } else if l > self.highest() {
            Subspace::full(self.ambient)
        } else {
            self.levels[(l - self.lo) as usize].clone()
        }
    }

    pub fn graded_dim(&self, l: i64) -> usize {
        self.get(l).dim() - self.get(l - 1).dim()
    }

    /// Least level containing `v`.
    pub fn level_of(&self, v: &[crate::algebra::Rat]) -> Result<i64, AlgebraError> {
        for l in self.lo..=self.highest() {
            if self.get(l).contains(v)? {
                return Ok(l);
            }
        }
        Ok(self.highest())
    }

    pub fn describe(&self) -> Vec<FiltrationLevel> {
        (self.lo - 1..=self.highest())
            .map(|l| {
                let w = self.get(l);
                FiltrationLevel {
                    level: l,
                    dim: w.dim(),
                    basis: w.basis().to_vec(),
                }
            })
            .collect()
    }

    /// Checks both defining properties of `W(N)` directly. Returns the first
    /// violated condition as text.
    pub fn check_weight_axioms(&self, n: &RatMatrix) -> Result<(), String> {
        let lo = self.lo - 1;
        let hi = self.highest() + 1;
        for l in lo..=hi {
            if !self.get(l - 1).is_subspace_of(&self.get(l)).map_err(|e| e.to_string())? {
                return Err(format!("W_{} not contained in W_{}", l - 1, l));
            }
            let image = self.get(l).map(n).map_err(|e| e.to_string())?;
            if !image.is_subspace_of(&self.get(l - 2)).map_err(|e| e.to_string())? {
                return Err(format!("N W_{l} not contained in W_{}", l - 2));
            }
        }
        let span = lo.abs().max(hi.abs());
        for l in 0..=span {
            let power = n.pow(l as u32);
            let wl = self.get(l);
            let (top, bottom) = (self.get(-l), self.get(-l - 1));
            // surjective onto Gr_{-l}
            let reached = wl
                .map(&power)
                .and_then(|im| im.sum(&bottom))
                .map_err(|e| e.to_string())?;
            if reached != top {
                return Err(format!("N^{l} W_{l} + W_{} != W_{}", -l - 1, -l));
            }
            // injective on Gr_l
            let kernel_part = wl.preimage_within(&power, &bottom).map_err(|e| e.to_string())?;
            if kernel_part != self.get(l - 1) {
                return Err(format!("N^{l} not injective on Gr_{l}"));
            }
        }
        Ok(())
    }
}

/// `W(N)` for a nilpotent `N`.
pub fn weight_filtration(n: &RatMatrix) -> Result<Filtration, WeightError> {
    if !n.is_square() {
        return Err(WeightError::Shape {
            index: 0,
            expected: n.rows(),
            found: n.cols(),
        });
    }
    let dim = n.rows();
    let Some(order) = n.nilpotency_index() else {
        return Err(WeightError::NotNilpotent { dim });
    };
    let order = order as i64;
    // ker N^a and im N^a for a = 0..=2*order
    let mut kernels = Vec::new();
    let mut images = Vec::new();
    let mut p = RatMatrix::identity(dim);
    for _ in 0..=2 * order {
        kernels.push(kernel(&p));
        images.push(image(&p));
        p = &p * n;
    }
    let ker = |a: i64| kernels[a.min(2 * order) as usize].clone();
    let im = |a: i64| images[a.min(2 * order) as usize].clone();

    let lo = -order;
    let mut levels = Vec::new();
    for l in lo..=order {
        let mut w = Subspace::zero(dim);
        for j in 0.max(-l)..order {
            let exponent = l + j + 1;
            if exponent <= 0 {
                continue;
            }
            w = w.sum(&ker(exponent).intersect(&im(j))?)?;
        }
        levels.push(w);
    }
    Ok(Filtration::from_levels(dim, lo, levels))
}

/// `[W(N_1), W(N_1 + N_2), ..., W(N_1 + ... + N_n)]` for pairwise commuting
/// nilpotent operators.
pub fn relative_weight_sequence(ns: &[RatMatrix]) -> Result<Vec<Filtration>, WeightError> {
    let first = ns.first().ok_or(WeightError::Empty)?;
    let dim = first.rows();
    for (i, n) in ns.iter().enumerate() {
        if n.rows() != dim || n.cols() != dim {
            return Err(WeightError::Shape {
                index: i,
                expected: dim,
                found: if n.rows() != dim { n.rows() } else { n.cols() },
            });
        }
    }
    for i in 0..ns.len() {
        for j in i + 1..ns.len() {
            if !ns[i].commutes_with(&ns[j]) {
                return Err(WeightError::NonCommuting(i, j));
            }
        }
    }
    let mut partial = RatMatrix::zeros(dim, dim);
    ns.iter()
        .map(|n| {
            partial = &partial + n;
            weight_filtration(&partial)
        })
        .collect()
}

/// Deterministic representative of `W_l / W_{l-1}`: the lexicographically
/// first echelon complement of `W_{l-1}` inside `W_l`.
pub fn graded_piece(f: &Filtration, l: i64) -> Subspace {
    let vs = f
        .get(l)
        .complement_of(&f.get(l - 1))
        .expect("levels share the ambient space");
    Subspace::span(f.ambient(), &vs).expect("complement vectors have ambient length")
}

/// Dimensions of all nonzero graded pieces, keyed by level.
pub fn graded_dims(f: &Filtration) -> BTreeMap<i64, usize> {
    (f.lowest()..=f.highest())
        .map(|l| (l, f.graded_dim(l)))
        .filter(|&(_, d)| d > 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rat;

    fn v(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(n, &vs.iter().map(|x| v(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_operator() {
        let f = weight_filtration(&RatMatrix::zeros(3, 3)).unwrap();
        assert_eq!(f.get(-1), Subspace::zero(3));
        assert_eq!(f.get(0), Subspace::full(3));
        assert_eq!(graded_piece(&f, 0), Subspace::full(3));
    }

    #[test]
    fn jordan_block_two() {
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let f = weight_filtration(&n).unwrap();
        let im_n = span(2, &[&[1, 0]]);
        assert_eq!(f.get(-2), Subspace::zero(2));
        assert_eq!(f.get(-1), im_n);
        assert_eq!(f.get(0), im_n);
        assert_eq!(f.get(1), Subspace::full(2));
        assert_eq!(graded_piece(&f, 1).dim(), 1);
        f.check_weight_axioms(&n).unwrap();
    }

    #[test]
    fn jordan_block_three() {
        let n = RatMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let f = weight_filtration(&n).unwrap();
        let im_n2 = span(3, &[&[1, 0, 0]]);
        let im_n = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(f.get(-3), Subspace::zero(3));
        assert_eq!(f.get(-2), im_n2);
        assert_eq!(f.get(-1), im_n2);
        assert_eq!(f.get(0), im_n);
        assert_eq!(f.get(1), im_n);
        assert_eq!(f.get(2), Subspace::full(3));
        assert!(graded_piece(&f, 1).is_zero());
        assert!(graded_piece(&f, -1).is_zero());
        f.check_weight_axioms(&n).unwrap();
    }

    #[test]
    fn not_nilpotent() {
        let e = weight_filtration(&RatMatrix::identity(2)).unwrap_err();
        assert_eq!(e, WeightError::NotNilpotent { dim: 2 });
    }

    #[test]
    fn sequence_of_zeros_and_repeats() {
        let z = RatMatrix::zeros(2, 2);
        let seq = relative_weight_sequence(&[z.clone(), z.clone()]).unwrap();
        for f in &seq {
            assert_eq!(graded_dims(f), BTreeMap::from([(0, 2)]));
        }
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let seq = relative_weight_sequence(&[n, z]).unwrap();
        assert_eq!(seq[0], seq[1]);
    }

    #[test]
    fn sequence_rejects_non_commuting() {
        let a = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let b = RatMatrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert_eq!(
            relative_weight_sequence(&[a, b]).unwrap_err(),
            WeightError::NonCommuting(0, 1)
        );
    }

    #[test]
    fn two_commuting_blocks_use_the_sum() {
        // N1 = J2 ⊕ 0, N2 = 0 ⊕ J2 on Q^4; (N1 + N2)^2 = 0
        let n1 = RatMatrix::from_ints(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let n2 = RatMatrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
        let seq = relative_weight_sequence(&[n1.clone(), n2.clone()]).unwrap();
        let sum = &n1 + &n2;
        assert!(sum.pow(2).is_zero());
        assert_eq!(seq[1], weight_filtration(&sum).unwrap());
        assert_eq!(seq[1].get(-1), span(4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]));
        assert_eq!(graded_dims(&seq[1]), BTreeMap::from([(-1, 2), (1, 2)]));
    }
}
