//! Deligne–Manin prolongation lattices from commuting local monodromy data.
//!
//! A generator of `V_{>a}` is the symbolic section
//! `z^β · exp(Σ log z_i · N_i) v` with `v` a flat vector in a single
//! monodromy block. Nothing here is evaluated numerically.

use serde::Serialize;

use crate::algebra::{AlgebraError, Rat, RatMatrix, RatVector, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProlongationError {
    #[error("block {block}: eigenvalue {value} on axis {axis} is outside (-1, 0]")]
    AlphaOutOfRange { block: usize, axis: usize, value: Rat },
    #[error("block {block} has {found} eigenvalues, expected {expected}")]
    AlphaLength {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("blocks do not form a direct sum decomposition of Q^{dim}")]
    NotDirectSum { dim: usize },
    #[error("nilpotent {index} is not a nilpotent {dim}x{dim} matrix")]
    NotNilpotent { index: usize, dim: usize },
    #[error("nilpotents {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("nilpotent {nilpotent} does not preserve block {block}")]
    BlockNotPreserved { nilpotent: usize, block: usize },
    #[error("window has {found} entries, expected {expected}")]
    WindowLength { expected: usize, found: usize },
    #[error("vector {index} does not lie in a single monodromy block")]
    Straddles { index: usize },
    #[error("at least one boundary component is required")]
    NoBoundary,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Generalized eigenspace `V_{α_1..α_n}` on which every `T_i` acts as
/// `exp(-2πi(α_i + N_i))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyBlock {
    pub alpha: Vec<Rat>,
    pub space: Subspace,
}

/// Germ of a local system at a point of an `n`-component normal crossing
/// boundary: residue eigenvalue blocks plus commuting nilpotent logarithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMonodromy {
    dim: usize,
    blocks: Vec<MonodromyBlock>,
    nilpotents: Vec<RatMatrix>,
}

impl LocalMonodromy {
    pub fn new(
        dim: usize,
        blocks: Vec<MonodromyBlock>,
        nilpotents: Vec<RatMatrix>,
    ) -> Result<Self, ProlongationError> {
        let n = nilpotents.len();
        if n == 0 {
            return Err(ProlongationError::NoBoundary);
        }
        for (b, block) in blocks.iter().enumerate() {
            if block.alpha.len() != n {
                return Err(ProlongationError::AlphaLength {
                    block: b,
                    expected: n,
                    found: block.alpha.len(),
                });
            }
            if block.space.ambient() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: block.space.ambient(),
                }
                .into());
            }
            for (axis, a) in block.alpha.iter().enumerate() {
                if !(*a > -1 && *a <= 0) {
                    return Err(ProlongationError::AlphaOutOfRange {
                        block: b,
                        axis,
                        value: a.clone(),
                    });
                }
            }
        }
        let mut total = Subspace::zero(dim);
        let mut dims = 0;
        for block in &blocks {
            total = total.sum(&block.space)?;
            dims += block.space.dim();
        }
        if dims != dim || total.dim() != dim {
            return Err(ProlongationError::NotDirectSum { dim });
        }
        for (i, m) in nilpotents.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim || !m.is_nilpotent() {
                return Err(ProlongationError::NotNilpotent { index: i, dim });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !nilpotents[i].commutes_with(&nilpotents[j]) {
                    return Err(ProlongationError::NonCommuting(i, j));
                }
            }
        }
        for (i, m) in nilpotents.iter().enumerate() {
            for (b, block) in blocks.iter().enumerate() {
                if !block.space.map(m)?.is_subspace_of(&block.space)? {
                    return Err(ProlongationError::BlockNotPreserved {
                        nilpotent: i,
                        block: b,
                    });
                }
            }
        }
        Ok(LocalMonodromy {
            dim,
            blocks,
            nilpotents,
        })
    }

    /// Unipotent monodromy on Q^dim: one block with all α = 0.
    pub fn unipotent(nilpotents: Vec<RatMatrix>) -> Result<Self, ProlongationError> {
        let dim = nilpotents.first().map_or(0, RatMatrix::rows);
        let n = nilpotents.len();
        Self::new(
            dim,
            vec![MonodromyBlock {
                alpha: vec![Rat::zero(); n],
                space: Subspace::full(dim),
            }],
            nilpotents,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boundary_count(&self) -> usize {
        self.nilpotents.len()
    }

    pub fn blocks(&self) -> &[MonodromyBlock] {
        &self.blocks
    }

    pub fn nilpotents(&self) -> &[RatMatrix] {
        &self.nilpotents
    }

    /// Index of the block containing `v`, if `v` lies in exactly one.
    pub fn block_of(&self, v: &[Rat]) -> Option<usize> {
        if v.iter().all(Rat::is_zero) {
            return None;
        }
        self.blocks
            .iter()
            .position(|b| b.space.contains(v).unwrap_or(false))
    }

    /// Concatenated canonical bases of the blocks.
    pub fn flat_basis(&self) -> Vec<(usize, RatVector)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(b, block)| block.space.basis().iter().map(move |v| (b, v.clone())))
            .collect()
    }
}

/// One lattice generator `z^exponents · exp(Σ log z_i · twist_i) · vector`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    /// Position of `vector` in the basis it was drawn from.
    pub label: usize,
    pub vector: RatVector,
    pub block: usize,
    pub exponents: Vec<Rat>,
    pub twist: Vec<RatMatrix>,
}

/// A frame of `V_{>a}` (or of a sub-lattice of it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProlongedBasis {
    pub window: Vec<Rat>,
    pub generators: Vec<Generator>,
}

impl ProlongedBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.window.len()
    }
}

/// The unique `α + k`, `k ∈ Z`, lying in `(a, a + 1]`.
pub fn shift_into_window(alpha: &Rat, a: &Rat) -> Rat {
    let k = (a + Rat::one() - alpha).floor();
    alpha + Rat::from(k)
}

pub(crate) fn prolong_vectors(
    m: &LocalMonodromy,
    window: &[Rat],
    vectors: &[RatVector],
    labels: &[usize],
) -> Result<ProlongedBasis, ProlongationError> {
    if window.len() != m.boundary_count() {
        return Err(ProlongationError::WindowLength {
            expected: m.boundary_count(),
            found: window.len(),
        });
    }
    let generators = vectors
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let block = m.block_of(v).ok_or(ProlongationError::Straddles { index })?;
            let alpha = &m.blocks[block].alpha;
            Ok(Generator {
                label: labels[index],
                vector: v.clone(),
                block,
                exponents: alpha
                    .iter()
                    .zip(window)
                    .map(|(al, a)| shift_into_window(al, a))
                    .collect(),
                twist: m.nilpotents.clone(),
            })
        })
        .collect::<Result<_, ProlongationError>>()?;
    Ok(ProlongedBasis {
        window: window.to_vec(),
        generators,
    })
}

/// Frame of `V_{>a}`: every flat basis vector shifted into the window
/// `(a_i, a_i + 1]` on each axis.
pub fn deligne_basis(
    m: &LocalMonodromy,
    window: &[Rat],
) -> Result<ProlongedBasis, ProlongationError> {
    let vectors: Vec<RatVector> = m.flat_basis().into_iter().map(|(_, v)| v).collect();
    let labels: Vec<usize> = (0..vectors.len()).collect();
    prolong_vectors(m, window, &vectors, &labels)
}

/// Residue eigenvalues along boundary component `axis`, with multiplicity.
pub fn residue_spectrum(b: &ProlongedBasis, axis: usize) -> Vec<Rat> {
    b.generators.iter().map(|g| g.exponents[axis].clone()).collect()
}

/// Whether every generator is a single-valued section.
///
/// Continuing `z_i -> z_i e^{2πi}` multiplies the twist by
/// `exp(2πi(β_i + twist_i))`, while the flat vector picks up
/// `T_i = exp(-2πi(α_i + N_i))`. The product is the identity on the block
/// iff `β_i - α_i` is an integer and `twist_i = N_i` on the block (the
/// exponential of a nonzero nilpotent is never the identity).
pub fn monodromy_consistency(b: &ProlongedBasis, m: &LocalMonodromy) -> bool {
    b.generators.iter().all(|g| {
        let Some(block) = m.block_of(&g.vector) else {
            return false;
        };
        if g.exponents.len() != m.boundary_count() || g.twist.len() != m.boundary_count() {
            return false;
        }
        let space = &m.blocks[block].space;
        (0..m.boundary_count()).all(|i| {
            let integral = (&g.exponents[i] - &m.blocks[block].alpha[i]).is_integer();
            let diff = &g.twist[i] - &m.nilpotents[i];
            integral
                && space
                    .basis()
                    .iter()
                    .all(|v| diff.apply(v).iter().all(Rat::is_zero))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn rank_one(alpha: Rat) -> LocalMonodromy {
        LocalMonodromy::new(
            1,
            vec![MonodromyBlock {
                alpha: vec![alpha],
                space: Subspace::full(1),
            }],
            vec![RatMatrix::zeros(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn trivial_system_windows() {
        let m = rank_one(Rat::zero());
        let b = deligne_basis(&m, &[rat(-1, 1)]).unwrap();
        assert_eq!(b.generators[0].exponents, vec![rat(0, 1)]);
        let b = deligne_basis(&m, &[rat(0, 1)]).unwrap();
        assert_eq!(b.generators[0].exponents, vec![rat(1, 1)]);
        assert!(monodromy_consistency(&b, &m));
    }

    #[test]
    fn half_eigenvalue() {
        let m = rank_one(rat(-1, 2));
        let b = deligne_basis(&m, &[rat(-1, 1)]).unwrap();
        assert_eq!(residue_spectrum(&b, 0), vec![rat(-1, 2)]);
    }

    #[test]
    fn two_block_spectrum() {
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); 2];
            v[i] = Rat::one();
            v
        };
        let m = LocalMonodromy::new(
            2,
            vec![
                MonodromyBlock {
                    alpha: vec![Rat::zero()],
                    space: Subspace::span(2, &[e(0)]).unwrap(),
                },
                MonodromyBlock {
                    alpha: vec![rat(-1, 3)],
                    space: Subspace::span(2, &[e(1)]).unwrap(),
                },
            ],
            vec![RatMatrix::zeros(2, 2)],
        )
        .unwrap();
        let b = deligne_basis(&m, &[rat(-1, 1)]).unwrap();
        assert_eq!(residue_spectrum(&b, 0), vec![rat(0, 1), rat(-1, 3)]);
    }

    #[test]
    fn flipped_twist_is_inconsistent() {
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let m = LocalMonodromy::unipotent(vec![n.clone()]).unwrap();
        let mut b = deligne_basis(&m, &[rat(-1, 1)]).unwrap();
        assert!(monodromy_consistency(&b, &m));
        for g in &mut b.generators {
            g.twist[0] = -&n;
        }
        assert!(!monodromy_consistency(&b, &m));
    }

    #[test]
    fn zero_nilpotent_reduces_to_integrality() {
        let m = rank_one(rat(-1, 2));
        let mut b = deligne_basis(&m, &[rat(-1, 1)]).unwrap();
        b.generators[0].twist[0] = -&b.generators[0].twist[0];
        assert!(monodromy_consistency(&b, &m));
        b.generators[0].exponents[0] = rat(1, 2);
        assert!(monodromy_consistency(&b, &m));
        b.generators[0].exponents[0] = rat(0, 1);
        assert!(!monodromy_consistency(&b, &m));
    }

    #[test]
    fn validation_errors() {
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let blocks = |a: Rat| {
            vec![MonodromyBlock {
                alpha: vec![a],
                space: Subspace::full(2),
            }]
        };
        assert!(matches!(
            LocalMonodromy::new(2, blocks(rat(1, 2)), vec![n.clone()]),
            Err(ProlongationError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            LocalMonodromy::new(2, blocks(rat(-1, 1)), vec![n.clone()]),
            Err(ProlongationError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            LocalMonodromy::new(2, blocks(Rat::zero()), vec![RatMatrix::identity(2)]),
            Err(ProlongationError::NotNilpotent { .. })
        ));
        let half = |i: usize| MonodromyBlock {
            alpha: vec![Rat::zero()],
            space: Subspace::span(2, &[(0..2).map(|k| Rat::from_int((k == i) as i64)).collect()])
                .unwrap(),
        };
        assert!(matches!(
            LocalMonodromy::new(2, vec![half(0), half(1)], vec![RatMatrix::from_ints(&[&[0, 0], &[1, 0]])]),
            Err(ProlongationError::BlockNotPreserved { .. })
        ));
        assert!(matches!(
            LocalMonodromy::new(2, vec![half(0)], vec![RatMatrix::zeros(2, 2)]),
            Err(ProlongationError::NotDirectSum { .. })
        ));
    }
}
