use serde::Serialize;

use super::{AlgebraError, Rat, RatMatrix, RatVector};

/// A linear subspace of Q^n, stored by its reduced row echelon basis.
///
/// Two subspaces are equal iff their stored bases are identical, so the
/// derived `PartialEq` is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<RatVector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_rref(&RatMatrix::identity(ambient))
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: &[RatVector]) -> Result<Self, AlgebraError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(AlgebraError::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let m = RatMatrix::from_rows(vectors.to_vec())?;
        Ok(Self::from_rref(&m))
    }

    fn from_rref(m: &RatMatrix) -> Self {
        let (r, piv) = m.rref();
        Subspace {
            ambient: m.cols(),
            basis: (0..piv.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    /// Re-derives the canonical form; the result always equals `self`.
    pub fn canonicalize(&self) -> Self {
        Self::span(self.ambient, &self.basis).expect("basis has ambient length")
    }

    fn check(&self, other: usize) -> Result<(), AlgebraError> {
        if self.ambient != other {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.ambient,
                found: other,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Rat]) -> Result<bool, AlgebraError> {
        self.check(v.len())?;
        if v.iter().all(Rat::is_zero) {
            return Ok(true);
        }
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for b in &self.basis {
            let p = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= &f * bi;
                }
            }
        }
        Ok(w.iter().all(Rat::is_zero))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, AlgebraError> {
        other.check(self.ambient)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.check(other.ambient)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    /// Intersection through the kernel of `[B_U^T | -B_V^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.check(other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let (du, dv) = (self.dim(), other.dim());
        let mut stacked = RatMatrix::zeros(self.ambient, du + dv);
        for (j, b) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                stacked[(i, j)] = b[i].clone();
            }
        }
        for (j, b) in other.basis.iter().enumerate() {
            for i in 0..self.ambient {
                stacked[(i, du + j)] = -&b[i];
            }
        }
        let ker = kernel(&stacked);
        let vs: Vec<RatVector> = ker
            .basis
            .iter()
            .map(|coeffs| {
                let mut v = vec![Rat::zero(); self.ambient];
                for (c, b) in coeffs[..du].iter().zip(&self.basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += c * bi;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vs)
    }

    /// `M(self)`.
    pub fn map(&self, m: &RatMatrix) -> Result<Subspace, AlgebraError> {
        self.check(m.cols())?;
        let imgs: Vec<RatVector> = self.basis.iter().map(|b| m.apply(b)).collect();
        Subspace::span(m.rows(), &imgs)
    }

    /// `{v in self : M v in target}`.
    pub fn preimage_within(
        &self,
        m: &RatMatrix,
        target: &Subspace,
    ) -> Result<Subspace, AlgebraError> {
        self.check(m.cols())?;
        target.check(m.rows())?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        // coordinates c with Q M B^T c = 0, where the rows of Q annihilate target
        let annihilator = if target.is_zero() {
            Subspace::full(m.rows())
        } else {
            kernel(&RatMatrix::from_rows(target.basis.clone())?)
        };
        if annihilator.is_zero() {
            return Ok(self.clone());
        }
        let q = RatMatrix::from_rows(annihilator.basis.clone())?;
        let bt = RatMatrix::from_columns(self.ambient, &self.basis);
        let sys = &(&q * m) * &bt;
        let coords = kernel(&sys);
        let vs: Vec<RatVector> = coords.basis.iter().map(|c| bt.apply(c)).collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Lexicographically first echelon complement of `sub` inside `self`:
    /// greedily keeps the canonical basis vectors of `self` that are
    /// independent of `sub` and the vectors already kept.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Vec<RatVector>, AlgebraError> {
        self.check(sub.ambient)?;
        let mut acc = sub.clone();
        let mut picked = Vec::new();
        for b in &self.basis {
            if !acc.contains(b)? {
                acc = acc.sum(&Subspace::span(self.ambient, std::slice::from_ref(b))?)?;
                picked.push(b.clone());
            }
        }
        Ok(picked)
    }
}

/// `ker M` as a subspace of Q^cols.
pub fn kernel(m: &RatMatrix) -> Subspace {
    let n = m.cols();
    let (r, piv) = m.rref();
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let vs: Vec<RatVector> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &p) in piv.iter().enumerate() {
                v[p] = -&r[(row, f)];
            }
            v
        })
        .collect();
    Subspace::span(n, &vs).expect("kernel vectors have ambient length")
}

/// Column space of `M` as a subspace of Q^rows.
pub fn image(m: &RatMatrix) -> Subspace {
    let cols: Vec<RatVector> = (0..m.cols()).map(|j| m.column(j)).collect();
    Subspace::span(m.rows(), &cols).expect("columns have ambient length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn v(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&RatMatrix::zeros(2, 2)), Subspace::full(2));
        assert_eq!(kernel(&RatMatrix::identity(3)), Subspace::zero(3));
        let k = kernel(&RatMatrix::from_ints(&[&[0, 1], &[0, 0]]));
        assert_eq!(k, Subspace::span(2, &[v(&[1, 0])]).unwrap());
    }

    #[test]
    fn set_operations() {
        let x = Subspace::span(2, &[v(&[1, 0])]).unwrap();
        let y = Subspace::span(2, &[v(&[0, 1])]).unwrap();
        assert_eq!(x.intersect(&y).unwrap(), Subspace::zero(2));
        assert_eq!(x.sum(&y).unwrap(), Subspace::full(2));
        let d = Subspace::span(2, &[v(&[1, 1])]).unwrap();
        assert!(d.contains(&v(&[2, 2])).unwrap());
        assert!(!d.contains(&v(&[1, 2])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let x = Subspace::full(2);
        assert!(x.contains(&v(&[1, 2, 3])).is_err());
        assert!(x.sum(&Subspace::full(3)).is_err());
        assert!(x.intersect(&Subspace::zero(1)).is_err());
    }

    #[test]
    fn preimage() {
        // N e2 = e1; preimage of 0 inside the full space is ker N
        let n = RatMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let pre = Subspace::full(2)
            .preimage_within(&n, &Subspace::zero(2))
            .unwrap();
        assert_eq!(pre, kernel(&n));
        let pre = Subspace::full(2).preimage_within(&n, &Subspace::full(2)).unwrap();
        assert_eq!(pre, Subspace::full(2));
    }

    #[test]
    fn complement_is_deterministic() {
        let w = Subspace::full(3);
        let sub = Subspace::span(3, &[vec![rat(1, 1), rat(1, 1), rat(0, 1)]]).unwrap();
        let c = w.complement_of(&sub).unwrap();
        assert_eq!(c, vec![v(&[1, 0, 0]), v(&[0, 0, 1])]);
    }
}
