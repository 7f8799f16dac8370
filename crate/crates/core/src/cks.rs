//! Closed-form nilpotent-orbit Hodge metrics.
//!
//! Every model is written in log coordinates `t_i = -log|s_i|` and angles
//! `θ_i = arg s_i`. Its adapted flat frame diagonalizes the metric on the
//! ray `θ = 0`. Continuing around the punctures conjugates the metric by
//! `exp(x_i N_i)` with `x_i = θ_i / 2π`. The Deligne frame metric is the
//! diagonal form times `∏ |s_i|^{2α_i}`, and it is single-valued.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Rat, RatMatrix, RatVector, Subspace};
use crate::l2::{tameness_check, MetricSample, TamenessReport};
use crate::prolongation::{deligne_basis, monodromy_consistency, LocalMonodromy, MonodromyBlock};
use crate::weight::{relative_weight_sequence, WeightError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CksError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("coordinate {axis} lies on the boundary divisor")]
    PointOnBoundary { axis: usize },
    #[error("coordinate {axis} lies outside the unit polydisc")]
    OutsidePolydisc { axis: usize },
    #[error("point has {found} coordinates, model has {expected} boundary axes")]
    PointShape { expected: usize, found: usize },
    #[error("vector has length {found}, model has rank {expected}")]
    VectorShape { expected: usize, found: usize },
    #[error("the zero vector has no graded level")]
    ZeroVector,
    #[error("halving the step changes the curvature by {disagreement:.3e} (relative) at {point:?}")]
    StepTooLarge { disagreement: f64, point: Vec<(f64, f64)> },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Trivial,
    Tate,
    TateTwisted,
    TateProduct,
    /// Rank-1 metric `|s|^{2·power}`, flat and trivial: a bad witness for
    /// lower norm bounds when `power > 1`.
    Corrupted { power: i32 },
}

/// A closed-form orbit together with its monodromy and Hodge data.
#[derive(Debug, Clone)]
pub struct OrbitModel {
    pub id: String,
    pub kind: ModelKind,
    pub rank: usize,
    pub weight: i64,
    pub monodromy: LocalMonodromy,
    /// Real parts of the residue eigenvalues, one per boundary axis.
    pub alpha: Vec<Rat>,
    /// Model-frame indices spanning `S(V)`.
    pub s_frame: Vec<usize>,
}

fn tate_nilpotent() -> RatMatrix {
    // N f1 = f2
    RatMatrix::from_ints(&[&[0, 0], &[1, 0]])
}

fn kron(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let mut out = RatMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = &a[(i, j)] * &b[(k, l)];
                }
            }
        }
    }
    out
}

impl OrbitModel {
    pub const BUILTIN: [&'static str; 5] =
        ["trivial", "tate", "tate-twisted", "tate-product", "corrupted-quartic"];

    pub fn builtin(id: &str) -> Result<Self, CksError> {
        match id {
            "trivial" => Ok(Self::trivial()),
            "tate" => Ok(Self::tate()),
            "tate-twisted" => Ok(Self::tate_twisted()),
            "tate-product" => Ok(Self::tate_product()),
            "corrupted-quartic" => Ok(Self::corrupted(2)),
            other => Err(CksError::UnknownModel(other.to_string())),
        }
    }

    pub fn trivial() -> Self {
        OrbitModel {
            id: "trivial".into(),
            kind: ModelKind::Trivial,
            rank: 1,
            weight: 0,
            monodromy: LocalMonodromy::unipotent(vec![RatMatrix::zeros(1, 1)]).unwrap(),
            alpha: vec![Rat::zero()],
            s_frame: vec![0],
        }
    }

    pub fn tate() -> Self {
        OrbitModel {
            id: "tate".into(),
            kind: ModelKind::Tate,
            rank: 2,
            weight: 1,
            monodromy: LocalMonodromy::unipotent(vec![tate_nilpotent()]).unwrap(),
            alpha: vec![Rat::zero()],
            s_frame: vec![0],
        }
    }

    pub fn tate_twisted() -> Self {
        let alpha = Rat::new(-1, 2);
        let monodromy = LocalMonodromy::new(
            2,
            vec![MonodromyBlock {
                alpha: vec![alpha.clone()],
                space: Subspace::full(2),
            }],
            vec![tate_nilpotent()],
        )
        .unwrap();
        OrbitModel {
            id: "tate-twisted".into(),
            kind: ModelKind::TateTwisted,
            rank: 2,
            weight: 1,
            monodromy,
            alpha: vec![alpha],
            s_frame: vec![0],
        }
    }

    pub fn tate_product() -> Self {
        let n = tate_nilpotent();
        let id = RatMatrix::identity(2);
        OrbitModel {
            id: "tate-product".into(),
            kind: ModelKind::TateProduct,
            rank: 4,
            weight: 2,
            monodromy: LocalMonodromy::unipotent(vec![kron(&n, &id), kron(&id, &n)]).unwrap(),
            alpha: vec![Rat::zero(), Rat::zero()],
            s_frame: vec![0],
        }
    }

    pub fn corrupted(power: i32) -> Self {
        OrbitModel {
            id: if power == 2 {
                "corrupted-quartic".into()
            } else {
                format!("corrupted-{power}")
            },
            kind: ModelKind::Corrupted { power },
            rank: 1,
            weight: 0,
            monodromy: LocalMonodromy::unipotent(vec![RatMatrix::zeros(1, 1)]).unwrap(),
            alpha: vec![Rat::zero()],
            s_frame: vec![0],
        }
    }

    pub fn boundary_count(&self) -> usize {
        self.monodromy.boundary_count()
    }

    /// Metric on the ray `θ = 0`, as a function of `t`.
    pub fn diagonal_metric(&self, t: &[f64]) -> DMatrix<f64> {
        self.lifted_metric(t, &vec![0.0; t.len()])
    }

    /// Flat-frame metric at log coordinates `t` and lifted angles `θ`.
    pub fn lifted_metric(&self, t: &[f64], theta: &[f64]) -> DMatrix<f64> {
        let tate = |t: f64, th: f64| {
            let x = th / (2.0 * PI);
            DMatrix::from_row_slice(
                2,
                2,
                &[t / PI + x * x * PI / t, x * PI / t, x * PI / t, PI / t],
            )
        };
        match self.kind {
            ModelKind::Trivial => DMatrix::identity(1, 1),
            ModelKind::Tate | ModelKind::TateTwisted => tate(t[0], theta[0]),
            ModelKind::TateProduct => tate(t[0], theta[0]).kronecker(&tate(t[1], theta[1])),
            ModelKind::Corrupted { power } => {
                DMatrix::from_element(1, 1, (-2.0 * power as f64 * t[0]).exp())
            }
        }
    }

    fn log_coordinates(&self, point: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>), CksError> {
        if point.len() != self.boundary_count() {
            return Err(CksError::PointShape {
                expected: self.boundary_count(),
                found: point.len(),
            });
        }
        let mut t = Vec::new();
        let mut theta = Vec::new();
        for (axis, s) in point.iter().enumerate() {
            let r = s.norm();
            if r == 0.0 {
                return Err(CksError::PointOnBoundary { axis });
            }
            if r >= 1.0 {
                return Err(CksError::OutsidePolydisc { axis });
            }
            t.push(-r.ln());
            theta.push(s.arg());
        }
        Ok((t, theta))
    }

    /// Flat-frame metric at a point, using the principal branch of `arg`.
    pub fn metric_at(&self, point: &[Complex64]) -> Result<DMatrix<f64>, CksError> {
        let (t, theta) = self.log_coordinates(point)?;
        Ok(self.lifted_metric(&t, &theta))
    }

    /// Metric in the Deligne frame.
    pub fn holomorphic_metric(&self, point: &[Complex64]) -> Result<DMatrix<f64>, CksError> {
        let (t, _) = self.log_coordinates(point)?;
        Ok(self.holomorphic_metric_log(&t))
    }

    fn holomorphic_metric_log(&self, t: &[f64]) -> DMatrix<f64> {
        let scale: f64 = self
            .alpha
            .iter()
            .zip(t)
            .map(|(a, t)| (-2.0 * a.to_f64() * t).exp())
            .product();
        self.diagonal_metric(t) * scale
    }

    /// Metric of `S(V)` in its Deligne frame.
    pub fn s_metric(&self, point: &[Complex64]) -> Result<DMatrix<f64>, CksError> {
        let h = self.holomorphic_metric(point)?;
        Ok(h.select_rows(&self.s_frame).select_columns(&self.s_frame))
    }

    /// Smallest eigenvalue of the normalized curvature of `S(V)`, where a
    /// closed form is known.
    pub fn exact_min_curvature(&self, point: &[Complex64]) -> Option<f64> {
        let line = |s: Complex64| {
            let t = -s.norm().ln();
            1.0 / (4.0 * s.norm_sqr() * t * t)
        };
        match self.kind {
            ModelKind::Trivial | ModelKind::Corrupted { .. } => Some(0.0),
            ModelKind::Tate | ModelKind::TateTwisted => Some(line(point[0])),
            ModelKind::TateProduct => Some(line(point[0]).min(line(point[1]))),
        }
    }

    /// Graded levels of `v` in the relative weight filtrations
    /// `W(N_1), W(N_1 + N_2), …`.
    pub fn levels(&self, v: &[Rat]) -> Result<Vec<i64>, CksError> {
        if v.len() != self.rank {
            return Err(CksError::VectorShape {
                expected: self.rank,
                found: v.len(),
            });
        }
        if v.iter().all(Rat::is_zero) {
            return Err(CksError::ZeroVector);
        }
        let seq = relative_weight_sequence(self.monodromy.nilpotents())?;
        Ok(seq
            .iter()
            .map(|w| w.level_of(v).expect("length checked"))
            .collect())
    }

    /// `(t_1/t_2)^{l_1} ⋯ (t_{n-1}/t_n)^{l_{n-1}} t_n^{l_n}`.
    pub fn predicted_norm(levels: &[i64], t: &[f64]) -> f64 {
        let n = t.len();
        (0..n)
            .map(|i| {
                let base = if i + 1 < n { t[i] / t[i + 1] } else { t[i] };
                base.powi(levels[i] as i32)
            })
            .product()
    }
}

/// `exp(N)` for a nilpotent rational matrix, exactly.
pub fn unipotent_exp(n: &RatMatrix) -> RatMatrix {
    let mut acc = RatMatrix::identity(n.rows());
    let mut term = RatMatrix::identity(n.rows());
    for k in 1..=n.rows() {
        term = (&term * n).scale(&Rat::new(1, k as i64));
        acc = &acc + &term;
    }
    acc
}

fn to_dmatrix(m: &RatMatrix) -> DMatrix<f64> {
    let rows = m.to_f64_rows();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rows[i][j])
}

/// Whether the evaluator's multivaluedness matches the model's monodromy.
///
/// Continuing `θ_i -> θ_i + 2π` must conjugate the flat metric by
/// `exp(N_i)`, and the Deligne frame built from the monodromy data must be
/// single-valued.
pub fn model_monodromy_consistent(model: &OrbitModel) -> bool {
    let n = model.boundary_count();
    let lattice_ok = deligne_basis(&model.monodromy, &vec![Rat::from_int(-1); n])
        .map(|b| monodromy_consistency(&b, &model.monodromy))
        .unwrap_or(false);
    let probes: [(f64, f64); 3] = [(1.3, 0.4), (2.7, -1.9), (5.1, 2.2)];
    let flat_ok = probes.iter().all(|&(t0, th0)| {
        let t = vec![t0; n];
        let theta: Vec<f64> = (0..n).map(|i| th0 + 0.37 * i as f64).collect();
        let h = model.lifted_metric(&t, &theta);
        (0..n).all(|i| {
            let mut turned = theta.clone();
            turned[i] += 2.0 * PI;
            let e = to_dmatrix(&unipotent_exp(&model.monodromy.nilpotents()[i]));
            let expected = e.transpose() * &h * &e;
            (model.lifted_metric(&t, &turned) - expected).amax() < 1e-9 * h.amax().max(1.0)
        })
    });
    lattice_ok && flat_ok
}

/// Region and sampling parameters for [`cks_ratio_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct ScanOptions {
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    /// Largest ratio `t_i / t_{i+1}` (and `t_n / ε`) sampled.
    pub spread: f64,
    /// Sample random angles instead of the aligned ray `θ = 0`.
    pub vary_angle: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            epsilon: 1.0,
            samples: 1000,
            seed: 0,
            spread: 1e3,
            vary_angle: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioScan {
    pub levels: Vec<i64>,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

/// Log coordinates drawn from the Siegel-type region
/// `t_1/t_2 > ε, …, t_{n-1}/t_n > ε, t_n > ε`.
pub fn siegel_samples(n: usize, opts: &ScanOptions) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let span = opts.spread.ln();
    (0..opts.samples)
        .map(|_| {
            let mut t = vec![0.0; n];
            for i in (0..n).rev() {
                let floor = if i + 1 < n { t[i + 1] * opts.epsilon } else { opts.epsilon };
                t[i] = floor * (rng.random::<f64>() * span).exp() * (1.0 + 1e-9);
            }
            t
        })
        .collect()
}

/// Extremes of `|v|²_h` divided by the predicted log-monomial.
pub fn cks_ratio_scan(
    model: &OrbitModel,
    v: &[Rat],
    opts: &ScanOptions,
) -> Result<RatioScan, CksError> {
    let levels = model.levels(v)?;
    let n = model.boundary_count();
    let vf = nalgebra::DVector::from_iterator(v.len(), v.iter().map(Rat::to_f64));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in siegel_samples(n, opts) {
        let theta: Vec<f64> = (0..n)
            .map(|_| {
                if opts.vary_angle {
                    PI * (2.0 * rng.random::<f64>() - 1.0)
                } else {
                    0.0
                }
            })
            .collect();
        let h = model.lifted_metric(&t, &theta);
        let norm = vf.dot(&(&h * &vf));
        let ratio = norm / OrbitModel::predicted_norm(&levels, &t);
        min = min.min(ratio);
        max = max.max(ratio);
    }
    Ok(RatioScan {
        levels,
        min,
        max,
        samples: opts.samples,
    })
}

/// Relative disagreement between step `h` and `h/2` above which
/// [`nakano_check`] refuses to answer.
pub const RICHARDSON_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct NakanoReport {
    pub step: f64,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_half_step: f64,
    /// `(4 λ(h/2) - λ(h)) / 3`, minimized over the grid.
    pub extrapolated_min: f64,
    /// Largest deviation from the closed form at step `h`, when known.
    pub max_error: Option<f64>,
    pub max_error_half_step: Option<f64>,
    pub points: usize,
}

/// Sample grid with `|s_i| = exp(-1 - 2k/(rings-1))` and equispaced angles.
pub fn nakano_grid(model: &OrbitModel, rings: usize, angles: usize) -> Vec<Vec<Complex64>> {
    let n = model.boundary_count();
    let mut out = Vec::new();
    for k in 0..rings {
        let r = (-1.0 - 2.0 * k as f64 / (rings.max(2) - 1) as f64).exp();
        for a in 0..angles {
            let th = 2.0 * PI * (a as f64 + 0.25) / angles as f64;
            out.push((0..n).map(|i| Complex64::from_polar(r, th + 0.5 * i as f64)).collect());
        }
    }
    out
}

type CMat = DMatrix<Complex64>;

fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Smallest eigenvalue of `(I⊗H)^{-1/2} Θ (I⊗H)^{-1/2}` with
/// `Θ_{jk̄} = -∂_j∂_k̄ H + (∂_j H) H^{-1} (∂_k̄ H)`, by central differences.
fn curvature_min(model: &OrbitModel, point: &[Complex64], h: f64) -> Result<f64, CksError> {
    let n = point.len();
    let metric = |p: &[Complex64]| model.s_metric(p);
    // real coordinate c: axis c/2, real part if even
    let shifted = |moves: &[(usize, f64)]| {
        let mut p = point.to_vec();
        for &(c, d) in moves {
            if c % 2 == 0 {
                p[c / 2].re += d;
            } else {
                p[c / 2].im += d;
            }
        }
        metric(&p)
    };
    let h0 = metric(point)?;
    let r = h0.nrows();
    let d1 = |c: usize| -> Result<DMatrix<f64>, CksError> {
        Ok((shifted(&[(c, h)])? - shifted(&[(c, -h)])?) / (2.0 * h))
    };
    let d2 = |a: usize, b: usize| -> Result<DMatrix<f64>, CksError> {
        if a == b {
            Ok((shifted(&[(a, h)])? - &h0 * 2.0 + shifted(&[(a, -h)])?) / (h * h))
        } else {
            Ok((shifted(&[(a, h), (b, h)])? - shifted(&[(a, h), (b, -h)])?
                - shifted(&[(a, -h), (b, h)])?
                + shifted(&[(a, -h), (b, -h)])?)
                / (4.0 * h * h))
        }
    };
    let i = Complex64::i();
    let mut first_x = Vec::new();
    let mut first_y = Vec::new();
    for j in 0..n {
        first_x.push(complexify(&d1(2 * j)?));
        first_y.push(complexify(&d1(2 * j + 1)?));
    }
    let h_inv = complexify(&h0.clone().try_inverse().expect("positive definite"));
    let mut big = CMat::zeros(n * r, n * r);
    for j in 0..n {
        let dj = (&first_x[j] - &first_y[j] * i) * Complex64::new(0.5, 0.0);
        for k in 0..n {
            let dkbar = (&first_x[k] + &first_y[k] * i) * Complex64::new(0.5, 0.0);
            let real = complexify(&(d2(2 * j, 2 * k)? + d2(2 * j + 1, 2 * k + 1)?));
            let imag = complexify(&(d2(2 * j, 2 * k + 1)? - d2(2 * j + 1, 2 * k)?));
            let ddbar = (real + imag * i) * Complex64::new(0.25, 0.0);
            let block = -ddbar + &dj * &h_inv * &dkbar;
            big.view_mut((j * r, k * r), (r, r)).copy_from(&block);
        }
    }
    let eig = h0.clone().symmetric_eigen();
    let inv_sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()))
        * eig.eigenvectors.transpose();
    let mut norm = CMat::zeros(n * r, n * r);
    for j in 0..n {
        norm.view_mut((j * r, j * r), (r, r)).copy_from(&complexify(&inv_sqrt));
    }
    let scaled = &norm * big * &norm;
    let herm = (&scaled + scaled.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Minimal normalized curvature eigenvalue of `S(V)` over a grid.
pub fn nakano_check(
    model: &OrbitModel,
    grid: &[Vec<Complex64>],
    step: f64,
) -> Result<NakanoReport, CksError> {
    let mut report = NakanoReport {
        step,
        min_eigenvalue: f64::INFINITY,
        min_eigenvalue_half_step: f64::INFINITY,
        extrapolated_min: f64::INFINITY,
        max_error: None,
        max_error_half_step: None,
        points: grid.len(),
    };
    for p in grid {
        let coarse = curvature_min(model, p, step)?;
        let fine = curvature_min(model, p, step / 2.0)?;
        let scale = fine.abs().max(1e-8);
        let disagreement = (coarse - fine).abs() / scale;
        if disagreement > RICHARDSON_TOLERANCE {
            return Err(CksError::StepTooLarge {
                disagreement,
                point: p.iter().map(|z| (z.re, z.im)).collect(),
            });
        }
        report.min_eigenvalue = report.min_eigenvalue.min(coarse);
        report.min_eigenvalue_half_step = report.min_eigenvalue_half_step.min(fine);
        report.extrapolated_min = report.extrapolated_min.min((4.0 * fine - coarse) / 3.0);
        if let Some(exact) = model.exact_min_curvature(p) {
            let e1 = (coarse - exact).abs();
            let e2 = (fine - exact).abs();
            report.max_error = Some(report.max_error.map_or(e1, |e| e.max(e1)));
            report.max_error_half_step = Some(report.max_error_half_step.map_or(e2, |e| e.max(e2)));
        }
    }
    Ok(report)
}

/// Deligne-frame metric against the identity, with the boundary ideal
/// generated by `s_1⋯s_n`, sampled on shells `|s_i| = 2^{-k}`.
pub fn tameness_samples(model: &OrbitModel, shells: usize, per_shell: usize) -> Vec<MetricSample> {
    let n = model.boundary_count();
    let mut samples = Vec::new();
    for k in 1..=shells {
        for a in 0..per_shell {
            let th = 2.0 * PI * (a as f64 + 0.5) / per_shell as f64;
            let p: Vec<Complex64> = (0..n)
                .map(|i| Complex64::from_polar(0.5f64.powi(k as i32), th + i as f64))
                .collect();
            let product: Complex64 = p.iter().product();
            samples.push(MetricSample {
                shell: k,
                model: model.holomorphic_metric(&p).expect("interior point"),
                reference: DMatrix::identity(model.rank, model.rank),
                ideal: vec![product],
            });
        }
    }
    samples
}

/// `|z_1⋯z_k|² h_0 ≲ h` in the Deligne frame, `h_0` the identity.
pub fn norm_lower_bound_check(model: &OrbitModel, shells: usize, per_shell: usize) -> TamenessReport {
    tameness_check(&tameness_samples(model, shells, per_shell), &Rat::one())
}

/// The `k`-th standard basis vector of the model frame.
pub fn frame_vector(model: &OrbitModel, k: usize) -> RatVector {
    (0..model.rank)
        .map(|i| if i == k { Rat::one() } else { Rat::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(r: f64) -> Vec<Complex64> {
        vec![Complex64::new(r, 0.0)]
    }

    #[test]
    fn metric_examples() {
        let t = OrbitModel::trivial();
        assert_eq!(t.metric_at(&real(0.3)).unwrap(), DMatrix::identity(1, 1));
        let tate = OrbitModel::tate();
        let m = tate.metric_at(&real((-PI).exp())).unwrap();
        assert!((m - DMatrix::identity(2, 2)).amax() < 1e-12);
        let m = tate.metric_at(&real((-2.0 * PI).exp())).unwrap();
        assert!((m - DMatrix::from_diagonal(&nalgebra::dvector![2.0, 0.5])).amax() < 1e-12);
        assert_eq!(tate.metric_at(&real(0.0)), Err(CksError::PointOnBoundary { axis: 0 }));
    }

    #[test]
    fn builtins_are_consistent() {
        for id in OrbitModel::BUILTIN {
            let m = OrbitModel::builtin(id).unwrap();
            assert!(model_monodromy_consistent(&m), "{id}");
        }
        assert!(OrbitModel::builtin("k3").is_err());
    }

    #[test]
    fn ratio_scans() {
        let opts = ScanOptions::default();
        let trivial = OrbitModel::trivial();
        let s = cks_ratio_scan(&trivial, &frame_vector(&trivial, 0), &opts).unwrap();
        assert!((s.min - 1.0).abs() < 1e-12 && (s.max - 1.0).abs() < 1e-12);
        let tate = OrbitModel::tate();
        let s = cks_ratio_scan(&tate, &frame_vector(&tate, 0), &opts).unwrap();
        assert_eq!(s.levels, vec![1]);
        assert!((s.min - 1.0 / PI).abs() < 1e-10 && (s.max - 1.0 / PI).abs() < 1e-10);
        let prod = OrbitModel::tate_product();
        let s = cks_ratio_scan(&prod, &frame_vector(&prod, 0), &opts).unwrap();
        assert_eq!(s.levels, vec![1, 2]);
        assert!(s.max / s.min < 1.0 + 1e-10);
    }

    #[test]
    fn angular_scan_stays_bounded() {
        let tate = OrbitModel::tate();
        let opts = ScanOptions {
            vary_angle: true,
            ..Default::default()
        };
        let s = cks_ratio_scan(&tate, &frame_vector(&tate, 0), &opts).unwrap();
        assert!(s.max / s.min < 10.0);
    }

    #[test]
    fn curvature() {
        let trivial = OrbitModel::trivial();
        let g = nakano_grid(&trivial, 3, 4);
        assert_eq!(nakano_check(&trivial, &g, 1e-3).unwrap().min_eigenvalue, 0.0);
        for m in [OrbitModel::tate(), OrbitModel::tate_twisted()] {
            let g = nakano_grid(&m, 5, 6);
            let r = nakano_check(&m, &g, 1e-3).unwrap();
            assert!(r.min_eigenvalue >= -1e-4);
            let ratio = r.max_error.unwrap() / r.max_error_half_step.unwrap();
            assert!((3.0..5.0).contains(&ratio), "{ratio}");
        }
        let tate = OrbitModel::tate();
        assert!(matches!(
            nakano_check(&tate, &nakano_grid(&tate, 2, 2), 0.2),
            Err(CksError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn lower_bounds() {
        let r = norm_lower_bound_check(&OrbitModel::trivial(), 10, 4);
        assert!(r.tame);
        assert!((r.constant - 0.25).abs() < 1e-12);
        assert!(norm_lower_bound_check(&OrbitModel::tate(), 20, 4).tame);
        assert!(!norm_lower_bound_check(&OrbitModel::corrupted(2), 20, 4).tame);
    }
}
