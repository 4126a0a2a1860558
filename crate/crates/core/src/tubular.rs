//! Hermitian coordinates, the positive cone, and the trajectory method.
//!
//! φ identifies N×N Hermitian matrices with ℝ^{N²} isometrically under the
//! trace inner product Tr(AB). Coordinates are ordered as
//!
//! 1. the diagonal entries A_kk,
//! 2. √2·Re A_kl for k < l, row-major,
//! 3. √2·Im A_kl for k < l, row-major.
//!
//! The trajectory s ↦ L₀ − (A_j + sB_j)⁻¹ maps ℂ⁺ into matrices with positive
//! definite imaginary part and passes through L_j at s = i.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analyticity::{self, Region};
use crate::dtn::DtnMap;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64, I};
use crate::stack::TensorTuple;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianCoordinates {
    pub n: usize,
    pub coords: Vec<f64>,
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |k| (k + 1..n).map(move |l| (k, l)))
}

pub fn phi(a: &CMatrix) -> Result<HermitianCoordinates> {
    let a = linalg::symmetrize(a)?;
    let n = a.nrows();
    let mut coords: Vec<f64> = (0..n).map(|k| a[(k, k)].re).collect();
    coords.extend(upper_pairs(n).map(|(k, l)| SQRT_2 * a[(k, l)].re));
    coords.extend(upper_pairs(n).map(|(k, l)| SQRT_2 * a[(k, l)].im));
    Ok(HermitianCoordinates { n, coords })
}

pub fn phi_inv(x: &[f64]) -> Result<CMatrix> {
    let n = (x.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != x.len() {
        return Err(Error::dimension(format!(
            "Hermitian coordinates need a positive square length, got {}",
            x.len()
        )));
    }
    let mut a = CMatrix::zeros(n, n);
    for k in 0..n {
        a[(k, k)] = c(x[k], 0.0);
    }
    let m = n * (n - 1) / 2;
    for (p, (k, l)) in upper_pairs(n).enumerate() {
        let z = c(x[n + p], x[n + m + p]) / SQRT_2;
        a[(k, l)] = z;
        a[(l, k)] = z.conj();
    }
    Ok(a)
}

impl HermitianCoordinates {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        phi_inv(&self.coords)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }
}

/// Orthonormal basis of the N×N Hermitian matrices under Tr(AB), in φ order:
/// E_kk, then (E_kl + E_lk)/√2, then i(E_kl − E_lk)/√2, with k < l.
pub fn basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(k, k)] = c(1.0, 0.0);
        out.push(e);
    }
    for (k, l) in upper_pairs(n) {
        let mut e = CMatrix::zeros(n, n);
        e[(k, l)] = c(1.0 / SQRT_2, 0.0);
        e[(l, k)] = c(1.0 / SQRT_2, 0.0);
        out.push(e);
    }
    for (k, l) in upper_pairs(n) {
        let mut e = CMatrix::zeros(n, n);
        e[(k, l)] = c(0.0, 1.0 / SQRT_2);
        e[(l, k)] = c(0.0, -1.0 / SQRT_2);
        out.push(e);
    }
    out
}

/// Real trace inner product Tr(AB) of Hermitian matrices.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b).trace().re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeMembership {
    /// In the closed cone {H ⪰ 0}.
    pub closed: bool,
    /// In the open cone {H ≻ 0}.
    pub interior: bool,
    /// Smallest eigenvalue.
    pub margin: f64,
    pub tol: f64,
}

pub fn cone_member(h: &CMatrix, tol: f64) -> Result<ConeMembership> {
    let margin = linalg::min_eigenvalue(h)?;
    Ok(ConeMembership {
        closed: margin >= -tol,
        interior: margin > tol,
        margin,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfDualityReport {
    pub positive_semidefinite: bool,
    /// Smallest Tr(HB) over the sampled PSD matrices B.
    pub min_sampled_trace: f64,
    /// Tr(H vv*) for the eigenvector v of the smallest eigenvalue.
    pub witness_trace: f64,
    pub samples: usize,
    /// PSD H pairs nonnegatively with every sample; non-PSD H has a negative witness.
    pub holds: bool,
}

fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    g.adjoint() * g
}

/// Spot check of self-duality of the PSD cone at H.
pub fn self_duality_check(h: &CMatrix, samples: usize, seed: u64) -> Result<SelfDualityReport> {
    let (values, vectors) = linalg::hermitian_eigen(h)?;
    let n = h.nrows();
    let h = linalg::symmetrize(h)?;
    let positive_semidefinite = values[0] >= -1e-12 * h.norm().max(1.0);
    let v = vectors.column(0).into_owned();
    let witness_trace = trace_product(&h, &(&v * v.adjoint()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_sampled_trace = (0..samples)
        .map(|_| trace_product(&h, &random_psd(n, &mut rng)))
        .fold(f64::INFINITY, f64::min);
    let holds = if positive_semidefinite {
        samples == 0 || min_sampled_trace >= -1e-12
    } else {
        witness_trace < 0.0
    };
    Ok(SelfDualityReport {
        positive_semidefinite,
        min_sampled_trace,
        witness_trace,
        samples,
        holds,
    })
}

/// Hermitian real and imaginary parts of (L₀ − L)⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryCoeffs {
    pub a: CMatrix,
    pub b: CMatrix,
    /// 1-norm condition number of L₀ − L.
    pub condition: f64,
}

fn check_reference(l0: &CMatrix) -> Result<CMatrix> {
    let h = linalg::symmetrize(l0)?;
    if h.iter().any(|z| z.im != 0.0) {
        return Err(Error::contract("reference tensor L0 must be real symmetric"));
    }
    Ok(h)
}

pub fn trajectory_coeffs(l0: &CMatrix, l: &CMatrix) -> Result<TrajectoryCoeffs> {
    let l0 = check_reference(l0)?;
    if l0.shape() != l.shape() {
        return Err(Error::dimension("L0 and L must have the same shape"));
    }
    let im = linalg::im_part(l)?;
    let report = linalg::is_positive_definite(&im, 0.0)?;
    if !report.positive {
        return Err(Error::domain(format!(
            "Im L must be positive definite (smallest eigenvalue {:e})",
            report.min_eig
        )));
    }
    let diff = &l0 - l;
    let condition = linalg::condition_1norm(&diff);
    let parts = linalg::hermitian_parts(&linalg::inverse(&diff)?)?;
    Ok(TrajectoryCoeffs {
        a: parts.real_part,
        b: parts.imag_part,
        condition,
    })
}

/// L₀ together with (A_j, B_j) for every component of a tensor tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec {
    pub l0: CMatrix,
    pub coeffs: Vec<TrajectoryCoeffs>,
}

impl TrajectorySpec {
    /// Coefficients for Z = (ωε₁, …, ωε_N, ωμ₁, …, ωμ_N).
    pub fn for_tensors(l0: &CMatrix, z: &TensorTuple) -> Result<Self> {
        let coeffs = z
            .components()
            .into_iter()
            .map(|l| trajectory_coeffs(l0, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            l0: check_reference(l0)?,
            coeffs,
        })
    }

    /// Z(s): every component moved along its trajectory.
    pub fn tensors_at(&self, s: C64) -> Result<TensorTuple> {
        let comps = (0..self.coeffs.len())
            .map(|j| trajectory_point(self, j, s))
            .collect::<Result<Vec<_>>>()?;
        TensorTuple::from_components(comps)
    }
}

/// L′_j(s) = L₀ − (A_j + sB_j)⁻¹ for Im s > 0.
pub fn trajectory_point(spec: &TrajectorySpec, j: usize, s: C64) -> Result<CMatrix> {
    if !(s.im > 0.0) {
        return Err(Error::domain(format!("trajectory parameter s = {s} must satisfy Im s > 0")));
    }
    let coeffs = spec
        .coeffs
        .get(j)
        .ok_or_else(|| Error::dimension(format!("no trajectory component {j}")))?;
    let m = &coeffs.a + &coeffs.b * s;
    Ok(&spec.l0 - linalg::inverse(&m)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    /// ‖Z_j(i) − Z_j‖_F / ‖Z_j‖_F per component.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Condition numbers of L₀ − L_j.
    pub conditions: Vec<f64>,
}

/// Rebuilds Z from its trajectories at s = i.
pub fn trajectory_roundtrip(z: &TensorTuple, l0: &CMatrix) -> Result<RoundtripReport> {
    let spec = TrajectorySpec::for_tensors(l0, z)?;
    let back = spec.tensors_at(I)?;
    let deviations: Vec<f64> = z
        .components()
        .into_iter()
        .zip(back.components())
        .map(|(a, b)| linalg::relative_difference(b, a))
        .collect();
    Ok(RoundtripReport {
        max_deviation: deviations.iter().copied().fold(0.0, f64::max),
        deviations,
        conditions: spec.coeffs.iter().map(|c| c.condition).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub s: C64,
    /// h_f(s) = (Λ_{Z(s)} f, f).
    pub value: C64,
    pub cr_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryCertificate {
    pub samples: Vec<TrajectorySample>,
    pub min_im: f64,
    pub worst_cr: f64,
    pub cr_threshold: f64,
    pub pass: bool,
}

/// Samples h_f(s) along the trajectory and certifies Im h_f > 0 and analyticity in s.
pub fn herglotz_along_trajectory<F>(
    map: F,
    spec: &TrajectorySpec,
    f: &[C64; 6],
    s_grid: &[C64],
    cr_threshold: f64,
) -> Result<TrajectoryCertificate>
where
    F: Fn(&TensorTuple) -> Result<DtnMap> + Sync,
{
    if s_grid.is_empty() {
        return Err(Error::Parameter("trajectory grid must be nonempty".into()));
    }
    if let Some(s) = s_grid.iter().find(|s| !(s.im > 0.0)) {
        return Err(Error::domain(format!("trajectory grid point s = {s} is not in the upper half-plane")));
    }
    analyticity::check_tangential(f)?;
    let h_f = |s: C64| -> Result<C64> {
        let lambda = map(&spec.tensors_at(s)?)?;
        analyticity::scalar_sample(&lambda, f)
    };
    let samples = s_grid
        .par_iter()
        .map(|&s| {
            let step = analyticity::default_step(s).min(0.5 * s.im);
            Ok(TrajectorySample {
                s,
                value: h_f(s)?,
                cr_residual: analyticity::cr_residual(&h_f, s, step, Region::UpperHalfPlane)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_im = samples.iter().map(|p| p.value.im).fold(f64::INFINITY, f64::min);
    let worst_cr = samples.iter().map(|p| p.cr_residual).fold(0.0, f64::max);
    Ok(TrajectoryCertificate {
        pass: min_im > 0.0 && worst_cr < cr_threshold,
        samples,
        min_im,
        worst_cr,
        cr_threshold,
    })
}
