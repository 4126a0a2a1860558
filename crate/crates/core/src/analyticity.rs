//! Numerical analyticity and Herglotz certificates.
//!
//! Two complementary probes of holomorphy:
//! - the Cauchy-Riemann residual |D_x f + i·D_y f| from a centered 4-point
//!   stencil, which is ≈ 2|∂f/∂z̄| and refutes non-analytic maps;
//! - the Cauchy mean-value residual |f(z₀) − mean of f on a circle|, which
//!   converges geometrically in the number of nodes for analytic f.

use rayon::prelude::*;
use serde::Serialize;

use crate::dtn::{self, DtnOptions, TANGENTIAL_INDICES};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, C64, I, ZERO};
use crate::stack::{StackSpec, TensorTuple};
use crate::transfer::LayeredSystem;
use crate::tubular;

/// Default CR threshold for certificates.
pub const CR_THRESHOLD: f64 = 1e-5;

/// Domain of the map being probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Plane,
    UpperHalfPlane,
}

impl Region {
    pub fn contains(self, z: C64) -> bool {
        match self {
            Region::Plane => z.re.is_finite() && z.im.is_finite(),
            Region::UpperHalfPlane => z.re.is_finite() && z.im.is_finite() && z.im > 0.0,
        }
    }
}

/// h = 1e-4·max(1, |z₀|).
pub fn default_step(z0: C64) -> f64 {
    1e-4 * z0.norm().max(1.0)
}

fn stencil(z0: C64, h: f64, region: Region) -> Result<[C64; 4]> {
    if !(h > 0.0) {
        return Err(Error::Parameter(format!("stencil step must be positive, got {h}")));
    }
    let pts = [z0 + h, z0 - h, z0 + I * h, z0 - I * h];
    if let Some(p) = pts.iter().find(|p| !region.contains(**p)) {
        return Err(Error::domain(format!("stencil point {p} leaves the domain {region:?}")));
    }
    Ok(pts)
}

/// Unnormalized CR defect and the scale used to normalize it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrDefect {
    /// |D_x f + i·D_y f|.
    pub raw: f64,
    /// max(|f| on the stencil, 1).
    pub scale: f64,
}

impl CrDefect {
    pub fn residual(&self) -> f64 {
        self.raw / self.scale
    }
}

pub fn cr_defect<F>(f: &F, z0: C64, h: f64, region: Region) -> Result<CrDefect>
where
    F: Fn(C64) -> Result<C64> + ?Sized,
{
    let pts = stencil(z0, h, region)?;
    let v = [f(pts[0])?, f(pts[1])?, f(pts[2])?, f(pts[3])?];
    let dx = (v[0] - v[1]) / (2.0 * h);
    let dy = (v[2] - v[3]) / (2.0 * h);
    Ok(CrDefect {
        raw: (dx + I * dy).norm(),
        scale: v.iter().map(|z| z.norm()).fold(1.0, f64::max),
    })
}

pub fn cr_residual<F>(f: &F, z0: C64, h: f64, region: Region) -> Result<f64>
where
    F: Fn(C64) -> Result<C64> + ?Sized,
{
    Ok(cr_defect(f, z0, h, region)?.residual())
}

/// Largest entrywise CR residual of a matrix-valued map.
pub fn cr_residual_matrix<F>(f: &F, z0: C64, h: f64, region: Region) -> Result<f64>
where
    F: Fn(C64) -> Result<CMatrix> + ?Sized,
{
    let pts = stencil(z0, h, region)?;
    let v = pts.iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;
    if v.iter().any(|m| m.shape() != v[0].shape()) {
        return Err(Error::dimension("matrix map changed shape across the stencil"));
    }
    let mut worst = 0.0f64;
    for k in 0..v[0].len() {
        let dx = (v[0][k] - v[1][k]) / (2.0 * h);
        let dy = (v[2][k] - v[3][k]) / (2.0 * h);
        let scale = v.iter().map(|m| m[k].norm()).fold(1.0, f64::max);
        worst = worst.max((dx + I * dy).norm() / scale);
    }
    Ok(worst)
}

fn circle(z0: C64, radius: f64, points: usize, region: Region) -> Result<Vec<C64>> {
    if !(radius > 0.0) || points == 0 {
        return Err(Error::Parameter("Cauchy circle needs positive radius and nodes".into()));
    }
    let inside = match region {
        Region::Plane => true,
        Region::UpperHalfPlane => z0.im - radius > 0.0,
    };
    if !inside || !region.contains(z0) {
        return Err(Error::domain(format!(
            "disk of radius {radius} around {z0} leaves the domain {region:?}"
        )));
    }
    Ok((0..points)
        .map(|m| z0 + C64::from_polar(radius, std::f64::consts::TAU * m as f64 / points as f64))
        .collect())
}

/// |f(z₀) − (1/M)Σ f(z₀ + r·e^{iθ_m})| / max(|f(z₀)|, 1).
pub fn cauchy_residual<F>(f: &F, z0: C64, radius: f64, points: usize, region: Region) -> Result<f64>
where
    F: Fn(C64) -> Result<C64> + ?Sized,
{
    let nodes = circle(z0, radius, points, region)?;
    let center = f(z0)?;
    let mut sum = ZERO;
    for z in nodes {
        sum += f(z)?;
    }
    Ok((center - sum / points as f64).norm() / center.norm().max(1.0))
}

/// Matrix version: largest entrywise gap normalized by max(max|f(z₀)|, 1).
pub fn cauchy_residual_matrix<F>(f: &F, z0: C64, radius: f64, points: usize, region: Region) -> Result<f64>
where
    F: Fn(C64) -> Result<CMatrix> + ?Sized,
{
    let nodes = circle(z0, radius, points, region)?;
    let center = f(z0)?;
    let mut sum = CMatrix::zeros(center.nrows(), center.ncols());
    for z in nodes {
        sum += f(z)?;
    }
    let gap = &center - sum / c(points as f64, 0.0);
    Ok(linalg::max_abs(&gap) / linalg::max_abs(&center).max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticityReport {
    pub point: C64,
    pub cr_residual: f64,
    pub cauchy_residual: f64,
    pub step: f64,
    pub radius: f64,
}

/// Step, circle radius and circle nodes for a single-point probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    /// `None` means [`default_step`].
    pub step: Option<f64>,
    /// `None` picks a radius well inside the domain.
    pub radius: Option<f64>,
    pub cauchy_points: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            step: None,
            radius: None,
            cauchy_points: 32,
        }
    }
}

fn probe<F>(f: &F, z0: C64, step: f64, radius: f64, points: usize, region: Region) -> Result<AnalyticityReport>
where
    F: Fn(C64) -> Result<CMatrix>,
{
    Ok(AnalyticityReport {
        point: z0,
        cr_residual: cr_residual_matrix(f, z0, step, region)?,
        cauchy_residual: cauchy_residual_matrix(f, z0, radius, points, region)?,
        step,
        radius,
    })
}

/// Analyticity of ω ↦ Λ_t(ω) at ω₀ ∈ ℂ⁺.
pub fn frequency_analyticity(
    stack: &StackSpec,
    kappa: [f64; 2],
    omega: C64,
    z0: f64,
    z1: f64,
    opts: &ProbeOptions,
) -> Result<AnalyticityReport> {
    let f = |w: C64| Ok(dtn::dtn(stack, kappa, w, z0, z1)?.map.tangential);
    let step = opts.step.unwrap_or_else(|| default_step(omega));
    let radius = opts.radius.unwrap_or(0.5 * omega.im);
    probe(&f, omega, step, radius, opts.cauchy_points, Region::UpperHalfPlane)
}

/// Analyticity of the transfer matrix in one complex component of κ.
pub fn kappa_analyticity(
    stack: &StackSpec,
    kappa: [C64; 2],
    axis: usize,
    omega: C64,
    z0: f64,
    z1: f64,
    opts: &ProbeOptions,
) -> Result<AnalyticityReport> {
    if axis > 1 {
        return Err(Error::dimension(format!("kappa axis must be 0 or 1, got {axis}")));
    }
    let tensors = stack.tensors_at(omega)?;
    let f = |k: C64| {
        let mut kk = kappa;
        kk[axis] = k;
        Ok(LayeredSystem::new(stack, &tensors, kk)?.transfer(z0, z1)?.matrix)
    };
    let at = kappa[axis];
    let step = opts.step.unwrap_or_else(|| default_step(at));
    let radius = opts.radius.unwrap_or(0.25);
    probe(&f, at, step, radius, opts.cauchy_points, Region::Plane)
}

/// One complex coordinate of one tensor in Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SliceSpec {
    /// Index into (ωε₁, …, ωε_N, ωμ₁, …, ωμ_N).
    pub component: usize,
    /// Index of the Hermitian basis element, in the coordinate order of [`tubular::phi`].
    pub basis_index: usize,
}

/// Analyticity of ζ ↦ Λ_t(Z + ζ·B_a·e_component), with B_a a Hermitian basis element.
///
/// Re ζ moves the Hermitian part of the tensor along B_a and Im ζ moves its
/// imaginary part along B_a, so both mirrored entries change together.
pub fn slice_analyticity(
    stack: &StackSpec,
    base: &TensorTuple,
    kappa: [f64; 2],
    z0: f64,
    z1: f64,
    slice: SliceSpec,
    opts: &ProbeOptions,
) -> Result<AnalyticityReport> {
    let comps = base.components();
    let target = comps
        .get(slice.component)
        .ok_or_else(|| Error::dimension(format!("no tensor component {}", slice.component)))?;
    let n = target.nrows();
    let b = tubular::basis(n)
        .into_iter()
        .nth(slice.basis_index)
        .ok_or_else(|| Error::dimension(format!("no basis element {} for size {n}", slice.basis_index)))?;
    let parts = linalg::hermitian_parts(target)?;
    let point = c(
        tubular::trace_product(&parts.real_part, &b),
        tubular::trace_product(&parts.imag_part, &b),
    );

    let im_margin = linalg::min_eigenvalue(&parts.imag_part)?;
    let step = opts.step.unwrap_or(1e-4);
    let radius = opts.radius.unwrap_or(0.25 * im_margin.max(0.0));
    let reach = step.max(radius);
    for t in [reach, -reach] {
        let moved = &parts.imag_part + &b * c(t, 0.0);
        let m = linalg::min_eigenvalue(&moved)?;
        if !(m > 0.0) {
            return Err(Error::domain(format!(
                "slice perturbation of size {reach:e} leaves the positive cone (min eig {m:e})"
            )));
        }
    }

    let f = |zeta: C64| {
        let mut z = base.clone();
        let comp = z.component_mut(slice.component).expect("checked");
        *comp += &b * (zeta - point);
        Ok(dtn::dtn_from_tensors(stack, &z, kappa, z0, z1, &DtnOptions::default())?
            .map
            .tangential)
    };
    probe(&f, point, step, radius, opts.cauchy_points, Region::Plane)
}

/// Options for [`herglotz_certify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub cr_threshold: f64,
    /// The CR step is `step_factor·max(1, |ω|)`, capped at Im ω / 2.
    pub step_factor: f64,
    pub dtn: DtnOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            cr_threshold: CR_THRESHOLD,
            step_factor: 1e-4,
            dtn: DtnOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCertificate {
    pub omega: C64,
    /// Smallest eigenvalue of Im of the tangential compression.
    pub min_im_eig: f64,
    pub cr_residual: f64,
    pub step: f64,
    pub flux_min_eig: f64,
    pub condition_t12: f64,
    pub anomalies: Vec<String>,
}

impl PointCertificate {
    pub fn passed(&self, cr_threshold: f64) -> bool {
        self.anomalies.is_empty() && self.min_im_eig > 0.0 && self.cr_residual < cr_threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HerglotzCertificate {
    pub grid: Vec<C64>,
    pub points: Vec<PointCertificate>,
    /// Worst (smallest) Im-positivity margin over the grid.
    pub min_im_eig: f64,
    /// Worst (largest) CR residual over the grid.
    pub worst_cr: f64,
    pub cr_threshold: f64,
    pub pass: bool,
}

/// Rectangular grid of frequencies, real part outer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub re_steps: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_steps: usize,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

impl OmegaGrid {
    pub fn points(&self) -> Result<Vec<C64>> {
        if self.re_steps == 0 || self.im_steps == 0 {
            return Err(Error::Parameter("frequency grid must be nonempty".into()));
        }
        let vals = [self.re_min, self.re_max, self.im_min, self.im_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("frequency grid bounds must be finite".into()));
        }
        let ims = linspace(self.im_min, self.im_max, self.im_steps);
        Ok(linspace(self.re_min, self.re_max, self.re_steps)
            .into_iter()
            .flat_map(|re| ims.iter().map(move |&im| c(re, im)))
            .collect())
    }
}

fn certify_point(
    stack: &StackSpec,
    kappa: [f64; 2],
    omega: C64,
    z0: f64,
    z1: f64,
    opts: &CertifyOptions,
) -> Result<PointCertificate> {
    let step = (opts.step_factor * omega.norm().max(1.0)).min(0.5 * omega.im);
    let eval = |w: C64| dtn::dtn_with_options(stack, kappa, w, z0, z1, &opts.dtn);
    let failed = |e: Error| PointCertificate {
        omega,
        min_im_eig: f64::NAN,
        cr_residual: f64::NAN,
        step,
        flux_min_eig: f64::NAN,
        condition_t12: f64::NAN,
        anomalies: vec![e.to_string()],
    };
    let out = match eval(omega) {
        Ok(out) => out,
        Err(e @ (Error::Singular { .. } | Error::NumericRange(_))) => return Ok(failed(e)),
        Err(e) => return Err(e),
    };
    let f = |w: C64| Ok(eval(w)?.map.tangential);
    let cr = match cr_residual_matrix(&f, omega, step, Region::UpperHalfPlane) {
        Ok(r) => r,
        Err(e @ (Error::Singular { .. } | Error::NumericRange(_))) => return Ok(failed(e)),
        Err(e) => return Err(e),
    };
    let cert = out.certificate;
    Ok(PointCertificate {
        omega,
        min_im_eig: cert.im_tangential_min_eig,
        cr_residual: cr,
        step,
        flux_min_eig: cert.well_defined.flux_min_eig,
        condition_t12: cert.well_defined.condition_t12,
        anomalies: cert.anomalies,
    })
}

/// Certifies that ω ↦ Λ is a matrix Herglotz function on the grid.
pub fn herglotz_certify(
    stack: &StackSpec,
    kappa: [f64; 2],
    grid: &[C64],
    z0: f64,
    z1: f64,
    opts: &CertifyOptions,
) -> Result<HerglotzCertificate> {
    if grid.is_empty() {
        return Err(Error::Parameter("frequency grid must be nonempty".into()));
    }
    if let Some(w) = grid.iter().find(|w| !Region::UpperHalfPlane.contains(**w)) {
        return Err(Error::domain(format!("grid point omega = {w} is not in the upper half-plane")));
    }
    if kappa.iter().any(|k| !k.is_finite()) {
        return Err(Error::domain("tangential wavevector must be finite and real"));
    }
    let points = grid
        .par_iter()
        .map(|&w| certify_point(stack, kappa, w, z0, z1, opts))
        .collect::<Result<Vec<_>>>()?;
    let min_im_eig = points.iter().map(|p| p.min_im_eig).fold(f64::INFINITY, nan_min);
    let worst_cr = points.iter().map(|p| p.cr_residual).fold(0.0, nan_max);
    Ok(HerglotzCertificate {
        pass: points.iter().all(|p| p.passed(opts.cr_threshold)),
        grid: grid.to_vec(),
        points,
        min_im_eig,
        worst_cr,
        cr_threshold: opts.cr_threshold,
    })
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Requires f₃ = f₆ = 0 and f ≠ 0.
pub fn check_tangential(f: &[C64; 6]) -> Result<()> {
    if f[2] != ZERO || f[5] != ZERO {
        return Err(Error::contract("boundary data must be tangential: components 3 and 6 must vanish"));
    }
    if TANGENTIAL_INDICES.iter().all(|&k| f[k] == ZERO) {
        return Err(Error::contract("boundary data must be nonzero"));
    }
    Ok(())
}

/// (Λf, f) = Σ_k (Λf)_k·conj(f_k).
pub fn scalar_sample(map: &dtn::DtnMap, f: &[C64; 6]) -> Result<C64> {
    check_tangential(f)?;
    let v = CVector::from_column_slice(f);
    Ok((v.adjoint() * &map.matrix * &v)[(0, 0)])
}
