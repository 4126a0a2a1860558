//! Electromagnetic Dirichlet-to-Neumann map of a layered slab.
//!
//! Pipeline: transfer matrix T(z₀,z₁) → flux form J − T*JT (positivity
//! certifies that every 2×2 block of T is invertible) → Γ, which maps the
//! electric tangential data (u₁; u₀) at both faces to the magnetic data
//! (v₁; v₀) → the 6×6 map Λ = i·diag(P_t,P_t)·Γ·diag(P_t,P_t)ᵀ·diag(e₃×, −e₃×).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::herglotz::{passivity_check, PassivityCertificate};
use crate::linalg::{self, c, BlockSplit, CMatrix, CVector, C64, I};
use crate::stack::{StackSpec, TensorTuple};
use crate::transfer::{LayeredSystem, TangentialState, TransferMatrix};

/// Rows/columns of the 6×6 map that carry tangential components.
pub const TANGENTIAL_INDICES: [usize; 4] = [0, 1, 3, 4];

/// Matrix of v ↦ e₃ × v.
pub fn e3_cross() -> CMatrix {
    linalg::from_real_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])
}

/// Embedding P_t: ℂ² → ℂ³, (a, b) ↦ (a, b, 0).
pub fn tangential_embedding() -> CMatrix {
    linalg::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]])
}

/// Hermitian flux form J − T*JT.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxForm {
    pub matrix: CMatrix,
    pub blocks: BlockSplit,
    pub min_eig: f64,
}

/// J − T*JT, symmetrized to remove rounding asymmetry.
pub fn flux_form(t: &TransferMatrix) -> FluxForm {
    let j = linalg::flux_matrix();
    let raw = &j - t.matrix.adjoint() * &j * &t.matrix;
    let matrix = (&raw + raw.adjoint()) * c(0.5, 0.0);
    let min_eig = linalg::min_eigenvalue(&matrix).unwrap_or(f64::NAN);
    let blocks = linalg::split_blocks(&matrix).expect("4x4");
    FluxForm {
        matrix,
        blocks,
        min_eig,
    }
}

/// The flux form assembled blockwise from T₁₁…T₂₂:
///
/// ```text
/// [ −2Re(T₁₁*ρT₂₁)     ρ − (T₂₁*ρ*T₁₂ + T₁₁*ρT₂₂) ]
/// [ (same)*            −2Re(T₁₂*ρT₂₂)             ]
/// ```
///
/// with Re M = (M + M*)/2.
pub fn flux_form_from_blocks(t: &BlockSplit) -> CMatrix {
    let r = linalg::rho();
    let re = |m: CMatrix| (&m + m.adjoint()) * c(0.5, 0.0);
    let d1 = re(t.m11.adjoint() * &r * &t.m21) * c(-2.0, 0.0);
    let d2 = re(t.m12.adjoint() * &r * &t.m22) * c(-2.0, 0.0);
    let off = &r - (t.m21.adjoint() * r.adjoint() * &t.m12 + t.m11.adjoint() * &r * &t.m22);
    linalg::join_blocks(&BlockSplit {
        m11: d1,
        m21: off.adjoint(),
        m12: off,
        m22: d2,
    })
    .expect("2x2 blocks")
}

/// Well-definedness certificate for Γ and Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellDefinedCertificate {
    pub flux_positive: bool,
    pub flux_min_eig: f64,
    pub tol: f64,
    /// Invertibility of T₁₁, T₁₂, T₂₁, T₂₂.
    pub blocks_invertible: [bool; 4],
    pub block_conditions: [f64; 4],
    pub condition_t12: f64,
}

/// Default flux positivity threshold, 1e-10·‖J − T*JT‖_F.
pub fn default_flux_tol(flux: &FluxForm) -> f64 {
    linalg::default_pd_tol(&flux.matrix)
}

pub fn check_well_defined(t: &TransferMatrix, tol: f64) -> WellDefinedCertificate {
    let flux = flux_form(t);
    let block_conditions = t.blocks.as_array().map(linalg::condition_1norm);
    WellDefinedCertificate {
        flux_positive: flux.min_eig > tol,
        flux_min_eig: flux.min_eig,
        tol,
        blocks_invertible: block_conditions.map(|k| k <= linalg::SINGULAR_CONDITION),
        block_conditions,
        condition_t12: block_conditions[1],
    }
}

/// Γ in 2×2 block form.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    pub matrix: CMatrix,
    pub blocks: BlockSplit,
}

/// Γ = [[T₂₂T₁₂⁻¹, T₂₁ − T₂₂T₁₂⁻¹T₁₁], [T₁₂⁻¹, −T₁₂⁻¹T₁₁]].
pub fn gamma(t: &TransferMatrix) -> Result<GammaMatrix> {
    let b = &t.blocks;
    let t12_inv = linalg::inverse(&b.m12).map_err(|e| match e {
        Error::Singular { condition, .. } => Error::Singular {
            context: "T12 block of the transfer matrix".into(),
            condition,
        },
        other => other,
    })?;
    let t12_inv_t11 = &t12_inv * &b.m11;
    let blocks = BlockSplit {
        m11: &b.m22 * &t12_inv,
        m12: &b.m21 - &b.m22 * &t12_inv_t11,
        m21: t12_inv,
        m22: -t12_inv_t11,
    };
    Ok(GammaMatrix {
        matrix: linalg::join_blocks(&blocks)?,
        blocks,
    })
}

impl GammaMatrix {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        Ok(Self {
            blocks: linalg::split_blocks(&matrix)?,
            matrix,
        })
    }
}

/// The 6×6 DtN matrix with its 3×3 blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DtnMap {
    pub matrix: CMatrix,
    /// Λ₁₁, Λ₁₂, Λ₂₁, Λ₂₂.
    pub blocks: [CMatrix; 4],
    /// Rows and columns 1, 2, 4, 5 of the full map.
    pub tangential: CMatrix,
}

impl DtnMap {
    /// Smallest eigenvalue of Im of the tangential compression.
    pub fn im_tangential_min_eig(&self) -> Result<f64> {
        linalg::min_eigenvalue(&linalg::im_part(&self.tangential)?)
    }
}

pub fn lambda(g: &GammaMatrix) -> DtnMap {
    let pt = tangential_embedding();
    let e3 = e3_cross();
    let wrap = |block: &CMatrix, factor: C64| &pt * block * pt.transpose() * &e3 * factor;
    let blocks = [
        wrap(&g.blocks.m11, I),
        wrap(&g.blocks.m12, -I),
        wrap(&g.blocks.m21, I),
        wrap(&g.blocks.m22, -I),
    ];
    let mut matrix = CMatrix::zeros(6, 6);
    for (k, b) in blocks.iter().enumerate() {
        matrix.view_mut((3 * (k / 2), 3 * (k % 2)), (3, 3)).copy_from(b);
    }
    let tangential = matrix.select_rows(&TANGENTIAL_INDICES).select_columns(&TANGENTIAL_INDICES);
    DtnMap {
        matrix,
        blocks,
        tangential,
    }
}

/// Thresholds for the DtN pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtnOptions {
    /// Flux-form positivity threshold; `None` means [`default_flux_tol`].
    pub flux_tol: Option<f64>,
    /// Threshold for the material passivity gate.
    pub passivity_tol: f64,
}

impl Default for DtnOptions {
    fn default() -> Self {
        Self {
            flux_tol: None,
            passivity_tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DtnCertificate {
    pub well_defined: WellDefinedCertificate,
    /// One entry per material phase.
    pub passivity: Vec<PassivityCertificate>,
    pub im_tangential_min_eig: f64,
    /// Outcomes that contradict the well-posedness theorem, with margins.
    pub anomalies: Vec<String>,
}

impl DtnCertificate {
    pub fn passed(&self) -> bool {
        self.anomalies.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtnOutcome {
    pub map: DtnMap,
    pub transfer: TransferMatrix,
    pub gamma: GammaMatrix,
    pub certificate: DtnCertificate,
}

fn real_kappa(kappa: [f64; 2]) -> Result<[C64; 2]> {
    if kappa.iter().any(|k| !k.is_finite()) {
        return Err(Error::domain("tangential wavevector must be finite and real"));
    }
    Ok(kappa.map(|k| c(k, 0.0)))
}

fn check_faces(stack: &StackSpec, z0: f64, z1: f64) -> Result<()> {
    stack.clamp_into(z0)?;
    stack.clamp_into(z1)?;
    if !(z0 < z1) {
        return Err(Error::domain(format!("need z0 < z1, got z0 = {z0}, z1 = {z1}")));
    }
    Ok(())
}

/// Λ(z₀, z₁) for an explicit tensor tuple Z with every Im part positive definite.
pub fn dtn_from_tensors(
    stack: &StackSpec,
    tensors: &TensorTuple,
    kappa: [f64; 2],
    z0: f64,
    z1: f64,
    opts: &DtnOptions,
) -> Result<DtnOutcome> {
    check_faces(stack, z0, z1)?;
    let kappa = real_kappa(kappa)?;
    let passivity: Vec<_> = tensors
        .eps
        .iter()
        .zip(&tensors.mu)
        .map(|(e, m)| passivity_check(e, m, opts.passivity_tol))
        .collect();
    if let Some(p) = passivity.iter().position(|p| !p.ok) {
        let cert = passivity[p];
        return Err(Error::domain(format!(
            "phase {p} is not passive (min eig Im eps {:e}, Im mu {:e})",
            cert.min_eig_eps, cert.min_eig_mu
        )));
    }

    let system = LayeredSystem::new(stack, tensors, kappa)?;
    let transfer = system.transfer(z0, z1)?;
    let flux = flux_form(&transfer);
    let tol = opts.flux_tol.unwrap_or_else(|| default_flux_tol(&flux));
    let well_defined = check_well_defined(&transfer, tol);
    let mut anomalies = Vec::new();
    if !well_defined.flux_positive {
        anomalies.push(format!(
            "flux form J - T*JT not positive definite: min eigenvalue {:e} <= tol {:e}",
            well_defined.flux_min_eig, tol
        ));
    }
    let gamma = gamma(&transfer)?;
    let map = lambda(&gamma);
    let im_tangential_min_eig = map.im_tangential_min_eig()?;
    if !(im_tangential_min_eig > 0.0) {
        anomalies.push(format!(
            "Im of tangential DtN compression not positive definite: min eigenvalue {im_tangential_min_eig:e}"
        ));
    }
    Ok(DtnOutcome {
        map,
        transfer,
        gamma,
        certificate: DtnCertificate {
            well_defined,
            passivity,
            im_tangential_min_eig,
            anomalies,
        },
    })
}

/// Λ(z₀, z₁) at frequency ω ∈ ℂ⁺ and real tangential wavevector κ.
pub fn dtn_with_options(
    stack: &StackSpec,
    kappa: [f64; 2],
    omega: C64,
    z0: f64,
    z1: f64,
    opts: &DtnOptions,
) -> Result<DtnOutcome> {
    if !(omega.im > 0.0) || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::domain(format!("omega = {omega} must satisfy Im omega > 0")));
    }
    check_faces(stack, z0, z1)?;
    dtn_from_tensors(stack, &stack.tensors_at(omega)?, kappa, z0, z1, opts)
}

pub fn dtn(stack: &StackSpec, kappa: [f64; 2], omega: C64, z0: f64, z1: f64) -> Result<DtnOutcome> {
    dtn_with_options(stack, kappa, omega, z0, z1, &DtnOptions::default())
}

/// Applies Λ to the traces E×n at the top (z₁) and bottom (z₀) faces.
pub fn apply_dtn(map: &DtnMap, f_top: [C64; 3], f_bottom: [C64; 3]) -> ([C64; 3], [C64; 3]) {
    let mut f = f_top.to_vec();
    f.extend_from_slice(&f_bottom);
    let g = &map.matrix * CVector::from_vec(f);
    ([g[0], g[1], g[2]], [g[3], g[4], g[5]])
}

/// Two sides of the complex-frequency energy balance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    /// \[ψ(z₀),ψ(z₀)\] − \[ψ(z₁),ψ(z₁)\] with \[ψ,ψ\] = (c/16π)(Jψ,ψ).
    pub boundary_flux: f64,
    /// (1/8π)∫ (H, Im(ωμ)H) + (E, Im(ωε)E) dz by composite midpoint rule.
    pub absorption_integral: f64,
    pub relative_gap: f64,
    pub quad_points: usize,
}

/// c/16π · (Jψ, ψ).
pub fn indefinite_product(c_light: f64, psi: &TangentialState) -> f64 {
    let v = psi.to_vector();
    let form = v.adjoint() * linalg::flux_matrix() * &v;
    c_light / (16.0 * PI) * form[(0, 0)].re
}

fn quadratic_form(m: &CMatrix, x: &[C64; 3]) -> f64 {
    let v = CVector::from_column_slice(x);
    (v.adjoint() * m * &v)[(0, 0)].re
}

/// Energy balance for the solution with ψ(z₀) = ψ₀.
pub fn energy_balance(
    stack: &StackSpec,
    psi0: &TangentialState,
    kappa: [f64; 2],
    omega: C64,
    z0: f64,
    z1: f64,
    quad_points: usize,
) -> Result<EnergyReport> {
    if !(omega.im > 0.0) {
        return Err(Error::domain(format!("omega = {omega} must satisfy Im omega > 0")));
    }
    check_faces(stack, z0, z1)?;
    if quad_points == 0 {
        return Err(Error::Parameter("quadrature needs at least one point".into()));
    }
    let tensors = stack.tensors_at(omega)?;
    let system = LayeredSystem::new(stack, &tensors, real_kappa(kappa)?)?;

    let psi1 = TangentialState::from_vector(&(&system.transfer(z0, z1)?.matrix * psi0.to_vector()))?;
    let boundary_flux =
        indefinite_product(stack.c(), psi0) - indefinite_product(stack.c(), &psi1);

    let im_eps: Vec<CMatrix> = tensors.eps.iter().map(linalg::im_part).collect::<Result<_>>()?;
    let im_mu: Vec<CMatrix> = tensors.mu.iter().map(linalg::im_part).collect::<Result<_>>()?;
    let bounds = stack.boundaries();
    let total = z1 - z0;
    let mut integral = 0.0;
    let mut used = 0;
    let mut psi_lo = *psi0;
    for layer in 0..stack.layers().len() {
        let lo = z0.max(bounds[layer]);
        let hi = z1.min(bounds[layer + 1]);
        if hi <= lo {
            continue;
        }
        let n = ((quad_points as f64 * (hi - lo) / total).round() as usize).max(1);
        let h = (hi - lo) / n as f64;
        let p = stack.phase_of_layer(layer);
        let samples = system.layer_midpoints(layer, &psi_lo, lo, h, n)?;
        psi_lo = TangentialState::from_vector(&(&system.transfer(lo, hi)?.matrix * psi_lo.to_vector()))?;
        for sample in samples {
            integral += h
                * (quadratic_form(&im_mu[p], &sample.h_field())
                    + quadratic_form(&im_eps[p], &sample.e_field()));
        }
        used += n;
    }
    let absorption_integral = integral / (8.0 * PI);
    let scale = boundary_flux.abs().max(absorption_integral.abs());
    let relative_gap = if scale > 0.0 {
        (boundary_flux - absorption_integral).abs() / scale
    } else {
        0.0
    };
    Ok(EnergyReport {
        boundary_flux,
        absorption_integral,
        relative_gap,
        quad_points: used,
    })
}
