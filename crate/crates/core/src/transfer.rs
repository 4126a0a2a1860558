//! Tangential-field system matrix and transfer matrices of a layered stack.
//!
//! With ψ = (E₁, E₂, H₁, H₂) the tangential fields obey −iJψ′ = A(z)ψ, where
//! A is the Schur complement A = V∥∥ − V∥⊥ (V⊥⊥)⁻¹ V⊥∥ of the 6×6 Maxwell
//! symbol eliminating the normal components φ = (E₃, H₃). A is constant inside
//! each layer, so the transfer matrix is an ordered product of exponentials
//! e^{iJA·Δz}.

use crate::error::{Error, Result};
use crate::linalg::{self, c, BlockSplit, CMatrix, CVector, C64, I};
use crate::stack::{StackSpec, TensorTuple};

/// Inputs of the system matrix for one homogeneous layer.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrixInputs {
    pub omega_eps: CMatrix,
    pub omega_mu: CMatrix,
    /// Tangential wavevector (k₁, k₂).
    pub kappa: [C64; 2],
    pub c: f64,
}

/// The four V blocks of the Maxwell symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct VBlocks {
    /// 4×4.
    pub par_par: CMatrix,
    /// 4×2.
    pub par_perp: CMatrix,
    /// 2×4.
    pub perp_par: CMatrix,
    /// Diagonal entries of the 2×2 block V⊥⊥.
    pub perp_perp: [C64; 2],
}

impl VBlocks {
    pub fn new(inp: &SystemMatrixInputs) -> Result<Self> {
        let (e, m) = (&inp.omega_eps, &inp.omega_mu);
        if e.shape() != (3, 3) || m.shape() != (3, 3) {
            return Err(Error::dimension("material tensors must be 3x3"));
        }
        if !(inp.c > 0.0) {
            return Err(Error::Parameter(format!("c must be positive, got {}", inp.c)));
        }
        let s = c(1.0 / inp.c, 0.0);
        let [k1, k2] = inp.kappa;
        let z = linalg::ZERO;

        let par_par = linalg::from_rows(&[
            &[e[(0, 0)] * s, e[(0, 1)] * s, z, z],
            &[e[(1, 0)] * s, e[(1, 1)] * s, z, z],
            &[z, z, m[(0, 0)] * s, m[(0, 1)] * s],
            &[z, z, m[(1, 0)] * s, m[(1, 1)] * s],
        ]);
        let par_perp = linalg::from_rows(&[
            &[e[(0, 2)] * s, k2],
            &[e[(1, 2)] * s, -k1],
            &[-k2, m[(0, 2)] * s],
            &[k1, m[(1, 2)] * s],
        ]);
        let perp_par = linalg::from_rows(&[
            &[e[(2, 0)] * s, e[(2, 1)] * s, -k2, k1],
            &[k2, -k1, m[(2, 0)] * s, m[(2, 1)] * s],
        ]);
        let perp_perp = [e[(2, 2)] * s, m[(2, 2)] * s];
        Ok(Self {
            par_par,
            par_perp,
            perp_par,
            perp_perp,
        })
    }

    fn perp_perp_inverse(&self) -> Result<CMatrix> {
        for (d, name) in self.perp_perp.iter().zip(["eps33", "mu33"]) {
            if d.norm() == 0.0 {
                return Err(Error::Singular {
                    context: format!("V_perp_perp: omega {name} vanishes"),
                    condition: f64::INFINITY,
                });
            }
        }
        Ok(linalg::diag(&[self.perp_perp[0].inv(), self.perp_perp[1].inv()]))
    }

    /// −(V⊥⊥)⁻¹V⊥∥, the 2×4 map from ψ to φ.
    pub fn normal_map(&self) -> Result<CMatrix> {
        Ok(-(self.perp_perp_inverse()? * &self.perp_par))
    }

    pub fn system_matrix(&self) -> Result<CMatrix> {
        let a = &self.par_par + &self.par_perp * self.normal_map()?;
        linalg::ensure_finite(&a, "system matrix")?;
        Ok(a)
    }
}

/// A = V∥∥ − V∥⊥ (V⊥⊥)⁻¹ V⊥∥.
pub fn build_a(inp: &SystemMatrixInputs) -> Result<CMatrix> {
    VBlocks::new(inp)?.system_matrix()
}

/// Tangential field components (E₁, E₂, H₁, H₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialState(pub [C64; 4]);

/// Normal field components (E₃, H₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalState(pub [C64; 2]);

impl TangentialState {
    pub fn zero() -> Self {
        Self([linalg::ZERO; 4])
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.0)
    }

    pub fn from_vector(v: &CVector) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::dimension(format!("tangential state needs 4 entries, got {}", v.len())));
        }
        Ok(Self([v[0], v[1], v[2], v[3]]))
    }

    pub fn e(&self) -> [C64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn h(&self) -> [C64; 2] {
        [self.0[2], self.0[3]]
    }
}

/// φ = −(V⊥⊥)⁻¹V⊥∥ψ.
pub fn normal_components(inp: &SystemMatrixInputs, psi: &TangentialState) -> Result<NormalState> {
    let phi = VBlocks::new(inp)?.normal_map()? * psi.to_vector();
    Ok(NormalState([phi[0], phi[1]]))
}

/// e^{iJA·dz}, the propagator across a homogeneous slab of thickness `dz`.
pub fn layer_propagator(a: &CMatrix, dz: f64) -> Result<CMatrix> {
    if a.shape() != (4, 4) {
        return Err(Error::dimension("system matrix must be 4x4"));
    }
    if !dz.is_finite() {
        return Err(Error::Parameter(format!("layer step {dz} is not finite")));
    }
    linalg::mat_exp(&(linalg::flux_matrix() * a * (I * dz)))
}

/// T(z₀, z₁) with its 2×2 block decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub z0: f64,
    pub z1: f64,
    pub matrix: CMatrix,
    pub blocks: BlockSplit,
}

impl TransferMatrix {
    pub fn from_matrix(z0: f64, z1: f64, matrix: CMatrix) -> Result<Self> {
        let blocks = linalg::split_blocks(&matrix)?;
        Ok(Self {
            z0,
            z1,
            matrix,
            blocks,
        })
    }
}

/// A stack with its per-layer system matrices fixed at one (κ, Z).
#[derive(Debug, Clone)]
pub struct LayeredSystem<'s> {
    stack: &'s StackSpec,
    blocks: Vec<VBlocks>,
    system: Vec<CMatrix>,
}

impl<'s> LayeredSystem<'s> {
    pub fn new(stack: &'s StackSpec, tensors: &TensorTuple, kappa: [C64; 2]) -> Result<Self> {
        if tensors.phase_count() != stack.phase_count() || tensors.mu.len() != tensors.eps.len() {
            return Err(Error::dimension(format!(
                "stack has {} phases, tensor tuple has {}",
                stack.phase_count(),
                tensors.phase_count()
            )));
        }
        let mut blocks = Vec::with_capacity(stack.layers().len());
        let mut system = Vec::with_capacity(stack.layers().len());
        for layer in 0..stack.layers().len() {
            let p = stack.phase_of_layer(layer);
            let v = VBlocks::new(&SystemMatrixInputs {
                omega_eps: tensors.eps[p].clone(),
                omega_mu: tensors.mu[p].clone(),
                kappa,
                c: stack.c(),
            })?;
            system.push(v.system_matrix()?);
            blocks.push(v);
        }
        Ok(Self {
            stack,
            blocks,
            system,
        })
    }

    /// Evaluates the stack's own material models at ω.
    pub fn at_frequency(stack: &'s StackSpec, kappa: [C64; 2], omega: C64) -> Result<Self> {
        Self::new(stack, &stack.tensors_at(omega)?, kappa)
    }

    pub fn stack(&self) -> &StackSpec {
        self.stack
    }

    pub fn system_matrix(&self, layer: usize) -> &CMatrix {
        &self.system[layer]
    }

    pub fn v_blocks(&self, layer: usize) -> &VBlocks {
        &self.blocks[layer]
    }

    /// Transfer matrix from z0 to z1 (either order).
    pub fn transfer(&self, z0: f64, z1: f64) -> Result<TransferMatrix> {
        let a = self.stack.clamp_into(z0)?;
        let b = self.stack.clamp_into(z1)?;
        let (lo, hi) = (a.min(b), a.max(b));
        let bounds = self.stack.boundaries();
        let mut segments: Vec<(usize, f64)> = (0..self.system.len())
            .filter_map(|j| {
                let len = hi.min(bounds[j + 1]) - lo.max(bounds[j]);
                (len > 0.0).then_some((j, len))
            })
            .collect();
        let sign = if b >= a {
            1.0
        } else {
            segments.reverse();
            -1.0
        };
        let mut t = linalg::identity(4);
        for (j, len) in segments {
            t = layer_propagator(&self.system[j], sign * len)? * t;
        }
        linalg::ensure_finite(&t, "transfer matrix")?;
        TransferMatrix::from_matrix(z0, z1, t)
    }

    /// Normal components at z from the tensors of the layer owning z.
    pub fn normal_at(&self, z: f64, psi: &TangentialState) -> Result<NormalState> {
        let (layer, _) = self.stack.locate(z)?;
        let phi = self.blocks[layer].normal_map()? * psi.to_vector();
        Ok(NormalState([phi[0], phi[1]]))
    }
}

/// T(z₀, z₁) for the stack's materials at frequency ω.
pub fn transfer(stack: &StackSpec, kappa: [C64; 2], omega: C64, z0: f64, z1: f64) -> Result<TransferMatrix> {
    LayeredSystem::at_frequency(stack, kappa, omega)?.transfer(z0, z1)
}

/// Field sample ψ(z), φ(z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub z: f64,
    pub psi: TangentialState,
    pub phi: NormalState,
}

impl FieldSample {
    /// Full E = (ψ₁, ψ₂, φ₁).
    pub fn e_field(&self) -> [C64; 3] {
        [self.psi.0[0], self.psi.0[1], self.phi.0[0]]
    }

    /// Full H = (ψ₃, ψ₄, φ₂).
    pub fn h_field(&self) -> [C64; 3] {
        [self.psi.0[2], self.psi.0[3], self.phi.0[1]]
    }
}

impl LayeredSystem<'_> {
    /// ψ(z) = T(z_ref, z)ψ₀ and φ(z) at each requested z.
    pub fn field_profile(&self, psi0: &TangentialState, z_ref: f64, zs: &[f64]) -> Result<Vec<FieldSample>> {
        let psi0 = psi0.to_vector();
        zs.iter()
            .map(|&z| {
                let t = self.transfer(z_ref, z)?;
                let psi = TangentialState::from_vector(&(&t.matrix * &psi0))?;
                let phi = self.normal_at(z, &psi)?;
                Ok(FieldSample { z, psi, phi })
            })
            .collect()
    }

    /// Samples at the `n` cell midpoints of [lo, lo + n·h] inside `layer`, marching from ψ(lo).
    pub fn layer_midpoints(
        &self,
        layer: usize,
        psi_lo: &TangentialState,
        lo: f64,
        h: f64,
        n: usize,
    ) -> Result<Vec<FieldSample>> {
        let a = self
            .system
            .get(layer)
            .ok_or_else(|| Error::dimension(format!("layer {layer} out of range")))?;
        let normal = self.blocks[layer].normal_map()?;
        let step = layer_propagator(a, h)?;
        let mut v = layer_propagator(a, 0.5 * h)? * psi_lo.to_vector();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if k > 0 {
                v = &step * v;
            }
            let phi = &normal * &v;
            out.push(FieldSample {
                z: lo + (k as f64 + 0.5) * h,
                psi: TangentialState::from_vector(&v)?,
                phi: NormalState([phi[0], phi[1]]),
            });
        }
        Ok(out)
    }
}

pub fn field_profile(
    stack: &StackSpec,
    psi0: &TangentialState,
    z_ref: f64,
    kappa: [C64; 2],
    omega: C64,
    zs: &[f64],
) -> Result<Vec<FieldSample>> {
    LayeredSystem::at_frequency(stack, kappa, omega)?.field_profile(psi0, z_ref, zs)
}
