//! Matrix-valued Herglotz models for ω ↦ ωε(ω) and ω ↦ ωμ(ω).
//!
//! A discrete model is the Nevanlinna integral representation with finitely
//! many point masses,
//!
//! ```text
//! h(z) = α z + β + Σ_k W_k [ (λ_k − z)⁻¹ − λ_k / (1 + λ_k²) ]
//! ```
//!
//! with α ⪰ 0, β Hermitian, λ_k real and W_k ⪰ 0. Drude media and
//! frequency-independent lossless media are kept as separate variants behind
//! the same evaluation interface.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};

/// PSD acceptance: smallest eigenvalue ≥ −`PSD_TOL`·‖M‖_F.
const PSD_TOL: f64 = 1e-12;

fn check_psd(m: &CMatrix, what: &str) -> Result<()> {
    linalg::ensure_finite(m, what)?;
    let min = linalg::min_eigenvalue(m).map_err(|e| Error::Parameter(format!("{what}: {e}")))?;
    if min < -PSD_TOL * m.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Parameter(format!(
            "{what} must be positive semidefinite (smallest eigenvalue {min:e})"
        )));
    }
    Ok(())
}

fn check_upper_half_plane(z: C64) -> Result<()> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "evaluation point {z} is not in the open upper half-plane"
        )))
    }
}

/// Finitely supported measure: `α z + β + Σ W_k [(λ_k − z)⁻¹ − λ_k/(1+λ_k²)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHerglotz {
    alpha: CMatrix,
    beta: CMatrix,
    poles: Vec<f64>,
    weights: Vec<CMatrix>,
}

impl DiscreteHerglotz {
    pub fn new(alpha: CMatrix, beta: CMatrix, poles: Vec<f64>, weights: Vec<CMatrix>) -> Result<Self> {
        let n = alpha.nrows();
        if n == 0 || alpha.ncols() != n || beta.shape() != (n, n) {
            return Err(Error::dimension("alpha and beta must be square of equal size"));
        }
        if poles.len() != weights.len() {
            return Err(Error::dimension(format!(
                "{} poles but {} weights",
                poles.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.shape() != (n, n)) {
            return Err(Error::dimension(format!(
                "weight is {}x{}, expected {n}x{n}",
                w.nrows(),
                w.ncols()
            )));
        }
        if let Some(p) = poles.iter().find(|p| !p.is_finite()) {
            return Err(Error::Parameter(format!("pole {p} is not finite")));
        }
        check_psd(&alpha, "linear coefficient")?;
        linalg::ensure_finite(&beta, "constant term")?;
        if linalg::hermitian_defect(&beta) > linalg::HERMITIAN_TOL {
            return Err(Error::Parameter("constant term must be Hermitian".into()));
        }
        for (k, w) in weights.iter().enumerate() {
            check_psd(w, &format!("weight {k}"))?;
        }
        Ok(Self {
            alpha,
            beta,
            poles,
            weights,
        })
    }

    /// Scalar (1×1) model.
    pub fn scalar(alpha: f64, beta: f64, poles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let one = |x: f64| CMatrix::from_element(1, 1, c(x, 0.0));
        Self::new(
            one(alpha),
            one(beta),
            poles,
            weights.into_iter().map(one).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn weights(&self) -> &[CMatrix] {
        &self.weights
    }

    /// The model h̃ with (α, −β, −λ_k, W_k); it satisfies h̃(−z̄) = −h(z)*.
    pub fn reflected(&self) -> Self {
        Self {
            alpha: self.alpha.clone(),
            beta: -&self.beta,
            poles: self.poles.iter().map(|p| -p).collect(),
            weights: self.weights.clone(),
        }
    }

    fn continue_at(&self, z: C64) -> Result<CMatrix> {
        let mut h = &self.alpha * z + &self.beta;
        for (&lambda, w) in self.poles.iter().zip(&self.weights) {
            let coeff = (c(lambda, 0.0) - z).inv() - c(lambda / (1.0 + lambda * lambda), 0.0);
            h += w * coeff;
        }
        linalg::ensure_finite(&h, "Herglotz model value")?;
        Ok(h)
    }
}

/// Drude response ω ↦ ω − ω_p²/(ω + iγ), applied isotropically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drude {
    pub plasma_freq: f64,
    pub collision_rate: f64,
}

impl Drude {
    pub fn new(plasma_freq: f64, collision_rate: f64) -> Result<Self> {
        if !(plasma_freq > 0.0) || !plasma_freq.is_finite() {
            return Err(Error::Parameter(format!(
                "plasma frequency must be positive, got {plasma_freq}"
            )));
        }
        if !(collision_rate >= 0.0) || !collision_rate.is_finite() {
            return Err(Error::Parameter(format!(
                "collision rate must be nonnegative, got {collision_rate}"
            )));
        }
        Ok(Self {
            plasma_freq,
            collision_rate,
        })
    }

    pub fn value(&self, omega: C64) -> C64 {
        omega - self.plasma_freq * self.plasma_freq / (omega + c(0.0, self.collision_rate))
    }
}

/// A matrix-valued Herglotz function of frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum HerglotzModel {
    Discrete(DiscreteHerglotz),
    /// Drude response times the `dim`×`dim` identity.
    Drude { drude: Drude, dim: usize },
    /// Frequency-independent lossless medium: h(ω) = ω·value with value Hermitian ⪰ 0.
    Constant { value: CMatrix },
}

impl HerglotzModel {
    pub fn constant(value: CMatrix) -> Result<Self> {
        if value.nrows() == 0 || value.nrows() != value.ncols() {
            return Err(Error::dimension("constant tensor must be square"));
        }
        if linalg::hermitian_defect(&value) > linalg::HERMITIAN_TOL {
            return Err(Error::Parameter("constant tensor must be Hermitian".into()));
        }
        check_psd(&value, "constant tensor")?;
        Ok(Self::Constant { value })
    }

    /// ω·I_n, the vacuum response in units where the vacuum constants are one.
    pub fn vacuum(dim: usize) -> Self {
        Self::Constant {
            value: linalg::identity(dim),
        }
    }

    pub fn drude(plasma_freq: f64, collision_rate: f64, dim: usize) -> Result<Self> {
        Ok(Self::Drude {
            drude: Drude::new(plasma_freq, collision_rate)?,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Discrete(m) => m.dim(),
            Self::Drude { dim, .. } => *dim,
            Self::Constant { value } => value.nrows(),
        }
    }

    /// Value on the open upper half-plane.
    pub fn eval(&self, z: C64) -> Result<CMatrix> {
        check_upper_half_plane(z)?;
        self.continue_at(z)
    }

    /// Analytic continuation of the same formula to any point where it is finite.
    ///
    /// Used by transfer-matrix evaluation, which is meaningful off ℂ⁺; no
    /// positivity is implied there.
    pub fn continue_at(&self, z: C64) -> Result<CMatrix> {
        let out = match self {
            Self::Discrete(m) => return m.continue_at(z),
            Self::Drude { drude, dim } => linalg::identity(*dim) * drude.value(z),
            Self::Constant { value } => value * z,
        };
        linalg::ensure_finite(&out, "Herglotz model value")?;
        Ok(out)
    }
}

/// Evaluates `model` at `z` with Im z > 0.
pub fn eval_herglotz(model: &HerglotzModel, z: C64) -> Result<CMatrix> {
    model.eval(z)
}

/// Scalar Drude model ωε(ω) = ω − ω_p²/(ω + iγ).
pub fn make_drude(plasma_freq: f64, collision_rate: f64) -> Result<HerglotzModel> {
    HerglotzModel::drude(plasma_freq, collision_rate, 1)
}

/// Permittivity and permeability models of one material phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub label: String,
    eps: HerglotzModel,
    mu: HerglotzModel,
}

impl MaterialSpec {
    pub fn new(label: impl Into<String>, eps: HerglotzModel, mu: HerglotzModel) -> Result<Self> {
        if eps.dim() != 3 || mu.dim() != 3 {
            return Err(Error::dimension(format!(
                "material models must be 3x3, got eps {} and mu {}",
                eps.dim(),
                mu.dim()
            )));
        }
        Ok(Self {
            label: label.into(),
            eps,
            mu,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            label: "vacuum".into(),
            eps: HerglotzModel::vacuum(3),
            mu: HerglotzModel::vacuum(3),
        }
    }

    pub fn eps(&self) -> &HerglotzModel {
        &self.eps
    }

    pub fn mu(&self) -> &HerglotzModel {
        &self.mu
    }

    /// (ωε, ωμ) by analytic continuation, valid for any ω away from model poles.
    pub fn tensors_at(&self, omega: C64) -> Result<(CMatrix, CMatrix)> {
        Ok((self.eps.continue_at(omega)?, self.mu.continue_at(omega)?))
    }
}

/// (ωε(ω), ωμ(ω)) for Im ω > 0.
pub fn material_response(mat: &MaterialSpec, omega: C64) -> Result<(CMatrix, CMatrix)> {
    check_upper_half_plane(omega)?;
    mat.tensors_at(omega)
}

/// Passivity margins: smallest eigenvalues of Im(ωε) and Im(ωμ).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PassivityCertificate {
    pub ok: bool,
    pub min_eig_eps: f64,
    pub min_eig_mu: f64,
    pub tol: f64,
}

fn im_min_eig(m: &CMatrix) -> f64 {
    linalg::im_part(m)
        .and_then(|h| linalg::min_eigenvalue(&h))
        .unwrap_or(f64::NAN)
}

/// Certifies Im(ωε) ≻ tol and Im(ωμ) ≻ tol. Never fails; bad input yields `ok = false`.
pub fn passivity_check(omega_eps: &CMatrix, omega_mu: &CMatrix, tol: f64) -> PassivityCertificate {
    let min_eig_eps = im_min_eig(omega_eps);
    let min_eig_mu = im_min_eig(omega_mu);
    PassivityCertificate {
        ok: min_eig_eps > tol && min_eig_mu > tol,
        min_eig_eps,
        min_eig_mu,
        tol,
    }
}
