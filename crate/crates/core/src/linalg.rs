//! Dense complex matrix kernel.
//!
//! The objects of this crate are tiny (2×2 up to 6×6), so everything here is
//! plain dense arithmetic on top of `nalgebra`. Hermitian eigenvalues and LU
//! factorizations come from `nalgebra`; the matrix exponential and the
//! conditioning policy live here.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Relative asymmetry above which a matrix is not accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Condition estimate above which a matrix is treated as numerically singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from row slices.
pub fn from_rows(rows: &[&[C64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Builds a complex matrix from real row slices.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j], 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag(entries: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

/// The 2×2 rotation block ρ = [[0, 1], [−1, 0]].
pub fn rho() -> CMatrix {
    from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])
}

/// The 4×4 flux matrix J = [[0, ρ], [ρ*, 0]], which satisfies J* = J⁻¹ = J.
pub fn flux_matrix() -> CMatrix {
    let r = rho();
    join_blocks(&BlockSplit {
        m11: CMatrix::zeros(2, 2),
        m12: r.clone(),
        m21: r.adjoint(),
        m22: CMatrix::zeros(2, 2),
    })
    .expect("2x2 blocks")
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NumericRange(format!("{what} has non-finite entries")))
    }
}

fn ensure_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::dimension(format!(
            "{what} must be square and nonempty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖a − b‖_F / max(‖b‖_F, floor)`.
pub fn relative_difference(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Hermitian decomposition M = Re M + i·Im M.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPair {
    pub real_part: CMatrix,
    pub imag_part: CMatrix,
}

impl HermitianPair {
    pub fn reconstruct(&self) -> CMatrix {
        &self.real_part + self.imag_part.map(|z| z * I)
    }
}

/// Re M = (M + M*)/2 and Im M = (M − M*)/(2i).
///
/// Both parts are assembled entrywise so that they are Hermitian bit for bit.
pub fn hermitian_parts(m: &CMatrix) -> Result<HermitianPair> {
    ensure_square(m, "hermitian_parts input")?;
    let n = m.nrows();
    let real_part = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    // (a − conj(b)) / (2i) = (a − conj(b)) · (−i/2), written out componentwise.
    let imag_part = CMatrix::from_fn(n, n, |i, j| {
        let d = m[(i, j)] - m[(j, i)].conj();
        c(0.5 * d.im, -0.5 * d.re)
    });
    Ok(HermitianPair {
        real_part,
        imag_part,
    })
}

/// Hermitian part (M + M*)/2.
pub fn re_part(m: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_parts(m)?.real_part)
}

/// Anti-Hermitian part divided by i, (M − M*)/(2i).
pub fn im_part(m: &CMatrix) -> Result<CMatrix> {
    Ok(hermitian_parts(m)?.imag_part)
}

/// Relative distance from Hermitian: ‖H − H*‖_F / ‖H‖_F (zero for the zero matrix).
pub fn hermitian_defect(h: &CMatrix) -> f64 {
    let scale = h.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (h - h.adjoint()).norm() / scale
}

/// Returns (H + H*)/2, or a contract error if H is not Hermitian to [`HERMITIAN_TOL`].
pub fn symmetrize(h: &CMatrix) -> Result<CMatrix> {
    ensure_square(h, "Hermitian input")?;
    let defect = hermitian_defect(h);
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::contract(format!(
            "matrix is not Hermitian (relative asymmetry {defect:e})"
        )));
    }
    Ok((h + h.adjoint()) * c(0.5, 0.0))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    let h = symmetrize(h)?;
    ensure_finite(&h, "Hermitian input")?;
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (as columns).
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let h = symmetrize(h)?;
    ensure_finite(&h, "Hermitian input")?;
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok((values, vectors))
}

pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

/// Outcome of a positive-definiteness test, with the margin that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinitenessReport {
    pub positive: bool,
    pub min_eig: f64,
    pub tol: f64,
}

/// Default threshold for strict positivity: 1e-10·‖H‖_F.
pub fn default_pd_tol(h: &CMatrix) -> f64 {
    1e-10 * h.norm()
}

/// H ≻ 0 in the sense that its smallest eigenvalue exceeds `tol`.
pub fn is_positive_definite(h: &CMatrix, tol: f64) -> Result<DefinitenessReport> {
    if !(tol >= 0.0) {
        return Err(Error::Parameter(format!("tolerance must be nonnegative, got {tol}")));
    }
    let min_eig = min_eigenvalue(h)?;
    Ok(DefinitenessReport {
        positive: min_eig > tol,
        min_eig,
        tol,
    })
}

/// Exact 1-norm condition number ‖A‖₁‖A⁻¹‖₁; infinite when A is singular.
pub fn condition_1norm(a: &CMatrix) -> f64 {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return f64::INFINITY;
    }
    match a.clone().lu().try_inverse() {
        Some(inv) if is_finite(&inv) => norm1(a) * norm1(&inv),
        _ => f64::INFINITY,
    }
}

/// Solves A·X = B, refusing systems whose condition estimate exceeds [`SINGULAR_CONDITION`].
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    ensure_square(a, "system matrix")?;
    if b.nrows() != a.nrows() {
        return Err(Error::dimension(format!(
            "right-hand side has {} rows, system has {}",
            b.nrows(),
            a.nrows()
        )));
    }
    let condition = condition_1norm(a);
    if !(condition <= SINGULAR_CONDITION) {
        return Err(Error::Singular {
            context: "solve".into(),
            condition,
        });
    }
    let x = a.clone().lu().solve(b).ok_or(Error::Singular {
        context: "solve".into(),
        condition,
    })?;
    ensure_finite(&x, "solution")?;
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &identity(a.nrows()))
}

/// The four 2×2 blocks of a 4×4 matrix with respect to ℂ⁴ = ℂ² ⊕ ℂ².
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit {
    pub m11: CMatrix,
    pub m12: CMatrix,
    pub m21: CMatrix,
    pub m22: CMatrix,
}

impl BlockSplit {
    pub fn as_array(&self) -> [&CMatrix; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }
}

pub fn split_blocks(m: &CMatrix) -> Result<BlockSplit> {
    if m.shape() != (4, 4) {
        return Err(Error::dimension(format!(
            "block split expects 4x4, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(BlockSplit {
        m11: m.view((0, 0), (2, 2)).into_owned(),
        m12: m.view((0, 2), (2, 2)).into_owned(),
        m21: m.view((2, 0), (2, 2)).into_owned(),
        m22: m.view((2, 2), (2, 2)).into_owned(),
    })
}

pub fn join_blocks(b: &BlockSplit) -> Result<CMatrix> {
    if b.as_array().iter().any(|m| m.shape() != (2, 2)) {
        return Err(Error::dimension("block join expects four 2x2 blocks"));
    }
    let mut m = CMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(&b.m11);
    m.view_mut((0, 2), (2, 2)).copy_from(&b.m12);
    m.view_mut((2, 0), (2, 2)).copy_from(&b.m21);
    m.view_mut((2, 2), (2, 2)).copy_from(&b.m22);
    Ok(m)
}

// Padé coefficients and 1-norm thresholds for the scaling-and-squaring exponential.
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
#[allow(clippy::excessive_precision)]
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152e0;

fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m * c(s, 0.0)
}

/// Numerator/denominator pair (U, V) of a low-order diagonal Padé approximant.
fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let a2 = a * a;
    let mut even = scaled(&identity(n), b[0]);
    let mut odd = scaled(&identity(n), b[1]);
    let mut power = identity(n);
    for k in 1..b.len() / 2 {
        power = &power * &a2;
        even += scaled(&power, b[2 * k]);
        odd += scaled(&power, b[2 * k + 1]);
    }
    (a * odd, even)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &PADE13;
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]))
        + scaled(&a6, b[7])
        + scaled(&a4, b[5])
        + scaled(&a2, b[3])
        + scaled(&id, b[1]);
    let u = a * u_inner;
    let v = &a6 * (scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]))
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&id, b[0]);
    (u, v)
}

fn pade_ratio(u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let q = v - u;
    let p = v + u;
    q.lu().solve(&p).ok_or_else(|| Error::Singular {
        context: "Pade denominator".into(),
        condition: f64::INFINITY,
    })
}

/// Matrix exponential by scaling and squaring around a diagonal Padé core.
pub fn mat_exp(m: &CMatrix) -> Result<CMatrix> {
    ensure_square(m, "exponential argument")?;
    ensure_finite(m, "exponential argument")?;
    let norm = norm1(m);
    for (order, theta) in THETA {
        if norm <= theta {
            let coeffs: &[f64] = match order {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(m, coeffs);
            let r = pade_ratio(&u, &v)?;
            ensure_finite(&r, "matrix exponential")?;
            return Ok(r);
        }
    }
    let squarings = (norm / THETA13).log2().ceil().max(0.0) as i32;
    if squarings > 1000 {
        return Err(Error::NumericRange(format!(
            "exponential argument norm {norm:e} out of range"
        )));
    }
    let a = scaled(m, 2f64.powi(-squarings));
    let (u, v) = pade13(&a);
    let mut r = pade_ratio(&u, &v)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    ensure_finite(&r, "matrix exponential")?;
    Ok(r)
}
