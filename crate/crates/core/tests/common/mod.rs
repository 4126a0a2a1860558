//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use layerdtn::herglotz::{DiscreteHerglotz, HerglotzModel, MaterialSpec};
use layerdtn::linalg::{c, CMatrix, C64};
use layerdtn::stack::{Layer, StackSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn cnum(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    c(uniform(rng, -scale, scale), uniform(rng, -scale, scale))
}

pub fn random_cmatrix(rng: &mut ChaCha8Rng, n: usize, m: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| cnum(rng, scale))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let g = random_cmatrix(rng, n, n, scale);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// G*G/n, positive semidefinite with entries of order `scale`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let g = random_cmatrix(rng, n, n, 1.0);
    g.adjoint() * g * c(scale / n as f64, 0.0)
}

/// Positive definite with smallest eigenvalue at least `floor`.
pub fn random_pd(rng: &mut ChaCha8Rng, n: usize, scale: f64, floor: f64) -> CMatrix {
    random_psd(rng, n, scale) + CMatrix::identity(n, n) * c(floor, 0.0)
}

pub fn random_real_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(uniform(rng, -scale, scale), 0.0));
    (&g + g.transpose()) * c(0.5, 0.0)
}

pub fn random_discrete(rng: &mut ChaCha8Rng, n: usize) -> DiscreteHerglotz {
    let poles: Vec<f64> = (0..rng.random_range(0..4)).map(|_| uniform(rng, -2.0, 2.0)).collect();
    let weights = poles.iter().map(|_| random_psd(rng, n, 0.5)).collect();
    DiscreteHerglotz::new(
        random_pd(rng, n, 1.0, 0.3),
        random_hermitian(rng, n, 0.5),
        poles,
        weights,
    )
    .unwrap()
}

/// A 3×3 passive response: discrete Herglotz, Drude or lossless constant.
pub fn random_model(rng: &mut ChaCha8Rng) -> HerglotzModel {
    match rng.random_range(0..3) {
        0 => HerglotzModel::Discrete(random_discrete(rng, 3)),
        1 => HerglotzModel::drude(uniform(rng, 0.2, 1.5), uniform(rng, 0.05, 1.0), 3).unwrap(),
        _ => {
            let re = random_real_symmetric(rng, 3, 0.3);
            let pd = (re.adjoint() * &re) + CMatrix::identity(3, 3) * c(uniform(rng, 0.5, 2.0), 0.0);
            HerglotzModel::constant(pd).unwrap()
        }
    }
}

pub fn random_material(rng: &mut ChaCha8Rng, label: String) -> MaterialSpec {
    let eps = random_model(rng);
    let mu = if rng.random_bool(0.5) {
        HerglotzModel::vacuum(3)
    } else {
        random_model(rng)
    };
    MaterialSpec::new(label, eps, mu).unwrap()
}

/// Random passive stack with 1–`max_layers` layers of total thickness in [0.3, `max_total`].
/// Some layers reuse an earlier material so phases can span several layers.
pub fn random_stack(rng: &mut ChaCha8Rng, max_layers: usize, max_total: f64) -> StackSpec {
    let n = rng.random_range(1..=max_layers);
    let total = uniform(rng, 0.3, max_total);
    let raw: Vec<f64> = (0..n).map(|_| uniform(rng, 0.2, 1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let mut mats: Vec<MaterialSpec> = Vec::new();
    let layers = raw
        .iter()
        .map(|t| {
            let m = if !mats.is_empty() && rng.random_bool(0.3) {
                mats[rng.random_range(0..mats.len())].clone()
            } else {
                let m = random_material(rng, format!("m{}", mats.len()));
                mats.push(m.clone());
                m
            };
            Layer::new(t * total / sum, m).unwrap()
        })
        .collect();
    StackSpec::new(uniform(rng, -1.0, 1.0), layers, 1.0).unwrap()
}

pub fn random_omega(rng: &mut ChaCha8Rng, im_lo: f64, im_hi: f64) -> C64 {
    c(uniform(rng, -2.0, 2.0), uniform(rng, im_lo, im_hi))
}

pub fn random_kappa(rng: &mut ChaCha8Rng, bound: f64) -> [f64; 2] {
    [uniform(rng, -bound, bound), uniform(rng, -bound, bound)]
}

pub fn point_in(rng: &mut ChaCha8Rng, s: &StackSpec) -> f64 {
    uniform(rng, s.z_min(), s.z_max())
}

pub fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// Maxwell-symbol oracle and ODE integration
// ---------------------------------------------------------------------------

fn cross_matrix(k: [C64; 3]) -> CMatrix {
    let z = C64::new(0.0, 0.0);
    CMatrix::from_row_slice(3, 3, &[z, -k[2], k[1], k[2], z, -k[0], -k[1], k[0], z])
}

/// Tangential system matrix from the full 6×6 symbol
/// [[ωε/c, [k×]], [−[k×], ωμ/c]] in (E, H) order, eliminating (E₃, H₃) with a generic solve.
pub fn oracle_system_matrix(eps: &CMatrix, mu: &CMatrix, kappa: [C64; 2], c_light: f64) -> CMatrix {
    let kx = cross_matrix([kappa[0], kappa[1], c(0.0, 0.0)]);
    let mut v = CMatrix::zeros(6, 6);
    v.view_mut((0, 0), (3, 3)).copy_from(&(eps / c(c_light, 0.0)));
    v.view_mut((3, 3), (3, 3)).copy_from(&(mu / c(c_light, 0.0)));
    v.view_mut((0, 3), (3, 3)).copy_from(&kx);
    v.view_mut((3, 0), (3, 3)).copy_from(&(-kx));
    let tan = [0, 1, 3, 4];
    let nor = [2, 5];
    let vtt = v.select_rows(&tan).select_columns(&tan);
    let vtn = v.select_rows(&tan).select_columns(&nor);
    let vnt = v.select_rows(&nor).select_columns(&tan);
    let vnn = v.select_rows(&nor).select_columns(&nor);
    let x = vnn.lu().solve(&vnt).expect("normal block invertible");
    vtt - vtn * x
}

pub fn flux_j() -> CMatrix {
    let o = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    CMatrix::from_row_slice(
        4,
        4,
        &[z, z, z, o, z, z, -o, z, z, -o, z, z, o, z, z, z],
    )
}

fn rk4(m: &CMatrix, len: f64, steps: usize) -> CMatrix {
    let h = c(len / steps as f64, 0.0);
    let mut y = CMatrix::identity(4, 4);
    for _ in 0..steps {
        let k1 = m * &y;
        let k2 = m * (&y + &k1 * (h * 0.5));
        let k3 = m * (&y + &k2 * (h * 0.5));
        let k4 = m * (&y + &k3 * h);
        y += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * (h / 6.0);
    }
    y
}

/// Solution operator of Ψ′ = MΨ over `len`, refining RK4 step counts until two
/// successive levels agree to `rtol`.
pub fn rk4_adaptive(m: &CMatrix, len: f64, rtol: f64) -> CMatrix {
    let mut steps = ((m.norm() * len.abs()).ceil() as usize).max(4);
    let mut prev = rk4(m, len, steps);
    loop {
        steps *= 2;
        let next = rk4(m, len, steps);
        let converged = rel(&next, &prev) < rtol;
        prev = next;
        if converged || steps > 1 << 22 {
            return prev;
        }
    }
}

/// Transfer matrix T(z₀, z₁), z₀ < z₁, by ODE integration of Ψ′ = iJAΨ layer by layer.
pub fn ode_transfer(s: &StackSpec, kappa: [C64; 2], omega: C64, z0: f64, z1: f64, rtol: f64) -> CMatrix {
    let bounds = s.boundaries();
    let mut t = CMatrix::identity(4, 4);
    for (k, layer) in s.layers().iter().enumerate() {
        let lo = z0.max(bounds[k]);
        let hi = z1.min(bounds[k + 1]);
        if hi <= lo {
            continue;
        }
        let eps = layer.material.eps().continue_at(omega).unwrap();
        let mu = layer.material.mu().continue_at(omega).unwrap();
        let a = oracle_system_matrix(&eps, &mu, kappa, s.c());
        let m = flux_j() * a * c(0.0, 1.0);
        t = rk4_adaptive(&m, hi - lo, rtol) * t;
    }
    t
}

// ---------------------------------------------------------------------------
// Eigenvalue oracle
// ---------------------------------------------------------------------------

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian matrix via its real 2n×2n embedding [[Re, −Im], [Im, Re]].
pub fn hermitian_eigenvalues_oracle(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            m[i][j] = z.re;
            m[i + n][j + n] = z.re;
            m[i][j + n] = -z.im;
            m[i + n][j] = z.im;
        }
    }
    jacobi_eigenvalues(m).into_iter().step_by(2).collect()
}

// ---------------------------------------------------------------------------
// Linear-system oracle for Γ
// ---------------------------------------------------------------------------

/// Given T and electric data (u₁, u₀), solves T(u₀; v₀) = (u₁; v₁) for (v₁; v₀) directly.
pub fn gamma_oracle(t: &CMatrix, u1: &[C64; 2], u0: &[C64; 2]) -> [C64; 4] {
    // Unknowns x = (v₀, v₁); equations T₁₁u₀ + T₁₂v₀ = u₁ and T₂₁u₀ + T₂₂v₀ − v₁ = 0.
    let mut sys = CMatrix::zeros(4, 4);
    let mut rhs = layerdtn::linalg::CVector::zeros(4);
    for r in 0..2 {
        for k in 0..2 {
            sys[(r, k)] = t[(r, k + 2)];
            sys[(r + 2, k)] = t[(r + 2, k + 2)];
        }
        sys[(r + 2, r + 2)] = c(-1.0, 0.0);
        rhs[r] = u1[r] - t[(r, 0)] * u0[0] - t[(r, 1)] * u0[1];
        rhs[r + 2] = -(t[(r + 2, 0)] * u0[0] + t[(r + 2, 1)] * u0[1]);
    }
    let x = sys.lu().solve(&rhs).expect("solvable");
    [x[2], x[3], x[0], x[1]]
}

/// Proptest configuration without on-disk regression files.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}
