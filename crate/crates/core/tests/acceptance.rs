//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use layerdtn::analyticity::{herglotz_certify, scalar_sample, slice_analyticity, CertifyOptions, OmegaGrid, ProbeOptions, SliceSpec};
use layerdtn::dtn::{self, flux_form, flux_form_from_blocks, gamma, DtnOptions, TANGENTIAL_INDICES};
use layerdtn::herglotz::{eval_herglotz, make_drude, HerglotzModel, MaterialSpec};
use layerdtn::linalg::{self, c, CMatrix, CVector, C64, I};
use layerdtn::stack::{Layer, StackSpec, TensorTuple};
use layerdtn::transfer::{self, LayeredSystem, TangentialState, TransferMatrix};
use layerdtn::tubular::{
    basis, herglotz_along_trajectory, phi, trace_product, trajectory_coeffs, trajectory_point, trajectory_roundtrip,
    TrajectorySpec,
};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn real_kappa(k: [f64; 2]) -> [C64; 2] {
    k.map(|x| c(x, 0.0))
}

fn psi(r: &mut rand_chacha::ChaCha8Rng) -> TangentialState {
    TangentialState([cnum(r, 1.0), cnum(r, 1.0), cnum(r, 1.0), cnum(r, 1.0)])
}

fn tangential_f(r: &mut rand_chacha::ChaCha8Rng) -> [C64; 6] {
    let mut f = [c(0.0, 0.0); 6];
    for k in TANGENTIAL_INDICES {
        f[k] = cnum(r, 1.0);
    }
    f
}

fn upper_matrix(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> CMatrix {
    random_hermitian(r, n, 1.5) + random_pd(r, n, 1.0, 0.2) * I
}

fn two_phase_stack(r: &mut rand_chacha::ChaCha8Rng) -> StackSpec {
    let mats = [random_material(r, "a".into()), random_material(r, "b".into())];
    let n = r.random_range(2..=4);
    let layers = (0..n)
        .map(|k| Layer::new(uniform(r, 0.1, 0.4), mats[k % 2].clone()).unwrap())
        .collect();
    StackSpec::new(0.0, layers, 1.0).unwrap()
}

fn transfer_oracle() -> Check {
    let mut r = rng(1001);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = random_stack(&mut r, 5, 1.0);
        let omega = random_omega(&mut r, 0.1, 2.0);
        let kappa = real_kappa(random_kappa(&mut r, 2.0));
        let t = transfer::transfer(&s, kappa, omega, s.z_min(), s.z_max()).map_err(|e| e.to_string())?;
        worst = worst.max(rel(&t.matrix, &ode_transfer(&s, kappa, omega, s.z_min(), s.z_max(), 1e-12)));
    }
    ensure(worst <= 1e-8, || format!("worst relative deviation {worst:.3e} > 1e-8"))?;
    Ok(format!("worst relative deviation {worst:.3e}"))
}

fn transfer_algebra() -> Check {
    let mut r = rng(1002);
    let (mut id_err, mut comp_err, mut inv_err) = (0.0f64, 0.0f64, 0.0f64);
    let id4 = CMatrix::identity(4, 4);
    for _ in 0..200 {
        let s = random_stack(&mut r, 5, 1.5);
        let omega = random_omega(&mut r, 0.1, 2.0);
        let kappa = real_kappa(random_kappa(&mut r, 2.0));
        let sys = LayeredSystem::at_frequency(&s, kappa, omega).map_err(|e| e.to_string())?;
        let (a, b, z) = (point_in(&mut r, &s), point_in(&mut r, &s), point_in(&mut r, &s));
        let t = |x, y| sys.transfer(x, y).map(|t| t.matrix).map_err(|e| e.to_string());
        id_err = id_err.max((t(a, a)? - &id4).norm());
        comp_err = comp_err.max(rel(&(t(b, z)? * t(a, b)?), &t(a, z)?));
        inv_err = inv_err.max(rel(&(t(a, b)? * t(b, a)?), &id4));
    }
    let detail = format!("identity {id_err:.3e}, composition {comp_err:.3e}, inverse {inv_err:.3e}");
    ensure(id_err <= 1e-12 && comp_err <= 1e-10 && inv_err <= 1e-10, || detail.clone())?;
    Ok(detail)
}

fn flux_theorem() -> Check {
    let mut r = rng(1003);
    let mut margin = f64::INFINITY;
    for trial in 0..100 {
        let s = random_stack(&mut r, 5, 1.0);
        let omega = random_omega(&mut r, 0.1, 2.0);
        let kappa = real_kappa(random_kappa(&mut r, 2.0));
        let t = transfer::transfer(&s, kappa, omega, s.z_min(), s.z_max()).map_err(|e| e.to_string())?;
        let m = flux_form(&t).min_eig;
        ensure(m > 0.0, || format!("trial {trial}: smallest eigenvalue {m:.3e}"))?;
        margin = margin.min(m);
    }
    let vac = StackSpec::new(0.0, vec![Layer::new(1.0, MaterialSpec::vacuum()).unwrap()], 1.0).unwrap();
    let t = transfer::transfer(&vac, [c(0.0, 0.0); 2], I, 0.0, 1.0).map_err(|e| e.to_string())?;
    let mut eig = linalg::hermitian_eigenvalues(&flux_form(&t).matrix).map_err(|e| e.to_string())?;
    eig.sort_by(f64::total_cmp);
    let sh = 1f64.sinh();
    let want = [2.0 * sh / std::f64::consts::E; 2].into_iter().chain([2.0 * sh * std::f64::consts::E; 2]);
    let vac_err = eig.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(vac_err <= 1e-10, || format!("vacuum eigenvalues off by {vac_err:.3e}"))?;
    Ok(format!("100/100 positive, smallest margin {margin:.3e}; vacuum eigenvalue error {vac_err:.3e}"))
}

fn block_identity() -> Check {
    let mut r = rng(1004);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = TransferMatrix::from_matrix(0.0, 1.0, random_cmatrix(&mut r, 4, 4, 1.5)).map_err(|e| e.to_string())?;
        let d = flux_form(&t).matrix - flux_form_from_blocks(&t.blocks);
        worst = worst.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    ensure(worst <= 1e-12, || format!("worst entrywise deviation {worst:.3e}"))?;
    Ok(format!("worst entrywise deviation {worst:.3e} (diagonal blocks carry -2Re)"))
}

fn gamma_correctness() -> Check {
    let mut r = rng(1005);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_stack(&mut r, 4, 1.0);
        let omega = random_omega(&mut r, 0.1, 2.0);
        let kappa = real_kappa(random_kappa(&mut r, 2.0));
        let t = transfer::transfer(&s, kappa, omega, s.z_min(), s.z_max()).map_err(|e| e.to_string())?;
        let g = gamma(&t).map_err(|e| e.to_string())?;
        let (u1, u0) = ([cnum(&mut r, 1.0), cnum(&mut r, 1.0)], [cnum(&mut r, 1.0), cnum(&mut r, 1.0)]);
        let want = CVector::from_column_slice(&gamma_oracle(&t.matrix, &u1, &u0));
        let got = &g.matrix * CVector::from_column_slice(&[u1[0], u1[1], u0[0], u0[1]]);
        worst = worst.max((got - &want).norm() / want.norm());
    }
    ensure(worst <= 1e-9, || format!("worst relative deviation {worst:.3e}"))?;
    let g = gamma(&TransferMatrix::from_matrix(0.0, 1.0, flux_j()).unwrap()).map_err(|e| e.to_string())?;
    let ra = linalg::rho().adjoint();
    let mut want = CMatrix::zeros(4, 4);
    want.view_mut((0, 2), (2, 2)).copy_from(&ra);
    want.view_mut((2, 0), (2, 2)).copy_from(&ra);
    let j_err = (g.matrix - want).norm();
    ensure(j_err <= 1e-15, || format!("Gamma(J) error {j_err:.3e}"))?;
    Ok(format!("worst relative deviation {worst:.3e}; Gamma(J) error {j_err:.3e}"))
}

fn dtn_certificate() -> Check {
    let mut r = rng(1006);
    let grid = OmegaGrid { re_min: -1.5, re_max: 1.5, re_steps: 5, im_min: 0.2, im_max: 2.0, im_steps: 5 }
        .points()
        .map_err(|e| e.to_string())?;
    let (mut margin, mut cr) = (f64::INFINITY, 0.0f64);
    for trial in 0..100 {
        let s = random_stack(&mut r, 5, 1.0);
        let kappa = random_kappa(&mut r, 1.0);
        let cert = herglotz_certify(&s, kappa, &grid, s.z_min(), s.z_max(), &CertifyOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(cert.pass && cert.worst_cr <= 1e-5, || {
            format!("trial {trial}: margin {:.3e}, CR {:.3e}", cert.min_im_eig, cert.worst_cr)
        })?;
        margin = margin.min(cert.min_im_eig);
        cr = cr.max(cert.worst_cr);
        let omega = grid[trial % grid.len()];
        let map = dtn::dtn(&s, kappa, omega, s.z_min(), s.z_max()).map_err(|e| e.to_string())?.map;
        let zero = (0..6).all(|k| [2, 5].iter().all(|&i| map.matrix[(i, k)] == c(0.0, 0.0) && map.matrix[(k, i)] == c(0.0, 0.0)));
        ensure(zero, || format!("trial {trial}: rows/columns 3 and 6 not exactly zero"))?;
    }
    Ok(format!("100 stacks x 25 points: smallest margin {margin:.3e}, worst CR {cr:.3e}, zero pattern exact"))
}

fn energy_balance() -> Check {
    let mut r = rng(1007);
    let (mut gap, mut order_lo, mut order_hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for trial in 0..10 {
        let s = random_stack(&mut r, 4, 1.0);
        let omega = random_omega(&mut r, 0.2, 2.0);
        let kappa = random_kappa(&mut r, 1.0);
        let psi0 = psi(&mut r);
        let run = |n| dtn::energy_balance(&s, &psi0, kappa, omega, s.z_min(), s.z_max(), n).map_err(|e| e.to_string());
        let rep = run(2000)?;
        ensure(rep.boundary_flux > 0.0 && rep.absorption_integral > 0.0, || format!("trial {trial}: {rep:?}"))?;
        gap = gap.max(rep.relative_gap);
        let abs_gap = |n| run(n).map(|r| (r.boundary_flux - r.absorption_integral).abs());
        let order = (abs_gap(100)? / abs_gap(200)?).log2();
        order_lo = order_lo.min(order);
        order_hi = order_hi.max(order);
        let zero = dtn::energy_balance(&s, &TangentialState::zero(), kappa, omega, s.z_min(), s.z_max(), 200)
            .map_err(|e| e.to_string())?;
        ensure(zero.boundary_flux == 0.0 && zero.absorption_integral == 0.0, || format!("trial {trial}: zero state {zero:?}"))?;
    }
    let detail = format!("worst relative gap {gap:.3e}; observed order in [{order_lo:.3}, {order_hi:.3}]");
    ensure(gap <= 1e-6 && order_lo >= 1.9 && order_hi <= 2.1, || detail.clone())?;
    Ok(detail)
}

fn multivariable_slices() -> Check {
    let mut r = rng(1008);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..10 {
        let s = two_phase_stack(&mut r);
        let omega = random_omega(&mut r, 0.3, 1.5);
        let base = s.tensors_at(omega).map_err(|e| e.to_string())?;
        let kappa = random_kappa(&mut r, 1.0);
        for component in 0..4 {
            for basis_index in 0..9 {
                let slice = SliceSpec { component, basis_index };
                let rep = slice_analyticity(&s, &base, kappa, s.z_min(), s.z_max(), slice, &ProbeOptions::default())
                    .map_err(|e| e.to_string())?;
                worst = worst.max(rep.cr_residual);
                count += 1;
            }
        }
    }
    ensure(worst <= 1e-6, || format!("worst CR residual {worst:.3e}"))?;
    Ok(format!("{count} slices over 4 tensors, worst CR residual {worst:.3e}"))
}

fn tubular_suite() -> Check {
    let mut r = rng(1009);
    let mut iso = 0.0f64;
    for k in 0..200 {
        let n = 2 + k % 3;
        let (a, b) = (random_hermitian(&mut r, n, 1.0), random_hermitian(&mut r, n, 1.0));
        let d = phi(&a).unwrap().dot(&phi(&b).unwrap()) - trace_product(&a, &b);
        iso = iso.max(d.abs());
    }
    ensure(iso <= 1e-13, || format!("isometry error {iso:.3e}"))?;

    let mut gram = 0.0f64;
    for n in 1..=4 {
        let bs = basis(n);
        for (i, x) in bs.iter().enumerate() {
            for (j, y) in bs.iter().enumerate() {
                gram = gram.max((trace_product(x, y) - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    ensure(gram <= 1e-14, || format!("Gram error {gram:.3e}"))?;

    let mut traj_margin = f64::INFINITY;
    for _ in 0..500 {
        let n = r.random_range(1..=4);
        let l0 = random_real_symmetric(&mut r, n, 2.0);
        let coeffs = trajectory_coeffs(&l0, &upper_matrix(&mut r, n)).map_err(|e| e.to_string())?;
        let spec = TrajectorySpec { l0, coeffs: vec![coeffs] };
        let s = c(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 0.01, 3.0));
        let p = trajectory_point(&spec, 0, s).map_err(|e| e.to_string())?;
        traj_margin = traj_margin.min(linalg::min_eigenvalue(&linalg::im_part(&p).unwrap()).unwrap());
    }
    ensure(traj_margin > 0.0, || format!("trajectory margin {traj_margin:.3e}"))?;

    let mut roundtrip = 0.0f64;
    for _ in 0..100 {
        let phases = r.random_range(1..4);
        let z = TensorTuple::from_components((0..2 * phases).map(|_| upper_matrix(&mut r, 3)).collect()).unwrap();
        for k in 0..10 {
            let l0 = if k == 0 { CMatrix::zeros(3, 3) } else { random_real_symmetric(&mut r, 3, 2.0) };
            roundtrip = roundtrip.max(trajectory_roundtrip(&z, &l0).map_err(|e| e.to_string())?.max_deviation);
        }
    }
    ensure(roundtrip <= 1e-12, || format!("roundtrip deviation {roundtrip:.3e}"))?;

    let s_grid: Vec<C64> = [-1.0, 0.0, 1.0].iter().flat_map(|&re| [0.3, 1.0, 2.0].map(|im| c(re, im))).collect();
    let mut hf_margin = f64::INFINITY;
    for _ in 0..10 {
        let st = random_stack(&mut r, 3, 1.0);
        let omega = random_omega(&mut r, 0.3, 1.5);
        let kappa = random_kappa(&mut r, 1.0);
        let z = st.tensors_at(omega).map_err(|e| e.to_string())?;
        let spec = TrajectorySpec::for_tensors(&random_real_symmetric(&mut r, 3, 1.0), &z).map_err(|e| e.to_string())?;
        let map = |t: &TensorTuple| Ok(dtn::dtn_from_tensors(&st, t, kappa, st.z_min(), st.z_max(), &DtnOptions::default())?.map);
        let f = tangential_f(&mut r);
        let cert = herglotz_along_trajectory(map, &spec, &f, &s_grid, 1e-5).map_err(|e| e.to_string())?;
        ensure(cert.min_im > 0.0, || format!("Im h_f reached {:.3e}", cert.min_im))?;
        hf_margin = hf_margin.min(cert.min_im);
        let at_i = scalar_sample(&map(&spec.tensors_at(I).unwrap()).unwrap(), &f).unwrap();
        ensure(at_i.im > 0.0, || "Im h_f(i) not positive".into())?;
    }
    Ok(format!(
        "isometry {iso:.3e}, Gram {gram:.3e}, trajectory margin {traj_margin:.3e}, roundtrip {roundtrip:.3e}, min Im h_f {hf_margin:.3e}"
    ))
}

fn herglotz_models() -> Check {
    let mut r = rng(1010);
    let mut worst = f64::INFINITY;
    for k in 0..500 {
        let model = HerglotzModel::Discrete(random_discrete(&mut r, 1 + k % 4));
        let z = c(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 1e-3, 3.0));
        let h = eval_herglotz(&model, z).map_err(|e| e.to_string())?;
        let min = linalg::min_eigenvalue(&linalg::im_part(&h).unwrap()).unwrap() / h.norm().max(f64::MIN_POSITIVE);
        worst = worst.min(min);
    }
    ensure(worst >= -1e-10, || format!("scaled Im eigenvalue {worst:.3e}"))?;
    let mut drude = 0.0f64;
    for _ in 0..100 {
        let (wp, g) = (uniform(&mut r, 0.05, 3.0), uniform(&mut r, 0.0, 2.0));
        let w = c(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 1e-3, 3.0));
        let got = eval_herglotz(&make_drude(wp, g).unwrap(), w).unwrap()[(0, 0)];
        let want = w - wp * wp / (w + c(0.0, g));
        drude = drude.max((got - want).norm() / want.norm());
    }
    ensure(drude <= 1e-12, || format!("Drude deviation {drude:.3e}"))?;
    Ok(format!("smallest scaled Im eigenvalue {worst:.3e}; Drude deviation {drude:.3e}"))
}

fn cli_determinism() -> Check {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let mut runs = 0;
    for name in ["vacuum_slab", "drude_sandwich", "anisotropic"] {
        let cfg = configs.join(format!("{name}.json"));
        for command in ["transfer", "dtn", "certify", "energy", "sweep", "trajectory"] {
            let body = || {
                let out = Command::new(env!("CARGO_BIN_EXE_layerdtn"))
                    .args([command, "--config", cfg.to_str().unwrap()])
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(out.status.code() == Some(0), || {
                    format!("{command} on {name} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
                })?;
                Ok::<_, String>(out.stdout)
            };
            let (a, b) = (body()?, body()?);
            ensure(a == b, || format!("{command} on {name}: reports differ"))?;
            runs += 2;
        }
    }
    Ok(format!("{runs} runs over 3 configs, all exit 0, report bodies byte-identical"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "transfer matrix vs ODE oracle", budget: Duration::from_secs(60), run: transfer_oracle },
        Criterion { id: 2, name: "transfer matrix algebra", budget: Duration::from_secs(10), run: transfer_algebra },
        Criterion { id: 3, name: "passivity flux theorem", budget: Duration::from_secs(30), run: flux_theorem },
        Criterion { id: 4, name: "flux form block identity", budget: Duration::from_secs(5), run: block_identity },
        Criterion { id: 5, name: "Gamma correctness", budget: Duration::from_secs(5), run: gamma_correctness },
        Criterion { id: 6, name: "DtN Herglotz certificate", budget: Duration::from_secs(300), run: dtn_certificate },
        Criterion { id: 7, name: "energy balance", budget: Duration::from_secs(30), run: energy_balance },
        Criterion { id: 8, name: "multivariable slices", budget: Duration::from_secs(120), run: multivariable_slices },
        Criterion { id: 9, name: "tubular domain suite", budget: Duration::from_secs(60), run: tubular_suite },
        Criterion { id: 10, name: "Herglotz models", budget: Duration::from_secs(5), run: herglotz_models },
        Criterion { id: 11, name: "CLI determinism and exit codes", budget: Duration::from_secs(10), run: cli_determinism },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; runtime over budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{}] {}: {} ({:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
