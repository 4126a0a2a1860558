//! Tensor trajectories through the tubular domain and the scalar Herglotz function along them.

use layerdtn::dtn::{dtn_from_tensors, DtnOptions};
use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::linalg::{c, CMatrix, C64};
use layerdtn::stack::{make_sandwich, TensorTuple};
use layerdtn::tubular::{herglotz_along_trajectory, trajectory_roundtrip, TrajectorySpec};
use layerdtn::Result;

fn main() -> Result<()> {
    let core = MaterialSpec::new("core", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::vacuum(3))?;
    let stack = make_sandwich(1.0, 0.4, MaterialSpec::vacuum(), core, 1.0)?;
    let z = stack.tensors_at(c(0.9, 0.3))?;
    let l0 = CMatrix::identity(3, 3);

    let rt = trajectory_roundtrip(&z, &l0)?;
    println!("roundtrip max deviation {:.3e}, conditions {:.3?}", rt.max_deviation, rt.conditions);

    let spec = TrajectorySpec::for_tensors(&l0, &z)?;
    let map = |t: &TensorTuple| Ok(dtn_from_tensors(&stack, t, [0.3, 0.0], -1.0, 1.0, &DtnOptions::default())?.map);
    let f = [c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0), c(0.3, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
    let s_grid: Vec<C64> = (0..6).map(|k| c(-1.5 + 0.6 * k as f64, 0.5)).collect();

    let cert = herglotz_along_trajectory(map, &spec, &f, &s_grid, 1e-5)?;
    for s in &cert.samples {
        println!("s = {:>12.3}   h_f(s) = {:>24.6}   CR {:.2e}", s.s, s.value, s.cr_residual);
    }
    println!("pass = {} (min Im {:.4e})", cert.pass, cert.min_im);
    Ok(())
}
