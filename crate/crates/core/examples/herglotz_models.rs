//! Passive material models evaluated in the upper half-plane.

use layerdtn::herglotz::{eval_herglotz, make_drude, passivity_check, DiscreteHerglotz, HerglotzModel, MaterialSpec};
use layerdtn::linalg::{self, c, CMatrix};
use layerdtn::Result;

fn main() -> Result<()> {
    let drude = make_drude(1.3, 0.15)?;
    let lorentz = HerglotzModel::Discrete(DiscreteHerglotz::scalar(0.0, 1.0, vec![-0.9, 0.9], vec![0.4, 0.4])?);

    println!("{:>14} {:>26} {:>26}", "omega", "drude", "two-pole");
    for k in 0..5 {
        let w = c(0.5 * k as f64 - 1.0, 0.3);
        let d = eval_herglotz(&drude, w)?[(0, 0)];
        let l = eval_herglotz(&lorentz, w)?[(0, 0)];
        println!("{w:>14.3} {d:>26.6} {l:>26.6}");
    }

    // a uniaxial crystal: ε = ω·diag(2, 2, 3)
    let eps = HerglotzModel::constant(CMatrix::from_diagonal(&linalg::CVector::from_column_slice(&[
        c(2.0, 0.0),
        c(2.0, 0.0),
        c(3.0, 0.0),
    ])))?;
    let crystal = MaterialSpec::new("crystal", eps, HerglotzModel::drude(0.4, 0.2, 3)?)?;
    let (omega_eps, omega_mu) = crystal.tensors_at(c(0.7, 0.25))?;
    let cert = passivity_check(&omega_eps, &omega_mu, 1e-12);
    println!(
        "crystal at 0.7+0.25i: passive = {}, min eig Im(omega eps) = {:.4e}, Im(omega mu) = {:.4e}",
        cert.ok, cert.min_eig_eps, cert.min_eig_mu
    );
    Ok(())
}
