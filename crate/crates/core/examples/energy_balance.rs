//! Boundary flux against absorbed power, with second-order convergence of the quadrature.

use layerdtn::dtn::energy_balance;
use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::linalg::c;
use layerdtn::stack::make_sandwich;
use layerdtn::transfer::TangentialState;
use layerdtn::Result;

fn main() -> Result<()> {
    let core = MaterialSpec::new("core", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::drude(0.5, 0.4, 3)?)?;
    let stack = make_sandwich(1.0, 0.5, MaterialSpec::vacuum(), core, 1.0)?;
    let psi0 = TangentialState([c(1.0, 0.0), c(0.2, -0.3), c(0.0, 0.5), c(1.0, 0.0)]);
    let (kappa, omega) = ([0.3, 0.2], c(1.1, 0.25));

    println!("{:>6} {:>22} {:>22} {:>12}", "n", "boundary flux", "absorption", "gap");
    let mut last = None;
    for n in [125, 250, 500, 1000, 2000] {
        let rep = energy_balance(&stack, &psi0, kappa, omega, -1.0, 1.0, n)?;
        let gap = (rep.boundary_flux - rep.absorption_integral).abs();
        let order = last.map(|g: f64| format!("order {:.3}", (g / gap).log2())).unwrap_or_default();
        println!("{n:>6} {:>22.15e} {:>22.15e} {:>12.3e} {order}", rep.boundary_flux, rep.absorption_integral, rep.relative_gap);
        last = Some(gap);
    }
    Ok(())
}
