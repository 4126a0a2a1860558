//! Herglotz certificate of the DtN map over a frequency grid in the upper half-plane.

use layerdtn::analyticity::{herglotz_certify, CertifyOptions, OmegaGrid};
use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::stack::make_sandwich;
use layerdtn::Result;

fn main() -> Result<()> {
    let core = MaterialSpec::new("core", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::vacuum(3))?;
    let stack = make_sandwich(1.0, 0.4, MaterialSpec::vacuum(), core, 1.0)?;
    let grid = OmegaGrid { re_min: 0.2, re_max: 2.0, re_steps: 5, im_min: 0.2, im_max: 2.0, im_steps: 5 }.points()?;

    let cert = herglotz_certify(&stack, [0.3, 0.0], &grid, -1.0, 1.0, &CertifyOptions::default())?;
    println!("{:>18} {:>14} {:>12} {:>12}", "omega", "min Im eig", "CR", "cond T12");
    for p in &cert.points {
        println!("{:>18.3} {:>14.5e} {:>12.3e} {:>12.3e}", p.omega, p.min_im_eig, p.cr_residual, p.condition_t12);
    }
    println!(
        "pass = {} (smallest margin {:.4e}, worst CR {:.3e} < {:.0e})",
        cert.pass, cert.min_im_eig, cert.worst_cr, cert.cr_threshold
    );
    Ok(())
}
