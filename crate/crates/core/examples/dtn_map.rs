//! Dirichlet-to-Neumann map of a lossy slab with its well-definedness certificate.

use layerdtn::analyticity::scalar_sample;
use layerdtn::dtn;
use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::linalg::c;
use layerdtn::stack::{Layer, StackSpec};
use layerdtn::Result;

fn main() -> Result<()> {
    let metal = MaterialSpec::new("metal", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::vacuum(3))?;
    let stack = StackSpec::new(
        0.0,
        vec![Layer::new(0.3, MaterialSpec::vacuum())?, Layer::new(0.4, metal)?],
        1.0,
    )?;
    let out = dtn::dtn(&stack, [0.4, -0.1], c(0.8, 0.3), 0.0, 0.7)?;
    let cert = &out.certificate;
    println!("flux form smallest eigenvalue: {:.4e}", cert.well_defined.flux_min_eig);
    println!("block conditions:             {:?}", cert.well_defined.block_conditions);
    println!("Im tangential smallest eig:   {:.4e}", cert.im_tangential_min_eig);
    println!("certificate passed:           {}", cert.passed());
    println!("tangential compression of the map:\n{:.4}", out.map.tangential);

    let f = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    println!("(Lf, f) = {:.6}", scalar_sample(&out.map, &f)?);
    Ok(())
}
