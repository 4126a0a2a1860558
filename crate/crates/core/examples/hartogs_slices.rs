//! Analyticity of the DtN map in each tensor entry separately.

use layerdtn::analyticity::{slice_analyticity, ProbeOptions, SliceSpec};
use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::linalg::c;
use layerdtn::stack::make_sandwich;
use layerdtn::Result;

fn main() -> Result<()> {
    let core = MaterialSpec::new("core", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::drude(0.6, 0.3, 3)?)?;
    let stack = make_sandwich(1.0, 0.4, MaterialSpec::vacuum(), core, 1.0)?;
    let base = stack.tensors_at(c(0.8, 0.6))?;
    let names = ["omega eps1", "omega eps2", "omega mu1", "omega mu2"];

    println!("{:>12} {:>6} {:>12} {:>12}", "tensor", "basis", "CR", "Cauchy");
    for (component, name) in names.iter().enumerate() {
        for basis_index in [0, 3, 6] {
            let slice = SliceSpec { component, basis_index };
            let rep = slice_analyticity(&stack, &base, [0.2, 0.1], -1.0, 1.0, slice, &ProbeOptions::default())?;
            println!("{name:>12} {basis_index:>6} {:>12.3e} {:>12.3e}", rep.cr_residual, rep.cauchy_residual);
        }
    }
    Ok(())
}
