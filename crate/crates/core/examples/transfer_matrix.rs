//! Transfer matrix of a three-layer sandwich and its composition law.

use layerdtn::herglotz::{HerglotzModel, MaterialSpec};
use layerdtn::linalg::{c, CMatrix};
use layerdtn::stack::make_sandwich;
use layerdtn::transfer::{LayeredSystem, TangentialState};
use layerdtn::Result;

fn main() -> Result<()> {
    let core = MaterialSpec::new("core", HerglotzModel::drude(1.3, 0.15, 3)?, HerglotzModel::vacuum(3))?;
    let stack = make_sandwich(1.0, 0.4, MaterialSpec::vacuum(), core, 1.0)?;
    let kappa = [c(0.5, 0.0), c(0.0, 0.0)];
    let sys = LayeredSystem::at_frequency(&stack, kappa, c(0.9, 0.2))?;

    let t = sys.transfer(-1.0, 1.0)?;
    println!("T(-1, 1) =\n{:.4}", t.matrix);

    let split = sys.transfer(0.1, 1.0)?.matrix * sys.transfer(-1.0, 0.1)?.matrix;
    println!("composition defect: {:.3e}", (split - &t.matrix).norm());
    let round = sys.transfer(1.0, -1.0)?.matrix * &t.matrix;
    println!("inverse defect:     {:.3e}", (round - CMatrix::identity(4, 4)).norm());

    let psi0 = TangentialState([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let zs: Vec<f64> = (0..=8).map(|k| -1.0 + 0.25 * k as f64).collect();
    println!("{:>6} {:>12} {:>12}", "z", "|E|", "|H|");
    for s in sys.field_profile(&psi0, -1.0, &zs)? {
        let norm = |v: [_; 3]| v.iter().map(|z: &layerdtn::linalg::C64| z.norm_sqr()).sum::<f64>().sqrt();
        println!("{:>6.2} {:>12.5} {:>12.5}", s.z, norm(s.e_field()), norm(s.h_field()));
    }
    Ok(())
}
