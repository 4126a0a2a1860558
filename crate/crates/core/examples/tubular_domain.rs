//! Coordinates on Hermitian matrices and the positive semidefinite cone.

use layerdtn::linalg::{c, CMatrix};
use layerdtn::tubular::{basis, cone_member, phi, phi_inv, self_duality_check, trace_product};
use layerdtn::Result;

fn main() -> Result<()> {
    let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, -1.0), c(0.5, 1.0), c(1.0, 0.0)]);
    let b = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(-0.5, 0.0)]);

    let (pa, pb) = (phi(&a)?, phi(&b)?);
    println!("phi(A) = {:?}", pa.coords);
    println!("Tr(AB) = {:.15}, phi(A).phi(B) = {:.15}", trace_product(&a, &b), pa.dot(&pb));
    println!("phi_inv(phi(A)) == A: {}", (phi_inv(&pa.coords)? - &a).norm() < 1e-15);

    for (k, e) in basis(2).iter().enumerate() {
        println!("basis {k}: phi = {:?}", phi(e)?.coords);
    }

    for (name, h) in [("A", &a), ("B", &b)] {
        let m = cone_member(h, 1e-12)?;
        let d = self_duality_check(h, 200, 7)?;
        println!(
            "{name}: psd = {}, interior = {}, margin = {:.4}, witness Tr = {:.4}",
            m.closed, m.interior, m.margin, d.witness_trace
        );
    }
    Ok(())
}
