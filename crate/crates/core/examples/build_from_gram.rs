//! Realize a pcubed isometry from a pair of Gram matrices and inspect it.

use pcubed::matcore::{gram_to_kets, GramMatrix, DEFAULT_TOL};
use pcubed::prelude::*;

fn main() -> Result<()> {
    let b = GramMatrix::from_real(3, &[1.0, 0.6, 0.2, 0.6, 1.0, 0.4, 0.2, 0.4, 1.0])?;
    let c = GramMatrix::from_real(3, &[1.0, 0.9, 0.8, 0.9, 1.0, 0.7, 0.8, 0.7, 1.0])?;
    let iso = PcubedIsometry::from_gram_pair(&b, &c)?;
    println!("dims: a={} b={} c={}", iso.dim_a(), iso.dim_b(), iso.dim_c());
    println!("isometry defect {:.2e}, product defect {:.2e}", iso.isometry_defect(), iso.product_defect());
    println!("A = B * C:\n{:.4}", iso.gram_a().matrix().map(|z| z.re));

    let kets = gram_to_kets(&GramMatrix::ones(3), DEFAULT_TOL)?;
    println!("all-ones Gram needs a {}-dimensional ket space", kets.dim());
    Ok(())
}
