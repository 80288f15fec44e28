//! Conjugate degradability: parallel environment kets split the inputs into collections.

use pcubed::matcore::{c64, real_matrix, GramMatrix};
use pcubed::prelude::*;

fn main() -> Result<()> {
    let s = 0.6;
    let b = GramMatrix::from_real(3, &[1.0, s, 0.0, s, 1.0, 0.0, 0.0, 0.0, 1.0])?;
    let mut cm = real_matrix(3, 3, &[1.0, 0.0, 0.3, 0.0, 1.0, 0.3, 0.3, 0.3, 1.0]);
    cm[(0, 1)] = c64(0.0, 1.0);
    cm[(1, 0)] = c64(0.0, -1.0);
    cm[(0, 2)] = c64(0.0, 0.3);
    cm[(2, 0)] = c64(0.0, -0.3);
    let iso = PcubedIsometry::from_gram_pair(&b, &GramMatrix::new(cm)?)?;

    let report = conjugate_analysis(&iso, DEFAULT_TOL);
    println!("collections {:?}", report.collections);
    println!("conjugate degradable: {}", report.verdict);
    println!("cross overlap {:.2e}", report.max_cross_overlap);
    if let Some(k) = &report.degrader {
        println!("degrader residual {:.2e}", verify_degrading(&iso, k)?);
    }
    println!("ordinary verdict {:?}", classify(&iso.gram_b(), &iso.gram_c(), DEFAULT_TOL).tag);
    Ok(())
}
