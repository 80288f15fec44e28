//! Classify a few Gram pairs and build the degrading isometry when one exists.

use pcubed::degrade::degradability_matrix;
use pcubed::matcore::{c64, GramMatrix};
use pcubed::prelude::*;

fn uniform(x: f64) -> GramMatrix {
    GramMatrix::uniform(3, c64(x, 0.0)).unwrap()
}

fn main() -> Result<()> {
    for (b, c) in [(0.2, 0.5), (0.5, 0.2), (0.4, 0.4), (0.5, -0.4)] {
        let v = classify(&uniform(b), &uniform(c), DEFAULT_TOL);
        println!("b={b:5} c={c:5}  {:?}  min eig D = {:?}", v.tag, v.min_eig_d);
    }

    let (b, c) = (uniform(0.2), uniform(0.5));
    println!("D = B /* C:\n{:.4}", degradability_matrix(&b, &c, DEFAULT_TOL)?.matrix().map(|z| z.re));
    let iso = PcubedIsometry::from_gram_pair(&b, &c)?;
    let k = degrading_isometry(&iso, DEFAULT_TOL)?;
    println!("degrading residual {:.2e}", verify_degrading(&iso, &k)?);
    Ok(())
}
