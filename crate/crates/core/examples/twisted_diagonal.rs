use pcubed::degrade::twisted_residual;
use pcubed::matcore::{c64, GramMatrix};
use pcubed::prelude::*;

fn main() -> Result<()> {
    let b = GramMatrix::uniform(3, c64(0.4, 0.0))?;
    let c = GramMatrix::uniform(3, c64(0.7, 0.0))?;
    let iso = PcubedIsometry::from_gram_pair(&b, &c)?;
    let form = twisted_diagonal(&iso)?;
    println!("mu = {:?}", form.mu);
    println!("nu = {:?}", form.nu);
    println!("lambda:\n{:.4}", form.lambda.map(|z| z.re));
    let kraus = iso.kraus_operators(Side::Direct);
    println!("off-diagonal defect {:.2e}", form.diagonal_defect(kraus.kraus()));
    println!("reconstruction residual {:.2e}", twisted_residual(&iso, &form));
    Ok(())
}
