//! Hadamard channel from the trine POVM via a Naimark extension.

use pcubed::degrade::classify_isometry;
use pcubed::matcore::{frobenius, real_matrix, CMatrix};
use pcubed::prelude::*;

fn main() -> Result<()> {
    let s = (2.0f64 / 3.0).sqrt();
    let h = 3f64.sqrt() / 2.0;
    let trine = real_matrix(2, 3, &[s, -0.5 * s, -0.5 * s, 0.0, h * s, -h * s]);
    let gamma = KetFamily::from_real_columns(2, 3, &[1.0, 0.6, 0.0, 0.0, 0.8, 1.0])?;

    let ext = naimark_hadamard(&gamma, &trine)?;
    let v = ext.embedding();
    println!("V^H V - I: {:.2e}", frobenius(&(v.adjoint() * v - CMatrix::identity(2, 2))));
    let u = ext.unitary();
    println!("U U^H - I: {:.2e}", frobenius(&(u * u.adjoint() - CMatrix::identity(3, 3))));
    println!("extension verdict {:?}", classify_isometry(ext.iso(), DEFAULT_TOL).tag);
    println!("hadamard subchannel defect {:.2e}", ext.hadamard()?.isometry_defect());
    Ok(())
}
