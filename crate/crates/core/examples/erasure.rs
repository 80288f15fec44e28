use pcubed::degrade::classify_isometry;
use pcubed::gallery::{erasure_limit_matrix, erasure_subchannel};
use pcubed::matcore::frobenius;
use pcubed::prelude::*;

fn main() -> Result<()> {
    for p in [0.2, 0.5, 0.7] {
        let iso = erasure_family(&ErasureParams::qubit(p, p, 1e-3, 1e-3))?;
        println!("p={p}: {:?}", classify_isometry(&iso, DEFAULT_TOL).tag);
    }

    for z in [1e-2, 1e-3, 1e-4] {
        let iso = erasure_family(&ErasureParams::qubit(0.3, 0.2, z, z))?;
        println!("regulator {z:e}: distance to limit {:.2e}", frobenius(&(iso.matrix() - erasure_limit_matrix(&[0.3, 0.2]))));
    }

    let sub = erasure_subchannel(&ErasureParams::qubit(0.3, 0.3, 1e-3, 1e-3))?;
    println!("subchannel input dim {}, defect {:.2e}", sub.input_dim(), sub.isometry_defect());

    let three = erasure_family(&ErasureParams::uniform_regulator(vec![0.1, 0.4, 0.2], 1e-3))?;
    println!("three levels: {:?}", classify_isometry(&three, DEFAULT_TOL).tag);
    Ok(())
}
