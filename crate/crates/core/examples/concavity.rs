//! Hessian probe of the coherent information over random interior states.

use pcubed::capacity::{hessian_probe_with, ProbeOptions};
use pcubed::prelude::*;

fn main() -> Result<()> {
    let opts = ProbeOptions { samples: 400, ..ProbeOptions::default() };
    for (b, c) in [(0.2, 0.5), (0.5, 0.2), (0.45, -0.35), (0.4, 0.4)] {
        let q = SymmetricQutrit::new(b, c)?;
        let probe = hessian_probe_with(q.iso(), &opts);
        println!(
            "b={b:5} c={c:5}  {:8}  hessian eigenvalues in [{:.3e}, {:.3e}]",
            probe.verdict.as_str(),
            probe.min_hessian_eig,
            probe.max_hessian_eig
        );
    }
    Ok(())
}
