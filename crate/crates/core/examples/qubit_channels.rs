//! Qubit pcubed channels are always degradable or antidegradable, and approach
//! amplitude damping as the input overlap closes.

use pcubed::degrade::classify_isometry;
use pcubed::gallery::amplitude_damping;
use pcubed::prelude::*;

fn main() -> Result<()> {
    for (b1, c1) in [(0.8, 0.3), (0.3, 0.8), (0.5, 0.5)] {
        let iso = qubit_channel(&QubitParams::from_output_amplitudes(b1, c1)?)?;
        println!("b1={b1} c1={c1}: {:?}", classify_isometry(&iso, DEFAULT_TOL).tag);
    }

    let p = 0.3;
    let target = amplitude_damping(p)?;
    for a1 in [0.1, 0.05, 0.025] {
        let ch = damping_limit_family(p, a1)?.channels();
        println!("a1={a1:<6} distance to damping {:.3e}", ch.direct.distance_on_dyads(&target.direct)?);
    }
    Ok(())
}
