//! One-shot capacities of a symmetric qutrit pair by multistart maximization.

use pcubed::prelude::*;

fn main() -> Result<()> {
    let opts = MultistartOptions::default().with_starts(16);
    for (b, c) in [(0.2, 0.5), (0.4, -0.35), (0.45, -0.4)] {
        let q = SymmetricQutrit::new(b, c)?;
        let d = one_shot_capacity(q.iso(), Side::Direct, &opts);
        let k = one_shot_capacity(q.iso(), Side::Complementary, &opts);
        println!("b={b:5} c={c:5}  Q1(B)={:.6}  Q1(C)={:.6}  converged={}", d.capacity(), k.capacity(), d.converged && k.converged);
    }

    let q = SymmetricQutrit::new(0.3, -0.3)?;
    for kind in [RhoKind::Rho0(0.2), RhoKind::Rho1, RhoKind::Rho2(0.25)] {
        let rho = pcubed::qutritlab::rho_special(kind)?;
        println!("{kind:?}: coherent information {:.6}", coherent_information(q.iso(), &rho)?);
    }
    Ok(())
}
