//! U_q(sl2) generators hidden in the Hamiltonian.

use czstar::phase::FluxRatio;
use czstar::tbm::{uqsl2_check, Uqsl2Kind};

fn main() -> czstar::Result<()> {
    for kind in [Uqsl2Kind::Base, Uqsl2Kind::Primed, Uqsl2Kind::Q2, Uqsl2Kind::Q4] {
        for q in [3, 5] {
            let rep = uqsl2_check(kind, FluxRatio::new(1, q)?)?;
            println!("{kind:?} phi=1/{q}: max residual {:.2e}, pass {}", rep.max_residual(), rep.all_pass());
        }
    }
    Ok(())
}
