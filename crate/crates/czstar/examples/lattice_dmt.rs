//! Magnetic translations on a 10x10 lattice.

use czstar::phase::FluxRatio;
use czstar::tbm::{verify_dmt_algebra, LatticeSpec};

fn main() -> czstar::Result<()> {
    for (p, q) in [(1, 3), (1, 4), (2, 5)] {
        let spec = LatticeSpec::new(10, 10, FluxRatio::new(p, q)?)?;
        let rep = verify_dmt_algebra(&spec);
        println!("phi = {p}/{q}: {} site checks, all exact: {}", rep.checks.len(), rep.all_pass());
    }
    Ok(())
}
