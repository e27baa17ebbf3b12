//! Composites of magnetic translations as quantum-plane monomials.

use czstar::phase::PhaseRing;
use czstar::qplane::dmt_composite_check;

fn main() -> czstar::Result<()> {
    let size = 6;
    let q = PhaseRing::new(2 * size as i64)?.phase(4);
    let rep = dmt_composite_check(size, q)?;
    for c in &rep.checks {
        println!("{:<24} {}", c.name, if c.pass { "exact" } else { "FAIL" });
    }
    Ok(())
}
