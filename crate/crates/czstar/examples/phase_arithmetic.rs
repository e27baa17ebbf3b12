//! Exact roots of unity and q-numbers.

use czstar::phase::{q_bracket, PhaseRing};

fn main() -> czstar::Result<()> {
    // ω = e^{iπ/14}, q = ω²
    let ring = PhaseRing::new(14)?;
    let q = ring.phase(2);
    println!("q = {q}, q^7 = {}, q^14 = {}", q.pow(7), q.pow(14));
    println!("q^(1/2) = {}", q.sqrt()?);
    for n in 0..=7 {
        println!("[{n}]_q = {:.6}", q_bracket(n, q)?);
    }
    Ok(())
}
