//! Clock and shift matrices and their exchange relation.

use czstar::phase::PhaseRing;
use czstar::weyl::{make_x, make_y, weyl_exchange_check};

fn main() -> czstar::Result<()> {
    let n = 5;
    let q = PhaseRing::new(2 * n as i64)?.phase(4);
    let x = make_x(n, q.ring())?;
    let y = make_y(n, q)?;
    let yx = y.mul(&x)?;
    let xy = x.mul(&y)?;
    println!("YX = q XY exactly: {}", yx.same_matrix(&xy.scaled(q)?));
    let all = (0..n as i64).all(|m| (0..n as i64).all(|k| weyl_exchange_check(n, q, m, k).unwrap_or(false)));
    println!("Y^m X^n = q^(mn) X^n Y^m for all m, n < {n}: {all}");
    Ok(())
}
