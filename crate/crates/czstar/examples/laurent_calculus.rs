//! q-derivative generators on a window of Laurent monomials.

use czstar::czrep::Sign;
use czstar::qcalc::{czt_decomposition_check, verify_mta, Laurent};
use num_rational::Rational64;

fn main() -> czstar::Result<()> {
    let lr = Laurent::default();
    let mta = verify_mta(3, &lr)?;
    println!("tau exchange/fusion/circulation: {} checks, all pass: {}", mta.checks.len(), mta.all_pass());
    for delta in [Rational64::from_integer(0), Rational64::new(1, 2)] {
        let lr = Laurent::default().with_delta(delta);
        let ok = (-3..=3).all(|n| czt_decomposition_check(n, &lr).map(|r| r.all_pass()).unwrap_or(false));
        println!("L = -T0 + q^(n+2Δ) T2 for Δ = {delta}: {ok}");
    }
    let l1 = lr.lhat(1, Sign::Plus)?;
    println!("L+_1 acting on z^2: {:?}", l1.apply_monomial(2));
    Ok(())
}
