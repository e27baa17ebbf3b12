//! CZ closure and the CZ* compact form on several matrix representations.

use czstar::czrep::{closure_residual, czcz_residual, Family, RepKind, Sign};
use czstar::phase::PhaseRing;

fn main() -> czstar::Result<()> {
    let size = 7;
    let q = PhaseRing::new(2 * size as i64)?.phase(4);
    for kind in [RepKind::Czhq2, RepKind::Czhz, RepKind::Czhqk(2)] {
        let f = Family::Rep { kind, size, q };
        let mut worst: f64 = 0.0;
        for n in -3..=3 {
            for m in -3..=3 {
                for s in Sign::both() {
                    worst = worst.max(closure_residual(&f, s, n, m)?);
                    for t in Sign::both() {
                        worst = worst.max(czcz_residual(&f, s, t, n, m)?);
                    }
                }
            }
        }
        println!("{kind:?}: worst residual {worst:.2e}");
    }
    Ok(())
}
