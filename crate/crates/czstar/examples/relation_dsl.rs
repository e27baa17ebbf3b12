//! Write a relation as text and check it over all bindings.

use czstar::relcheck::{parse_suite_text, RegistrySpec, Setup};

const SUITE: &str = "
# closure of the plus generators
[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m}
# the same with a wrong phase
[L+{n},L+{m}]_(m-n+1) == qb(n-m)*L+{n+m} for n in 1..2, m in 0..0
";

fn main() -> czstar::Result<()> {
    let rels = parse_suite_text(SUITE)?;
    for r in &rels {
        println!("parsed: {r}");
    }
    let setup = Setup::default();
    let rep = RegistrySpec::parse("qhcz")?.check("demo", &rels, 1e-12, &setup)?;
    for c in rep.failures() {
        println!("fails at {} with residual {:.3}", c.params, c.residual);
    }
    println!("{} checks, {} failing", rep.checks.len(), rep.failures().count());
    Ok(())
}
