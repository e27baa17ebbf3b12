//! Run every built-in suite and its mutated twin.

use czstar::relcheck::{builtin_suites, Setup};

fn main() -> czstar::Result<()> {
    let setup = Setup::default();
    for s in builtin_suites() {
        let rep = s.run(&setup)?;
        let twin = s.run_twin(&setup)?;
        println!(
            "{:<22} {:>5} checks  pass={:<5}  twin fails={}",
            s.name,
            rep.checks.len(),
            rep.all_pass(),
            !twin.all_pass()
        );
    }
    Ok(())
}
