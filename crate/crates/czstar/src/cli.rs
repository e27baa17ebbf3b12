//! Command-line front end. Reports are JSON, spectra are CSV.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! configuration or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::phase::FluxRatio;
use crate::relcheck::suites::{builtin_suites, find_suite, run_suite_text, Setup};
use crate::relcheck::{evaluate, parse_relation, relation_residual, Value as DslValue};
use crate::report::Report;
use crate::tbm::{
    butterfly_sweep, circulation_label, spectrum_rows, write_csv, HamiltonianKind, HamiltonianSpec,
    SignConvention,
};

#[derive(Parser, Debug)]
#[command(name = "czstar", version, about = "Exact checks of CZ algebra realizations and tight-binding spectra")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run built-in suites or a suite file and print JSON reports.
    #[command(visible_alias = "suite")]
    Verify(VerifyArgs),
    /// Eigenvalues of one Hamiltonian as CSV.
    Spectrum(SpectrumArgs),
    /// Spectra for every coprime P/Q with Q <= Qmax as CSV.
    Butterfly(ButterflyArgs),
    /// Worked examples: a few relations evaluated step by step, as JSON.
    Demo(DemoArgs),
    /// List the built-in suites as JSON.
    Suites,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite names (case-insensitive); may also be given with --suite.
    names: Vec<String>,
    /// Suite name; repeatable.
    #[arg(long = "suite")]
    suite: Vec<String>,
    /// File with one relation per line and `#` comments.
    #[arg(long)]
    suite_file: Option<PathBuf>,
    /// Run every built-in suite.
    #[arg(long)]
    all: bool,
    /// Matrix size (default: 7 for CZ families, 6 for Weyl/DMT matrices).
    #[arg(long = "N")]
    size: Option<usize>,
    /// Flux numerator for lattice, chain and U_q(sl2) suites.
    #[arg(long = "P", default_value_t = 1)]
    p: i64,
    /// Flux denominator.
    #[arg(long = "Q", default_value_t = 3)]
    q: i64,
    /// Registry: qhcz, qhcz-raw, czhq2, czhz, czhqk, czhq1, trivial-yx, trivial-h,
    /// weyl, laurent, uqsl2-{base,primed,q2,q4}. Overrides the family of
    /// family-based suites; picks the registry of --suite-file (default qhcz).
    #[arg(long)]
    kind: Option<String>,
    /// k of the czhqk family.
    #[arg(long, default_value_t = 1)]
    k: i64,
    /// Deformation b of the cyclic representation.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b: f64,
    /// Conformal weight offset of the Laurent realization, e.g. 1/2.
    #[arg(long, default_value = "0")]
    delta: String,
    /// Unbound variables range over [-bound, bound].
    #[arg(long, default_value_t = 2)]
    bound: i64,
    /// Override every suite tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HamiltonianArgs {
    /// Hamiltonian: H, Hprime, Hn, Hcheck, Hnk, HZ.
    #[arg(long, default_value = "H")]
    kind: String,
    /// n of Hn and Hnk.
    #[arg(long, default_value_t = 1)]
    n: i64,
    /// k of Hcheck and Hnk.
    #[arg(long, default_value_t = 1)]
    k: i64,
    /// q convention: minus_pi_phi, plus_pi_phi, two_pi_phi.
    #[arg(long, default_value = "minus_pi_phi")]
    sign_convention: String,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// Flux numerator.
    #[arg(long = "P")]
    p: i64,
    /// Flux denominator.
    #[arg(long = "Q")]
    q: i64,
    #[command(flatten)]
    ham: HamiltonianArgs,
}

#[derive(Args, Debug)]
struct ButterflyArgs {
    /// Largest flux denominator.
    #[arg(long = "Qmax")]
    qmax: i64,
    #[command(flatten)]
    ham: HamiltonianArgs,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Matrix size of the CZ family.
    #[arg(long = "N", default_value_t = 7)]
    size: usize,
    /// Flux numerator of the Hamiltonian shown.
    #[arg(long = "P", default_value_t = 1)]
    p: i64,
    /// Flux denominator.
    #[arg(long = "Q", default_value_t = 3)]
    q: i64,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    // output is buffered so the pool's closure stays Send
    let mut buf = Vec::new();
    let result = match cli.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Config(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(cli.command, &mut buf))),
        None => dispatch(cli.command, &mut buf),
    };
    if let Err(e) = stdout.write_all(&buf) {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Verify(a) => verify(a, stdout),
        Command::Spectrum(a) => {
            let spec = hamiltonian_spec(&a.ham, FluxRatio::new(a.p, a.q)?)?;
            let rows = spectrum_rows(&spec)?;
            emit_csv(a.ham.out.as_ref(), stdout, &rows)
        }
        Command::Butterfly(a) => {
            let kind = HamiltonianKind::parse(&a.ham.kind, a.ham.n, a.ham.k)?;
            let conv: SignConvention = a.ham.sign_convention.parse()?;
            let rows = butterfly_sweep(a.qmax, kind, conv)?;
            emit_csv(a.ham.out.as_ref(), stdout, &rows)
        }
        Command::Demo(a) => {
            let v = demo(&a)?;
            emit_json(a.out.as_ref(), stdout, &v)?;
            Ok(true)
        }
        Command::Suites => {
            let list: Vec<Value> = builtin_suites()
                .iter()
                .map(|s| {
                    let rels: Vec<String> = s
                        .relations()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .unwrap_or_default();
                    json!({"name": s.name, "about": s.about, "requires": s.requires(), "relations": rels})
                })
                .collect();
            emit_json(None, stdout, &Value::Array(list))?;
            Ok(true)
        }
    }
}

fn hamiltonian_spec(a: &HamiltonianArgs, flux: FluxRatio) -> Result<HamiltonianSpec> {
    Ok(HamiltonianSpec {
        kind: HamiltonianKind::parse(&a.kind, a.n, a.k)?,
        flux,
        sign_convention: a.sign_convention.parse()?,
    })
}

fn setup(a: &VerifyArgs) -> Result<Setup> {
    let delta: Rational64 = a
        .delta
        .parse()
        .map_err(|_| Error::Config(format!("--delta `{}` is not a rational number", a.delta)))?;
    if a.bound < 0 {
        return Err(Error::Config(format!("--bound must be non-negative, got {}", a.bound)));
    }
    Ok(Setup {
        n: a.size,
        flux: FluxRatio::new(a.p, a.q)?,
        b: a.b,
        delta,
        k: a.k,
        kind: a.kind.clone(),
        bound: a.bound,
        tol: a.tol,
    })
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    let setup = setup(&a)?;
    let mut names: Vec<String> = a.names.iter().chain(&a.suite).cloned().collect();
    if a.all {
        names.extend(builtin_suites().iter().map(|s| s.name.to_string()));
    }
    if names.is_empty() && a.suite_file.is_none() {
        return Err(Error::Config("nothing to verify: give --suite, --suite-file or --all".into()));
    }
    // resolve every name first so a typo fails before any work
    let suites = names.iter().map(|n| find_suite(n)).collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<Report> = Vec::new();
    for s in suites {
        reports.push(s.run(&setup)?);
    }
    if let Some(path) = &a.suite_file {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        reports.push(run_suite_text(&path.display().to_string(), &text, &setup)?);
    }
    let pass = reports.iter().all(Report::all_pass);
    if reports.len() == 1 {
        emit_json(a.out.as_ref(), stdout, &reports[0])?;
    } else {
        emit_json(a.out.as_ref(), stdout, &reports)?;
    }
    Ok(pass)
}

fn demo(a: &DemoArgs) -> Result<Value> {
    use crate::relcheck::registry::MatrixRealization;
    use crate::relcheck::suites::{build_family, FamilySel};

    let setup = Setup {
        n: Some(a.size),
        ..Setup::default()
    };
    let r = MatrixRealization {
        family: build_family(FamilySel::Qhcz { hlh: true }, &setup)?,
    };
    let env = vec![("n".to_string(), 1), ("m".to_string(), -2)];
    let mut steps = Vec::new();
    for text in [
        "[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m}",
        "[L+{n},L-{m}]_* == q^(-m)*qb(n)*L+{n+m} - q^(n)*qb(m)*L-{n+m}",
        "[Q{2},L+{n}]_(n,-n) == 0",
    ] {
        let rel = parse_relation(text)?;
        let coeff = match evaluate(&r, &rel.rhs, &env)? {
            DslValue::Scalar(c) => Some(format!("{c}")),
            DslValue::Op(..) => None,
        };
        steps.push(json!({
            "relation": rel.to_string(),
            "binding": {"n": 1, "m": -2},
            "scalar_rhs": coeff,
            "residual": relation_residual(&r, &rel, &env)?,
        }));
    }
    let flux = FluxRatio::new(a.p, a.q)?;
    let spec = HamiltonianSpec::new(HamiltonianKind::H, flux);
    let energies: Vec<f64> = spectrum_rows(&spec)?.iter().map(|row| row.energy).collect();
    Ok(json!({
        "N": a.size,
        "relations": steps,
        "lattice": {
            "phi": flux.to_string(),
            "circulation": circulation_label(flux),
            "spectrum_H": energies,
        },
    }))
}

fn emit_json<T: Serialize + ?Sized>(out: Option<&PathBuf>, stdout: &mut dyn Write, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json serializes") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn emit_csv(out: Option<&PathBuf>, stdout: &mut dyn Write, rows: &[crate::tbm::SpectrumRow]) -> Result<bool> {
    match out {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            write_csv(std::io::BufWriter::new(f), rows)?;
        }
        None => write_csv(&mut *stdout, rows)?,
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("czstar").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["verify", "--suite", "czcz", "--N", "7"]).0, 0);
        assert_eq!(call(&["suite", "tildeL-mixing", "--b", "1"]).0, 1);
        let (code, _, err) = call(&["verify", "--suite", "unknown"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown"));
        assert_eq!(call(&["spectrum", "--P", "2", "--Q", "4"]).0, 2);
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
    }

    #[test]
    fn spectrum_rows_and_help() {
        let (code, out, _) = call(&["spectrum", "--P", "1", "--Q", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 4);
        for sub in ["verify", "spectrum", "butterfly", "demo", "suites"] {
            let (code, out, _) = call(&[sub, "--help"]);
            assert_eq!(code, 0);
            assert!(out.contains("Usage"), "{sub}");
        }
    }

    #[test]
    fn demo_is_json() {
        let (code, out, _) = call(&["demo", "--N", "5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["N"], 5);
        assert_eq!(v["relations"].as_array().unwrap().len(), 3);
        for r in v["relations"].as_array().unwrap() {
            assert!(r["residual"].as_f64().unwrap() < 1e-12);
        }
    }
}
