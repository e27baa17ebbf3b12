//! Acceptance criteria 1-10. Each test prints one PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Rational64;

use czstar::czrep::{
    closure_residual, cyclic_residual, cyclic_sum, czcz_residual, mixing_residual, CZParams, CyclicIdentity, Family,
    RepKind, Sign,
};
use czstar::phase::{FluxRatio, PhaseRing};
use czstar::qcalc::{czt_decomposition_check, verify_mta, Laurent};
use czstar::relcheck::suites::{build_family, cz_q, FamilySel};
use czstar::relcheck::{builtin_suites, parse_relation, run_suite, Setup};
use czstar::report::Report;
use czstar::tbm::{
    build_hamiltonian, butterfly_sweep, eigen_residual, spectrum, tbm_chain_check, uqsl2_check,
    verify_dmt_algebra, HamiltonianKind, HamiltonianSpec, LatticeSpec, SignConvention, Uqsl2Kind,
};
use czstar::weyl::{make_x, make_y, rel_residual, weyl_exchange_check};

const WEYL_EXACT: f64 = 0.0;
const CZ_TOL: f64 = 1e-12;
const CYCLIC_TOL: f64 = 1e-11;
const SPLIT_TOL: f64 = 1e-12;
const FFZ_TOL: f64 = 1e-12;
const CZT_TOL: f64 = 1e-13;
const CHAIN_TOL: f64 = 1e-14;
const BUILT_TOL: f64 = 1e-13;
const UQSL2_TOL: f64 = 1e-12;
const SPEC_TOL: f64 = 1e-9;
const BAND_EDGE: f64 = 4.0;
const BREAK_MIN: f64 = 1e-3;
const FUZZ_COUNT: u64 = 10_000;

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n:>2}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn all_pass(reps: &[Report]) -> bool {
    reps.iter().all(|r| r.all_pass() && !r.checks.is_empty())
}

fn worst(reps: &[Report]) -> f64 {
    reps.iter().map(Report::max_residual).fold(0.0, f64::max)
}

#[test]
fn c01_weyl_exchange_exact() {
    let t = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    for n in 3..=12usize {
        let q = cz_q(n).unwrap();
        for a in 0..n as i64 {
            for b in 0..n as i64 {
                ok &= weyl_exchange_check(n, q, a, b).unwrap();
                checked += 1;
            }
        }
        // dense spot check of the exponent-level answer
        let x = make_x(n, q.ring()).unwrap();
        let y = make_y(n, q).unwrap();
        let lhs = &y.pow(2).to_cmatrix() * &x.pow(1).to_cmatrix();
        let rhs = (&x.to_cmatrix() * &y.pow(2).to_cmatrix()).scale(q.pow(2).to_complex());
        ok &= rel_residual(&lhs, &rhs) < 1e-14;
    }
    let el = t.elapsed();
    let ok = ok && el < Duration::from_secs(1);
    verdict(1, ok, format!("{checked} (N,m,n) exact at tolerance {WEYL_EXACT:e}, {el:.2?}"));
}

fn cz_families(size: usize) -> Vec<(String, Family)> {
    let q = cz_q(size).unwrap();
    let mut v = vec![(
        "qhcz+hlh".to_string(),
        Family::Qhcz {
            params: CZParams::czhq2(size, q).unwrap(),
            hlh: true,
        },
    )];
    for kind in [RepKind::Czhq2, RepKind::Czhz, RepKind::Czhqk(1), RepKind::Czhqk(2), RepKind::Czhqk(3)] {
        v.push((format!("{kind:?}"), Family::Rep { kind, size, q }));
    }
    v
}

#[test]
fn c02_cz_closure_and_compact_form() {
    let t = Instant::now();
    let mut worst_r: f64 = 0.0;
    let mut count = 0;
    for size in 5..=8 {
        for (_, f) in cz_families(size) {
            for n in -3..=3 {
                for m in -3..=3 {
                    for s in Sign::both() {
                        worst_r = worst_r.max(closure_residual(&f, s, n, m).unwrap());
                        for e in Sign::both() {
                            worst_r = worst_r.max(czcz_residual(&f, s, e, n, m).unwrap());
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    // the DSL evaluator is an independent path through the same relations
    let mut dsl = Vec::new();
    for kind in ["qhcz", "czhq2", "czhz", "czhqk"] {
        for k in 1..=3 {
            let setup = Setup {
                n: Some(7),
                kind: Some(kind.into()),
                k,
                bound: 3,
                ..Setup::default()
            };
            dsl.push(run_suite("cz-closure", &setup).unwrap());
            dsl.push(run_suite("czcz", &setup).unwrap());
        }
    }
    let el = t.elapsed();
    let ok = worst_r < CZ_TOL && all_pass(&dsl) && el < Duration::from_secs(5);
    verdict(
        2,
        ok,
        format!("{count} CZ* bindings, worst {worst_r:.1e}, DSL worst {:.1e} < {CZ_TOL:e}, {el:.2?}", worst(&dsl)),
    );
}

#[test]
fn c03_cyclic_identities() {
    let setup = Setup::default();
    let f = build_family(FamilySel::Qhcz { hlh: true }, &setup).unwrap();
    let mut w: f64 = 0.0;
    let mut split: f64 = 0.0;
    for n in -2..=2 {
        for m in -2..=2 {
            for l in -2..=2 {
                for which in [CyclicIdentity::HomJacobi, CyclicIdentity::YangBaxter, CyclicIdentity::Consistency] {
                    w = w.max(cyclic_residual(&f, which, n, m, l).unwrap());
                }
                let hlj = cyclic_sum(&f, CyclicIdentity::HomJacobi, n, m, l).unwrap();
                let yb = cyclic_sum(&f, CyclicIdentity::YangBaxter, n, m, l).unwrap();
                let hl2 = cyclic_sum(&f, CyclicIdentity::Consistency, n, m, l).unwrap();
                split = split.max(rel_residual(&hlj, &(&yb + &hl2)));
            }
        }
    }
    let names = ["hom-jacobi", "yang-baxter", "consistency", "hom-jacobi-laurent", "yang-baxter-laurent", "consistency-laurent"];
    let reps: Vec<Report> = names.iter().map(|s| run_suite(s, &setup).unwrap()).collect();
    let ok = w < CYCLIC_TOL && split < SPLIT_TOL && all_pass(&reps);
    verdict(
        3,
        ok,
        format!(
            "matrix worst {w:.1e}, Laurent/DSL worst {:.1e} < {CYCLIC_TOL:e}; splitting {split:.1e} < {SPLIT_TOL:e}",
            worst(&reps)
        ),
    );
}

#[test]
fn c04_mta_ffz_czt() {
    let mta = verify_mta(3, &Laurent::default()).unwrap();
    let exact_ok = mta.checks.iter().filter(|c| c.name != "ffz").all(|c| c.pass && c.residual == 0.0);
    let ffz = mta.checks.iter().filter(|c| c.name == "ffz").map(|c| c.residual).fold(0.0, f64::max);
    let mut czt: f64 = 0.0;
    let mut czt_all = true;
    for delta in [Rational64::from_integer(0), Rational64::new(1, 2)] {
        let lr = Laurent::default().with_delta(delta);
        for n in -3..=3 {
            let rep = czt_decomposition_check(n, &lr).unwrap();
            czt_all &= rep.all_pass();
            for c in rep.checks.iter().filter(|c| c.name == "decomposition") {
                czt = czt.max(c.residual);
            }
        }
    }
    let ok = exact_ok && ffz < FFZ_TOL && czt < CZT_TOL && czt_all;
    verdict(
        4,
        ok,
        format!("{} tau checks exact, FFZ {ffz:.1e} < {FFZ_TOL:e}, CZT {czt:.1e} < {CZT_TOL:e}", mta.checks.len()),
    );
}

#[test]
fn c05_lattice_dmt() {
    let mut ok = true;
    let mut sites = 0;
    for (p, q) in [(1, 3), (1, 4), (2, 5)] {
        let spec = LatticeSpec::new(10, 10, FluxRatio::new(p, q).unwrap()).unwrap();
        let rep = verify_dmt_algebra(&spec);
        for name in ["exchange", "fusion", "circulation", "gauge"] {
            let n = rep.checks.iter().filter(|c| c.name == name).count();
            ok &= n == 64;
        }
        ok &= rep.all_pass();
        sites += rep.checks.len();
    }
    verdict(5, ok, format!("{sites} exact site checks over phi = 1/3, 1/4, 2/5"));
}

#[test]
fn c06_tbm_chain() {
    let mut reps = Vec::new();
    let mut singular_reported = true;
    for (p, q) in [(1, 3), (1, 4), (2, 5)] {
        let rep = tbm_chain_check(FluxRatio::new(p, q).unwrap()).unwrap();
        let c = rep.checks.iter().find(|c| c.name == "h-from-hz-invertible-part").unwrap();
        singular_reported &= c.params.get("singular").is_some_and(|v| v.is_array());
        reps.push(rep);
    }
    let chain = reps
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| c.name == "mbeq-equals-mbh" || c.name == "hermitian")
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    let built = reps
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| ["hcheck", "hn-from-czhq2", "hz-equals-h-z"].contains(&c.name.as_str()))
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    let ok = all_pass(&reps) && chain < CHAIN_TOL && built < BUILT_TOL && singular_reported;
    verdict(
        6,
        ok,
        format!("chain/Hermitian {chain:.1e} < {CHAIN_TOL:e}, CZ-built {built:.1e} < {BUILT_TOL:e}, [Z] singular entries reported"),
    );
}

#[test]
fn c07_uqsl2() {
    let mut reps = Vec::new();
    for kind in [Uqsl2Kind::Base, Uqsl2Kind::Primed, Uqsl2Kind::Q2, Uqsl2Kind::Q4] {
        for q in [2, 3, 5] {
            reps.push(uqsl2_check(kind, FluxRatio::new(1, q).unwrap()).unwrap());
            let setup = Setup {
                flux: FluxRatio::new(1, q).unwrap(),
                ..Setup::default()
            };
            let name = match kind {
                Uqsl2Kind::Base => "uqsl2",
                Uqsl2Kind::Primed => "uqsl2-primed",
                Uqsl2Kind::Q2 => "uqsl2-q2",
                Uqsl2Kind::Q4 => "uqsl2-q4",
            };
            reps.push(run_suite(name, &setup).unwrap());
        }
    }
    let w = worst(&reps);
    verdict(7, all_pass(&reps) && w < UQSL2_TOL, format!("4 kinds x Q in {{2,3,5}}, worst {w:.1e} < {UQSL2_TOL:e}"));
}

#[test]
fn c08_spectral() {
    let mut spec_diff: f64 = 0.0;
    let mut eig: f64 = 0.0;
    for q in 2..=10i64 {
        for p in (1..q).filter(|p| num_integer::gcd(*p, q) == 1) {
            let flux = FluxRatio::new(p, q).unwrap();
            let h = build_hamiltonian(&HamiltonianSpec::new(HamiltonianKind::H, flux)).unwrap();
            let hp = build_hamiltonian(&HamiltonianSpec::new(HamiltonianKind::Hprime, flux)).unwrap();
            let a = spectrum(&h).unwrap();
            let b = spectrum(&hp).unwrap();
            for (x, y) in a.iter().zip(&b) {
                spec_diff = spec_diff.max((x - y).abs());
            }
            eig = eig.max(eigen_residual(&h).unwrap());
        }
    }
    let t = Instant::now();
    let rows = butterfly_sweep(20, HamiltonianKind::H, SignConvention::MinusPiPhi).unwrap();
    let el = t.elapsed();
    let edge = rows.iter().map(|r| r.energy.abs()).fold(0.0, f64::max);
    let ok = spec_diff < SPEC_TOL
        && eig < SPEC_TOL
        && edge <= BAND_EDGE + SPEC_TOL
        && el < Duration::from_secs(10);
    verdict(
        8,
        ok,
        format!(
            "spec diff {spec_diff:.1e}, eigen residual {eig:.1e}/|H| < {SPEC_TOL:e}, max |E| {edge:.6} over {} rows, Qmax 20 in {el:.2?}",
            rows.len()
        ),
    );
}

#[test]
fn c09_negative_controls() {
    let size = 7;
    let q = PhaseRing::new(2 * size as i64).unwrap().phase(4);
    let params = CZParams::czhq2(size, q).unwrap().with_b(Complex64::new(1.0, 0.0));
    let mut tilde: f64 = 0.0;
    let mut notilde: f64 = 0.0;
    let raw = Family::Qhcz { params: params.clone(), hlh: false };
    let hlh = Family::Qhcz { params, hlh: true };
    for n in -2..=2 {
        for m in -2..=2 {
            tilde = tilde.max(mixing_residual(&raw, n, m, true).unwrap());
            notilde = notilde.max(mixing_residual(&hlh, n, m, false).unwrap());
        }
    }
    let setup = Setup::default();
    let mut passing_twins = Vec::new();
    let suites = builtin_suites();
    for s in &suites {
        if s.run_twin(&setup).unwrap().all_pass() {
            passing_twins.push(s.name);
        }
    }
    let ok = tilde > BREAK_MIN && notilde > BREAK_MIN && passing_twins.is_empty();
    verdict(
        9,
        ok,
        format!(
            "b=1 mixing residuals {tilde:.2} / {notilde:.2} > {BREAK_MIN:e}; {} twins fail, passing: {passing_twins:?}",
            suites.len() - passing_twins.len()
        ),
    );
}

#[test]
fn c10_dsl_round_trip_and_fuzz() {
    let mut builtin = 0;
    let mut ok = true;
    for s in builtin_suites() {
        for r in s.relations().unwrap() {
            ok &= parse_relation(&r.to_string()).ok() == Some(r);
            builtin += 1;
        }
    }
    let mut fuzz_ok = 0u64;
    for seed in 0..FUZZ_COUNT {
        let text = common::Gen::new(seed).relation();
        let result = std::panic::catch_unwind(|| {
            let r = parse_relation(&text).ok()?;
            let again = parse_relation(&r.to_string()).ok()?;
            (again == r).then_some(())
        });
        if matches!(result, Ok(Some(()))) {
            fuzz_ok += 1;
        }
    }
    let ok = ok && fuzz_ok == FUZZ_COUNT;
    verdict(
        10,
        ok,
        format!("{builtin} builtin relations round-trip; {fuzz_ok}/{FUZZ_COUNT} generated strings parse and round-trip"),
    );
}
