//! Built-in suites, the session setup they run under, and their mutated twins.

use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::json;

use crate::czrep::{trivial_g, trivial_semigroup_exact, CZParams, Family, RepKind, Sign, TrivialKind};
use crate::error::{Error, Result};
use crate::phase::{FluxRatio, Phase, PhaseRing};
use crate::qcalc::{czt_decomposition_check, verify_mta, Laurent};
use crate::qplane::dmt_composite_check;
use crate::report::Report;
use crate::tbm::{
    apply_word, bloch_reduce_midband, build_hamiltonian, eigen_residual, factorization_check,
    gershgorin_bound, h_nk, h_z_from_generators, make_uqsl2, matrix_dmt_check, spectrum,
    tbm_chain_check, verify_dmt_algebra, z_bracket, Dmt, DmtMatrices, HamiltonianKind,
    HamiltonianSpec, Ket, LatticeSpec, SignConvention, Uqsl2Kind,
};
use crate::weyl::{make_x, make_y, rel_residual, weyl_exchange_check, MonomialMatrix};

use super::ast::Relation;
use super::eval::check_relations;
use super::mutate::mutate;
use super::parser::parse_suite_text;
use super::registry::{LaurentRealization, MatrixRealization, Uqsl2Realization, WeylRealization};

/// Parameters shared by every suite of one invocation.
#[derive(Clone, Debug)]
pub struct Setup {
    /// Matrix size; each registry has its own default.
    pub n: Option<usize>,
    pub flux: FluxRatio,
    /// Deformation b of the cyclic representation.
    pub b: f64,
    pub delta: Rational64,
    /// k of the CZHQk family.
    pub k: i64,
    /// Registry override (`--kind`).
    pub kind: Option<String>,
    /// Unbound variables range over [-bound, bound].
    pub bound: i64,
    pub tol: Option<f64>,
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            n: None,
            flux: FluxRatio::new(1, 3).expect("1/3 is coprime"),
            b: 0.0,
            delta: Rational64::from_integer(0),
            k: 1,
            kind: None,
            bound: 2,
            tol: None,
        }
    }
}

/// q = e^{2πi/N} in the ring M = 2N, where i, q^{1/2} and q^{1/4} are exact.
pub fn cz_q(n: usize) -> Result<Phase> {
    Ok(PhaseRing::new(2 * n as i64)?.phase(4))
}

/// Which generators a family registry hands out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySel {
    /// Cyclic representation with the CZHQ2 a±, after (`hlh`) or before HLH.
    Qhcz { hlh: bool },
    Rep(RepKind),
    /// CZHQk with k taken from the setup.
    Czhqk,
    /// L'⁺ = -Y²ⁿ/d, L'⁻ = X̃⁻²ⁿ/d.
    TrivialYX,
    /// L'⁺ = -Hⁿ/d, L'⁻ from q^{n²}Q^{2n}Hⁿ.
    TrivialH,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegistrySpec {
    Family(FamilySel),
    Weyl,
    Laurent,
    Uqsl2(Uqsl2Kind),
}

impl RegistrySpec {
    /// Names accepted by `--kind`.
    pub const NAMES: [&'static str; 14] = [
        "qhcz", "qhcz-raw", "czhq2", "czhz", "czhqk", "czhq1", "trivial-yx", "trivial-h",
        "weyl", "laurent", "uqsl2-base", "uqsl2-primed", "uqsl2-q2", "uqsl2-q4",
    ];

    pub fn parse(s: &str) -> Result<Self> {
        use FamilySel::*;
        Ok(match s.to_ascii_lowercase().as_str() {
            "qhcz" => RegistrySpec::Family(Qhcz { hlh: true }),
            "qhcz-raw" => RegistrySpec::Family(Qhcz { hlh: false }),
            "czhq2" => RegistrySpec::Family(Rep(RepKind::Czhq2)),
            "czhz" => RegistrySpec::Family(Rep(RepKind::Czhz)),
            "czhqk" => RegistrySpec::Family(Czhqk),
            "czhq1" => RegistrySpec::Family(Rep(RepKind::Czhq1)),
            "trivial-yx" => RegistrySpec::Family(TrivialYX),
            "trivial-h" => RegistrySpec::Family(TrivialH),
            "weyl" => RegistrySpec::Weyl,
            "laurent" => RegistrySpec::Laurent,
            other => match other.strip_prefix("uqsl2-") {
                Some(k) => RegistrySpec::Uqsl2(k.parse()?),
                None => return Err(Error::Config(format!("unknown kind `{s}`"))),
            },
        })
    }

    /// Run relations against this registry under `setup`.
    pub fn check(&self, suite: &str, rels: &[Relation], tol: f64, setup: &Setup) -> Result<Report> {
        let range = (-setup.bound, setup.bound);
        match self {
            RegistrySpec::Family(sel) => {
                let r = MatrixRealization {
                    family: build_family(*sel, setup)?,
                };
                check_relations(&r, suite, rels, tol, range)
            }
            RegistrySpec::Weyl => {
                let n = setup.n.unwrap_or(6);
                let r = WeylRealization { size: n, q: cz_q(n)? };
                check_relations(&r, suite, rels, tol, range)
            }
            RegistrySpec::Laurent => {
                let r = LaurentRealization {
                    laurent: Laurent::default().with_delta(setup.delta),
                };
                check_relations(&r, suite, rels, tol, range)
            }
            RegistrySpec::Uqsl2(kind) => {
                let r = Uqsl2Realization {
                    gens: make_uqsl2(*kind, setup.flux)?,
                };
                check_relations(&r, suite, rels, tol, range)
            }
        }
    }
}

pub fn build_family(sel: FamilySel, setup: &Setup) -> Result<Family> {
    let czhq1 = sel == FamilySel::Rep(RepKind::Czhq1);
    let size = setup.n.unwrap_or(if czhq1 { 6 } else { 7 });
    let q = if czhq1 {
        // needs q^{N/2} = 1: q = e^{4πi/N}
        PhaseRing::new(2 * size as i64)?.phase(8)
    } else {
        cz_q(size)?
    };
    Ok(match sel {
        FamilySel::Qhcz { hlh } => Family::Qhcz {
            params: CZParams::czhq2(size, q)?.with_b(Complex64::new(setup.b, 0.0)),
            hlh,
        },
        FamilySel::Rep(kind) => Family::Rep { kind, size, q },
        FamilySel::Czhqk => Family::Rep {
            kind: RepKind::Czhqk(setup.k),
            size,
            q,
        },
        FamilySel::TrivialYX => Family::Trivial {
            plus: TrivialKind::YSquared,
            minus: TrivialKind::XtildeInvSquared,
            size,
            q,
        },
        FamilySel::TrivialH => Family::Trivial {
            plus: TrivialKind::PowH(q.ring().one()),
            minus: TrivialKind::QuadQ(1),
            size,
            q,
        },
    })
}

type NativeFn = fn(&Setup) -> Result<Report>;

#[derive(Clone, Copy, Debug)]
pub enum Body {
    Dsl {
        registry: RegistrySpec,
        text: &'static str,
        tol: f64,
    },
    Native { run: NativeFn, twin: NativeFn },
}

#[derive(Clone, Copy, Debug)]
pub struct BuiltinSuite {
    pub name: &'static str,
    pub about: &'static str,
    pub body: Body,
}

impl BuiltinSuite {
    /// Registry the suite evaluates against, or "native".
    pub fn requires(&self) -> String {
        match self.body {
            Body::Dsl { registry, .. } => format!("{registry:?}"),
            Body::Native { .. } => "native".into(),
        }
    }

    pub fn relations(&self) -> Result<Vec<Relation>> {
        match self.body {
            Body::Dsl { text, .. } => parse_suite_text(text),
            Body::Native { .. } => Ok(Vec::new()),
        }
    }

    fn registry(&self, setup: &Setup) -> Result<(RegistrySpec, &'static str, f64)> {
        let Body::Dsl { registry, text, tol } = self.body else {
            unreachable!("native suites have no registry")
        };
        // --kind swaps one family for another; other registries are fixed
        let reg = match (&setup.kind, registry) {
            (Some(k), RegistrySpec::Family(_)) => match RegistrySpec::parse(k)? {
                r @ RegistrySpec::Family(_) => r,
                _ => return Err(Error::Config(format!("suite `{}` needs a matrix family kind", self.name))),
            },
            _ => registry,
        };
        Ok((reg, text, setup.tol.unwrap_or(tol)))
    }

    pub fn run(&self, setup: &Setup) -> Result<Report> {
        match self.body {
            Body::Native { run, .. } => run(setup),
            Body::Dsl { .. } => {
                let (reg, text, tol) = self.registry(setup)?;
                reg.check(self.name, &parse_suite_text(text)?, tol, setup)
            }
        }
    }

    /// The negative control: every relation mutated; it must not pass.
    pub fn run_twin(&self, setup: &Setup) -> Result<Report> {
        match self.body {
            Body::Native { twin, .. } => twin(setup),
            Body::Dsl { .. } => {
                let (reg, text, tol) = self.registry(setup)?;
                let rels: Vec<Relation> = parse_suite_text(text)?.iter().map(mutate).collect();
                reg.check(&format!("{}~twin", self.name), &rels, tol, setup)
            }
        }
    }
}

const CZCZ: &str = "\
[L+{n},L+{m}]_* == q^(m)*qb(n)*L+{n+m} - q^(n)*qb(m)*L+{n+m}
[L+{n},L-{m}]_* == q^(-m)*qb(n)*L+{n+m} - q^(n)*qb(m)*L-{n+m}
[L-{n},L+{m}]_* == q^(m)*qb(n)*L-{n+m} - q^(-n)*qb(m)*L+{n+m}
[L-{n},L-{m}]_* == q^(-m)*qb(n)*L-{n+m} - q^(-n)*qb(m)*L-{n+m}
";

const CLOSURE: &str = "\
[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m}
[L-{n},L-{m}]_(n-m) == qb(n-m)*L-{n+m}
";

const STAR_CLOSURE: &str = "\
[L+{n},L+{m}]_* == qb(n-m)*L+{n+m}
[L-{n},L-{m}]_* == qb(n-m)*L-{n+m}
";

const NOTILDE: &str = "[L+{n},L-{m}]_(n+m) == q^(-m)*qb(n)*L+{n+m} - q^(n)*qb(m)*L-{n+m}\n";

const HOM_JACOBI: &str = "\
(q^(n)+q^(-n))*[L+{n},[L+{m},L+{l}]_(l-m)]_(m+l-n) + (q^(m)+q^(-m))*[L+{m},[L+{l},L+{n}]_(n-l)]_(l+n-m) + (q^(l)+q^(-l))*[L+{l},[L+{n},L+{m}]_(m-n)]_(n+m-l) == 0
";

const YANG_BAXTER: &str = "\
[L+{n},[L+{m},L+{l}]_(l-m)]_(m+l-2*n) + [L+{m},[L+{l},L+{n}]_(n-l)]_(l+n-2*m) + [L+{l},[L+{n},L+{m}]_(m-n)]_(n+m-2*l) == 0
";

const HL2: &str = "\
[L+{n},[L+{m},L+{l}]_(l-m)]_(m+l) + [L+{m},[L+{l},L+{n}]_(n-l)]_(l+n) + [L+{l},[L+{n},L+{m}]_(m-n)]_(n+m) == 0
";

const T_TABLES: &str = "\
[T{n,2},T{m,2}]_(m-n) == 0
[T{n,0},T{m,0}]_(m-n) == qb(m-n)*T{n+m,0}
[T{n,2},T{m,0}]_(m-n) == qb(-n)*T{n+m,2}
[T{n,0},T{m,2}]_(m-n) == qb(m)*T{n+m,2}
";

const T_TABLES_MINUS: &str = "\
[T{n,-2},T{m,-2}]_(n-m) == 0
[T{n,0},T{m,0}]_(n-m) == qb(n-m)*T{n+m,0}
[T{n,-2},T{m,0}]_(n-m) == qb(n)*T{n+m,-2}
[T{n,0},T{m,-2}]_(n-m) == qb(-m)*T{n+m,-2}
";

const UQSL2: &str = "\
[E+{},E-{}]_(0) == (q^(1)-q^(-1))*(K{1}-K{-1})
K{1}*E+{}*K{-1} == q^(2)*E+{}
K{1}*E-{}*K{-1} == q^(-2)*E-{}
E+{} + E-{} == Hm{}
K{1}*K{-1} == 1
";

fn dsl(name: &'static str, about: &'static str, registry: RegistrySpec, text: &'static str, tol: f64) -> BuiltinSuite {
    BuiltinSuite {
        name,
        about,
        body: Body::Dsl { registry, text, tol },
    }
}

fn native(name: &'static str, about: &'static str, run: NativeFn, twin: NativeFn) -> BuiltinSuite {
    BuiltinSuite {
        name,
        about,
        body: Body::Native { run, twin },
    }
}

/// Every built-in suite, in listing order.
pub fn builtin_suites() -> Vec<BuiltinSuite> {
    use FamilySel::*;
    use RegistrySpec::*;
    let qhcz = Family(Qhcz { hlh: true });
    vec![
        native("weyl-exchange", "Y^m X^n = q^{mn} X^n Y^m, exact, all 0 <= m,n < N", weyl_exchange, weyl_exchange_twin),
        dsl("weyl", "Weyl exchange as a float relation", Weyl, "Y{m}*X{n} == q^(m*n)*X{n}*Y{m} for m in 0..5, n in 0..5\n", 1e-12),
        dsl("cz-plus-closure", "CZ closure of the plus generators", qhcz, "[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m}\n", 1e-12),
        dsl("cz-closure", "CZ+ and CZ- closure", qhcz, CLOSURE, 1e-12),
        dsl("czcz", "compact CZ* form over all sign pairs", qhcz, CZCZ, 1e-12),
        dsl("star-closure", "star-bracket closure of each sign", qhcz, STAR_CLOSURE, 1e-12),
        dsl("notildeL-mixing", "mixing bracket after HLH", qhcz, NOTILDE, 1e-12),
        dsl(
            "tildeL-mixing",
            "mixing bracket before HLH",
            Family(Qhcz { hlh: false }),
            "[L+{n},L-{m}]_(n+m) == q^(m)*qb(n)*L+{n+m} - q^(-n)*qb(m)*L-{n+m}\n",
            1e-12,
        ),
        dsl(
            "skew",
            "skew symmetry of the deformed bracket",
            qhcz,
            "[L+{n},L+{m}]_(m-n) == -[L+{m},L+{n}]_(n-m)\n[L-{n},L-{m}]_(n-m) == -[L-{m},L-{n}]_(m-n)\n",
            1e-13,
        ),
        dsl("hom-jacobi", "Hom-Jacobi identity, matrix family", qhcz, HOM_JACOBI, 1e-11),
        dsl("yang-baxter", "Yang-Baxter associativity, matrix family", qhcz, YANG_BAXTER, 1e-11),
        dsl("consistency", "consistency condition, matrix family", qhcz, HL2, 1e-11),
        dsl(
            "center",
            "Q^{+-2} central for CZ+-",
            qhcz,
            "[Q{2},L+{n}]_(n,-n) == 0\n[Q{-2},L-{n}]_(-n,n) == 0\n[Q{2},L+{n}]_* == 0\n[Q{-2},L-{n}]_* == 0\n",
            1e-12,
        ),
        dsl(
            "s0-star",
            "S0 powers star-commute with the generators",
            qhcz,
            "[S0+{},L+{n}]_* == 0\n[S0-{},L-{n}]_* == 0\n[S0+{}*S0+{},L+{n}]_* == 0\nS0+{}*L+{n} == q^(-2*n)*L+{n}*S0+{}\nS0-{}*L-{n} == q^(2*n)*L-{n}*S0-{}\n",
            1e-11,
        ),
        dsl("substitution-tables", "weight 0 and +-2 tables of the substitution matrices", qhcz, concat_tables(), 1e-12),
        dsl(
            "primed-mixing",
            "CZ*' mixing of the [Z]-factorized generators",
            Family(Rep(RepKind::Czhz)),
            "[L'+{n},L'-{m}]_(n+m) == qb(n)*L'+{n+m} - qb(m)*L'-{n+m}\n",
            1e-12,
        ),
        dsl(
            "primed-minus-closure",
            "CZ-' closure of the primed generators",
            Family(Rep(RepKind::Czhz)),
            "[L'-{n},L'-{m}]_(n-m) == qb(n-m)*L'-{n+m}\n",
            1e-12,
        ),
        dsl("czhqk-star-closure", "CZ*(q_k) closure of the CZHQk family", Family(Czhqk), STAR_CLOSURE, 1e-12),
        dsl("czhqk-mixing", "CZ*(q_k) mixing of the CZHQk family", Family(Czhqk), "[L+{n},L-{m}]_* == q^(-m)*qb(n)*L+{n+m} - q^(n)*qb(m)*L-{n+m}\n", 1e-12),
        dsl("trivial-yx", "trivial reps from Y^2 and X~^-2", Family(TrivialYX), STAR_CLOSURE, 1e-12),
        dsl("trivial-h", "trivial reps from H^n and q^{n^2}Q^{2n}H^n", Family(TrivialH), STAR_CLOSURE, 1e-12),
        native("trivial-semigroup", "g_n g_m = g_{n+m} exactly for every trivial kind", trivial_semigroup, trivial_semigroup_twin),
        dsl(
            "dmt-matrix-relations",
            "matrix DMT exchange and circulation",
            Weyl,
            "Ty{}*Tx{} == q^(-2)*Tx{}*Ty{}\nTyd{}*Txd{}*Ty{}*Tx{} == q^(-2)\nTxd{}*Tx{} == 1\n",
            1e-12,
        ),
        dsl(
            "dmt-line-fusion",
            "DMT composites on the quantum lines",
            Weyl,
            "Tyd{}*Tx{} == q^(1)*Y{2}\nTx{}*Tyd{} == q^(-1)*Y{2}\nTyd{}*Txd{} == q^(-1)*Xt{-2}\nTxd{}*Tyd{} == q^(1)*Xt{-2}\n",
            1e-12,
        ),
        native("dmt", "lattice DMT exchange, fusion, circulation and gauge identity", dmt_lattice, dmt_lattice_twin),
        native("dmt-matrix", "matrix DMT images, exact", dmt_matrix, dmt_matrix_twin),
        native("dmt-composites", "quantum-plane composites and trivial CZ, exact", dmt_composites, dmt_composites_twin),
        dsl("cz-plus-closure-laurent", "CZ closure of the q-derivative generators", Laurent, "[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m}\n", 1e-12),
        dsl("cz-closure-laurent", "CZ+- closure on the Laurent window", Laurent, CLOSURE, 1e-12),
        dsl(
            "l-t-brackets",
            "L-T deformed brackets",
            Laurent,
            "[L+{n},T{m,k}]_(m-n*k/2) == -qb(m)*T{n+m,k}\n[L-{n},T{m,k}]_(-m-n*k/2) == -qb(m)*T{n+m,k}\n",
            1e-12,
        ),
        dsl(
            "two-term-decomposition",
            "two-term decomposition of the generators",
            Laurent,
            "L+{n} == -T{n,0} + q^(n+D2)*T{n,2}\nL-{n} == T{n,0} - q^(-n-D2)*T{n,-2}\n",
            1e-13,
        ),
        native("q-inversion", "q -> 1/q maps the plus decomposition to the minus generator", q_inversion, q_inversion_twin),
        dsl("t-commutativity", "deformed commutativity of T", Laurent, "[T{n,k},T{m,l}]_((m*k-n*l)/2) == 0\n", 1e-12),
        dsl("t-star", "star bracket of T vanishes", Laurent, "[T{n,k},T{m,l}]_* == 0\n", 1e-12),
        dsl("star-closure-laurent", "star closure on the Laurent window", Laurent, STAR_CLOSURE, 1e-12),
        dsl(
            "l-t-star",
            "star bracket of L with T",
            Laurent,
            "[L+{n},T{m,l}]_* == -qb(m)*T{n+m,l}\n[L-{n},T{m,l}]_* == -qb(m)*T{n+m,l}\n",
            1e-12,
        ),
        dsl("t-table", "general T table with the L phase", Laurent, "[T{n,k},T{m,l}]_(m-n) == qb((n*(l-2)-m*(k-2))/2)*T{n+m,k+l}\n", 1e-12),
        dsl("t-table-inverted", "q-inverted T table", Laurent, "[T{n,k},T{m,l}]_(n-m) == qb((n*(l+2)-m*(k+2))/2)*T{n+m,k+l}\n", 1e-12),
        dsl("t-subalgebras-plus", "weight 0 and 2 subalgebras", Laurent, T_TABLES, 1e-12),
        dsl("t-subalgebras-minus", "weight 0 and -2 subalgebras", Laurent, T_TABLES_MINUS, 1e-12),
        dsl("sine-algebra", "sine algebra of T", Laurent, "[T{n,k},T{m,l}]_(0) == qb((n*l-m*k)/2)*T{n+m,k+l}\n", 1e-12),
        dsl("tau-exchange", "tau exchange rule", Laurent, "tau{n,k}*tau{m,l} == q^(n*l-m*k)*tau{m,l}*tau{n,k}\n", 1e-12),
        dsl("tau-fusion", "tau fusion rule", Laurent, "tau{n,k}*tau{m,l} == q^((n*l-m*k)/2)*tau{n+m,k+l}\n", 1e-12),
        dsl("tau-circulation", "tau circulation", Laurent, "tau{-n,-k}*tau{-m,-l}*tau{n,k}*tau{m,l} == q^(n*l-m*k)\n", 1e-12),
        native("tau-exact", "tau exchange, fusion and circulation exact on |.| <= 3, plus the sine algebra", mta, mta_twin),
        dsl("czcz-laurent", "compact CZ* form on the Laurent window", Laurent, CZCZ, 1e-12),
        dsl("mixing-laurent", "mixing bracket on the Laurent window", Laurent, NOTILDE, 1e-12),
        dsl(
            "q-derivative-form",
            "generators as -z^{n+1} d_q",
            Laurent,
            "L+{-1} == -Dq{}\nL+{0} == -q^(-1)*ad{}*Dq{}\nL+{1} == -q^(-2)*ad{}*ad{}*Dq{}\nqN{}*Dq{} == q^(1)*Dq{}*qN{}\n(q^(1)+q^(-1))*Dq2{} == -L+{-1} - L-{-1}\n",
            1e-13,
        ),
        dsl("oscillator", "q-oscillator form of the generators", Laurent, "Losc{n} == L+{n} for n in -1..3\n", 1e-13),
        dsl("hom-jacobi-laurent", "Hom-Jacobi identity on the Laurent window", Laurent, HOM_JACOBI, 1e-11),
        dsl("yang-baxter-laurent", "Yang-Baxter associativity on the Laurent window", Laurent, YANG_BAXTER, 1e-11),
        dsl("consistency-laurent", "consistency condition on the Laurent window", Laurent, HL2, 1e-11),
        dsl("uqsl2", "U_q(sl2) relations and H = E+ + E-", Uqsl2(Uqsl2Kind::Base), UQSL2, 1e-12),
        dsl("uqsl2-primed", "U_q(sl2) of the Y-conjugated system", Uqsl2(Uqsl2Kind::Primed), UQSL2, 1e-12),
        dsl("uqsl2-q2", "U_q(sl2) symmetry of H_(2,1)", Uqsl2(Uqsl2Kind::Q2), UQSL2, 1e-12),
        dsl("uqsl2-q4", "U_q(sl2) symmetry of H_(2,2)", Uqsl2(Uqsl2Kind::Q4), UQSL2, 1e-12),
        native("tbm-chain", "Bloch chain, Hermiticity and the CZ-built Hamiltonians", tbm_chain, tbm_chain_twin),
        native("factorization", "H_Z = H [Z] and the primed mixing relation", factorization, factorization_twin),
        native("spectral", "spec(H') = spec(H), eigen residuals and the Gershgorin bound", spectral, spectral_twin),
    ]
}

fn concat_tables() -> &'static str {
    concat!(
        "[T{n,2},T{m,2}]_(m-n) == 0\n",
        "[T{n,0},T{m,0}]_(m-n) == qb(m-n)*T{n+m,0}\n",
        "[T{n,2},T{m,0}]_(m-n) == qb(-n)*T{n+m,2}\n",
        "[T{n,0},T{m,2}]_(m-n) == qb(m)*T{n+m,2}\n",
        "[T{n,-2},T{m,-2}]_(n-m) == 0\n",
        "[T{n,0},T{m,0}]_(n-m) == qb(n-m)*T{n+m,0}\n",
        "[T{n,-2},T{m,0}]_(n-m) == qb(n)*T{n+m,-2}\n",
        "[T{n,0},T{m,-2}]_(n-m) == qb(-m)*T{n+m,-2}\n",
    )
}

/// Case-insensitive lookup.
pub fn find_suite(name: &str) -> Result<BuiltinSuite> {
    builtin_suites()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

pub fn run_suite(name: &str, setup: &Setup) -> Result<Report> {
    find_suite(name)?.run(setup)
}

/// Run DSL text from a suite file against the `--kind` registry (default `qhcz`).
pub fn run_suite_text(name: &str, text: &str, setup: &Setup) -> Result<Report> {
    let reg = RegistrySpec::parse(setup.kind.as_deref().unwrap_or("qhcz"))?;
    reg.check(name, &parse_suite_text(text)?, setup.tol.unwrap_or(1e-12), setup)
}

// Native suites. Each twin repeats one family of checks with the expected
// phase shifted by one step; a twin that passes means the check is vacuous.

fn weyl_size(setup: &Setup) -> usize {
    setup.n.unwrap_or(7)
}

fn weyl_exchange(setup: &Setup) -> Result<Report> {
    let n = weyl_size(setup);
    let q = cz_q(n)?;
    let mut rep = Report::new("weyl-exchange", n, q);
    for m in 0..n as i64 {
        for k in 0..n as i64 {
            rep.push_exact("exchange", json!({"m": m, "n": k}), weyl_exchange_check(n, q, m, k)?);
        }
    }
    Ok(rep)
}

fn weyl_exchange_twin(setup: &Setup) -> Result<Report> {
    let n = weyl_size(setup);
    let q = cz_q(n)?;
    let mut rep = Report::new("weyl-exchange~twin", n, q);
    let x = make_x(n, q.ring())?;
    let y = make_y(n, q)?;
    for m in 0..n as i64 {
        for k in 0..n as i64 {
            let lhs = y.pow(m).mul(&x.pow(k))?;
            let rhs = x.pow(k).mul(&y.pow(m))?.scaled(q.pow(m * k + 1))?;
            rep.push_exact("exchange", json!({"m": m, "n": k}), lhs.same_matrix(&rhs));
        }
    }
    Ok(rep)
}

fn trivial_kinds(q: Phase) -> [TrivialKind; 6] {
    let c = q.ring().phase(3);
    [
        TrivialKind::PowH(c),
        TrivialKind::QuadQ(1),
        TrivialKind::QuadQ(2),
        TrivialKind::PowY(c),
        TrivialKind::YSquared,
        TrivialKind::XtildeInvSquared,
    ]
}

fn trivial_semigroup_impl(setup: &Setup, shift: i64) -> Result<Report> {
    let n = setup.n.unwrap_or(6);
    let q = cz_q(n)?;
    let suffix = if shift == 0 { "" } else { "~twin" };
    let mut rep = Report::new(format!("trivial-semigroup{suffix}"), n, q);
    let b = setup.bound;
    for kind in trivial_kinds(q) {
        for a in -b..=b {
            for c in -b..=b {
                let ok = if shift == 0 {
                    trivial_semigroup_exact(kind, a, c, n, q)?
                } else {
                    let g = |k| trivial_g(kind, k, n, q);
                    g(a)?.mul(&g(c)?)?.same_matrix(&g(a + c + shift)?)
                };
                rep.push_exact("semigroup", json!({"kind": format!("{kind:?}"), "n": a, "m": c}), ok);
            }
        }
    }
    Ok(rep)
}

fn trivial_semigroup(setup: &Setup) -> Result<Report> {
    trivial_semigroup_impl(setup, 0)
}

fn trivial_semigroup_twin(setup: &Setup) -> Result<Report> {
    trivial_semigroup_impl(setup, 1)
}

fn lattice(setup: &Setup) -> Result<LatticeSpec> {
    LatticeSpec::new(10, 10, setup.flux)
}

fn dmt_lattice(setup: &Setup) -> Result<Report> {
    Ok(verify_dmt_algebra(&lattice(setup)?))
}

fn dmt_lattice_twin(setup: &Setup) -> Result<Report> {
    let spec = lattice(setup)?;
    let q = spec.q();
    let mut rep = Report::new("dmt~twin", spec.lx * spec.ly, q);
    for m in 1..spec.lx as i64 - 1 {
        for n in 1..spec.ly as i64 - 1 {
            let k = Ket::site(&spec, m, n);
            let xy = apply_word(&spec, &[Dmt::Tx, Dmt::Ty], k);
            let yx = apply_word(&spec, &[Dmt::Ty, Dmt::Tx], k);
            rep.push_exact(
                "exchange",
                json!({"m": m, "n": n, "phase": "q^3"}),
                xy.is_some() && xy == yx.map(|k| k.scaled(q.pow(3))),
            );
        }
    }
    Ok(rep)
}

fn weyl_setup(setup: &Setup) -> Result<(usize, Phase)> {
    let n = setup.n.unwrap_or(6);
    Ok((n, cz_q(n)?))
}

fn dmt_matrix(setup: &Setup) -> Result<Report> {
    let (n, q) = weyl_setup(setup)?;
    matrix_dmt_check(n, q)
}

fn dmt_matrix_twin(setup: &Setup) -> Result<Report> {
    let (n, q) = weyl_setup(setup)?;
    let d = DmtMatrices::new(n, q)?;
    let mut rep = Report::new("dmt-matrix~twin", n, q);
    let lhs = d.ty.mul(&d.tx)?;
    let rhs = d.tx.mul(&d.ty)?.scaled(q.pow(-1))?;
    rep.push_exact("exchange", json!({}), lhs.same_matrix(&rhs));
    let circ = d.ty_dag.mul(&d.tx_dag)?.mul(&d.ty)?.mul(&d.tx)?;
    let id = MonomialMatrix::identity(n, q.ring());
    rep.push_exact("circulation", json!({}), circ.same_matrix(&id.scaled(q.pow(-1))?));
    Ok(rep)
}

fn dmt_composites(setup: &Setup) -> Result<Report> {
    let (n, q) = weyl_setup(setup)?;
    dmt_composite_check(n, q)
}

fn dmt_composites_twin(setup: &Setup) -> Result<Report> {
    let (n, q) = weyl_setup(setup)?;
    let d = DmtMatrices::new(n, q)?;
    let y2 = make_y(n, q)?.pow(2);
    let mut rep = Report::new("dmt-composites~twin", n, q);
    rep.push_exact("tyd-tx", json!({}), d.ty_dag.mul(&d.tx)?.same_matrix(&y2.scaled(q.pow(2))?));
    rep.push_exact("tx-tyd", json!({}), d.tx.mul(&d.ty_dag)?.same_matrix(&y2));
    Ok(rep)
}

fn q_inversion(setup: &Setup) -> Result<Report> {
    let lr = Laurent::default().with_delta(setup.delta);
    let mut rep = Report::new("q-inversion", lr.window.len(), lr.q);
    for n in -3..=3 {
        rep.extend(czt_decomposition_check(n, &lr)?);
    }
    Ok(rep)
}

fn q_inversion_twin(setup: &Setup) -> Result<Report> {
    let lr = Laurent::default().with_delta(setup.delta);
    let mut rep = Report::new("q-inversion~twin", lr.window.len(), lr.q);
    for n in -3..=3 {
        // the map without inverting q
        let mapped = lr.czt_decomposition(n, Sign::Plus)?;
        let r = lr.residual(&mapped, &lr.lhat(n, Sign::Minus)?)?;
        rep.push("q-inversion", json!({"n": n}), r, 1e-13);
    }
    Ok(rep)
}

fn mta(setup: &Setup) -> Result<Report> {
    verify_mta(3, &Laurent::default().with_delta(setup.delta))
}

fn mta_twin(setup: &Setup) -> Result<Report> {
    let lr = Laurent::default().with_delta(setup.delta);
    let q = lr.q;
    let mut rep = Report::new("mta~twin", lr.window.len(), q);
    for n in -3..=3 {
        for k in -3..=3 {
            for m in -3..=3 {
                for l in -3..=3 {
                    let a = lr.tau(n, k)?;
                    let b = lr.tau(m, l)?;
                    let area = n * l - m * k + 1;
                    let ex = b.compose(&a)?.phase_scale(q.pow(area))?;
                    rep.push_exact("exchange", json!({"n": n, "k": k, "m": m, "l": l}), a.compose(&b)?.same_as(&ex));
                }
            }
        }
    }
    Ok(rep)
}

fn tbm_chain(setup: &Setup) -> Result<Report> {
    tbm_chain_check(setup.flux)
}

/// One ring step ω, the smallest phase error the exact checks can see.
fn omega(flux: FluxRatio) -> Complex64 {
    SignConvention::MinusPiPhi.q(flux).ring().phase(1).to_complex()
}

fn tbm_chain_twin(setup: &Setup) -> Result<Report> {
    let flux = setup.flux;
    let size = 2 * flux.q as usize;
    let q = SignConvention::MinusPiPhi.q(flux);
    let mut rep = Report::new("tbm-chain~twin", size, q);
    let chain = bloch_reduce_midband(flux)?;
    let h = h_nk(size, q, 1, 1)?.scale(omega(flux));
    rep.push("mbeq-equals-mbh", json!({"phi": flux.to_string()}), rel_residual(&chain, &h), 1e-14);
    Ok(rep)
}

fn factorization(setup: &Setup) -> Result<Report> {
    factorization_check(setup.flux)
}

fn factorization_twin(setup: &Setup) -> Result<Report> {
    let flux = setup.flux;
    let size = 2 * flux.q as usize;
    let q = SignConvention::MinusPiPhi.q(flux);
    let mut rep = Report::new("factorization~twin", size, q);
    let z = z_bracket(size, q)?;
    let h = h_nk(size, q, 1, 1)?;
    let hz = h_z_from_generators(size, q)?;
    let wrong = (&h * &z).scale(omega(flux));
    rep.push("hz-equals-h-z", json!({"phi": flux.to_string()}), rel_residual(&hz, &wrong), 1e-13);
    Ok(rep)
}

fn spectral_impl(setup: &Setup, twin: bool) -> Result<Report> {
    let flux = setup.flux;
    let spec = HamiltonianSpec::new(HamiltonianKind::H, flux);
    let q = spec.q();
    let name = if twin { "spectral~twin" } else { "spectral" };
    let mut rep = Report::new(name, spec.size(), q);
    let phi = flux.to_string();
    let h = build_hamiltonian(&spec)?;
    let hp = build_hamiltonian(&HamiltonianSpec::new(HamiltonianKind::Hprime, flux))?;
    // the twin builds H with q moved by one ring step
    let reference = if twin { h_nk(spec.size(), q * q.ring().phase(1), 1, 1)? } else { h.clone() };
    let a = spectrum(&hp)?;
    let b = spectrum(&reference)?;
    let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    rep.push("spec-hprime-equals-spec-h", json!({"phi": phi}), diff, 1e-9);
    if !twin {
        let norm = h.0.norm().max(1.0);
        rep.push("eigen-residual", json!({"phi": phi}), eigen_residual(&h)? / norm, 1e-9);
        let bound = gershgorin_bound(&h);
        let inside = a.iter().all(|e| e.abs() <= 4.0 + 1e-9) && bound <= 4.0 + 1e-9;
        rep.push_exact("bounded-by-4", json!({"phi": phi, "gershgorin": bound}), inside);
    }
    Ok(rep)
}

fn spectral(setup: &Setup) -> Result<Report> {
    spectral_impl(setup, false)
}

fn spectral_twin(setup: &Setup) -> Result<Report> {
    spectral_impl(setup, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_has_enough_suites_with_unique_names() {
        let all = builtin_suites();
        assert!(all.len() >= 25);
        let mut names: Vec<String> = all.iter().map(|s| s.name.to_ascii_lowercase()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for s in &all {
            s.relations().unwrap();
        }
    }

    #[test]
    fn czcz_n7_passes() {
        let setup = Setup {
            n: Some(7),
            ..Setup::default()
        };
        let rep = run_suite("czcz", &setup).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().next());
        assert_eq!(rep.checks.len(), 4 * 25);
    }

    #[test]
    fn tilde_mixing_breaks_with_b() {
        let rep = run_suite("tildeL-mixing", &Setup::default()).unwrap();
        assert!(rep.all_pass());
        let setup = Setup {
            b: 1.0,
            ..Setup::default()
        };
        let rep = run_suite("tildel-mixing", &setup).unwrap();
        assert!(!rep.all_pass());
        assert!(rep.max_residual() > 1e-3);
    }

    #[test]
    fn unknown_suite_and_kind() {
        assert!(matches!(run_suite("nope", &Setup::default()), Err(Error::UnknownSuite(_))));
        let setup = Setup {
            kind: Some("laurent".into()),
            ..Setup::default()
        };
        assert!(run_suite("czcz", &setup).is_err());
        assert!(RegistrySpec::parse("uqsl2-q8").is_err());
        for k in RegistrySpec::NAMES {
            RegistrySpec::parse(k).unwrap();
        }
    }

    #[test]
    fn kind_override_switches_family() {
        let setup = Setup {
            kind: Some("czhz".into()),
            ..Setup::default()
        };
        let rep = run_suite("czcz", &setup).unwrap();
        assert!(rep.all_pass());
    }

    #[test]
    fn suite_text_from_file_contents() {
        let setup = Setup {
            kind: Some("laurent".into()),
            ..Setup::default()
        };
        let rep = run_suite_text("file", "# sine algebra\n[T{n,k},T{m,l}]_(0) == qb((n*l-m*k)/2)*T{n+m,k+l} for n in -1..1, k in 0..1, m in 0..0, l in 1..1\n", &setup).unwrap();
        assert_eq!(rep.checks.len(), 6);
        assert!(rep.all_pass());
        let rep = run_suite_text("bad", "L+{n} == Nope{n}\n", &setup);
        assert!(matches!(rep, Err(Error::Evaluation { .. })));
    }

    #[test]
    fn every_builtin_passes_and_every_twin_fails() {
        let setup = Setup::default();
        let mut bad = Vec::new();
        for s in builtin_suites() {
            match s.run(&setup) {
                Ok(r) if r.all_pass() && !r.checks.is_empty() => {}
                Ok(r) => bad.push(format!("{}: {:?}", s.name, r.failures().next())),
                Err(e) => bad.push(format!("{}: {e}", s.name)),
            }
            match s.run_twin(&setup) {
                Ok(r) if !r.all_pass() => {}
                Ok(_) => bad.push(format!("{} twin passed", s.name)),
                Err(e) => bad.push(format!("{} twin: {e}", s.name)),
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
