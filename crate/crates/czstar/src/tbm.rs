//! Tight-binding model on the square lattice in a uniform magnetic field.
//!
//! Hopping phases use the gauge θˣ_{m,n} = -(n+m)πφ, θʸ_{m,n} = (m+n+1)πφ,
//! so every phase is an exact multiple of πφ and lives in the ring
//! M = lcm(2Q, 4). The mid-band Bloch reduction gives a 2Q-site chain whose
//! Hamiltonian is written with the clock and shift matrices; the rest of the
//! module assembles its generalisations and checks them against the CZ and
//! U_q(sl₂) generators.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::json;

use crate::czrep::{make_rep, transform_hlh_inverse, Family, RepKind, Sign};
use crate::error::{Error, Result};
use crate::phase::{q_bracket, q_diff, FluxRatio, Phase, PhaseRing};
use crate::report::Report;
use crate::weyl::{make_x, make_y, rel_residual, CMatrix, MonomialMatrix};

/// Ring that holds πφ, i and q^{1/2} exactly.
pub fn lattice_ring(flux: FluxRatio) -> PhaseRing {
    PhaseRing::new((2 * flux.q).lcm(&4)).expect("positive order")
}

/// ω-exponent of πφ.
fn pi_phi(flux: FluxRatio) -> i64 {
    let ring = lattice_ring(flux);
    i64::from(ring.m()) * flux.p / flux.q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SignConvention {
    /// q = e^{-iπφ}.
    #[default]
    MinusPiPhi,
    /// q = e^{iπφ}.
    PlusPiPhi,
    /// q = e^{-2πiφ}.
    TwoPiPhi,
}

impl SignConvention {
    pub fn q(self, flux: FluxRatio) -> Phase {
        let ring = lattice_ring(flux);
        let u = pi_phi(flux);
        match self {
            SignConvention::MinusPiPhi => ring.phase(-u),
            SignConvention::PlusPiPhi => ring.phase(u),
            SignConvention::TwoPiPhi => ring.phase(-2 * u),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::MinusPiPhi => "minus_pi_phi",
            SignConvention::PlusPiPhi => "plus_pi_phi",
            SignConvention::TwoPiPhi => "two_pi_phi",
        }
    }
}

impl FromStr for SignConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus_pi_phi" => Ok(SignConvention::MinusPiPhi),
            "plus_pi_phi" => Ok(SignConvention::PlusPiPhi),
            "two_pi_phi" => Ok(SignConvention::TwoPiPhi),
            _ => Err(Error::Config(format!(
                "unknown sign convention `{s}` (minus_pi_phi | plus_pi_phi | two_pi_phi)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub lx: usize,
    pub ly: usize,
    pub flux: FluxRatio,
}

impl LatticeSpec {
    pub fn new(lx: usize, ly: usize, flux: FluxRatio) -> Result<Self> {
        if lx < 3 || ly < 3 {
            return Err(Error::SizeTooSmall(lx.min(ly)));
        }
        Ok(Self { lx, ly, flux })
    }

    pub fn ring(&self) -> PhaseRing {
        lattice_ring(self.flux)
    }

    /// q = e^{-iπφ}.
    pub fn q(&self) -> Phase {
        SignConvention::MinusPiPhi.q(self.flux)
    }

    pub fn theta_x(&self, m: i64, n: i64) -> Phase {
        self.ring().phase(-(n + m) * pi_phi(self.flux))
    }

    pub fn theta_y(&self, m: i64, n: i64) -> Phase {
        self.ring().phase((m + n + 1) * pi_phi(self.flux))
    }

    /// (θʸ_{m+1,n} - θʸ_{m,n}) - (θˣ_{m,n+1} - θˣ_{m,n}) = 2πφ.
    pub fn gauge_identity(&self, m: i64, n: i64) -> bool {
        let lhs = self.theta_y(m + 1, n) * self.theta_y(m, n).inv()
            * (self.theta_x(m, n + 1) * self.theta_x(m, n).inv()).inv();
        lhs == self.ring().phase(2 * pi_phi(self.flux))
    }

    fn inside(&self, m: i64, n: i64) -> bool {
        (0..self.lx as i64).contains(&m) && (0..self.ly as i64).contains(&n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dmt {
    Tx,
    Ty,
    TxDag,
    TyDag,
}

/// A phase times a site delta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ket {
    pub m: i64,
    pub n: i64,
    pub phase: Phase,
}

impl Ket {
    pub fn site(spec: &LatticeSpec, m: i64, n: i64) -> Self {
        Self {
            m,
            n,
            phase: spec.ring().one(),
        }
    }

    pub fn scaled(self, p: Phase) -> Self {
        Self {
            phase: self.phase * p,
            ..self
        }
    }
}

/// Hop of a single ket; `None` if it would leave the lattice.
pub fn apply_dmt_ket(spec: &LatticeSpec, which: Dmt, k: Ket) -> Option<Ket> {
    let (m, n) = (k.m, k.n);
    let (to, ph) = match which {
        Dmt::Tx => ((m + 1, n), spec.theta_x(m, n)),
        Dmt::Ty => ((m, n + 1), spec.theta_y(m, n)),
        Dmt::TxDag => ((m - 1, n), spec.theta_x(m - 1, n).inv()),
        Dmt::TyDag => ((m, n - 1), spec.theta_y(m, n - 1).inv()),
    };
    spec.inside(to.0, to.1).then_some(Ket {
        m: to.0,
        n: to.1,
        phase: k.phase * ph,
    })
}

/// Right-to-left product: `ops[last]` acts first.
pub fn apply_word(spec: &LatticeSpec, ops: &[Dmt], k: Ket) -> Option<Ket> {
    ops.iter().rev().try_fold(k, |k, &o| apply_dmt_ket(spec, o, k))
}

/// Single-particle amplitudes ψ_{m,n} with open boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction2D {
    pub lx: usize,
    pub ly: usize,
    pub amp: Vec<Complex64>,
}

impl WaveFunction2D {
    pub fn zeros(lx: usize, ly: usize) -> Self {
        Self {
            lx,
            ly,
            amp: vec![Complex64::new(0.0, 0.0); lx * ly],
        }
    }

    pub fn delta(lx: usize, ly: usize, m: usize, n: usize) -> Self {
        let mut w = Self::zeros(lx, ly);
        w.amp[m * ly + n] = Complex64::new(1.0, 0.0);
        w
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.amp[m * self.ly + n]
    }
}

/// Apply a hop to every amplitude; the flag is set when amplitude was dropped at an edge.
pub fn apply_dmt(spec: &LatticeSpec, which: Dmt, psi: &WaveFunction2D) -> (WaveFunction2D, bool) {
    let mut out = WaveFunction2D::zeros(psi.lx, psi.ly);
    let mut truncated = false;
    for m in 0..psi.lx {
        for n in 0..psi.ly {
            let a = psi.get(m, n);
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            match apply_dmt_ket(spec, which, Ket::site(spec, m as i64, n as i64)) {
                Some(k) => out.amp[k.m as usize * psi.ly + k.n as usize] += a * k.phase.to_complex(),
                None => truncated = true,
            }
        }
    }
    (out, truncated)
}

/// Circulation phase e^{2πiφ} as printed in reports.
pub fn circulation_label(flux: FluxRatio) -> String {
    format!("e^(2*pi*i*{}/{})", flux.p, flux.q)
}

/// Exchange, fusion, circulation and the gauge identity at every interior site.
pub fn verify_dmt_algebra(spec: &LatticeSpec) -> Report {
    use Dmt::*;
    let q = spec.q();
    let mut rep = Report::new("dmt", spec.lx * spec.ly, q);
    let label = circulation_label(spec.flux);
    let u = pi_phi(spec.flux);
    for m in 1..spec.lx as i64 - 1 {
        for n in 1..spec.ly as i64 - 1 {
            let p = json!({"m": m, "n": n, "phi": spec.flux.to_string()});
            let k = Ket::site(spec, m, n);
            rep.push_exact("gauge", p.clone(), spec.gauge_identity(m, n));
            let xy = apply_word(spec, &[Tx, Ty], k);
            let yx = apply_word(spec, &[Ty, Tx], k);
            rep.push_exact(
                "exchange",
                json!({"m": m, "n": n, "phase": "q^2"}),
                xy.is_some() && xy == yx.map(|k| k.scaled(q.pow(2))),
            );
            // T_{x+y}: (m,n) -> (m+1,n+1) with phase πφ + θˣ_{m,n+1} + θʸ_{m,n}
            let fused = Ket {
                m: m + 1,
                n: n + 1,
                phase: spec.ring().phase(u) * spec.theta_x(m, n + 1) * spec.theta_y(m, n),
            };
            rep.push_exact(
                "fusion",
                json!({"m": m, "n": n, "phase": "q"}),
                xy == Some(fused.scaled(q)) && yx == Some(fused.scaled(q.inv())),
            );
            let circ = apply_word(spec, &[TyDag, TxDag, Ty, Tx], k);
            rep.push_exact(
                "circulation",
                json!({"m": m, "n": n, "phase": label}),
                circ == Some(k.scaled(q.pow(-2))) && q.pow(-2) == spec.ring().phase(2 * u),
            );
        }
    }
    rep
}

/// Matrix images T̂x = -iXY, T̂y = -iY⁻¹X and their adjoints.
#[derive(Clone, Debug)]
pub struct DmtMatrices {
    pub tx: MonomialMatrix,
    pub ty: MonomialMatrix,
    pub tx_dag: MonomialMatrix,
    pub ty_dag: MonomialMatrix,
}

impl DmtMatrices {
    pub fn new(size: usize, q: Phase) -> Result<Self> {
        let ring = q.ring();
        let i = ring.i()?;
        let x = make_x(size, ring)?;
        let y = make_y(size, q)?;
        let tx = x.mul(&y)?.scaled(i.inv())?;
        let ty = y.inverse().mul(&x)?.scaled(i.inv())?;
        Ok(Self {
            tx_dag: tx.dagger(),
            ty_dag: ty.dagger(),
            tx,
            ty,
        })
    }
}

/// Exchange and circulation of the matrix images, the conjugate set and T̂'y = Y T̂x Y⁻¹.
pub fn matrix_dmt_check(size: usize, q: Phase) -> Result<Report> {
    let mut rep = Report::new("dmt-matrix", size, q);
    let d = DmtMatrices::new(size, q)?;
    let ring = q.ring();
    let i = ring.i()?;
    let x = make_x(size, ring)?;
    let y = make_y(size, q)?;
    let p = json!({});
    let yx = d.ty.mul(&d.tx)?;
    rep.push_exact("exchange", p.clone(), yx.same_matrix(&d.tx.mul(&d.ty)?.scaled(q.pow(-2))?));
    let circ = d.ty_dag.mul(&d.tx_dag)?.mul(&d.ty)?.mul(&d.tx)?;
    let id = MonomialMatrix::identity(size, ring);
    rep.push_exact("circulation", p.clone(), circ.same_matrix(&id.scaled(q.pow(-2))?));
    rep.push_exact(
        "adjoints",
        p.clone(),
        d.tx_dag.same_matrix(&y.inverse().mul(&x.inverse())?.scaled(i)?)
            && d.ty_dag.same_matrix(&x.inverse().mul(&y)?.scaled(i)?),
    );
    // Y ↦ Y⁻¹ gives T̂'x = -iXY⁻¹, T̂'y = -iYX
    let yi = make_y(size, q.inv())?;
    let txp = x.mul(&y.inverse())?.scaled(i.inv())?;
    let typ = y.mul(&x)?.scaled(i.inv())?;
    let sub_x = x.mul(&yi)?.scaled(i.inv())?;
    let sub_y = yi.inverse().mul(&x)?.scaled(i.inv())?;
    rep.push_exact("conjugate-set", p.clone(), txp.same_matrix(&sub_x) && typ.same_matrix(&sub_y));
    rep.push_exact(
        "conjugate-similarity",
        p,
        typ.same_matrix(&y.mul(&d.tx)?.mul(&y.inverse())?),
    );
    Ok(rep)
}

/// Bloch-reduced chain for general (k₊, k₋); mid band is (π/2, 0).
pub fn bloch_reduce(flux: FluxRatio, kp: f64, km: f64) -> Result<CMatrix> {
    let q = SignConvention::MinusPiPhi.q(flux);
    let n = 2 * flux.q as usize;
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let mut h = CMatrix::zeros(n);
    for row in 0..n {
        let j = row as i64 + 1;
        let qc = |k: i64| q.pow(k).to_complex();
        let down = e(-kp) * (e(-km) * qc(j - 1) + e(km) * qc(-j));
        let up = e(kp) * (e(km) * qc(-j) + e(-km) * qc(j + 1));
        h.0[(row, (row + n - 1) % n)] += down;
        h.0[(row, (row + 1) % n)] += up;
    }
    Ok(h)
}

pub fn bloch_reduce_midband(flux: FluxRatio) -> Result<CMatrix> {
    bloch_reduce(flux, std::f64::consts::FRAC_PI_2, 0.0)
}

/// Ĥ_(n,k) = i(X^{-n} - X^n)Y^k + iY^{-k}(X^{-n} - X^n) on N sites with Weyl phase q.
pub fn h_nk(size: usize, q: Phase, n: i64, k: i64) -> Result<CMatrix> {
    let x = make_x(size, q.ring())?;
    let y = make_y(size, q)?;
    let i = Complex64::new(0.0, 1.0);
    let dx = &x.pow(-n).to_cmatrix() - &x.pow(n).to_cmatrix();
    let yk = y.pow(k).to_cmatrix();
    let ymk = y.pow(-k).to_cmatrix();
    Ok((&(&dx * &yk) + &(&ymk * &dx)).scale(i))
}

/// [Z] = (Y - Y⁻¹)/(q - q⁻¹).
pub fn z_bracket(size: usize, q: Phase) -> Result<CMatrix> {
    let y = make_y(size, q)?;
    Ok((&y.to_cmatrix() - &y.inverse().to_cmatrix()).scale(1.0 / q_diff(q)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HamiltonianKind {
    H,
    Hprime,
    Hn(i64),
    Hcheck(i64),
    Hnk(i64, i64),
    HZ,
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianKind::H => write!(f, "H"),
            HamiltonianKind::Hprime => write!(f, "Hprime"),
            HamiltonianKind::Hn(n) => write!(f, "Hn({n})"),
            HamiltonianKind::Hcheck(k) => write!(f, "Hcheck({k})"),
            HamiltonianKind::Hnk(n, k) => write!(f, "Hnk({n},{k})"),
            HamiltonianKind::HZ => write!(f, "HZ"),
        }
    }
}

impl HamiltonianKind {
    /// Parse `H`, `Hprime`, `Hn`, `Hcheck`, `Hnk` or `HZ` with the CLI's `--n`/`--k`.
    pub fn parse(name: &str, n: i64, k: i64) -> Result<Self> {
        match name {
            "H" => Ok(HamiltonianKind::H),
            "Hprime" => Ok(HamiltonianKind::Hprime),
            "Hn" => Ok(HamiltonianKind::Hn(n)),
            "Hcheck" => Ok(HamiltonianKind::Hcheck(k)),
            "Hnk" => Ok(HamiltonianKind::Hnk(n, k)),
            "HZ" => Ok(HamiltonianKind::HZ),
            _ => Err(Error::Config(format!(
                "unknown Hamiltonian kind `{name}` (H | Hprime | Hn | Hcheck | Hnk | HZ)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub flux: FluxRatio,
    pub sign_convention: SignConvention,
}

impl HamiltonianSpec {
    pub fn new(kind: HamiltonianKind, flux: FluxRatio) -> Self {
        Self {
            kind,
            flux,
            sign_convention: SignConvention::default(),
        }
    }

    pub fn q(&self) -> Phase {
        self.sign_convention.q(self.flux)
    }

    /// 2Q, except Ȟ_k which uses Q when (q^k)^Q = 1.
    pub fn size(&self) -> usize {
        let qq = self.flux.q as usize;
        match self.kind {
            HamiltonianKind::Hcheck(k) if self.q().pow(k * self.flux.q).is_one() => qq,
            _ => 2 * qq,
        }
    }
}

/// Ȟ_(n,k) from the CZ* generators: (p - p⁻¹) times the "+" family in X^{-n}-left
/// order plus the "-" family in (1 + iY_k⁻¹)X^{-n} order.
pub fn h_check_from_generators(size: usize, q: Phase, n: i64, kind: RepKind) -> Result<CMatrix> {
    let p = kind.algebra_q(size, q)?;
    let d = q_diff(p)?;
    let g = |m: i64, s: Sign| make_rep(kind, m, s, size, q);
    let plus = &g(n, Sign::Plus)?.mat - &g(-n, Sign::Plus)?.mat;
    let mt = |m: i64| -> Result<CMatrix> { Ok(transform_hlh_inverse(&g(m, Sign::Minus)?).mat) };
    let minus = &mt(n)? - &mt(-n)?;
    Ok((&plus + &minus).scale(d))
}

/// Ĥ_Z = i(𝓛⁺₁ - 𝓛⁺₋₁) + i(𝓛'⁻₁ - 𝓛'⁻₋₁) with the [Z]-factorized generators.
pub fn h_z_from_generators(size: usize, q: Phase) -> Result<CMatrix> {
    let f = Family::Rep {
        kind: RepKind::Czhz,
        size,
        q,
    };
    let i = Complex64::new(0.0, 1.0);
    let plus = &f.primed(1, Sign::Plus)?.mat - &f.primed(-1, Sign::Plus)?.mat;
    let minus = &f.primed(1, Sign::Minus)?.mat - &f.primed(-1, Sign::Minus)?.mat;
    Ok((&plus + &minus).scale(i))
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<CMatrix> {
    let q = spec.q();
    let size = spec.size();
    match spec.kind {
        HamiltonianKind::H => h_nk(size, q, 1, 1),
        HamiltonianKind::Hprime => {
            let y = make_y(size, q)?;
            let h = h_nk(size, q, 1, 1)?;
            Ok(&(&y.to_cmatrix() * &h) * &y.inverse().to_cmatrix())
        }
        HamiltonianKind::Hn(n) => h_nk(size, q, n, 1),
        HamiltonianKind::Hnk(n, k) => h_nk(size, q, n, k),
        HamiltonianKind::Hcheck(k) => h_check_from_generators(size, q, 1, RepKind::Czhqk(k)),
        HamiltonianKind::HZ => h_z_from_generators(size, q),
    }
}

/// Number of decoupled blocks of Ĥ_n on 2Q sites.
pub fn hn_block_count(n: i64, size: usize) -> usize {
    (n.unsigned_abs() as usize).gcd(&size).max(1)
}

/// The assembly chain from the lattice equation to the CZ-built Hamiltonians.
pub fn tbm_chain_check(flux: FluxRatio) -> Result<Report> {
    let q = SignConvention::MinusPiPhi.q(flux);
    let size = 2 * flux.q as usize;
    let mut rep = Report::new("tbm-chain", size, q);
    let phi = flux.to_string();

    let chain = bloch_reduce_midband(flux)?;
    let h = h_nk(size, q, 1, 1)?;
    rep.push("mbeq-equals-mbh", json!({"phi": phi}), chain.max_norm_diff(&h), 1e-14);
    rep.push("hermitian", json!({"phi": phi}), h.hermiticity_defect(), 1e-14);

    for k in 1..=3 {
        let spec = HamiltonianSpec::new(HamiltonianKind::Hcheck(k), flux);
        let n = spec.size();
        let built = build_hamiltonian(&spec)?;
        let direct = h_nk(n, q.pow(k), 1, 1)?;
        rep.push(
            "hcheck",
            json!({"phi": phi, "k": k, "size": n}),
            rel_residual(&built, &direct),
            1e-13,
        );
    }
    for n in 1..=3 {
        let built = h_check_from_generators(size, q, n, RepKind::Czhq2)?;
        let direct = h_nk(size, q, n, 2)?;
        rep.push(
            "hn-from-czhq2",
            json!({"phi": phi, "n": n, "blocks": hn_block_count(n, size)}),
            rel_residual(&built, &direct),
            1e-13,
        );
    }
    let f = factorization_check(flux)?;
    rep.extend(f);
    rep.push(
        "seq22",
        json!({"phi": phi}),
        seq22_residual(size, q)?,
        1e-14,
    );
    Ok(rep)
}

/// Row-by-row comparison of Ĥ_(2,2) with its Schrödinger-equation form.
pub fn seq22_residual(size: usize, q: Phase) -> Result<f64> {
    let h = h_nk(size, q, 2, 2)?;
    let i = Complex64::new(0.0, 1.0);
    let qc = |k: i64| q.pow(k).to_complex();
    let mut expect = CMatrix::zeros(size);
    for row in 0..size {
        let j = row as i64 + 1;
        expect.0[(row, (row + 2) % size)] += i * (qc(2 * j + 4) + qc(-2 * j));
        expect.0[(row, (row + size - 2) % size)] -= i * (qc(-2 * j) + qc(2 * j - 4));
    }
    Ok(h.max_norm_diff(&expect))
}

/// Ĥ_Z = Ĥ[Z] and the primed mixing relation; singular [Z] entries are reported.
pub fn factorization_check(flux: FluxRatio) -> Result<Report> {
    let q = SignConvention::MinusPiPhi.q(flux);
    let size = 2 * flux.q as usize;
    let mut rep = Report::new("factorization", size, q);
    let phi = flux.to_string();
    let z = z_bracket(size, q)?;
    let h = h_nk(size, q, 1, 1)?;
    let hz = h_z_from_generators(size, q)?;
    rep.push(
        "hz-equals-h-z",
        json!({"phi": phi}),
        hz.max_norm_diff(&(&h * &z)),
        1e-13,
    );
    let diag = z.diagonal();
    let singular: Vec<usize> = (0..size).filter(|&j| diag[j].norm() < 1e-12).map(|j| j + 1).collect();
    let diag_ok = (0..size).all(|j| (diag[j] - q_bracket(j as i64 + 1, q).unwrap_or_default()).norm() < 1e-13);
    rep.push_exact("z-diagonal", json!({"phi": phi}), z.is_diagonal() && diag_ok);
    // Ĥ = Ĥ_Z [Z]⁻¹ on the columns where [Z] is invertible
    let mut worst = 0.0f64;
    for c in (0..size).filter(|j| !singular.contains(&(j + 1))) {
        for r in 0..size {
            worst = worst.max((hz.0[(r, c)] / diag[c] - h.0[(r, c)]).norm());
        }
    }
    rep.push(
        "h-from-hz-invertible-part",
        json!({"phi": phi, "singular": singular}),
        worst,
        1e-12,
    );
    let f = Family::Rep {
        kind: RepKind::Czhz,
        size,
        q,
    };
    for n in -2..=2 {
        for m in -2..=2 {
            rep.push(
                "primed-mixing",
                json!({"n": n, "m": m}),
                crate::czrep::primed_mixing_residual(&f, n, m)?,
                1e-12,
            );
        }
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Uqsl2Kind {
    Base,
    Primed,
    Q2,
    Q4,
}

impl FromStr for Uqsl2Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Uqsl2Kind::Base),
            "primed" => Ok(Uqsl2Kind::Primed),
            "q2" => Ok(Uqsl2Kind::Q2),
            "q4" => Ok(Uqsl2Kind::Q4),
            _ => Err(Error::Config(format!("unknown U_q(sl2) kind `{s}`"))),
        }
    }
}

/// Denominator-cleared generators Ê± = (q' - q'⁻¹)E±, K, the algebra parameter q'
/// and the Hamiltonian they recombine to.
#[derive(Clone, Debug)]
pub struct Uqsl2 {
    pub e_plus: CMatrix,
    pub e_minus: CMatrix,
    pub k: CMatrix,
    pub k_inv: CMatrix,
    pub param: Phase,
    pub hamiltonian: CMatrix,
}

pub fn make_uqsl2(kind: Uqsl2Kind, flux: FluxRatio) -> Result<Uqsl2> {
    let q = SignConvention::MinusPiPhi.q(flux);
    let size = 2 * flux.q as usize;
    let x = make_x(size, q.ring())?;
    let y = make_y(size, q)?;
    let i = Complex64::new(0.0, 1.0);
    let (step, ypow, param) = match kind {
        Uqsl2Kind::Base | Uqsl2Kind::Primed => (1, 1, q),
        Uqsl2Kind::Q2 => (2, 1, q.pow(2)),
        Uqsl2Kind::Q4 => (2, 2, q.pow(4)),
    };
    let dx = &x.pow(-step).to_cmatrix() - &x.pow(step).to_cmatrix();
    let mut ep = (&dx * &y.pow(ypow).to_cmatrix()).scale(i);
    let mut em = (&y.pow(-ypow).to_cmatrix() * &dx).scale(i);
    let kmon = x.pow(-2 * step).scaled(param)?;
    let mut k = kmon.to_cmatrix();
    let mut k_inv = kmon.inverse().to_cmatrix();
    let mut hamiltonian = h_nk(size, q, step, ypow)?;
    if kind == Uqsl2Kind::Primed {
        let yc = y.to_cmatrix();
        let yi = y.inverse().to_cmatrix();
        let conj = |m: &CMatrix| &(&yc * m) * &yi;
        ep = conj(&ep);
        em = conj(&em);
        k = conj(&k);
        k_inv = conj(&k_inv);
        hamiltonian = conj(&hamiltonian);
    }
    Ok(Uqsl2 {
        e_plus: ep,
        e_minus: em,
        k,
        k_inv,
        param,
        hamiltonian,
    })
}

/// U_q(sl₂) relations in cleared form, plus the 1/(q - q⁻¹) form when it exists.
pub fn uqsl2_check(kind: Uqsl2Kind, flux: FluxRatio) -> Result<Report> {
    let g = make_uqsl2(kind, flux)?;
    let q = g.param;
    let size = g.k.dim();
    let mut rep = Report::new(format!("uqsl2-{kind:?}").to_lowercase(), size, q);
    let phi = flux.to_string();
    let d = q.to_complex() - q.inv().to_complex();
    let comm = &(&g.e_plus * &g.e_minus) - &(&g.e_minus * &g.e_plus);
    let kk = &g.k - &g.k_inv;
    rep.push("commutator", json!({"phi": phi}), rel_residual(&comm, &kk.scale(d)), 1e-12);
    let q2 = q.pow(2).to_complex();
    let conj = |e: &CMatrix| &(&g.k * e) * &g.k_inv;
    rep.push(
        "k-conjugation+",
        json!({"phi": phi}),
        rel_residual(&conj(&g.e_plus), &g.e_plus.scale(q2)),
        1e-12,
    );
    rep.push(
        "k-conjugation-",
        json!({"phi": phi}),
        rel_residual(&conj(&g.e_minus), &g.e_minus.scale(1.0 / q2)),
        1e-12,
    );
    rep.push(
        "hamiltonian",
        json!({"phi": phi}),
        rel_residual(&(&g.e_plus + &g.e_minus), &g.hamiltonian),
        1e-12,
    );
    rep.push_exact(
        "k-invertible",
        json!({"phi": phi}),
        rel_residual(&(&g.k * &g.k_inv), &CMatrix::identity(size)) < 1e-14,
    );
    if let Ok(dd) = q_diff(q) {
        let ep = g.e_plus.scale(1.0 / dd);
        let em = g.e_minus.scale(1.0 / dd);
        let comm = &(&ep * &em) - &(&em * &ep);
        rep.push(
            "commutator-uncleared",
            json!({"phi": phi}),
            rel_residual(&comm, &kk.scale(1.0 / dd)),
            1e-12,
        );
    }
    Ok(rep)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn spectrum(h: &CMatrix) -> Result<Vec<f64>> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * 1f64.max(h.max_norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let eig = SymmetricEigen::new(h.0.clone());
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

/// max_k ‖Hv_k - λ_k v_k‖ / ‖H‖₂.
pub fn eigen_residual(h: &CMatrix) -> Result<f64> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * 1f64.max(h.max_norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let eig = SymmetricEigen::new(h.0.clone());
    let norm = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let mut worst = 0.0f64;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let r = &h.0 * v - v * Complex64::new(lam, 0.0);
        worst = worst.max(r.norm());
    }
    Ok(if norm > 0.0 { worst / norm } else { worst })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub p: i64,
    pub q: i64,
    pub index: usize,
    pub energy: f64,
}

pub fn spectrum_rows(spec: &HamiltonianSpec) -> Result<Vec<SpectrumRow>> {
    let ev = spectrum(&build_hamiltonian(spec)?)?;
    Ok(ev
        .into_iter()
        .enumerate()
        .map(|(index, e)| SpectrumRow {
            p: spec.flux.p,
            q: spec.flux.q,
            index,
            energy: e + 0.0,
        })
        .collect())
}

/// Spectra for all coprime 1 ≤ P < Q ≤ Qmax, sorted by (Q, P, index).
pub fn butterfly_sweep(qmax: i64, kind: HamiltonianKind, conv: SignConvention) -> Result<Vec<SpectrumRow>> {
    if qmax < 2 {
        return Err(Error::Config(format!("Qmax must be at least 2, got {qmax}")));
    }
    let fluxes: Vec<FluxRatio> = (2..=qmax)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .map(|(p, q)| FluxRatio::new(p, q))
        .collect::<Result<_>>()?;
    let mut rows: Vec<SpectrumRow> = fluxes
        .par_iter()
        .map(|&flux| {
            spectrum_rows(&HamiltonianSpec {
                kind,
                flux,
                sign_convention: conv,
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by_key(|a| (a.q, a.p, a.index));
    Ok(rows)
}

pub const CSV_HEADER: &str = "phi_num,phi_den,index,energy";

pub fn write_csv<W: Write>(mut w: W, rows: &[SpectrumRow]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.p, r.q, r.index, r.energy)?;
    }
    Ok(())
}

trait MaxNormDiff {
    fn max_norm_diff(&self, other: &CMatrix) -> f64;
}

impl MaxNormDiff for CMatrix {
    fn max_norm_diff(&self, other: &CMatrix) -> f64 {
        CMatrix(&self.0 - &other.0).max_norm()
    }
}

/// Gershgorin bound max_j Σ_k |H_jk|.
pub fn gershgorin_bound(h: &CMatrix) -> f64 {
    let m: &DMatrix<Complex64> = &h.0;
    (0..m.nrows())
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
