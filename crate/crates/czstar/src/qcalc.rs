//! q-derivatives and magnetic translations on Laurent monomials.
//!
//! A [`WindowOp`] is a finite sum of monomial maps
//! z^j ↦ c·ω^{slope·j + offset}·z^{j+shift}. Composition adds exponents in
//! integer arithmetic, so products of operators never lose exactness; only
//! the scalar coefficients c (which carry the q-brackets) are floats.
//! A [`LaurentWindow`] fixes the finite set of degrees on which relations
//! are compared.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::json;

use crate::czrep::Sign;
use crate::error::{Error, Result};
use crate::phase::{q_bracket, q_bracket_half, q_diff, HalfInt, Phase, PhaseRing};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    pub d_min: i64,
    pub d_max: i64,
}

impl LaurentWindow {
    pub fn new(d_min: i64, d_max: i64) -> Result<Self> {
        if d_min > d_max {
            return Err(Error::Config(format!("empty window [{d_min}, {d_max}]")));
        }
        Ok(Self { d_min, d_max })
    }

    pub fn len(&self) -> usize {
        (self.d_max - self.d_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, d: i64) -> bool {
        (self.d_min..=self.d_max).contains(&d)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.d_min..=self.d_max
    }
}

impl Default for LaurentWindow {
    fn default() -> Self {
        Self { d_min: -8, d_max: 12 }
    }
}

/// Coefficient vector on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentVec {
    pub window: LaurentWindow,
    pub coeffs: Vec<Complex64>,
}

impl LaurentVec {
    pub fn zero(window: LaurentWindow) -> Self {
        Self {
            window,
            coeffs: vec![Complex64::new(0.0, 0.0); window.len()],
        }
    }

    pub fn monomial(window: LaurentWindow, degree: i64) -> Result<Self> {
        let mut v = Self::zero(window);
        *v.at_mut(degree)? = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    fn underflow(&self, degree: i64) -> Error {
        Error::WindowUnderflow {
            degree,
            d_min: self.window.d_min,
            d_max: self.window.d_max,
        }
    }

    pub fn get(&self, degree: i64) -> Complex64 {
        if self.window.contains(degree) {
            self.coeffs[(degree - self.window.d_min) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn at_mut(&mut self, degree: i64) -> Result<&mut Complex64> {
        if !self.window.contains(degree) {
            return Err(self.underflow(degree));
        }
        Ok(&mut self.coeffs[(degree - self.window.d_min) as usize])
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.window
            .degrees()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
    }

    /// Product of Laurent polynomials; fails if a product degree leaves the window.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.window);
        for (a, ca) in self.support() {
            for (b, cb) in other.support() {
                *out.at_mut(a + b)? += ca * cb;
            }
        }
        Ok(out)
    }

    /// f(z) ↦ f(z q^k), i.e. coefficient of z^j times q^{kj}.
    pub fn dilate(&self, q: Phase, k: i64) -> Self {
        let mut out = self.clone();
        for (d, c) in self.window.degrees().zip(out.coeffs.iter_mut()) {
            *c *= q.pow(k * d).to_complex();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.window.d_min.min(other.window.d_min);
        let hi = self.window.d_max.max(other.window.d_max);
        (lo..=hi).fold(0.0, |m, d| m.max((self.get(d) - other.get(d)).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// ∂_q f(z) = (f(z) - f(z q^{-2}))/((q - q^{-1}) z).
pub fn q_derivative(f: &LaurentVec, q: Phase) -> Result<LaurentVec> {
    let d = q_diff(q)?;
    let mut out = LaurentVec::zero(f.window);
    for (j, c) in f.support() {
        if j == 0 {
            continue;
        }
        let coeff = (1.0 - q.pow(-2 * j).to_complex()) / d;
        *out.at_mut(j - 1)? += c * coeff;
    }
    Ok(out)
}

/// z^j ↦ coeff·ω^{slope·j + offset}·z^{j+shift}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonoMap {
    pub shift: i64,
    pub slope: i64,
    pub offset: i64,
    pub coeff: Complex64,
}

impl MonoMap {
    pub fn new(shift: i64, slope: i64, offset: i64, coeff: Complex64) -> Self {
        Self {
            shift,
            slope,
            offset,
            coeff,
        }
    }

    fn reduced(self, ring: PhaseRing) -> Self {
        Self {
            slope: ring.reduce(self.slope),
            offset: ring.reduce(self.offset),
            ..self
        }
    }

    /// self ∘ other (other acts first).
    pub fn compose(&self, other: &Self, ring: PhaseRing) -> Self {
        Self {
            shift: self.shift + other.shift,
            slope: self.slope + other.slope,
            offset: self.offset + other.offset + self.slope * other.shift,
            coeff: self.coeff * other.coeff,
        }
        .reduced(ring)
    }

    /// Same exponents and coefficient.
    pub fn same_as(&self, other: &Self, ring: PhaseRing) -> bool {
        let a = self.reduced(ring);
        let b = other.reduced(ring);
        a.shift == b.shift && a.slope == b.slope && a.offset == b.offset && a.coeff == b.coeff
    }
}

/// Finite sum of monomial maps over a fixed phase ring.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowOp {
    ring: PhaseRing,
    terms: Vec<MonoMap>,
}

impl WindowOp {
    pub fn zero(ring: PhaseRing) -> Self {
        Self {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn identity(ring: PhaseRing) -> Self {
        Self::single(ring, MonoMap::new(0, 0, 0, Complex64::new(1.0, 0.0)))
    }

    pub fn single(ring: PhaseRing, m: MonoMap) -> Self {
        Self {
            ring,
            terms: vec![m.reduced(ring)],
        }
    }

    pub fn from_terms(ring: PhaseRing, terms: Vec<MonoMap>) -> Self {
        Self {
            ring,
            terms: terms.into_iter().map(|t| t.reduced(ring)).collect(),
        }
        .canonical()
    }

    pub fn ring(&self) -> PhaseRing {
        self.ring
    }

    pub fn terms(&self) -> &[MonoMap] {
        &self.terms
    }

    /// Merge terms with identical exponents and drop exact zeros.
    pub fn canonical(mut self) -> Self {
        let mut acc: BTreeMap<(i64, i64, i64), Complex64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry((t.shift, t.slope, t.offset)).or_default() += t.coeff;
        }
        self.terms = acc
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|((s, a, b), c)| MonoMap::new(s, a, b, c))
            .collect();
        self
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.m(),
                right: other.ring.m(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self {
            ring: self.ring,
            terms,
        }
        .canonical())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|t| MonoMap {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        }
        .canonical()
    }

    /// Multiply by an exact phase (added to every offset).
    pub fn phase_scale(&self, p: Phase) -> Result<Self> {
        if p.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.m(),
                right: p.ring().m(),
            });
        }
        Ok(Self {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|t| MonoMap {
                    offset: t.offset + p.exponent(),
                    ..*t
                }
                .reduced(self.ring))
                .collect(),
        }
        .canonical())
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.compose(b, self.ring));
            }
        }
        Ok(Self {
            ring: self.ring,
            terms,
        }
        .canonical())
    }

    /// Inverse of a single monomial map.
    pub fn inverse(&self) -> Result<Self> {
        match self.terms.as_slice() {
            [t] if t.coeff != Complex64::new(0.0, 0.0) => Ok(Self::single(
                self.ring,
                MonoMap::new(-t.shift, -t.slope, t.slope * t.shift - t.offset, 1.0 / t.coeff),
            )),
            _ => Err(Error::Config(
                "only single monomial maps are invertible".into(),
            )),
        }
    }

    pub fn shifts(&self) -> (i64, i64) {
        let lo = self.terms.iter().map(|t| t.shift).min().unwrap_or(0);
        let hi = self.terms.iter().map(|t| t.shift).max().unwrap_or(0);
        (lo, hi)
    }

    /// Image of z^j as (degree, coefficient) pairs.
    pub fn apply_monomial(&self, j: i64) -> BTreeMap<i64, Complex64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            let ph = self.ring.phase(t.slope * j + t.offset).to_complex();
            *out.entry(j + t.shift).or_insert(Complex64::new(0.0, 0.0)) += t.coeff * ph;
        }
        out
    }

    pub fn apply(&self, f: &LaurentVec) -> Result<LaurentVec> {
        let mut out = LaurentVec::zero(f.window);
        for (j, c) in f.support() {
            for (d, v) in self.apply_monomial(j) {
                if v != Complex64::new(0.0, 0.0) {
                    *out.at_mut(d)? += c * v;
                }
            }
        }
        Ok(out)
    }

    /// Exact exponent-level equality (coefficients compared bitwise).
    pub fn same_as(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.same_as(b, self.ring))
    }
}

/// Source degrees j in the window whose images under every given operator stay inside it.
pub fn interior(window: LaurentWindow, ops: &[&WindowOp]) -> Vec<i64> {
    let mut lo = 0i64;
    let mut hi = 0i64;
    for op in ops {
        let (a, b) = op.shifts();
        lo = lo.min(a);
        hi = hi.max(b);
    }
    (window.d_min - lo..=window.d_max - hi)
        .filter(|j| window.contains(*j))
        .collect()
}

/// max|a - b| / max(1, max|a|, max|b|) over the window interior.
pub fn window_residual(a: &WindowOp, b: &WindowOp, window: LaurentWindow) -> Result<f64> {
    let js = interior(window, &[a, b]);
    if js.is_empty() {
        let (lo, hi) = a.shifts();
        return Err(Error::WindowUnderflow {
            degree: if hi > 0 { window.d_max + hi } else { window.d_min + lo },
            d_min: window.d_min,
            d_max: window.d_max,
        });
    }
    let (mut diff, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
    for j in js {
        let ia = a.apply_monomial(j);
        let ib = b.apply_monomial(j);
        for (d, v) in &ia {
            na = na.max(v.norm());
            diff = diff.max((v - ib.get(d).copied().unwrap_or_default()).norm());
        }
        for (d, v) in &ib {
            nb = nb.max(v.norm());
            if !ia.contains_key(d) {
                diff = diff.max(v.norm());
            }
        }
    }
    Ok(diff / 1f64.max(na).max(nb))
}

/// Ring, deformation parameter, spin and window of a Laurent realization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Laurent {
    pub q: Phase,
    pub delta: Rational64,
    pub window: LaurentWindow,
}

impl Default for Laurent {
    /// q = e^{iπ/7} in the ring M = 14, Δ = 0, window [-8, 12].
    fn default() -> Self {
        Self {
            q: PhaseRing::new(14).expect("valid").phase(2),
            delta: Rational64::from_integer(0),
            window: LaurentWindow::default(),
        }
    }
}

impl Laurent {
    pub fn new(q: Phase, delta: Rational64, window: LaurentWindow) -> Self {
        Self { q, delta, window }
    }

    pub fn with_delta(self, delta: Rational64) -> Self {
        Self { delta, ..self }
    }

    fn ring(&self) -> PhaseRing {
        self.q.ring()
    }

    fn s(&self) -> i64 {
        self.q.exponent()
    }

    fn d(&self) -> Result<Complex64> {
        q_diff(self.q)
    }

    /// ω exponent of q^{r} for a rational r.
    fn q_exp(&self, r: Rational64) -> Result<i64> {
        Ok(self.q.pow_rational(r)?.exponent())
    }

    /// L̂_n^+ : z^j ↦ (q^{-2j} - 1)/d · z^{j+n};  L̂_n^- : z^j ↦ (1 - q^{2j})/d · z^{j+n}.
    pub fn lhat(&self, n: i64, sign: Sign) -> Result<WindowOp> {
        let d = self.d()?;
        let e = sign.eps() as f64;
        Ok(WindowOp::from_terms(
            self.ring(),
            vec![
                MonoMap::new(n, 0, 0, Complex64::new(-e, 0.0) / d),
                MonoMap::new(n, -2 * sign.eps() * self.s(), 0, Complex64::new(e, 0.0) / d),
            ],
        ))
    }

    /// τ̂_n^{(k)} : z^j ↦ q^{-k(j + n/2 + Δ)} z^{j+n}.
    pub fn tau(&self, n: i64, k: i64) -> Result<WindowOp> {
        let off = -Rational64::from_integer(k) * (Rational64::new(n, 2) + self.delta);
        Ok(WindowOp::single(
            self.ring(),
            MonoMap::new(n, -k * self.s(), self.q_exp(off)?, Complex64::new(1.0, 0.0)),
        ))
    }

    /// T̂_n^{(k)} = τ̂_n^{(k)}/(q - q^{-1}).
    pub fn t(&self, n: i64, k: i64) -> Result<WindowOp> {
        Ok(self.tau(n, k)?.scale(1.0 / self.d()?))
    }

    /// q^{-k z∂} : z^j ↦ q^{-kj} z^j.
    pub fn dilation(&self, k: i64) -> WindowOp {
        WindowOp::single(
            self.ring(),
            MonoMap::new(0, -k * self.s(), 0, Complex64::new(1.0, 0.0)),
        )
    }

    /// S_0 = q^{-2z∂}.
    pub fn s0(&self) -> WindowOp {
        self.dilation(2)
    }

    /// ∂_q : z^j ↦ (1 - q^{-2j})/d z^{j-1}.
    pub fn dq(&self) -> Result<WindowOp> {
        let d = self.d()?;
        Ok(WindowOp::from_terms(
            self.ring(),
            vec![
                MonoMap::new(-1, 0, 0, 1.0 / d),
                MonoMap::new(-1, -2 * self.s(), 0, -1.0 / d),
            ],
        ))
    }

    /// ∂_{q²} = -(L̂_{-1}^+ + L̂_{-1}^-)/(q + q^{-1}).
    pub fn dq2(&self) -> Result<WindowOp> {
        let c = self.q.to_complex() + self.q.inv().to_complex();
        Ok(self
            .lhat(-1, Sign::Plus)?
            .add(&self.lhat(-1, Sign::Minus)?)?
            .scale(-1.0 / c))
    }

    /// a† = q z.
    pub fn a_dagger(&self) -> WindowOp {
        WindowOp::single(
            self.ring(),
            MonoMap::new(1, 0, self.s(), Complex64::new(1.0, 0.0)),
        )
    }

    /// a : z^j ↦ q^{-1}[j] z^{j-1}.
    pub fn a(&self) -> Result<WindowOp> {
        let d = self.d()?;
        let s = self.s();
        Ok(WindowOp::from_terms(
            self.ring(),
            vec![
                MonoMap::new(-1, s, -s, 1.0 / d),
                MonoMap::new(-1, -s, -s, -1.0 / d),
            ],
        ))
    }

    /// q^{-N̂} : z^j ↦ q^{-j} z^j.
    pub fn q_minus_number(&self) -> WindowOp {
        self.dilation(1)
    }

    /// -q^{-N̂} (a†)^{n+1} a, defined for n ≥ -1.
    pub fn lhat_oscillator(&self, n: i64) -> Result<WindowOp> {
        if n < -1 {
            return Err(Error::Config(format!("oscillator form needs n ≥ -1, got {n}")));
        }
        let mut op = self.a()?;
        for _ in 0..=n {
            op = self.a_dagger().compose(&op)?;
        }
        Ok(self
            .q_minus_number()
            .compose(&op)?
            .scale(Complex64::new(-1.0, 0.0)))
    }

    /// -T̂_n^{(0)} + q^{n+2Δ} T̂_n^{(2)}, or T̂_n^{(0)} - q^{-n-2Δ} T̂_n^{(-2)}.
    pub fn czt_decomposition(&self, n: i64, sign: Sign) -> Result<WindowOp> {
        let e = sign.eps();
        let ph = self.q.pow_rational(
            Rational64::from_integer(e) * (Rational64::from_integer(n) + self.delta * 2),
        )?;
        let t0 = self.t(n, 0)?.scale(Complex64::new(-(e as f64), 0.0));
        let t2 = self.t(n, 2 * e)?.phase_scale(ph)?.scale(Complex64::new(e as f64, 0.0));
        t0.add(&t2)
    }

    pub fn residual(&self, a: &WindowOp, b: &WindowOp) -> Result<f64> {
        window_residual(a, b, self.window)
    }

    /// q^x A B - q^y B A.
    pub fn deformed_commutator(&self, a: &WindowOp, b: &WindowOp, x: HalfInt, y: HalfInt) -> Result<WindowOp> {
        let ab = a.compose(b)?.phase_scale(self.q.pow_half(x)?)?;
        let ba = b.compose(a)?.phase_scale(self.q.pow_half(y)?)?;
        ab.sub(&ba)
    }

    pub fn q_commutator(&self, a: &WindowOp, b: &WindowOp, x: HalfInt) -> Result<WindowOp> {
        self.deformed_commutator(a, b, x, -x)
    }
}

fn q_scale(op: &WindowOp, q: Phase, x: i64) -> Result<WindowOp> {
    op.phase_scale(q.pow(x))
}

/// Exchange, fusion and circulation of τ̂ for all |n|,|m|,|k|,|l| ≤ bound, plus FFZ.
pub fn verify_mta(bound: i64, lr: &Laurent) -> Result<Report> {
    let mut rep = Report::new("mta", lr.window.len(), lr.q);
    let q = lr.q;
    let ring = q.ring();
    let r = -bound..=bound;
    for n in r.clone() {
        for k in r.clone() {
            let t1 = lr.tau(n, k)?;
            for m in r.clone() {
                for l in r.clone() {
                    let t2 = lr.tau(m, l)?;
                    let p = json!({"n": n, "k": k, "m": m, "l": l});
                    let area = n * l - m * k;
                    let lhs = t1.compose(&t2)?;
                    let ex = q_scale(&t2.compose(&t1)?, q, area)?;
                    rep.push_exact("exchange", p.clone(), lhs.same_as(&ex));
                    let half = q.pow_rational(Rational64::new(area, 2))?;
                    let fused = lr.tau(n + m, k + l)?.phase_scale(half)?;
                    rep.push_exact("fusion", p.clone(), lhs.same_as(&fused));
                    let circ = t1.inverse()?.compose(&t2.inverse()?)?.compose(&t1)?.compose(&t2)?;
                    let expect = WindowOp::identity(ring).phase_scale(q.pow(area))?;
                    rep.push_exact("circulation", p.clone(), circ.same_as(&expect));
                    let c = lr.t(n, k)?.compose(&lr.t(m, l)?)?.sub(&lr.t(m, l)?.compose(&lr.t(n, k)?)?)?;
                    let rhs = lr.t(n + m, k + l)?.scale(q_bracket_half(HalfInt::from_doubled(area), q)?);
                    rep.push("ffz", p, lr.residual(&c, &rhs)?, 1e-12);
                }
            }
        }
    }
    Ok(rep)
}

/// CZT decomposition, the L̂–T̂ brackets and the q-inversion map for one n.
pub fn czt_decomposition_check(n: i64, lr: &Laurent) -> Result<Report> {
    let mut rep = Report::new("czt", lr.window.len(), lr.q);
    let q = lr.q;
    let dl = lr.delta.to_string();
    for sign in Sign::both() {
        let l = lr.lhat(n, sign)?;
        let dec = lr.czt_decomposition(n, sign)?;
        rep.push(
            "decomposition",
            json!({"n": n, "sign": sign.symbol().to_string(), "delta": dl}),
            lr.residual(&l, &dec)?,
            1e-13,
        );
        for m in -2..=2 {
            for k in [-2i64, 0, 2] {
                // [L̂^±_n, T̂_m^{(k)}]_(±m - nk/2) = -[m] T̂_{n+m}^{(k)}
                let x = HalfInt::from_doubled(2 * sign.eps() * m - n * k);
                let lhs = lr.q_commutator(&l, &lr.t(m, k)?, x)?;
                let rhs = lr.t(n + m, k)?.scale(-q_bracket(m, q)?);
                rep.push(
                    "lt",
                    json!({"n": n, "m": m, "k": k, "sign": sign.symbol().to_string()}),
                    lr.residual(&lhs, &rhs)?,
                    1e-13,
                );
            }
        }
    }
    // q-inversion T̂^{(k)} ↦ -T̂^{(-k)} together with q ↦ q^{-1} in the scalar
    let inv = Laurent { q: q.inv(), ..*lr };
    let mapped = inv.czt_decomposition(n, Sign::Plus)?;
    rep.push(
        "q-inversion",
        json!({"n": n, "delta": dl}),
        lr.residual(&mapped, &lr.lhat(n, Sign::Minus)?)?,
        1e-13,
    );
    Ok(rep)
}
