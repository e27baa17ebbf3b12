//! Matrix representations of the CZ± and CZ* generators.
//!
//! Every generator is a [`GradedOp`]: a dense matrix tagged with its mode n,
//! its weight k and the deformation parameter of the algebra it belongs to.
//! The star product only ever reads the tags, never the matrix.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::phase::{q_bracket, q_diff, HalfInt, Phase};
use crate::weyl::{deformed_commutator, make_x, make_xtilde, make_y, rel_residual, CMatrix, MonomialMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn eps(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

#[derive(Clone, Debug)]
pub struct GradedOp {
    pub mat: CMatrix,
    pub mode: i64,
    pub weight: HalfInt,
    /// Deformation parameter of the algebra this generator lives in.
    pub q: Phase,
    pub label: String,
}

impl GradedOp {
    pub fn new(mat: CMatrix, mode: i64, weight: HalfInt, q: Phase, label: impl Into<String>) -> Self {
        Self {
            mat,
            mode,
            weight,
            q,
            label: label.into(),
        }
    }

    pub fn size(&self) -> usize {
        self.mat.dim()
    }

    /// Scalar multiple with the same mode and weight.
    pub fn rescaled(&self, c: Complex64, label: impl Into<String>) -> Self {
        Self {
            mat: self.mat.scale(c),
            label: label.into(),
            ..self.clone()
        }
    }

    /// Nonnegative power; mode and weight scale with k.
    pub fn pow(&self, k: u32) -> Self {
        Self {
            mat: self.mat.pow(k),
            mode: self.mode * k as i64,
            weight: self.weight * k as i64,
            q: self.q,
            label: format!("({})^{k}", self.label),
        }
    }
}

fn compatible(a: &GradedOp, b: &GradedOp) -> Result<()> {
    a.mat.same_size(&b.mat)?;
    if a.q != b.q {
        return Err(Error::RingMismatch {
            left: a.q.ring().m(),
            right: b.q.ring().m(),
        });
    }
    Ok(())
}

/// x = (n_A k_B - n_B k_A)/2 for the star product.
pub fn star_exponent(mode_a: i64, weight_a: HalfInt, mode_b: i64, weight_b: HalfInt) -> Rational64 {
    Rational64::from_integer(mode_a) * weight_b.to_rational() / 2
        - Rational64::from_integer(mode_b) * weight_a.to_rational() / 2
}

/// A * B = q^{-x} AB.
pub fn star_mul(a: &GradedOp, b: &GradedOp) -> Result<CMatrix> {
    compatible(a, b)?;
    let x = star_exponent(a.mode, a.weight, b.mode, b.weight);
    let c = a.q.pow_rational(-x)?.to_complex();
    Ok((&a.mat * &b.mat).scale(c))
}

/// [A, B]* = A*B - B*A.
pub fn star_bracket(a: &GradedOp, b: &GradedOp) -> Result<CMatrix> {
    Ok(&star_mul(a, b)? - &star_mul(b, a)?)
}

/// Parameters of the cyclic representation with A_n = a + b(q^{±2n} - 1).
#[derive(Clone, Debug, PartialEq)]
pub struct CZParams {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub b: Complex64,
    pub n: usize,
    pub q: Phase,
    pub delta: Rational64,
}

impl CZParams {
    pub fn new(n: usize, q: Phase) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a_plus: zero,
            a_minus: zero,
            b: zero,
            n,
            q,
            delta: Rational64::from_integer(0),
        }
    }

    /// a± = (1 ∓ i q^{±2})/(q - q^{-1}); after HLH this gives X^{-n}(1 ∓ iY^{±2}).
    pub fn czhq2(n: usize, q: Phase) -> Result<Self> {
        let d = q_diff(q)?;
        let i = Complex64::new(0.0, 1.0);
        let q2 = q.pow(2).to_complex();
        Ok(Self {
            a_plus: (1.0 - i * q2) / d,
            a_minus: (1.0 + i / q2) / d,
            ..Self::new(n, q)
        })
    }

    /// a± = (1 - q^{±2})/(q - q^{-1}); after HLH this gives X^{-n}Y^{±1}[Z].
    pub fn czhz(n: usize, q: Phase) -> Result<Self> {
        let d = q_diff(q)?;
        let q2 = q.pow(2).to_complex();
        Ok(Self {
            a_plus: (1.0 - q2) / d,
            a_minus: (1.0 - 1.0 / q2) / d,
            ..Self::new(n, q)
        })
    }

    pub fn with_b(mut self, b: Complex64) -> Self {
        self.b = b;
        self
    }

    pub fn with_a(mut self, a_plus: Complex64, a_minus: Complex64) -> Self {
        self.a_plus = a_plus;
        self.a_minus = a_minus;
        self
    }

    pub fn a(&self, sign: Sign) -> Complex64 {
        match sign {
            Sign::Plus => self.a_plus,
            Sign::Minus => self.a_minus,
        }
    }

    /// A_n^± = a± + b(q^{±2n} - 1).
    pub fn big_a(&self, n: i64, sign: Sign) -> Complex64 {
        self.a(sign) + self.b * (self.q.pow(2 * sign.eps() * n).to_complex() - 1.0)
    }
}

fn h_pow(n: usize, ring: crate::phase::PhaseRing, k: i64) -> MonomialMatrix {
    MonomialMatrix::from_parts(ring, -k, vec![0; n], 0)
}

/// Q = q^{-1} Y.
pub fn make_q_op(n: usize, q: Phase) -> Result<MonomialMatrix> {
    make_y(n, q)?.scaled(q.inv())
}

/// L̃_n^± = ∓((1 - Q^{±2})/(q - q^{-1}) + A_n^± Q^{±2}) H^n.
pub fn make_l_general(n: i64, sign: Sign, p: &CZParams) -> Result<GradedOp> {
    if p.n < 3 {
        return Err(Error::SizeTooSmall(p.n));
    }
    let d = q_diff(p.q)?;
    let qq = make_q_op(p.n, p.q)?.pow(2 * sign.eps()).to_cmatrix();
    let id = CMatrix::identity(p.n);
    let inner = &(&id - &qq).scale(1.0 / d) + &qq.scale(p.big_a(n, sign));
    let h = h_pow(p.n, p.q.ring(), n).to_cmatrix();
    let mat = (&inner * &h).scale(Complex64::new(-(sign.eps() as f64), 0.0));
    Ok(GradedOp::new(
        mat,
        n,
        HalfInt::int(2 * sign.eps()),
        p.q,
        format!("L~{}_{n}", sign.symbol()),
    ))
}

/// 𝓛_n = H^n L̃_n H^{-n}.
pub fn transform_hlh(op: &GradedOp) -> GradedOp {
    conjugate_by_h(op, op.mode, format!("HLH({})", op.label))
}

/// Inverse of [`transform_hlh`]: H^{-n} 𝓛_n H^n.
pub fn transform_hlh_inverse(op: &GradedOp) -> GradedOp {
    conjugate_by_h(op, -op.mode, format!("HLH^-1({})", op.label))
}

fn conjugate_by_h(op: &GradedOp, k: i64, label: String) -> GradedOp {
    let n = op.size();
    let ring = op.q.ring();
    let h = h_pow(n, ring, k).to_cmatrix();
    let hi = h_pow(n, ring, -k).to_cmatrix();
    GradedOp {
        mat: &(&h * &op.mat) * &hi,
        label,
        ..op.clone()
    }
}

/// Named matrix representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// ∓X^{-n}(1 ∓ iY^{±2})/(q - q^{-1}).
    Czhq2,
    /// X^{-n} Y^{±1} [Z].
    Czhz,
    /// ∓X^{-n}(1 ∓ iY_k^{±1})/(p - p^{-1}) with Y_k = Y^k and p = q^{k/2}.
    Czhqk(i64),
    /// As `Czhqk` with Y_1² = Y; needs N even and q^{N/2} = 1.
    Czhq1,
}

impl RepKind {
    /// Weyl phase w of the clock matrix used, i.e. w X Y_w = Y_w X.
    pub fn weyl_phase(self, size: usize, q: Phase) -> Result<Phase> {
        match self {
            RepKind::Czhq2 | RepKind::Czhz => Ok(q),
            RepKind::Czhqk(k) => Ok(q.pow(k)),
            RepKind::Czhq1 => {
                if !size.is_multiple_of(2) || !q.pow(size as i64 / 2).is_one() {
                    return Err(Error::PhaseNotRepresentable(format!(
                        "Y_1 needs N even and q^(N/2) = 1 (N={size}, q={q})"
                    )));
                }
                q.pow_half(HalfInt::from_doubled(1))
            }
        }
    }

    /// Deformation parameter of the algebra the generators satisfy.
    pub fn algebra_q(self, size: usize, q: Phase) -> Result<Phase> {
        match self {
            RepKind::Czhq2 | RepKind::Czhz => Ok(q),
            _ => self.weyl_phase(size, q)?.pow_half(HalfInt::from_doubled(1)),
        }
    }
}

pub fn make_rep(kind: RepKind, n: i64, sign: Sign, size: usize, q: Phase) -> Result<GradedOp> {
    let eps = sign.eps();
    let w = kind.weyl_phase(size, q)?;
    let p = kind.algebra_q(size, q)?;
    let d = q_diff(p)?;
    let x = make_x(size, q.ring())?.pow(-n).to_cmatrix();
    let y = make_y(size, w)?;
    let id = CMatrix::identity(size);
    let i = Complex64::new(0.0, 1.0);
    let mat = match kind {
        RepKind::Czhz => {
            let yc = y.to_cmatrix();
            let z = (&yc - &y.inverse().to_cmatrix()).scale(1.0 / d);
            &(&x * &y.pow(eps).to_cmatrix()) * &z
        }
        _ => {
            let yk = match kind {
                RepKind::Czhq2 => y.pow(2 * eps),
                _ => y.pow(eps),
            };
            let f = &id - &yk.to_cmatrix().scale(i * eps as f64);
            (&x * &f).scale(Complex64::new(-(eps as f64), 0.0) / d)
        }
    };
    Ok(GradedOp::new(
        mat,
        n,
        HalfInt::int(2 * eps),
        p,
        format!("{kind:?}{}_{n}", sign.symbol()),
    ))
}

/// Families with g_n g_m = g_{n+m}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialKind {
    /// c^n H^n.
    PowH(Phase),
    /// q^{cn²} Q^{2cn} H^n.
    QuadQ(i64),
    /// c^n Y^n.
    PowY(Phase),
    /// Y^{2n}.
    YSquared,
    /// X̃^{-2n}.
    XtildeInvSquared,
}

pub fn trivial_g(kind: TrivialKind, n: i64, size: usize, q: Phase) -> Result<MonomialMatrix> {
    let ring = q.ring();
    let check = |c: Phase| {
        if c.ring() != ring {
            Err(Error::PhaseNotRepresentable(format!("{c} outside the ring M={}", ring.m())))
        } else {
            Ok(c)
        }
    };
    match kind {
        TrivialKind::PowH(c) => h_pow(size, ring, n).scaled(check(c)?.pow(n)),
        TrivialKind::QuadQ(c) => make_q_op(size, q)?
            .pow(2 * c * n)
            .mul(&h_pow(size, ring, n))?
            .scaled(q.pow(c * n * n)),
        TrivialKind::PowY(c) => make_y(size, q)?.pow(n).scaled(check(c)?.pow(n)),
        TrivialKind::YSquared => Ok(make_y(size, q)?.pow(2 * n)),
        TrivialKind::XtildeInvSquared => Ok(make_xtilde(size, q)?.pow(-2 * n)),
    }
}

/// L'_n^± = ∓g_n/(q - q^{-1}).
pub fn make_trivial(kind: TrivialKind, n: i64, sign: Sign, size: usize, q: Phase) -> Result<GradedOp> {
    let d = q_diff(q)?;
    let g = trivial_g(kind, n, size, q)?.to_cmatrix();
    Ok(GradedOp::new(
        g.scale(Complex64::new(-(sign.eps() as f64), 0.0) / d),
        n,
        HalfInt::int(2 * sign.eps()),
        q,
        format!("L'{}[{kind:?}]_{n}", sign.symbol()),
    ))
}

/// T̂_n^{(0)} = q^n H^n/d, T̂_n^{(2)} = q² H^n Q²/d, T̂_n^{(-2)} = q^{-2} Q^{-2} H^n/d.
pub fn make_t_substitution(n: i64, k: i64, size: usize, q: Phase) -> Result<GradedOp> {
    let d = q_diff(q)?;
    let ring = q.ring();
    let h = h_pow(size, ring, n);
    let qop = make_q_op(size, q)?;
    let m = match k {
        0 => h.scaled(q.pow(n))?,
        2 => h.mul(&qop.pow(2))?.scaled(q.pow(2))?,
        -2 => qop.pow(-2).mul(&h)?.scaled(q.pow(-2))?,
        _ => return Err(Error::Config(format!("substitution weight must be 0 or ±2, got {k}"))),
    };
    Ok(GradedOp::new(
        m.to_cmatrix().scale(1.0 / d),
        n,
        HalfInt::int(k),
        q,
        format!("T^({k})_{n}"),
    ))
}

/// S_0^± = 1 ± (q - q^{-1}) L_0^±, mode 0 and weight ±2.
pub fn make_s0(sign: Sign, l0: &GradedOp) -> GradedOp {
    let d = l0.q.to_complex() - l0.q.inv().to_complex();
    let id = CMatrix::identity(l0.size());
    GradedOp::new(
        &id + &l0.mat.scale(d * sign.eps() as f64),
        0,
        HalfInt::int(2 * sign.eps()),
        l0.q,
        format!("S0{}", sign.symbol()),
    )
}

/// Source of generators L_n^± for the native checks.
#[derive(Clone, Debug)]
pub enum Family {
    Qhcz { params: CZParams, hlh: bool },
    Rep { kind: RepKind, size: usize, q: Phase },
    Trivial { plus: TrivialKind, minus: TrivialKind, size: usize, q: Phase },
}

impl Family {
    pub fn gen(&self, n: i64, sign: Sign) -> Result<GradedOp> {
        match self {
            Family::Qhcz { params, hlh } => {
                let l = make_l_general(n, sign, params)?;
                Ok(if *hlh { transform_hlh(&l) } else { l })
            }
            Family::Rep { kind, size, q } => make_rep(*kind, n, sign, *size, *q),
            Family::Trivial { plus, minus, size, q } => {
                let k = if sign == Sign::Plus { *plus } else { *minus };
                make_trivial(k, n, sign, *size, *q)
            }
        }
    }

    /// L'_n^- = q^n L_n^-; the plus generators are unchanged.
    pub fn primed(&self, n: i64, sign: Sign) -> Result<GradedOp> {
        let l = self.gen(n, sign)?;
        Ok(match sign {
            Sign::Plus => l,
            Sign::Minus => {
                let c = l.q.pow(n).to_complex();
                l.rescaled(c, format!("L'-_{n}"))
            }
        })
    }

    pub fn algebra_q(&self) -> Result<Phase> {
        Ok(self.gen(0, Sign::Plus)?.q)
    }

    pub fn size(&self) -> usize {
        match self {
            Family::Qhcz { params, .. } => params.n,
            Family::Rep { size, .. } | Family::Trivial { size, .. } => *size,
        }
    }

    pub fn base_q(&self) -> Phase {
        match self {
            Family::Qhcz { params, .. } => params.q,
            Family::Rep { q, .. } | Family::Trivial { q, .. } => *q,
        }
    }
}

fn qc(q: Phase, x: i64) -> Complex64 {
    q.pow(x).to_complex()
}

fn bracket(a: &GradedOp, b: &GradedOp, x: i64) -> Result<CMatrix> {
    deformed_commutator(&a.mat, &b.mat, HalfInt::int(x), HalfInt::int(-x), a.q)
}

/// CZ± closure: [L_n,L_m]_(±(m-n)) = [n-m] L_{n+m}.
pub fn closure_residual(f: &Family, sign: Sign, n: i64, m: i64) -> Result<f64> {
    let (ln, lm, lnm) = (f.gen(n, sign)?, f.gen(m, sign)?, f.gen(n + m, sign)?);
    let lhs = bracket(&ln, &lm, -sign.eps() * (n - m))?;
    let rhs = lnm.mat.scale(q_bracket(n - m, ln.q)?);
    Ok(rel_residual(&lhs, &rhs))
}

/// [L^ε_n, L^η_m]* = q^{ηm}[n] L^ε_{n+m} - q^{εn}[m] L^η_{n+m}.
pub fn czcz_residual(f: &Family, eps: Sign, eta: Sign, n: i64, m: i64) -> Result<f64> {
    let a = f.gen(n, eps)?;
    let b = f.gen(m, eta)?;
    let q = a.q;
    let lhs = star_bracket(&a, &b)?;
    let r1 = f.gen(n + m, eps)?.mat.scale(qc(q, eta.eps() * m) * q_bracket(n, q)?);
    let r2 = f.gen(n + m, eta)?.mat.scale(qc(q, eps.eps() * n) * q_bracket(m, q)?);
    Ok(rel_residual(&lhs, &(&r1 - &r2)))
}

/// [L^+_n, L^-_m]_(n+m) against the pre-HLH (`tilde`) or post-HLH right-hand side.
pub fn mixing_residual(f: &Family, n: i64, m: i64, tilde: bool) -> Result<f64> {
    let a = f.gen(n, Sign::Plus)?;
    let b = f.gen(m, Sign::Minus)?;
    let q = a.q;
    let s = if tilde { 1 } else { -1 };
    let lhs = bracket(&a, &b, n + m)?;
    let r1 = f.gen(n + m, Sign::Plus)?.mat.scale(qc(q, s * m) * q_bracket(n, q)?);
    let r2 = f.gen(n + m, Sign::Minus)?.mat.scale(qc(q, -s * n) * q_bracket(m, q)?);
    Ok(rel_residual(&lhs, &(&r1 - &r2)))
}

/// Primed mixing: [L^+_n, L'^-_m]_(n+m) = [n]L^+_{n+m} - [m]L'^-_{n+m}.
pub fn primed_mixing_residual(f: &Family, n: i64, m: i64) -> Result<f64> {
    let a = f.primed(n, Sign::Plus)?;
    let b = f.primed(m, Sign::Minus)?;
    let q = a.q;
    let lhs = bracket(&a, &b, n + m)?;
    let r1 = f.primed(n + m, Sign::Plus)?.mat.scale(q_bracket(n, q)?);
    let r2 = f.primed(n + m, Sign::Minus)?.mat.scale(q_bracket(m, q)?);
    Ok(rel_residual(&lhs, &(&r1 - &r2)))
}

/// The three cyclic identities on the weight +2 family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicIdentity {
    /// Σ (q^n + q^{-n}) [L_n,[L_m,L_l]_(l-m)]_(m+l-n) = 0.
    HomJacobi,
    /// Σ [L_n,[L_m,L_l]_(l-m)]_(m+l-2n) = 0.
    YangBaxter,
    /// Σ [L_n,[L_m,L_l]_(l-m)]_(m+l) = 0.
    Consistency,
}

pub fn cyclic_sum(f: &Family, which: CyclicIdentity, n: i64, m: i64, l: i64) -> Result<CMatrix> {
    let size = f.size();
    let mut acc = CMatrix::zeros(size);
    for (a, b, c) in [(n, m, l), (m, l, n), (l, n, m)] {
        let la = f.gen(a, Sign::Plus)?;
        let inner = GradedOp {
            mat: bracket(&f.gen(b, Sign::Plus)?, &f.gen(c, Sign::Plus)?, c - b)?,
            ..f.gen(b + c, Sign::Plus)?
        };
        let q = la.q;
        let term = match which {
            CyclicIdentity::HomJacobi => {
                bracket(&la, &inner, b + c - a)?.scale(qc(q, a) + qc(q, -a))
            }
            CyclicIdentity::YangBaxter => bracket(&la, &inner, b + c - 2 * a)?,
            CyclicIdentity::Consistency => bracket(&la, &inner, b + c)?,
        };
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Relative size of a cyclic sum: max-norm over max(1, largest term).
pub fn cyclic_residual(f: &Family, which: CyclicIdentity, n: i64, m: i64, l: i64) -> Result<f64> {
    let s = cyclic_sum(f, which, n, m, l)?;
    let scale = [n, m, l]
        .iter()
        .map(|&k| f.gen(k, Sign::Plus).map(|g| g.mat.max_norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0f64, |a, b| a.max(b * b));
    Ok(s.max_norm() / scale)
}

/// [Q^{±2}, L^±_n]_(±n, ∓n) = 0.
pub fn center_residual(f: &Family, sign: Sign, n: i64) -> Result<f64> {
    let q = f.base_q();
    let l = f.gen(n, sign)?;
    let qq = make_q_op(f.size(), q)?.pow(2 * sign.eps()).to_cmatrix();
    let e = sign.eps() * n;
    let c = deformed_commutator(&qq, &l.mat, HalfInt::int(e), HalfInt::int(-e), q)?;
    Ok(c.max_norm() / 1f64.max(qq.max_norm()).max(l.mat.max_norm()))
}

/// Does g_n g_m = g_{n+m} hold at exponent level?
pub fn trivial_semigroup_exact(kind: TrivialKind, n: i64, m: i64, size: usize, q: Phase) -> Result<bool> {
    let gn = trivial_g(kind, n, size, q)?;
    let gm = trivial_g(kind, m, size, q)?;
    Ok(gn.mul(&gm)?.same_matrix(&trivial_g(kind, n + m, size, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::PhaseRing;
    use proptest::prelude::*;

    /// q = e^{2πi/N} in the ring M = 2N (so i, q^{1/2}, q^{1/4} are exact).
    fn cz_q(n: usize) -> Phase {
        PhaseRing::new(2 * n as i64).unwrap().phase(4)
    }

    fn qhcz(n: usize) -> Family {
        let q = cz_q(n);
        Family::Qhcz {
            params: CZParams::czhq2(n, q).unwrap(),
            hlh: true,
        }
    }

    #[test]
    fn star_mul_scales() {
        let q = cz_q(7);
        let f = qhcz(7);
        let l2 = f.gen(2, Sign::Plus).unwrap();
        let l3 = f.gen(3, Sign::Plus).unwrap();
        let s = star_mul(&l2, &l3).unwrap();
        let expect = (&l2.mat * &l3.mat).scale(q.to_complex());
        assert!(rel_residual(&s, &expect) < 1e-15);

        let s0 = make_s0(Sign::Plus, &f.gen(0, Sign::Plus).unwrap());
        let s = star_mul(&s0, &l3).unwrap();
        let expect = (&s0.mat * &l3.mat).scale(q.pow(3).to_complex());
        assert!(rel_residual(&s, &expect) < 1e-15);

        let t0 = make_t_substitution(1, 0, 7, q).unwrap();
        let t1 = make_t_substitution(2, 0, 7, q).unwrap();
        assert!(rel_residual(&star_mul(&t0, &t1).unwrap(), &(&t0.mat * &t1.mat)) < 1e-15);
    }

    #[test]
    fn star_mul_errors() {
        let a = qhcz(5).gen(1, Sign::Plus).unwrap();
        let b = qhcz(6).gen(1, Sign::Plus).unwrap();
        assert!(matches!(star_mul(&a, &b), Err(Error::SizeMismatch { .. })));
        let c = GradedOp { q: PhaseRing::new(7).unwrap().phase(2), ..a.clone() };
        assert!(matches!(star_mul(&a, &c), Err(Error::RingMismatch { .. })));
        // odd weight against odd mode gives a quarter exponent the ring may not hold
        let odd = GradedOp { weight: HalfInt::from_doubled(1), ..a.clone() };
        let q1 = GradedOp { q: PhaseRing::new(5).unwrap().phase(1), ..a.clone() };
        let odd1 = GradedOp { q: q1.q, ..odd };
        assert!(matches!(star_mul(&odd1, &q1), Err(Error::PhaseNotRepresentable(_))));
    }

    #[test]
    fn star_bracket_antisymmetric_and_zero() {
        let f = qhcz(6);
        let a = f.gen(1, Sign::Plus).unwrap();
        let b = f.gen(-2, Sign::Minus).unwrap();
        let ab = star_bracket(&a, &b).unwrap();
        let ba = star_bracket(&b, &a).unwrap();
        assert_eq!(ab, -&ba);
        assert_eq!(star_bracket(&a, &a).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn t_substitution_star_closure() {
        let q = cz_q(7);
        for (n, k, m, l) in [(1, 0, 2, 2), (2, 2, -1, 2), (1, -2, 3, 0), (-2, 2, 1, -2)] {
            let a = make_t_substitution(n, k, 7, q).unwrap();
            let b = make_t_substitution(m, l, 7, q).unwrap();
            let _ = star_bracket(&a, &b).unwrap();
        }
        // the examples: T00 and T02
        let t = |n, k| make_t_substitution(n, k, 7, q).unwrap();
        let c = bracket(&t(1, 2), &t(2, 2), 1).unwrap();
        assert!(c.max_norm() < 1e-12);
        let c = bracket(&t(1, 0), &t(2, 0), 1).unwrap();
        assert!(rel_residual(&c, &t(3, 0).mat.scale(q_bracket(1, q).unwrap())) < 1e-12);
        let c = bracket(&t(2, 0), &t(1, 2), -1).unwrap();
        assert!(rel_residual(&c, &t(3, 2).mat.scale(q_bracket(1, q).unwrap())) < 1e-12);
        assert!(make_t_substitution(0, 4, 7, q).is_err());
    }

    #[test]
    fn t_minus_tables() {
        let q = cz_q(6);
        let t = |n, k| make_t_substitution(n, k, 6, q).unwrap();
        let b = |x| q_bracket(x, q).unwrap();
        for n in -2..=2 {
            for m in -2..=2 {
                let c = bracket(&t(n, -2), &t(m, -2), n - m).unwrap();
                assert!(c.max_norm() < 1e-12);
                let c = bracket(&t(n, 0), &t(m, 0), n - m).unwrap();
                assert!(rel_residual(&c, &t(n + m, 0).mat.scale(b(n - m))) < 1e-12);
                let c = bracket(&t(n, -2), &t(m, 0), n - m).unwrap();
                assert!(rel_residual(&c, &t(n + m, -2).mat.scale(b(n))) < 1e-12);
                let c = bracket(&t(n, 0), &t(m, -2), n - m).unwrap();
                assert!(rel_residual(&c, &t(n + m, -2).mat.scale(b(-m))) < 1e-12);
            }
        }
    }

    #[test]
    fn l_general_n0_gives_s0_proportional_to_q2() {
        let n = 5;
        let q = cz_q(n);
        let p = CZParams::new(n, q);
        for sign in Sign::both() {
            let l0 = make_l_general(0, sign, &p).unwrap();
            let s0 = make_s0(sign, &l0);
            let qq = make_q_op(n, q).unwrap().pow(2 * sign.eps()).to_cmatrix();
            assert!(rel_residual(&s0.mat, &qq) < 1e-14);
        }
        // with a± ≠ 0: S0^- = {1 - A_0^- d} Q^{-2}
        let p = CZParams::czhz(n, q).unwrap();
        let d = q_diff(q).unwrap();
        let s0 = make_s0(Sign::Minus, &make_l_general(0, Sign::Minus, &p).unwrap());
        let qq = make_q_op(n, q).unwrap().pow(-2).to_cmatrix();
        let c = 1.0 - p.big_a(0, Sign::Minus) * d;
        assert!(rel_residual(&s0.mat, &qq.scale(c)) < 1e-13);
        assert!(make_l_general(0, Sign::Plus, &CZParams::new(2, q)).is_err());
    }

    #[test]
    fn cz_plus_example() {
        let f = qhcz(7);
        assert!(closure_residual(&f, Sign::Plus, 1, 2).unwrap() < 1e-12);
    }

    #[test]
    fn hlh_identity_at_n0_and_closure_preserved() {
        let n = 6;
        let q = cz_q(n);
        let p = CZParams::czhz(n, q).unwrap();
        let l0 = make_l_general(0, Sign::Plus, &p).unwrap();
        assert_eq!(transform_hlh(&l0).mat, l0.mat);
        let pre = Family::Qhcz { params: p.clone(), hlh: false };
        let post = Family::Qhcz { params: p, hlh: true };
        for s in Sign::both() {
            for (a, b) in [(1, 2), (-1, 3), (2, -2)] {
                assert!(closure_residual(&pre, s, a, b).unwrap() < 1e-12);
                assert!(closure_residual(&post, s, a, b).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_before_and_after_hlh() {
        let n = 6;
        let q = cz_q(n);
        let p = CZParams::czhq2(n, q).unwrap();
        let pre = Family::Qhcz { params: p.clone(), hlh: false };
        let post = Family::Qhcz { params: p, hlh: true };
        for a in -2..=2 {
            for b in -2..=2 {
                assert!(mixing_residual(&pre, a, b, true).unwrap() < 1e-12);
                assert!(mixing_residual(&post, a, b, false).unwrap() < 1e-12);
            }
        }
        // the other pairing fails for some (n, m)
        assert!(mixing_residual(&post, 1, 2, true).unwrap() > 1e-3);
    }

    #[test]
    fn b_nonzero_breaks_mixing() {
        let n = 5;
        let q = cz_q(n);
        let p = CZParams::new(n, q)
            .with_a(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4))
            .with_b(Complex64::new(1.0, 0.0));
        let post = Family::Qhcz { params: p.clone(), hlh: true };
        let pre = Family::Qhcz { params: p, hlh: false };
        let worst = |f: &Family, tilde| {
            let mut w = 0.0f64;
            for a in -2..=2 {
                for b in -2..=2 {
                    w = w.max(mixing_residual(f, a, b, tilde).unwrap());
                }
            }
            w
        };
        assert!(worst(&post, false) > 0.1);
        assert!(worst(&pre, true) > 0.1);
    }

    #[test]
    fn qhcz_matches_named_reps() {
        let n = 7;
        let q = cz_q(n);
        for s in Sign::both() {
            for k in -2..=2 {
                let a = transform_hlh(&make_l_general(k, s, &CZParams::czhq2(n, q).unwrap()).unwrap());
                let b = make_rep(RepKind::Czhq2, k, s, n, q).unwrap();
                assert!(rel_residual(&a.mat, &b.mat) < 1e-13);
                let a = transform_hlh(&make_l_general(k, s, &CZParams::czhz(n, q).unwrap()).unwrap());
                let b = make_rep(RepKind::Czhz, k, s, n, q).unwrap();
                assert!(rel_residual(&a.mat, &b.mat) < 1e-13);
            }
        }
        // CZHQ2 is the k = 2 member of the CZHQk family
        let a = make_rep(RepKind::Czhqk(2), 1, Sign::Minus, n, q).unwrap();
        let b = make_rep(RepKind::Czhq2, 1, Sign::Minus, n, q).unwrap();
        assert!(rel_residual(&a.mat, &b.mat) < 1e-14);
        assert_eq!(a.q, b.q);
    }

    #[test]
    fn czhz_n0_is_diagonal() {
        let q = cz_q(5);
        let l = make_rep(RepKind::Czhz, 0, Sign::Plus, 5, q).unwrap();
        assert!(l.mat.is_diagonal());
        // [Z] diagonal is [j]
        let y = make_y(5, q).unwrap();
        for (j, z) in l.mat.diagonal().iter().enumerate() {
            let jj = j as i64 + 1;
            let expect = y.entry_phase(j).to_complex() * q_bracket(jj, q).unwrap();
            assert!((z - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn rep_families_satisfy_cz_star() {
        for n in [5usize, 6] {
            let q = cz_q(n);
            for kind in [RepKind::Czhq2, RepKind::Czhz, RepKind::Czhqk(1), RepKind::Czhqk(3)] {
                let f = Family::Rep { kind, size: n, q };
                for e in Sign::both() {
                    for h in Sign::both() {
                        for (a, b) in [(1, -2), (2, 3), (-3, 1), (0, 2)] {
                            let r = czcz_residual(&f, e, h, a, b).unwrap();
                            assert!(r < 1e-12, "{kind:?} {e:?}{h:?} ({a},{b}) {r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn czhq1_family() {
        // q^{N/2} = 1 needs q = e^{4πi/N}; ring M = 2N gives q = ω^8
        let n = 6;
        let q = PhaseRing::new(12).unwrap().phase(8);
        let f = Family::Rep { kind: RepKind::Czhq1, size: n, q };
        for s in Sign::both() {
            assert!(closure_residual(&f, s, 1, 2).unwrap() < 1e-12);
        }
        assert!(czcz_residual(&f, Sign::Plus, Sign::Minus, 2, -1).unwrap() < 1e-12);
        assert!(make_rep(RepKind::Czhq1, 1, Sign::Plus, 6, cz_q(6)).is_err());
        assert!(make_rep(RepKind::Czhq1, 1, Sign::Plus, 5, cz_q(5)).is_err());
    }

    #[test]
    fn czhz_primed_relations() {
        let q = cz_q(7);
        let f = Family::Rep { kind: RepKind::Czhz, size: 7, q };
        for a in -2..=2 {
            for b in -2..=2 {
                assert!(primed_mixing_residual(&f, a, b).unwrap() < 1e-12);
                let x = f.primed(a, Sign::Minus).unwrap();
                let y = f.primed(b, Sign::Minus).unwrap();
                let lhs = bracket(&x, &y, a - b).unwrap();
                let rhs = f.primed(a + b, Sign::Minus).unwrap().mat.scale(q_bracket(a - b, q).unwrap());
                assert!(rel_residual(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn center_example() {
        let f = qhcz(5);
        for s in Sign::both() {
            for n in -2..=2 {
                assert!(center_residual(&f, s, n).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn s0_star_commutes() {
        let f = qhcz(5);
        for s in Sign::both() {
            let s0 = make_s0(s, &f.gen(0, s).unwrap());
            for k in 0..3u32 {
                let sk = s0.pow(k);
                for n in -2..=2 {
                    let l = f.gen(n, s).unwrap();
                    assert!(star_bracket(&sk, &l).unwrap().max_norm() < 1e-11);
                }
            }
        }
        let s0 = make_s0(Sign::Plus, &f.gen(0, Sign::Plus).unwrap()).pow(0);
        assert_eq!(s0.mat, CMatrix::identity(5));
    }

    #[test]
    fn trivial_reps() {
        let q = cz_q(6);
        let c = q.ring().phase(3);
        for kind in [
            TrivialKind::PowH(c),
            TrivialKind::QuadQ(1),
            TrivialKind::QuadQ(2),
            TrivialKind::PowY(c),
            TrivialKind::YSquared,
            TrivialKind::XtildeInvSquared,
        ] {
            let g0 = trivial_g(kind, 0, 6, q).unwrap();
            assert!(g0.same_matrix(&MonomialMatrix::identity(6, q.ring())));
            assert!(trivial_semigroup_exact(kind, 1, 1, 6, q).unwrap());
            assert!(trivial_semigroup_exact(kind, -2, 3, 6, q).unwrap());
        }
        // without the q^{cn²} factor the semigroup law fails
        let qop = make_q_op(6, q).unwrap();
        let bare = |n: i64| qop.pow(2 * n).mul(&h_pow(6, q.ring(), n)).unwrap();
        assert!(!bare(1).mul(&bare(1)).unwrap().same_matrix(&bare(2)));

        let other = PhaseRing::new(5).unwrap().phase(1);
        assert!(trivial_g(TrivialKind::PowY(other), 1, 6, q).is_err());

        let f = Family::Trivial {
            plus: TrivialKind::PowY(q.ring().one()),
            minus: TrivialKind::XtildeInvSquared,
            size: 6,
            q,
        };
        for (a, b) in [(1, 2), (-1, 3), (2, 2)] {
            let lp = f.gen(a, Sign::Plus).unwrap();
            let lq = f.gen(b, Sign::Plus).unwrap();
            let lhs = star_bracket(&lp, &lq).unwrap();
            let rhs = f.gen(a + b, Sign::Plus).unwrap().mat.scale(q_bracket(a - b, q).unwrap());
            assert!(rel_residual(&lhs, &rhs) < 1e-12);
            let lp = f.gen(a, Sign::Minus).unwrap();
            let lq = f.gen(b, Sign::Minus).unwrap();
            let lhs = star_bracket(&lp, &lq).unwrap();
            let rhs = f.gen(a + b, Sign::Minus).unwrap().mat.scale(q_bracket(a - b, q).unwrap());
            assert!(rel_residual(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn skew_symmetry() {
        let f = qhcz(7);
        let a = f.gen(2, Sign::Plus).unwrap();
        let b = f.gen(-1, Sign::Plus).unwrap();
        let x = bracket(&a, &b, -3).unwrap();
        let y = bracket(&b, &a, 3).unwrap();
        assert!(rel_residual(&x, &(-&y)) < 1e-13);
    }

    proptest! {
        #[test]
        fn cyclic_identities(n in -2i64..=2, m in -2i64..=2, l in -2i64..=2, size in 5usize..8) {
            let f = qhcz(size);
            for which in [CyclicIdentity::HomJacobi, CyclicIdentity::YangBaxter, CyclicIdentity::Consistency] {
                prop_assert!(cyclic_residual(&f, which, n, m, l).unwrap() < 1e-11);
            }
            let q = f.algebra_q().unwrap();
            let hlj = cyclic_sum(&f, CyclicIdentity::HomJacobi, n, m, l).unwrap();
            let yb = cyclic_sum(&f, CyclicIdentity::YangBaxter, n, m, l).unwrap();
            let hl2 = cyclic_sum(&f, CyclicIdentity::Consistency, n, m, l).unwrap();
            let _ = q;
            prop_assert!(rel_residual(&hlj, &(&yb + &hl2)) < 1e-12);
        }

        #[test]
        fn czcz_all_pairs(size in 5usize..9, n in -3i64..=3, m in -3i64..=3) {
            let f = qhcz(size);
            for e in Sign::both() {
                for h in Sign::both() {
                    prop_assert!(czcz_residual(&f, e, h, n, m).unwrap() < 1e-12);
                }
            }
        }
    }
}
