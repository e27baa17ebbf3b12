//! Weyl clock and shift matrices.
//!
//! Words in X and Y are kept exact as [`MonomialMatrix`] values (one nonzero
//! per row, phases as ring exponents). Sums such as Hamiltonians and CZ
//! generators live in the dense [`CMatrix`].

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::{HalfInt, Phase, PhaseRing, QScalar};

/// Generalised permutation matrix: entry (j, k) = ω^{scale + rowphase[j]} when
/// j ≡ k + shift (mod N).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    ring: PhaseRing,
    n: usize,
    shift: usize,
    rowphase: Vec<i64>,
    scale: i64,
}

impl MonomialMatrix {
    pub fn identity(n: usize, ring: PhaseRing) -> Self {
        Self {
            ring,
            n,
            shift: 0,
            rowphase: vec![0; n],
            scale: 0,
        }
    }

    pub fn from_parts(ring: PhaseRing, shift: i64, rowphase: Vec<i64>, scale: i64) -> Self {
        let n = rowphase.len();
        Self {
            ring,
            n,
            shift: shift.rem_euclid(n as i64) as usize,
            rowphase: rowphase.into_iter().map(|e| ring.reduce(e)).collect(),
            scale: ring.reduce(scale),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn ring(&self) -> PhaseRing {
        self.ring
    }

    pub fn scale(&self) -> Phase {
        self.ring.phase(self.scale)
    }

    /// Total phase of the nonzero entry in row j.
    pub fn entry_phase(&self, row: usize) -> Phase {
        self.ring.phase(self.scale + self.rowphase[row])
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.m(),
                right: other.ring.m(),
            });
        }
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.n;
        let rowphase = (0..n)
            .map(|j| {
                let k = (j + n - self.shift) % n;
                self.ring.reduce(self.rowphase[j] + other.rowphase[k])
            })
            .collect();
        Ok(Self {
            ring: self.ring,
            n,
            shift: (self.shift + other.shift) % n,
            rowphase,
            scale: self.ring.reduce(self.scale + other.scale),
        })
    }

    /// Inverse, which for a monomial matrix with unit phases is the adjoint.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let rowphase = (0..n)
            .map(|j| self.ring.reduce(-self.rowphase[(j + self.shift) % n]))
            .collect();
        Self {
            ring: self.ring,
            n,
            shift: (n - self.shift) % n,
            rowphase,
            scale: self.ring.reduce(-self.scale),
        }
    }

    pub fn dagger(&self) -> Self {
        self.inverse()
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.n, self.ring);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).expect("same ring");
            }
            b = b.mul(&b).expect("same ring");
            e >>= 1;
        }
        acc
    }

    pub fn scaled(&self, c: Phase) -> Result<Self> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.m(),
                right: c.ring().m(),
            });
        }
        let mut out = self.clone();
        out.scale = self.ring.reduce(self.scale + c.exponent());
        Ok(out)
    }

    /// Exponent-level equality of the represented matrices.
    pub fn same_matrix(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.n == other.n
            && self.shift == other.shift
            && (0..self.n).all(|j| self.entry_phase(j) == other.entry_phase(j))
    }

    /// If `other = c·self` for a single phase c, return c.
    pub fn ratio_to(&self, other: &Self) -> Option<Phase> {
        if self.ring != other.ring || self.n != other.n || self.shift != other.shift {
            return None;
        }
        let c = other.entry_phase(0) * self.entry_phase(0).inv();
        (0..self.n)
            .all(|j| other.entry_phase(j) == c * self.entry_phase(j))
            .then_some(c)
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        let n = self.n;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            let k = (j + n - self.shift) % n;
            m[(j, k)] = self.entry_phase(j).to_complex();
        }
        CMatrix(m)
    }

    pub fn apply(&self, v: &[QScalar]) -> Vec<QScalar> {
        let n = self.n;
        (0..n)
            .map(|j| self.entry_phase(j).to_complex() * v[(j + n - self.shift) % n])
            .collect()
    }
}

/// Shift matrix X with (X)_{jk} = δ_{j,k+1} mod N.
pub fn make_x(n: usize, ring: PhaseRing) -> Result<MonomialMatrix> {
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    Ok(MonomialMatrix::from_parts(ring, 1, vec![0; n], 0))
}

/// Clock matrix Y = diag(q, q², …, q^N).
pub fn make_y(n: usize, q: Phase) -> Result<MonomialMatrix> {
    if n < 1 {
        return Err(Error::SizeTooSmall(n));
    }
    let s = q.exponent();
    let rowphase = (0..n as i64).map(|j| s * (j + 1)).collect();
    Ok(MonomialMatrix::from_parts(q.ring(), 0, rowphase, 0))
}

/// X̃ = i X q^{-1/2}.
pub fn make_xtilde(n: usize, q: Phase) -> Result<MonomialMatrix> {
    let ring = q.ring();
    let c = ring.i()? * q.sqrt()?.inv();
    make_x(n, ring)?.scaled(c)
}

/// Does Y^m X^n = q^{mn} X^n Y^m hold at exponent level?
pub fn weyl_exchange_check(size: usize, q: Phase, m: i64, n: i64) -> Result<bool> {
    let x = make_x(size, q.ring())?;
    let y = make_y(size, q)?;
    let lhs = y.pow(m).mul(&x.pow(n))?;
    let rhs = x.pow(n).mul(&y.pow(m))?.scaled(q.pow(m * n))?;
    Ok(lhs.same_matrix(&rhs))
}

/// Dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(pub DMatrix<Complex64>);

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        CMatrix(DMatrix::from_fn(n, n, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix(&self.0 * c)
    }

    pub fn dagger(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Ok(CMatrix(&self.0 * &other.0))
    }

    pub fn same_size(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::SizeMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|k| j == k || self.0[(j, k)] == Complex64::new(0.0, 0.0)))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|j| self.0[(j, j)]).collect()
    }

    /// Max-norm of H - H†.
    pub fn hermiticity_defect(&self) -> f64 {
        CMatrix(&self.0 - self.0.adjoint()).max_norm()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = CMatrix::identity(self.dim());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl From<&MonomialMatrix> for CMatrix {
    fn from(m: &MonomialMatrix) -> Self {
        m.to_cmatrix()
    }
}

impl From<MonomialMatrix> for CMatrix {
    fn from(m: MonomialMatrix) -> Self {
        m.to_cmatrix()
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: Complex64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

/// max|a-b| / max(1, max|a|, max|b|).
pub fn rel_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = CMatrix(&a.0 - &b.0).max_norm();
    diff / 1f64.max(a.max_norm()).max(b.max_norm())
}

/// [A, B]_(x,y) = q^x AB - q^y BA.
pub fn deformed_commutator(
    a: &CMatrix,
    b: &CMatrix,
    x: HalfInt,
    y: HalfInt,
    q: Phase,
) -> Result<CMatrix> {
    a.same_size(b)?;
    let qx = q.pow_half(x)?.to_complex();
    let qy = q.pow_half(y)?.to_complex();
    Ok(CMatrix(&a.0 * &b.0 * qx - &b.0 * &a.0 * qy))
}

/// [A, B]_(x) = q^x AB - q^{-x} BA.
pub fn q_commutator(a: &CMatrix, b: &CMatrix, x: HalfInt, q: Phase) -> Result<CMatrix> {
    deformed_commutator(a, b, x, -x, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring_for(n: usize) -> (PhaseRing, Phase) {
        // q = e^{2πi/N} = ω² with M = N
        let r = PhaseRing::new(n as i64).unwrap();
        (r, r.phase(2))
    }

    #[test]
    fn x_has_order_n() {
        let (r, _) = ring_for(3);
        let x = make_x(3, r).unwrap();
        assert!(x.pow(3).same_matrix(&MonomialMatrix::identity(3, r)));
        assert!(make_x(1, r).is_err());
    }

    #[test]
    fn x_transpose_is_inverse() {
        let (r, _) = ring_for(4);
        let x = make_x(4, r).unwrap();
        let d = x.to_cmatrix();
        let t = CMatrix(d.0.transpose());
        assert_eq!(&t * &d, CMatrix::identity(4));
        assert!(x.inverse().to_cmatrix() == t);
    }

    #[test]
    fn x_shifts_coordinates() {
        let (r, _) = ring_for(5);
        let x = make_x(5, r).unwrap();
        let psi: Vec<Complex64> = (0..5).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let out = x.apply(&psi);
        for j in 0..5 {
            assert_eq!(out[j], psi[(j + 4) % 5]);
        }
    }

    #[test]
    fn y_entries() {
        let r = PhaseRing::new(2).unwrap();
        let y = make_y(4, r.phase(1)).unwrap().to_cmatrix();
        let expect = [
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(y.is_diagonal());
        assert_eq!(y.diagonal(), expect);
    }

    #[test]
    fn y_has_order_n_and_exchange() {
        let (r, q) = ring_for(3);
        let y = make_y(3, q).unwrap();
        assert!(y.pow(3).same_matrix(&MonomialMatrix::identity(3, r)));
        let (r5, q5) = ring_for(5);
        let x = make_x(5, r5).unwrap();
        let y = make_y(5, q5).unwrap();
        let yx = y.mul(&x).unwrap();
        let qxy = x.mul(&y).unwrap().scaled(q5).unwrap();
        assert!(yx.same_matrix(&qxy));
    }

    #[test]
    fn exchange_examples() {
        let (_, q) = ring_for(5);
        for n in 0..5 {
            assert!(weyl_exchange_check(5, q, 0, n).unwrap());
        }
        assert!(weyl_exchange_check(5, q, 2, 3).unwrap());
        assert!(weyl_exchange_check(5, q, 5, 1).unwrap());
        // dense oracle for m=2, n=3
        let x = make_x(5, q.ring()).unwrap().to_cmatrix();
        let y = make_y(5, q).unwrap().to_cmatrix();
        let lhs = &y.pow(2) * &x.pow(3);
        let rhs = (&x.pow(3) * &y.pow(2)).scale(q.pow(6).to_complex());
        assert!(rel_residual(&lhs, &rhs) < 1e-13);
    }

    #[test]
    fn exchange_fails_for_wrong_phase() {
        let (_, q) = ring_for(6);
        let x = make_x(6, q.ring()).unwrap();
        let y = make_y(6, q).unwrap();
        let lhs = y.mul(&x).unwrap();
        let wrong = x.mul(&y).unwrap().scaled(q.pow(2)).unwrap();
        assert!(!lhs.same_matrix(&wrong));
    }

    #[test]
    fn commutator_basics() {
        let (_, q) = ring_for(5);
        let x = make_x(5, q.ring()).unwrap().to_cmatrix();
        let y = make_y(5, q).unwrap().to_cmatrix();
        let c = deformed_commutator(&x, &y, HalfInt::ZERO, HalfInt::ZERO, q).unwrap();
        assert!(rel_residual(&c, &(&(&x * &y) - &(&y * &x))) < 1e-15);
        let z = q_commutator(&x, &x, HalfInt::ZERO, q).unwrap();
        assert!(z.max_norm() < 1e-15);
        let a = q_commutator(&x, &y, HalfInt::int(2), q).unwrap();
        let b = q_commutator(&y, &x, HalfInt::int(-2), q).unwrap();
        assert!(rel_residual(&a, &(-&b)) < 1e-13);
        assert!(q_commutator(&x, &CMatrix::zeros(4), HalfInt::ZERO, q).is_err());
    }

    #[test]
    fn xtilde_relations() {
        // N = 6, q = e^{2πi/6}; ring M = 12 gives q = ω⁴ and q^{1/2} = ω²
        let r = PhaseRing::new(12).unwrap();
        let q = r.phase(4);
        let x = make_x(6, r).unwrap();
        let xt = make_xtilde(6, q).unwrap();
        // -X^{-2} q = X̃^{-2}
        let lhs = xt.pow(-2);
        let rhs = x.pow(-2).scaled(r.phase(12) * q).unwrap();
        assert!(lhs.same_matrix(&rhs));
        assert!(xt.pow(12).ratio_to(&MonomialMatrix::identity(6, r)).is_some());
        assert!(make_xtilde(6, r.phase(1)).is_err());
    }

    #[test]
    fn dagger_involution() {
        let (_, q) = ring_for(7);
        let w = make_x(7, q.ring()).unwrap().pow(3).mul(&make_y(7, q).unwrap().pow(-2)).unwrap();
        assert_eq!(w.dagger().dagger(), w);
        assert!(rel_residual(&CMatrix::from(w.dagger()), &w.to_cmatrix().dagger()) < 1e-15);
    }

    proptest! {
        #[test]
        fn monomial_closure(n in 2usize..10, a in -12i64..12, b in -12i64..12, c in -12i64..12, d in -12i64..12) {
            let r = PhaseRing::new(n as i64).unwrap();
            let q = r.phase(2);
            let x = make_x(n, r).unwrap();
            let y = make_y(n, q).unwrap();
            let u = x.pow(a).mul(&y.pow(b)).unwrap();
            let v = y.pow(c).mul(&x.pow(d)).unwrap();
            let exact = u.mul(&v).unwrap().to_cmatrix();
            let dense = &u.to_cmatrix() * &v.to_cmatrix();
            prop_assert!(rel_residual(&exact, &dense) < 1e-13);
            prop_assert!(x.pow(n as i64).same_matrix(&MonomialMatrix::identity(n, r)));
            prop_assert!(y.pow(n as i64).same_matrix(&MonomialMatrix::identity(n, r)));
        }

        #[test]
        fn bracket_splitting(n in 3usize..8, nn in -3i64..4, m in -3i64..4, l in -3i64..4) {
            // (q^n + q^{-n}) [A,B]_(m+l-n) = [A,B]_(m+l) + [A,B]_(m+l-2n)
            let r = PhaseRing::new(n as i64).unwrap();
            let q = r.phase(2);
            let a = make_x(n, r).unwrap().pow(nn).to_cmatrix();
            let b = &make_y(n, q).unwrap().to_cmatrix() + &make_x(n, r).unwrap().pow(m - l).to_cmatrix();
            let c = q.pow(nn).to_complex() + q.pow(-nn).to_complex();
            let lhs = q_commutator(&a, &b, HalfInt::int(m + l - nn), q).unwrap().scale(c);
            let rhs = &q_commutator(&a, &b, HalfInt::int(m + l), q).unwrap()
                + &q_commutator(&a, &b, HalfInt::int(m + l - 2 * nn), q).unwrap();
            prop_assert!(rel_residual(&lhs, &rhs) < 1e-12);
        }
    }
}
