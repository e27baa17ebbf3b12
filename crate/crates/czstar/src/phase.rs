//! Exact phases in the cyclic group generated by ω = e^{iπ/M}.
//!
//! Every phase used by the crate is an integer power of one primitive root,
//! stored as an exponent modulo 2M. Half-integer powers of a deformation
//! parameter q = ω^s are exact whenever s·x is an integer, which is why rings
//! are usually built with q = ω² (or a higher even power).
//!
//! Floating point only enters through [`Phase::to_complex`] and the q-number
//! helpers such as [`q_bracket`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Floating-point scalar used at evaluation boundaries.
pub type QScalar = Complex64;

/// The group ⟨ω⟩ with ω = e^{iπ/M}, of order 2M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhaseRing {
    m: u32,
}

impl PhaseRing {
    pub fn new(m: i64) -> Result<Self> {
        if m < 1 || m > i64::from(u32::MAX) / 2 {
            return Err(Error::InvalidRing(m));
        }
        Ok(Self { m: m as u32 })
    }

    /// Smallest even M for which every angle a·π (a rational) is a power of ω.
    pub fn for_angles(angles: &[Rational64]) -> Result<Self> {
        let mut m: i64 = 2;
        for a in angles {
            m = m.lcm(a.denom());
        }
        if m % 2 == 1 {
            m *= 2;
        }
        Self::new(m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Order of ω, i.e. 2M.
    pub fn order(&self) -> i64 {
        2 * i64::from(self.m)
    }

    pub fn phase(&self, e: i64) -> Phase {
        Phase {
            e: e.rem_euclid(self.order()),
            m: self.m,
        }
    }

    pub fn one(&self) -> Phase {
        self.phase(0)
    }

    /// The imaginary unit ω^{M/2}; needs M even.
    pub fn i(&self) -> Result<Phase> {
        if !self.m.is_multiple_of(2) {
            return Err(Error::PhaseNotRepresentable(format!(
                "i is not a power of e^(i*pi/{})",
                self.m
            )));
        }
        Ok(self.phase(i64::from(self.m / 2)))
    }

    /// e^{iπa} for rational a.
    pub fn angle(&self, a: Rational64) -> Result<Phase> {
        let e = a * Rational64::from_integer(i64::from(self.m));
        if !e.is_integer() {
            return Err(Error::PhaseNotRepresentable(format!(
                "e^(i*pi*{a}) with M={}",
                self.m
            )));
        }
        Ok(self.phase(e.to_integer()))
    }

    /// Reduce an exponent modulo 2M.
    pub fn reduce(&self, e: i64) -> i64 {
        e.rem_euclid(self.order())
    }
}

/// An exact phase ω^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    e: i64,
    m: u32,
}

impl Phase {
    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn ring(&self) -> PhaseRing {
        PhaseRing { m: self.m }
    }

    pub fn checked_mul(self, other: Phase) -> Result<Phase> {
        if self.m != other.m {
            return Err(Error::RingMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(self.ring().phase(self.e + other.e))
    }

    pub fn inv(self) -> Phase {
        self.ring().phase(-self.e)
    }

    pub fn pow(self, k: i64) -> Phase {
        let r = self.ring();
        r.phase(((self.e as i128 * k as i128).rem_euclid(r.order() as i128)) as i64)
    }

    /// self^x for a half-integer x.
    pub fn pow_half(self, x: HalfInt) -> Result<Phase> {
        let twice = self.e as i128 * x.doubled() as i128;
        if twice % 2 != 0 {
            return Err(Error::PhaseNotRepresentable(format!(
                "(w^{})^({x}) with M={}",
                self.e, self.m
            )));
        }
        let r = self.ring();
        Ok(r.phase(((twice / 2).rem_euclid(r.order() as i128)) as i64))
    }

    /// self^r for a rational r, taken on the stored exponent in [0, 2M).
    pub fn pow_rational(self, r: Rational64) -> Result<Phase> {
        let num = self.e as i128 * *r.numer() as i128;
        let den = *r.denom() as i128;
        if num % den != 0 {
            return Err(Error::PhaseNotRepresentable(format!(
                "(w^{})^({r}) with M={}",
                self.e, self.m
            )));
        }
        let r2 = self.ring();
        Ok(r2.phase(((num / den).rem_euclid(r2.order() as i128)) as i64))
    }

    /// Principal square root; needs an even exponent.
    pub fn sqrt(self) -> Result<Phase> {
        if self.e % 2 != 0 {
            return Err(Error::PhaseNotRepresentable(format!(
                "sqrt(w^{}) with M={}",
                self.e, self.m
            )));
        }
        Ok(self.ring().phase(self.e / 2))
    }

    pub fn is_one(&self) -> bool {
        self.e == 0
    }

    pub fn to_complex(self) -> QScalar {
        // symmetric representative so that conj(ω^e) == ω^{-e} bit for bit
        let o = self.ring().order();
        let sym = if 2 * self.e > o { self.e - o } else { self.e };
        let theta = std::f64::consts::PI * sym as f64 / f64::from(self.m);
        if self.e == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if 2 * self.e == o {
            return Complex64::new(-1.0, 0.0);
        }
        if 4 * self.e == o {
            return Complex64::new(0.0, 1.0);
        }
        if 4 * self.e == 3 * o {
            return Complex64::new(0.0, -1.0);
        }
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl Mul for Phase {
    type Output = Phase;

    /// Panics on ring mismatch; use [`Phase::checked_mul`] for a fallible form.
    fn mul(self, rhs: Phase) -> Phase {
        self.checked_mul(rhs).expect("phase ring mismatch")
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(i*pi*{}/{})", self.e, self.m)
    }
}

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn from_doubled(d: i64) -> Self {
        HalfInt(d)
    }

    pub fn doubled(&self) -> i64 {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value, if there is one.
    pub fn as_int(&self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_rational(self) -> Rational64 {
        Rational64::new(self.0, 2)
    }

    pub fn try_from_rational(r: Rational64) -> Result<Self> {
        let d = r * Rational64::from_integer(2);
        if !d.is_integer() {
            return Err(Error::PhaseNotRepresentable(format!(
                "{r} is not a half-integer"
            )));
        }
        Ok(HalfInt(d.to_integer()))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::int(n)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_f64(self.to_f64()),
        }
    }
}

/// Magnetic flux φ = P/Q per plaquette in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FluxRatio {
    pub p: i64,
    pub q: i64,
}

impl FluxRatio {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidFlux(q));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NonCoprimeFlux { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn phi(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn as_rational(&self) -> Rational64 {
        Rational64::new(self.p, self.q)
    }
}

impl fmt::Display for FluxRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// ω^e as a complex number.
pub fn phase_to_complex(p: Phase) -> QScalar {
    p.to_complex()
}

fn check_nondegenerate(q: Phase) -> Result<()> {
    // q - q^{-1} = 0 exactly when q^2 = 1
    if q.pow(2).is_one() {
        return Err(Error::DegenerateQ);
    }
    Ok(())
}

/// q - q^{-1}.
pub fn q_diff(q: Phase) -> Result<QScalar> {
    check_nondegenerate(q)?;
    Ok(q.to_complex() - q.inv().to_complex())
}

/// [n] = (q^n - q^{-n})/(q - q^{-1}).
pub fn q_bracket(n: i64, q: Phase) -> Result<QScalar> {
    q_bracket_half(HalfInt::int(n), q)
}

/// [x] for a half-integer x, when q^x is exact.
pub fn q_bracket_half(x: HalfInt, q: Phase) -> Result<QScalar> {
    let d = q_diff(q)?;
    if x == HalfInt::ZERO {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let qx = q.pow_half(x)?;
    Ok((qx.to_complex() - qx.inv().to_complex()) / d)
}

/// [n]_k = [n] evaluated at q^k.
pub fn q_bracket_family(n: i64, q: Phase, k: i64) -> Result<QScalar> {
    q_bracket(n, q.pow(k))
}
