//! Exact scalar arithmetic: arbitrary-precision rationals, the quadratic
//! extension Q(w) by a primitive cube root of unity w (w^2 = -1 - w), and
//! double-precision complex approximations for the numeric layer.
//!
//! Exact and numeric layers never mix implicitly; conversion is always an
//! explicit call ([`rat_to_f64`], [`EisRat::to_complex`]).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// Double-precision complex number for the numeric verification layer.
pub type CplxApprox = num_complex::Complex64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Builds the canonical reduced rational `num/den`.
pub fn normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat, ScalarError> {
    let den = den.into();
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator);
    }
    Ok(Rat::new(num.into(), den))
}

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for integer rationals.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat, ScalarError> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| ScalarError::Parse(s.to_string()))
}

/// Textual form "p/q", or "p" when the denominator is 1.
pub fn rat_str(r: &Rat) -> String {
    r.to_string()
}

/// Converts a rational to the nearest f64, robust to operands whose numerator
/// and denominator individually overflow the f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let numer = r.numer();
    let denom = r.denom();
    let nb = numer.bits() as i64;
    let db = denom.bits() as i64;
    // Keep at most ~900 bits on each side so BigInt::to_f64 stays finite.
    let sn = (nb - 900).max(0) as u64;
    let sd = (db - 900).max(0) as u64;
    let nf = (numer >> sn).to_f64().unwrap_or(f64::NAN);
    let df = (denom >> sd).to_f64().unwrap_or(f64::NAN);
    let mut v = nf / df;
    let mut shift = sn as i64 - sd as i64;
    while shift > 0 {
        let step = shift.min(512);
        v *= 2f64.powi(step as i32);
        shift -= step;
    }
    while shift < 0 {
        let step = (-shift).min(512);
        v /= 2f64.powi(step as i32);
        shift += step;
    }
    v
}

/// Commutative ring containing the rationals. Everything the symbolic layer
/// computes with (rationals, Q(w), polynomial coefficient rings) implements
/// this.
pub trait Ring:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&rat_int(n))
    }
}

/// Ring with exact division by nonzero elements.
pub trait Field: Ring + Div<Output = Self> {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Ring for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rat::one() / self)
        }
    }
}

impl Ring for CplxApprox {
    fn from_rat(r: &Rat) -> Self {
        CplxApprox::new(rat_to_f64(r), 0.0)
    }
}

impl Field for CplxApprox {
    fn inv(&self) -> Option<Self> {
        if self.norm_sqr() == 0.0 {
            None
        } else {
            Some(CplxApprox::one() / self)
        }
    }
}

/// Element a + b*w of Q(w), w a primitive cube root of unity, w^2 = -1 - w.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EisRat {
    pub a: Rat,
    pub b: Rat,
}

impl EisRat {
    pub fn new(a: Rat, b: Rat) -> Self {
        EisRat { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        EisRat::new(rat_int(n), Rat::zero())
    }

    /// The generator w itself.
    pub fn omega() -> Self {
        EisRat::new(Rat::zero(), Rat::one())
    }

    pub fn is_real(&self) -> bool {
        self.b.is_zero()
    }

    /// Conjugate a + b*w^2 = (a - b) - b*w.
    pub fn conj(&self) -> Self {
        EisRat::new(&self.a - &self.b, -self.b.clone())
    }

    /// Field norm a^2 - ab + b^2; positive for nonzero elements.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(EisRat::new(c.a / &n, c.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * rhs.checked_inv()?)
    }

    /// Evaluates with w = (-1 + i*sqrt(3))/2.
    pub fn to_complex(&self) -> CplxApprox {
        let w = CplxApprox::new(-0.5, 3f64.sqrt() / 2.0);
        CplxApprox::new(rat_to_f64(&self.a), 0.0) + w * rat_to_f64(&self.b)
    }
}

impl From<Rat> for EisRat {
    fn from(r: Rat) -> Self {
        EisRat::new(r, Rat::zero())
    }
}

impl fmt::Display for EisRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*w", self.a, -self.b.clone())
        } else {
            write!(f, "{} + {}*w", self.a, self.b)
        }
    }
}

impl Add for EisRat {
    type Output = EisRat;
    fn add(self, rhs: EisRat) -> EisRat {
        EisRat::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for EisRat {
    type Output = EisRat;
    fn sub(self, rhs: EisRat) -> EisRat {
        EisRat::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for EisRat {
    type Output = EisRat;
    fn neg(self) -> EisRat {
        EisRat::new(-self.a, -self.b)
    }
}

impl Mul for EisRat {
    type Output = EisRat;
    // (a1 + b1 w)(a2 + b2 w) with w^2 = -1 - w.
    fn mul(self, rhs: EisRat) -> EisRat {
        let bb = &self.b * &rhs.b;
        EisRat::new(
            &self.a * &rhs.a - &bb,
            &self.a * &rhs.b + &self.b * &rhs.a - bb,
        )
    }
}

impl Div for EisRat {
    type Output = EisRat;
    fn div(self, rhs: EisRat) -> EisRat {
        self.checked_div(&rhs).expect("EisRat division by zero")
    }
}

impl Zero for EisRat {
    fn zero() -> Self {
        EisRat::new(Rat::zero(), Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for EisRat {
    fn one() -> Self {
        EisRat::new(Rat::one(), Rat::zero())
    }
}

impl Ring for EisRat {
    fn from_rat(r: &Rat) -> Self {
        EisRat::new(r.clone(), Rat::zero())
    }
}

impl Field for EisRat {
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

impl Serialize for EisRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EisRat", 2)?;
        st.serialize_field("a", &rat_str(&self.a))?;
        st.serialize_field("b", &rat_str(&self.b))?;
        st.end()
    }
}

/// serde adapter serializing a `Rat` in its "p/q" text form.
pub mod serde_rat {
    use super::{rat_str, Rat};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_str(r))
    }
}
