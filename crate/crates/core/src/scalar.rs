//! Scalars for the two arithmetic backends and the lattice base `s = q^{1/2}`.
//!
//! Everything downstream is generic over [`Scalar`]. The exact backend is
//! [`Rational`] (arbitrary precision, no rounding); the float backend is
//! [`Float`], a double-precision complex number compared with a tolerance.
//!
//! The q-constants are all Laurent polynomials in `s`:
//!
//!   alpha_n = (s^n + s^-n) / 2,    gamma_n = (s^n - s^-n) / (s - 1/s)
//!
//! so a rational `s` keeps the exact backend closed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Float = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// Field element used by every algorithm in the crate.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Division that reports a zero divisor instead of panicking or producing NaN.
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    /// Integer power; negative exponents invert. The base must be nonzero when `n < 0`.
    fn powi(&self, n: i64) -> Self;

    /// Absolute value as a double, used for scaling tolerances.
    fn magnitude(&self) -> f64;

    /// Equality under the backend's comparison rule: exact equality, or
    /// `|a - b| <= tol * max(1, |a|, |b|)` in the float backend.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// Zero test relative to `scale`, the magnitude of the terms that produced `self`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    fn parse_text(text: &str) -> Result<Self>;

    fn to_text(&self) -> String;

    /// True when the value is a real number below zero (used by printers).
    fn is_negative(&self) -> bool;
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            Pow::pow(self, n as u64)
        } else {
            assert!(!self.is_zero(), "negative power of zero");
            Pow::pow(self.recip(), n.unsigned_abs())
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn parse_text(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn powi(&self, n: i64) -> Self {
        let n = i32::try_from(n).expect("exponent out of range");
        Complex64::powi(self, n)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= tol * scale
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.is_zero() || self.norm() <= tol * scale
    }

    fn parse_text(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Ok(r) = parse_rational(t) {
            return Ok(Self::from_rational(&r));
        }
        t.parse::<f64>()
            .map(|v| Complex64::new(v, 0.0))
            .map_err(|_| Error::NumberParse(text.to_string()))
    }

    fn to_text(&self) -> String {
        // adding 0.0 turns -0 into +0
        let re = self.re + 0.0;
        if self.im == 0.0 {
            format!("{re}")
        } else {
            format!("{re}{:+}i", self.im)
        }
    }

    fn is_negative(&self) -> bool {
        self.im == 0.0 && self.re < 0.0
    }
}

/// Converts a rational to the nearest double, also for numerators and
/// denominators beyond the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both parts into range; the quotient keeps ~53 significant bits.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000) as usize;
    let n: BigInt = r.numer() >> shift;
    let d: BigInt = r.denom() >> shift;
    n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
}

/// Parses `p/q`, an integer, or a decimal such as `-0.25` or `1.5e-3` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::NumberParse(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(t).ok_or_else(bad)
}

/// Exact value of a decimal literal with optional sign and exponent.
pub fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    value *= ten.powi(scale);
    Some(if negative { -value } else { value })
}

/// Renders a rational whose denominator divides a power of ten as a decimal.
/// Returns `None` for other rationals.
pub fn rational_to_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives) as usize;
    let scaled = r * Rational::from_integer(Pow::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if Signed::is_negative(r) { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int_part}.{frac_part}"))
}

/// The lattice base, stored as `s = q^{1/2}` with `0 < s < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam<S> {
    s: S,
    tol: f64,
}

impl QParam<Rational> {
    pub fn exact(s: Rational) -> Result<Self> {
        if !Signed::is_positive(&s) || s >= Rational::one() {
            return Err(Error::InvalidBase(format!("q^(1/2) = {s} is not in (0, 1)")));
        }
        Ok(Self { s, tol: 0.0 })
    }

    pub fn exact_from_text(text: &str) -> Result<Self> {
        Self::exact(parse_rational(text)?)
    }

    /// The same lattice in the float backend.
    pub fn to_float(&self, tol: f64) -> Result<QParam<Float>> {
        QParam::float(rational_to_f64(&self.s), tol)
    }
}

impl QParam<Float> {
    pub fn float(s: f64, tol: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidBase(format!("q^(1/2) = {s} is not in (0, 1)")));
        }
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::InvalidBase(format!("tolerance {tol} is not nonnegative")));
        }
        Ok(Self { s: Complex64::new(s, 0.0), tol })
    }

    /// Builds the lattice from `q` itself; `s` is its positive square root.
    pub fn float_from_q(q: f64, tol: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidBase(format!("q = {q} is not in (0, 1)")));
        }
        Self::float(q.sqrt(), tol)
    }
}

impl<S: Scalar> QParam<S> {
    pub fn s(&self) -> &S {
        &self.s
    }

    pub fn q(&self) -> S {
        self.s.clone() * self.s.clone()
    }

    /// `q^k = s^{2k}`.
    pub fn q_pow(&self, k: i64) -> S {
        self.s.powi(2 * k)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn alpha(&self) -> S {
        self.alpha_n(1)
    }

    pub fn alpha_n(&self, n: i64) -> S {
        (self.s.powi(n) + self.s.powi(-n)) / S::from_i64(2)
    }

    pub fn gamma_n(&self, n: i64) -> S {
        let den = self.s.clone() - self.s.powi(-1);
        (self.s.powi(n) - self.s.powi(-n)) / den
    }

    /// Backend comparison at this lattice's tolerance.
    pub fn same(&self, a: &S, b: &S) -> bool {
        a.approx_eq(b, self.tol)
    }

    pub fn negligible(&self, value: &S, scale: f64) -> bool {
        value.is_negligible(scale, self.tol)
    }
}

pub fn alpha_n<S: Scalar>(p: &QParam<S>, n: i64) -> S {
    p.alpha_n(n)
}

pub fn gamma_n<S: Scalar>(p: &QParam<S>, n: i64) -> S {
    p.gamma_n(n)
}
