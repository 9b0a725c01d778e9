//! Polynomials in `x`, their symmetric Laurent form in `z` (with
//! `x = (z + 1/z)/2`), and the Askey-Wilson divided-difference operator
//! together with its averaging companion.
//!
//! With `f̆(z) = f((z + 1/z)/2)` and `s = q^{1/2}`:
//!
//!   D_q f = (f̆(s z) - f̆(z/s)) / (ĕ(s z) - ĕ(z/s))
//!   S_q f = (f̆(s z) + f̆(z/s)) / 2
//!
//! where `ĕ(s z) - ĕ(z/s) = (s - 1/s)(z - 1/z)/2`. Both operators are applied
//! to the Laurent form and the quotient by `z - 1/z` is an exact division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Backend, QParam, Scalar};

// ---------------------------------------------------------------------------
// XPoly
// ---------------------------------------------------------------------------

/// Dense polynomial in `x`; `coeffs[k]` multiplies `x^k`. Trailing zeros are
/// always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct XPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> XPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = S::one();
        Self { coeffs }
    }

    /// `x - root`.
    pub fn linear(root: S) -> Self {
        Self::new(vec![-root, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(S::one()), |acc, _| &acc * self)
    }

    /// Coefficient strings, lowest degree first.
    pub fn to_json_coeffs(&self) -> Vec<String> {
        self.coeffs.iter().map(Scalar::to_text).collect()
    }

    /// Human-readable form such as `3/4*x^2 - 3/8`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Approximate equality of every coefficient under the backend rule.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k).approx_eq(&other.coeff(k), tol))
    }
}

impl<S: Scalar> fmt::Display for XPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let mut text = magnitude.to_text();
            if text.contains('i') {
                text = format!("({text})");
            }
            let power = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            match (k, magnitude.is_one()) {
                (0, _) => f.write_str(&text)?,
                (_, true) => f.write_str(&power)?,
                _ => write!(f, "{text}*{power}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &XPoly<S> {
    type Output = XPoly<S>;

    fn add(self, rhs: Self) -> XPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &XPoly<S> {
    type Output = XPoly<S>;

    fn sub(self, rhs: Self) -> XPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &XPoly<S> {
    type Output = XPoly<S>;

    fn mul(self, rhs: Self) -> XPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        XPoly::new(out)
    }
}

impl<S: Scalar> Neg for &XPoly<S> {
    type Output = XPoly<S>;

    fn neg(self) -> XPoly<S> {
        XPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

// ---------------------------------------------------------------------------
// ZSym
// ---------------------------------------------------------------------------

/// Symmetric Laurent polynomial in the basis `zeta_k = (z^k + z^-k)/2`,
/// `zeta_0 = 1`, i.e. the Chebyshev-T basis in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSym<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> ZSym<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// The single basis element `zeta_k`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = S::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Chebyshev polynomial of the first kind, `T_k(x)`; equals `zeta_k` in `x`.
pub fn chebyshev_t<S: Scalar>(k: usize) -> XPoly<S> {
    chebyshev(k, XPoly::x())
}

/// Chebyshev polynomial of the second kind, `U_k(x) = (z^{k+1} - z^{-k-1})/(z - 1/z)`.
pub fn chebyshev_u<S: Scalar>(k: usize) -> XPoly<S> {
    chebyshev(k, XPoly::x().scale(&S::from_i64(2)))
}

fn chebyshev<S: Scalar>(k: usize, first: XPoly<S>) -> XPoly<S> {
    let two_x = XPoly::x().scale(&S::from_i64(2));
    let mut prev = XPoly::constant(S::one());
    if k == 0 {
        return prev;
    }
    let mut cur = first;
    for _ in 1..k {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn to_zsym<S: Scalar>(p: &XPoly<S>) -> ZSym<S> {
    Laurent::from_xpoly(p).to_zsym()
}

pub fn to_xpoly<S: Scalar>(p: &ZSym<S>) -> XPoly<S> {
    let two_x = XPoly::x().scale(&S::from_i64(2));
    let mut out = XPoly::zero();
    let mut prev = XPoly::constant(S::one());
    let mut cur = XPoly::x();
    for (k, c) in p.coeffs.iter().enumerate() {
        let t_k = match k {
            0 => prev.clone(),
            1 => cur.clone(),
            _ => {
                let next = &(&two_x * &cur) - &prev;
                prev = std::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        if !c.is_zero() {
            out = &out + &t_k.scale(c);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// The Askey-Wilson divided-difference operator `D_q`.
pub fn dq_apply<S: Scalar>(p: &XPoly<S>, qp: &QParam<S>) -> XPoly<S> {
    let s = qp.s().clone();
    let inv = s.powi(-1);
    let breve = Laurent::from_xpoly(p);
    let numerator = &breve.dilate(&s) - &breve.dilate(&inv);
    let (quotient, remainder) = numerator.div_z_minus_inv_z();
    if S::BACKEND == Backend::Exact {
        assert!(
            remainder.is_zero(),
            "antisymmetric numerator left a remainder on division by z - 1/z"
        );
    }
    let factor = S::from_i64(2) / (s - inv);
    to_xpoly(&quotient.scale(&factor).to_zsym())
}

/// The averaging operator `S_q`.
pub fn sq_apply<S: Scalar>(p: &XPoly<S>, qp: &QParam<S>) -> XPoly<S> {
    let s = qp.s().clone();
    let breve = Laurent::from_xpoly(p);
    let sum = &breve.dilate(&s) + &breve.dilate(&s.powi(-1));
    to_xpoly(&sum.scale(&S::from_ratio(1, 2)).to_zsym())
}

// ---------------------------------------------------------------------------
// Laurent
// ---------------------------------------------------------------------------

/// Dense Laurent polynomial `sum_j coeffs[j] z^(low + j)`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Laurent<S> {
    low: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> Laurent<S> {
    fn new(mut low: i64, mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        low += lead as i64;
        if coeffs.is_empty() {
            low = 0;
        }
        Self { low, coeffs }
    }

    fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    fn coeff(&self, j: i64) -> S {
        let i = j - self.low;
        if i < 0 {
            return S::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(S::zero)
    }

    /// `p̆(z) = p((z + 1/z)/2)` by Horner's rule.
    fn from_xpoly(p: &XPoly<S>) -> Self {
        let half = S::from_ratio(1, 2);
        let x = Laurent::new(-1, vec![half.clone(), S::zero(), half]);
        p.coeffs().iter().rev().fold(Laurent::zero(), |acc, c| {
            &(&acc * &x) + &Laurent::new(0, vec![c.clone()])
        })
    }

    fn scale(&self, c: &S) -> Self {
        Laurent::new(self.low, self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `z -> lambda z`.
    fn dilate(&self, lambda: &S) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * lambda.powi(self.low + i as i64))
            .collect();
        Laurent::new(self.low, coeffs)
    }

    /// Quotient and remainder of division by `z - 1/z = z^-1 (z^2 - 1)`.
    fn div_z_minus_inv_z(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Laurent::zero(), Laurent::zero());
        }
        // self / (z - 1/z) = z^(low + 1) * P(z) / (z^2 - 1), P(z) = sum coeffs[i] z^i.
        let mut work = self.coeffs.clone();
        let d = work.len() - 1;
        let mut quotient = vec![S::zero(); d.saturating_sub(1)];
        for i in (2..=d).rev() {
            let lead = work[i].clone();
            quotient[i - 2] = lead.clone();
            work[i - 2] = work[i - 2].clone() + lead;
            work[i] = S::zero();
        }
        let remainder = Laurent::new(self.low, work);
        (Laurent::new(self.low + 1, quotient), remainder)
    }

    fn to_zsym(&self) -> ZSym<S> {
        if self.is_zero() {
            return ZSym::new(Vec::new());
        }
        let top = self.high().max(-self.low).max(0);
        if S::BACKEND == Backend::Exact {
            debug_assert!(
                (1..=top).all(|k| self.coeff(k) == self.coeff(-k)),
                "Laurent polynomial is not symmetric"
            );
        }
        let two = S::from_i64(2);
        let coeffs = (0..=top)
            .map(|k| if k == 0 { self.coeff(0) } else { self.coeff(k) * two.clone() })
            .collect();
        ZSym::new(coeffs)
    }
}

impl<S: Scalar> Add for &Laurent<S> {
    type Output = Laurent<S>;

    fn add(self, rhs: Self) -> Laurent<S> {
        combine(self, rhs, |a, b| a + b)
    }
}

impl<S: Scalar> Sub for &Laurent<S> {
    type Output = Laurent<S>;

    fn sub(self, rhs: Self) -> Laurent<S> {
        combine(self, rhs, |a, b| a - b)
    }
}

fn combine<S: Scalar>(a: &Laurent<S>, b: &Laurent<S>, op: impl Fn(S, S) -> S) -> Laurent<S> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Laurent::zero(),
        (false, true) => return Laurent::new(a.low, a.coeffs.iter().map(|c| op(c.clone(), S::zero())).collect()),
        (true, false) => return Laurent::new(b.low, b.coeffs.iter().map(|c| op(S::zero(), c.clone())).collect()),
        _ => {}
    }
    let low = a.low.min(b.low);
    let high = a.high().max(b.high());
    Laurent::new(low, (low..=high).map(|j| op(a.coeff(j), b.coeff(j))).collect())
}

impl<S: Scalar> Mul for &Laurent<S> {
    type Output = Laurent<S>;

    fn mul(self, rhs: Self) -> Laurent<S> {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent::new(self.low + rhs.low, out)
    }
}
