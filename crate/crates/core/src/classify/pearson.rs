//! The Pearson pair `(phi, psi)` forced by the first four recurrence
//! coefficients.

use crate::error::{Error, Result};
use crate::scalar::{QParam, Scalar};
use crate::symlaurent::XPoly;
use crate::ttrr::CoeffSource;

/// `(B_0, B_1, C_1, C_2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Head<S> {
    pub b0: S,
    pub b1: S,
    pub c1: S,
    pub c2: S,
}

impl<S: Scalar> Head<S> {
    pub fn from_source(src: &dyn CoeffSource<S>) -> Result<Self> {
        Ok(Self { b0: src.b(0)?, b1: src.b(1)?, c1: src.c(1)?, c2: src.c(2)? })
    }
}

/// Solution of `D_q(phi u) = S_q(psi u)` in terms of the head:
///
///   phi(x) = (a x - b)(x - B_0) - (a + alpha) C_1,   psi(x) = x - B_0.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonPair<S> {
    pub a: S,
    pub b: S,
    pub phi: XPoly<S>,
    pub psi: XPoly<S>,
    pub head: Head<S>,
}

impl<S: Scalar> PearsonPair<S> {
    /// Rebuilds `phi` and `psi` from `a`, `b` and the head.
    pub fn assemble(a: S, b: S, head: Head<S>, qp: &QParam<S>) -> Self {
        let psi = XPoly::linear(head.b0.clone());
        let ax_minus_b = XPoly::new(vec![-b.clone(), a.clone()]);
        let shift = (a.clone() + qp.alpha()) * head.c1.clone();
        let phi = &(&ax_minus_b * &psi) - &XPoly::constant(shift);
        Self { a, b, phi, psi, head }
    }
}

/// `a = alpha(3 - 4 alpha^2)/(4 alpha^2 - 1)
///      + [(B_0 + B_1)^2 + 4 alpha^2 (C_1 - B_0 B_1 + alpha^2 - 1)] / [2 alpha (4 alpha^2 - 1) C_2]`,
/// `b = (a + alpha) B_1 - (B_0 + B_1)/(2 alpha)`.
pub fn pearson_from_head<S: Scalar>(b0: S, b1: S, c1: S, c2: S, qp: &QParam<S>) -> Result<PearsonPair<S>> {
    if c1.is_zero() {
        return Err(Error::Regularity { n: 1 });
    }
    if c2.is_zero() {
        return Err(Error::Regularity { n: 2 });
    }
    let one = S::one();
    let two = S::from_i64(2);
    let four = S::from_i64(4);
    let alpha = qp.alpha();
    let alpha2 = alpha.clone() * alpha.clone();
    // 4 alpha^2 - 1 = q + 1 + 1/q > 0 on 0 < q < 1
    let k = four.clone() * alpha2.clone() - one.clone();
    let sum = b0.clone() + b1.clone();
    let first = alpha.clone() * (S::from_i64(3) - four.clone() * alpha2.clone()) / k.clone();
    let numerator = sum.clone() * sum.clone()
        + four * alpha2.clone() * (c1.clone() - b0.clone() * b1.clone() + alpha2 - one);
    let denominator = two.clone() * alpha.clone() * k * c2.clone();
    let a = first + numerator.checked_div(&denominator)?;
    let b = (a.clone() + alpha.clone()) * b1.clone() - sum / (two * alpha);
    Ok(PearsonPair::assemble(a, b, Head { b0, b1, c1, c2 }, qp))
}
