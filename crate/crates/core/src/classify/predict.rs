//! Sufficient condition: the coefficients a classical OPS must have, given
//! its head. With the Pearson parameters `a`, `b` and
//!
//!   d_n = a gamma_n + alpha_n,   e_n = (b + a B_0) gamma_n + B_0 alpha_n,
//!
//! the predictions are
//!
//!   B_n     = gamma_{n+1} e_n / d_{2n} - gamma_n e_{n-1} / d_{2n-2}
//!   C_{n+1} = -gamma_{n+1} d_{n-1} / (d_{2n-1} d_{2n+1}) * phi^[n](e_n / d_{2n})
//!
//! where `phi^[n]` is the quadratic returned by [`PredictionState::phi_bracket`].
//! An OPS whose coefficients match for every `n` is classical.

use crate::error::{Error, Result};
use crate::scalar::{QParam, Scalar};
use crate::symlaurent::XPoly;

/// Memoized `d_k` and `e_k` for a fixed head up to a fixed order.
#[derive(Clone, Debug)]
pub struct PredictionState<S> {
    a: S,
    b: S,
    b0: S,
    c1: S,
    qp: QParam<S>,
    order: usize,
    /// `d[k + 2]` for `k` in `-2..=2N+1`.
    d: Vec<S>,
    /// Magnitude of the terms of `d`, for singularity tests.
    d_scale: Vec<f64>,
    /// `e[k + 1]` for `k` in `-1..=N`.
    e: Vec<S>,
}

impl<S: Scalar> PredictionState<S> {
    pub fn new(a: S, b: S, b0: S, c1: S, qp: &QParam<S>, order: usize) -> Self {
        let top = 2 * order as i64 + 1;
        let mut d = Vec::new();
        let mut d_scale = Vec::new();
        for k in -2..=top {
            let term = a.clone() * qp.gamma_n(k);
            let alpha = qp.alpha_n(k);
            d_scale.push(term.magnitude() + alpha.magnitude());
            d.push(term + alpha);
        }
        let shifted = b.clone() + a.clone() * b0.clone();
        let e = (-1..=order as i64)
            .map(|k| shifted.clone() * qp.gamma_n(k) + b0.clone() * qp.alpha_n(k))
            .collect();
        Self { a, b, b0, c1, qp: qp.clone(), order, d, d_scale, e }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn d(&self, k: i64) -> &S {
        &self.d[(k + 2) as usize]
    }

    pub fn e(&self, k: i64) -> &S {
        &self.e[(k + 1) as usize]
    }

    /// `d_k`, or a singularity error when it vanishes.
    fn divisor(&self, k: i64) -> Result<S> {
        let v = self.d(k);
        if self.qp.negligible(v, self.d_scale[(k + 2) as usize]) {
            Err(Error::Singular { index: k })
        } else {
            Ok(v.clone())
        }
    }

    /// `phi^[n](z) = ((alpha^2 - 1) gamma_{2n} + a alpha_{2n})(z^2 - 1/2)
    ///             - ((b + a B_0) alpha_n + (alpha^2 - 1) B_0 gamma_n) z
    ///             + b B_0 - (a + alpha) C_1 + a/2`.
    pub fn phi_bracket(&self, n: usize) -> XPoly<S> {
        let qp = &self.qp;
        let n = n as i64;
        let alpha = qp.alpha();
        let am1 = alpha.clone() * alpha.clone() - S::one();
        let half = S::from_ratio(1, 2);
        let quad = am1.clone() * qp.gamma_n(2 * n) + self.a.clone() * qp.alpha_n(2 * n);
        let lin = (self.b.clone() + self.a.clone() * self.b0.clone()) * qp.alpha_n(n)
            + am1 * self.b0.clone() * qp.gamma_n(n);
        let constant = self.b.clone() * self.b0.clone() - (self.a.clone() + alpha) * self.c1.clone()
            + self.a.clone() * half.clone();
        XPoly::new(vec![constant - quad.clone() * half, -lin, quad])
    }

    /// Predicted `B_n`, `0 <= n <= N`.
    pub fn b_hat(&self, n: usize) -> Result<S> {
        assert!(n <= self.order, "B_{n} beyond the prepared order");
        let qp = &self.qp;
        let ni = n as i64;
        let lead = qp.gamma_n(ni + 1) * self.e(ni).clone() / self.divisor(2 * ni)?;
        if n == 0 {
            // gamma_0 = 0 removes the second term
            return Ok(lead);
        }
        Ok(lead - qp.gamma_n(ni) * self.e(ni - 1).clone() / self.divisor(2 * ni - 2)?)
    }

    /// Predicted `C_n`, `1 <= n <= N`.
    pub fn c_hat(&self, n: usize) -> Result<S> {
        assert!((1..=self.order).contains(&n), "C_{n} outside the prepared order");
        let qp = &self.qp;
        let m = n as i64 - 1;
        let z = self.e(m).clone() / self.divisor(2 * m)?;
        let bracket = self.phi_bracket(m as usize).eval(&z);
        let value = if m == 0 {
            // d_{n-1} and d_{2n-1} coincide at n = 0 and cancel
            -qp.gamma_n(1) * bracket / self.divisor(1)?
        } else {
            let den = self.divisor(2 * m - 1)? * self.divisor(2 * m + 1)?;
            -qp.gamma_n(m + 1) * self.d(m - 1).clone() * bracket / den
        };
        if value.is_zero() {
            return Err(Error::PredictedZero { n });
        }
        Ok(value)
    }
}

/// Predicted `(B_0..=B_N, C_1..=C_N)` for the Pearson parameters `(a, b)` and
/// the head values `B_0`, `C_1`.
pub fn predict_coefficients<S: Scalar>(
    a: S,
    b: S,
    b0: S,
    c1: S,
    qp: &QParam<S>,
    order: usize,
) -> Result<(Vec<S>, Vec<S>)> {
    let state = PredictionState::new(a, b, b0, c1, qp, order);
    let bs = (0..=order).map(|n| state.b_hat(n)).collect::<Result<Vec<_>>>()?;
    let cs = (1..=order).map(|n| state.c_hat(n)).collect::<Result<Vec<_>>>()?;
    Ok((bs, cs))
}
