//! Necessary condition: the recurrence coefficients of a classical OPS solve
//! two linear difference equations with weights `r_n = â q^n + b̂ q^-n`.
//!
//!   r_{n+3} B_{n+2} - (r_{n+2} + r_{n+1}) B_{n+1} + r_n B_n = 0
//!
//!   r_n (B_n - q B_{n-1})(B_n - B_{n-1}/q)
//!     = (r_{n+1} + r_{n+2})(C_{n+1} - 1/4) - 4 alpha^2 r_n (C_n - 1/4)
//!       + (r_{n-1} + r_{n-2})(C_{n-1} - 1/4)
//!
//! Each equation is linear and homogeneous in `(â, b̂)`; the test asks whether
//! the stacked system has a nontrivial solution.

use crate::error::{Error, Result};
use crate::scalar::{QParam, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationKind {
    /// The `B`-only equation, indexed from `n = 0`.
    First,
    /// The mixed `B`/`C` equation, indexed from `n = 2`.
    Second,
}

/// One stacked equation `coeff[0] â + coeff[1] b̂ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation<S> {
    pub kind: EquationKind,
    pub n: usize,
    pub coeff: [S; 2],
    /// Size of the terms behind each coefficient, with every input value
    /// counted at no less than unit magnitude.
    pub scale: [f64; 2],
}

impl<S: Scalar> Equation<S> {
    pub fn residual(&self, ahat: &S, bhat: &S) -> S {
        self.coeff[0].clone() * ahat.clone() + self.coeff[1].clone() * bhat.clone()
    }

    fn satisfied_by(&self, v: &[S; 2], qp: &QParam<S>) -> bool {
        let scale = self.scale[0] * v[0].magnitude() + self.scale[1] * v[1].magnitude();
        qp.negligible(&self.residual(&v[0], &v[1]), scale)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NecessaryReport<S> {
    /// Rank of the stacked system (0, 1 or 2).
    pub rank: usize,
    /// Basis of the null space; empty when only the zero vector solves the system.
    pub basis: Vec<[S; 2]>,
    /// Inclusive `n` ranges of the first and second equations.
    pub first_range: (usize, usize),
    pub second_range: (usize, usize),
}

impl<S> NecessaryReport<S> {
    pub fn passes(&self) -> bool {
        !self.basis.is_empty()
    }
}

/// Accumulates a coefficient pair together with its term magnitudes.
struct Acc<S> {
    coeff: [S; 2],
    scale: [f64; 2],
}

impl<S: Scalar> Acc<S> {
    fn new() -> Self {
        Self { coeff: [S::zero(), S::zero()], scale: [0.0, 0.0] }
    }

    /// Adds `factor * r_k`, where `size` bounds the inputs behind `factor`.
    fn add_r(&mut self, weights: &[[S; 2]], k: usize, factor: S, size: f64) {
        for (i, w) in weights[k].iter().enumerate() {
            self.scale[i] += w.magnitude() * size;
            self.coeff[i] = self.coeff[i].clone() + w.clone() * factor.clone();
        }
    }

    fn finish(self, kind: EquationKind, n: usize) -> Equation<S> {
        Equation { kind, n, coeff: self.coeff, scale: self.scale }
    }
}

/// The stacked equations for `B_0..=B_N` and `C_1..=C_N` (`c[k - 1] = C_k`):
/// the first equation for `n = 0..=N-3`, the second for `n = 2..=N-1`.
pub fn necessary_system<S: Scalar>(b: &[S], c: &[S], qp: &QParam<S>, order: usize) -> Result<Vec<Equation<S>>> {
    if order < 4 {
        return Err(Error::InsufficientData(format!("the necessary test needs order >= 4, got {order}")));
    }
    if b.len() < order + 1 || c.len() < order {
        return Err(Error::InsufficientData(format!(
            "order {order} needs B_0..B_{order} and C_1..C_{order}; got {} and {} values",
            b.len(),
            c.len()
        )));
    }
    // weights[k] = (q^k, q^-k), the coefficients of r_k in (â, b̂)
    let weights: Vec<[S; 2]> = (0..=order + 1).map(|k| [qp.q_pow(k as i64), qp.q_pow(-(k as i64))]).collect();
    let cn = |k: usize| c[k - 1].clone() - S::from_ratio(1, 4);
    let size = |v: &S| v.magnitude().max(1.0);
    let bs: Vec<f64> = b.iter().map(size).collect();
    let cs = |k: usize| size(&c[k - 1]) + 0.25;
    let q = qp.q();
    let q_inv = qp.q_pow(-1);
    let four_alpha2 = S::from_i64(4) * qp.alpha() * qp.alpha();

    let mut out = Vec::new();
    for n in 0..=order - 3 {
        let mut acc = Acc::new();
        acc.add_r(&weights, n + 3, b[n + 2].clone(), bs[n + 2]);
        acc.add_r(&weights, n + 2, -b[n + 1].clone(), bs[n + 1]);
        acc.add_r(&weights, n + 1, -b[n + 1].clone(), bs[n + 1]);
        acc.add_r(&weights, n, b[n].clone(), bs[n]);
        out.push(acc.finish(EquationKind::First, n));
    }
    for n in 2..order {
        let mut acc = Acc::new();
        let lhs = (b[n].clone() - q.clone() * b[n - 1].clone()) * (b[n].clone() - q_inv.clone() * b[n - 1].clone());
        let lhs_size = (bs[n] + q.magnitude() * bs[n - 1]) * (bs[n] + q_inv.magnitude() * bs[n - 1]);
        acc.add_r(&weights, n, lhs, lhs_size);
        acc.add_r(&weights, n + 1, -cn(n + 1), cs(n + 1));
        acc.add_r(&weights, n + 2, -cn(n + 1), cs(n + 1));
        acc.add_r(&weights, n, four_alpha2.clone() * cn(n), four_alpha2.magnitude() * cs(n));
        acc.add_r(&weights, n - 1, -cn(n - 1), cs(n - 1));
        acc.add_r(&weights, n - 2, -cn(n - 1), cs(n - 1));
        out.push(acc.finish(EquationKind::Second, n));
    }
    Ok(out)
}

/// Null space of a stacked two-column system.
///
/// A candidate null vector is taken from the row with the best
/// signal-to-noise ratio and then checked against every row, each at its
/// own scale. The basis vector is normalized to `b̂ = 1` when possible, else
/// to `â = 1`.
pub fn null_space<S: Scalar>(rows: &[Equation<S>], qp: &QParam<S>) -> (usize, Vec<[S; 2]>) {
    let significant = |e: &Equation<S>| (0..2).any(|i| !qp.negligible(&e.coeff[i], e.scale[i]));
    let pivot = rows.iter().filter(|e| significant(e)).max_by(|x, y| {
        let ratio = |e: &Equation<S>| {
            let total = e.scale[0] + e.scale[1];
            if total == 0.0 {
                f64::INFINITY
            } else {
                (e.coeff[0].magnitude() + e.coeff[1].magnitude()) / total
            }
        };
        ratio(x).total_cmp(&ratio(y))
    });
    let Some(pivot) = pivot else {
        return (0, vec![[S::one(), S::zero()], [S::zero(), S::one()]]);
    };
    let candidate = [-pivot.coeff[1].clone(), pivot.coeff[0].clone()];
    if !rows.iter().all(|e| e.satisfied_by(&candidate, qp)) {
        return (2, Vec::new());
    }
    let [x, y] = candidate;
    let size = x.magnitude() + y.magnitude();
    let v = if !qp.negligible(&y, size) {
        [x / y.clone(), S::one()]
    } else {
        [S::one(), y / x.clone()]
    };
    (1, vec![v])
}

/// Solves the stacked system for `(â, b̂)`. A nonempty null space is
/// necessary, not sufficient, for classicality.
pub fn necessary_check<S: Scalar>(b: &[S], c: &[S], qp: &QParam<S>, order: usize) -> Result<NecessaryReport<S>> {
    let rows = necessary_system(b, c, qp, order)?;
    let (rank, basis) = null_space(&rows, qp);
    Ok(NecessaryReport { rank, basis, first_range: (0, order - 3), second_range: (2, order - 1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Float, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn hermite(order: usize, qp: &QParam<Rational>) -> (Vec<Rational>, Vec<Rational>) {
        let b = vec![r(0, 1); order + 1];
        let c = (1..=order).map(|k| (r(1, 1) - qp.q_pow(k as i64)) / r(4, 1)).collect();
        (b, c)
    }

    #[test]
    fn hermite_null_space() {
        let qp = QParam::exact(r(1, 2)).unwrap();
        let (b, c) = hermite(12, &qp);
        let report = necessary_check(&b, &c, &qp, 12).unwrap();
        assert_eq!(report.rank, 1);
        assert_eq!(report.basis, vec![[r(0, 1), r(1, 1)]]);
        assert_eq!(report.first_range, (0, 9));
        assert_eq!(report.second_range, (2, 11));
    }

    #[test]
    fn perturbed_hermite_fails() {
        let qp = QParam::exact(r(1, 2)).unwrap();
        let (b, mut c) = hermite(12, &qp);
        c[4] = c[4].clone() + r(1, 64);
        let report = necessary_check(&b, &c, &qp, 12).unwrap();
        assert_eq!(report.rank, 2);
        assert!(!report.passes());
    }

    #[test]
    fn float_backend_agrees() {
        let qp = QParam::exact(r(1, 2)).unwrap();
        let fqp = qp.to_float(1e-9).unwrap();
        let (b, mut c) = hermite(12, &qp);
        let lift = |v: &[Rational]| v.iter().map(Float::from_rational).collect::<Vec<_>>();
        let report = necessary_check(&lift(&b), &lift(&c), &fqp, 12).unwrap();
        assert_eq!(report.rank, 1);
        assert!(report.basis[0][0].norm() < 1e-9);
        c[4] = c[4].clone() + r(1, 64);
        assert_eq!(necessary_check(&lift(&b), &lift(&c), &fqp, 12).unwrap().rank, 2);
    }

    #[test]
    fn zero_system_has_full_null_space() {
        // B = 0 and C = 1/4 make every coefficient vanish
        let qp = QParam::exact(r(1, 3)).unwrap();
        let b = vec![r(0, 1); 7];
        let c = vec![r(1, 4); 6];
        let report = necessary_check(&b, &c, &qp, 6).unwrap();
        assert_eq!(report.rank, 0);
        assert_eq!(report.basis.len(), 2);
    }

    #[test]
    fn insufficient_data() {
        let qp = QParam::exact(r(1, 2)).unwrap();
        let (b, c) = hermite(3, &qp);
        assert!(matches!(necessary_check(&b, &c, &qp, 3), Err(Error::InsufficientData(_))));
        assert!(matches!(necessary_check(&b, &c, &qp, 5), Err(Error::InsufficientData(_))));
    }
}
