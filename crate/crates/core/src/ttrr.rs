//! Three-term recurrence machinery.
//!
//! A monic OPS satisfies `x P_n = P_{n+1} + B_n P_n + C_n P_{n-1}` with
//! `P_{-1} = 0`, `P_0 = 1`, and `C_n != 0`. The orthogonality functional `u`
//! is represented by its moments `mu_k = <u, x^k>`, normalized so `mu_0 = 1`.

use serde::{Deserialize, Serialize};

use crate::classify::PearsonPair;
use crate::error::{Error, Result};
use crate::expr::ExprSource;
use crate::scalar::{QParam, Scalar};
use crate::symlaurent::{dq_apply, sq_apply, XPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Tabulated,
    Expression,
    Family,
}

/// Provider of recurrence coefficients `B_n` (`n >= 0`) and `C_n` (`n >= 1`).
///
/// Implementors supply [`raw_b`](CoeffSource::raw_b) and
/// [`raw_c`](CoeffSource::raw_c); the provided accessors enforce the order
/// bound and the regularity condition `C_n != 0`.
pub trait CoeffSource<S: Scalar>: Send + Sync {
    fn kind(&self) -> SourceKind;

    /// Highest order `N` such that `B_0..B_N` and `C_1..C_N` exist, if bounded.
    fn max_order(&self) -> Option<usize> {
        None
    }

    fn raw_b(&self, n: usize) -> Result<S>;

    fn raw_c(&self, n: usize) -> Result<S>;

    fn b(&self, n: usize) -> Result<S> {
        self.check_order(n)?;
        self.raw_b(n)
    }

    fn c(&self, n: usize) -> Result<S> {
        if n == 0 {
            return Err(Error::InvalidParameters("C_n is defined for n >= 1".into()));
        }
        self.check_order(n)?;
        let v = self.raw_c(n)?;
        if v.is_zero() {
            return Err(Error::Regularity { n });
        }
        Ok(v)
    }

    fn check_order(&self, n: usize) -> Result<()> {
        match self.max_order() {
            Some(available) if n > available => Err(Error::OrderExceeded { requested: n, available }),
            _ => Ok(()),
        }
    }

    /// `(B_0..=B_N, C_1..=C_N)`.
    fn coefficients(&self, order: usize) -> Result<(Vec<S>, Vec<S>)> {
        let b = (0..=order).map(|n| self.b(n)).collect::<Result<Vec<_>>>()?;
        let c = (1..=order).map(|n| self.c(n)).collect::<Result<Vec<_>>>()?;
        Ok((b, c))
    }
}

impl<S: Scalar, T: CoeffSource<S> + ?Sized> CoeffSource<S> for Box<T> {
    fn kind(&self) -> SourceKind {
        (**self).kind()
    }

    fn max_order(&self) -> Option<usize> {
        (**self).max_order()
    }

    fn raw_b(&self, n: usize) -> Result<S> {
        (**self).raw_b(n)
    }

    fn raw_c(&self, n: usize) -> Result<S> {
        (**self).raw_c(n)
    }
}

// ---------------------------------------------------------------------------
// Tabulated coefficients
// ---------------------------------------------------------------------------

/// Finite coefficient table; `c[0]` holds `C_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<S> {
    b: Vec<S>,
    c: Vec<S>,
}

impl<S: Scalar> Table<S> {
    pub fn new(b: Vec<S>, c: Vec<S>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Table("B must hold at least B_0".into()));
        }
        if let Some(i) = c.iter().position(|v| v.is_zero()) {
            return Err(Error::Regularity { n: i + 1 });
        }
        Ok(Self { b, c })
    }

    /// Tabulates `orders 0..=order` of another source.
    pub fn from_source(src: &dyn CoeffSource<S>, order: usize) -> Result<Self> {
        let (b, c) = src.coefficients(order)?;
        Self::new(b, c)
    }

    pub fn b_values(&self) -> &[S] {
        &self.b
    }

    pub fn c_values(&self) -> &[S] {
        &self.c
    }
}

impl<S: Scalar> CoeffSource<S> for Table<S> {
    fn kind(&self) -> SourceKind {
        SourceKind::Tabulated
    }

    fn max_order(&self) -> Option<usize> {
        Some((self.b.len() - 1).min(self.c.len()))
    }

    fn raw_b(&self, n: usize) -> Result<S> {
        Ok(self.b[n].clone())
    }

    fn raw_c(&self, n: usize) -> Result<S> {
        Ok(self.c[n - 1].clone())
    }
}

/// JSON input document: either tabulated values or closed-form expressions.
///
/// ```json
/// {"q_sqrt": "1/2", "B": ["0", "0"], "C": ["3/16", "15/64"]}
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_sqrt: Option<String>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(rename = "B_expr", default, skip_serializing_if = "Option::is_none")]
    pub b_expr: Option<String>,
    #[serde(rename = "C_expr", default, skip_serializing_if = "Option::is_none")]
    pub c_expr: Option<String>,
}

impl TableDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table document serializes")
    }

    pub fn from_table<S: Scalar>(table: &Table<S>, q_sqrt: Option<String>) -> Self {
        Self {
            q_sqrt,
            b: Some(table.b.iter().map(Scalar::to_text).collect()),
            c: Some(table.c.iter().map(Scalar::to_text).collect()),
            ..Self::default()
        }
    }

    /// Builds the source this document describes. Tabulated values take
    /// precedence; mixing values and expressions is rejected.
    pub fn into_source<S: Scalar>(&self, qp: &QParam<S>) -> Result<Box<dyn CoeffSource<S>>> {
        match (&self.b, &self.c, &self.b_expr, &self.c_expr) {
            (Some(b), Some(c), None, None) => {
                let b = b.iter().map(|t| S::parse_text(t)).collect::<Result<Vec<_>>>()?;
                let c = c.iter().map(|t| S::parse_text(t)).collect::<Result<Vec<_>>>()?;
                Ok(Box::new(Table::new(b, c)?))
            }
            (None, None, Some(b), Some(c)) => Ok(Box::new(ExprSource::parse(b, c, qp.clone())?)),
            _ => Err(Error::Table(
                "expected either both \"B\" and \"C\" arrays or both \"B_expr\" and \"C_expr\"".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials and moments
// ---------------------------------------------------------------------------

/// Monic `P_n` from the recurrence.
pub fn expand_monic<S: Scalar>(src: &dyn CoeffSource<S>, n: usize) -> Result<XPoly<S>> {
    Ok(expand_all(src, n)?.pop().expect("nonempty"))
}

/// `[P_0, ..., P_n]`.
pub fn expand_all<S: Scalar>(src: &dyn CoeffSource<S>, n: usize) -> Result<Vec<XPoly<S>>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(XPoly::constant(S::one()));
    if n == 0 {
        return Ok(out);
    }
    out.push(XPoly::linear(src.b(0)?));
    for k in 1..n {
        let shifted = &XPoly::linear(src.b(k)?) * &out[k];
        let next = &shifted - &out[k - 1].scale(&src.c(k)?);
        out.push(next);
    }
    Ok(out)
}

/// Moments of the normalized orthogonality functional.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<S> {
    qp: QParam<S>,
    mu: Vec<S>,
    kappa: Vec<S>,
}

/// `mu_0..=mu_order`, with `mu_k` the `(0, 0)` entry of `J^k` for the monic
/// Jacobi operator `J` (diagonal `B_n`, superdiagonal 1, subdiagonal `C_n`).
pub fn moments<S: Scalar>(src: &dyn CoeffSource<S>, order: usize, qp: &QParam<S>) -> Result<MomentTable<S>> {
    let half = order / 2;
    let b = (0..=half).map(|n| src.b(n)).collect::<Result<Vec<_>>>()?;
    let c = (1..=half).map(|n| src.c(n)).collect::<Result<Vec<_>>>()?;

    // row = e_0^T J^k, truncated to the entries that still reach index 0
    // within the remaining `order - k` steps.
    let mut mu = Vec::with_capacity(order + 1);
    let mut row = vec![S::one()];
    mu.push(S::one());
    for k in 0..order {
        let width = (k + 1).min(order - k - 1) + 1;
        let next: Vec<S> = (0..width)
            .map(|j| {
                let mut v = S::zero();
                if j >= 1 {
                    if let Some(w) = row.get(j - 1) {
                        v = v + w.clone();
                    }
                }
                if let Some(w) = row.get(j) {
                    v = v + w.clone() * b[j].clone();
                }
                if let Some(w) = row.get(j + 1) {
                    v = v + w.clone() * c[j].clone();
                }
                v
            })
            .collect();
        mu.push(next[0].clone());
        row = next;
    }

    let mut table = MomentTable { qp: qp.clone(), mu, kappa: Vec::new() };
    let polys = expand_all(src, half)?;
    table.kappa = polys
        .iter()
        .map(|p| table.apply_functional(&(p * p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(table)
}

impl<S: Scalar> MomentTable<S> {
    pub fn qparam(&self) -> &QParam<S> {
        &self.qp
    }

    pub fn mu(&self) -> &[S] {
        &self.mu
    }

    /// Highest moment degree held.
    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    /// `kappa_n = <u, P_n^2>` for `2n <= order`.
    pub fn kappa(&self) -> &[S] {
        &self.kappa
    }

    pub fn apply_functional(&self, p: &XPoly<S>) -> Result<S> {
        match p.degree() {
            None => Ok(S::zero()),
            Some(d) if d > self.order() => Err(Error::InsufficientMoments { needed: d, available: self.order() }),
            Some(_) => Ok(p
                .coeffs()
                .iter()
                .zip(&self.mu)
                .fold(S::zero(), |acc, (c, m)| acc + c.clone() * m.clone())),
        }
    }

    /// `sum_k |p_k| |mu_k|`, the magnitude scale of `<u, p>`.
    pub fn functional_scale(&self, p: &XPoly<S>) -> f64 {
        p.coeffs()
            .iter()
            .zip(&self.mu)
            .map(|(c, m)| c.magnitude() * m.magnitude())
            .sum()
    }
}

pub fn apply_functional<S: Scalar>(m: &MomentTable<S>, p: &XPoly<S>) -> Result<S> {
    m.apply_functional(p)
}

/// `(B_n, C_{n+1})` recomputed from the moments alone:
/// `B_n = <u, x P_n^2> / <u, P_n^2>`, `C_{n+1} = <u, P_{n+1}^2> / <u, P_n^2>`.
pub fn recover_coeffs<S: Scalar>(m: &MomentTable<S>, src: &dyn CoeffSource<S>, n: usize) -> Result<(S, S)> {
    let needed = 2 * n + 2;
    if needed > m.order() {
        return Err(Error::InsufficientMoments { needed, available: m.order() });
    }
    let polys = expand_all(src, n + 1)?;
    let pn2 = &polys[n] * &polys[n];
    let norm = m.apply_functional(&pn2)?;
    let b = m.apply_functional(&(&XPoly::x() * &pn2))?.checked_div(&norm)?;
    let c = m
        .apply_functional(&(&polys[n + 1] * &polys[n + 1]))?
        .checked_div(&norm)?;
    Ok((b, c))
}

/// `<u, phi D_q x^n + psi S_q x^n>`; vanishes for all `n` exactly when `u`
/// satisfies the distributional Pearson equation with `(phi, psi)`.
pub fn pearson_residual<S: Scalar>(m: &MomentTable<S>, pp: &PearsonPair<S>, n: usize, qp: &QParam<S>) -> Result<S> {
    m.apply_functional(&pearson_polynomial(pp, n, qp))
}

/// `phi D_q x^n + psi S_q x^n`.
pub fn pearson_polynomial<S: Scalar>(pp: &PearsonPair<S>, n: usize, qp: &QParam<S>) -> XPoly<S> {
    let xn = XPoly::monomial(n);
    &(&pp.phi * &dq_apply(&xn, qp)) + &(&pp.psi * &sq_apply(&xn, qp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::pearson_from_head;
    use crate::families::{Family, FamilySource};
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn half() -> QParam<Rational> {
        QParam::exact(r(1, 2)).unwrap()
    }

    fn hermite() -> FamilySource<Rational> {
        FamilySource::new(Family::ContinuousQHermite, half()).unwrap()
    }

    #[test]
    fn first_polynomials() {
        let table = Table::new(vec![r(2, 3), r(1, 1)], vec![r(1, 5)]).unwrap();
        assert_eq!(expand_monic(&table, 1).unwrap(), XPoly::linear(r(2, 3)));
        let h = hermite();
        assert_eq!(expand_monic(&h, 2).unwrap(), XPoly::new(vec![r(-3, 16), r(0, 1), r(1, 1)]));
        assert_eq!(
            expand_monic(&h, 3).unwrap(),
            XPoly::new(vec![r(0, 1), r(-27, 64), r(0, 1), r(1, 1)])
        );
    }

    #[test]
    fn tabulated_bounds_and_regularity() {
        let table = Table::new(vec![r(0, 1); 3], vec![r(1, 4), r(1, 4)]).unwrap();
        assert_eq!(table.max_order(), Some(2));
        assert_eq!(expand_monic(&table, 4), Err(Error::OrderExceeded { requested: 3, available: 2 }));
        assert_eq!(Table::new(vec![r(0, 1)], vec![r(1, 4), r(0, 1)]), Err(Error::Regularity { n: 2 }));
        assert!(table.c(0).is_err());
    }

    #[test]
    fn hermite_moments() {
        let m = moments(&hermite(), 10, &half()).unwrap();
        assert_eq!(m.mu()[0], r(1, 1));
        assert_eq!(m.mu()[1], r(0, 1));
        assert_eq!(m.mu()[2], r(3, 16));
        assert_eq!(m.mu()[4], r(81, 1024));
        assert!(m.mu().iter().skip(1).step_by(2).all(|v| *v == r(0, 1)));
    }

    #[test]
    fn functional_examples() {
        let h = hermite();
        let m = moments(&h, 8, &half()).unwrap();
        assert_eq!(m.apply_functional(&XPoly::constant(r(1, 1))).unwrap(), r(1, 1));
        assert_eq!(m.apply_functional(&XPoly::x()).unwrap(), r(0, 1));
        let p2 = expand_monic(&h, 2).unwrap();
        assert_eq!(m.apply_functional(&(&p2 * &p2)).unwrap(), r(45, 1024));
        assert!(matches!(
            m.apply_functional(&XPoly::monomial(9)),
            Err(Error::InsufficientMoments { needed: 9, available: 8 })
        ));
    }

    #[test]
    fn recovered_coefficients() {
        let h = hermite();
        let m = moments(&h, 12, &half()).unwrap();
        assert_eq!(recover_coeffs(&m, &h, 0).unwrap(), (r(0, 1), r(3, 16)));
        assert_eq!(recover_coeffs(&m, &h, 1).unwrap(), (r(0, 1), r(15, 64)));
        assert!(recover_coeffs(&m, &h, 6).is_err());

        let table = Table::new(vec![r(1, 3), r(-2, 7), r(5, 2)], vec![r(1, 2), r(3, 5)]).unwrap();
        let m = moments(&table, 4, &half()).unwrap();
        assert_eq!(recover_coeffs(&m, &table, 0).unwrap().0, m.mu()[1]);
        assert_eq!(recover_coeffs(&m, &table, 1).unwrap(), (r(-2, 7), r(3, 5)));
    }

    #[test]
    fn hermite_residuals_vanish() {
        let h = hermite();
        let qp = half();
        let pp = pearson_from_head(r(0, 1), r(0, 1), r(3, 16), r(15, 64), &qp).unwrap();
        let m = moments(&h, 12, &qp).unwrap();
        for n in 0..=11 {
            assert_eq!(pearson_residual(&m, &pp, n, &qp).unwrap(), r(0, 1), "n = {n}");
        }
    }

    #[test]
    fn table_document() {
        let doc = TableDoc::from_json(r#"{"q_sqrt": "1/2", "B": ["0","0"], "C": ["3/16"]}"#).unwrap();
        let src = doc.into_source(&half()).unwrap();
        assert_eq!(src.kind(), SourceKind::Tabulated);
        assert_eq!(src.c(1).unwrap(), r(3, 16));
        assert_eq!(src.max_order(), Some(1));

        let doc = TableDoc::from_json(r#"{"B_expr": "0", "C_expr": "(1-q^n)/4"}"#).unwrap();
        let src = doc.into_source(&half()).unwrap();
        assert_eq!(src.kind(), SourceKind::Expression);
        assert_eq!(src.c(3).unwrap(), r(63, 256));

        let bad = TableDoc::from_json(r#"{"B": ["0"], "C_expr": "1"}"#).unwrap();
        assert!(bad.into_source(&half()).is_err());
        assert!(TableDoc::from_json("not json").is_err());
    }
}
