//! Classification of a recurrence as classical on the q-quadratic lattice.
//!
//! The pipeline extracts the Pearson pair from the head, compares the
//! predicted coefficients against the source order by order, and runs the
//! necessary difference-equation test as independent evidence. Verdicts are
//! finite-order: `classical` means every coefficient up to order `N` agrees.

mod necessary;
mod pearson;
mod predict;

use std::fmt;

use serde_json::{json, Value};

pub use necessary::{necessary_check, necessary_system, null_space, Equation, EquationKind, NecessaryReport};
pub use pearson::{pearson_from_head, Head, PearsonPair};
pub use predict::{predict_coefficients, PredictionState};

use crate::error::{Error, Result};
use crate::scalar::{QParam, Scalar};
use crate::ttrr::{moments, pearson_polynomial, CoeffSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Classical,
    NotClassical,
    InconclusiveSingular,
    InconclusiveData,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Classical => "classical",
            Status::NotClassical => "not_classical",
            Status::InconclusiveSingular => "inconclusive_singular",
            Status::InconclusiveData => "inconclusive_data",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    B,
    C,
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoeffKind::B => "B",
            CoeffKind::C => "C",
        })
    }
}

/// First coefficient where the source departs from the prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<S> {
    pub kind: CoeffKind,
    pub n: usize,
    /// Predicted value.
    pub expected: S,
    /// Value supplied by the source.
    pub actual: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub order: usize,
    pub validate_residuals: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { order: 12, validate_residuals: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<S> {
    pub status: Status,
    pub order_checked: usize,
    pub pearson: Option<PearsonPair<S>>,
    pub necessary: Option<NecessaryReport<S>>,
    pub first_mismatch: Option<Mismatch<S>>,
    /// Index `k` of a vanishing `d_k` that stopped the comparison.
    pub singular_index: Option<i64>,
    /// `<u, phi D_q x^n + psi S_q x^n>` for `n = 0..=N`, when requested.
    pub residuals: Option<Vec<S>>,
    pub notes: Vec<String>,
}

/// Runs the full pipeline up to `opts.order`.
///
/// Sources that end before the requested order are checked as far as they
/// go; without a witness against classicality the verdict is then
/// `inconclusive_data`.
pub fn classify<S: Scalar>(src: &dyn CoeffSource<S>, qp: &QParam<S>, opts: &ClassifyOptions) -> Result<Verdict<S>> {
    if opts.order < 4 {
        return Err(Error::InsufficientData(format!("classification needs order >= 4, got {}", opts.order)));
    }
    let mut notes = Vec::new();
    let order = match src.max_order() {
        Some(available) if available < opts.order => {
            notes.push(format!("source holds coefficients only up to order {available}; requested {}", opts.order));
            available
        }
        _ => opts.order,
    };
    let truncated = order < opts.order;
    if order < 2 {
        notes.push("the head B_0, B_1, C_1, C_2 is not available".into());
        return Ok(Verdict {
            status: Status::InconclusiveData,
            order_checked: order,
            pearson: None,
            necessary: None,
            first_mismatch: None,
            singular_index: None,
            residuals: None,
            notes,
        });
    }

    let (b, c) = src.coefficients(order)?;
    let pearson = pearson_from_head(b[0].clone(), b[1].clone(), c[0].clone(), c[1].clone(), qp)?;

    // order-by-order comparison: B_k, then C_{k+1}
    let state = PredictionState::new(pearson.a.clone(), pearson.b.clone(), b[0].clone(), c[0].clone(), qp, order);
    let mut first_mismatch = None;
    let mut singular_index = None;
    'compare: for k in 0..=order {
        let mut candidates = vec![(CoeffKind::B, k)];
        if k < order {
            candidates.push((CoeffKind::C, k + 1));
        }
        for (kind, n) in candidates {
            let (predicted, actual) = match kind {
                CoeffKind::B => (state.b_hat(n), &b[n]),
                CoeffKind::C => (state.c_hat(n), &c[n - 1]),
            };
            let predicted = match predicted {
                Ok(v) => v,
                Err(Error::Singular { index }) => {
                    singular_index = Some(index);
                    break 'compare;
                }
                Err(Error::PredictedZero { .. }) => S::zero(),
                Err(e) => return Err(e),
            };
            if !qp.same(&predicted, actual) {
                first_mismatch = Some(Mismatch { kind, n, expected: predicted, actual: actual.clone() });
                break 'compare;
            }
        }
    }

    let necessary = if order >= 4 {
        Some(necessary_check(&b, &c, qp, order)?)
    } else {
        notes.push("order below 4: necessary test skipped".into());
        None
    };
    let necessary_fails = necessary.as_ref().is_some_and(|r| !r.passes());

    let mut residual_witness = None;
    let residuals = if opts.validate_residuals {
        let table = moments(src, order + 1, qp)?;
        let mut values = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let poly = pearson_polynomial(&pearson, n, qp);
            let value = table.apply_functional(&poly)?;
            if residual_witness.is_none() && !qp.negligible(&value, table.functional_scale(&poly)) {
                residual_witness = Some(n);
            }
            values.push(value);
        }
        notes.push("moments normalized so that <u, 1> = 1".into());
        Some(values)
    } else {
        None
    };

    if let Some(m) = &first_mismatch {
        notes.push(format!("{}_{} differs from the predicted value", m.kind, m.n));
    }
    if necessary_fails {
        notes.push("the necessary difference equations admit only the trivial solution".into());
    }
    if let Some(n) = residual_witness {
        notes.push(format!("Pearson residual nonzero at n = {n}"));
    }
    if let Some(k) = singular_index {
        notes.push(format!("prediction stopped: d_{k} vanishes"));
    }

    let status = if first_mismatch.is_some() || necessary_fails || residual_witness.is_some() {
        Status::NotClassical
    } else if singular_index.is_some() {
        Status::InconclusiveSingular
    } else if truncated || necessary.is_none() {
        Status::InconclusiveData
    } else {
        notes.push(format!("consistent with a classical OPS up to order {order}"));
        Status::Classical
    };

    Ok(Verdict { status, order_checked: order, pearson: Some(pearson), necessary, first_mismatch, singular_index, residuals, notes })
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

pub fn pearson_json<S: Scalar>(pp: &PearsonPair<S>) -> Value {
    json!({
        "a": pp.a.to_text(),
        "b": pp.b.to_text(),
        "phi": pp.phi.to_json_coeffs(),
        "psi": pp.psi.to_json_coeffs(),
    })
}

pub fn necessary_json<S: Scalar>(r: &NecessaryReport<S>) -> Value {
    json!({
        "rank": r.rank,
        "basis": r.basis.iter().map(|v| [v[0].to_text(), v[1].to_text()]).collect::<Vec<_>>(),
        "first_equation_range": [r.first_range.0, r.first_range.1],
        "second_equation_range": [r.second_range.0, r.second_range.1],
    })
}

impl<S: Scalar> Verdict<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "order_checked": self.order_checked,
            "backend": S::BACKEND.to_string(),
            "pearson": self.pearson.as_ref().map(pearson_json),
            "necessary": self.necessary.as_ref().map(necessary_json),
            "first_mismatch": self.first_mismatch.as_ref().map(|m| json!({
                "kind": m.kind.to_string(),
                "n": m.n,
                "expected": m.expected.to_text(),
                "actual": m.actual.to_text(),
            })),
            "singular_index": self.singular_index,
            "residuals": self.residuals.as_ref().map(|v| v.iter().map(Scalar::to_text).collect::<Vec<_>>()),
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("status: {}\n", self.status));
        out.push_str(&format!("order checked: {}\n", self.order_checked));
        if let Some(pp) = &self.pearson {
            out.push_str(&pearson_text(pp));
        }
        if let Some(r) = &self.necessary {
            out.push_str(&necessary_text(r));
        }
        match &self.first_mismatch {
            Some(m) => out.push_str(&format!(
                "first mismatch: {}_{} expected {} actual {}\n",
                m.kind,
                m.n,
                m.expected.to_text(),
                m.actual.to_text()
            )),
            None => out.push_str("first mismatch: none\n"),
        }
        if let Some(k) = self.singular_index {
            out.push_str(&format!("singular index: d_{k}\n"));
        }
        if let Some(res) = &self.residuals {
            let texts: Vec<_> = res.iter().map(Scalar::to_text).collect();
            out.push_str(&format!("residuals: [{}]\n", texts.join(", ")));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

pub fn pearson_text<S: Scalar>(pp: &PearsonPair<S>) -> String {
    format!(
        "a: {}\nb: {}\nphi: {}\npsi: {}\n",
        pp.a.to_text(),
        pp.b.to_text(),
        pp.phi,
        pp.psi
    )
}

pub fn necessary_text<S: Scalar>(r: &NecessaryReport<S>) -> String {
    let basis: Vec<_> = r
        .basis
        .iter()
        .map(|v| format!("({}, {})", v[0].to_text(), v[1].to_text()))
        .collect();
    format!(
        "necessary rank: {}\nnull space basis: [{}]\n",
        r.rank,
        basis.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Family, FamilySource};
    use crate::scalar::Rational;
    use crate::ttrr::Table;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn half() -> QParam<Rational> {
        QParam::exact(r(1, 2)).unwrap()
    }

    fn run(family: Family<Rational>, order: usize) -> Verdict<Rational> {
        let qp = half();
        let src = FamilySource::new(family, qp.clone()).unwrap();
        classify(&src, &qp, &ClassifyOptions { order, validate_residuals: true }).unwrap()
    }

    #[test]
    fn hermite_is_classical() {
        let v = run(Family::ContinuousQHermite, 12);
        assert_eq!(v.status, Status::Classical);
        assert_eq!(v.order_checked, 12);
        assert!(v.first_mismatch.is_none());
        assert!(v.necessary.as_ref().unwrap().passes());
        assert!(v.residuals.unwrap().iter().all(|x| *x == r(0, 1)));
    }

    #[test]
    fn askey_wilson_is_classical() {
        let v = run(Family::AskeyWilson([r(1, 2), r(-1, 2), r(1, 3), r(0, 1)]), 12);
        assert_eq!(v.status, Status::Classical);
    }

    #[test]
    fn counterexample_is_not_classical() {
        let v = run(Family::Counterexample { a: r(2, 1), b: r(3, 1) }, 8);
        assert_eq!(v.status, Status::NotClassical);
        let m = v.first_mismatch.unwrap();
        assert_eq!(m.kind, CoeffKind::C);
        assert_eq!(m.n, 3);
        assert_eq!(m.actual, (r(1, 1) - r(2, 1) * r(1, 64)) * (r(1, 1) - r(3, 1) * r(1, 64)) / r(4, 1));
        assert!(v.necessary.unwrap().passes());
    }

    #[test]
    fn short_tables() {
        let qp = half();
        let hermite = FamilySource::new(Family::ContinuousQHermite, qp.clone()).unwrap();
        let table = Table::from_source(&hermite, 6).unwrap();
        let v = classify(&table, &qp, &ClassifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::InconclusiveData);
        assert_eq!(v.order_checked, 6);

        let table = Table::from_source(&hermite, 1).unwrap();
        let v = classify(&table, &qp, &ClassifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::InconclusiveData);
        assert!(v.pearson.is_none());

        assert!(classify(&hermite, &qp, &ClassifyOptions { order: 3, validate_residuals: false }).is_err());
    }

    #[test]
    fn short_table_with_witness_is_decided() {
        let qp = half();
        let src = FamilySource::new(Family::Counterexample { a: r(2, 1), b: r(3, 1) }, qp.clone()).unwrap();
        let table = Table::from_source(&src, 5).unwrap();
        let v = classify(&table, &qp, &ClassifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::NotClassical);
    }

    #[test]
    fn json_shape() {
        let v = run(Family::ContinuousQHermite, 6);
        let j = v.to_json();
        assert_eq!(j["status"], "classical");
        assert_eq!(j["order_checked"], 6);
        assert_eq!(j["pearson"]["a"], "3/4");
        assert_eq!(j["pearson"]["phi"], json!(["-3/8", "0", "3/4"]));
        assert_eq!(j["pearson"]["psi"], json!(["0", "1"]));
        assert_eq!(j["necessary"]["rank"], 1);
        assert_eq!(j["necessary"]["basis"], json!([["0", "1"]]));
        assert!(j["first_mismatch"].is_null());
        assert!(v.to_text().contains("status: classical"));
    }
}
