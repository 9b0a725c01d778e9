//! Built-in recurrence coefficients: the monic Askey-Wilson polynomials, the
//! limiting cases obtained by sending parameters to zero, and a
//! two-parameter family that satisfies the necessary difference equations
//! without being classical.

use crate::error::{Error, Result};
use crate::scalar::{QParam, Scalar};
use crate::ttrr::{CoeffSource, SourceKind};

/// Parameters `(a1, a2, a3, a4)` of the Askey-Wilson recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct AWParams<S> {
    pub a: [S; 4],
    pub qp: QParam<S>,
}

impl<S: Scalar> AWParams<S> {
    pub fn new(a: [S; 4], qp: QParam<S>) -> Result<Self> {
        if a[0].is_zero() {
            return Err(Error::InvalidParameters("a1 must be nonzero".into()));
        }
        Ok(Self { a, qp })
    }
}

fn check<S: Scalar>(qp: &QParam<S>, n: usize, value: S, factor: impl FnOnce() -> String) -> Result<S> {
    if qp.negligible(&value, 1.0) {
        Err(Error::Admissibility { n, factor: factor() })
    } else {
        Ok(value)
    }
}

/// `(B_n, C_{n+1})` of the monic Askey-Wilson polynomials.
pub fn aw_coeffs<S: Scalar>(p: &AWParams<S>, n: usize) -> Result<(S, S)> {
    let qp = &p.qp;
    let [a1, a2, a3, a4] = p.a.clone();
    let one = S::one();
    let ni = n as i64;
    let qn = qp.q_pow(ni);
    let prod = a1.clone() * a2.clone() * a3.clone() * a4.clone();
    // 1 - c q^k, checked when used as a denominator
    let f = |c: &S, k: i64| one.clone() - c.clone() * qp.q_pow(k);

    let d_2n_m2 = check(qp, n, f(&prod, 2 * ni - 2), || "1 - a1*a2*a3*a4*q^(2n-2)".into())?;
    let d_2n_m1 = check(qp, n, f(&prod, 2 * ni - 1), || "1 - a1*a2*a3*a4*q^(2n-1)".into())?;
    let d_2n = check(qp, n, f(&prod, 2 * ni), || "1 - a1*a2*a3*a4*q^(2n)".into())?;
    let d_2n_p1 = check(qp, n, f(&prod, 2 * ni + 1), || "1 - a1*a2*a3*a4*q^(2n+1)".into())?;

    let a12 = a1.clone() * a2.clone();
    let a13 = a1.clone() * a3.clone();
    let a14 = a1.clone() * a4.clone();
    let a23 = a2.clone() * a3.clone();
    let a24 = a2.clone() * a4.clone();
    let a34 = a3.clone() * a4.clone();

    let first = f(&a12, ni) * f(&a13, ni) * f(&a14, ni) * f(&prod, ni - 1)
        / (a1.clone() * d_2n_m1.clone() * d_2n.clone());
    let second = a1.clone() * (one.clone() - qn.clone()) * f(&a23, ni - 1) * f(&a24, ni - 1) * f(&a34, ni - 1)
        / (d_2n_m1.clone() * d_2n_m2);
    let two_b = a1.clone() + one.clone() / a1 - first - second;
    let b = two_b / S::from_i64(2);

    let numerator = f(&one, ni + 1)
        * f(&prod, ni - 1)
        * f(&a12, ni)
        * f(&a13, ni)
        * f(&a14, ni)
        * f(&a23, ni)
        * f(&a24, ni)
        * f(&a34, ni);
    let denominator = S::from_i64(4) * d_2n_m1 * d_2n.clone() * d_2n * d_2n_p1;
    let c = check(qp, n, numerator / denominator, || "C_(n+1) numerator".into())?;
    Ok((b, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    /// All four parameters zero.
    ContinuousQHermite,
    /// `a3 = a4 = 0`.
    AlSalamChihara,
    /// `a4 = 0`, three free parameters (the continuous dual q-Hahn recurrence).
    ContinuousBigQHermite,
}

impl LimitKind {
    pub fn arity(self) -> usize {
        match self {
            LimitKind::ContinuousQHermite => 0,
            LimitKind::AlSalamChihara => 2,
            LimitKind::ContinuousBigQHermite => 3,
        }
    }
}

/// `(B_n, C_{n+1})` for a limiting case, from closed forms that stay regular at
/// `a1 = 0`.
///
/// With `a4 = 0` the Askey-Wilson product `a1 a2 a3 a4` vanishes and
/// `(1 - a1 a2 q^n)(1 - a1 a3 q^n)/a1 = 1/a1 - (a2 + a3) q^n + a1 a2 a3 q^{2n}`,
/// so the `1/a1` terms cancel and
///
///   2 B_n = (a1 + a2 + a3) q^n + a1 a2 a3 q^{n-1} (1 - q^n - q^{n+1}),
///   C_{n+1} = (1 - q^{n+1})(1 - a1 a2 q^n)(1 - a1 a3 q^n)(1 - a2 a3 q^n) / 4.
///
/// Setting `a3 = 0` and then `a1 = a2 = 0` gives the other two cases.
pub fn limit_family<S: Scalar>(kind: LimitKind, params: &[S], qp: &QParam<S>, n: usize) -> Result<(S, S)> {
    if params.len() != kind.arity() {
        return Err(Error::InvalidParameters(format!(
            "{kind:?} takes {} parameters, got {}",
            kind.arity(),
            params.len()
        )));
    }
    let ni = n as i64;
    let qn = qp.q_pow(ni);
    let one = S::one();
    let quarter = S::from_ratio(1, 4);
    let f = |c: S| one.clone() - c * qn.clone();
    let (b, c) = match kind {
        LimitKind::ContinuousQHermite => (S::zero(), (one.clone() - qp.q_pow(ni + 1)) * quarter),
        LimitKind::AlSalamChihara => {
            let (a1, a2) = (params[0].clone(), params[1].clone());
            let b = (a1.clone() + a2.clone()) * qn.clone() / S::from_i64(2);
            let c = (one.clone() - qp.q_pow(ni + 1)) * f(a1 * a2) * quarter;
            (b, c)
        }
        LimitKind::ContinuousBigQHermite => {
            let (a1, a2, a3) = (params[0].clone(), params[1].clone(), params[2].clone());
            let p3 = a1.clone() * a2.clone() * a3.clone();
            let two_b = (a1.clone() + a2.clone() + a3.clone()) * qn.clone()
                + p3 * qp.q_pow(ni - 1) * (one.clone() - qn.clone() - qp.q_pow(ni + 1));
            let c = (one.clone() - qp.q_pow(ni + 1))
                * f(a1.clone() * a2.clone())
                * f(a1 * a3.clone())
                * f(a2 * a3)
                * quarter;
            (two_b / S::from_i64(2), c)
        }
    };
    let c = check(qp, n, c, || "C_(n+1)".into())?;
    Ok((b, c))
}

/// `B_n = 0`, `C_{n+1} = (1 - a q^{n+1})(1 - b q^{n+1})/4` with `a, b` nonzero
/// and different from one.
pub fn remark_counterexample<S: Scalar>(a: &S, b: &S, qp: &QParam<S>, n: usize) -> Result<(S, S)> {
    for (name, v) in [("a", a), ("b", b)] {
        if v.is_zero() || v.is_one() {
            return Err(Error::InvalidParameters(format!("{name} must be nonzero and different from one")));
        }
    }
    let one = S::one();
    let qn1 = qp.q_pow(n as i64 + 1);
    let c = (one.clone() - a.clone() * qn1.clone()) * (one - b.clone() * qn1) / S::from_i64(4);
    let c = check(qp, n, c, || "(1 - a*q^(n+1))*(1 - b*q^(n+1))".into())?;
    Ok((S::zero(), c))
}

// ---------------------------------------------------------------------------
// Family catalog
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum Family<S> {
    AskeyWilson([S; 4]),
    ContinuousQHermite,
    AlSalamChihara([S; 2]),
    ContinuousBigQHermite([S; 3]),
    Counterexample { a: S, b: S },
}

impl<S: Scalar> Family<S> {
    /// Looks up a family by its command-line name (`aw`, `cqh`, `asc`,
    /// `cbqh`, `remark`).
    pub fn from_name(name: &str, params: &[S]) -> Result<Self> {
        let expect = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameters(format!(
                    "family `{name}` takes {k} parameters, got {}",
                    params.len()
                )))
            }
        };
        let p = |i: usize| params[i].clone();
        match name {
            "aw" => expect(4).map(|_| Family::AskeyWilson([p(0), p(1), p(2), p(3)])),
            "cqh" => expect(0).map(|_| Family::ContinuousQHermite),
            "asc" => expect(2).map(|_| Family::AlSalamChihara([p(0), p(1)])),
            "cbqh" => expect(3).map(|_| Family::ContinuousBigQHermite([p(0), p(1), p(2)])),
            "remark" => expect(2).map(|_| Family::Counterexample { a: p(0), b: p(1) }),
            _ => Err(Error::InvalidParameters(format!(
                "unknown family `{name}` (expected aw, cqh, asc, cbqh or remark)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::AskeyWilson(_) => "aw",
            Family::ContinuousQHermite => "cqh",
            Family::AlSalamChihara(_) => "asc",
            Family::ContinuousBigQHermite(_) => "cbqh",
            Family::Counterexample { .. } => "remark",
        }
    }

    /// `(B_n, C_{n+1})`.
    pub fn coeffs(&self, qp: &QParam<S>, n: usize) -> Result<(S, S)> {
        match self {
            Family::AskeyWilson(a) => aw_coeffs(&AWParams::new(a.clone(), qp.clone())?, n),
            Family::ContinuousQHermite => limit_family(LimitKind::ContinuousQHermite, &[], qp, n),
            Family::AlSalamChihara(a) => limit_family(LimitKind::AlSalamChihara, a, qp, n),
            Family::ContinuousBigQHermite(a) => limit_family(LimitKind::ContinuousBigQHermite, a, qp, n),
            Family::Counterexample { a, b } => remark_counterexample(a, b, qp, n),
        }
    }

    fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Family<T> {
        match self {
            Family::AskeyWilson(a) => Family::AskeyWilson([f(&a[0]), f(&a[1]), f(&a[2]), f(&a[3])]),
            Family::ContinuousQHermite => Family::ContinuousQHermite,
            Family::AlSalamChihara(a) => Family::AlSalamChihara([f(&a[0]), f(&a[1])]),
            Family::ContinuousBigQHermite(a) => Family::ContinuousBigQHermite([f(&a[0]), f(&a[1]), f(&a[2])]),
            Family::Counterexample { a, b } => Family::Counterexample { a: f(a), b: f(b) },
        }
    }
}

impl Family<crate::scalar::Rational> {
    /// The same family with parameters converted to the float backend.
    pub fn to_float(&self) -> Family<crate::scalar::Float> {
        self.map(crate::scalar::Float::from_rational)
    }
}

/// A family bound to a lattice, usable wherever a [`CoeffSource`] is expected.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySource<S> {
    family: Family<S>,
    qp: QParam<S>,
}

impl<S: Scalar> FamilySource<S> {
    pub fn new(family: Family<S>, qp: QParam<S>) -> Result<Self> {
        if let Family::AskeyWilson(a) = &family {
            AWParams::new(a.clone(), qp.clone())?;
        }
        if let Family::Counterexample { a, b } = &family {
            remark_counterexample(a, b, &qp, 0)?;
        }
        Ok(Self { family, qp })
    }

    pub fn family(&self) -> &Family<S> {
        &self.family
    }
}

impl<S: Scalar> CoeffSource<S> for FamilySource<S> {
    fn kind(&self) -> SourceKind {
        SourceKind::Family
    }

    fn raw_b(&self, n: usize) -> Result<S> {
        Ok(self.family.coeffs(&self.qp, n)?.0)
    }

    fn raw_c(&self, n: usize) -> Result<S> {
        Ok(self.family.coeffs(&self.qp, n - 1)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn half() -> QParam<Rational> {
        QParam::exact(r(1, 2)).unwrap()
    }

    fn aw(a: [Rational; 4], qp: &QParam<Rational>) -> AWParams<Rational> {
        AWParams::new(a, qp.clone()).unwrap()
    }

    #[test]
    fn askey_wilson_head() {
        let p = aw([r(1, 2), r(-1, 2), r(1, 3), r(0, 1)], &half());
        assert_eq!(aw_coeffs(&p, 0).unwrap(), (r(5, 24), r(175, 768)));
    }

    #[test]
    fn askey_wilson_rejects_vanishing_factors() {
        assert!(AWParams::new([r(0, 1), r(1, 2), r(1, 3), r(1, 5)], half()).is_err());
        // a1*a2 = 1 kills C_1
        let p = aw([r(2, 1), r(1, 2), r(1, 3), r(0, 1)], &half());
        assert!(matches!(aw_coeffs(&p, 0), Err(Error::Admissibility { n: 0, .. })));
        // a1 a2 a3 a4 q^(-2) = 1 kills a denominator at n = 0 (q = 1/4)
        let p = aw([r(1, 2), r(1, 2), r(1, 4), r(1, 1)], &QParam::exact(r(1, 2)).unwrap());
        let err = aw_coeffs(&p, 0).unwrap_err();
        assert_eq!(err, Error::Admissibility { n: 0, factor: "1 - a1*a2*a3*a4*q^(2n-2)".into() });
    }

    #[test]
    fn limit_family_examples() {
        let qp = half();
        assert_eq!(limit_family(LimitKind::ContinuousQHermite, &[], &qp, 2).unwrap(), (r(0, 1), r(63, 256)));
        let (b, _) = limit_family(LimitKind::AlSalamChihara, &[r(1, 3), r(1, 5)], &qp, 3).unwrap();
        assert_eq!(b, (r(1, 3) + r(1, 5)) * qp.q_pow(3) / r(2, 1));
        assert!(limit_family(LimitKind::AlSalamChihara, &[r(1, 3)], &qp, 0).is_err());
    }

    #[test]
    fn limits_specialize_down_the_chain() {
        let qp = half();
        for n in 0..=12 {
            let hermite = limit_family(LimitKind::ContinuousQHermite, &[], &qp, n).unwrap();
            let asc = limit_family(LimitKind::AlSalamChihara, &[r(0, 1), r(0, 1)], &qp, n).unwrap();
            let cbqh = limit_family(LimitKind::ContinuousBigQHermite, &[r(0, 1), r(0, 1), r(0, 1)], &qp, n).unwrap();
            assert_eq!(asc, hermite);
            assert_eq!(cbqh, hermite);
            let asc = limit_family(LimitKind::AlSalamChihara, &[r(2, 7), r(-1, 3)], &qp, n).unwrap();
            let cbqh = limit_family(LimitKind::ContinuousBigQHermite, &[r(2, 7), r(-1, 3), r(0, 1)], &qp, n).unwrap();
            assert_eq!(asc, cbqh);
        }
    }

    #[test]
    fn limits_agree_with_askey_wilson() {
        for s in [r(1, 2), r(1, 3), r(2, 3)] {
            let qp = QParam::exact(s).unwrap();
            for n in 0..=12 {
                let (a1, a2, a3) = (r(1, 2), r(-2, 5), r(3, 7));
                let full = aw_coeffs(&aw([a1.clone(), a2.clone(), a3.clone(), r(0, 1)], &qp), n).unwrap();
                let lim = limit_family(LimitKind::ContinuousBigQHermite, &[a1.clone(), a2.clone(), a3], &qp, n).unwrap();
                assert_eq!(full, lim, "a4 = 0, n = {n}");
                let full = aw_coeffs(&aw([a1.clone(), a2.clone(), r(0, 1), r(0, 1)], &qp), n).unwrap();
                let lim = limit_family(LimitKind::AlSalamChihara, &[a1, a2], &qp, n).unwrap();
                assert_eq!(full, lim, "a3 = a4 = 0, n = {n}");
            }
        }
    }

    #[test]
    fn counterexample_values() {
        let qp = half();
        assert_eq!(remark_counterexample(&r(2, 1), &r(3, 1), &qp, 0).unwrap(), (r(0, 1), r(1, 32)));
        assert_eq!(remark_counterexample(&r(2, 1), &r(3, 1), &qp, 1).unwrap(), (r(0, 1), r(91, 512)));
        for n in 0..10 {
            assert_eq!(remark_counterexample(&r(-2, 1), &r(1, 3), &qp, n).unwrap().0, r(0, 1));
        }
        assert!(remark_counterexample(&r(1, 1), &r(3, 1), &qp, 0).is_err());
        assert!(remark_counterexample(&r(0, 1), &r(3, 1), &qp, 0).is_err());
        // a q = 1 at q = 1/4
        assert!(matches!(
            remark_counterexample(&r(4, 1), &r(3, 1), &qp, 0),
            Err(Error::Admissibility { n: 0, .. })
        ));
    }

    #[test]
    fn family_sources() {
        let qp = half();
        let fam = Family::from_name("remark", &[r(2, 1), r(3, 1)]).unwrap();
        let src = FamilySource::new(fam, qp.clone()).unwrap();
        assert_eq!(src.c(1).unwrap(), r(1, 32));
        assert_eq!(src.c(2).unwrap(), r(91, 512));
        assert!(Family::<Rational>::from_name("aw", &[r(1, 2)]).is_err());
        assert!(Family::<Rational>::from_name("jacobi", &[]).is_err());
        assert_eq!(Family::<Rational>::from_name("cqh", &[]).unwrap().name(), "cqh");
        let bad = Family::from_name("remark", &[r(1, 1), r(3, 1)]).unwrap();
        assert!(FamilySource::new(bad, qp).is_err());
    }
}
