//! Fixtures and independent oracles shared by the integration tests.
//!
//! The oracles work on plain `Vec<Rational>` coefficient lists and do not
//! call the polynomial, moment or operator code of the library.

#![allow(dead_code)]

use awclass::families::{Family, FamilySource};
use awclass::scalar::{QParam, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    r(n, 1)
}

pub fn qp(s: &Rational) -> QParam<Rational> {
    QParam::exact(s.clone()).expect("0 < s < 1")
}

/// `x^k` for integer `k` of either sign.
pub fn pow(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        (0..k).fold(Rational::one(), |acc, _| acc * x)
    } else {
        Rational::one() / pow(x, -k)
    }
}

/// Rational in `(-1, 1)` with a small denominator.
pub fn small_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let d: i64 = rng.gen_range(2..=9);
        let n: i64 = rng.gen_range(-(d - 1)..=d - 1);
        if !(nonzero && n == 0) {
            return r(n, d);
        }
    }
}

/// Rational in `(0, 1)`.
pub fn unit_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d: i64 = rng.gen_range(2..=12);
    let n: i64 = rng.gen_range(1..d);
    r(n, d)
}

// ---------------------------------------------------------------------------
// Fixture catalog
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub s: Rational,
    pub family: Family<Rational>,
    pub classical: bool,
}

impl Fixture {
    fn new(s: Rational, family: Family<Rational>) -> Self {
        let classical = !matches!(family, Family::Counterexample { .. });
        let name = format!("{}{:?} @ s={}", family.name(), params(&family), s);
        Self { name, s, family, classical }
    }

    pub fn qp(&self) -> QParam<Rational> {
        qp(&self.s)
    }

    pub fn source(&self) -> FamilySource<Rational> {
        FamilySource::new(self.family.clone(), self.qp()).expect("valid fixture")
    }

    /// `(B_n, C_{n+1})` from the family generator.
    pub fn coeffs(&self, n: usize) -> (Rational, Rational) {
        self.family.coeffs(&self.qp(), n).expect("admissible fixture")
    }
}

pub fn params(f: &Family<Rational>) -> Vec<String> {
    let show = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect();
    match f {
        Family::AskeyWilson(a) => show(a),
        Family::ContinuousQHermite => Vec::new(),
        Family::AlSalamChihara(a) => show(a),
        Family::ContinuousBigQHermite(a) => show(a),
        Family::Counterexample { a, b } => show(&[a.clone(), b.clone()]),
    }
}

/// Every family at several lattices, including the non-classical examples.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for s in [r(1, 2), r(1, 3), r(2, 3)] {
        out.push(Fixture::new(s.clone(), Family::ContinuousQHermite));
        out.push(Fixture::new(s.clone(), Family::AlSalamChihara([r(1, 2), r(-1, 3)])));
        out.push(Fixture::new(s.clone(), Family::AlSalamChihara([r(3, 4), r(1, 5)])));
        out.push(Fixture::new(s.clone(), Family::ContinuousBigQHermite([r(1, 2), r(-1, 2), r(1, 3)])));
        out.push(Fixture::new(s.clone(), Family::ContinuousBigQHermite([r(2, 5), r(1, 7), r(-3, 4)])));
        out.push(Fixture::new(s.clone(), Family::AskeyWilson([r(1, 2), r(-1, 2), r(1, 3), r(1, 5)])));
        out.push(Fixture::new(s.clone(), Family::AskeyWilson([r(-2, 3), r(1, 4), r(3, 5), r(-1, 6)])));
        out.push(Fixture::new(s.clone(), Family::AskeyWilson([r(1, 3), r(1, 3), r(0, 1), r(1, 2)])));
    }
    for (a, b) in [(int(2), int(3)), (r(1, 2), r(1, 3)), (int(-2), int(3))] {
        out.push(Fixture::new(r(1, 2), Family::Counterexample { a, b }));
    }
    out.push(Fixture::new(r(2, 3), Family::Counterexample { a: r(1, 4), b: r(-3, 5) }));
    out
}

// ---------------------------------------------------------------------------
// Askey-Wilson oracle
// ---------------------------------------------------------------------------

/// `(B_n, C_{n+1})` of the monic Askey-Wilson recurrence, evaluated from the
/// normalized recurrence `2x p_n = A_n p_{n+1} + (a + 1/a - A_n - C_n) p_n + C_n p_{n-1}`.
/// Monic scaling turns the off-diagonal product `A_n C_{n+1}` into `4 C_{n+1}`.
pub fn aw_oracle(p: &[Rational; 4], s: &Rational, n: usize) -> (Rational, Rational) {
    let q = s * s;
    let [a, b, c, d] = p.clone();
    let abcd = &a * &b * &c * &d;
    let one = Rational::one();
    let f = |x: &Rational, k: i64| &one - x * pow(&q, k);
    let big_a = |n: i64| {
        f(&(&a * &b), n) * f(&(&a * &c), n) * f(&(&a * &d), n) * f(&abcd, n - 1)
            / (&a * f(&abcd, 2 * n - 1) * f(&abcd, 2 * n))
    };
    let big_c = |n: i64| {
        if n == 0 {
            return Rational::zero();
        }
        &a * f(&one, n) * f(&(&b * &c), n - 1) * f(&(&b * &d), n - 1) * f(&(&c * &d), n - 1)
            / (f(&abcd, 2 * n - 2) * f(&abcd, 2 * n - 1))
    };
    let n = n as i64;
    let bn = (&a + &one / &a - big_a(n) - big_c(n)) / int(2);
    let cn1 = big_a(n) * big_c(n + 1) / int(4);
    (bn, cn1)
}

// ---------------------------------------------------------------------------
// Polynomial oracles on coefficient lists (lowest degree first)
// ---------------------------------------------------------------------------

pub type Poly = Vec<Rational>;

pub fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn poly_mul(p: &[Rational], q: &[Rational]) -> Poly {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Monic `P_0..=P_n` from `B_0..` and `C_1..` (`c[k - 1] = C_k`).
pub fn monic_polys(b: &[Rational], c: &[Rational], n: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = vec![vec![Rational::one()]];
    if n == 0 {
        return out;
    }
    out.push(vec![-b[0].clone(), Rational::one()]);
    for k in 1..n {
        let mut next = vec![Rational::zero(); k + 2];
        for (i, v) in out[k].iter().enumerate() {
            next[i + 1] += v;
            next[i] -= &b[k] * v;
        }
        for (i, v) in out[k - 1].iter().enumerate() {
            next[i] -= &c[k - 1] * v;
        }
        out.push(next);
    }
    out
}

/// `mu_0..=mu_m` from orthogonality alone: `mu_0 = 1` and `<u, P_k> = 0` for
/// `k >= 1`, which is triangular in the moments because `P_k` is monic.
pub fn brute_force_moments(b: &[Rational], c: &[Rational], m: usize) -> Vec<Rational> {
    let polys = monic_polys(b, c, m);
    let mut mu = vec![Rational::one()];
    for p in polys.iter().skip(1) {
        let k = p.len() - 1;
        let lower: Rational = (0..k).map(|j| &p[j] * &mu[j]).sum();
        mu.push(-lower);
    }
    mu
}

pub fn functional(mu: &[Rational], p: &[Rational]) -> Rational {
    p.iter().zip(mu).map(|(a, m)| a * m).sum()
}

/// `D_q p` evaluated at `x = (z + 1/z)/2` straight from the divided difference
/// of the two shifted evaluations.
pub fn dq_direct(p: &[Rational], s: &Rational, z: &Rational) -> Rational {
    let x = |w: &Rational| (w + Rational::one() / w) / int(2);
    let up = poly_eval(p, &x(&(s * z)));
    let down = poly_eval(p, &x(&(z / s)));
    let den = (s - Rational::one() / s) * (z - Rational::one() / z) / int(2);
    (up - down) / den
}

/// `S_q p` evaluated at `x = (z + 1/z)/2`.
pub fn sq_direct(p: &[Rational], s: &Rational, z: &Rational) -> Rational {
    let x = |w: &Rational| (w + Rational::one() / w) / int(2);
    (poly_eval(p, &x(&(s * z))) + poly_eval(p, &x(&(z / s)))) / int(2)
}

// ---------------------------------------------------------------------------
// Closed forms as expression text
// ---------------------------------------------------------------------------

fn lit(v: &Rational) -> String {
    format!("({v})")
}

/// `(B_expr, C_expr)` text for a family; `C_expr` is `C_n` for `n >= 1`.
pub fn family_exprs(f: &Family<Rational>) -> (String, String) {
    match f {
        Family::ContinuousQHermite => ("0".into(), "(1 - q^n)/4".into()),
        Family::AlSalamChihara([a1, a2]) => (
            format!("({} + {})*q^n/2", lit(a1), lit(a2)),
            format!("(1 - q^n)*(1 - {}*{}*q^(n-1))/4", lit(a1), lit(a2)),
        ),
        Family::ContinuousBigQHermite([a1, a2, a3]) => {
            let (a1, a2, a3) = (lit(a1), lit(a2), lit(a3));
            (
                format!("(({a1} + {a2} + {a3})*q^n + {a1}*{a2}*{a3}*q^(n-1)*(1 - q^n - q^(n+1)))/2"),
                format!("(1 - q^n)*(1 - {a1}*{a2}*q^(n-1))*(1 - {a1}*{a3}*q^(n-1))*(1 - {a2}*{a3}*q^(n-1))/4"),
            )
        }
        Family::Counterexample { a, b } => {
            ("0".into(), format!("(1 - {}*q^n)*(1 - {}*q^n)/4", lit(a), lit(b)))
        }
        Family::AskeyWilson([a, b, c, d]) => {
            let (a, b, c, d) = (lit(a), lit(b), lit(c), lit(d));
            let p = format!("{a}*{b}*{c}*{d}");
            // A_m and C_m with m = n + shift
            let big_a = |m: &str| {
                format!(
                    "((1 - {a}*{b}*q^({m}))*(1 - {a}*{c}*q^({m}))*(1 - {a}*{d}*q^({m}))*(1 - {p}*q^({m}-1))\
                     /({a}*(1 - {p}*q^(2*({m})-1))*(1 - {p}*q^(2*({m})))))"
                )
            };
            let big_c = |m: &str| {
                format!(
                    "({a}*(1 - q^({m}))*(1 - {b}*{c}*q^({m}-1))*(1 - {b}*{d}*q^({m}-1))*(1 - {c}*{d}*q^({m}-1))\
                     /((1 - {p}*q^(2*({m})-2))*(1 - {p}*q^(2*({m})-1))))"
                )
            };
            (
                format!("({a} + 1/{a} - {} - {})/2", big_a("n"), big_c("n")),
                format!("{}*{}/4", big_a("n-1"), big_c("n")),
            )
        }
    }
}
