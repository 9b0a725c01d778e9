//! Closed-form coefficient expressions in `n` and `q`.
//!
//! Grammar (precedence high to low: `^`, unary minus, `* /`, `+ -`; `^`
//! associates to the right, the binary operators to the left):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?
//! atom   := number | "n" | "q" | "(" expr ")"
//! number := digits ["." digits] | "." digits
//! ```
//!
//! Every exponent must be affine in `n` (`c0 + c1*n`, rational `c0`, `c1`).
//! At evaluation `q^e` is computed as `s^(2e)`, so `e` may be a half
//! integer; any other base needs an integer exponent.
//!
//! The same parser reads polynomials in `x` for the operator subcommands,
//! where exponents must be nonnegative integer constants.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::scalar::{parse_decimal, rational_to_decimal, QParam, Rational, Scalar};
use crate::symlaurent::XPoly;
use crate::ttrr::{CoeffSource, SourceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    N,
    Q,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// Parses a coefficient expression in `n` and `q`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    Parser::new(text, Grammar::Coefficient).parse_all()
}

/// Parses a polynomial in `x`.
pub fn parse_poly(text: &str) -> Result<Expr, ParseError> {
    Parser::new(text, Grammar::Polynomial).parse_all()
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var(_) => 5,
        }
    }

    /// `(c0, c1)` with `self = c0 + c1*n`, if the expression has that form.
    pub fn affine_in_n(&self) -> Option<(Rational, Rational)> {
        let zero = Rational::zero;
        match self {
            Expr::Num(c) => Some((c.clone(), zero())),
            Expr::Var(Var::N) => Some((zero(), Rational::one())),
            Expr::Var(_) => None,
            Expr::Neg(e) => e.affine_in_n().map(|(a, b)| (-a, -b)),
            Expr::Bin(op, l, r) => {
                let (a0, a1) = l.affine_in_n()?;
                let (b0, b1) = r.affine_in_n()?;
                match op {
                    BinOp::Add => Some((a0 + b0, a1 + b1)),
                    BinOp::Sub => Some((a0 - b0, a1 - b1)),
                    BinOp::Mul if a1.is_zero() => Some((a0.clone() * b0, a0 * b1)),
                    BinOp::Mul if b1.is_zero() => Some((a0 * b0.clone(), a1 * b0)),
                    BinOp::Div if b1.is_zero() && !b0.is_zero() => Some((a0 / b0.clone(), a1 / b0)),
                    BinOp::Pow if a1.is_zero() && b1.is_zero() && b0.is_integer() => {
                        let k = b0.to_integer().to_i64()?;
                        if a0.is_zero() && k < 0 {
                            return None;
                        }
                        Some((a0.powi(k), zero()))
                    }
                    _ => None,
                }
            }
        }
    }

    /// Evaluates at integer `n` on the lattice `qp`.
    pub fn eval<S: Scalar>(&self, n: i64, qp: &QParam<S>) -> Result<S> {
        match self {
            Expr::Num(c) => Ok(S::from_rational(c)),
            Expr::Var(Var::N) => Ok(S::from_i64(n)),
            Expr::Var(Var::Q) => Ok(qp.q()),
            Expr::Var(Var::X) => Err(Error::Eval("`x` is not defined in coefficient expressions".into())),
            Expr::Neg(e) => Ok(-e.eval(n, qp)?),
            Expr::Bin(op, l, r) => match op {
                BinOp::Add => Ok(l.eval(n, qp)? + r.eval(n, qp)?),
                BinOp::Sub => Ok(l.eval(n, qp)? - r.eval(n, qp)?),
                BinOp::Mul => Ok(l.eval(n, qp)? * r.eval(n, qp)?),
                BinOp::Div => {
                    let den = r.eval(n, qp)?;
                    l.eval(n, qp)?
                        .checked_div(&den)
                        .map_err(|_| Error::Eval(format!("division by zero: `{r}` vanishes at n = {n}")))
                }
                BinOp::Pow => self.eval_pow(l, r, n, qp),
            },
        }
    }

    fn eval_pow<S: Scalar>(&self, base: &Expr, exponent: &Expr, n: i64, qp: &QParam<S>) -> Result<S> {
        let (c0, c1) = exponent
            .affine_in_n()
            .ok_or_else(|| Error::Eval(format!("exponent `{exponent}` is not affine in n")))?;
        let e = c0 + c1 * Rational::from_integer(n.into());
        let to_i64 = |v: &Rational| {
            v.to_integer()
                .to_i64()
                .ok_or_else(|| Error::Eval(format!("exponent of `{self}` out of range")))
        };
        if *base == Expr::Var(Var::Q) {
            let twice = e.clone() * Rational::from_integer(2.into());
            if !twice.is_integer() {
                return Err(Error::Eval(format!(
                    "exponent of `{self}` is {e} at n = {n}, not a multiple of 1/2"
                )));
            }
            return Ok(qp.s().powi(to_i64(&twice)?));
        }
        if !e.is_integer() {
            return Err(Error::Eval(format!(
                "exponent of `{self}` is {e} at n = {n}; only q admits half-integer powers"
            )));
        }
        let k = to_i64(&e)?;
        let b = base.eval(n, qp)?;
        if k < 0 && b.is_zero() {
            return Err(Error::Eval(format!("division by zero: `{base}` vanishes at n = {n}")));
        }
        Ok(b.powi(k))
    }

    /// Expands a polynomial expression in `x`.
    pub fn to_xpoly<S: Scalar>(&self) -> Result<XPoly<S>> {
        match self {
            Expr::Num(c) => Ok(XPoly::constant(S::from_rational(c))),
            Expr::Var(Var::X) => Ok(XPoly::x()),
            Expr::Var(v) => Err(Error::Eval(format!("variable {v:?} is not allowed in a polynomial"))),
            Expr::Neg(e) => Ok(-&e.to_xpoly()?),
            Expr::Bin(op, l, r) => {
                let a = l.to_xpoly::<S>()?;
                match op {
                    BinOp::Add => Ok(&a + &r.to_xpoly()?),
                    BinOp::Sub => Ok(&a - &r.to_xpoly()?),
                    BinOp::Mul => Ok(&a * &r.to_xpoly()?),
                    BinOp::Div => {
                        let d = r.to_xpoly::<S>()?;
                        if d.degree().unwrap_or(0) > 0 {
                            return Err(Error::Eval(format!("cannot divide by the polynomial `{r}`")));
                        }
                        let inv = S::one()
                            .checked_div(&d.leading())
                            .map_err(|_| Error::Eval(format!("division by zero: `{r}` vanishes")))?;
                        Ok(a.scale(&inv))
                    }
                    BinOp::Pow => {
                        let k = r
                            .affine_in_n()
                            .filter(|(c0, c1)| c1.is_zero() && c0.is_integer() && !Signed::is_negative(c0))
                            .and_then(|(c0, _)| c0.to_integer().to_usize())
                            .ok_or_else(|| Error::Eval(format!("exponent `{r}` is not a nonnegative integer")))?;
                        Ok(a.pow(k))
                    }
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(c) => match rational_to_decimal(c) {
                Some(text) => f.write_str(&text),
                None => write!(f, "({}/{})", c.numer(), c.denom()),
            },
            Expr::Var(Var::N) => f.write_str("n"),
            Expr::Var(Var::Q) => f.write_str("q"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.prec() < 3)
            }
            Expr::Bin(op, l, r) => {
                let p = self.prec();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                if *op == BinOp::Pow {
                    wrap(f, l, l.prec() <= p)?;
                    f.write_str(sym)?;
                    wrap(f, r, r.prec() < 3)
                } else {
                    wrap(f, l, l.prec() < p)?;
                    f.write_str(sym)?;
                    wrap(f, r, r.prec() <= p)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Grammar {
    Coefficient,
    Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number `{v}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    grammar: Grammar,
    tok: Tok,
    start: usize,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, grammar: Grammar) -> Self {
        Self { src, grammar, tok: Tok::End, start: 0, pos: 0 }
    }

    fn parse_all(mut self) -> Result<Expr, ParseError> {
        self.advance()?;
        let e = self.expr()?;
        if self.tok != Tok::End {
            return Err(self.error("an operator or end of input"));
        }
        Ok(e)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError { offset: self.start, expected: expected.to_string(), found: self.tok.to_string() }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        if c.is_ascii_digit() || c == b'.' {
            let mut end = self.pos;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            let text = &self.src[self.pos..end];
            let value = parse_decimal(text).filter(|_| text.matches('.').count() <= 1).ok_or_else(|| {
                ParseError { offset: self.start, expected: "a number".into(), found: format!("`{text}`") }
            })?;
            self.tok = Tok::Num(value);
            self.pos = end;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = self.pos;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.tok = Tok::Ident(self.src[self.pos..end].to_string());
            self.pos = end;
        } else if b"+-*/^()".contains(&c) {
            self.tok = Tok::Op(c as char);
            self.pos += 1;
        } else {
            let ch = self.src[self.pos..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: self.start,
                expected: "a number, variable, operator or parenthesis".into(),
                found: format!("`{ch}`"),
            });
        }
        Ok(())
    }

    fn eat(&mut self, op: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Op(op) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+')? {
                BinOp::Add
            } else if self.eat('-')? {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*')? {
                BinOp::Mul
            } else if self.eat('/')? {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-')? {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^')? {
            return Ok(base);
        }
        let offset = self.start;
        let exponent = self.unary()?;
        let valid = match (self.grammar, exponent.affine_in_n()) {
            (Grammar::Coefficient, affine) => affine.is_some(),
            (Grammar::Polynomial, Some((c0, c1))) => c1.is_zero() && c0.is_integer() && !Signed::is_negative(&c0),
            (Grammar::Polynomial, None) => false,
        };
        if !valid {
            let expected = match self.grammar {
                Grammar::Coefficient => "an exponent affine in n",
                Grammar::Polynomial => "a nonnegative integer exponent",
            };
            return Err(ParseError { offset, expected: expected.into(), found: format!("`{exponent}`") });
        }
        Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Expr::Num(v))
            }
            Tok::Ident(name) => {
                let var = match (self.grammar, name.as_str()) {
                    (Grammar::Coefficient, "n") => Var::N,
                    (Grammar::Coefficient, "q") => Var::Q,
                    (Grammar::Polynomial, "x") => Var::X,
                    (Grammar::Coefficient, _) => return Err(self.error("a number, `n`, `q` or `(`")),
                    (Grammar::Polynomial, _) => return Err(self.error("a number, `x` or `(`")),
                };
                self.advance()?;
                Ok(Expr::Var(var))
            }
            Tok::Op('(') => {
                self.advance()?;
                let e = self.expr()?;
                if !self.eat(')')? {
                    return Err(self.error("`)`"));
                }
                Ok(e)
            }
            _ => Err(self.error("an operand")),
        }
    }
}

// ---------------------------------------------------------------------------
// Expression-backed coefficient source
// ---------------------------------------------------------------------------

/// Coefficients given as `B_n = b(n)` for `n >= 0` and `C_n = c(n)` for `n >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprSource<S> {
    b: Expr,
    c: Expr,
    qp: QParam<S>,
}

impl<S: Scalar> ExprSource<S> {
    pub fn new(b: Expr, c: Expr, qp: QParam<S>) -> Self {
        Self { b, c, qp }
    }

    pub fn parse(b: &str, c: &str, qp: QParam<S>) -> Result<Self> {
        Ok(Self::new(parse(b)?, parse(c)?, qp))
    }
}

impl<S: Scalar> CoeffSource<S> for ExprSource<S> {
    fn kind(&self) -> SourceKind {
        SourceKind::Expression
    }

    fn raw_b(&self, n: usize) -> Result<S> {
        self.b.eval(n as i64, &self.qp)
    }

    fn raw_c(&self, n: usize) -> Result<S> {
        self.c.eval(n as i64, &self.qp)
    }
}
