//! Exact recognition of orthogonal polynomial sequences that are classical on
//! a q-quadratic lattice, starting from nothing but their three-term
//! recurrence coefficients.
//!
//! The modules build on one another:
//!
//! - [`scalar`]: exact rationals and tolerance-compared complex floats, the
//!   lattice base `s = q^{1/2}` and the constants `alpha_n`, `gamma_n`.
//! - [`symlaurent`]: polynomials in `x`, the symmetric Laurent basis, and the
//!   operators `D_q` and `S_q`.
//! - [`ttrr`]: coefficient sources, monic polynomials, moments and the
//!   Pearson residuals of the orthogonality functional.
//! - [`classify`]: Pearson pair, necessary test, predicted coefficients and
//!   the combined [`classify::Verdict`].
//! - [`families`]: Askey-Wilson coefficients and their limiting cases.
//! - [`expr`]: closed-form coefficient expressions in `n` and `q`.
//! - [`cli`]: the `awclass` command-line front end.

pub mod classify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod families;
pub mod scalar;
pub mod symlaurent;
pub mod ttrr;

pub use classify::{classify, ClassifyOptions, Status, Verdict};
pub use error::{Error, ParseError, Result};
pub use scalar::{Backend, Float, QParam, Rational, Scalar};
pub use symlaurent::{XPoly, ZSym};
pub use ttrr::CoeffSource;
