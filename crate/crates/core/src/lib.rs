//! Numerical building blocks for elliptic hypergeometric identities.
//!
//! The crate evaluates the modified Jacobi theta function
//! `θ(x;p) = Π_{j≥0} (1 - x p^j)(1 - p^{j+1}/x)`, elliptic shifted factorials
//! over a refined base, the elliptic inverse matrix pair `(f_nk, g_kl)`, and
//! a family of Karlsson–Minton-type summation and transformation formulas.
//!
//! Every identity is exposed as a [`Residual`]: the signed total of all its
//! terms (both sides flattened, right-hand side negated) measured against
//! the sum of the term magnitudes. A vanishing identity that is evaluated
//! correctly has a relative residual on the order of the unit roundoff times
//! the conditioning of the individual terms.

pub mod error;
pub mod inversion;
pub mod km;
pub mod operator;
pub mod pochhammer;
pub mod residual;
pub mod theta;

pub use num_complex::Complex64 as Complex;

pub use error::{Error, Result};
pub use inversion::{MatrixWindow, Orthogonality, SequencePair};
pub use operator::{DiagonalSpec, LaurentWindow, OperatorContext, Symbol, Weight};
pub use pochhammer::{FactorialArg, RefinedBase};
pub use residual::{Residual, TermSum};
pub use theta::{Nome, TruncationPolicy};

/// Shorthand for a complex number from its real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
