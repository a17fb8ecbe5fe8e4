//! Exact coefficient arithmetic: big rationals, cyclotomic extensions
//! Q(zeta_m), dense polynomials in q, and reduced rational functions.
//!
//! Every symbolic quantity in this crate is a [`FieldElem`]: a canonical
//! reduced ratio of polynomials in q with coefficients in Q(zeta_m).
//! Canonical form (reduced, monic denominator) makes equality decidable,
//! which is what all the identity checks rest on.

pub mod cyclotomic;
pub mod fieldelem;
pub mod poly;
pub(crate) mod zpoly;

pub use cyclotomic::CycElem;
pub use fieldelem::{qnumber, FieldElem};
pub use poly::Poly;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

use num_bigint::BigInt;

/// Shorthand for an integer as a `Rational`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d` as a `Rational`. Panics if `d` is zero.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
