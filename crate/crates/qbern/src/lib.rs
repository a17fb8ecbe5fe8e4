//! Exact arithmetic for Carlitz-type and weighted q-Bernoulli numbers and
//! polynomials, the p-adic q-integral, and the weighted q-Bernoulli measure
//! on p-adic balls — with machine verification of the identities that tie
//! them together.
//!
//! Everything symbolic is computed in the rational-function field
//! Q(zeta_m)(q) with canonical reduced representatives, so identity checks
//! are exact; everything numeric is p-adic with certified absolute
//! precision, so convergence claims come with a provable error bound.
//!
//! The main pieces:
//!
//! - [`exact`] — big rationals, Q(zeta_m), dense polynomials in q, and
//!   canonical reduced rational functions ([`FieldElem`]).
//! - [`padic`] — p-adic numbers as exact rationals plus a precision tag,
//!   including q^t for p-adic integer exponents t via the binomial series.
//! - [`qbernoulli`] — the four number families (Carlitz xi and beta, the
//!   extended beta^h, the weighted beta with weight alpha) through one
//!   umbral recurrence solver, the weighted polynomials, and the
//!   distribution relation.
//! - [`characters`] — Dirichlet characters with exact cyclotomic values,
//!   conductors, and the generalized weighted numbers attached to chi.
//! - [`measure`] — the weighted q-Bernoulli distribution on balls of
//!   X = X_d, additivity verification, total mass, character integrals
//!   over X, pX and X*, the regularized measure, and the twist operator.
//! - [`integral`] — the p-adic q-integral as truncated Riemann sums with
//!   valuation-profile convergence reports.
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `qbern` binary exposes the same functionality as `table`, `verify`
//! and `integrate` subcommands emitting JSON or CSV reports.

pub mod characters;
pub mod cli;
pub mod error;
pub mod exact;
pub mod integral;
pub mod measure;
pub mod padic;
pub mod qbernoulli;
pub mod report;

pub use error::{Error, Result};
pub use exact::{qnumber, CycElem, FieldElem, Poly, Rational};
pub use padic::{PAdic, QPoint};
