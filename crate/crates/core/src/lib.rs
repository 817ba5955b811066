//! Verification workbench for weighted averages of gcd-sum functions.
//!
//! The crate evaluates the finite sums
//!
//! ```text
//! M_r(x; f)     = Σ_{k≤x} k^{-(r+1)} Σ_{j≤k} j^r f(gcd(j,k))
//! M_r^(s)(x; f) = Σ_{k≤x} k^{-s(r+1)} Σ_{j≤k^s} j^r Σ_{d|k, d^s|j} (f*μ)(d)
//! ```
//!
//! exactly (rational arithmetic) or in compensated double precision, checks
//! them against their closed-form divisor-sum identities, assembles the
//! zeta/Bernoulli main terms of the asymptotic formulas, measures the error
//! terms against their Möbius-weighted Δ / Δ_a representations, and integrates
//! squared error terms for the mean-square laws.
//!
//! Module map:
//!
//! * [`arith`]: sieved arithmetic-function tables and Dirichlet convolution.
//! * [`special`]: ζ, ζ′, Bernoulli numbers, γ.
//! * [`gcdsum`]: exact weighted gcd-sums, identity right-hand sides,
//!   Ramanujan / Cohen / Anderson–Apostol sums.
//! * [`asymptotic`]: divisor-problem error terms, main-term models, error
//!   samples, lemma checks, sweep grids.
//! * [`meansquare`]: series constants and ∫K² integration.

// `!(x >= lo)` guards also reject NaN; divisor loops index by value.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod asymptotic;
mod error;
pub mod gcdsum;
pub mod meansquare;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
