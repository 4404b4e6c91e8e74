//! Exact-arithmetic toolkit for hypergeometric congruences.
//!
//! The crate computes, over exact rationals and p-adics:
//!
//! - truncated hypergeometric series `F(alpha, beta; lambda)_m` ([`series`])
//! - the Morita p-adic Gamma function and Teichmueller lifts ([`padic`])
//! - the step-exponent profile `e(k)`, `s`, `I`, `w` and the shifted
//!   parameter multisets ([`profile`])
//! - finite hypergeometric character sums `H_q` by a p-adic
//!   Gross-Koblitz evaluator and a high-precision complex Gauss-sum
//!   oracle ([`charsum`])
//! - local Euler factors `P_p(T)` from power sums ([`euler`])
//! - modular-form Fourier coefficients from eta products and committed
//!   fixtures ([`modforms`])
//! - a congruence-verification engine covering Dwork congruences, unit
//!   roots, and the supercongruence catalog ([`verify`])
//!
//! With the default `parallel` feature, per-prime sweeps run on rayon;
//! disabling it yields bit-identical sequential evaluation.

pub mod datum;
pub mod padic;
pub mod par;
pub mod series;
pub mod profile;
pub mod charsum;
pub mod euler;
pub mod modforms;
pub mod fixtures;
pub mod verify;
// TODO(scaffold): verify

mod error;
mod rational;

pub use datum::{HypergeometricDatum, Level, Multiset};
pub use error::{Error, Result};
pub use padic::PadicNumber;
pub use rational::{parse_rational, rat, Rational};
