//! Exact umbral calculus over the rationals.
//!
//! Formal power series in `t` act as linear functionals on polynomials in `x`
//! through the pairing `<t^k | x^n> = n! δ(n,k)`. On top of that sit Sheffer and
//! Appell sequences, the Bernoulli, higher-order Bernoulli and Euler families,
//! and a set of self-checking basis-change identities. Every computation is
//! exact; there is no floating-point path.

pub mod classical;
pub mod combinat;
pub mod error;
pub mod expr;
pub mod identities;
pub mod poly;
pub mod rational;
pub mod series;
pub mod sheffer;

pub use error::{Error, Result};
pub use poly::{Degree, Polynomial};
pub use rational::Rational;
pub use series::PowerSeries;
pub use sheffer::{Basis, BasisExpansion, ShefferPair};
