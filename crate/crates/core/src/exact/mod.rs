//! Exact arithmetic: rationals, polynomials in `n`, rational functions and
//! values of the form `q * pi^e`.

pub mod pi_scaled;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use pi_scaled::PiScaled;
pub use poly::{poly_derivative, poly_shift, UniPoly};
pub use ratfunc::{partial_fractions, ratfunc_normalize, FractionTerm, PartialFractions, RatFunc};
pub use rational::{int, rat, Rational};
