//! Multivariate stable polynomials: sparse arithmetic, circular domains,
//! linear operators and their symbols, stability certifiers and falsifiers,
//! apolarity, multiplier sequences and lattice-model polynomials.
//!
//! Every algorithm is generic over the real scalar [`Real`] (`f32` or `f64`);
//! the `f64` instantiations are re-exported under short aliases.

pub mod apolarity;
pub mod domains;
pub mod error;
pub mod generators;
pub mod multiplier;
pub mod operators;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod stability;
pub mod statmech;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{MultiIndex, Polynomial, PRUNE_EPS};
pub use scalar::{binomial, factorial, falling, Real, C};

/// Double-precision polynomial.
pub type Poly = Polynomial<f64>;
/// Single-precision polynomial.
pub type Poly32 = Polynomial<f32>;
