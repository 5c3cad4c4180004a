//! Sparse multivariate polynomials with complex coefficients.

mod json;
mod multi_index;
mod parse;
mod polynomial;

pub use json::{PolyJson, TermJson};
pub use multi_index::{BoxIter, MultiIndex};
pub use polynomial::{Polynomial, PRUNE_EPS};
#[allow(unused_imports)]
pub(crate) use polynomial::orbit_size;
