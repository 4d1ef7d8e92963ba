//! Numerical building blocks: the bosonic entropy function, the real
//! dilogarithm, adaptive quadrature and bracketed scalar maximization.
//!
//! Every closed form elsewhere in the crate is checked against
//! [`integrate`], so the quadrature routine is deliberately generic and
//! knows nothing about the channel model.

mod dilog;
mod entropy;
mod optimize;
mod quad;

pub use dilog::dilog;
pub use entropy::g_entropy;
pub use optimize::maximize_scalar;
pub use quad::{integrate, QuadratureSpec};

pub(crate) use entropy::g_of_eigenvalue;
pub(crate) use quad::gauss_legendre_8_mean;
