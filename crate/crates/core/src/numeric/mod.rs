//! Exact and arbitrary-precision arithmetic.

pub mod ball;
pub mod bernoulli;
pub mod gaussian;
pub mod poly;
pub mod radical;
pub mod rational;
pub mod scalar;

pub use ball::Ball;
pub use bernoulli::{bernoulli, bernoulli_poly, BernoulliPolynomial};
pub use gaussian::GaussianRational;
pub use poly::RatPoly;
pub use radical::PositiveRadical;
pub use scalar::ExactScalar;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;

/// Exact integer power of an [`ExactScalar`].
pub fn exact_pow(base: &ExactScalar, exp: i64) -> crate::Result<ExactScalar> {
    base.exact_pow(exp)
}
