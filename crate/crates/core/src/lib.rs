//! Numerical verification toolkit for small fractional parts of
//! polynomials evaluated at primes.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the scalar to `f64`.

pub mod counting;
pub mod error;
pub mod expsum;
pub mod fixed;
pub mod primes;
pub mod quad;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod search;
pub mod sieve;

pub use error::{Error, Result};
pub use fixed::{Certified, FixedReal};
pub use scalar::Real;

pub type BuchstabTableF64 = sieve::BuchstabTable<f64>;
pub type GaussLegendreF64 = quad::GaussLegendre<f64>;
pub type AdaptiveF64 = quad::Adaptive<f64>;
pub type CompensatedSumF64 = scalar::CompensatedSum<f64>;
pub type Complex64 = num_complex::Complex<f64>;
