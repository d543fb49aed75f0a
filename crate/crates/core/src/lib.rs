//! Structured lower triangular Toeplitz kernels.
//!
//! * [`series`]: truncated l.t.T. matrices as first columns, schoolbook products.
//! * [`fft`]: radix-`b` DFT, circulant and Toeplitz products.
//! * [`solver`]: the `O(n log_b n)` diagonal-nullification solver.
//! * [`bernoulli`]: linear systems solved by the Bernoulli numbers, and checks on them.

pub mod bernoulli;
pub mod error;
pub mod fft;
mod intkernel;
pub mod scalars;
pub mod selftest;
pub mod series;
pub mod solver;
pub mod vecfile;

pub use error::{Error, Result};
pub use scalars::{ComplexF, Rational, Scalar};
pub use series::SeriesColumn;
