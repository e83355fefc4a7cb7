//! Exact solvers for two-player zero-sum games with incompletely specified payoffs.

pub mod bench;
pub mod error;
pub mod format;
pub mod incomplete;
pub mod lp;
pub mod matrix;
pub mod mip;
pub mod rational;
pub mod reductions;
pub mod scalar;
pub mod tournament;

pub use error::{Error, Result};
pub use rational::Rational;
pub use scalar::Scalar;

/// Matrix game over the default exact scalar.
pub type Game = matrix::MatrixGame<Rational>;
