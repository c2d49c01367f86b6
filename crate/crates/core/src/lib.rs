//! Fourier coefficients of weak Maass-Poincare series of integral and
//! half-integral weight, their Kohnen plus-space projections, and the
//! canonical bases of weakly holomorphic forms of weight 1/2 and 3/2 together
//! with the mock modular forms attached to them.

pub mod arith;
pub mod bases;
pub mod error;
pub mod kloosterman;
pub mod poincare;
pub mod specfun;
pub mod sum;
pub mod verify;
pub mod weight;

pub use error::{MaassError, Result};
pub use weight::Weight;
