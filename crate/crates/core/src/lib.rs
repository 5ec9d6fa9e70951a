//! Counting integer polynomials whose roots lie in exponential tubes, and
//! matching them with lattice points of `SL(n, Z)` and `Sp(2n, Z)`.

pub mod boxes;
pub mod chamber;
pub mod dyadic;
pub mod entropy;
pub mod error;
pub mod factor;
pub mod par;
pub mod poly;
pub mod rational;
pub mod realize;
pub mod roots;
pub mod volume;

pub use error::{Error, Result};
