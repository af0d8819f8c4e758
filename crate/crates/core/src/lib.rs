//! Exact computation of quasisymmetric Macdonald polynomials `G_γ(X; q, t)`.

pub mod arith;
pub mod cli;
pub mod error;
pub mod fillings;
pub mod macdonald;
pub mod qsym;
pub mod shapes;

pub use error::{Error, Result};
