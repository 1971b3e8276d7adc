//! Hardy kernel matrices K_N(φ), their Wiener-Hopf analogues T_N(φ), and
//! numerical experiments on their eigenvalue distribution.

pub mod error;
pub mod factorization;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod symbols;
pub mod szego;
pub mod verify;

pub use error::{HardyError, Result};
