//! Dense linear algebra and special functions.

pub mod eigen;
pub mod gamma;
pub mod matrix;
pub mod svd;

pub use eigen::{eigh, Spectrum};
pub use gamma::{ln_gamma, ln_gamma_real, log_gamma_abs2};
pub use matrix::DenseMatrix;
pub use svd::{operator_norm, singular_values, trace_norm};
