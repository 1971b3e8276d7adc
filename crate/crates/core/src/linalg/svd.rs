//! Singular values, trace norm and operator norm.

use super::eigen::eigh;
use super::matrix::DenseMatrix;
use crate::error::{HardyError, Result};

/// Singular values below this fraction of σ_max are reported as zero.
pub const CLAMP_RELATIVE: f64 = 1e-12;

/// All singular values, descending.
///
/// Symmetric input goes through |eigh|; anything else through the
/// eigenvalues of the smaller of AᵀA and AAᵀ. Gram eigenvalues within
/// rounding noise of zero become zero singular values.
pub fn singular_values(mat: &DenseMatrix) -> Result<Vec<f64>> {
    if mat.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(HardyError::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let mut sv: Vec<f64> = if mat.is_square() && mat.symmetry_defect() == 0.0 {
        eigh(mat)?.values().iter().map(|x| x.abs()).collect()
    } else {
        let gram = if mat.rows() >= mat.cols() {
            mat.gram()
        } else {
            mat.transpose().gram()
        };
        let spec = eigh(&gram)?;
        let floor = spec.max() * f64::EPSILON * gram.rows() as f64;
        spec.values()
            .iter()
            .map(|&x| if x <= floor { 0.0 } else { x.sqrt() })
            .collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    let cut = CLAMP_RELATIVE * sv.first().copied().unwrap_or(0.0);
    for s in &mut sv {
        if *s < cut {
            *s = 0.0;
        }
    }
    Ok(sv)
}

/// Σ σ_i.
pub fn trace_norm(mat: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(mat)?.iter().sum())
}

/// σ_max.
pub fn operator_norm(mat: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(mat)?.first().copied().unwrap_or(0.0))
}
