//! Numeric export of a lattice basis `A` with `AᵀA = B`. Nothing in the
//! qualification logic depends on this; it exists for inspection only.

use crate::forms::QuadForm;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),
    #[error("floating-point Cholesky factorization failed")]
    FactorizationFailed,
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ToleranceNotMet { residual: f64, tol: f64 },
}

/// Lower-triangular `A` with `‖AᵀA - B‖∞ <= tol` (max-entry norm), rows
/// returned in order.
///
/// Computed as a Cholesky factor of `B` with both index orders reversed:
/// if `JBJ = LLᵀ` with `J` the exchange matrix, then `A = J Lᵀ J` is lower
/// triangular and `AᵀA = B`.
pub fn cholesky_basis(form: &QuadForm, tol: f64) -> Result<Vec<Vec<f64>>, BasisError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(BasisError::InvalidTolerance(tol));
    }
    let d = form.dim();
    let b = DMatrix::from_fn(d, d, |i, j| form.twice_gram(i, j) as f64 / 2.0);
    let flipped = DMatrix::from_fn(d, d, |i, j| b[(d - 1 - i, d - 1 - j)]);
    let l = flipped
        .cholesky()
        .ok_or(BasisError::FactorizationFailed)?
        .l();
    let a = DMatrix::from_fn(d, d, |i, j| l[(d - 1 - j, d - 1 - i)]);
    let residual = (a.transpose() * &a - &b).amax();
    if residual.is_nan() || residual > tol {
        return Err(BasisError::ToleranceNotMet { residual, tol });
    }
    Ok((0..d).map(|i| (0..d).map(|j| a[(i, j)]).collect()).collect())
}
