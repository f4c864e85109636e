//! Spectral norm estimation by power iteration on `A* A`.
//!
//! The baseline algorithms need `|A|^2` and `|B|^2` for their admissible
//! stepsize ranges; the self-adaptive algorithms deliberately avoid them.

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, DenseOperator, Vector};

const POWER_TOL: f64 = 1e-12;
const POWER_CAP: usize = 10_000;

/// Squared spectral norm `|A|^2`, the largest eigenvalue of `A* A`.
pub fn spectral_norm_sq(op: &DenseOperator) -> Result<f64> {
    // Deterministic start with a mild index-dependent tilt so that the
    // iterate is not orthogonal to the dominant eigenvector of a symmetric
    // permutation-like operator.
    let n = op.cols();
    let mut v = Vector::new((0..n).map(|i| 1.0 + 1e-3 * (i as f64 + 1.0)).collect())?;
    let vn = norm(&v)?;
    v = v.scale(1.0 / vn)?;

    let mut lambda = 0.0f64;
    for _ in 0..POWER_CAP {
        let mv = op.adjoint_apply(&op.apply(&v)?)?;
        let mv_norm = norm(&mv)?;
        if mv_norm == 0.0 {
            // v is in the kernel of A*A; for the dense operators in scope
            // this only happens for the zero operator.
            return Ok(0.0);
        }
        let next = mv.scale(1.0 / mv_norm)?;
        let rayleigh = inner(&next, &op.adjoint_apply(&op.apply(&next)?)?)?;
        if (rayleigh - lambda).abs() <= POWER_TOL * rayleigh.abs().max(1.0) {
            return Ok(rayleigh);
        }
        lambda = rayleigh;
        v = next;
    }
    Err(Error::NumericalFailure(format!(
        "power iteration did not converge within {POWER_CAP} iterations"
    )))
}

/// Spectral norm `|A|`.
pub fn spectral_norm(op: &DenseOperator) -> Result<f64> {
    Ok(spectral_norm_sq(op)?.sqrt())
}
