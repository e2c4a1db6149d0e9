//! Singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! The matrices in this crate are tiny (grasp maps are 6 x 3n), so the
//! quadratic sweep cost is irrelevant and Jacobi's high relative accuracy on
//! small singular values is what matters.

use crate::error::{Error, Result};
use crate::geom::Matrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

/// Returns the `min(rows, cols)` singular values of `m` in descending order.
pub fn svd_singular_values<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    // Orthogonalize the columns of a tall matrix; a wide one is transposed
    // first so the sweep yields exactly min(rows, cols) values.
    let tall = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    let (rows, cols) = (tall.rows(), tall.cols());
    let mut columns: Vec<Vec<T>> = (0..cols).map(|j| tall.column(j)).collect();

    let tol = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..rows {
                    let (x, y) = (columns[p][i], columns[q][i]);
                    alpha = alpha + x * x;
                    beta = beta + y * y;
                    gamma = gamma + x * y;
                }
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (columns[p][i], columns[q][i]);
                    columns[p][i] = c * x - s * y;
                    columns[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<T> = columns
        .iter()
        .map(|col| col.iter().map(|&v| v * v).sum::<T>().sqrt())
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(values)
}

/// Smallest singular value counted over the row space dimension: a matrix
/// with fewer columns than rows is rank deficient as a map onto its
/// codomain, so its smallest value is 0.
pub fn smallest_singular_value_padded<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let values = svd_singular_values(m)?;
    if m.cols() < m.rows() {
        Ok(T::zero())
    } else {
        Ok(*values.last().unwrap())
    }
}
