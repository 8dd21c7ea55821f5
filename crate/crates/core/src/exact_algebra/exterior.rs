use super::{determinant, k_subsets, IntMatrix};
use crate::error::{GellError, Result};

/// k-th exterior power of a square integer matrix.
///
/// Rows and columns are indexed by the lexicographically ordered k-subsets of
/// `{1..n}`; entry (S, T) is the minor `det A[S, T]`.
pub fn exterior_power(a: &IntMatrix, k: usize) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(GellError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if k > n {
        return Err(GellError::DegreeOutOfRange { k, n });
    }
    let basis: Vec<Vec<usize>> = k_subsets(n, k).into_iter().map(|s| s.indices()).collect();
    let size = basis.len();
    let mut out = IntMatrix::zeros(size, size);
    for (r, rows) in basis.iter().enumerate() {
        for (c, cols) in basis.iter().enumerate() {
            out[(r, c)] = determinant(&a.submatrix(rows, cols))?;
        }
    }
    Ok(out)
}
