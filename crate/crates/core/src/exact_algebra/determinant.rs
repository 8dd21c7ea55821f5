use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntMatrix, RatMatrix};
use crate::error::{GellError, Result};

/// Exact determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(GellError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Exact determinant over Q by Gaussian elimination.
pub fn rational_determinant(a: &RatMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(GellError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if pivot != col {
            m.swap_rows(col, pivot);
            det = -det;
        }
        let p = m[(col, col)].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[(r, col)].is_zero() {
                let f = -(&m[(r, col)] / &p);
                m.add_row_multiple(r, col, &f);
            }
        }
    }
    Ok(det)
}
