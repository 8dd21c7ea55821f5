use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::skew_violation;
use super::{RatMatrix, Subset};
use crate::error::{GellError, Result};

/// Pfaffian of a skew-symmetric rational matrix.
///
/// Odd dimension gives 0 and the empty matrix gives 1. Computed by first-row
/// expansion `Pf(S) = Σ_j (-1)^j s_{1j} Pf(S without rows/cols 1, j)` with
/// memoisation on the remaining index set.
pub fn pfaffian(s: &RatMatrix) -> Result<BigRational> {
    if let Some((row, col)) = skew_violation(s) {
        if !s.is_square() {
            return Err(GellError::NotSquare {
                rows: s.rows(),
                cols: s.cols(),
            });
        }
        return Err(GellError::NotSkewSymmetric { row, col });
    }
    let n = s.rows();
    if n > super::subset::MAX_DIMENSION {
        return Err(GellError::DimensionTooLarge {
            dim: n,
            bound: super::subset::MAX_DIMENSION,
        });
    }
    let mut memo = HashMap::new();
    Ok(pf_rec(s, Subset::full(n), &mut memo))
}

/// Pfaffian of the principal submatrix on an even-cardinality index subset
/// (0-based indices, taken in increasing order). `Pf(S_∅) = 1`.
pub fn pfaffian_minor(s: &RatMatrix, subset: Subset) -> Result<BigRational> {
    if !subset.len().is_multiple_of(2) {
        return Err(GellError::OddSubset(subset.len()));
    }
    if let Some(&i) = subset.indices().iter().find(|&&i| i >= s.rows()) {
        return Err(GellError::DimensionMismatch(format!(
            "index {} outside a {}x{} matrix",
            i + 1,
            s.rows(),
            s.cols()
        )));
    }
    let idx = subset.indices();
    pfaffian(&s.submatrix(&idx, &idx))
}

fn pf_rec(s: &RatMatrix, remaining: Subset, memo: &mut HashMap<u32, BigRational>) -> BigRational {
    if remaining.is_empty() {
        return BigRational::one();
    }
    if remaining.len() % 2 == 1 {
        return BigRational::zero();
    }
    if let Some(v) = memo.get(&remaining.mask()) {
        return v.clone();
    }
    let idx = remaining.indices();
    let first = idx[0];
    let mut total = BigRational::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let entry = &s[(first, j)];
        if entry.is_zero() {
            continue;
        }
        let rest = Subset::from_mask(remaining.mask() & !(1 << first) & !(1 << j));
        let term = entry * pf_rec(s, rest, memo);
        // pos is the 0-based position of j among the remaining indices; the
        // sign of the expansion term is (-1)^(pos + 1).
        if pos % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    memo.insert(remaining.mask(), total.clone());
    total
}
