//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use gell::exact_algebra::{IntMatrix, Matrix, RatMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn all_spec_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture("specs"))
        .expect("fixture dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

/// Plain Gaussian elimination over Q with first-nonzero pivoting.
pub fn oracle_det(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &a[r][c] / &pivot;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let sub = &f * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    det
}

pub fn int_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

pub fn rat_rows(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows()
}

pub fn oracle_int_det(m: &IntMatrix) -> BigInt {
    let d = oracle_det(&int_rows(m));
    assert!(d.is_integer());
    d.to_integer()
}

/// Naive product of row lists.
pub fn oracle_mul<T>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    let (n, m, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    (0..m).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

/// Lexicographic k-subsets of 0..n, built independently of the library.
pub fn oracle_k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The k-th compound matrix from brute-force minors.
pub fn oracle_compound(m: &IntMatrix, k: usize) -> Vec<Vec<BigInt>> {
    let rows = m.to_rows();
    let subsets = oracle_k_subsets(m.rows(), k);
    subsets
        .iter()
        .map(|s| {
            subsets
                .iter()
                .map(|t| {
                    let minor: Vec<Vec<BigRational>> = s
                        .iter()
                        .map(|&i| t.iter().map(|&j| BigRational::from_integer(rows[i][j].clone())).collect())
                        .collect();
                    oracle_det(&minor).to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn random_int_matrix(rng: &mut impl Rng, n: usize, bound: i64) -> IntMatrix {
    Matrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Integer matrix with `1 <= |det| <= max_det`.
pub fn random_step(rng: &mut impl Rng, n: usize, max_det: i64) -> IntMatrix {
    loop {
        let m = random_int_matrix(rng, n, 2);
        let d = oracle_int_det(&m).abs();
        if !d.is_zero() && d <= BigInt::from(max_det) {
            return m;
        }
    }
}

pub fn random_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> BigRational {
    q(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_skew(rng: &mut impl Rng, n: usize, max_den: i64) -> RatMatrix {
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = random_rational(rng, 6, max_den);
            rows[j][i] = -v.clone();
            rows[i][j] = v;
        }
    }
    Matrix::from_rows(rows).expect("square")
}

pub fn upper_entries(m: &RatMatrix) -> Vec<BigRational> {
    let n = m.rows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[(i, j)].clone());
        }
    }
    out
}

pub fn diag(v: &[i64]) -> IntMatrix {
    Matrix::diagonal(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}
