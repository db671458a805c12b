//! Independent reference implementations used as test oracles.
//!
//! Everything here recomputes a quantity by a different route than the
//! library proper: determinants by cofactor expansion instead of
//! fraction-free elimination, invariant factors by determinantal divisors
//! instead of row reduction, ranks by modular Gaussian elimination,
//! signatures by rational congruence diagonalization. Compiled only under
//! the `testutil` feature, which the test targets enable.

use crate::linalg::{FinAbGroup, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let minor = minor_matrix(m, 0, j);
        let term = &m[(0, j)] * det_cofactor(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn minor_matrix(m: &IntMatrix, skip_row: usize, skip_col: usize) -> IntMatrix {
    let rows = (0..m.rows())
        .filter(|&i| i != skip_row)
        .map(|i| {
            (0..m.cols())
                .filter(|&j| j != skip_col)
                .map(|j| m[(i, j)].clone())
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows)
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(i + 1, n, size, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn select_submatrix(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    IntMatrix::from_rows(
        rows.iter()
            .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
            .collect(),
    )
}

/// Invariant factors by the determinantal-divisor chain:
/// d_i = gcd(i x i minors) / gcd((i-1) x (i-1) minors). Exponential in the
/// matrix size; fine for the small matrices used in tests.
pub fn invariant_factors_oracle(m: &IntMatrix) -> Vec<BigInt> {
    let maxdim = m.rows().min(m.cols());
    let mut gcds = Vec::new();
    'sizes: for size in 1..=maxdim {
        let mut g = BigInt::zero();
        for rsel in combinations(m.rows(), size) {
            for csel in combinations(m.cols(), size) {
                let sub = select_submatrix(m, &rsel, &csel);
                g = g.gcd(&det_cofactor(&sub));
            }
        }
        if g.is_zero() {
            break 'sizes;
        }
        gcds.push(g);
    }
    let mut factors = Vec::with_capacity(gcds.len());
    let mut prev = BigInt::one();
    for g in gcds {
        factors.push(&g / &prev);
        prev = g;
    }
    factors
}

/// Cokernel of the row span inside Z^ambient_rank, via the determinantal
/// oracle rather than elimination.
pub fn cokernel_oracle(m: &IntMatrix, ambient_rank: usize) -> FinAbGroup {
    assert_eq!(m.cols(), ambient_rank);
    let factors = invariant_factors_oracle(m);
    let free_rank = ambient_rank - factors.len();
    FinAbGroup::new(factors, free_rank)
}

/// Rank of the matrix over F_p by Gaussian elimination.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    assert!(p >= 2);
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = m[(i, j)].mod_floor(&pb);
                    u64::try_from(&r).expect("residue fits in u64")
                })
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&i| a[i][col] % p != 0) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let inv = mod_inverse(a[rank][col], p);
        for j in col..cols {
            a[rank][j] = a[rank][j] % p * inv % p;
        }
        for i in 0..rows {
            if i != rank && a[i][col] % p != 0 {
                let factor = a[i][col] % p;
                for j in col..cols {
                    a[i][j] = (a[i][j] + (p - factor) * a[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime in every use here
    let mut result: u128 = 1;
    let mut base = (a % p) as u128;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    result as u64
}

/// Inertia (positive, negative) of a symmetric integer matrix by congruence
/// diagonalization over the rationals.
pub fn signature_by_congruence(gram: &IntMatrix) -> (usize, usize) {
    let n = gram.rows();
    assert!(gram.is_square());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(gram[(i, j)].clone()))
                .collect()
        })
        .collect();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                // symmetric row+column addition keeps congruence and makes
                // the pivot 2*a[i][k] != 0 (characteristic zero)
                for j in 0..n {
                    let x = a[i][j].clone();
                    a[k][j] += x;
                }
                for row in a.iter_mut() {
                    let x = row[i].clone();
                    row[k] += x;
                }
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in 0..n {
                let x = &factor * &a[k][j];
                a[i][j] -= x;
            }
            for row in a.iter_mut() {
                let x = &factor * &row[k];
                row[i] -= x;
            }
        }
    }
    let mut pos = 0;
    let mut neg = 0;
    for i in 0..n {
        if a[i][i].is_positive() {
            pos += 1;
        } else if a[i][i].is_negative() {
            neg += 1;
        }
    }
    (pos, neg)
}

/// The primes up to 97, for the prime-by-prime H1 check.
pub const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];
