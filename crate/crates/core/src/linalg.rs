//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: matrices are dense `BigInt`
//! matrices, box maximization works over `BigRational` intervals, and no
//! floating point appears anywhere. Invariant factors overflow fixed-width
//! types even on small inputs, so this is not an optimization knob.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid interval: lo = {lo} > hi = {hi}")]
    InvalidInterval { lo: String, hi: String },
}

/// Dense matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: matrix must be rectangular"
        );
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let x = &self[(j, c)] * q;
            self[(i, c)] -= x;
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let x = &self[(r, j)] * q;
            self[(r, i)] -= x;
        }
    }

    /// row_i += row_j
    fn row_add(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let x = self[(j, c)].clone();
            self[(i, c)] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let x = -self[(i, c)].clone();
            self[(i, c)] = x;
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let x = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += x;
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

/// Exact determinant of a square matrix (fraction-free Bareiss elimination).
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant requires a square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // exact by the Bareiss identity
                m[(i, j)] = num / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}

/// Result of a Smith normal form computation: `u * a * v = d` with `u`, `v`
/// unimodular and `d` diagonal, the diagonal being the invariant-factor
/// chain d_1 | d_2 | ... followed by zeros.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the entry of smallest nonzero absolute value in the trailing
/// block `a[t.., t..]`, ties broken by lowest (row, col). Determinism of the
/// returned transforms depends on this rule.
fn pivot_position(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            let abs = a[(i, j)].abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form with transformation matrices.
///
/// Total on every rectangular matrix, including empty ones. `d` has the shape
/// of `a`; `u` is rows x rows, `v` is cols x cols, both of determinant +-1.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let limit = m.min(n);
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = pivot_position(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear column t below the pivot. Truncating division leaves
        // remainders strictly smaller than the pivot, so a dirty pass means
        // the next pivot selection strictly shrinks.
        let mut dirty = false;
        for i in t + 1..m {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = &d[(i, t)] / &d[(t, t)];
            if !q.is_zero() {
                d.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
            }
            if !d[(i, t)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }

        // Clear row t right of the pivot; column t stays zero because the
        // column operations subtract multiples of the already-cleared column.
        for j in t + 1..n {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = &d[(t, j)] / &d[(t, t)];
            if !q.is_zero() {
                d.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
            }
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }

        // Divisibility sweep: the pivot must divide every entry of the
        // trailing block before we advance, or the chain d_i | d_{i+1} breaks.
        let mut fixed = false;
        'sweep: for i in t + 1..m {
            for j in t + 1..n {
                if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                    d.row_add(t, i);
                    u.row_add(t, i);
                    fixed = true;
                    break 'sweep;
                }
            }
        }
        if fixed {
            continue;
        }

        t += 1;
    }

    for t in 0..limit {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { d, u, v }
}

/// A finitely generated abelian group in invariant-factor normal form:
/// torsion factors d_1 | d_2 | ... (all >= 2) plus a free rank. The
/// representation is unique, so equality is group isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl FinAbGroup {
    /// Normalizes raw factors: units are dropped, the divisibility chain is
    /// required. Panics on zero or negative factors or a broken chain; those
    /// indicate a bug in the caller, not bad user input.
    pub fn new(factors: Vec<BigInt>, free_rank: usize) -> Self {
        let torsion: Vec<BigInt> = factors.into_iter().filter(|f| !f.is_one()).collect();
        for f in &torsion {
            assert!(f > &BigInt::one(), "invariant factor {f} out of range");
        }
        for w in torsion.windows(2) {
            assert!(
                w[1].is_multiple_of(&w[0]),
                "invariant factors must form a divisibility chain"
            );
        }
        FinAbGroup { torsion, free_rank }
    }

    pub fn trivial() -> Self {
        FinAbGroup {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant factors of `Z^ambient_rank / row-span(a)`.
///
/// `a` must have exactly `ambient_rank` columns.
pub fn cokernel_invariants(a: &IntMatrix, ambient_rank: usize) -> FinAbGroup {
    assert_eq!(
        a.cols(),
        ambient_rank,
        "relation matrix must have one column per generator"
    );
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let free_rank = ambient_rank - factors.len();
    FinAbGroup::new(factors, free_rank)
}

/// Gcd of the absolute values of the entries; 0 for the zero (or empty)
/// vector. A class is divisible exactly when this is not 1.
pub fn gcd_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Axis-aligned box with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatBox {
    intervals: Vec<(BigRational, BigRational)>,
}

impl RatBox {
    pub fn new(intervals: Vec<(BigRational, BigRational)>) -> Result<Self, LinalgError> {
        for (lo, hi) in &intervals {
            if lo > hi {
                return Err(LinalgError::InvalidInterval {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
        }
        Ok(RatBox { intervals })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.dim()
            && self
                .intervals
                .iter()
                .zip(point)
                .all(|((lo, hi), x)| lo <= x && x <= hi)
    }
}

/// Maximum of an affine functional over a box, with an attaining vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxMaximum {
    pub value: BigRational,
    pub vertex: Vec<BigRational>,
}

/// Exact maximum of `constant + sum coeffs[i] * x[i]` over the box.
///
/// An affine functional attains its maximum at a vertex, so all `2^dim`
/// vertices are enumerated (dim <= 2 in every use here). The reported vertex
/// is the first attaining one in lo-before-hi binary order.
pub fn max_affine_over_box(
    constant: &BigRational,
    coeffs: &[BigRational],
    bounds: &RatBox,
) -> Result<BoxMaximum, LinalgError> {
    if coeffs.len() != bounds.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: bounds.dim(),
            got: coeffs.len(),
        });
    }
    let dim = bounds.dim();
    let mut best: Option<BoxMaximum> = None;
    for mask in 0u32..(1u32 << dim) {
        let vertex: Vec<BigRational> = (0..dim)
            .map(|i| {
                let (lo, hi) = &bounds.intervals()[i];
                if mask & (1 << i) != 0 {
                    hi.clone()
                } else {
                    lo.clone()
                }
            })
            .collect();
        let value = eval_affine(constant, coeffs, &vertex);
        match &best {
            Some(b) if b.value >= value => {}
            _ => best = Some(BoxMaximum { value, vertex }),
        }
    }
    Ok(best.expect("a box always has at least one vertex"))
}

/// Evaluates `constant + sum coeffs[i] * point[i]`.
pub fn eval_affine(
    constant: &BigRational,
    coeffs: &[BigRational],
    point: &[BigRational],
) -> BigRational {
    assert_eq!(coeffs.len(), point.len());
    coeffs
        .iter()
        .zip(point)
        .fold(constant.clone(), |acc, (c, x)| acc + c * x)
}
