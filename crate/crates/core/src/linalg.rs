//! Exact dense linear algebra over F_p and Q.
//!
//! Rank over F_p is plain Gaussian elimination. Rank over Q clears
//! denominators row by row and runs fraction-free (Bareiss) elimination on
//! the resulting integer matrix: every update divides by the previous pivot
//! and the division is exact, so entries stay integral and bounded by
//! minors of the input. Kernels and echelon forms use Gauss–Jordan over the
//! field itself.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::Fp;

/// Exact field scalar.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const DOMAIN: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Panics on zero.
    fn recip(&self) -> Self;

    fn rank(m: &Matrix<Self>) -> usize {
        m.gaussian_rank()
    }
}

impl Scalar for Fp {
    const DOMAIN: &'static str = "prime field";

    fn zero() -> Self {
        Fp::ZERO
    }
    fn one() -> Self {
        Fp::ONE
    }
    fn from_i64(v: i64) -> Self {
        Fp::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Fp::is_zero(*self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn negate(&self) -> Self {
        -*self
    }
    fn recip(&self) -> Self {
        self.inverse().expect("inverse of zero")
    }
}

impl Scalar for BigRational {
    const DOMAIN: &'static str = "rationals";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        BigRational::recip(self)
    }

    fn rank(m: &Matrix<Self>) -> usize {
        bareiss_rank(integer_rows(m))
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<S>>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![S::zero(); cols]; rows],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(cols: usize, data: Vec<Vec<S>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[Vec<S>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i][j] = v;
    }

    pub fn push_row(&mut self, row: Vec<S>) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix keeping only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| columns.iter().map(|&j| r[j].clone()).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: columns.len(),
            data,
        }
    }

    /// Exact rank in the scalar's preferred algorithm.
    pub fn rank(&self) -> usize {
        S::rank(self)
    }

    /// Rank by forward Gaussian elimination over the field.
    pub fn gaussian_rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let inv = pivot_row[c].recip();
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let factor = row[c].times(&inv);
                for j in c..self.cols {
                    if !pivot_row[j].is_zero() {
                        row[j] = row[j].minus(&factor.times(&pivot_row[j]));
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Row-reduces in place to reduced row echelon form and returns the
    /// pivot columns. Rows past the pivot count are zero afterwards.
    pub fn reduce_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for v in &mut self.data[r][c..] {
                *v = v.times(&inv);
            }
            let pivot_row = self.data[r].clone();
            for (i, row) in self.data.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for j in c..self.cols {
                    if !pivot_row[j].is_zero() {
                        row[j] = row[j].minus(&factor.times(&pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.reduce_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut x = vec![S::zero(); self.cols];
                x[free] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = m.data[r][free].negate();
                }
                x
            })
            .collect()
    }

    /// Basis of `{w : wᵀ A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<S>> {
        self.transpose().nullspace()
    }

    /// Reduced echelon basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let rank = m.reduce_in_place().len();
        m.data.truncate(rank);
        m.data
    }

    /// `wᵀ A`.
    pub fn left_multiply(&self, w: &[S]) -> Vec<S> {
        assert_eq!(w.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (coef, row) in w.iter().zip(&self.data) {
            if coef.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o = o.plus(&coef.times(v));
                }
            }
        }
        out
    }
}

/// Scales each rational row by the lcm of its denominators.
fn integer_rows(m: &Matrix<BigRational>) -> Vec<Vec<BigInt>> {
    m.row_vectors()
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination rank of an integer matrix.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
        }
        prev = head[r][c].clone();
        r += 1;
    }
    r
}

/// Integer rank by Bareiss; exposed for callers that already hold integer rows.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    bareiss_rank(
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect(),
    )
}

/// True when every entry is zero.
pub fn is_zero_vector<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// True when `a` and `b` are nonzero scalar multiples of each other.
pub fn proportional<S: Scalar>(a: &[S], b: &[S]) -> bool {
    if a.len() != b.len() || is_zero_vector(a) || is_zero_vector(b) {
        return false;
    }
    let m = Matrix::from_rows(a.len(), vec![a.to_vec(), b.to_vec()]);
    m.gaussian_rank() == 1
}
