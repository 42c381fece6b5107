//! Dense row-major matrices over exact integers and rationals.
//!
//! Vectors are rows; a matrix `M` acts on a row vector `x` by `x * M`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows. Returns `None` when the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        let data = rows.into_iter().flatten().collect();
        Some(Matrix { rows: r, cols: c, data })
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self
    where
        T: Clone,
    {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }
}

impl<T: Zero + One + Clone> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Entry types with a matrix product.
pub trait Scalar: Clone + Zero + Sized {
    fn matmul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self>;
}

fn naive_matmul<T>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T>
where
    T: Clone + Zero,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut out = Matrix::from_fn(a.rows, b.cols, |_, _| T::zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let p = x * &b[(k, j)];
                let slot = &mut out[(i, j)];
                *slot = core::mem::replace(slot, T::zero()) + p;
            }
        }
    }
    out
}

impl Scalar for BigInt {
    fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        naive_matmul(a, b)
    }
}

impl Scalar for BigRational {
    // integer product over common denominators, one reduction per entry
    fn matmul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
        let (da, ia) = a.clear_denominators();
        let (db, ib) = b.clear_denominators();
        let d = da * db;
        let prod = naive_matmul(&ia, &ib);
        if d.is_one() {
            return prod.map(|x| BigRational::from_integer(x.clone()));
        }
        prod.map(|x| BigRational::new(x.clone(), d.clone()))
    }
}

impl<'a, T: Scalar> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product: dimension mismatch");
        T::matmul(self, rhs)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c * x)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = T::zero();
                for (i, vi) in v.iter().enumerate() {
                    acc = acc + vi * &self[(i, j)];
                }
                acc
            })
            .collect()
    }
}

impl IntMatrix {
    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("ragged rows")
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_alternating(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero() && (i + 1..self.cols).all(|j| self[(i, j)] == -&self[(j, i)])
            })
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }
}

impl RatMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rational()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    /// Returns the integer matrix when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.map(BigRational::to_integer))
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut acc = BigInt::one();
        for d in self.data.iter().map(BigRational::denom) {
            if !d.is_one() && !acc.is_multiple_of(d) {
                acc = acc.lcm(d);
            }
        }
        acc
    }

    /// Splits `self` as `N^{-1} * A` with `A` integral and `N` the minimal common denominator.
    pub fn clear_denominators(&self) -> (BigInt, IntMatrix) {
        let n = self.denominator_lcm();
        let a = if n.is_one() {
            self.map(|x| x.numer().clone())
        } else {
            self.map(|x| if x.denom() == &n { x.numer().clone() } else { x.numer() * (&n / x.denom()) })
        };
        (n, a)
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let factor = &a[(i, k)] / &pivot;
                for j in k..n {
                    let v = &factor * &a[(k, j)];
                    a[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Inverse by fraction-free Gauss–Jordan on the integer numerator; `None`
    /// when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let (den, num) = self.clear_denominators();
        let mut a = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                num[(i, j)].clone()
            } else if j - n == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        for k in 0..n {
            let p = (k..n).filter(|&i| !a[(i, k)].is_zero()).min_by_key(|&i| a[(i, k)].magnitude().bits())?;
            a.swap_rows(p, k);
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let g = a[(k, k)].gcd(&a[(i, k)]);
                let (pk, pi) = (&a[(k, k)] / &g, &a[(i, k)] / &g);
                let mut content = BigInt::zero();
                for j in 0..2 * n {
                    let v = &pk * &a[(i, j)] - &pi * &a[(k, j)];
                    content = content.gcd(&v);
                    a[(i, j)] = v;
                }
                if !content.is_zero() && !content.is_one() {
                    for j in 0..2 * n {
                        a[(i, j)] /= &content;
                    }
                }
            }
        }
        Some(Matrix::from_fn(n, n, |i, j| BigRational::new(&a[(i, n + j)] * &den, a[(i, i)].clone())))
    }
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}
