//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; no floating point is
//! used anywhere in the crate.

pub mod cyclotomic;
pub mod normal_form;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::{cyclo_inv, cyclo_mul, CycloElem, CyclotomicField};
pub use normal_form::{hnf, integer_left_kernel, row_basis, snf, SnfResult};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse(n)?, d))
        }
        None => Ok(Rat::from_integer(parse(s)?)),
    }
}

/// Formats a rational as `"a"` or `"a/b"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values.into_iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

/// Floor of `n / d` for `d > 0`.
pub fn floor_div(n: &Int, d: &Int) -> Int {
    n.div_floor(d)
}

/// Rounds to the nearest integer, halves rounded up.
pub fn round_rat(r: &Rat) -> Int {
    (r + rat(1, 2)).floor().to_integer()
}

/// `a mod m` in `0..m` for a positive modulus.
pub fn modulo(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows_iter().map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column count".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        let e = &mut out[(i, j)];
                        *e = e.clone() + prod;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .fold(T::zero(), |acc, (i, x)| acc + x * &self[(i, j)])
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, x)| acc + a * x))
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl<T> Matrix<T>
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_fn(rows.len(), cols, |i, j| Int::from(rows[i][j]))
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(rat_int)
    }

    pub fn scale(&self, c: &Int) -> Self {
        self.map(|x| x * c)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        m.to_rat()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.map(|x| x * c)
    }

    pub fn common_denominator(&self) -> Int {
        common_denominator(self.data.iter())
    }

    /// Returns `(d, d·self)` with `d` the least common denominator.
    pub fn to_int_scaled(&self) -> (Int, IntMatrix) {
        let d = self.common_denominator();
        let m = self.map(|x| (x * &d).to_integer());
        (d, m)
    }

    /// Converts to an integer matrix if all entries are integers.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(is_integer) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in c..a.cols {
                        let v = &a[(r, j)] * &f;
                        a[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let (d, m) = self.to_int_scaled();
        Rat::new(m.det(), num_traits::pow(d, self.rows))
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RatMatrix::zeros(0, 0));
        }
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        aug = r;
        Ok(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Solves `x · self = v` for a row vector `x`, if a solution exists.
    pub fn solve_left(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        // self^T x^T = v^T
        let t = self.transpose();
        let n = t.rows;
        let m = t.cols;
        let aug = Matrix::from_fn(n, m + 1, |i, j| if j < m { t[(i, j)].clone() } else { v[i].clone() });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&m) {
            return None;
        }
        let mut x = vec![Rat::zero(); m];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, m)].clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["0", "-3", "2/3", "-7/8"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.det(), int(4));
        let z = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(z.det(), int(-1));
        let s = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.det(), int(0));
    }

    #[test]
    fn rational_inverse() {
        let m = IntMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]).to_rat();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(inv[(0, 0)], rat(2, 3));
        let s = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).to_rat();
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn solve_left_in_and_out_of_span() {
        let b = IntMatrix::from_i64_rows(&[vec![1, -1, 0], vec![0, 1, -1]]).to_rat();
        let x = b.solve_left(&[rat(1, 1), rat(0, 1), rat(-1, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        assert!(b.solve_left(&[rat(1, 1), rat(0, 1), rat(0, 1)]).is_none());
    }

    #[test]
    fn matrix_power() {
        let g = IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert!(g.pow(3).is_identity());
        assert!(!g.pow(2).is_identity());
    }
}
