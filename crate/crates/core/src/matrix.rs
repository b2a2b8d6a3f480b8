//! Small dense matrices over the rings of this crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::commpoly::CommPoly;
use crate::uenv::TensorPoly;

/// Ring operations needed by [`Matrix`]. Zero and one are taken "like" an
/// existing entry because the ring (generator count or variable list) is
/// carried by the values.
pub trait MatrixEntry: Clone + PartialEq + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl MatrixEntry for TensorPoly {
    fn zero_like(&self) -> Self {
        TensorPoly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        TensorPoly::one(self.nvars())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        TensorPoly::is_zero(self)
    }
}

impl MatrixEntry for CommPoly {
    fn zero_like(&self) -> Self {
        CommPoly::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        CommPoly::one(self.ring())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        CommPoly::is_zero(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type MatU = Matrix<TensorPoly>;
pub type MatUA = Matrix<CommPoly>;

impl<T: MatrixEntry> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: Vec<Vec<T>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut rows: Vec<Vec<T>> = vec![Vec::with_capacity(c); r];
        for col in cols {
            assert_eq!(col.len(), r, "ragged matrix");
            for (i, x) in col.into_iter().enumerate() {
                rows[i].push(x);
            }
        }
        Self::from_rows(rows)
    }

    /// Identity with entries in the ring of `sample`.
    pub fn identity_like(n: usize, sample: &T) -> Self {
        let mut rows = vec![vec![sample.zero_like(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = sample.one_like();
        }
        Self::from_rows(rows)
    }

    /// Matrix unit `e_ij` (0-based).
    pub fn unit_like(n: usize, i: usize, j: usize, sample: &T) -> Self {
        let mut m = Self::from_rows(vec![vec![sample.zero_like(); n]; n]);
        m.set(i, j, sample.one_like());
        m
    }

    /// Elementary matrix `E_ij(d) = E + d e_ij`, `i != j` (0-based).
    pub fn elementary(n: usize, i: usize, j: usize, d: &T) -> Self {
        assert_ne!(i, j, "elementary matrices are off-diagonal");
        let mut m = Self::identity_like(n, d);
        m.set(i, j, d.clone());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(other.cols);
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).zero_like();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Matrix::from_rows(rows)
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip(other, T::add)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip(other, T::sub)
    }

    fn zip(&self, other: &Matrix<T>, f: impl Fn(&T, &T) -> T) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shapes"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Entrywise image under a ring map.
    pub fn map<U: MatrixEntry>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: MatrixEntry, E>(
        &self,
        f: impl Fn(&T) -> Result<U, E>,
    ) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    /// Sub-block of rows `r` and columns `c`.
    pub fn block(&self, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> Matrix<T> {
        let rows = r
            .map(|i| c.clone().map(|j| self.get(i, j).clone()).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        *x == x.one_like()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// `ad - bc` of a 2x2 matrix.
    pub fn det2(&self) -> T {
        assert_eq!((self.rows, self.cols), (2, 2), "det2 needs a 2x2 matrix");
        self.get(0, 0)
            .mul(self.get(1, 1))
            .sub(&self.get(0, 1).mul(self.get(1, 0)))
    }

    /// Every 2x2 minor, in row-pair-major order.
    pub fn minors2(&self) -> Vec<T> {
        let mut out = Vec::new();
        for i1 in 0..self.rows {
            for i2 in i1 + 1..self.rows {
                for j1 in 0..self.cols {
                    for j2 in j1 + 1..self.cols {
                        let m = self
                            .get(i1, j1)
                            .mul(self.get(i2, j2))
                            .sub(&self.get(i1, j2).mul(self.get(i2, j1)));
                        out.push(m);
                    }
                }
            }
        }
        out
    }

    /// Row-major string form used by the JSON reports.
    pub fn to_strings(&self) -> StringMatrix {
        StringMatrix(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StringMatrix(pub Vec<Vec<String>>);

impl<T: MatrixEntry> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.to_strings().0;
        let width = cells
            .iter()
            .flatten()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        for row in &cells {
            f.write_str("[ ")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{c:<width$}")?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}
