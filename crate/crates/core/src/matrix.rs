//! Dense rational matrices: group elements, chart morphisms, fixed spaces.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(RatMatrix { rows: r, cols: c, data })
    }

    /// Convenience for tests and fixtures. Panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows =
            rows.iter().map(|row| row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
        RatMatrix::from_rows(rows).expect("ragged integer matrix")
    }

    /// Block diagonal matrix.
    pub fn block_diag(blocks: &[RatMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = RatMatrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// The standard symplectic matrix of `Σ_j dx_j ∧ dx_{n+j}`:
    /// entry `(j, n+j)` is `1`, entry `(n+j, j)` is `-1`.
    pub fn standard_symplectic(dim: usize) -> Self {
        let n = dim / 2;
        let mut w = RatMatrix::zeros(dim, dim);
        for j in 0..n {
            w.set(j, n + j, BigRational::one());
            w.set(n + j, j, -BigRational::one());
        }
        w
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

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == RatMatrix::identity(self.rows)
    }

    /// Gauss-Jordan inverse over Q.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(r, col, &f);
                inv.axpy_row(r, col, &f);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    // row /= p
    fn scale_row(&mut self, r: usize, p: &BigRational) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = &self.data[idx] / p;
        }
    }

    // row_r -= f * row_src
    fn axpy_row(&mut self, r: usize, src: usize, f: &BigRational) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * f;
            self.data[r * self.cols + j] -= v;
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            let pv = a.get(row, col).clone();
            a.scale_row(row, &pv);
            for r in 0..a.rows {
                if r != row {
                    let f = a.get(r, col).clone();
                    if !f.is_zero() {
                        a.axpy_row(r, row, &f);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Stack matrices with equal column counts vertically.
    pub fn vstack(blocks: &[RatMatrix]) -> Result<RatMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: b.cols });
            }
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// `gᵀ·W·g` against the standard symplectic `W`.
    pub fn is_symplectic(&self) -> bool {
        if !self.is_square() || !self.rows.is_multiple_of(2) {
            return false;
        }
        let w = RatMatrix::standard_symplectic(self.rows);
        let pulled = self.transpose().try_mul(&w).and_then(|m| m.try_mul(self));
        pulled.map(|m| m == w).unwrap_or(false)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().map(|q| if q.is_integer() { q.numer().to_string() } else { q.to_string() }).collect()
            })
            .collect()
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix shapes")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_strings().into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Serialized form used in chart files and reports: rows of `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct MatrixText(pub Vec<Vec<String>>);

impl MatrixText {
    pub fn parse(&self) -> Result<RatMatrix> {
        let rows = self
            .0
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_rows(rows)
    }
}

impl From<&RatMatrix> for MatrixText {
    fn from(m: &RatMatrix) -> Self {
        MatrixText(m.to_strings())
    }
}

/// Parse `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = |message: String| Error::Parse { column: 1, message };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad(format!("invalid rational '{s}'")))?;
    let d: BigInt = den.parse().map_err(|_| bad(format!("invalid rational '{s}'")))?;
    if d.is_zero() {
        return Err(bad(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}
