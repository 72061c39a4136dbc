//! Dense exact-integer matrices.
//!
//! All arithmetic is over arbitrary-precision integers; there is no floating
//! point anywhere in this crate. Action matrices follow the row convention:
//! row `i` holds the coordinates of the image of the `i`-th basis element.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::{Error, Result};

/// Dense row-major matrix over `BigInt`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(f(i, j)));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| rows[i][j])
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }


    pub fn transpose(&self) -> IntMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }


    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
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

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == IntMatrix::identity(self.rows)
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = -std::mem::take(v);
        }
        out
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }


    pub fn set_column(&mut self, j: usize, col: &[BigInt]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Copy of the square sub-block at `(off, off)` of size `n`.
    pub fn sub_block(&self, off: usize, n: usize) -> IntMatrix {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(off + i, off + j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact inverse of a unimodular matrix.
    ///
    /// Runs exact rational Gauss-Jordan and verifies that the determinant is
    /// `+1` or `-1`; any other determinant is an error because in this crate
    /// only integral changes of homology basis are ever inverted.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        use num_rational::BigRational;
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let d = self.det();
        if !(d == BigInt::one() || d == -BigInt::one()) {
            return Err(Error::NotUnimodular(d));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(BigInt::from((i == j) as i64)))
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("unimodular matrix has full rank");
            a.swap(col, piv);
            inv.swap(col, piv);
            let pv = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= pv.clone();
            }
            for x in inv[col].iter_mut() {
                *x /= pv.clone();
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        let mut out = IntMatrix::zeros(n, n);
        for (i, row) in inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                debug_assert!(x.is_integer());
                out.set(i, j, x.to_integer());
            }
        }
        Ok(out)
    }

    /// Characteristic polynomial coefficients `[1, c1, ..., cn]` of
    /// `x^n + c1 x^{n-1} + ... + cn`, by the Faddeev-LeVerrier recursion.
    /// All divisions are exact over the integers.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![BigInt::one()];
        let mut aux = IntMatrix::zeros(n, n);
        for k in 1..=n {
            // aux <- M * aux + c_{k-1} * I
            let mut next = self.mul(&aux);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[k - 1];
                next.set(i, i, v);
            }
            aux = next;
            let ma = self.mul(&aux);
            let ck = -ma.trace() / BigInt::from(k as i64);
            debug_assert!((-ma.trace()) % BigInt::from(k as i64) == BigInt::zero());
            coeffs.push(ck);
        }
        coeffs
    }

    /// JSON value: array of rows, entries as decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        (0..self.cols)
                            .map(|j| Value::String(self.get(i, j).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Parse the array-of-rows format. Entries may be decimal strings or
    /// plain JSON integers.
    pub fn from_json(v: &Value) -> Result<IntMatrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix: expected an array of rows".into()))?;
        let mut data: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix: each row must be an array".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                let n = match e {
                    Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("matrix: bad integer {s:?}")))?,
                    Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| Error::Parse(format!("matrix: bad number {n}")))?,
                    _ => {
                        return Err(Error::Parse(
                            "matrix: entries must be integers or strings".into(),
                        ))
                    }
                };
                out.push(n);
            }
            data.push(out);
        }
        let r = data.len();
        let c = data.first().map_or(0, |x| x.len());
        if data.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("matrix: ragged rows".into()));
        }
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in data.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for IntMatrix {
    /// Plain-text aligned grid.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        let mut widths = vec![0usize; self.cols];
        for row in &strings {
            for (j, s) in row.iter().enumerate() {
                widths[j] = widths[j].max(s.len());
            }
        }
        for row in &strings {
            f.write_str("[")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{s:>w$}", w = widths[j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The `p x p` cyclic permutation block: ones on the superdiagonal and a one
/// in the bottom-left corner. Row `i` is the image of the `i`-th basis
/// element under the order-`p` cycle.
pub fn perm_block(p: i64) -> IntMatrix {
    assert!(p >= 2);
    let n = p as usize;
    IntMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 || (i == n - 1 && j == 0) {
            1
        } else {
            0
        }
    })
}

/// The `(p-1) x (p-1)` block with ones on the superdiagonal and a last row of
/// all `-1`: the action of an order-`p` cycle on an orbit whose last image is
/// the negated sum of the others.
pub fn nonperm_block(p: i64) -> IntMatrix {
    assert!(p >= 2);
    let n = (p - 1) as usize;
    IntMatrix::from_fn(n, n, |i, j| {
        if i == n - 1 {
            -1
        } else if j == i + 1 {
            1
        } else {
            0
        }
    })
}

/// The reference symplectic form in the four-block layout
/// `[[0, I_d, 0, 0], [-I_d, 0, 0, 0], [0, 0, 0, I_q], [0, 0, -I_q, 0]]`.
pub fn standard_j(d: usize, q: usize) -> IntMatrix {
    let n = 2 * d + 2 * q;
    let mut j = IntMatrix::zeros(n, n);
    for i in 0..d {
        j.set(i, d + i, BigInt::one());
        j.set(d + i, i, -BigInt::one());
    }
    for i in 0..q {
        j.set(2 * d + i, 2 * d + q + i, BigInt::one());
        j.set(2 * d + q + i, 2 * d + i, -BigInt::one());
    }
    j
}

/// True iff `M^T J M = J`.
pub fn is_symplectic(m: &IntMatrix, j: &IntMatrix) -> bool {
    m.is_square() && j.is_square() && m.rows() == j.rows() && m.transpose().mul(j).mul(m) == *j
}

/// Least `k <= bound` with `M^k = I`, if any.
pub fn matrix_order(m: &IntMatrix, bound: usize) -> Option<usize> {
    assert!(m.is_square());
    let mut acc = IntMatrix::identity(m.rows());
    for k in 1..=bound {
        acc = acc.mul(m);
        if acc.is_identity() {
            return Some(k);
        }
    }
    None
}

/// `B * M * B^{-1}` for unimodular `B`.
pub fn conjugate(m: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() || m.rows() != b.rows() || !b.is_square() {
        return Err(Error::Dimension("conjugate: sizes must agree".into()));
    }
    let binv = b.unimodular_inverse()?;
    Ok(b.mul(m).mul(&binv))
}
