//! Dense exact linear algebra: matrices, kernels, affine solving and the
//! 3-index tensors holding structure constants and bilinear maps.
//!
//! Echelon conventions are deterministic throughout: first nonzero pivot,
//! pivots normalized to 1, free variables taken in ascending index order.
//! This makes kernel bases and particular solutions reproducible bit for bit.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Dense matrix acting on column vectors; `entry(r, c)` is the coefficient of
/// output basis vector `r` in the image of input basis vector `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

pub fn zero_vec(n: usize, field: &Field) -> Vec<Scalar> {
    vec![Scalar::zero(field); n]
}

pub fn unit_vec(n: usize, i: usize, field: &Field) -> Vec<Scalar> {
    let mut v = zero_vec(n, field);
    v[i] = Scalar::one(field);
    v
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| c.mul(x)).collect()
}

pub fn vec_neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| x.neg()).collect()
}

pub fn vec_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: &Field) -> Matrix {
        Matrix {
            rows,
            cols,
            field: *field,
            data: zero_vec(rows * cols, field),
        }
    }

    pub fn identity(n: usize, field: &Field) -> Matrix {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: &Field) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged matrix rows".into()));
            }
            for e in row {
                if e.field() != *field {
                    return Err(Error::ShapeMismatch("matrix entry in wrong field".into()));
                }
                data.push(e.clone());
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            field: *field,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Scalar>], rows: usize, field: &Field) -> Matrix {
        let mut m = Matrix::zero(rows, cols.len(), field);
        for (j, col) in cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols, "matrix-vector shape mismatch");
        let mut out = zero_vec(self.rows, &self.field);
        for r in 0..self.rows {
            let mut acc = Scalar::zero(&self.field);
            for c in 0..self.cols {
                let e = self.get(r, c);
                if !e.is_zero() && !x[c].is_zero() {
                    acc = acc.add(&e.mul(&x[c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zero(self.rows, other.cols, &self.field);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Scalar::zero(&self.field);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // first nonzero pivot below `row`
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c).sub(&factor.mul(m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Deterministic basis of `{x : self * x = 0}`: free variables in
    /// ascending index order, each basis vector has entry 1 at its free index.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            pivot_of_col[p] = Some(i);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = zero_vec(self.cols, &self.field);
            v[free] = Scalar::one(&self.field);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b`. Returns `None` when inconsistent, otherwise the
    /// particular solution with free variables set to 0, plus a kernel basis.
    pub fn solve_affine(&self, b: &[Scalar]) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
        assert_eq!(b.len(), self.rows, "solve_affine shape mismatch");
        let mut aug = Matrix::zero(self.rows, self.cols + 1, &self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the b column: inconsistent
        }
        let mut x = zero_vec(self.cols, &self.field);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some((x, self.kernel_basis()))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n, &self.field);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one(&self.field));
        }
        let (rr, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zero(n, n, &self.field);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, rr.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Lexicographic enumeration of all `rows x cols` matrices over F_p, in
/// row-major entry order with entries 0, 1, ..., p-1.
pub struct MatrixEnumerator {
    rows: usize,
    cols: usize,
    p: u64,
    digits: Vec<u64>,
    done: bool,
}

impl MatrixEnumerator {
    pub fn new(rows: usize, cols: usize, p: u64) -> MatrixEnumerator {
        MatrixEnumerator {
            rows,
            cols,
            p,
            digits: vec![0; rows * cols],
            done: false,
        }
    }

    pub fn count(rows: usize, cols: usize, p: u64) -> u128 {
        (p as u128).pow((rows * cols) as u32)
    }
}

impl Iterator for MatrixEnumerator {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if self.done {
            return None;
        }
        let field = Field::Prime(self.p);
        let mut m = Matrix::zero(self.rows, self.cols, &field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(
                    r,
                    c,
                    Scalar::Mod {
                        value: self.digits[r * self.cols + c],
                        p: self.p,
                    },
                );
            }
        }
        // increment base-p counter, last entry fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.p {
                break;
            }
            self.digits[i] = 0;
        }
        if self.digits.is_empty() {
            self.done = true;
        }
        Some(m)
    }
}

/// Dense 3-index tensor of scalars; used for structure constants
/// (`t[i][j][k]` = coefficient of basis vector `k` in `e_i * e_j`) and for
/// bilinear maps between different spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    d0: usize,
    d1: usize,
    d2: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(d0: usize, d1: usize, d2: usize, field: &Field) -> Tensor3 {
        Tensor3 {
            d0,
            d1,
            d2,
            field: *field,
            data: zero_vec(d0 * d1 * d2, field),
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d0, self.d1, self.d2)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.d1 + j) * self.d2 + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.data[(i * self.d1 + j) * self.d2 + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Bilinear evaluation: `out_k = sum_{i,j} x_i y_j t[i][j][k]`.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.d0, "tensor first-slot shape mismatch");
        assert_eq!(y.len(), self.d1, "tensor second-slot shape mismatch");
        let mut out = zero_vec(self.d2, &self.field);
        for i in 0..self.d0 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.d1 {
                if y[j].is_zero() {
                    continue;
                }
                let coeff = x[i].mul(&y[j]);
                for k in 0..self.d2 {
                    let e = self.get(i, j, k);
                    if !e.is_zero() {
                        out[k] = out[k].add(&coeff.mul(e));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims());
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims());
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        out
    }
}
