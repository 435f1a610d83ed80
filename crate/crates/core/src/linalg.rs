//! Dense exact linear algebra over [`Scalar`] fields.
//!
//! Dimensions in this crate stay small (at most a few hundred rows), so plain
//! Gauss-Jordan elimination with exact division is the right tool. All
//! routines return errors instead of ever rounding: over a symbolic context a
//! non-constant pivot polynomial cannot be inverted and surfaces as
//! [`Error::NonConstantDivisor`].

use crate::scalar::{FieldContext, Scalar};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, ctx: &FieldContext) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: &FieldContext) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, ctx: &FieldContext) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        if r == 0 {
            return Self::zeros(0, 0, ctx);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self, ctx: &FieldContext) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, ctx);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    /// Matrix product; row-vector convention throughout the crate, so
    /// `v * (a.mul(b))` equals `(v * a) * b`.
    pub fn mul(&self, rhs: &Matrix, ctx: &FieldContext) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols, ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j);
                    out.set(i, j, cur + &(a * b));
                }
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn stack(mats: &[&Matrix], ctx: &FieldContext) -> Matrix {
        let cols = mats.first().map_or(0, |m| m.cols);
        let rows = mats.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(rows, cols, ctx);
        let mut r = 0;
        for m in mats {
            assert_eq!(m.cols, cols);
            for i in 0..m.rows {
                for j in 0..cols {
                    out.set(r, j, m.at(i, j).clone());
                }
                r += 1;
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Result<Vec<usize>, Error> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = self.at(r, c).inv()?;
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j) - &(&factor * self.at(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self) -> Result<usize, Error> {
        let mut m = self.clone();
        Ok(m.rref()?.len())
    }

    /// Basis of the right null space `{x : A x = 0}`, one vector per free
    /// column of the reduced form.
    pub fn null_space(&self, ctx: &FieldContext) -> Result<Vec<Vec<Scalar>>, Error> {
        let mut m = self.clone();
        let pivots = m.rref()?;
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut x = vec![ctx.zero(); self.cols];
            x[f] = ctx.one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -(m.at(i, f).clone());
            }
            basis.push(x);
        }
        Ok(basis)
    }
}

/// Coordinates of `target` as a combination of the given rows (which must be
/// linearly independent), via elimination on the augmented system. Errors if
/// the target lies outside the span.
pub fn express_in_rows(
    rows: &[Vec<Scalar>],
    target: &[Scalar],
    ctx: &FieldContext,
) -> Result<Vec<Scalar>, Error> {
    // solve x . R = target for the row vector x: transpose to R^T x^T = t^T
    let k = rows.len();
    let m = target.len();
    if k == 0 {
        return if target.iter().all(|c| c.is_zero()) {
            Ok(Vec::new())
        } else {
            Err(Error::Inconsistent("vector outside empty span".into()))
        };
    }
    let mut aug = Matrix::zeros(m, k + 1, ctx);
    for (r, row) in rows.iter().enumerate() {
        for c in 0..m {
            aug.set(c, r, row[c].clone());
        }
    }
    for c in 0..m {
        aug.set(c, k, target[c].clone());
    }
    let pivots = aug.rref()?;
    if pivots.contains(&k) {
        return Err(Error::Inconsistent("vector not in the span".into()));
    }
    let mut x = vec![ctx.zero(); k];
    for (row_idx, &p) in pivots.iter().enumerate() {
        x[p] = aug.at(row_idx, k).clone();
    }
    Ok(x)
}

/// An incrementally maintained row space in reduced echelon form. Used for
/// closure computations (fixed-point span growth) and for expressing vectors
/// in a chosen basis.
#[derive(Clone, Debug)]
pub struct RowSpan {
    ctx: FieldContext,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(cols: usize, ctx: &FieldContext) -> Self {
        RowSpan {
            ctx: *ctx,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    v[j] = &v[j] - &(&factor * &row[j]);
                }
            }
        }
    }

    /// Adds a vector to the span. Returns `true` iff the rank grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> Result<bool, Error> {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = v[p].inv()?;
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // clear the new pivot column in existing rows
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for j in 0..self.cols {
                if !v[j].is_zero() {
                    row[j] = &row[j] - &(&factor * &v[j]);
                }
            }
        }
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        Ok(true)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the stored (reduced) basis, if `v` lies in the
    /// span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut w = v.to_vec();
        let mut coords = vec![self.ctx.zero(); self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let factor = w[p].clone();
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    w[j] = &w[j] - &(&factor * &row[j]);
                }
            }
            coords[k] = factor;
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }
}
