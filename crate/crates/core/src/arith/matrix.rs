use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::scalar::Q;
use super::ArithError;

/// Dense row-major matrix over Q. Whether it is a matrix over O or over K is
/// a property checked by `is_integral`, not a separate type.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

pub type MatrixO = Mat;
pub type MatrixK = Mat;

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }
    pub fn scalar(n: usize, c: &Q) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }
    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::int(x)).collect()).collect())
    }
    /// Build a matrix whose columns are the given vectors.
    pub fn from_cols(nrows: usize, cols: &[Vec<Q>]) -> Mat {
        let mut m = Mat::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m[(i, j)] = x.clone();
                }
            }
        }
        m
    }
    pub fn col_vector(v: &[Q]) -> Mat {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[Q] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [Q] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }
    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }
    pub fn set_col(&mut self, j: usize, v: &[Q]) {
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }
    pub fn is_integral(&self, p: u64) -> bool {
        self.data.iter().all(|x| x.is_integral(p))
    }
    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)];
                if !x.is_zero() {
                    t[(j, i)] = x.clone();
                }
            }
        }
        t
    }
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product {:?} x {:?}", self.shape(), o.shape());
        let mut out = Mat::zeros(self.rows, o.cols);
        let oc = o.cols;
        for i in 0..self.rows {
            let orow = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &o.data[k * oc..(k + 1) * oc];
                if a.is_one() {
                    for (x, b) in orow.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *x += b;
                        }
                    }
                } else {
                    for (x, b) in orow.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *x += &(a * b);
                        }
                    }
                }
            }
        }
        out
    }
    pub fn try_mul(&self, o: &Mat) -> Result<Mat, ArithError> {
        if self.cols != o.rows {
            return Err(ArithError::Shape(format!("{:?} x {:?}", self.shape(), o.shape())));
        }
        Ok(self.mul(o))
    }
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Q::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o += &(a * b);
                }
            }
        }
        out
    }
    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Q::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(i)) {
                if !b.is_zero() {
                    *o += &(a * b);
                }
            }
        }
        out
    }
    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!(self.shape(), o.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!(self.shape(), o.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
    pub fn add_assign(&mut self, o: &Mat) {
        assert_eq!(self.shape(), o.shape());
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a += b;
        }
    }
    /// self += c * o
    pub fn axpy(&mut self, c: &Q, o: &Mat) {
        assert_eq!(self.shape(), o.shape());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }
    pub fn scale(&self, c: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }
    pub fn neg(&self) -> Mat {
        self.scale(&Q::int(-1))
    }
    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut t = Q::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }
    /// Kronecker product: block (i, j) is self[i, j] * o.
    pub fn kron(&self, o: &Mat) -> Mat {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut m = Mat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = &o[(k, l)];
                        if !b.is_zero() {
                            m[(i * o.rows + k, j * o.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        m
    }
    pub fn hstack(parts: &[&Mat]) -> Mat {
        let r = parts.first().map_or(0, |m| m.rows);
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(r, c);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, r);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }
    pub fn vstack(parts: &[&Mat]) -> Mat {
        let c = parts.first().map_or(0, |m| m.cols);
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(r, c);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, c);
            out.set_block(off, 0, m);
            off += m.rows;
        }
        out
    }
    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(r, c);
        let (mut i0, mut j0) = (0, 0);
        for m in parts {
            out.set_block(i0, j0, m);
            i0 += m.rows;
            j0 += m.cols;
        }
        out
    }
    pub fn set_block(&mut self, i0: usize, j0: usize, m: &Mat) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(i0 + i, j0 + j)] = m[(i, j)].clone();
            }
        }
    }
    pub fn block(&self, i0: usize, j0: usize, r: usize, c: usize) -> Mat {
        let mut m = Mat::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m[(i, j)] = self[(i0 + i, j0 + j)].clone();
            }
        }
        m
    }
    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            m.row_mut(ii).clone_from_slice(self.row(i));
        }
        m
    }
    /// Column-major flattening (vec operator).
    pub fn vec(&self) -> Vec<Q> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }
    pub fn unvec(v: &[Q], rows: usize, cols: usize) -> Mat {
        assert_eq!(v.len(), rows * cols);
        let mut m = Mat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = v[j * rows + i].clone();
            }
        }
        m
    }
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            self.data.swap(a * c + j, b * c + j);
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
    /// row[a] += c * row[b]
    pub fn add_row_multiple(&mut self, a: usize, b: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let cols = self.cols;
        let (ra, rb) = if a < b {
            let (x, y) = self.data.split_at_mut(b * cols);
            (&mut x[a * cols..(a + 1) * cols], &y[..cols])
        } else {
            let (x, y) = self.data.split_at_mut(a * cols);
            (&mut y[..cols], &x[b * cols..(b + 1) * cols])
        };
        for (x, y) in ra.iter_mut().zip(rb) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }
    /// col[a] += c * col[b]
    pub fn add_col_multiple(&mut self, a: usize, b: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let y = &self.data[i * self.cols + b];
            if !y.is_zero() {
                let t = c * y;
                self.data[i * self.cols + a] += &t;
            }
        }
    }
    pub fn scale_row(&mut self, a: usize, c: &Q) {
        for x in self.row_mut(a) {
            if !x.is_zero() {
                *x = &*x * c;
            }
        }
    }
    pub fn scale_col(&mut self, a: usize, c: &Q) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + a];
            if !x.is_zero() {
                *x = &*x * c;
            }
        }
    }
    /// Inverse over K via Gauss-Jordan.
    pub fn inverse(&self) -> Result<Mat, ArithError> {
        if self.rows != self.cols {
            return Err(ArithError::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[(r, c)].is_zero()).ok_or(ArithError::Singular)?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let f = a[(c, c)].recip();
            a.scale_row(c, &f);
            inv.scale_row(c, &f);
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = -&a[(r, c)];
                    a.add_row_multiple(r, c, &f);
                    inv.add_row_multiple(r, c, &f);
                }
            }
        }
        Ok(inv)
    }
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut d = Q::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Q::zero();
            };
            if piv != c {
                a.swap_rows(c, piv);
                d = -d;
            }
            let pv = a[(c, c)].clone();
            d = &d * &pv;
            let inv = pv.recip();
            for r in c + 1..n {
                if !a[(r, c)].is_zero() {
                    let f = -(&a[(r, c)] * &inv);
                    a.add_row_multiple(r, c, &f);
                }
            }
        }
        d
    }
    /// Rank over K.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (n, m) = a.shape();
        let mut r = 0;
        for c in 0..m {
            let Some(piv) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = a[(r, c)].recip();
            for i in r + 1..n {
                if !a[(i, c)].is_zero() {
                    let f = -(&a[(i, c)] * &inv);
                    a.add_row_multiple(i, r, &f);
                }
            }
            r += 1;
            if r == n {
                break;
            }
        }
        r
    }
    /// Solve self * x = b over K; None if inconsistent.
    pub fn solve_k(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let (n, m) = self.shape();
        let mut a = Mat::hstack(&[self, b]);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(piv) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = a[(r, c)].recip();
            a.scale_row(r, &inv);
            for i in 0..n {
                if i != r && !a[(i, c)].is_zero() {
                    let f = -&a[(i, c)];
                    a.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        for i in r..n {
            if (m..m + b.cols).any(|j| !a[(i, j)].is_zero()) {
                return None;
            }
        }
        let mut x = Mat::zeros(m, b.cols);
        for (i, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(c, j)] = a[(i, m + j)].clone();
            }
        }
        Some(x)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Q;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}
impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

/// a += c * b
pub fn vec_axpy(a: &mut [Q], c: &Q, b: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += &(c * y);
        }
    }
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}
