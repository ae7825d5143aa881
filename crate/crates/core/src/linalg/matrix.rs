//! Dense exact matrices over a [`Ring`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.ring.display(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant facts for matrices with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub det: BigRational,
    pub integral: bool,
    /// Integral with determinant `+-1`, so invertible over Z.
    pub unimodular: bool,
}

impl Matrix {
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, data })
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// A matrix with `cols` columns and no rows when `rows` is empty.
    pub fn from_rows_with_cols(ring: &Ring, rows: Vec<Vec<Elem>>, cols: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Matrix::zeros(ring, 0, cols));
        }
        Self::from_rows(ring, rows)
    }

    pub fn from_cols(ring: &Ring, cols: Vec<Vec<Elem>>) -> Result<Self> {
        Ok(Self::from_rows(ring, cols)?.transpose())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
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

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn same_shape(&self, o: &Matrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, s: &Elem) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(a, s)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if r.is_zero(b) {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = r.add(&out.data[idx], &r.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (a, b) in self.row_slice(i).iter().zip(v) {
                    if !r.is_zero(a) && !r.is_zero(b) {
                        acc = r.add(&acc, &r.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length");
        let r = &self.ring;
        let mut out = vec![r.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !r.is_zero(b) {
                    *o = r.add(o, &r.mul(a, b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.ring, self.rows)
    }

    /// Reduced row echelon form and pivot columns. Pivot rule: leftmost
    /// column first, smallest row index among nonzero candidates.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        let r = &self.ring;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !r.is_zero(m.get(i, col))) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = r.inv(m.get(row, col))?;
            for j in col..m.cols {
                let v = r.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let f = m.get(i, col).clone();
                if r.is_zero(&f) {
                    continue;
                }
                for j in col..m.cols {
                    let v = r.sub(m.get(i, j), &r.mul(&f, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_basis(&self) -> Result<Matrix> {
        let (m, p) = self.rref()?;
        Matrix::from_rows_with_cols(&self.ring, (0..p.len()).map(|i| m.row(i)).collect(), self.cols)
    }

    /// Basis (as rows) of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Result<Matrix> {
        let r = &self.ring;
        let (m, pivots) = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![r.zero(); self.cols];
            v[fc] = r.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = r.neg(m.get(i, fc));
            }
            basis.push(v);
        }
        Matrix::from_rows_with_cols(r, basis, self.cols)
    }

    /// Basis (as rows) of `{v : v M = 0}`.
    pub fn left_nullspace(&self) -> Result<Matrix> {
        self.transpose().nullspace()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let r = &self.ring;
        let aug = Matrix::from_fn(r, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                r.one()
            } else {
                r.zero()
            }
        });
        let (m, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(Matrix::from_fn(r, n, n, |i, j| m.get(i, n + j).clone()))
    }

    /// `N` with `M^t N = 1`.
    pub fn inverse_transpose(&self) -> Result<Matrix> {
        Ok(self.inverse()?.transpose())
    }

    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let r = &self.ring;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = r.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !r.is_zero(m.get(i, col))) else {
                return Ok(r.zero());
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = r.neg(&det);
            }
            let piv = m.get(col, col).clone();
            det = r.mul(&det, &piv);
            let inv = r.inv(&piv)?;
            for i in col + 1..n {
                let f = r.mul(m.get(i, col), &inv);
                if r.is_zero(&f) {
                    continue;
                }
                for j in col..n {
                    let v = r.sub(m.get(i, j), &r.mul(&f, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `M x = b`; `None` when inconsistent. Free variables are set to 0.
    pub fn solve_vec(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
        let r = &self.ring;
        let aug = Matrix::from_fn(r, self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { b[i].clone() }
        });
        let (m, pivots) = aug.rref()?;
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![r.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = m.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Kronecker product; row index `i * o.rows + k`, column `j * o.cols + l`.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let r = &self.ring;
        Matrix::from_fn(r, self.rows * o.rows, self.cols * o.cols, |a, b| {
            let (i, k) = (a / o.rows, a % o.rows);
            let (j, l) = (b / o.cols, b % o.cols);
            r.mul(self.get(i, j), o.get(k, l))
        })
    }

    /// Entry-wise image under the canonical coefficient map into `s`.
    pub fn map_into(&self, s: &Ring) -> Result<Matrix> {
        let data = self.data.iter().map(|x| s.embed(x, &self.ring)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { ring: s.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn map_elems(&self, s: &Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Matrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { ring: s.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Stacks the rows of `self` above the rows of `o`.
    pub fn vstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.cols {
            return Err(Error::Shape("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows + o.rows, cols: self.cols, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Determinant and integrality of a matrix over the rationals.
    pub fn integrality_report(&self) -> Result<IntegralityReport> {
        if !self.ring.is_rationals() {
            return Err(Error::UnsupportedRing("integrality is defined over Q".into()));
        }
        let det = self.det()?.as_rat().expect("rational").clone();
        let integral = self.data.iter().all(|x| x.as_rat().expect("rational").is_integer());
        let unimodular = integral && det.abs() == BigRational::one();
        Ok(IntegralityReport { det, integral, unimodular })
    }

    /// Fraction-free (Bareiss) determinant of an integral matrix over Q;
    /// every intermediate division is exact.
    pub fn bareiss_det(&self) -> Result<BigInt> {
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for x in self.row_slice(i) {
                let q = x.as_rat().filter(|q| q.is_integer()).ok_or_else(|| {
                    Error::UnsupportedRing("fraction-free elimination needs integral entries".into())
                })?;
                row.push(q.to_integer());
            }
            m.push(row);
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k] == BigInt::from(0) {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != BigInt::from(0)) else {
                    return Ok(BigInt::from(0));
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &m[n - 1][n - 1] })
    }
}
