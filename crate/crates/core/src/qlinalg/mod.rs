//! Dense quaternionic matrices, the groups `GL(n,ℍ)` and `Sp(n)`.
//!
//! `ℍⁿ` is treated as a right `ℍ`-module: matrices act on the left and
//! scalars multiply column vectors on the right, so `M ↦ M g` is a change of
//! basis of the column span.

mod dieudonne;
mod gram_schmidt;
mod study;

use std::ops::{Index, IndexMut};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

pub use dieudonne::{dieudonne_det, dieudonne_det_with_tol, DEFAULT_DET_TOL};
pub use gram_schmidt::{qr_gram_schmidt, random_sp_lie, random_sp_n, GramSchmidt, GS_RANK_TOL};
pub use study::{complex_det, complex_embedding, study_det, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QMatrixJson", into = "QMatrixJson")]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// On-disk layout: `{"rows": n, "cols": p, "entries": [[[w,x,y,z], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct QMatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl TryFrom<QMatrixJson> for QMatrix {
    type Error = Error;

    fn try_from(j: QMatrixJson) -> Result<Self> {
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but entries do not match",
                j.rows, j.cols
            )));
        }
        if j.rows == 0 || j.cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        Ok(QMatrix {
            rows: j.rows,
            cols: j.cols,
            data: j.entries.into_iter().flatten().collect(),
        })
    }
}

impl From<QMatrix> for QMatrixJson {
    fn from(m: QMatrix) -> Self {
        let entries = m.data.chunks(m.cols).map(|r| r.to_vec()).collect();
        QMatrixJson {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Quaternion::real(v);
        }
        m
    }

    pub fn diag(values: &[Quaternion]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Independent standard gaussian components in every entry.
    pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| Quaternion::random_gaussian(rng))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Quaternion]) {
        for (i, &q) in col.iter().enumerate() {
            self[(i, j)] = q;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    /// Quaternionic conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                let orow = o.row(k);
                let start = i * o.cols;
                for (dst, &b) in out.data[start..start + o.cols].iter_mut().zip(orow) {
                    *dst += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.require_same_shape(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self { data, ..*self })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.require_same_shape(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self { data, ..*self })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.iter().map(|&q| q * s).collect(),
            ..*self
        }
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.matmul(o)?.sub(&o.matmul(self)?)
    }

    /// Quaternionic trace.
    pub fn trace(&self) -> Result<Quaternion> {
        let n = self.require_square()?;
        Ok((0..n).fold(Quaternion::ZERO, |acc, i| acc + self[(i, i)]))
    }

    /// `Re Tr(A B)` without forming the full product.
    pub fn re_trace_product(&self, o: &Self) -> Result<f64> {
        if self.cols != o.rows || self.rows != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "Re Tr of {}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += (self[(i, k)] * o[(k, i)]).w;
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `o`.
    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        Ok(self.sub(o)?.max_abs())
    }

    /// Rows of `self` indexed by the sorted, 0-based subset `rows`.
    pub fn submatrix(&self, rows: &[usize]) -> Result<Self> {
        if rows.len() != self.cols {
            return Err(Error::BadSubset(format!(
                "need {} rows, got {}",
                self.cols,
                rows.len()
            )));
        }
        if rows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadSubset(format!(
                "{rows:?} is not strictly increasing"
            )));
        }
        if rows.last().is_some_and(|&r| r >= self.rows) {
            return Err(Error::BadSubset(format!(
                "{rows:?} out of range for {} rows",
                self.rows
            )));
        }
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Ok(Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        })
    }

    /// Left-multiplies row `i` by `s`.
    pub fn scale_row_left(&mut self, i: usize, s: Quaternion) {
        let c = self.cols;
        for q in &mut self.data[i * c..(i + 1) * c] {
            *q = s * *q;
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

/// Hermitian tolerance used when wrapping a matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Quaternionic hermitian matrix `A = A*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianQ(QMatrix);

impl HermitianQ {
    /// Checks `A = A*` to [`HERMITIAN_TOL`] relative to the entry scale.
    pub fn new(m: QMatrix) -> Result<Self> {
        m.require_square()?;
        let tol = HERMITIAN_TOL * m.max_abs().max(1.0);
        if !m.is_hermitian(tol) {
            return Err(Error::Precondition("matrix is not hermitian".into()));
        }
        Ok(Self(m))
    }

    /// Symmetrizes `(A + A*) / 2`.
    pub fn from_symmetrized(m: &QMatrix) -> Result<Self> {
        m.require_square()?;
        Ok(Self(m.add(&m.adjoint())?.scale(0.5)))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self(QMatrix::diag_real(values))
    }

    /// Gaussian hermitian matrix (symmetrized gaussian entries).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = QMatrix::random_gaussian(n, n, rng);
        Self::from_symmetrized(&g).expect("square by construction")
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }

    /// `u A u*`.
    pub fn conjugate_by(&self, u: &QMatrix) -> Result<Self> {
        let m = u.matmul(&self.0)?.matmul(&u.adjoint())?;
        Self::from_symmetrized(&m)
    }
}

/// Element of `Sp(n) = {U : U U* = I}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpNElement(QMatrix);

/// Membership tolerance for [`SpNElement`].
pub const SP_N_TOL: f64 = 1e-10;

impl SpNElement {
    pub fn new(m: QMatrix) -> Result<Self> {
        let n = m.require_square()?;
        let err = m
            .matmul(&m.adjoint())?
            .max_abs_diff(&QMatrix::identity(n))?;
        if err > SP_N_TOL {
            return Err(Error::Precondition(format!(
                "U U* deviates from identity by {err:e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(QMatrix::identity(n))
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }
}
