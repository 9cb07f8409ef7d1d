//! Dense complex matrices, the validated upper-triangular operand, and the
//! diagonal/superdiagonal band split used throughout the crate.
//!
//! Storage is dense row-major over the full square. For [`UpperTriangular`]
//! the strictly lower part is always exactly zero.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Power iteration cap used by [`NormKind::TwoEstimate`].
pub const TWO_NORM_MAX_ITER: usize = 100;
/// Relative stopping tolerance used by [`NormKind::TwoEstimate`].
pub const TWO_NORM_TOL: f64 = 1e-6;

/// Scalar-operation counters for the O(n^2) scaling routines.
#[cfg(any(test, feature = "op-count"))]
pub mod ops {
    use std::cell::Cell;

    thread_local! {
        static COUNT: Cell<u64> = const { Cell::new(0) };
    }

    pub fn reset() {
        COUNT.with(|c| c.set(0));
    }

    pub fn get() -> u64 {
        COUNT.with(|c| c.get())
    }

    #[inline]
    pub(crate) fn tick(k: u64) {
        COUNT.with(|c| c.set(c.get() + k));
    }
}

#[cfg(not(any(test, feature = "op-count")))]
pub(crate) mod ops {
    #[inline(always)]
    pub(crate) fn tick(_k: u64) {}
}

/// A dense square complex matrix (row-major).
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// The matrix with a single unit entry at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j)] = ONE;
        m
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n.max(1))
    }

    /// Column-stacked vector, `vec(X)`.
    pub fn vec(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut v = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_inf(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            .map(|p| (p / self.n, p % self.n))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matmul order mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.n {
            for j in 0..block.n {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Extracts the `k x k` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> Matrix {
        Matrix::from_fn(k, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Spectral norm estimate by power iteration on `X^* X`.
    pub fn two_norm_estimate(&self, max_iter: usize, tol: f64) -> f64 {
        let n = self.n;
        power_norm(
            n,
            |x| self.mul_vec(x),
            |y| self.adjoint_mul_vec(y),
            max_iter,
            tol,
        )
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint_mul_vec(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![ZERO; n];
        for (i, row) in self.rows().enumerate() {
            let yi = y[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * yi;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:.6e}", z)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Estimates the largest singular value of a linear map of dimension `dim`
/// given products with the map and with its adjoint.
///
/// The start vector is deterministic with all components nonzero.
pub fn power_norm(
    dim: usize,
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    apply_adjoint: impl Fn(&[Complex64]) -> Vec<Complex64>,
    max_iter: usize,
    tol: f64,
) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    let mut v: Vec<Complex64> = (0..dim)
        .map(|k| Complex64::new(1.0 + k as f64 / dim as f64, 0.0))
        .collect();
    normalize(&mut v);
    let mut est = 0.0;
    for _ in 0..max_iter {
        let w = apply(&v);
        let sigma = vec_norm(&w);
        if sigma == 0.0 {
            return est;
        }
        let mut z = apply_adjoint(&w);
        let zn = vec_norm(&z);
        if zn == 0.0 {
            return sigma.max(est);
        }
        for c in z.iter_mut() {
            *c /= zn;
        }
        v = z;
        let done = (sigma - est).abs() <= tol * sigma;
        est = sigma;
        if done {
            break;
        }
    }
    est
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
}

/// Operator norm selector for [`UpperTriangular::operator_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    One,
    Infinity,
    /// Power-iteration estimate of the spectral norm.
    TwoEstimate,
}

/// A complex upper triangular matrix of order `n >= 1` with finite entries.
#[derive(Clone, PartialEq)]
pub struct UpperTriangular {
    inner: Matrix,
}

impl UpperTriangular {
    /// Validates a square matrix: strictly lower entries must be exactly zero
    /// and every entry finite. Entries are kept bit-for-bit.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.n == 0 {
            return Err(Error::Empty);
        }
        for i in 0..m.n {
            for j in 0..m.n {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if i > j && z != ZERO {
                    return Err(Error::NotTriangular { row: i, col: j });
                }
            }
        }
        Ok(UpperTriangular { inner: m })
    }

    /// Validates a raw (possibly non-square) array of rows.
    pub fn validate(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    /// Wraps a kernel result whose lower part is structurally zero,
    /// failing if any entry overflowed.
    pub(crate) fn from_computed(m: Matrix, what: &str) -> Result<Self> {
        debug_assert!((0..m.n).all(|i| (0..i).all(|j| m[(i, j)] == ZERO)));
        if let Some((i, j)) = m.first_non_finite() {
            return Err(Error::Overflow(format!(
                "{what}: non-finite entry at ({i}, {j})"
            )));
        }
        Ok(UpperTriangular { inner: m })
    }

    pub(crate) fn from_upper_unchecked(m: Matrix) -> Self {
        UpperTriangular { inner: m }
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        Self::new(Matrix::from_fn(
            n,
            |i, j| if i == j { values[i] } else { ZERO },
        ))
    }

    pub fn identity(n: usize) -> Self {
        UpperTriangular {
            inner: Matrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        UpperTriangular {
            inner: Matrix::zeros(n),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.order()).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == ZERO))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn operator_norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::One => self.inner.norm_one(),
            NormKind::Infinity => self.inner.norm_inf(),
            NormKind::TwoEstimate => self
                .inner
                .two_norm_estimate(TWO_NORM_MAX_ITER, TWO_NORM_TOL),
        }
    }

    /// Splits into the diagonal part and the `n - 1` superdiagonal bands.
    pub fn split_bands(&self) -> BandDecomposition {
        let n = self.order();
        let diagonal = UpperTriangular::from_upper_unchecked(Matrix::from_fn(n, |i, j| {
            if i == j {
                self.get(i, j)
            } else {
                ZERO
            }
        }));
        let bands = (1..n)
            .map(|p| {
                UpperTriangular::from_upper_unchecked(Matrix::from_fn(n, |i, j| {
                    if j == i + p {
                        self.get(i, j)
                    } else {
                        ZERO
                    }
                }))
            })
            .collect();
        BandDecomposition { diagonal, bands }
    }

    /// Squared Frobenius norm of each band: index 0 is the diagonal.
    pub fn band_norms_sq(&self) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|p| (0..n - p).map(|i| self.get(i, i + p).norm_sqr()).sum())
            .collect()
    }

    /// `||N||_F / ||D||_F`; `+inf` when the diagonal vanishes but `N` does not.
    pub fn nilpotent_ratio(&self) -> f64 {
        let bands = self.band_norms_sq();
        let d = bands[0].sqrt();
        let nil = bands[1..].iter().sum::<f64>().sqrt();
        if nil == 0.0 {
            0.0
        } else if d == 0.0 {
            f64::INFINITY
        } else {
            nil / d
        }
    }

    /// Triangular product, computing only the upper triangle.
    pub fn mul(&self, other: &UpperTriangular) -> UpperTriangular {
        let n = self.order();
        assert_eq!(n, other.order(), "order mismatch");
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in i..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in k..n {
                    out[(i, j)] += a * other.get(k, j);
                }
            }
        }
        UpperTriangular::from_upper_unchecked(out)
    }

    pub fn add(&self, other: &UpperTriangular) -> UpperTriangular {
        UpperTriangular::from_upper_unchecked(self.inner.add(&other.inner))
    }

    pub fn sub(&self, other: &UpperTriangular) -> UpperTriangular {
        UpperTriangular::from_upper_unchecked(self.inner.sub(&other.inner))
    }

    pub fn scale(&self, c: Complex64) -> UpperTriangular {
        UpperTriangular::from_upper_unchecked(self.inner.scale(c))
    }

    pub fn scale_real(&self, c: f64) -> UpperTriangular {
        UpperTriangular::from_upper_unchecked(self.inner.scale_real(c))
    }

    /// Adds `c` to every diagonal entry.
    pub fn shift(&self, c: Complex64) -> UpperTriangular {
        let mut m = self.inner.clone();
        for i in 0..self.order() {
            m[(i, i)] += c;
        }
        UpperTriangular::from_upper_unchecked(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }
}

impl fmt::Debug for UpperTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Upper{:?}", self.inner)
    }
}

/// `T = D + N_1 + ... + N_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandDecomposition {
    pub diagonal: UpperTriangular,
    /// `bands[p - 1]` holds superdiagonal `p`.
    pub bands: Vec<UpperTriangular>,
}

impl BandDecomposition {
    pub fn reconstruct(&self) -> UpperTriangular {
        self.bands
            .iter()
            .fold(self.diagonal.clone(), |acc, b| acc.add(b))
    }
}

/// Solves `U X = B` for `X` by back substitution, `U` upper triangular.
pub(crate) fn solve_upper_left(u: &UpperTriangular, b: &Matrix) -> Option<Matrix> {
    let n = u.order();
    let mut x = b.clone();
    for col in 0..n {
        for i in (0..n).rev() {
            let mut s = x[(i, col)];
            for k in i + 1..n {
                s -= u.get(i, k) * x[(k, col)];
            }
            let d = u.get(i, i);
            if d == ZERO {
                return None;
            }
            x[(i, col)] = s / d;
        }
    }
    Some(x)
}

/// Solves `X U = B` for `X`, `U` upper triangular.
pub(crate) fn solve_upper_right(u: &UpperTriangular, b: &Matrix) -> Option<Matrix> {
    let n = u.order();
    let mut x = b.clone();
    for row in 0..n {
        for j in 0..n {
            let mut s = x[(row, j)];
            for k in 0..j {
                s -= x[(row, k)] * u.get(k, j);
            }
            let d = u.get(j, j);
            if d == ZERO {
                return None;
            }
            x[(row, j)] = s / d;
        }
    }
    Some(x)
}

/// Solves `U X = B` where both are upper triangular; only the upper
/// triangle of `X` is formed.
pub(crate) fn solve_upper_tri(u: &UpperTriangular, b: &UpperTriangular) -> Option<UpperTriangular> {
    let n = u.order();
    let mut x = b.as_matrix().clone();
    for col in 0..n {
        for i in (0..=col).rev() {
            let mut s = x[(i, col)];
            for k in i + 1..=col {
                s -= u.get(i, k) * x[(k, col)];
            }
            let d = u.get(i, i);
            if d == ZERO {
                return None;
            }
            x[(i, col)] = s / d;
        }
    }
    Some(UpperTriangular::from_upper_unchecked(x))
}
