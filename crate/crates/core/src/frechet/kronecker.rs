use num_complex::Complex64;
use rayon::prelude::*;

use super::frechet_block;
use crate::error::{Error, Result};
use crate::kernels::MatrixFunction;
use crate::triangular::{power_norm, Matrix, UpperTriangular};

/// Largest order for which the `n^2 x n^2` Kronecker form is assembled.
pub const KRONECKER_CAP: usize = 20;
pub const KRONECKER_MAX_ITER: usize = 500;
pub const KRONECKER_TOL: f64 = 1e-6;

/// `K_f(A)` with `vec(L_f(A, E)) = K_f(A) vec(E)` (column-major `vec`).
///
/// Column `p = j n + i` (zero-based) is `vec(L_f(A, E_ij))`.
#[derive(Debug, Clone)]
pub struct KroneckerForm {
    pub order: usize,
    pub entries: Matrix,
    pub column_norms: Vec<f64>,
    /// Power-iteration estimate of `||K||_2`.
    pub spectral_norm: f64,
}

impl KroneckerForm {
    /// Column index of direction `E_ij`.
    #[inline]
    pub fn column(&self, i: usize, j: usize) -> usize {
        j * self.order + i
    }

    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.entries[(p, q)]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.max_abs()
    }
}

/// Assembles `K_f(A)` column by column, capped at [`KRONECKER_CAP`].
pub fn kronecker_form(kernel: &dyn MatrixFunction, a: &UpperTriangular) -> Result<KroneckerForm> {
    kronecker_form_capped(kernel, a, KRONECKER_CAP)
}

pub fn kronecker_form_capped(
    kernel: &dyn MatrixFunction,
    a: &UpperTriangular,
    cap: usize,
) -> Result<KroneckerForm> {
    let n = a.order();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let nn = n * n;
    let columns: Vec<Vec<Complex64>> = (0..nn)
        .into_par_iter()
        .map(|p| {
            let (i, j) = (p % n, p / n);
            frechet_block(kernel, a, &Matrix::unit(n, i, j)).map(|l| l.vec())
        })
        .collect::<Result<_>>()?;
    let entries = Matrix::from_fn(nn, |r, c| columns[c][r]);
    let column_norms = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let spectral_norm = power_norm(
        nn,
        |x| entries.mul_vec(x),
        |y| entries.adjoint_mul_vec(y),
        KRONECKER_MAX_ITER,
        KRONECKER_TOL,
    );
    Ok(KroneckerForm {
        order: n,
        entries,
        column_norms,
        spectral_norm,
    })
}

/// Absolute and relative condition numbers in the Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub cond_abs: f64,
    /// `+inf` when `f(A) = 0`.
    pub cond_rel: f64,
    pub operator_norm_l: f64,
    pub function_norm: f64,
    pub input_norm: f64,
}

/// `cond_abs = ||K_f(A)||_2`, `cond_rel = cond_abs ||A||_F / ||f(A)||_F`.
pub fn condition_numbers(
    kernel: &dyn MatrixFunction,
    a: &UpperTriangular,
) -> Result<ConditionReport> {
    let k = kronecker_form(kernel, a)?;
    let f = kernel.evaluate(a)?.value;
    let function_norm = f.frobenius_norm();
    let input_norm = a.frobenius_norm();
    let cond_abs = k.spectral_norm;
    let cond_rel = if function_norm > 0.0 {
        cond_abs * input_norm / function_norm
    } else {
        f64::INFINITY
    };
    Ok(ConditionReport {
        cond_abs,
        cond_rel,
        operator_norm_l: cond_abs,
        function_norm,
        input_norm,
    })
}
