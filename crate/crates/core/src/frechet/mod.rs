//! Fréchet derivatives of matrix functions at upper triangular points.
//!
//! [`frechet_block`] is the workhorse: the (1,2) block of
//! `f([[A, E], [0, A]])` is `L_f(A, E)`. Because every entry of the `E`
//! block lies above the diagonal of the `2n x 2n` matrix, the embedding is
//! upper triangular for any `E` and the triangular kernels apply directly.
//! The integral forms for exp and log and the power-series form are
//! independent evaluators used to cross-check it.

mod kronecker;
mod verify;

pub use kronecker::{
    condition_numbers, kronecker_form, kronecker_form_capped, ConditionReport, KroneckerForm,
    KRONECKER_CAP, KRONECKER_MAX_ITER, KRONECKER_TOL,
};
pub use verify::{
    verify_scaling_structure, VerificationReport, Violation, ViolationKind, COLUMN_SLACK,
    DIAGONAL_TOL, NOISE_FLOOR, NORM_SLACK, PHASE_TOL, SIMILARITY_TOL, SPECTRAL_SLACK,
    ZERO_BLOCK_TOL,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{expm_sas, negative_real_eigenvalue, KernelOptions, MatrixFunction};
use crate::quadrature::GaussLegendre;
use crate::triangular::{solve_upper_left, solve_upper_right, Matrix, UpperTriangular};

/// Default number of Gauss–Legendre nodes for the integral forms.
pub const DEFAULT_QUAD_NODES: usize = 32;

fn check_order(a: &UpperTriangular, e: &Matrix) -> Result<()> {
    if a.order() != e.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            found: e.order(),
        });
    }
    Ok(())
}

/// `L_f(A, E)` from the (1,2) block of `f([[A, hE], [0, A]])`, divided by
/// `h`. `h` is the power of two closest to `||A||_1 / ||E||_1`, so the
/// embedded direction has the same size as `A` and the rescaling is exact.
pub fn frechet_block(
    kernel: &dyn MatrixFunction,
    a: &UpperTriangular,
    e: &Matrix,
) -> Result<Matrix> {
    check_order(a, e)?;
    let n = a.order();
    let e_norm = e.norm_one();
    if e_norm == 0.0 {
        return Ok(Matrix::zeros(n));
    }
    let a_norm = a.as_matrix().norm_one();
    let target = if a_norm > 0.0 { a_norm } else { 1.0 };
    let h = (target / e_norm).log2().round().exp2();
    let mut big = Matrix::zeros(2 * n);
    big.set_block(0, 0, a.as_matrix());
    big.set_block(n, n, a.as_matrix());
    big.set_block(0, n, &e.scale_real(h));
    let big = UpperTriangular::new(big)?;
    let f = kernel.evaluate(&big)?.value;
    Ok(f.as_matrix().block(0, n, n).scale_real(1.0 / h))
}

/// `int_0^1 e^{A(1-t)} E e^{At} dt` by Gauss–Legendre.
pub fn frechet_exp_quad(a: &UpperTriangular, e: &Matrix, nodes: usize) -> Result<Matrix> {
    check_order(a, e)?;
    let rule = GaussLegendre::new(nodes);
    let opts = KernelOptions::exp();
    let mut acc = Matrix::zeros(a.order());
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let left = expm_sas(&a.scale_real(1.0 - t), &opts)?.value;
        let right = expm_sas(&a.scale_real(t), &opts)?.value;
        let term = left.as_matrix().matmul(e).matmul(right.as_matrix());
        acc = acc.add(&term.scale_real(w));
    }
    Ok(acc)
}

/// `int_0^1 (t(A - I) + I)^{-1} E (t(A - I) + I)^{-1} dt` by Gauss–Legendre,
/// with both resolvent factors applied by triangular solves.
pub fn frechet_log_quad(a: &UpperTriangular, e: &Matrix, nodes: usize) -> Result<Matrix> {
    check_order(a, e)?;
    if let Some(k) = negative_real_eigenvalue(a) {
        // t lambda + (1 - t) vanishes at t = 1 / (1 - lambda)
        let lambda = a.get(k, k).re;
        return Err(Error::BranchCutCrossed(1.0 / (1.0 - lambda)));
    }
    let n = a.order();
    let rule = GaussLegendre::new(nodes);
    let identity = UpperTriangular::identity(n);
    let mut acc = Matrix::zeros(n);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let m = a.scale_real(t).add(&identity.scale_real(1.0 - t));
        let left = solve_upper_left(&m, e).ok_or(Error::BranchCutCrossed(t))?;
        let both = solve_upper_right(&m, &left).ok_or(Error::BranchCutCrossed(t))?;
        acc = acc.add(&both.scale_real(w));
    }
    Ok(acc)
}

/// Taylor coefficients `1/k!` for `k = 0..=terms`.
pub fn exp_taylor_coefficients(terms: usize) -> Vec<f64> {
    let mut c = vec![1.0; terms + 1];
    for k in 1..=terms {
        c[k] = c[k - 1] / k as f64;
    }
    c
}

/// `sum_k a_k sum_{j=0}^{k-1} A^j E A^{k-1-j}` for the given truncation.
/// Convergence on the spectrum of `A` is the caller's responsibility.
pub fn frechet_series(coeffs: &[f64], a: &UpperTriangular, e: &Matrix) -> Result<Matrix> {
    check_order(a, e)?;
    let n = a.order();
    let mut powers = vec![Matrix::identity(n)];
    for k in 1..coeffs.len() {
        let next = powers[k - 1].matmul(a.as_matrix());
        powers.push(next);
    }
    let mut acc = Matrix::zeros(n);
    for (k, &ak) in coeffs.iter().enumerate().skip(1) {
        if ak == 0.0 {
            continue;
        }
        let mut inner = Matrix::zeros(n);
        for j in 0..k {
            inner = inner.add(&powers[j].matmul(e).matmul(&powers[k - 1 - j]));
        }
        acc = acc.add(&inner.scale(Complex64::new(ak, 0.0)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Exp, Log};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: &Matrix, b: &Matrix) -> f64 {
        a.sub(b).frobenius_norm() / b.frobenius_norm()
    }

    fn sample_a() -> UpperTriangular {
        UpperTriangular::validate(&[
            vec![c(0.3), Complex64::new(0.2, -0.1), c(-0.4)],
            vec![c(0.0), Complex64::new(-0.5, 0.2), c(0.3)],
            vec![c(0.0), c(0.0), c(0.1)],
        ])
        .unwrap()
    }

    fn sample_e() -> Matrix {
        Matrix::from_fn(3, |i, j| {
            Complex64::new(0.3 * i as f64 - 0.2 * j as f64 + 0.1, 0.05 * (i + j) as f64)
        })
    }

    #[test]
    fn zero_direction_gives_zero() {
        let l = frechet_block(&Exp::default(), &sample_a(), &Matrix::zeros(3)).unwrap();
        assert_eq!(l, Matrix::zeros(3));
    }

    #[test]
    fn exp_at_zero_is_identity_map() {
        let e = sample_e();
        let l = frechet_block(&Exp::default(), &UpperTriangular::zeros(3), &e).unwrap();
        assert!(rel(&l, &e) < 1e-15);
        let q = frechet_exp_quad(&UpperTriangular::zeros(3), &e, 16).unwrap();
        assert!(rel(&q, &e) < 1e-15);
    }

    #[test]
    fn block_matches_exp_quadrature() {
        let (a, e) = (sample_a(), sample_e());
        let l = frechet_block(&Exp::default(), &a, &e).unwrap();
        let q = frechet_exp_quad(&a, &e, DEFAULT_QUAD_NODES).unwrap();
        assert!(rel(&l, &q) < 1e-8);
    }

    #[test]
    fn exp_quad_diagonal_divided_difference() {
        let (a, b) = (0.7, -0.4);
        let d = UpperTriangular::diagonal(&[c(a), c(b)]).unwrap();
        let q = frechet_exp_quad(&d, &Matrix::unit(2, 0, 1), 32).unwrap();
        let want = (a.exp() - b.exp()) / (a - b);
        assert!((q[(0, 1)].re - want).abs() < 1e-14);
    }

    #[test]
    fn log_quad_cases() {
        let e = sample_e();
        let q = frechet_log_quad(&UpperTriangular::identity(3), &e, 8).unwrap();
        assert!(rel(&q, &e) < 1e-15);
        let a = UpperTriangular::diagonal(&[c(4.0)]).unwrap();
        let q = frechet_log_quad(&a, &Matrix::identity(1), 32).unwrap();
        assert!((q[(0, 0)].re - 0.25).abs() < 1e-14);
        let bad = UpperTriangular::diagonal(&[c(-1.0), c(1.0)]).unwrap();
        assert!(matches!(
            frechet_log_quad(&bad, &Matrix::identity(2), 8),
            Err(Error::BranchCutCrossed(_))
        ));
    }

    #[test]
    fn log_block_matches_quadrature() {
        let a = UpperTriangular::from_real_rows(&[
            &[1.5, 0.3, -0.2],
            &[0.0, 0.7, 0.4],
            &[0.0, 0.0, 1.1],
        ])
        .unwrap();
        let e = sample_e();
        let l = frechet_block(&Log::default(), &a, &e).unwrap();
        let q = frechet_log_quad(&a, &e, DEFAULT_QUAD_NODES).unwrap();
        assert!(rel(&l, &q) < 1e-7, "{}", rel(&l, &q));
    }

    #[test]
    fn series_cases() {
        let e = sample_e();
        let coeffs = exp_taylor_coefficients(20);
        let s = frechet_series(&coeffs, &UpperTriangular::zeros(3), &e).unwrap();
        assert!(rel(&s, &e) < 1e-15);
        let s = frechet_series(&[0.0, 1.0], &sample_a(), &e).unwrap();
        assert_eq!(s, e);
        let s = frechet_series(&coeffs, &sample_a(), &e).unwrap();
        let q = frechet_exp_quad(&sample_a(), &e, DEFAULT_QUAD_NODES).unwrap();
        assert!(rel(&s, &q) < 1e-9);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(frechet_block(&Exp::default(), &sample_a(), &Matrix::zeros(2)).is_err());
    }
}
