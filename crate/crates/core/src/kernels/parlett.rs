use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::triangular::{Matrix, UpperTriangular};

/// Minimum eigenvalue separation, relative to `max |t_ii|`.
pub const PARLETT_SEPARATION: f64 = 1e-8;

/// Parlett recurrence for `f(T)` with distinct eigenvalues:
///
/// `f_ij = [t_ij (f_ii - f_jj) + sum_{i<k<j} (f_ik t_kj - t_ik f_kj)] / (t_ii - t_jj)`.
///
/// Used as an independent reference for the kernels.
pub fn funm_parlett(
    t: &UpperTriangular,
    f: impl Fn(Complex64) -> Complex64,
) -> Result<UpperTriangular> {
    let n = t.order();
    let diag = t.diag();
    let scale = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (diag[i] - diag[j]).norm() < PARLETT_SEPARATION * scale || scale == 0.0 {
                return Err(Error::ConfluentSpectrum(i, j));
            }
        }
    }
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        out[(i, i)] = f(diag[i]);
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s = t.get(i, j) * (out[(i, i)] - out[(j, j)]);
            for k in i + 1..j {
                s += out[(i, k)] * t.get(k, j) - t.get(i, k) * out[(k, j)];
            }
            out[(i, j)] = s / (diag[i] - diag[j]);
        }
    }
    UpperTriangular::from_computed(out, "parlett")
}
