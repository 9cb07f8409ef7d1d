use num_complex::Complex64;

use super::negative_real_eigenvalue;
use crate::error::{Error, Result};
use crate::triangular::{Matrix, UpperTriangular};

/// Principal square root by the triangular recurrence
/// `u_ij = (t_ij - sum_{i<k<j} u_ik u_kj) / (u_ii + u_jj)`,
/// solved one superdiagonal at a time.
pub fn sqrtm_tri(t: &UpperTriangular) -> Result<UpperTriangular> {
    if let Some(index) = negative_real_eigenvalue(t) {
        return Err(Error::PrincipalRootUndefined { index });
    }
    let n = t.order();
    let mut u = Matrix::zeros(n);
    for i in 0..n {
        u[(i, i)] = t.get(i, i).sqrt();
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s: Complex64 = t.get(i, j);
            for k in i + 1..j {
                s -= u[(i, k)] * u[(k, j)];
            }
            let den = u[(i, i)] + u[(j, j)];
            if den == Complex64::new(0.0, 0.0) {
                return Err(Error::IllPosedRecurrence { row: i, col: j });
            }
            u[(i, j)] = s / den;
        }
    }
    UpperTriangular::from_computed(u, "square root")
}
