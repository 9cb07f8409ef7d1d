use num_complex::Complex64;

use super::{expm_sas, logm_iss, sqrtm_tri, FunmReport, KernelOptions, LOG_PADE_DEGREE};
use crate::error::{Error, Result};
use crate::triangular::{Matrix, UpperTriangular};

/// Square roots taken outside the logarithm: the one for `(I - T^2)^{1/2}`.
pub const ACOS_EXTRA_ROOTS: u32 = 1;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Principal inverse cosine, `acos(T) = -i log(T + i (I - T^2)^{1/2})`.
///
/// Diagonal inputs are mapped entrywise (scalar `acos` is defined at
/// `+-1`); otherwise an eigenvalue `+-1` is a branch point.
pub fn acosm(t: &UpperTriangular, opts: &KernelOptions) -> Result<FunmReport> {
    opts.validate()?;
    let n = t.order();
    if t.is_diagonal() {
        let d: Vec<Complex64> = t.diag().iter().map(|z| z.acos()).collect();
        let value = UpperTriangular::from_computed(
            Matrix::from_fn(n, |i, j| {
                if i == j {
                    d[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            "acos",
        )?;
        return Ok(FunmReport::direct(t, value, 0, 0));
    }
    if let Some(index) = t
        .diag()
        .iter()
        .position(|z| *z == Complex64::new(1.0, 0.0) || *z == Complex64::new(-1.0, 0.0))
    {
        return Err(Error::BranchPoint { index });
    }
    let one_minus_sq = UpperTriangular::identity(n).sub(&t.mul(t));
    let root = sqrtm_tri(&one_minus_sq)?;
    let arg = t.add(&root.scale(I));
    let log = logm_iss(&arg, opts)?;
    let value = UpperTriangular::from_computed(log.value.scale(-I).into_matrix(), "acos")?;
    Ok(FunmReport::direct(
        t,
        value,
        log.count_s + ACOS_EXTRA_ROOTS,
        LOG_PADE_DEGREE,
    ))
}

/// `cos(X) = (e^{iX} + e^{-iX}) / 2` through the exponential kernel.
pub fn cosm(x: &UpperTriangular) -> Result<UpperTriangular> {
    let opts = KernelOptions::exp();
    let plus = expm_sas(&x.scale(I), &opts)?.value;
    let minus = expm_sas(&x.scale(-I), &opts)?.value;
    Ok(plus.add(&minus).scale_real(0.5))
}
