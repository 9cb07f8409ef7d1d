use super::{FunmReport, KernelOptions};
use crate::error::{Error, Result};
use crate::triangular::{solve_upper_tri, NormKind, UpperTriangular};

pub const EXP_PADE_DEGREE: u32 = 6;

/// Coefficients of the diagonal `[m/m]` Padé numerator of `e^x`;
/// the denominator uses the same values with alternating signs.
pub fn exp_pade_coefficients(m: usize) -> Vec<f64> {
    let mut c = vec![1.0; m + 1];
    for k in 1..=m {
        c[k] = c[k - 1] * (m - k + 1) as f64 / (k * (2 * m - k + 1)) as f64;
    }
    c
}

/// Scaling and squaring with the classical rule: the smallest `k0 >= 0`
/// with `||T||_2 / 2^k0 < theta` (spectral norm by power iteration), a
/// degree-6 Padé approximant, then `k0` squarings.
pub fn expm_sas(t: &UpperTriangular, opts: &KernelOptions) -> Result<FunmReport> {
    opts.validate()?;
    let norm = t.operator_norm(NormKind::TwoEstimate);
    let mut k0 = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm >= opts.theta {
        k0 += 1;
        scaled_norm *= 0.5;
        if k0 as usize > opts.max_steps {
            return Err(Error::MaxStepsExceeded(opts.max_steps));
        }
    }
    let x = if k0 == 0 {
        t.clone()
    } else {
        t.scale_real(0.5f64.powi(k0 as i32))
    };
    let mut r = pade_exp(&x, EXP_PADE_DEGREE as usize)?;
    for step in 0..k0 {
        r = r.mul(&r);
        if !r.as_matrix().is_finite() {
            return Err(Error::Overflow(format!("squaring {} of {k0}", step + 1)));
        }
    }
    let value = UpperTriangular::from_computed(r.into_matrix(), "exponential")?;
    Ok(FunmReport::direct(t, value, k0, EXP_PADE_DEGREE))
}

/// `q(X)^{-1} p(X)` with `p = V + U`, `q = V - U` split into even and odd
/// powers; the denominator is applied by back substitution.
fn pade_exp(x: &UpperTriangular, m: usize) -> Result<UpperTriangular> {
    let n = x.order();
    let c = exp_pade_coefficients(m);
    let mut powers = vec![UpperTriangular::identity(n), x.clone()];
    for k in 2..=m {
        let next = powers[k - 1].mul(x);
        powers.push(next);
    }
    let mut u = UpperTriangular::zeros(n);
    let mut v = UpperTriangular::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        let term = p.scale_real(c[k]);
        if k % 2 == 0 {
            v = v.add(&term);
        } else {
            u = u.add(&term);
        }
    }
    let num = v.add(&u);
    let den = v.sub(&u);
    solve_upper_tri(&den, &num).ok_or_else(|| Error::Overflow("singular Padé denominator".into()))
}
