use super::{negative_real_eigenvalue, sqrtm_tri, FunmReport, KernelOptions};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::triangular::{solve_upper_tri, UpperTriangular};

pub const LOG_PADE_DEGREE: u32 = 7;

/// Inverse scaling and squaring: take square roots until
/// `||R - I||_1 < theta`, evaluate the degree-7 diagonal Padé approximant
/// of `log(I + X)` at `X = R - I`, and multiply by `2^s`.
pub fn logm_iss(t: &UpperTriangular, opts: &KernelOptions) -> Result<FunmReport> {
    opts.validate()?;
    if let Some(index) = negative_real_eigenvalue(t) {
        return Err(Error::PrincipalLogUndefined { index });
    }
    let n = t.order();
    let identity = UpperTriangular::identity(n);
    let mut r = t.clone();
    let mut s = 0u32;
    while r.sub(&identity).operator_norm(crate::NormKind::One) >= opts.theta {
        if s as usize >= opts.max_steps {
            return Err(Error::MaxStepsExceeded(opts.max_steps));
        }
        r = sqrtm_tri(&r)?;
        s += 1;
    }
    let x = r.sub(&identity);
    let log = pade_log(&x, LOG_PADE_DEGREE as usize)?;
    let value = if s == 0 {
        log
    } else {
        log.scale_real(2f64.powi(s as i32))
    };
    let value = UpperTriangular::from_computed(value.into_matrix(), "logarithm")?;
    Ok(FunmReport::direct(t, value, s, LOG_PADE_DEGREE))
}

/// Partial-fraction form of the `[m/m]` Padé approximant of `log(1 + x)`:
/// `sum_j w_j X (I + x_j X)^{-1}` over the `m`-point Gauss–Legendre rule
/// on `[0, 1]`. Each term is one triangular solve.
fn pade_log(x: &UpperTriangular, m: usize) -> Result<UpperTriangular> {
    let n = x.order();
    let rule = GaussLegendre::new(m);
    let identity = UpperTriangular::identity(n);
    let mut acc = UpperTriangular::zeros(n);
    for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
        let den = identity.add(&x.scale_real(node));
        let term = solve_upper_tri(&den, x)
            .ok_or_else(|| Error::Overflow("singular Padé denominator".into()))?;
        acc = acc.add(&term.scale_real(w));
    }
    Ok(acc)
}
