use std::fmt;

use super::{condition_numbers, kronecker_form, KroneckerForm, KRONECKER_CAP};
use crate::error::{Error, Result};
use crate::kernels::MatrixFunction;
use crate::scaling::{
    apply_similarity, apply_similarity_general, scalar_scaling, Direction, ScalingVector,
};
use crate::triangular::{Matrix, UpperTriangular};

/// Relative residual allowed in `L(T~, E_ij) = a^{j-i} S L(T, E_ij) S^{-1}`.
pub const SIMILARITY_TOL: f64 = 1e-8;
/// Entries outside the `P` block, relative to `||L||_F`.
pub const ZERO_BLOCK_TOL: f64 = 1e-12;
/// Relative slack in `||L(T~, E_ij)||_F <= ||L(T, E_ij)||_F`.
pub const NORM_SLACK: f64 = 1e-10;
/// Absolute slack in `||K~ e_p||_2 <= ||K e_p||_2`.
pub const COLUMN_SLACK: f64 = 1e-12;
/// Relative tolerance on `diag(K~) = diag(K)`.
pub const DIAGONAL_TOL: f64 = 1e-12;
/// Angular tolerance for `k~_pq / k_pq` being real positive.
pub const PHASE_TOL: f64 = 1e-8;
/// Entries below `NOISE_FLOOR * max |k_pq|` carry no phase information.
pub const NOISE_FLOOR: f64 = 1e-12;
/// Relative slack for the logged `||K~||_2 <= ||K||_2` check.
pub const SPECTRAL_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    SimilarityResidual,
    ZeroBlock,
    NormInequality,
    Diagonal,
    ColumnDomination,
    Phase,
}

/// One failed check; `direction` is the zero-based `(i, j)` of `E_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub direction: (usize, usize),
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at E_({},{}): {:.3e}",
            self.kind,
            self.direction.0 + 1,
            self.direction.1 + 1,
            self.value
        )
    }
}

/// Outcome of [`verify_scaling_structure`]. Maxima are over all directions.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub order: usize,
    pub alpha: f64,
    pub similarity_max_residual: f64,
    pub zero_block_max: f64,
    /// `max (||L~||_F - ||L||_F) / ||L||_F`, negative when every norm shrinks.
    pub norm_max_excess: f64,
    pub diagonal_max_diff: f64,
    /// `max (||K~ e_p||_2 - ||K e_p||_2)`.
    pub column_max_excess: f64,
    pub phase_max_angle: f64,
    pub spectral_norm: f64,
    pub spectral_norm_scaled: f64,
    pub cond_rel: f64,
    pub cond_rel_scaled: f64,
    pub violations: Vec<Violation>,
    /// `||K~||_2 > ||K||_2 (1 + SPECTRAL_SLACK)`; logged, never a violation.
    pub spectral_increase: bool,
    /// `cond_rel(T~) > cond_rel(T) (1 + SPECTRAL_SLACK)`; logged only.
    pub cond_rel_increase: bool,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order               {}", self.order)?;
        writeln!(f, "alpha               {:e}", self.alpha)?;
        writeln!(
            f,
            "similarity residual {:.3e}  (tol {:e})",
            self.similarity_max_residual, SIMILARITY_TOL
        )?;
        writeln!(
            f,
            "zero block          {:.3e}  (tol {:e})",
            self.zero_block_max, ZERO_BLOCK_TOL
        )?;
        writeln!(
            f,
            "norm excess         {:.3e}  (slack {:e})",
            self.norm_max_excess, NORM_SLACK
        )?;
        writeln!(
            f,
            "diag(K~)-diag(K)    {:.3e}  (tol {:e})",
            self.diagonal_max_diff, DIAGONAL_TOL
        )?;
        writeln!(
            f,
            "column excess       {:.3e}  (slack {:e})",
            self.column_max_excess, COLUMN_SLACK
        )?;
        writeln!(
            f,
            "phase angle         {:.3e}  (tol {:e})",
            self.phase_max_angle, PHASE_TOL
        )?;
        writeln!(
            f,
            "||K||_2 / ||K~||_2  {:.6e} / {:.6e}{}",
            self.spectral_norm,
            self.spectral_norm_scaled,
            if self.spectral_increase {
                "  [increase logged]"
            } else {
                ""
            }
        )?;
        writeln!(
            f,
            "cond_rel T / T~     {:.6e} / {:.6e}{}",
            self.cond_rel,
            self.cond_rel_scaled,
            if self.cond_rel_increase {
                "  [increase logged]"
            } else {
                ""
            }
        )?;
        writeln!(f, "violations          {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks the structure the scaling imposes on Fréchet derivatives, for
/// `S = diag(1, alpha, ..., alpha^{n-1})` and every direction `E_ij`:
///
/// - `L(T~, E_ij) = alpha^{j-i} S L(T, E_ij) S^{-1}`;
/// - `L(T, E_ij)` vanishes outside rows `1..=i` and columns `j..=n`;
/// - `||L(T~, E_ij)||_F <= ||L(T, E_ij)||_F`;
/// - `diag(K~) = diag(K)` and column norms of `K~` are dominated by `K`'s;
/// - `k~_pq / k_pq` is real positive above the noise floor.
///
/// Violations are collected in the report. Kernel failures are errors.
pub fn verify_scaling_structure(
    kernel: &dyn MatrixFunction,
    t: &UpperTriangular,
    alpha: f64,
) -> Result<VerificationReport> {
    let n = t.order();
    if n > KRONECKER_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: KRONECKER_CAP,
        });
    }
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let s = scalar_scaling(n, alpha)?;
    let scaled = apply_similarity(t, &s, Direction::Forward)?;
    let k = kronecker_form(kernel, t)?;
    let ks = kronecker_form(kernel, &scaled)?;

    let mut violations = Vec::new();
    let mut similarity_max_residual = 0.0f64;
    let mut zero_block_max = 0.0f64;
    let mut norm_max_excess = f64::NEG_INFINITY;
    let mut column_max_excess = f64::NEG_INFINITY;

    for j in 0..n {
        for i in 0..n {
            let p = k.column(i, j);
            let l = column_matrix(&k, p);
            let ls = column_matrix(&ks, p);
            let l_norm = k.column_norms[p];
            let ls_norm = ks.column_norms[p];

            let predicted = similarity_prediction(&l, &s, alpha, i, j)?;
            let denom = ls_norm.max(predicted.frobenius_norm());
            let residual = if denom > 0.0 {
                ls.sub(&predicted).frobenius_norm() / denom
            } else {
                0.0
            };
            similarity_max_residual = similarity_max_residual.max(residual);
            if residual > SIMILARITY_TOL {
                violations.push(Violation {
                    kind: ViolationKind::SimilarityResidual,
                    direction: (i, j),
                    value: residual,
                });
            }

            for (m, m_norm) in [(&l, l_norm), (&ls, ls_norm)] {
                let outside = outside_block(m, i, j);
                let rel = if m_norm > 0.0 {
                    outside / m_norm
                } else {
                    outside
                };
                zero_block_max = zero_block_max.max(rel);
                if rel > ZERO_BLOCK_TOL {
                    violations.push(Violation {
                        kind: ViolationKind::ZeroBlock,
                        direction: (i, j),
                        value: rel,
                    });
                }
            }

            if l_norm > 0.0 {
                let excess = (ls_norm - l_norm) / l_norm;
                norm_max_excess = norm_max_excess.max(excess);
                if excess > NORM_SLACK {
                    violations.push(Violation {
                        kind: ViolationKind::NormInequality,
                        direction: (i, j),
                        value: excess,
                    });
                }
            } else if ls_norm > 0.0 {
                violations.push(Violation {
                    kind: ViolationKind::NormInequality,
                    direction: (i, j),
                    value: f64::INFINITY,
                });
            }

            let col_excess = ls_norm - l_norm;
            column_max_excess = column_max_excess.max(col_excess);
            if col_excess > COLUMN_SLACK {
                violations.push(Violation {
                    kind: ViolationKind::ColumnDomination,
                    direction: (i, j),
                    value: col_excess,
                });
            }
        }
    }

    let nn = n * n;
    let diag_scale = (0..nn).map(|p| k.get(p, p).norm()).fold(0.0, f64::max);
    let mut diagonal_max_diff = 0.0f64;
    for p in 0..nn {
        let d = (ks.get(p, p) - k.get(p, p)).norm();
        let rel = if diag_scale > 0.0 { d / diag_scale } else { d };
        diagonal_max_diff = diagonal_max_diff.max(rel);
        if rel > DIAGONAL_TOL {
            violations.push(Violation {
                kind: ViolationKind::Diagonal,
                direction: (p % n, p / n),
                value: rel,
            });
        }
    }

    let floor = NOISE_FLOOR * k.max_abs();
    let mut phase_max_angle = 0.0f64;
    for q in 0..nn {
        for p in 0..nn {
            let kv = k.get(p, q);
            if kv.norm() <= floor {
                continue;
            }
            let angle = (ks.get(p, q) / kv).arg().abs();
            phase_max_angle = phase_max_angle.max(angle);
            if angle > PHASE_TOL {
                violations.push(Violation {
                    kind: ViolationKind::Phase,
                    direction: (q % n, q / n),
                    value: angle,
                });
            }
        }
    }

    let cond = condition_numbers(kernel, t)?;
    let cond_scaled = condition_numbers(kernel, &scaled)?;

    Ok(VerificationReport {
        order: n,
        alpha,
        similarity_max_residual,
        zero_block_max,
        norm_max_excess,
        diagonal_max_diff,
        column_max_excess,
        phase_max_angle,
        spectral_norm: k.spectral_norm,
        spectral_norm_scaled: ks.spectral_norm,
        cond_rel: cond.cond_rel,
        cond_rel_scaled: cond_scaled.cond_rel,
        violations,
        spectral_increase: ks.spectral_norm > k.spectral_norm * (1.0 + SPECTRAL_SLACK),
        cond_rel_increase: cond_scaled.cond_rel > cond.cond_rel * (1.0 + SPECTRAL_SLACK),
    })
}

/// Column `p` of `K` reshaped back to an `n x n` matrix.
fn column_matrix(k: &KroneckerForm, p: usize) -> Matrix {
    let n = k.order;
    Matrix::from_fn(n, |r, c| k.get(c * n + r, p))
}

/// `alpha^{j-i} S L S^{-1}`.
fn similarity_prediction(
    l: &Matrix,
    s: &ScalingVector,
    alpha: f64,
    i: usize,
    j: usize,
) -> Result<Matrix> {
    let similar = apply_similarity_general(l, s, Direction::Forward)?;
    let factor = alpha.powi(j as i32 - i as i32);
    Ok(similar.scale_real(factor))
}

/// Frobenius norm of the entries in rows below `i` or columns left of `j`.
fn outside_block(m: &Matrix, i: usize, j: usize) -> f64 {
    let n = m.order();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r > i || c < j {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Exp, Log};
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_t_has_exact_similarity_on_diagonal_directions() {
        let t = UpperTriangular::diagonal(&[c(0.5), c(-0.3), c(1.1)]).unwrap();
        let rep = verify_scaling_structure(&Exp::default(), &t, 4.0).unwrap();
        assert!(rep.is_clean(), "{rep}");
        let s = scalar_scaling(3, 4.0).unwrap();
        let scaled = apply_similarity(&t, &s, Direction::Forward).unwrap();
        assert_eq!(scaled, t);
    }

    #[test]
    fn random_like_exp_and_log() {
        let t = UpperTriangular::validate(&[
            vec![
                Complex64::new(0.9, 0.2),
                c(0.7),
                Complex64::new(-0.4, 0.3),
                c(0.2),
            ],
            vec![c(0.0), c(1.3), c(-0.6), Complex64::new(0.1, 0.5)],
            vec![c(0.0), c(0.0), Complex64::new(0.6, -0.1), c(0.9)],
            vec![c(0.0), c(0.0), c(0.0), c(1.7)],
        ])
        .unwrap();
        let rep = verify_scaling_structure(&Exp::default(), &t, 10.0).unwrap();
        assert!(rep.is_clean(), "{rep}");
        let rep = verify_scaling_structure(&Log::default(), &t, 10.0).unwrap();
        assert!(rep.is_clean(), "{rep}");
    }

    #[test]
    fn rejects_alpha_at_most_one() {
        let t = UpperTriangular::identity(2);
        assert!(verify_scaling_structure(&Exp::default(), &t, 1.0).is_err());
    }
}
