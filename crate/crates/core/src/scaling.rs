//! Diagonal scaling similarity `T~ = S T S^{-1}` for upper triangular `T`.
//!
//! `S` is either `diag(1, a, ..., a^{n-1})` or the block form
//! `diag(I_{n1}, a I_{n1}, ..., a^{m-1} I_{nm})`. Entry `(i, j)` of `T~` is
//! `t_ij / r_ij` with `r_ij = s_j / s_i`, so scaling shrinks every
//! superdiagonal by a power of `a` and leaves the diagonal untouched. The
//! parameter heuristic picks `a = max |t_ij|` and the largest `m` with
//! `a^m <= 1e20`.

use crate::error::{Error, Result};
use crate::kernels::{FunmReport, MatrixFunction};
use crate::triangular::{ops, Matrix, UpperTriangular};

/// Largest allowed magnification `alpha^m` chosen by [`choose_parameters`].
pub const MAX_MAGNIFICATION: f64 = 1e20;
/// Below this, [`choose_parameters`] returns the trivial plan.
pub const MIN_ALPHA: f64 = 10.0;

/// The diagonal of `S`: positive, nondecreasing, starting at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector {
    diag: Vec<f64>,
}

impl ScalingVector {
    pub fn ones(n: usize) -> Self {
        ScalingVector { diag: vec![1.0; n] }
    }

    /// Validates an explicit diagonal.
    pub fn from_diag(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Empty);
        }
        if diag[0] != 1.0 {
            return Err(Error::InvalidOption(
                "scaling vector must start at 1".into(),
            ));
        }
        for w in diag.windows(2) {
            if !(w[1].is_finite() && w[1] >= w[0]) {
                return Err(Error::InvalidOption(
                    "scaling vector must be finite and nondecreasing".into(),
                ));
            }
        }
        Ok(ScalingVector { diag })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.diag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `s_j / s_i`.
    #[inline]
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.diag[j] / self.diag[i]
    }

    pub fn is_identity(&self) -> bool {
        self.diag.iter().all(|&x| x == 1.0)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// `diag(1, alpha, ..., alpha^{n-1})`, powers formed by repeated multiplication.
pub fn scalar_scaling(n: usize, alpha: f64) -> Result<ScalingVector> {
    block_scaling(n, alpha, n)
}

/// Equal leading blocks of size `floor(n/m)`, remainder in the last block.
pub fn block_sizes(n: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::InvalidBlocks { m, n });
    }
    let n1 = n / m;
    let mut sizes = vec![n1; m - 1];
    sizes.push(n - (m - 1) * n1);
    Ok(sizes)
}

/// `diag(I_{n1}, alpha I_{n1}, ..., alpha^{m-1} I_{nm})`.
pub fn block_scaling(n: usize, alpha: f64, m: usize) -> Result<ScalingVector> {
    if n == 0 {
        return Err(Error::Empty);
    }
    check_alpha(alpha)?;
    let sizes = block_sizes(n, m)?;
    let mut diag = Vec::with_capacity(n);
    let mut power = 1.0f64;
    for (k, &size) in sizes.iter().enumerate() {
        if k > 0 {
            power *= alpha;
            if !power.is_finite() {
                return Err(Error::Overflow(format!("alpha^{k} with alpha = {alpha}")));
            }
        }
        diag.extend(std::iter::repeat_n(power, size));
    }
    Ok(ScalingVector { diag })
}

/// Direction of the similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `S T S^{-1}`.
    Forward,
    /// `S^{-1} T S`.
    Inverse,
}

/// Applies the similarity entrywise in O(n^2): forward maps `t_ij` to
/// `t_ij / (s_j/s_i)`, inverse to `t_ij * (s_j/s_i)`. The diagonal is
/// never touched.
pub fn apply_similarity(
    t: &UpperTriangular,
    s: &ScalingVector,
    direction: Direction,
) -> Result<UpperTriangular> {
    let n = t.order();
    if s.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.len(),
        });
    }
    let mut out = t.as_matrix().clone();
    for i in 0..n {
        for j in i + 1..n {
            let r = s.ratio(i, j);
            out[(i, j)] = match direction {
                Direction::Forward => out[(i, j)] / r,
                Direction::Inverse => out[(i, j)] * r,
            };
        }
        ops::tick(2 * (n - i - 1) as u64);
    }
    UpperTriangular::from_computed(out, "scaling similarity")
}

/// Same similarity on a general square matrix (entries below the diagonal
/// are scaled up by the forward map).
pub fn apply_similarity_general(
    x: &Matrix,
    s: &ScalingVector,
    direction: Direction,
) -> Result<Matrix> {
    let n = x.order();
    if s.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.len(),
        });
    }
    let mut out = x.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let r = s.ratio(i, j);
            out[(i, j)] = match direction {
                Direction::Forward => out[(i, j)] / r,
                Direction::Inverse => out[(i, j)] * r,
            };
        }
    }
    if let Some((i, j)) = out.first_non_finite() {
        return Err(Error::Overflow(format!("similarity: entry ({i}, {j})")));
    }
    Ok(out)
}

/// How the heuristic treats the measured `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaMode {
    /// Use `max |t_ij|` unchanged.
    #[default]
    AsIs,
    /// Round to the nearest power of two, making the similarity exact.
    PowerOfTwo,
}

/// The `(alpha, m, block sizes)` triple with its scaling vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPlan {
    pub alpha: f64,
    pub m: usize,
    pub block_sizes: Vec<usize>,
    pub scaling_vector: ScalingVector,
}

impl ScalingPlan {
    /// The no-op plan `alpha = 1, m = 1`.
    pub fn trivial(n: usize) -> Self {
        ScalingPlan {
            alpha: 1.0,
            m: 1,
            block_sizes: vec![n],
            scaling_vector: ScalingVector::ones(n),
        }
    }

    /// Scalar scaling with `S = diag(1, alpha, ..., alpha^{n-1})`.
    pub fn scalar(n: usize, alpha: f64) -> Result<Self> {
        Self::blocks(n, alpha, n)
    }

    pub fn blocks(n: usize, alpha: f64, m: usize) -> Result<Self> {
        Ok(ScalingPlan {
            alpha,
            m,
            block_sizes: block_sizes(n, m)?,
            scaling_vector: block_scaling(n, alpha, m)?,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.scaling_vector.is_identity()
    }

    pub fn order(&self) -> usize {
        self.scaling_vector.len()
    }
}

/// The heuristic with `alpha` used as measured.
pub fn choose_parameters(t: &UpperTriangular) -> ScalingPlan {
    choose_parameters_with(t, AlphaMode::AsIs)
}

/// `alpha = max_{i<=j} |t_ij|`; trivial plan when `alpha < 10`;
/// otherwise `m = floor(20 ln 10 / ln alpha)` clamped to `[1, n]`.
pub fn choose_parameters_with(t: &UpperTriangular, mode: AlphaMode) -> ScalingPlan {
    let n = t.order();
    let mut alpha = 0.0f64;
    for i in 0..n {
        for j in i..n {
            alpha = alpha.max(t.get(i, j).norm());
        }
        ops::tick((n - i) as u64);
    }
    if alpha < MIN_ALPHA {
        return ScalingPlan::trivial(n);
    }
    if mode == AlphaMode::PowerOfTwo {
        alpha = alpha.log2().round().exp2();
    }
    let m_raw = (20.0 * std::f64::consts::LN_10 / alpha.ln()).floor();
    if m_raw < 1.0 {
        // a single block is a no-op
        return ScalingPlan::trivial(n);
    }
    let mut m = (m_raw as usize).min(n);
    while m > 1 && alpha.powi(m as i32) > MAX_MAGNIFICATION {
        m -= 1;
    }
    if m == 1 {
        return ScalingPlan::trivial(n);
    }
    ScalingPlan::blocks(n, alpha, m).unwrap_or_else(|_| ScalingPlan::trivial(n))
}

/// Runs `kernel` on `S T S^{-1}` and recovers `f(T) = S^{-1} f(T~) S`.
///
/// Without an explicit plan the heuristic of [`choose_parameters`] is used.
/// A trivial plan calls the kernel on `T` itself.
pub fn scaled_compute(
    t: &UpperTriangular,
    kernel: &dyn MatrixFunction,
    plan: Option<&ScalingPlan>,
) -> Result<FunmReport> {
    let chosen;
    let plan = match plan {
        Some(p) => p,
        None => {
            chosen = choose_parameters(t);
            &chosen
        }
    };
    if plan.order() != t.order() {
        return Err(Error::DimensionMismatch {
            expected: t.order(),
            found: plan.order(),
        });
    }
    let ratio = t.nilpotent_ratio();
    if plan.is_trivial() {
        let mut report = kernel.evaluate(t)?;
        report.alpha_used = 1.0;
        report.m_used = 1;
        report.input_ratio = ratio;
        return Ok(report);
    }
    let scaled = apply_similarity(t, &plan.scaling_vector, Direction::Forward)?;
    let mut report = kernel.evaluate(&scaled)?;
    report.value = apply_similarity(&report.value, &plan.scaling_vector, Direction::Inverse)
        .map_err(|_| Error::Overflow("recovered f(T) has non-finite entries".into()))?;
    report.alpha_used = plan.alpha;
    report.m_used = plan.m;
    report.input_ratio = ratio;
    Ok(report)
}
