//! Matrix function kernels for upper triangular matrices.
//!
//! All kernels work on the upper triangle only and use classical
//! norm-threshold criteria with fixed Padé degrees, so the number of
//! squarings or square roots they report depends only on the input norm.

mod acos;
mod exp;
mod log;
mod parlett;
mod sqrt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::triangular::UpperTriangular;

pub use acos::{acosm, cosm, ACOS_EXTRA_ROOTS};
pub use exp::{exp_pade_coefficients, expm_sas, EXP_PADE_DEGREE};
pub use log::{logm_iss, LOG_PADE_DEGREE};
pub use parlett::{funm_parlett, PARLETT_SEPARATION};
pub use sqrt::sqrtm_tri;

/// A computed `f(T)` with the counters and scaling diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FunmReport {
    pub value: UpperTriangular,
    /// Squarings for exp, square roots for log and acos.
    pub count_s: u32,
    pub pade_degree: u32,
    pub alpha_used: f64,
    pub m_used: usize,
    /// `||N||_F / ||D||_F` of the input.
    pub input_ratio: f64,
}

impl FunmReport {
    pub(crate) fn direct(
        t: &UpperTriangular,
        value: UpperTriangular,
        count_s: u32,
        pade_degree: u32,
    ) -> Self {
        FunmReport {
            value,
            count_s,
            pade_degree,
            alpha_used: 1.0,
            m_used: 1,
            input_ratio: t.nilpotent_ratio(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMode {
    /// Norm below a fixed threshold, fixed Padé degree.
    #[default]
    Classical,
}

/// Threshold and step cap shared by the iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub mode: KernelMode,
    pub theta: f64,
    pub max_steps: usize,
}

impl KernelOptions {
    /// `||T||_2 / 2^k < 1`.
    pub fn exp() -> Self {
        KernelOptions {
            mode: KernelMode::Classical,
            theta: 1.0,
            max_steps: 1100,
        }
    }

    /// `||T^{1/2^s} - I||_1 < 0.25`.
    pub fn log() -> Self {
        KernelOptions {
            mode: KernelMode::Classical,
            theta: 0.25,
            max_steps: 64,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidOption(format!(
                "theta must lie in (0, 1], got {}",
                self.theta
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidOption("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// A function kernel that maps an upper triangular `T` to `f(T)`.
pub trait MatrixFunction: Sync {
    fn name(&self) -> &str;

    fn evaluate(&self, t: &UpperTriangular) -> Result<FunmReport>;

    /// The scalar function, when it is available in closed form.
    fn scalar(&self, _z: Complex64) -> Option<Complex64> {
        None
    }
}

/// Scaling-and-squaring exponential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp(pub KernelOptions);

/// Inverse scaling-and-squaring logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Log(pub KernelOptions);

/// Inverse cosine through the logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Acos(pub KernelOptions);

/// Principal square root.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sqrt;

impl Default for Exp {
    fn default() -> Self {
        Exp(KernelOptions::exp())
    }
}

impl Default for Log {
    fn default() -> Self {
        Log(KernelOptions::log())
    }
}

impl Default for Acos {
    fn default() -> Self {
        Acos(KernelOptions::log())
    }
}

impl MatrixFunction for Exp {
    fn name(&self) -> &str {
        "exp"
    }
    fn evaluate(&self, t: &UpperTriangular) -> Result<FunmReport> {
        expm_sas(t, &self.0)
    }
    fn scalar(&self, z: Complex64) -> Option<Complex64> {
        Some(z.exp())
    }
}

impl MatrixFunction for Log {
    fn name(&self) -> &str {
        "log"
    }
    fn evaluate(&self, t: &UpperTriangular) -> Result<FunmReport> {
        logm_iss(t, &self.0)
    }
    fn scalar(&self, z: Complex64) -> Option<Complex64> {
        Some(z.ln())
    }
}

impl MatrixFunction for Acos {
    fn name(&self) -> &str {
        "acos"
    }
    fn evaluate(&self, t: &UpperTriangular) -> Result<FunmReport> {
        acosm(t, &self.0)
    }
    fn scalar(&self, z: Complex64) -> Option<Complex64> {
        Some(z.acos())
    }
}

impl MatrixFunction for Sqrt {
    fn name(&self) -> &str {
        "sqrt"
    }
    fn evaluate(&self, t: &UpperTriangular) -> Result<FunmReport> {
        let value = sqrtm_tri(t)?;
        Ok(FunmReport::direct(t, value, 1, 0))
    }
    fn scalar(&self, z: Complex64) -> Option<Complex64> {
        Some(z.sqrt())
    }
}

/// The functions exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Exp,
    Log,
    Acos,
}

impl FunctionKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Exp => "exp",
            FunctionKind::Log => "log",
            FunctionKind::Acos => "acos",
        }
    }

    /// Kernel with default options, `theta` overriding the threshold.
    pub fn kernel(self, theta: Option<f64>) -> Box<dyn MatrixFunction> {
        match self {
            FunctionKind::Exp => {
                let o = KernelOptions::exp();
                Box::new(Exp(theta.map_or(o, |t| o.with_theta(t))))
            }
            FunctionKind::Log => {
                let o = KernelOptions::log();
                Box::new(Log(theta.map_or(o, |t| o.with_theta(t))))
            }
            FunctionKind::Acos => {
                let o = KernelOptions::log();
                Box::new(Acos(theta.map_or(o, |t| o.with_theta(t))))
            }
        }
    }
}

impl std::str::FromStr for FunctionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(FunctionKind::Exp),
            "log" => Ok(FunctionKind::Log),
            "acos" => Ok(FunctionKind::Acos),
            other => Err(Error::InvalidOption(format!("unknown function `{other}`"))),
        }
    }
}

/// Rejects eigenvalues on the closed negative real axis, returning the
/// offending index.
pub(crate) fn negative_real_eigenvalue(t: &UpperTriangular) -> Option<usize> {
    t.diag().iter().position(|z| z.im == 0.0 && z.re <= 0.0)
}
