use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::generators::{gen_paper_matrix, gen_random_smalldiag, gen_toeplitz_geometric};
use super::record::{write_records, ExperimentRecord};
use crate::error::{Error, Result};
use crate::kernels::{funm_parlett, FunctionKind, FunmReport, MatrixFunction};
use crate::scaling::{choose_parameters, scaled_compute};
use crate::triangular::{Matrix, UpperTriangular};

/// Relative distance above which a cross-agreement row is flagged.
pub const CROSS_TOL: f64 = 1e-6;

/// Base of the Toeplitz family `t_ij = base^{j-i+1}`.
pub const TOEPLITZ_BASE: f64 = 1.2;

/// Diagonal and off-diagonal magnitudes of the random log/exp matrices.
pub const SMALLDIAG_DIAGONAL: f64 = 2.0;
pub const SMALLDIAG_OFFDIAG: f64 = 20.0;
/// Diagonal magnitude of the random acos matrices, keeping `+-1` off the
/// spectrum.
pub const ACOS_DIAGONAL: f64 = 0.9;

/// Inclusive range `start:step:stop`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub start: usize,
    pub step: usize,
    pub stop: usize,
}

impl SizeRange {
    pub fn new(start: usize, step: usize, stop: usize) -> Self {
        SizeRange { start, step, stop }
    }

    pub fn sizes(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step.max(1)).collect()
    }
}

impl FromStr for SizeRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidOption(format!("sizes must be `start:step:stop` or `n`, got `{s}`"));
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let r = match parts[..] {
            [n] => SizeRange::new(n, 1, n),
            [a, b, c] => SizeRange::new(a, b, c),
            _ => return Err(bad()),
        };
        if r.start == 0 || r.step == 0 || r.stop < r.start {
            return Err(bad());
        }
        Ok(r)
    }
}

/// The experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Logarithm of the fixed test matrices and random small-diagonal matrices.
    Exp1Log,
    /// Logarithm of geometric Toeplitz matrices.
    Exp2Toeplitz,
    /// Exponential of `eq3` and the `Exp1Log` matrices.
    Exp3Exp,
    /// Inverse cosine of random matrices with spectrum inside the unit disk.
    Exp4Acos,
    /// Caller-supplied matrices only.
    Custom(FunctionKind),
}

impl ExperimentKind {
    pub fn function(self) -> FunctionKind {
        match self {
            ExperimentKind::Exp1Log | ExperimentKind::Exp2Toeplitz => FunctionKind::Log,
            ExperimentKind::Exp3Exp => FunctionKind::Exp,
            ExperimentKind::Exp4Acos => FunctionKind::Acos,
            ExperimentKind::Custom(f) => f,
        }
    }

    pub fn name(self) -> String {
        match self {
            ExperimentKind::Exp1Log => "exp1-log".into(),
            ExperimentKind::Exp2Toeplitz => "exp2-toeplitz".into(),
            ExperimentKind::Exp3Exp => "exp3-exp".into(),
            ExperimentKind::Exp4Acos => "exp4-acos".into(),
            ExperimentKind::Custom(f) => format!("custom-{}", f.name()),
        }
    }

    /// Sizes used when none are given.
    pub fn default_sizes(self) -> SizeRange {
        match self {
            ExperimentKind::Exp1Log | ExperimentKind::Exp3Exp => SizeRange::new(9, 2, 17),
            ExperimentKind::Exp2Toeplitz => SizeRange::new(82, 2, 100),
            ExperimentKind::Exp4Acos => SizeRange::new(10, 1, 19),
            ExperimentKind::Custom(_) => SizeRange::new(1, 1, 0),
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp1-log" => Ok(ExperimentKind::Exp1Log),
            "exp2-toeplitz" => Ok(ExperimentKind::Exp2Toeplitz),
            "exp3-exp" => Ok(ExperimentKind::Exp3Exp),
            "exp4-acos" => Ok(ExperimentKind::Exp4Acos),
            _ => match s.strip_prefix("custom-") {
                Some(f) => Ok(ExperimentKind::Custom(f.parse()?)),
                None => Err(Error::InvalidOption(format!("unknown experiment `{s}`"))),
            },
        }
    }
}

/// A matrix to run, with its exact function value when one is known.
#[derive(Debug, Clone)]
pub struct ExperimentInput {
    pub id: String,
    pub matrix: UpperTriangular,
    pub exact: Option<UpperTriangular>,
}

impl ExperimentInput {
    pub fn new(id: impl Into<String>, matrix: UpperTriangular) -> Self {
        ExperimentInput {
            id: id.into(),
            matrix,
            exact: None,
        }
    }

    pub fn with_exact(mut self, exact: UpperTriangular) -> Self {
        self.exact = Some(exact);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub sizes: Option<SizeRange>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sizes: None,
            seed: 2024,
        }
    }
}

fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `log(e^a [1 b; 0 1]) = [a b; 0 a]` for the `exp1_t1` matrix.
fn exp1_t1_log() -> UpperTriangular {
    UpperTriangular::from_real_rows(&[&[0.1, 1e6], &[0.0, 0.1]]).expect("literal")
}

/// `exp(c [1 b; 0 1]) = e^c [1 cb; 0 1]` with `c = e^{0.1}`, `b = 1e6`.
fn exp1_t1_exp() -> UpperTriangular {
    let c = 0.1f64.exp();
    let e = c.exp();
    UpperTriangular::from_real_rows(&[&[e, e * c * 1e6], &[0.0, e]]).expect("literal")
}

/// `exp([1 b; 0 -1]) = [e b sinh(1); 0 1/e]` for `eq3`.
fn eq3_exp() -> UpperTriangular {
    let e = 1f64.exp();
    UpperTriangular::from_real_rows(&[&[e, 1e6 * 1f64.sinh()], &[0.0, 1.0 / e]]).expect("literal")
}

/// `log T = ln(b) I + sum_k (b J)^k / k`, since `T = b (I - bJ)^{-1}` with
/// `J` the shift.
pub fn toeplitz_geometric_log(n: usize, base: f64) -> UpperTriangular {
    let lb = base.ln();
    UpperTriangular::new(Matrix::from_fn(n, |i, j| {
        if i == j {
            real(lb)
        } else if i < j {
            let k = (j - i) as i32;
            real(base.powi(k) / k as f64)
        } else {
            real(0.0)
        }
    }))
    .expect("finite for moderate n")
}

fn random_suite(
    sizes: &[usize],
    seed: u64,
    diag: f64,
    offdiag: f64,
) -> Result<Vec<ExperimentInput>> {
    sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let s = seed + k as u64;
            let t = gen_random_smalldiag(n, s, diag, offdiag)?;
            Ok(ExperimentInput::new(format!("rand{n}_s{s}"), t))
        })
        .collect()
}

/// The generated matrices of an experiment, in output order.
pub fn build_suite(kind: ExperimentKind, config: &SuiteConfig) -> Result<Vec<ExperimentInput>> {
    let sizes = config.sizes.unwrap_or_else(|| kind.default_sizes()).sizes();
    let mut out = Vec::new();
    match kind {
        ExperimentKind::Exp1Log => {
            out.push(
                ExperimentInput::new("exp1_t1", gen_paper_matrix("exp1_t1")?)
                    .with_exact(exp1_t1_log()),
            );
            out.push(ExperimentInput::new("eq4", gen_paper_matrix("eq4")?));
            out.extend(random_suite(
                &sizes,
                config.seed,
                SMALLDIAG_DIAGONAL,
                SMALLDIAG_OFFDIAG,
            )?);
        }
        ExperimentKind::Exp3Exp => {
            out.push(ExperimentInput::new("eq3", gen_paper_matrix("eq3")?).with_exact(eq3_exp()));
            out.push(
                ExperimentInput::new("exp1_t1", gen_paper_matrix("exp1_t1")?)
                    .with_exact(exp1_t1_exp()),
            );
            out.push(ExperimentInput::new("eq4", gen_paper_matrix("eq4")?));
            out.extend(random_suite(
                &sizes,
                config.seed,
                SMALLDIAG_DIAGONAL,
                SMALLDIAG_OFFDIAG,
            )?);
        }
        ExperimentKind::Exp2Toeplitz => {
            for n in sizes {
                out.push(
                    ExperimentInput::new(
                        format!("toeplitz{n}"),
                        gen_toeplitz_geometric(n, TOEPLITZ_BASE)?,
                    )
                    .with_exact(toeplitz_geometric_log(n, TOEPLITZ_BASE)),
                );
            }
        }
        ExperimentKind::Exp4Acos => {
            out.extend(random_suite(
                &sizes,
                config.seed,
                ACOS_DIAGONAL,
                SMALLDIAG_OFFDIAG,
            )?);
        }
        ExperimentKind::Custom(_) => {}
    }
    Ok(out)
}

/// Short kebab-case name of an error, used in the `oracle` column.
pub fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::Overflow(_) => "overflow",
        Error::PrincipalRootUndefined { .. } => "root-undefined",
        Error::IllPosedRecurrence { .. } => "ill-posed",
        Error::PrincipalLogUndefined { .. } => "log-undefined",
        Error::MaxStepsExceeded(_) => "max-steps",
        Error::BranchPoint { .. } => "branch-point",
        Error::BranchCutCrossed(_) => "branch-cut",
        Error::ConfluentSpectrum(..) => "confluent",
        _ => "invalid",
    }
}

fn relative_error(exact: &UpperTriangular, approx: &UpperTriangular) -> f64 {
    let d = exact.sub(approx).frobenius_norm();
    let nf = exact.frobenius_norm();
    if nf > 0.0 {
        d / nf
    } else {
        d
    }
}

fn timed(f: impl FnOnce() -> Result<FunmReport>) -> (Result<FunmReport>, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64() * 1e3)
}

fn reference(
    kernel: &dyn MatrixFunction,
    input: &ExperimentInput,
) -> Option<(&'static str, UpperTriangular)> {
    if let Some(x) = &input.exact {
        return Some(("closed", x.clone()));
    }
    let f = |z: Complex64| kernel.scalar(z).unwrap_or(Complex64::new(f64::NAN, 0.0));
    kernel.scalar(Complex64::new(0.5, 0.0))?;
    funm_parlett(&input.matrix, f).ok().map(|x| ("parlett", x))
}

/// Runs one matrix directly and through the scaling heuristic.
pub fn run_row(kernel: &dyn MatrixFunction, input: &ExperimentInput) -> ExperimentRecord {
    let t = &input.matrix;
    let plan = choose_parameters(t);
    let (direct, rt_d) = timed(|| kernel.evaluate(t));
    let (scaled, rt_s) = timed(|| scaled_compute(t, kernel, Some(&plan)));

    let mut rec = ExperimentRecord {
        matrix_id: input.id.clone(),
        n: t.order(),
        ratio: t.nilpotent_ratio(),
        alpha: plan.alpha,
        m: plan.m,
        s_direct: direct.as_ref().map_or(0, |r| r.count_s),
        s_scaled: scaled.as_ref().map_or(0, |r| r.count_s),
        err_direct: None,
        err_scaled: None,
        oracle: String::new(),
        runtime_direct_ms: rt_d,
        runtime_scaled_ms: rt_s,
    };

    let reference = reference(kernel, input);
    if let Some((_, x)) = &reference {
        rec.err_direct = direct.as_ref().ok().map(|r| relative_error(x, &r.value));
        rec.err_scaled = scaled.as_ref().ok().map(|r| relative_error(x, &r.value));
    }
    rec.oracle = match (&direct, &scaled, &reference) {
        (Err(e), _, _) => format!("error:direct:{}", error_tag(e)),
        (_, Err(e), _) => format!("error:scaled:{}", error_tag(e)),
        (_, _, Some((label, _))) => label.to_string(),
        (Ok(d), Ok(s), None) => {
            let dist = relative_error(&d.value, &s.value);
            rec.err_direct = Some(0.0);
            rec.err_scaled = Some(dist);
            if dist <= CROSS_TOL {
                "cross".into()
            } else {
                "cross-flagged".into()
            }
        }
    };
    rec
}

/// Runs every input in parallel and writes the CSV when `out_path` is
/// given. Records follow input order.
pub fn run_experiment(
    function: FunctionKind,
    theta: Option<f64>,
    inputs: &[ExperimentInput],
    out_path: Option<&Path>,
) -> Result<Vec<ExperimentRecord>> {
    let kernel = function.kernel(theta);
    let kernel: &dyn MatrixFunction = kernel.as_ref();
    let records: Vec<ExperimentRecord> =
        inputs.par_iter().map(|inp| run_row(kernel, inp)).collect();
    if let Some(path) = out_path {
        let file = BufWriter::new(File::create(path)?);
        write_records(&records, file)?;
    }
    Ok(records)
}
