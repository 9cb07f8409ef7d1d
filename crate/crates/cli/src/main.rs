use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use triscale::experiments::{
    build_suite, read_matrix, run_experiment, summary_table, write_matrix, ExperimentInput,
    ExperimentKind, SizeRange, SuiteConfig,
};
use triscale::frechet::{condition_numbers, verify_scaling_structure, KRONECKER_CAP};
use triscale::{
    apply_similarity, choose_parameters, scaled_compute, Direction, Error, FunctionKind,
    FunmReport, ScalingPlan, UpperTriangular,
};

#[derive(Parser)]
#[command(
    name = "triscale",
    version,
    about = "Diagonal scaling for functions of triangular matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply or undo the scaling similarity.
    Scale {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Number of blocks; scalar scaling when omitted.
        #[arg(long)]
        m: Option<usize>,
        /// Compute S^{-1} T S instead of S T S^{-1}.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the heuristic's (alpha, m, block sizes).
    Plan {
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate a matrix function.
    Fn {
        function: Func,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long)]
        theta: Option<f64>,
        /// Writes the scaled result, or the direct one with `--mode direct`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Condition numbers from the Kronecker form.
    Cond {
        #[arg(long = "fn", value_enum)]
        function: DerivFunc,
        #[arg(long)]
        input: PathBuf,
    },
    /// Structural checks of the scaled Fréchet derivative.
    Verify {
        #[arg(long = "fn", value_enum)]
        function: DerivFunc,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Run an experiment suite and write a CSV.
    Bench {
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// `start:step:stop` for the generated matrices.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Extra matrix files appended to the suite.
        #[arg(long)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Func {
    Exp,
    Log,
    Acos,
}

#[derive(Clone, Copy, ValueEnum)]
enum DerivFunc {
    Exp,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Scaled,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    #[value(name = "exp1-log")]
    Exp1Log,
    #[value(name = "exp2-toeplitz")]
    Exp2Toeplitz,
    #[value(name = "exp3-exp")]
    Exp3Exp,
    #[value(name = "exp4-acos")]
    Exp4Acos,
}

impl From<Func> for FunctionKind {
    fn from(f: Func) -> Self {
        match f {
            Func::Exp => FunctionKind::Exp,
            Func::Log => FunctionKind::Log,
            Func::Acos => FunctionKind::Acos,
        }
    }
}

impl From<DerivFunc> for FunctionKind {
    fn from(f: DerivFunc) -> Self {
        match f {
            DerivFunc::Exp => FunctionKind::Exp,
            DerivFunc::Log => FunctionKind::Log,
        }
    }
}

impl From<Experiment> for ExperimentKind {
    fn from(e: Experiment) -> Self {
        match e {
            Experiment::Exp1Log => ExperimentKind::Exp1Log,
            Experiment::Exp2Toeplitz => ExperimentKind::Exp2Toeplitz,
            Experiment::Exp3Exp => ExperimentKind::Exp3Exp,
            Experiment::Exp4Acos => ExperimentKind::Exp4Acos,
        }
    }
}

enum Outcome {
    Done,
    Violations,
}

fn load(path: &Path) -> Result<UpperTriangular, Error> {
    read_matrix(path).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        Error::Io(m) => Error::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn print_report(label: &str, r: &FunmReport) {
    println!(
        "{label:<7} count_s={} pade_degree={} alpha={:e} m={} ratio={:.6e} ||f||_F={:.6e}",
        r.count_s,
        r.pade_degree,
        r.alpha_used,
        r.m_used,
        r.input_ratio,
        r.value.frobenius_norm()
    );
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Scale {
            input,
            alpha,
            m,
            inverse,
            output,
        } => {
            let t = load(&input)?;
            let n = t.order();
            let plan = match m {
                Some(m) => ScalingPlan::blocks(n, alpha, m)?,
                None => ScalingPlan::scalar(n, alpha)?,
            };
            let dir = if inverse {
                Direction::Inverse
            } else {
                Direction::Forward
            };
            let out = apply_similarity(&t, &plan.scaling_vector, dir)?;
            write_matrix(&out, &output)?;
            println!(
                "||T||_F={:.6e} -> {:.6e} (alpha={:e}, m={})",
                t.frobenius_norm(),
                out.frobenius_norm(),
                plan.alpha,
                plan.m
            );
        }
        Command::Plan { input } => {
            let t = load(&input)?;
            let plan = choose_parameters(&t);
            println!("alpha={:e}", plan.alpha);
            println!("m={}", plan.m);
            let sizes: Vec<String> = plan.block_sizes.iter().map(|s| s.to_string()).collect();
            println!("block_sizes={}", sizes.join(","));
            println!("ratio={:.6e}", t.nilpotent_ratio());
        }
        Command::Fn {
            function,
            input,
            mode,
            theta,
            output,
        } => {
            let t = load(&input)?;
            let kernel = FunctionKind::from(function).kernel(theta);
            let direct = match mode {
                Mode::Direct | Mode::Both => Some(kernel.evaluate(&t)?),
                Mode::Scaled => None,
            };
            let scaled = match mode {
                Mode::Scaled | Mode::Both => Some(scaled_compute(&t, kernel.as_ref(), None)?),
                Mode::Direct => None,
            };
            if let Some(r) = &direct {
                print_report("direct", r);
            }
            if let Some(r) = &scaled {
                print_report("scaled", r);
            }
            if let (Some(d), Some(s)) = (&direct, &scaled) {
                let dist = d.value.sub(&s.value).frobenius_norm()
                    / d.value.frobenius_norm().max(f64::MIN_POSITIVE);
                println!("relative distance direct/scaled {dist:.3e}");
            }
            if let Some(path) = output {
                let value = &scaled
                    .as_ref()
                    .or(direct.as_ref())
                    .expect("one mode ran")
                    .value;
                write_matrix(value, &path)?;
            }
        }
        Command::Cond { function, input } => {
            let t = load(&input)?;
            if t.order() > KRONECKER_CAP {
                return Err(Error::CapExceeded {
                    n: t.order(),
                    cap: KRONECKER_CAP,
                });
            }
            let kernel = FunctionKind::from(function).kernel(None);
            let r = condition_numbers(kernel.as_ref(), &t)?;
            println!("cond_abs={:.6e}", r.cond_abs);
            println!("cond_rel={:.6e}", r.cond_rel);
            println!("||L||={:.6e}", r.operator_norm_l);
            println!("||f(T)||_F={:.6e}", r.function_norm);
            println!("||T||_F={:.6e}", r.input_norm);
        }
        Command::Verify {
            function,
            input,
            alpha,
        } => {
            let t = load(&input)?;
            let kernel = FunctionKind::from(function).kernel(None);
            let report = verify_scaling_structure(kernel.as_ref(), &t, alpha)?;
            print!("{report}");
            if !report.is_clean() {
                return Ok(Outcome::Violations);
            }
        }
        Command::Bench {
            experiment,
            sizes,
            seed,
            input,
            out,
        } => {
            let kind = ExperimentKind::from(experiment);
            let sizes = sizes.map(|s| s.parse::<SizeRange>()).transpose()?;
            let mut suite = build_suite(kind, &SuiteConfig { sizes, seed })?;
            for path in &input {
                let stem = path
                    .file_stem()
                    .map_or_else(|| "file".into(), |s| s.to_string_lossy());
                suite.push(ExperimentInput::new(format!("file:{stem}"), load(path)?));
            }
            let records = run_experiment(kind.function(), None, &suite, Some(&out))?;
            print!("{}", summary_table(&records));
            let failed = records.iter().filter(|r| r.failed()).count();
            println!(
                "{} rows, {} failed, written to {}",
                records.len(),
                failed,
                out.display()
            );
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
