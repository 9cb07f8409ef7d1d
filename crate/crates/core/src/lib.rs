//! Functions of upper triangular matrices with a diagonal scaling
//! preconditioner.
//!
//! The similarity `T~ = S T S^{-1}` with `S = diag(1, a, ..., a^{n-1})` (or
//! its block form) shrinks the strictly upper part of `T` without touching
//! the spectrum. Kernels that count squarings or square roots from a norm
//! of `T` then do less work on `T~`, and `f(T) = S^{-1} f(T~) S` is
//! recovered in O(n^2).
//!
//! Modules:
//! - [`triangular`]: matrix values, norms, band split.
//! - [`scaling`]: scaling vectors, the similarity, parameter choice, and
//!   [`scaled_compute`].
//! - [`kernels`]: exp, log, sqrt, acos and the Parlett reference.
//! - [`frechet`]: Fréchet derivatives, Kronecker form, condition numbers
//!   and structural checks.
//! - [`experiments`]: matrix files, generators, experiment driver, CSV.

pub mod error;
pub mod experiments;
pub mod frechet;
pub mod kernels;
pub mod quadrature;
pub mod scaling;
pub mod triangular;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use kernels::{
    acosm, expm_sas, funm_parlett, logm_iss, sqrtm_tri, Acos, Exp, FunctionKind, FunmReport,
    KernelOptions, Log, MatrixFunction, Sqrt,
};
pub use scaling::{
    apply_similarity, block_scaling, choose_parameters, choose_parameters_with, scalar_scaling,
    scaled_compute, AlphaMode, Direction, ScalingPlan, ScalingVector,
};
pub use triangular::{BandDecomposition, Matrix, NormKind, UpperTriangular};
