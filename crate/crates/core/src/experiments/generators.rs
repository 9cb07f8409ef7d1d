use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::triangular::{Matrix, UpperTriangular};

/// Largest `|arg|` of a generated diagonal entry.
pub const MAX_DIAGONAL_ARG: f64 = 0.75 * PI;

/// The fixed matrices `eq3`, `eq4` and `exp1_t1`.
pub fn gen_paper_matrix(id: &str) -> Result<UpperTriangular> {
    match id {
        "eq3" => UpperTriangular::from_real_rows(&[&[1.0, 1e6], &[0.0, -1.0]]),
        "eq4" => UpperTriangular::from_real_rows(&[
            &[3.2346e-1, 3.0000e4, 3.0000e4, 3.0000e4],
            &[0.0, 3.0089e-1, 3.0000e4, 3.0000e4],
            &[0.0, 0.0, 3.2210e-1, 3.0000e4],
            &[0.0, 0.0, 0.0, 3.0744e-1],
        ]),
        "exp1_t1" => {
            let c = 0.1f64.exp();
            UpperTriangular::from_real_rows(&[&[c, c * 1e6], &[0.0, c]])
        }
        other => Err(Error::UnknownMatrix(other.to_string())),
    }
}

pub const PAPER_MATRIX_IDS: [&str; 3] = ["eq3", "eq4", "exp1_t1"];

/// Upper triangular Toeplitz matrix with `t_ij = base^{j-i+1}` for `i <= j`.
pub fn gen_toeplitz_geometric(n: usize, base: f64) -> Result<UpperTriangular> {
    let powers: Vec<f64> = (0..n).map(|k| base.powi(k as i32 + 1)).collect();
    UpperTriangular::new(Matrix::from_fn(n, |i, j| {
        if i <= j {
            Complex64::new(powers[j - i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

fn disk_point(rng: &mut ChaCha8Rng, radius: f64, max_arg: f64) -> Complex64 {
    let u: f64 = rng.sample(Open01);
    let v: f64 = rng.gen();
    Complex64::from_polar(radius * u.sqrt(), max_arg * (2.0 * v - 1.0))
}

/// Random upper triangular matrix with small diagonal and large
/// off-diagonal entries. Diagonal entries are uniform in the sector
/// `|z| < diag_magnitude, |arg z| <= 3pi/4`; off-diagonal entries are
/// uniform in the disk of radius `offdiag_magnitude`. Draws are made row
/// by row from a ChaCha8 stream seeded with `seed`.
pub fn gen_random_smalldiag(
    n: usize,
    seed: u64,
    diag_magnitude: f64,
    offdiag_magnitude: f64,
) -> Result<UpperTriangular> {
    if diag_magnitude.is_nan()
        || diag_magnitude <= 0.0
        || offdiag_magnitude.is_nan()
        || offdiag_magnitude < 0.0
    {
        return Err(Error::InvalidOption(format!(
            "magnitudes must be positive, got {diag_magnitude} and {offdiag_magnitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = disk_point(&mut rng, diag_magnitude, MAX_DIAGONAL_ARG);
        for j in i + 1..n {
            m[(i, j)] = disk_point(&mut rng, offdiag_magnitude, PI);
        }
    }
    UpperTriangular::new(m)
}
