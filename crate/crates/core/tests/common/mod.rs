#![allow(dead_code)]

use proptest::prelude::*;
use triscale::{Complex64, Matrix, UpperTriangular};

pub fn rel(a: &UpperTriangular, b: &UpperTriangular) -> f64 {
    a.sub(b).frobenius_norm() / b.frobenius_norm()
}

pub fn rel_m(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).frobenius_norm() / b.frobenius_norm()
}

fn complex(mag: f64) -> impl Strategy<Value = Complex64> {
    (-mag..mag, -mag..mag).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Upper triangular of order `1..=max_n` with entries in the box `|re|, |im| < mag`.
pub fn upper(max_n: usize, mag: f64) -> impl Strategy<Value = UpperTriangular> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(complex(mag), n * n).prop_map(move |v| {
            UpperTriangular::new(Matrix::from_fn(n, |i, j| {
                if i <= j {
                    v[i * n + j]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
            .unwrap()
        })
    })
}

/// Spectrum with real parts in `[0.5, 2]` and small imaginary parts,
/// off-diagonal entries below `off`.
pub fn log_safe(min_n: usize, max_n: usize, off: f64) -> impl Strategy<Value = UpperTriangular> {
    (min_n..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((0.5f64..2.0, -0.5f64..0.5), n),
            prop::collection::vec(complex(off), n * n),
        )
            .prop_map(move |(d, v)| {
                UpperTriangular::new(Matrix::from_fn(n, |i, j| {
                    if i == j {
                        Complex64::new(d[i].0, d[i].1)
                    } else if i < j {
                        v[i * n + j]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }))
                .unwrap()
            })
    })
}
