mod common;

use common::upper;
use proptest::prelude::*;
use triscale::{
    apply_similarity, choose_parameters, choose_parameters_with, scalar_scaling, AlphaMode,
    Complex64, Direction, NormKind, UpperTriangular,
};

fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

proptest! {
    #[test]
    fn bands_reconstruct_exactly(t in upper(12, 1e3)) {
        let bands = t.split_bands();
        prop_assert_eq!(bands.reconstruct(), t.clone());
        let total: f64 = t.band_norms_sq().iter().sum();
        let f2 = t.frobenius_norm().powi(2);
        prop_assert!((total - f2).abs() <= 1e-15 * f2.max(f64::MIN_POSITIVE) * 4.0);
    }

    #[test]
    fn zeroing_an_entry_never_increases_norms(t in upper(8, 10.0), pick in 0usize..1000) {
        let n = t.order();
        let idx = pick % (n * (n + 1) / 2);
        let (mut i, mut rem) = (0, idx);
        while rem >= n - i {
            rem -= n - i;
            i += 1;
        }
        let j = i + rem;
        let mut m = t.as_matrix().clone();
        m[(i, j)] = Complex64::new(0.0, 0.0);
        let z = UpperTriangular::new(m).unwrap();
        prop_assert!(z.frobenius_norm() <= t.frobenius_norm());
        prop_assert!(z.operator_norm(NormKind::One) <= t.operator_norm(NormKind::One));
        prop_assert!(z.operator_norm(NormKind::Infinity) <= t.operator_norm(NormKind::Infinity));
    }

    #[test]
    fn norm_gap_identity(t in upper(12, 1e3), a in prop::sample::select(vec![2.0, 10.0, 1e3])) {
        let n = t.order();
        let s = scalar_scaling(n, a).unwrap();
        let ts = apply_similarity(&t, &s, Direction::Forward).unwrap();
        prop_assert!(ts.frobenius_norm() <= t.frobenius_norm());
        let bands = t.band_norms_sq();
        let gap: f64 = bands.iter().enumerate().skip(1)
            .map(|(k, b)| (1.0 - a.powi(-2 * k as i32)) * b)
            .sum();
        let lhs = t.frobenius_norm().powi(2);
        let rhs = ts.frobenius_norm().powi(2) + gap;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn forward_inverse_round_trip(t in upper(12, 1e3), a in 1.0f64..1e3) {
        let s = scalar_scaling(t.order(), a).unwrap();
        let fwd = apply_similarity(&t, &s, Direction::Forward).unwrap();
        let back = apply_similarity(&fwd, &s, Direction::Inverse).unwrap();
        for i in 0..t.order() {
            for j in i..t.order() {
                prop_assert!(ulps(back.get(i, j).re, t.get(i, j).re) <= 2);
                prop_assert!(ulps(back.get(i, j).im, t.get(i, j).im) <= 2);
            }
        }
    }

    #[test]
    fn power_of_two_round_trip_is_exact(t in upper(10, 1e3), k in 1i32..6) {
        let s = scalar_scaling(t.order(), 2f64.powi(k)).unwrap();
        let fwd = apply_similarity(&t, &s, Direction::Forward).unwrap();
        prop_assert_eq!(apply_similarity(&fwd, &s, Direction::Inverse).unwrap(), t);
    }

    #[test]
    fn error_model_is_entrywise(e in upper(10, 1.0), a in 2.0f64..50.0) {
        let s = scalar_scaling(e.order(), a).unwrap();
        let rec = apply_similarity(&e, &s, Direction::Inverse).unwrap();
        for i in 0..e.order() {
            for j in i..e.order() {
                let r = s.ratio(i, j);
                prop_assert_eq!(rec.get(i, j), e.get(i, j) * r);
            }
        }
    }

    #[test]
    fn plans_respect_the_magnification_cap(t in upper(12, 1e6)) {
        for mode in [AlphaMode::AsIs, AlphaMode::PowerOfTwo] {
            let p = choose_parameters_with(&t, mode);
            prop_assert!(p.m >= 1 && p.m <= t.order());
            prop_assert_eq!(p.block_sizes.iter().sum::<usize>(), t.order());
            if p.m > 1 {
                prop_assert!(p.alpha >= 8.0);
                prop_assert!(p.alpha.powi(p.m as i32) <= 1e20);
            }
        }
        let p = choose_parameters(&t);
        if t.max_abs() < 10.0 {
            prop_assert!(p.is_trivial());
        }
    }
}
