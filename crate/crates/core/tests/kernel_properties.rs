mod common;

use common::{log_safe, rel, rel_m, upper};
use proptest::prelude::*;
use triscale::frechet::{frechet_block, kronecker_form};
use triscale::{
    apply_similarity, scalar_scaling, sqrtm_tri, Acos, Complex64, Direction, Exp, KernelOptions,
    Log, Matrix, MatrixFunction, ScalingPlan, Sqrt, UpperTriangular,
};

fn kernels() -> Vec<Box<dyn MatrixFunction>> {
    vec![
        Box::new(Exp::default()),
        Box::new(Log::default()),
        Box::new(Sqrt),
        Box::new(Acos::default()),
    ]
}

fn acos_safe(t: &UpperTriangular) -> UpperTriangular {
    // spectrum pulled into the disk of radius 0.5 around 0
    let shift = Complex64::new(1.2, 0.0);
    t.shift(-shift).scale_real(0.4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn similarity_commutes_with_every_kernel(t in log_safe(1, 6, 1.0), a in prop::sample::select(vec![2.0, 10.0])) {
        let s = scalar_scaling(t.order(), a).unwrap();
        for k in kernels() {
            let input = if k.name() == "acos" { acos_safe(&t) } else { t.clone() };
            let direct = k.evaluate(&input).unwrap().value;
            let scaled_in = apply_similarity(&input, &s, Direction::Forward).unwrap();
            let f_scaled = k.evaluate(&scaled_in).unwrap();
            let back = apply_similarity(&f_scaled.value, &s, Direction::Inverse).unwrap();
            prop_assert!(rel(&back, &direct) <= 1e-8, "{}: {}", k.name(), rel(&back, &direct));
            // the function value shrinks under the similarity
            prop_assert!(
                f_scaled.value.frobenius_norm() <= direct.frobenius_norm() * (1.0 + 1e-10),
                "{}", k.name()
            );
        }
    }

    #[test]
    fn counts_never_increase(t in log_safe(2, 8, 200.0), a in prop::sample::select(vec![2.0, 10.0, 100.0])) {
        let plan = ScalingPlan::scalar(t.order(), a).unwrap();
        let ts = apply_similarity(&t, &plan.scaling_vector, Direction::Forward).unwrap();
        for k in [&Exp::default() as &dyn MatrixFunction, &Log::default()] {
            let c = k.evaluate(&t).unwrap().count_s;
            let cs = k.evaluate(&ts).unwrap().count_s;
            prop_assert!(cs <= c, "{}: {} > {}", k.name(), cs, c);
        }
    }

    #[test]
    fn exp_log_inverse_pair(t in upper(6, 0.15)) {
        prop_assume!(t.operator_norm(triscale::NormKind::One) <= 1.0);
        let e = Exp::default().evaluate(&t).unwrap().value;
        let back = Log::default().evaluate(&e).unwrap().value;
        let scale = t.frobenius_norm().max(1e-300);
        prop_assert!(back.sub(&t).frobenius_norm() / scale <= 1e-8);
    }

    #[test]
    fn sqrt_squares_back(t in log_safe(1, 8, 1.0)) {
        let r = sqrtm_tri(&t).unwrap();
        prop_assert!(rel(&r.mul(&r), &t) <= 1e-12);
    }

    #[test]
    fn frechet_is_linear(t in log_safe(1, 4, 1.0), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, seed in 0u64..1000) {
        let n = t.order();
        let e1 = Matrix::from_fn(n, |i, j| Complex64::new(((seed + (i * n + j) as u64) % 7) as f64 - 3.0, 0.5));
        let e2 = Matrix::from_fn(n, |i, j| Complex64::new(0.25 * i as f64, ((seed % 5) + j as u64) as f64 - 2.0));
        for k in [&Exp::default() as &dyn MatrixFunction, &Log::default()] {
            let l1 = frechet_block(k, &t, &e1).unwrap();
            let l2 = frechet_block(k, &t, &e2).unwrap();
            let combo = e1.scale_real(c1).add(&e2.scale_real(c2));
            let lc = frechet_block(k, &t, &combo).unwrap();
            let want = l1.scale_real(c1).add(&l2.scale_real(c2));
            let d = lc.sub(&want).frobenius_norm();
            let scale = l1.frobenius_norm() * c1.abs() + l2.frobenius_norm() * c2.abs();
            prop_assert!(d <= 1e-9 * scale.max(1e-300), "{}: {}", k.name(), d / scale);
        }
    }

    #[test]
    fn frechet_norm_bounded_by_kronecker_norm(t in log_safe(1, 4, 1.0), seed in 0u64..1000) {
        let n = t.order();
        let e = Matrix::from_fn(n, |i, j| {
            let x = ((seed * 31 + (i * 7 + j * 3) as u64) % 11) as f64 - 5.0;
            Complex64::new(x, 0.3 * x - 1.0)
        });
        let e = e.scale_real(1.0 / e.frobenius_norm());
        for k in [&Exp::default() as &dyn MatrixFunction, &Log::default()] {
            let l = frechet_block(k, &t, &e).unwrap();
            let kf = kronecker_form(k, &t).unwrap();
            prop_assert!(l.frobenius_norm() <= kf.spectral_norm * (1.0 + 1e-6));
        }
    }
}

#[test]
fn relative_helpers() {
    let a = Matrix::identity(2);
    assert_eq!(rel_m(&a, &a), 0.0);
    let _ = KernelOptions::exp();
}
