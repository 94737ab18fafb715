use d2lab::clifford::Parity;
use d2lab::diffop::{MatrixDiffOp, PartialIndex, Space};
use d2lab::field::PlaneWaveSpec;
use d2lab::integrate::{bm_boundary, Ball};
use d2lab::kernels::Kernels;
use d2lab::matrix::ExactMatrix;
use d2lab::quadrature::{SphereRule, SphereRuleMode};
use d2lab::scalar::GaussianRational;
use d2lab::symbols::{symbol, Covector};
use num_complex::Complex64;
use proptest::prelude::*;

const N: usize = 3;

fn space() -> Space {
    Space::new(1, Parity::plus(N))
}

fn matrix() -> impl Strategy<Value = ExactMatrix> {
    let d = space().dim(N);
    prop::collection::vec((-3i64..=3, -3i64..=3), d * d).prop_map(move |e| {
        let entries = e.into_iter().map(|(re, im)| GaussianRational::from_ints(re, im)).collect();
        ExactMatrix::from_row_major(d, d, entries).unwrap()
    })
}

fn operator() -> impl Strategy<Value = MatrixDiffOp> {
    prop::collection::vec((prop::collection::vec(0u8..=2, 2 * N), matrix()), 0..4).prop_map(|terms| {
        MatrixDiffOp::from_terms(N, space(), space(), terms.into_iter().map(|(e, m)| (PartialIndex::from_exponents(e), m))).unwrap()
    })
}

fn covector() -> impl Strategy<Value = Covector> {
    prop::collection::vec(-1.0f64..1.0, 2 * N)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| Covector::new(N, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_an_involution(p in operator()) {
        prop_assert_eq!(p.formal_adjoint().formal_adjoint(), p);
    }

    #[test]
    fn adjoint_reverses_products(p in operator(), q in operator()) {
        let lhs = p.compose(&q).unwrap().formal_adjoint();
        let rhs = q.formal_adjoint().compose(&p.formal_adjoint()).unwrap();
        prop_assert!(lhs.try_sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn adjoint_is_additive(p in operator(), q in operator()) {
        let lhs = p.try_add(&q).unwrap().formal_adjoint();
        let rhs = p.formal_adjoint().try_add(&q.formal_adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symbol_is_multiplicative(p in operator(), q in operator(), nu in covector()) {
        let pq = symbol(&p.compose(&q).unwrap(), &nu);
        let prod = &symbol(&p, &nu) * &symbol(&q, &nu);
        let scale = 1.0 + pq.max_abs();
        prop_assert!((&pq - &prod).max_abs() <= 1e-12 * scale);
    }

    #[test]
    fn bm_boundary_is_linear(a_re in -2.0f64..2.0, a_im in -2.0f64..2.0, x0 in -0.3f64..0.3, x3 in -0.3f64..0.3) {
        let k = Kernels::new(N).unwrap();
        let ball = Ball::new(vec![0.0; 6], 1.0).unwrap();
        let rule = SphereRule::new(6, 4, SphereRuleMode::ProductGauss, 0).unwrap();
        let zeta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        let pw = PlaneWaveSpec::with_null_spinor(N, zeta, Complex64::new(0.3, 0.0)).unwrap();
        let f2 = |y: &[f64]| vec![Complex64::new(y[1], 0.0), Complex64::new(0.0, y[4] * y[4])];
        let a = Complex64::new(a_re, a_im);
        let x = vec![x0, 0.0, 0.0, x3, 0.0, 0.0];
        let u1 = bm_boundary(&k, |y: &[f64]| pw.value(y), &x, &ball, &rule).unwrap();
        let u2 = bm_boundary(&k, f2, &x, &ball, &rule).unwrap();
        let combo = bm_boundary(&k, |y: &[f64]| pw.value(y).into_iter().zip(f2(y)).map(|(p, q)| a * p + q).collect(), &x, &ball, &rule).unwrap();
        for ((c, p), q) in combo.iter().zip(&u1).zip(&u2) {
            prop_assert!((c - (a * p + q)).norm() <= 1e-12 * (1.0 + p.norm() + q.norm()));
        }
    }
}
