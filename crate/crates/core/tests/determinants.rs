use conedet_core::det::{
    det_decomposable, det_full, det_general_value, det_neumann, det_oned, det_ratio, det_rowcol, detect_rowcol,
    oned_problem,
};
use conedet_core::scalar::rel_diff;
use conedet_core::{
    compute_det, make_friedrichs, make_scale_invariant, random_lagrangian, BaseSpectrum, CMatrix, Complex64,
    DetOptions, Error, ErrorClass, Lagrangian, Method, RegularPart,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_invertible(rng: &mut ChaCha8Rng, q: usize) -> CMatrix {
    loop {
        let m = CMatrix::from_fn(q, q, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        if m.det().norm() > 0.1 {
            return m;
        }
    }
}

#[test]
fn row_transformations_leave_the_determinant_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (q0, q1) in [(1, 0), (0, 2), (1, 2), (2, 2)] {
        let nus: Vec<f64> = (0..q1).map(|_| rng.gen_range(0.1..0.9)).collect();
        let s = BaseSpectrum::new(1.7, q0, nus).unwrap();
        let l = random_lagrangian(&mut rng, q0, q1, false).unwrap();
        let u = random_invertible(&mut rng, q0 + q1);
        let lu = l.row_transformed(&u).unwrap();
        let (a, b) = (det_general_value(&l, &s).unwrap(), det_general_value(&lu, &s).unwrap());
        assert!(rel_diff(a, b) <= 1e-12, "{a} vs {b}");
    }
}

#[test]
fn real_pairs_give_real_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let q0 = rng.gen_range(0..3);
        let q1 = rng.gen_range(usize::from(q0 == 0)..3);
        let nus: Vec<f64> = (0..q1).map(|_| rng.gen_range(0.1..0.9)).collect();
        let s = BaseSpectrum::new(rng.gen_range(0.5..2.0), q0, nus).unwrap();
        let l = random_lagrangian(&mut rng, q0, q1, true).unwrap();
        for m in [Method::General, Method::Ratio, Method::Rowcol] {
            let v = compute_det(&l, &s, m, &DetOptions::default()).unwrap().value;
            assert!(v.im.abs() <= 1e-12 * v.norm(), "{m}: {v}");
        }
    }
}

#[test]
fn rowcol_on_random_scale_invariant_masks() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..30 {
        let q = rng.gen_range(1..=4);
        let q0 = rng.gen_range(0..=q);
        let mask: Vec<bool> = (0..q).map(|i| i < q0 || rng.gen_bool(0.5)).collect();
        let nus: Vec<f64> = (0..q - q0).map(|_| rng.gen_range(0.05..0.95)).collect();
        let s = BaseSpectrum::new(rng.gen_range(0.3..3.0), q0, nus).unwrap();
        let l = make_scale_invariant(&mask, q0).unwrap();
        let (perm, r) = detect_rowcol(&l).unwrap();
        let rc = det_rowcol(&l, &s, &perm, r).unwrap();
        let full = det_general_value(&l, &s).unwrap();
        assert!(rel_diff(rc * det_neumann(&s).unwrap(), full) <= 1e-11, "{mask:?}");
        assert!(rel_diff(rc, det_ratio(&l, &s).unwrap()) <= 1e-12);
    }
}

#[test]
fn rowcol_refuses_when_rank_condition_fails() {
    // A has one zero row/column but rank 0 overall.
    let a = CMatrix::zeros(2, 2);
    let b = CMatrix::identity(2);
    let l = Lagrangian::new(a, b, 0).unwrap();
    let s = BaseSpectrum::new(1.0, 0, vec![0.3, 0.6]).unwrap();
    let err = det_rowcol(&l, &s, &[0, 1], 1).unwrap_err();
    assert!(matches!(err, Error::RowColumnCondition(_)));
    assert_eq!(err.class(), ErrorClass::Extension);
}

#[test]
fn decomposable_on_random_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for (q0, q1) in [(1, 1), (2, 1), (1, 3), (3, 0), (0, 3)] {
        let nus: Vec<f64> = (0..q1).map(|_| rng.gen_range(0.1..0.9)).collect();
        let s = BaseSpectrum::new(rng.gen_range(0.5..2.0), q0, nus).unwrap();
        let full = if q0 == 0 {
            random_lagrangian(&mut rng, 0, q1, false).unwrap()
        } else if q1 == 0 {
            random_lagrangian(&mut rng, q0, 0, false).unwrap()
        } else {
            let l0 = random_lagrangian(&mut rng, q0, 0, false).unwrap();
            let l1 = random_lagrangian(&mut rng, 0, q1, false).unwrap();
            Lagrangian::block_diagonal(&l0, &l1).unwrap()
        };
        let (l0, l1) = full.split_decomposable().unwrap();
        let d = det_decomposable(&l0, &l1, &s).unwrap();
        assert!(rel_diff(d, det_general_value(&full, &s).unwrap()) <= 1e-11, "q0={q0} q1={q1}");
    }
    let f = make_friedrichs(1, 1).unwrap();
    let (l0, l1) = f.split_decomposable().unwrap();
    assert!(det_decomposable(&l1, &l0, &BaseSpectrum::new(1.0, 1, vec![0.5]).unwrap()).is_err());
}

#[test]
fn full_determinant_examples() {
    let (l, s) = oned_problem(-0.25, 0.0, 1.0, 3.0).unwrap();
    let reg = RegularPart { det_tilde: Complex64::new(2.0, 0.0), c_residue: 0.0 };
    let want = 2.0 * (2.0 * std::f64::consts::PI * 3.0).sqrt();
    assert!((det_full(&l, &s, &reg).unwrap() - want).norm() <= 1e-13 * want);
}

#[test]
fn method_errors_map_to_classes() {
    let (l, s) = oned_problem(-0.25, 1.0, 0.0, 1.0).unwrap();
    for m in Method::ALL {
        let err = compute_det(&l, &s, m, &DetOptions::default()).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Kernel, "{m}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let l = random_lagrangian(&mut rng, 1, 1, false).unwrap();
    let s = BaseSpectrum::new(1.0, 1, vec![0.4]).unwrap();
    for m in [Method::Neumann, Method::Decomposable, Method::Oned] {
        let err = compute_det(&l, &s, m, &DetOptions::default()).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Extension, "{m}");
    }
}

#[test]
fn oned_accepts_unnormalized_and_phased_input() {
    let (l, s) = oned_problem(0.3, 0.6, -0.8, 1.4).unwrap();
    let base = det_general_value(&l, &s).unwrap();
    let phase = Complex64::from_polar(2.5, 0.7);
    let lp = Lagrangian::new(l.a().scale(phase), l.b().scale(phase), 0).unwrap();
    let r = compute_det(&lp, &s, Method::Oned, &DetOptions::default()).unwrap();
    assert!(rel_diff(r.value, base) <= 1e-12);
    assert!(rel_diff(det_general_value(&lp, &s).unwrap(), base) <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oned_agrees_with_general(
        lambda in prop_oneof![Just(-0.25), -0.24f64..0.74],
        theta in 0.0f64..std::f64::consts::PI,
        r in 0.2f64..4.0,
    ) {
        let (alpha, beta) = (theta.cos(), theta.sin());
        let (l, s) = oned_problem(lambda, alpha, beta, r).unwrap();
        match (det_general_value(&l, &s), det_oned(lambda, alpha, beta, r)) {
            (Ok(g), Ok(o)) => prop_assert!(rel_diff(g, Complex64::new(o, 0.0)) <= 1e-11),
            (Err(a), Err(b)) => prop_assert_eq!(a.class(), b.class()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn ratio_identity_holds(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = rng.gen_range(1..=4);
        let q0 = rng.gen_range(0..=q);
        let nus: Vec<f64> = (0..q - q0).map(|_| rng.gen_range(0.05..0.95)).collect();
        let s = BaseSpectrum::new(rng.gen_range(0.3..3.0), q0, nus).unwrap();
        let real = rng.gen_bool(0.5);
        let l = random_lagrangian(&mut rng, q0, q - q0, real).unwrap();
        let g = det_general_value(&l, &s).unwrap();
        let rn = det_ratio(&l, &s).unwrap() * det_neumann(&s).unwrap();
        prop_assert!(rel_diff(g, rn) <= 1e-12);
    }
}
