use proptest::prelude::*;

use qbcap::linalg::{jacobi_eig, kron, partial_trace_matrix, ComplexMatrix, C64};
use qbcap::random::{self, trial_rng};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::sample::select(vec![
        vec![2, 2],
        vec![2, 3],
        vec![3, 2],
        vec![2, 2, 2],
        vec![2, 4],
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eig_reconstructs_random_hermitians(seed in any::<u64>(), n in 2usize..=8) {
        let m = random::hermitian_matrix(n, &mut trial_rng(seed, 0));
        let eig = jacobi_eig(&m).unwrap();
        let v = &eig.vectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-9);
        let rebuilt = v.sandwich(&ComplexMatrix::from_real_diagonal(eig.spectrum.values()));
        prop_assert!(rebuilt.max_abs_diff(&m) <= 1e-9);
        prop_assert!(eig.spectrum.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(jacobi_eig(&m).unwrap().spectrum, eig.spectrum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(
        seed in any::<u64>(),
        dims in dims_strategy(),
        alpha in -2.0f64..2.0,
    ) {
        let mut rng = trial_rng(seed, 1);
        let n = dims.iter().product();
        let a = random::hermitian_matrix(n, &mut rng);
        let b = random::hermitian_matrix(n, &mut rng);
        let combo = &a.scale(alpha) + &b;
        for keep in [vec![0], vec![1], vec![0, 1]] {
            let (ra, _) = partial_trace_matrix(&a, &dims, &keep).unwrap();
            let (rb, _) = partial_trace_matrix(&b, &dims, &keep).unwrap();
            let (rc, _) = partial_trace_matrix(&combo, &dims, &keep).unwrap();
            prop_assert!(rc.max_abs_diff(&(&ra.scale(alpha) + &rb)) <= 1e-12);
            prop_assert!((ra.trace() - a.trace()).norm() <= 1e-12);
        }
    }

    #[test]
    fn kron_trace_is_multiplicative(seed in any::<u64>(), p in 1usize..=4, q in 1usize..=4) {
        let mut rng = trial_rng(seed, 2);
        let a = random::hermitian_matrix(p, &mut rng);
        let b = random::hermitian_matrix(q, &mut rng);
        let k = kron(&a, &b);
        prop_assert_eq!(k.dim(), p * q);
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() <= 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = trial_rng(seed, 3);
        let m = random::hermitian_matrix(n, &mut rng);
        let u = random::unitary(n, &mut rng);
        let rotated = u.sandwich(&m);
        let rotated = ComplexMatrix::from_fn(n, |i, j| (rotated[(i, j)] + rotated[(j, i)].conj()) * 0.5);
        let s1 = jacobi_eig(&m).unwrap().spectrum;
        let s2 = jacobi_eig(&rotated).unwrap().spectrum;
        for (x, y) in s1.values().iter().zip(s2.values()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn kron_of_products_traces_out(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 4);
        let a = random::density(&[2], &mut rng);
        let b = random::density(&[3], &mut rng);
        let joint = kron(a.matrix(), b.matrix());
        let (left, _) = partial_trace_matrix(&joint, &[2, 3], &[0]).unwrap();
        let (right, _) = partial_trace_matrix(&joint, &[2, 3], &[1]).unwrap();
        prop_assert!(left.max_abs_diff(a.matrix()) <= 1e-12);
        prop_assert!(right.max_abs_diff(b.matrix()) <= 1e-12);
        prop_assert!((joint.trace() - C64::new(1.0, 0.0)).norm() <= 1e-12);
    }
}
