use proptest::prelude::*;
use rand::Rng;

use qbcap::battery::{capacity, capacity_from_spectra, majorizes};
use qbcap::linalg::{DensityMatrix, Spectrum};
use qbcap::model::{dephase, white_noise};
use qbcap::random::{self, trial_rng};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::sample::select(vec![vec![2], vec![2, 2], vec![2, 2, 2], vec![3]])
}

/// A doubly stochastic image of `x`: a random mixture of permutations.
fn majorized_by(x: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = trial_rng(seed, 99);
    let weights = random::simplex(4, &mut rng);
    let n = x.len();
    let mut out = vec![0.0; n];
    for w in weights {
        let shift = rng.random_range(0..n);
        for i in 0..n {
            out[i] += w * x[(i + shift) % n];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn capacity_is_unitarily_invariant(seed in any::<u64>(), dims in dims_strategy()) {
        let mut rng = trial_rng(seed, 0);
        let rho = random::density(&dims, &mut rng);
        let h = random::hamiltonian(&dims, &mut rng);
        let u = random::unitary(rho.dim(), &mut rng);
        let m = u.sandwich(rho.matrix());
        let n = rho.dim();
        let m = qbcap::ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        let rotated = DensityMatrix::new(m, dims.clone()).unwrap();
        let c1 = capacity(&rho, &h).unwrap().capacity;
        let c2 = capacity(&rotated, &h).unwrap().capacity;
        prop_assert!((c1 - c2).abs() <= 1e-9);
        prop_assert!(c1 >= -1e-12);
    }

    #[test]
    fn capacity_is_schur_convex(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = trial_rng(seed, 1);
        let x = random::simplex(n, &mut rng);
        let y = majorized_by(&x, seed);
        let (sx, sy) = (Spectrum::from_unsorted(x), Spectrum::from_unsorted(y));
        prop_assert!(majorizes(&sx, &sy).unwrap());
        let energy = random::hamiltonian(&[n], &mut rng).spectrum().unwrap();
        let cx = capacity_from_spectra(&sx, &energy).unwrap();
        let cy = capacity_from_spectra(&sy, &energy).unwrap();
        prop_assert!(cx >= cy - 1e-12);
    }

    #[test]
    fn majorization_is_a_preorder(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = trial_rng(seed, 2);
        let x = random::simplex(n, &mut rng);
        let y = majorized_by(&x, seed);
        let z = majorized_by(&y, seed.wrapping_add(1));
        let [sx, sy, sz] = [x, y, z].map(Spectrum::from_unsorted);
        prop_assert!(majorizes(&sx, &sx).unwrap());
        prop_assert!(majorizes(&sx, &sz).unwrap());
        if majorizes(&sy, &sx).unwrap() {
            for (a, b) in sx.values().iter().zip(sy.values()) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn dephased_spectrum_is_majorized(seed in any::<u64>(), gamma in 0.0f64..=1.0) {
        let mut rng = trial_rng(seed, 3);
        let rho = random::density(&[2, 2, 2], &mut rng);
        let deph = dephase(&rho, gamma).unwrap();
        prop_assert!(majorizes(&rho.spectrum().unwrap(), &deph.spectrum().unwrap()).unwrap());
        for i in 0..rho.dim() {
            prop_assert_eq!(deph.matrix()[(i, i)], rho.matrix()[(i, i)]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn white_noise_scales_capacity(seed in any::<u64>(), dims in dims_strategy(), f in 0.0f64..=1.0) {
        let mut rng = trial_rng(seed, 4);
        let rho = random::density(&dims, &mut rng);
        let h = random::hamiltonian(&dims, &mut rng);
        let c0 = capacity(&rho, &h).unwrap().capacity;
        let cf = capacity(&white_noise(&rho, f).unwrap(), &h).unwrap().capacity;
        prop_assert!((cf - (1.0 - f) * c0).abs() <= 1e-9);
        prop_assert!(cf <= c0 + 1e-9);
    }
}
