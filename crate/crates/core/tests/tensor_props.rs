mod common;

use common::{random_map, random_state};
use proptest::prelude::*;
use qgame_core::tensor::LinearMap;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tensor_is_associative(seed: u64, a in dims(), b in dims(), c in dims()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_map(&mut rng, a.clone(), b.clone());
        let g = random_map(&mut rng, b.clone(), c.clone());
        let h = random_map(&mut rng, c, a);
        let left = f.tensor(&g).unwrap().tensor(&h).unwrap();
        let right = f.tensor(&g.tensor(&h).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn dagger_reverses_composition(seed: u64, a in dims(), b in dims(), c in dims()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_map(&mut rng, a, b.clone());
        let g = random_map(&mut rng, b, c);
        let left = f.compose(&g).unwrap().dagger();
        let right = g.dagger().compose(&f.dagger()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn interchange_law(seed: u64, a in dims(), b in dims(), c in dims(), d in dims()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_map(&mut rng, b.clone(), a.clone());
        let g = random_map(&mut rng, c.clone(), b);
        let h = random_map(&mut rng, d.clone(), c);
        let k = random_map(&mut rng, a, d);
        let left = g.tensor(&k).unwrap().compose(&f.tensor(&h).unwrap()).unwrap();
        let right = g.compose(&f).unwrap().tensor(&k.compose(&h).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn born_probabilities_sum_to_one(seed: u64, a in prop::collection::vec(1usize..=4, 1..=3)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = random_state(&mut rng, a);
        let dist = s.born_probabilities().unwrap();
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
        prop_assert!(dist.probs().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn unitaries_preserve_norm(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = random_state(&mut rng, vec![2, 2]);
        let u = LinearMap::hadamard().tensor(&LinearMap::phase_gate(1.3)).unwrap();
        prop_assert!(u.is_unitary(1e-12));
        prop_assert!(u.apply(&s).unwrap().is_normalized(1e-12));
    }
}

#[test]
fn oversized_tensor_is_rejected() {
    let big = LinearMap::identity(&[65]);
    let err = big.tensor(&big).unwrap_err();
    assert!(err.is_limit());
}
