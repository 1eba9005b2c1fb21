//! The transform engine must agree with schoolbook convolution bit for bit,
//! across group shapes and count magnitudes, and must refuse (rather than
//! silently round) whenever its reconstruction range could overflow.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumset_core::{convolve_with, CountVector, Engine, Error, GroupSpec};

fn random_counts(g: &GroupSpec, rng: &mut ChaCha8Rng, max: u128) -> CountVector {
    let n = g.order() as usize;
    let v: Vec<u128> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    CountVector::from_u128(g, v).unwrap()
}

#[test]
fn ntt_matches_naive_across_shapes() {
    let shapes: [&[u64]; 7] = [
        &[2],
        &[17],
        &[128],
        &[257],
        &[3, 5],
        &[4, 4, 4],
        &[2, 3, 5, 7],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for factors in shapes {
        let g = GroupSpec::new(factors).unwrap();
        for trial in 0..8 {
            let a = random_counts(&g, &mut rng, 1_000_000);
            let b = random_counts(&g, &mut rng, 1_000_000);
            let naive = convolve_with(&a, &b, Engine::Naive).unwrap();
            let fast = convolve_with(&a, &b, Engine::Ntt).unwrap();
            assert_eq!(naive, fast, "factors={factors:?} trial={trial}");
            let auto = convolve_with(&a, &b, Engine::Auto).unwrap();
            assert_eq!(naive, auto, "factors={factors:?} trial={trial}");
        }
    }
}

#[test]
fn convolution_mass_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = GroupSpec::new(&[6, 9]).unwrap();
    for _ in 0..10 {
        let a = random_counts(&g, &mut rng, 500);
        let b = random_counts(&g, &mut rng, 500);
        let c = convolve_with(&a, &b, Engine::Auto).unwrap();
        assert_eq!(c.mass(), a.mass() * b.mass());
    }
}

#[test]
fn convolution_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = GroupSpec::new(&[35]).unwrap();
    for _ in 0..10 {
        let a = random_counts(&g, &mut rng, 10_000);
        let b = random_counts(&g, &mut rng, 10_000);
        let ab = convolve_with(&a, &b, Engine::Auto).unwrap();
        let ba = convolve_with(&b, &a, Engine::Auto).unwrap();
        assert_eq!(ab, ba);
    }
}

#[test]
fn huge_entries_promote_to_big_integers() {
    let g = GroupSpec::new(&[2]).unwrap();
    let big = 1u128 << 70;
    let a = CountVector::from_u128(&g, vec![big, 3]).unwrap();
    let b = CountVector::from_u128(&g, vec![5, big]).unwrap();

    // the product 2^140 + 15 does not fit u128, so the result must be big
    let c = convolve_with(&a, &b, Engine::Auto).unwrap();
    let expect0 = BigUint::from(8u8) * (BigUint::from(1u8) << 70);
    let expect1 = (BigUint::from(1u8) << 140) + BigUint::from(15u8);
    assert_eq!(c.get(0), expect0);
    assert_eq!(c.get(1), expect1);

    // and the transform engine must refuse instead of wrapping
    assert!(matches!(
        convolve_with(&a, &b, Engine::Ntt),
        Err(Error::FastPathUnavailable)
    ));
}

#[test]
fn mismatched_groups_are_rejected() {
    let g5 = GroupSpec::new(&[5]).unwrap();
    let g7 = GroupSpec::new(&[7]).unwrap();
    let a = CountVector::from_u128(&g5, vec![1; 5]).unwrap();
    let b = CountVector::from_u128(&g7, vec![1; 7]).unwrap();
    assert!(matches!(
        convolve_with(&a, &b, Engine::Auto),
        Err(Error::GroupMismatch)
    ));
}

#[test]
fn rotation_by_delta_convolution() {
    // convolving with a one-hot vector rotates indices by the hot element
    let g = GroupSpec::new(&[3, 4]).unwrap();
    let n = g.order() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random_counts(&g, &mut rng, 50);
    for hot in [0usize, 1, 5, 11] {
        let mut delta = vec![0u128; n];
        delta[hot] = 1;
        let d = CountVector::from_u128(&g, delta).unwrap();
        for engine in [Engine::Naive, Engine::Ntt] {
            let c = convolve_with(&a, &d, engine).unwrap();
            for i in 0..n {
                assert_eq!(c.get(g.add_indices(i, hot)), a.get(i), "hot={hot} i={i}");
            }
        }
    }
}
