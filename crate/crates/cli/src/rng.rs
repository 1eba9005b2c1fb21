//! Seed derivation and subset sampling.
//!
//! Every randomized run is keyed by the global `--seed`.  Trial `i` draws
//! from a ChaCha8 generator seeded with the `i`-th output of a splitmix64
//! stream over the master seed, so trials are independent of each other and
//! of how many ran before them, and the whole schedule is reproducible from
//! one number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The seed for trial `index` under `master`: the `index`-th output of the
/// splitmix64 stream starting at `master`.  The stream's state moves by a
/// fixed increment per draw, so any position is reachable in O(1).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut state = master.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    splitmix64(&mut state)
}

pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// `k` distinct values from `0..n`, sorted, via partial Fisher-Yates.
pub fn sample_indices(n: u64, k: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    assert!(k <= n, "cannot sample {k} of {n}");
    let mut pool: Vec<u64> = (0..n).collect();
    for i in 0..k as usize {
        let j = rng.gen_range(i..n as usize);
        pool.swap(i, j);
    }
    pool.truncate(k as usize);
    pool.sort_unstable();
    pool
}
