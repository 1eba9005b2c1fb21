//! Subset construction strategies for randomized covering runs.
//!
//! Random sets are far from extremal for covering questions, so the harness
//! also draws structured sets: a plain interval of indices, and a union of
//! cosets of the largest proper subgroup cut out by the first coordinate —
//! the classic near-counterexample shape, where the whole set crowds into as
//! few cosets as its size allows.

use anyhow::{bail, Result};
use rand_chacha::ChaCha8Rng;
use sumset_core::{GroupSpec, SubsetA};

use crate::rng::sample_indices;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Strategy {
    /// Uniform random k-subset.
    Random,
    /// The first k elements in index order.
    Interval,
    /// Whole cosets of a prime-index subgroup, padded from one more coset.
    CosetUnion,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::Interval => "interval",
            Strategy::CosetUnion => "coset-union",
        }
    }

    pub const ALL: [Strategy; 3] = [Strategy::Random, Strategy::Interval, Strategy::CosetUnion];
}

pub fn draw(group: &GroupSpec, k: u64, strategy: Strategy, rng: &mut ChaCha8Rng) -> Result<SubsetA> {
    let n = group.order();
    if k == 0 || k > n {
        bail!("subset size {k} outside 1..={n}");
    }
    let indices = match strategy {
        Strategy::Random => sample_indices(n, k, rng),
        Strategy::Interval => (0..k).collect(),
        Strategy::CosetUnion => coset_union_indices(group, k, rng),
    };
    Ok(SubsetA::from_indices(group, &indices)?)
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Fills whole cosets of `H = {a : a_1 = 0 mod p}` (p the smallest prime of
/// the first factor) in a shuffled order, then pads the remainder from the
/// next coset.  For prime cyclic groups `H` is trivial and this degenerates
/// to a random set, which is the honest answer: there is no proper coset
/// structure to exploit.
fn coset_union_indices(group: &GroupSpec, k: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let n = group.order();
    let p = smallest_prime_factor(group.factors()[0]);
    let coset_size = n / p;
    if coset_size <= 1 {
        return sample_indices(n, k, rng);
    }

    // bucket every index by the first-coordinate residue class
    let mut cosets: Vec<Vec<u64>> = vec![Vec::with_capacity(coset_size as usize); p as usize];
    for idx in 0..n {
        let r = group.element_at(idx as usize).coords()[0] % p;
        cosets[r as usize].push(idx);
    }

    let order = sample_indices(p, p, rng); // shuffled coset visit order
    let mut picked = Vec::with_capacity(k as usize);
    for &r in &order {
        let coset = &cosets[r as usize];
        let remaining = k as usize - picked.len();
        if remaining == 0 {
            break;
        }
        if remaining >= coset.len() {
            picked.extend_from_slice(coset);
        } else {
            let chosen = sample_indices(coset.len() as u64, remaining as u64, rng);
            picked.extend(chosen.into_iter().map(|i| coset[i as usize]));
        }
    }
    picked.sort_unstable();
    picked
}
