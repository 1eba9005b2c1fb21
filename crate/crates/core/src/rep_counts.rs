//! Exact representation counts for restricted h-fold sums.
//!
//! For a subset `A = {a_1, ..., a_k}` of a finite abelian group, `R(m)`
//! counts ordered h-tuples of *pairwise distinct* indices with
//! `a_{j_1} + ... + a_{j_h} = m`.  Two independent ways to get it:
//!
//! * **Identity method.**  For each partition of `h` (colex order, so the
//!   all-ones partition is first), convolve the dilate counts of its positive
//!   parts; indices range independently, so the component for partition `i`
//!   has total mass `k^(number of positive parts)`.  The signed combination
//!   of components with the cycle-type coefficients from
//!   [`crate::partitions::coefficient`] cancels every tuple with a repeated
//!   index, leaving exactly `R`.  Works for any group order, odd or even.
//! * **Census method.**  Enumerate h-element subsets directly and multiply
//!   by `h!`.  Cost grows like `C(k, h)`, so a configurable guard refuses
//!   runs that would not finish; use the identity method instead.
//!
//! Both methods return bit-identical vectors; the randomized cross-check in
//! the test suite and the acceptance suite hold them to that.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::convolve::{
    convolve_many_with, plan_for, preferred_engine, reconstruction_range, single_residue_range,
    Engine, Spectra,
};
use crate::error::{Error, Result};
use crate::group::{dilate_count, indicator, CountVector, Element, SubsetA};
use crate::partitions::{coefficient, colex_partitions, three_one_index, Partition};

/// Refuse census enumerations beyond this many subsets unless overridden.
pub const DEFAULT_COMBINATION_GUARD: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RMethod {
    /// Partition identity over convolutions; polynomial in `n`.
    Identity,
    /// Direct h-subset enumeration times `h!`; exponential in `h`.
    Census,
}

#[derive(Debug, Clone)]
pub struct RepCountOptions {
    pub method: RMethod,
    pub engine: Engine,
    pub guard: u64,
    pub keep_components: bool,
}

impl Default for RepCountOptions {
    fn default() -> Self {
        RepCountOptions {
            method: RMethod::Identity,
            engine: Engine::Auto,
            guard: DEFAULT_COMBINATION_GUARD,
            keep_components: true,
        }
    }
}

/// The result of a representation count.
#[derive(Debug, Clone)]
pub struct RepCountProfile {
    pub h: u32,
    /// `R(m)` indexed by dense group index `m`.
    pub counts: CountVector,
    /// Per-partition component vectors in colex order; identity method only.
    pub components: Option<Vec<CountVector>>,
    /// Whether `R(m) > 0` for every `m`.
    pub covered: bool,
}

pub fn compute_r(a: &SubsetA, h: u32) -> Result<RepCountProfile> {
    compute_r_with(a, h, &RepCountOptions::default())
}

pub fn compute_r_with(a: &SubsetA, h: u32, opts: &RepCountOptions) -> Result<RepCountProfile> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    match opts.method {
        RMethod::Identity => identity_profile(a, h, opts),
        RMethod::Census => census_profile(a, h, opts.guard),
    }
}

/// The component for one partition: the convolution of `dilate_count(A, r)`
/// over its positive parts `r`.  Total mass is `k^(positive parts)`.
pub fn compute_r_i(a: &SubsetA, p: &Partition, engine: Engine) -> Result<CountVector> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let operands: Vec<CountVector> = p
        .positive_parts()
        .iter()
        .map(|&r| dilate_count(a, r as u64))
        .collect::<Result<_>>()?;
    convolve_many_with(&operands, engine)
}

fn identity_profile(a: &SubsetA, h: u32, opts: &RepCountOptions) -> Result<RepCountProfile> {
    let parts_list = colex_partitions(h)?;
    let group = a.group();
    let n = group.order() as usize;
    let k = a.k();

    let mut dilates: Vec<Option<CountVector>> = vec![None; h as usize + 1];
    for p in &parts_list {
        for &r in p.positive_parts() {
            if dilates[r as usize].is_none() {
                dilates[r as usize] = Some(dilate_count(a, r as u64)?);
            }
        }
    }

    // Batched transform path: one forward transform per distinct dilate,
    // shared by every partition, with pointwise products in the spectral
    // domain.  The plan is built at width `h` so up to h spectra can be
    // multiplied before folding back without digit carries.  Partitions whose
    // entry bound `k^parts` exceeds the reconstruction range fall back to
    // pairwise folds, which re-embed (and stay exact) at every step.
    let want_batch = match opts.engine {
        Engine::Naive => false,
        Engine::Ntt => true,
        Engine::Auto => {
            let ind = indicator(a)?;
            preferred_engine(&ind, &ind) == Engine::Ntt
        }
    };
    let plan = if want_batch && h >= 2 {
        plan_for(group, h as u64)
    } else {
        None
    };

    // the all-ones partition has the largest entry bound, k^h
    let need_both = BigUint::from(k).pow(h) >= single_residue_range();
    let mut spectra: Vec<Option<Spectra>> = vec![None; h as usize + 1];
    let mut components: Vec<CountVector> = Vec::with_capacity(parts_list.len());
    for p in &parts_list {
        let pos = p.positive_parts();
        if let Some(plan) = &plan {
            let mass_bound = BigUint::from(k).pow(pos.len() as u32);
            if pos.len() > 1 && mass_bound < reconstruction_range() {
                for &r in pos {
                    if spectra[r as usize].is_none() {
                        let d = dilates[r as usize].as_ref().expect("dilate precomputed");
                        spectra[r as usize] =
                            Some(plan.forward(d.as_small().expect("dilates fit u128"), need_both));
                    }
                }
                let mut acc = spectra[pos[0] as usize].clone().expect("just filled");
                for &r in &pos[1..] {
                    plan.mul_assign(&mut acc, spectra[r as usize].as_ref().expect("just filled"));
                }
                components.push(CountVector::from_u128(group, plan.finish(acc, n))?);
                continue;
            }
        }
        let operands: Vec<CountVector> = pos
            .iter()
            .map(|&r| dilates[r as usize].clone().expect("dilate precomputed"))
            .collect();
        components.push(convolve_many_with(&operands, opts.engine)?);
    }

    let coeffs: Vec<BigInt> = parts_list.iter().map(coefficient).collect();
    let counts = assemble_signed(n, &components, &coeffs)?;
    let covered = counts.is_positive_everywhere();
    Ok(RepCountProfile {
        h,
        counts,
        components: if opts.keep_components {
            Some(components)
        } else {
            None
        },
        covered,
    })
}

/// `sum_i c_i * component_i`, entry by entry, with a final nonnegativity
/// assertion: a negative entry means the identity was assembled wrong, not
/// that the input was bad, so it panics rather than returning an error.
fn assemble_signed(
    n: usize,
    components: &[CountVector],
    coeffs: &[BigInt],
) -> Result<CountVector> {
    let group = components[0].group().clone();
    let mut fast_bound = BigUint::zero();
    let mut all_small = true;
    for (c, comp) in coeffs.iter().zip(components) {
        fast_bound += c.magnitude() * comp.mass();
        all_small &= comp.as_small().is_some();
    }
    if all_small && fast_bound.to_u128().map_or(false, |b| b < (i128::MAX as u128)) {
        let mut acc = vec![0i128; n];
        for (c, comp) in coeffs.iter().zip(components) {
            let ci = c.to_i128().expect("bounded by fast_bound");
            let small = comp.as_small().expect("checked all_small");
            for (slot, &v) in acc.iter_mut().zip(small) {
                *slot += ci * v as i128;
            }
        }
        let counts: Vec<u128> = acc
            .into_iter()
            .map(|v| {
                assert!(v >= 0, "signed component assembly went negative: {v}");
                v as u128
            })
            .collect();
        CountVector::from_u128(&group, counts)
    } else {
        let mut acc = vec![BigInt::zero(); n];
        for (c, comp) in coeffs.iter().zip(components) {
            for (m, slot) in acc.iter_mut().enumerate() {
                let v = BigInt::from(comp.get(m));
                *slot += c * v;
            }
        }
        let counts: Vec<BigUint> = acc
            .into_iter()
            .map(|v| {
                assert!(!v.is_negative(), "signed component assembly went negative");
                v.magnitude().clone()
            })
            .collect();
        CountVector::from_big(&group, counts)
    }
}

fn census_profile(a: &SubsetA, h: u32, guard: u64) -> Result<RepCountProfile> {
    let group = a.group();
    let n = group.order() as usize;
    let mut subset_counts = vec![0u64; n];
    for_each_combination_sum(a, h, guard, |m| subset_counts[m] += 1)?;

    let mut h_fact = BigUint::one();
    for i in 1..=h as u64 {
        h_fact *= BigUint::from(i);
    }
    let covered = subset_counts.iter().all(|&c| c > 0);
    let counts = match h_fact.to_u128() {
        Some(f)
            if subset_counts
                .iter()
                .all(|&c| (c as u128).checked_mul(f).is_some()) =>
        {
            CountVector::from_u128(
                group,
                subset_counts.iter().map(|&c| c as u128 * f).collect(),
            )?
        }
        _ => CountVector::from_big(
            group,
            subset_counts
                .iter()
                .map(|&c| BigUint::from(c) * &h_fact)
                .collect(),
        )?,
    };
    Ok(RepCountProfile {
        h,
        counts,
        components: None,
        covered,
    })
}

/// `h^A`: every value reachable as a sum of `h` distinct elements, via the
/// identity method.
pub fn restricted_sumset(a: &SubsetA, h: u32) -> Result<Vec<Element>> {
    let profile = compute_r_with(
        a,
        h,
        &RepCountOptions {
            keep_components: false,
            ..RepCountOptions::default()
        },
    )?;
    Ok(support_elements(&profile.counts))
}

/// `h^A` by direct subset enumeration; refuses when `C(k, h)` exceeds the
/// guard.
pub fn restricted_sumset_naive(a: &SubsetA, h: u32, guard: u64) -> Result<Vec<Element>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.group().order() as usize;
    let mut hit = vec![false; n];
    for_each_combination_sum(a, h, guard, |m| hit[m] = true)?;
    let group = a.group();
    Ok(hit
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| group.element_at(i))
        .collect())
}

/// The unrestricted sumset `hA` (repetitions allowed), by iterated set
/// addition.
pub fn sumset_unrestricted(a: &SubsetA, h: u32) -> Result<Vec<Element>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if h == 0 {
        return Err(Error::HOutOfRange {
            h,
            min: 1,
            max: u32::MAX,
        });
    }
    let group = a.group();
    let n = group.order() as usize;
    let mut cur = vec![false; n];
    for &i in a.indices() {
        cur[i as usize] = true;
    }
    for _ in 1..h {
        let mut next = vec![false; n];
        for (i, &b) in cur.iter().enumerate() {
            if !b {
                continue;
            }
            for &j in a.indices() {
                next[group.add_indices(i, j as usize)] = true;
            }
        }
        cur = next;
    }
    Ok(cur
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| group.element_at(i))
        .collect())
}

/// Whether every group element has at least one restricted representation.
pub fn is_covering(a: &SubsetA, h: u32) -> Result<bool> {
    let profile = compute_r_with(
        a,
        h,
        &RepCountOptions {
            keep_components: false,
            ..RepCountOptions::default()
        },
    )?;
    Ok(profile.covered)
}

fn support_elements(c: &CountVector) -> Vec<Element> {
    let group = c.group();
    c.support_indices()
        .into_iter()
        .map(|i| group.element_at(i))
        .collect()
}

/// Per-entry upper bounds on the early components, checked exactly.
///
/// With `k = |A|`, colex components `R_2` (one doubled index) and `R_3` (two
/// doubled indices) and odd group order, the audit verifies for every `m`:
///
/// 1. `R_2(m) <= k(k-1)...(k-h+3) + C(h-2, 2) * R_3(m)`
/// 2. `R_3(m) <= k^(h-3)`
/// 3. `R_i(m) <= k^(h-4)` for `i >= 4` except the `(3,1,...,1)` component
/// 4. `prod_r mu(r)! r^mu(r) >= 4` for those same partitions
#[derive(Debug, Clone)]
pub struct ComponentBoundsReport {
    pub h: u32,
    pub k: u64,
    pub n: u64,
    pub r2_bound_ok: bool,
    pub r3_bound_ok: bool,
    pub tail_bound_ok: bool,
    pub weight_bound_ok: bool,
    /// Smallest `RHS - LHS` seen across families 1-3.
    pub worst_slack: BigInt,
}

impl ComponentBoundsReport {
    pub fn pass(&self) -> bool {
        self.r2_bound_ok && self.r3_bound_ok && self.tail_bound_ok && self.weight_bound_ok
    }
}

pub fn audit_component_bounds(a: &SubsetA, h: u32) -> Result<ComponentBoundsReport> {
    if h < 4 {
        return Err(Error::HOutOfRange {
            h,
            min: 4,
            max: crate::partitions::MAX_ENUM_H,
        });
    }
    let group = a.group();
    let n = group.order();
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    let profile = compute_r_with(a, h, &RepCountOptions::default())?;
    let comps = profile.components.as_ref().expect("identity keeps components");
    let parts_list = colex_partitions(h)?;
    let k = a.k();
    let kb = BigInt::from(k);

    let mut falling = BigInt::one();
    for t in 0..(h as i64 - 2) {
        falling *= &kb - BigInt::from(t);
    }
    let hh = BigInt::from((h as i64 - 2) * (h as i64 - 3) / 2);
    let k_h3 = kb.pow(h - 3);
    let k_h4 = kb.pow(h.saturating_sub(4));
    let skip = three_one_index(h)?;

    let mut worst: Option<BigInt> = None;
    let mut ok = [true; 3];
    for m in 0..n as usize {
        let r2 = BigInt::from(comps[1].get(m));
        let r3 = BigInt::from(comps[2].get(m));
        let s1 = &falling + &hh * &r3 - &r2;
        let s2 = &k_h3 - &r3;
        for (f, s) in [(0usize, &s1), (1, &s2)] {
            if s.is_negative() {
                ok[f] = false;
            }
            if worst.as_ref().map_or(true, |w| s < w) {
                worst = Some(s.clone());
            }
        }
        for (i, comp) in comps.iter().enumerate().skip(3) {
            if i + 1 == skip {
                continue;
            }
            let s = &k_h4 - BigInt::from(comp.get(m));
            if s.is_negative() {
                ok[2] = false;
            }
            if worst.as_ref().map_or(true, |w| &s < w) {
                worst = Some(s);
            }
        }
    }

    let mut weight_ok = true;
    for (i, p) in parts_list.iter().enumerate().skip(3) {
        if i + 1 == skip {
            continue;
        }
        let mut weight = BigUint::one();
        for (r, mu) in p.multiplicities() {
            for t in 1..=mu as u64 {
                weight *= BigUint::from(t);
            }
            weight *= BigUint::from(r as u64).pow(mu);
        }
        if weight < BigUint::from(4u32) {
            weight_ok = false;
        }
    }

    Ok(ComponentBoundsReport {
        h,
        k,
        n,
        r2_bound_ok: ok[0],
        r3_bound_ok: ok[1],
        tail_bound_ok: ok[2],
        weight_bound_ok: weight_ok,
        worst_slack: worst.unwrap_or_else(BigInt::zero),
    })
}

/// Lower bound on the leading component (the plain h-fold convolution power
/// of the indicator) for odd group order:
///
/// ```text
/// R_1(m) >= k^h / n - (n/3)^(h-2) * (k - k^2/n)
/// ```
///
/// The comparison is done in exact integers by clearing denominators, so a
/// reported pass is airtight; `worst_slack` is the float value of the
/// smallest `R_1(m) - bound`.
#[derive(Debug, Clone)]
pub struct PowerLowerBoundReport {
    pub pass: bool,
    pub worst_slack: f64,
    pub argmin: u64,
}

pub fn audit_power_lower_bound(a: &SubsetA, h: u32) -> Result<PowerLowerBoundReport> {
    if h < 2 {
        return Err(Error::HOutOfRange {
            h,
            min: 2,
            max: crate::partitions::MAX_ENUM_H,
        });
    }
    let group = a.group();
    let n = group.order();
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    let all_ones = Partition::new(vec![1; h as usize])?;
    let r1 = compute_r_i(a, &all_ones, Engine::Auto)?;
    let k = BigInt::from(a.k());
    let nb = BigInt::from(n);
    let three_pow = BigInt::from(3).pow(h - 2);
    // numerator and denominator of the bound over a common denominator D = 3^(h-2) * n
    let numer = &three_pow * k.pow(h) - nb.pow(h - 2) * &k * (&nb - &k);
    let denom = &three_pow * &nb;

    let mut worst: Option<(BigInt, u64)> = None;
    for m in 0..n as usize {
        let slack = BigInt::from(r1.get(m)) * &denom - &numer;
        if worst.as_ref().map_or(true, |(w, _)| &slack < w) {
            worst = Some((slack, m as u64));
        }
    }
    let (slack_num, argmin) = worst.expect("group order is positive");
    let pass = !slack_num.is_negative();
    let worst_slack = slack_num.to_f64().unwrap_or(f64::NAN)
        / denom.to_f64().unwrap_or(f64::NAN);
    Ok(PowerLowerBoundReport {
        pass,
        worst_slack,
        argmin,
    })
}

/// Exact `C(k, h)`, refusing (not saturating) past the guard.
pub fn combination_count(k: u64, h: u32, guard: u64) -> Result<u128> {
    let h = h as u64;
    if h > k {
        return Ok(0);
    }
    let r = h.min(k - h);
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = match acc.checked_mul((k - r + i) as u128) {
            Some(v) => v / i as u128,
            None => {
                return Err(Error::CombinationGuardExceeded {
                    combinations: u128::MAX,
                    guard,
                })
            }
        };
        if acc > guard as u128 {
            return Err(Error::CombinationGuardExceeded {
                combinations: acc,
                guard,
            });
        }
    }
    Ok(acc)
}

/// Runs `f` on the dense group index of every h-subset sum of `A`.
fn for_each_combination_sum(
    a: &SubsetA,
    h: u32,
    guard: u64,
    mut f: impl FnMut(usize),
) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = a.indices().len();
    if h == 0 {
        return Err(Error::HOutOfRange {
            h,
            min: 1,
            max: u32::MAX,
        });
    }
    if h as usize > k {
        return Ok(());
    }
    combination_count(k as u64, h, guard)?;
    let group = a.group();
    let elems: Vec<usize> = a.indices().iter().map(|&i| i as usize).collect();
    let h = h as usize;
    let mut idx: Vec<usize> = (0..h).collect();
    let mut prefix: Vec<usize> = vec![0; h + 1];
    let recompute = |idx: &[usize], prefix: &mut [usize], from: usize| {
        for t in from..idx.len() {
            prefix[t + 1] = group.add_indices(prefix[t], elems[idx[t]]);
        }
    };
    recompute(&idx, &mut prefix, 0);
    loop {
        f(prefix[h]);
        let mut pos = h;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if idx[pos] != pos + k - h {
                idx[pos] += 1;
                for t in pos + 1..h {
                    idx[t] = idx[t - 1] + 1;
                }
                recompute(&idx, &mut prefix, pos);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn zn(n: u64) -> GroupSpec {
        GroupSpec::new(&[n]).unwrap()
    }

    fn subset(g: &GroupSpec, idx: &[u64]) -> SubsetA {
        SubsetA::from_indices(g, idx).unwrap()
    }

    #[test]
    fn pair_counts_z5() {
        let g = zn(5);
        let a = subset(&g, &[0, 1, 2]);
        let profile = compute_r(&a, 2).unwrap();
        let got: Vec<u128> = (0..5).map(|m| profile.counts.get_u128(m).unwrap()).collect();
        assert_eq!(got, vec![0, 2, 2, 2, 0]);
        assert!(!profile.covered);
    }

    #[test]
    fn identity_matches_census_z5() {
        let g = zn(5);
        let a = subset(&g, &[0, 1, 2]);
        let identity = compute_r(&a, 2).unwrap();
        let census = compute_r_with(
            &a,
            2,
            &RepCountOptions {
                method: RMethod::Census,
                ..RepCountOptions::default()
            },
        )
        .unwrap();
        assert_eq!(identity.counts, census.counts);
    }

    #[test]
    fn component_examples() {
        let g = zn(5);
        let a = subset(&g, &[0, 1, 2]);
        let pair = Partition::new(vec![1, 1]).unwrap();
        let r = compute_r_i(&a, &pair, Engine::Naive).unwrap();
        assert_eq!(r.get_u128(2).unwrap(), 3);
        let doubled = Partition::new(vec![0, 2]).unwrap();
        let r = compute_r_i(&a, &doubled, Engine::Naive).unwrap();
        assert_eq!(r.get_u128(2).unwrap(), 1);
        assert_eq!(r.get_u128(3).unwrap(), 0);
    }

    #[test]
    fn component_mass_is_k_to_parts() {
        let g = zn(12);
        let a = subset(&g, &[0, 1, 3, 7, 10]);
        for h in 2..=5u32 {
            for p in colex_partitions(h).unwrap() {
                let r = compute_r_i(&a, &p, Engine::Naive).unwrap();
                let expect = BigUint::from(5u64).pow(p.positive_parts().len() as u32);
                assert_eq!(r.mass(), expect);
            }
        }
    }

    #[test]
    fn h_above_k_gives_zero_both_ways() {
        let g = zn(7);
        let a = subset(&g, &[0, 1]);
        for method in [RMethod::Identity, RMethod::Census] {
            let profile = compute_r_with(
                &a,
                3,
                &RepCountOptions {
                    method,
                    ..RepCountOptions::default()
                },
            )
            .unwrap();
            assert!(!profile.covered);
            assert!((0..7).all(|m| profile.counts.get_u128(m) == Some(0)));
        }
    }

    #[test]
    fn total_mass_is_falling_factorial() {
        let g = zn(11);
        let a = subset(&g, &[0, 2, 3, 5, 8, 9]);
        for h in 1..=4u32 {
            let profile = compute_r(&a, h).unwrap();
            let mut expect = BigUint::from(1u32);
            for t in 0..h as u64 {
                expect *= BigUint::from(6 - t);
            }
            assert_eq!(profile.counts.mass(), expect, "h={h}");
        }
    }

    #[test]
    fn restricted_sumset_examples() {
        let g = zn(5);
        let a = subset(&g, &[0, 1, 2]);
        let s = restricted_sumset_naive(&a, 2, DEFAULT_COMBINATION_GUARD).unwrap();
        let got: Vec<u64> = s.iter().map(|e| g.index_of(e) as u64).collect();
        assert_eq!(got, vec![1, 2, 3]);

        let full = subset(&g, &[0, 1, 2, 3, 4]);
        let s = restricted_sumset_naive(&full, 2, DEFAULT_COMBINATION_GUARD).unwrap();
        assert_eq!(s.len(), 5);

        let s = restricted_sumset_naive(&a, 4, DEFAULT_COMBINATION_GUARD).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn census_guard_refuses() {
        let g = zn(31);
        let a = subset(&g, &(0..20).collect::<Vec<u64>>());
        let err = restricted_sumset_naive(&a, 10, 1000).unwrap_err();
        assert!(matches!(err, Error::CombinationGuardExceeded { .. }));
        let msg = err.to_string();
        assert!(msg.contains("counting method"));
    }

    #[test]
    fn identity_support_matches_naive_sumset() {
        let g = zn(13);
        let a = subset(&g, &[0, 1, 4, 6, 11]);
        for h in 1..=4u32 {
            let via_identity = restricted_sumset(&a, h).unwrap();
            let via_naive = restricted_sumset_naive(&a, h, DEFAULT_COMBINATION_GUARD).unwrap();
            assert_eq!(via_identity, via_naive, "h={h}");
        }
    }

    #[test]
    fn unrestricted_examples() {
        let g = zn(5);
        let a = subset(&g, &[0, 1]);
        let s = sumset_unrestricted(&a, 2).unwrap();
        let got: Vec<u64> = s.iter().map(|e| g.index_of(e) as u64).collect();
        assert_eq!(got, vec![0, 1, 2]);

        let singleton = subset(&g, &[0]);
        let s = sumset_unrestricted(&singleton, 4).unwrap();
        assert_eq!(s.len(), 1);

        let s = sumset_unrestricted(&a, 1).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn covering_examples() {
        let g = zn(5);
        let full = subset(&g, &[0, 1, 2, 3, 4]);
        assert!(is_covering(&full, 2).unwrap());

        let g7 = zn(7);
        let a = subset(&g7, &[0, 1]);
        assert!(!is_covering(&a, 2).unwrap());

        // a coset of the index-3 subgroup of Z_9 never covers
        let g9 = zn(9);
        let coset = subset(&g9, &[0, 3, 6]);
        for h in 2..=3u32 {
            assert!(!is_covering(&coset, h).unwrap(), "h={h}");
        }
    }

    #[test]
    fn translation_equivariance() {
        let g = zn(9);
        let a = subset(&g, &[0, 1, 3, 7]);
        let shift = g.element(&[4]).unwrap();
        let translated = a.translate(&shift).unwrap();
        let h = 3u32;
        let base = compute_r(&a, h).unwrap();
        let moved = compute_r(&translated, h).unwrap();
        // R_{A+g}(m + h*g) = R_A(m)
        for m in 0..9usize {
            let target = (m + 3 * 4) % 9;
            assert_eq!(base.counts.get(m), moved.counts.get(target));
        }
    }

    #[test]
    fn component_bounds_on_small_odd_group() {
        let g = zn(9);
        let a = subset(&g, &[0, 1, 2, 3]);
        let report = audit_component_bounds(&a, 4).unwrap();
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn component_bounds_reject_even_order() {
        let g = zn(8);
        let a = subset(&g, &[0, 1, 2, 3]);
        assert!(matches!(
            audit_component_bounds(&a, 4),
            Err(Error::EvenOrder(8))
        ));
    }

    #[test]
    fn power_lower_bound_full_group_is_tight() {
        let g = zn(5);
        let full = subset(&g, &[0, 1, 2, 3, 4]);
        let report = audit_power_lower_bound(&full, 4).unwrap();
        assert!(report.pass);
        assert!(report.worst_slack.abs() < 1e-12, "{}", report.worst_slack);
    }

    #[test]
    fn power_lower_bound_singleton() {
        let g = zn(3);
        let a = subset(&g, &[0]);
        let report = audit_power_lower_bound(&a, 4).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn combination_count_values() {
        assert_eq!(combination_count(5, 2, 100).unwrap(), 10);
        assert_eq!(combination_count(10, 0, 100).unwrap(), 1);
        assert_eq!(combination_count(4, 7, 100).unwrap(), 0);
        assert!(combination_count(100, 50, 1000).is_err());
    }
}
