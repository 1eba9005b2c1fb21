//! Exact group-algebra convolution over a finite abelian group.
//!
//! `(c1 * c2)(g) = sum_h c1(h) c2(g - h)`, always over exact integers.  Two
//! execution paths:
//!
//! 1. Naive double loop, `O(support(c1) * n)`, in `u128` when the a-priori
//!    entry bound `mass(c1) * mass(c2)` fits, otherwise in `BigUint`.
//! 2. Number-theoretic transforms modulo two fixed 62-bit primes, combined by
//!    remaindering.  Multi-factor groups are flattened to one dimension with
//!    per-factor stride `2*u_j - 1` so digits never carry, then folded back.
//!    Engaged only when the entry bound fits the `p1 * p2` reconstruction
//!    range; both paths return bit-identical results.
//!
//! The primes `p = a * 2^24 + 1` admit transforms up to length `2^24`; the
//! stored generator has multiplicative order exactly `2^24`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{CountVector, GroupSpec};

/// Which convolution path to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Pick per call based on support sizes and transform cost.
    Auto,
    /// Double loop over supports; exact in every tier.
    Naive,
    /// Transform path; errors when the entry bound exceeds its range.
    Ntt,
}

struct NttPrime {
    p: u64,
    /// Element of multiplicative order `2^MAX_LOG` modulo `p`.
    w: u64,
}

const MAX_LOG: u32 = 24;
const PRIMES: [NttPrime; 2] = [
    NttPrime {
        p: 2_305_843_009_448_574_977,
        w: 1_054_171_556_321_657_328,
    },
    NttPrime {
        p: 2_305_843_010_354_544_641,
        w: 1_904_753_283_718_850_889,
    },
];
/// `PRIMES[0].p^{-1} mod PRIMES[1].p`, for the remaindering step.
const P0_INV_MOD_P1: u64 = 683_212_746_353_919_774;

fn crt_range() -> u128 {
    PRIMES[0].p as u128 * PRIMES[1].p as u128
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `floor(b * 2^64 / p)`, the precomputed quotient for [`shoup_mul`].
fn shoup_precompute(b: u64, p: u64) -> u64 {
    (((b as u128) << 64) / p as u128) as u64
}

/// `a * b mod p` for `a, b < p < 2^63` using the precomputed quotient; two
/// u64 multiplies instead of a 128-bit division.
#[inline]
fn shoup_mul(a: u64, b: u64, b_quot: u64, p: u64) -> u64 {
    let q = ((a as u128 * b_quot as u128) >> 64) as u64;
    let r = (a as u128 * b as u128).wrapping_sub(q as u128 * p as u128) as u64;
    reduce_once(r, p)
}

/// `-p^{-1} mod 2^64`, by Newton iteration on the 2-adic inverse.
fn mont_neg_inv(p: u64) -> u64 {
    let mut x = p; // correct mod 2^3
    for _ in 0..5 {
        x = x.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(x)));
    }
    x.wrapping_neg()
}

/// Montgomery product `a * b * 2^{-64} mod p`; used for spectrum-by-spectrum
/// products where neither operand is fixed (so Shoup quotients don't apply).
#[inline]
fn mont_mul(a: u64, b: u64, p: u64, neg_inv: u64) -> u64 {
    let t = a as u128 * b as u128;
    let m = (t as u64).wrapping_mul(neg_inv);
    let mp = m as u128 * p as u128;
    let carry = (t as u64 != 0) as u64; // low halves cancel to 0 mod 2^64
    let r = ((t >> 64) as u64) + ((mp >> 64) as u64) + carry;
    reduce_once(r, p)
}

/// Branchless `x - p if x >= p else x`, for `x < 2p` and `p < 2^63`: the
/// wrapped difference's sign bit selects the correction, so hot loops never
/// carry a data-dependent branch.
#[inline]
fn reduce_once(x: u64, p: u64) -> u64 {
    let t = x.wrapping_sub(p);
    let mask = ((t as i64) >> 63) as u64;
    t.wrapping_add(p & mask)
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    reduce_once(a + b, p)
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    let t = a.wrapping_sub(b);
    let mask = ((t as i64) >> 63) as u64;
    t.wrapping_add(p & mask)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[inline]
fn crt_pair(r0: u64, r1: u64) -> u128 {
    let d = sub_mod(r1, r0 % PRIMES[1].p, PRIMES[1].p);
    let m = mul_mod(d, P0_INV_MOD_P1, PRIMES[1].p);
    r0 as u128 + PRIMES[0].p as u128 * m as u128
}

fn bit_reverse(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place radix-2 transform.  Twiddles are stage-major: the stage with
/// butterfly half-width `half` reads `tw[half..2*half]`, so both the root
/// table and its Shoup-quotient table stream sequentially, and the inner
/// loop is written over disjoint slices to stay free of bounds checks.
fn ntt(a: &mut [u64], tw: &[u64], twq: &[u64], p: u64) {
    let n = a.len();
    bit_reverse(a);
    let mut half = 1usize;
    while half < n {
        let tws = &tw[half..2 * half];
        let twqs = &twq[half..2 * half];
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (((x, y), &w), &wq) in lo.iter_mut().zip(hi.iter_mut()).zip(tws).zip(twqs) {
                let t = shoup_mul(*y, w, wq, p);
                let u = *x;
                *x = add_mod(u, t, p);
                *y = sub_mod(u, t, p);
            }
        }
        half <<= 1;
    }
}

struct PrimeTables {
    p: u64,
    neg_inv: u64,
    fwd: Vec<u64>,
    fwd_quot: Vec<u64>,
    inv: Vec<u64>,
    inv_quot: Vec<u64>,
    /// `2^64 mod p` with its quotient: multiplying by it enters Montgomery
    /// form, so pointwise spectrum products can use [`mont_mul`].
    to_mont: u64,
    to_mont_quot: u64,
    /// `len^{-1} * 2^{-64} mod p` with its quotient: one multiply both
    /// normalizes the inverse transform and leaves Montgomery form.
    unscale: u64,
    unscale_quot: u64,
}

/// Stage-major twiddle layout: slot `half + j` holds `w_(2*half)^j`, for
/// `half = 1, 2, 4, ..., len/2`; exactly `len` slots in total.
fn stage_major_powers(w: u64, log: u32, p: u64) -> Vec<u64> {
    let len = 1usize << log;
    let mut out = vec![1u64; len];
    let mut half = 1usize;
    while half < len {
        let base = pow_mod(w, (len / (2 * half)) as u64, p);
        let mut cur = 1u64;
        for j in 0..half {
            out[half + j] = cur;
            cur = mul_mod(cur, base, p);
        }
        half <<= 1;
    }
    out
}

fn build_tables(prime: &NttPrime, log: u32) -> PrimeTables {
    let len = 1usize << log;
    let p = prime.p;
    let w = pow_mod(prime.w, 1u64 << (MAX_LOG - log), p);
    let w_inv = pow_mod(w, p - 2, p);
    let fwd = stage_major_powers(w, log, p);
    let inv = stage_major_powers(w_inv, log, p);
    let fwd_quot = fwd.iter().map(|&x| shoup_precompute(x, p)).collect();
    let inv_quot = inv.iter().map(|&x| shoup_precompute(x, p)).collect();
    let len_inv = pow_mod(len as u64, p - 2, p);
    let to_mont = (((1u128 << 64) % p as u128) as u64) % p;
    let r_inv = pow_mod(to_mont, p - 2, p);
    let unscale = mul_mod(len_inv, r_inv, p);
    PrimeTables {
        p,
        neg_inv: mont_neg_inv(p),
        fwd,
        fwd_quot,
        inv,
        inv_quot,
        to_mont,
        to_mont_quot: shoup_precompute(to_mont, p),
        unscale,
        unscale_quot: shoup_precompute(unscale, p),
    }
}

/// Precomputed transform data for one group shape.
///
/// `width` is the largest number of count vectors whose spectra may be
/// multiplied pointwise before [`NttPlan::finish`]: the flattening stride is
/// `width * (u_j - 1) + 1` per factor, exactly enough room for `width`-fold
/// digit sums to stay carry-free.
pub(crate) struct NttPlan {
    len: usize,
    embed_len: usize,
    embed_map: Vec<u32>,
    fold_map: Vec<u32>,
    tables: [PrimeTables; 2],
}

/// Transformed counts.  When the caller's entry bound fits one prime, the
/// second side stays empty and every transform and reconstruction runs at
/// half cost; the remainder pair is only carried when genuinely needed.
#[derive(Clone)]
pub(crate) struct Spectra {
    s: [Vec<u64>; 2],
    both: bool,
}

/// Reconstruction range of the two-prime remainder representation.
pub(crate) fn reconstruction_range() -> BigUint {
    BigUint::from(PRIMES[0].p) * BigUint::from(PRIMES[1].p)
}

/// Bound below which a single prime's residues already determine the result.
pub(crate) fn single_residue_range() -> BigUint {
    BigUint::from(PRIMES[0].p)
}

/// Transform length a width-`w` plan for `group` would use, if one exists.
fn plan_shape_width(group: &GroupSpec, width: u64) -> Option<(usize, u32)> {
    let mut embed_len: usize = 1;
    for &u in group.factors() {
        let v = width.checked_mul(u - 1)?.checked_add(1)?;
        embed_len = embed_len.checked_mul(usize::try_from(v).ok()?)?;
        if embed_len > (1usize << MAX_LOG) {
            return None;
        }
    }
    let len = embed_len.next_power_of_two();
    if len > (1usize << MAX_LOG) {
        return None;
    }
    Some((len, len.trailing_zeros()))
}

fn plan_shape(group: &GroupSpec) -> Option<(usize, u32)> {
    plan_shape_width(group, 2)
}

/// Cached plans, keyed by group factors and width.  Table construction is
/// `O(len)` modular work, worth skipping when the same group shape is
/// transformed many times (randomized covering trials, benchmarks).
fn plan_cache() -> &'static Mutex<HashMap<(Vec<u64>, u64), Arc<NttPlan>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u64>, u64), Arc<NttPlan>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn plan_for(group: &GroupSpec, width: u64) -> Option<Arc<NttPlan>> {
    plan_shape_width(group, width)?;
    let key = (group.factors().to_vec(), width);
    if let Some(plan) = plan_cache().lock().unwrap().get(&key) {
        return Some(plan.clone());
    }
    let plan = Arc::new(NttPlan::with_width(group, width)?);
    let mut cache = plan_cache().lock().unwrap();
    if cache.len() >= 4 {
        cache.clear();
    }
    cache.insert(key, plan.clone());
    Some(plan)
}

impl NttPlan {
    pub(crate) fn with_width(group: &GroupSpec, width: u64) -> Option<NttPlan> {
        debug_assert!(width >= 2);
        let (len, log) = plan_shape_width(group, width)?;
        let s = group.rank();
        let factors = group.factors();
        let vdims: Vec<u64> = factors.iter().map(|&u| width * (u - 1) + 1).collect();
        let mut estrides = vec![1u64; s];
        for j in (0..s.saturating_sub(1)).rev() {
            estrides[j] = estrides[j + 1] * vdims[j + 1];
        }
        let embed_len: usize = vdims.iter().product::<u64>() as usize;

        let n = group.order() as usize;
        let mut embed_map = vec![0u32; n];
        for (gi, slot) in embed_map.iter_mut().enumerate() {
            let e = group.element_at(gi);
            let mut t = 0u64;
            for (y, stride) in e.coords().iter().zip(&estrides) {
                t += y * stride;
            }
            *slot = t as u32;
        }

        let mut gstrides = vec![1u64; s];
        for j in (0..s.saturating_sub(1)).rev() {
            gstrides[j] = gstrides[j + 1] * factors[j + 1];
        }
        let mut fold_map = vec![0u32; embed_len];
        for (t, slot) in fold_map.iter_mut().enumerate() {
            let mut rest = t as u64;
            let mut gi = 0u64;
            for j in 0..s {
                let digit = rest / estrides[j];
                rest %= estrides[j];
                gi += (digit % factors[j]) * gstrides[j];
            }
            *slot = gi as u32;
        }

        Some(NttPlan {
            len,
            embed_len,
            embed_map,
            fold_map,
            tables: [build_tables(&PRIMES[0], log), build_tables(&PRIMES[1], log)],
        })
    }

    /// Transform `counts`; `both` selects whether the second prime's side is
    /// carried (required exactly when the caller's entry bound reaches
    /// `PRIMES[0].p`).
    pub(crate) fn forward(&self, counts: &[u128], both: bool) -> Spectra {
        let sides = if both { 2 } else { 1 };
        let mut out = [Vec::new(), Vec::new()];
        for (side, tables) in out.iter_mut().zip(&self.tables).take(sides) {
            side.resize(self.len, 0);
            for (gi, &c) in counts.iter().enumerate() {
                side[self.embed_map[gi] as usize] = (c % tables.p as u128) as u64;
            }
            ntt(side, &tables.fwd, &tables.fwd_quot, tables.p);
            // spectra live in Montgomery form between forward and finish
            for x in side.iter_mut() {
                *x = shoup_mul(*x, tables.to_mont, tables.to_mont_quot, tables.p);
            }
        }
        Spectra { s: out, both }
    }

    pub(crate) fn mul_assign(&self, acc: &mut Spectra, other: &Spectra) {
        debug_assert_eq!(acc.both, other.both);
        for (side, (a, b)) in self
            .tables
            .iter()
            .zip(acc.s.iter_mut().zip(other.s.iter()))
        {
            for (x, &y) in a.iter_mut().zip(b.iter()) {
                *x = mont_mul(*x, y, side.p, side.neg_inv);
            }
        }
    }

    pub(crate) fn finish(&self, mut acc: Spectra, n: usize) -> Vec<u128> {
        let sides = if acc.both { 2 } else { 1 };
        for (side, tables) in acc.s.iter_mut().zip(&self.tables).take(sides) {
            ntt(side, &tables.inv, &tables.inv_quot, tables.p);
            // one multiply normalizes by 1/len and leaves Montgomery form
            for x in side.iter_mut() {
                *x = shoup_mul(*x, tables.unscale, tables.unscale_quot, tables.p);
            }
        }
        let mut out = vec![0u128; n];
        if acc.both {
            for t in 0..self.embed_len {
                let r0 = acc.s[0][t];
                let r1 = acc.s[1][t];
                if r0 != 0 || r1 != 0 {
                    out[self.fold_map[t] as usize] += crt_pair(r0, r1);
                }
            }
        } else {
            for t in 0..self.embed_len {
                let r0 = acc.s[0][t];
                if r0 != 0 {
                    out[self.fold_map[t] as usize] += r0 as u128;
                }
            }
        }
        if cfg!(debug_assertions) {
            for t in self.embed_len..self.len {
                debug_assert_eq!(acc.s[0][t], 0, "transform leaked past the embedding");
            }
        }
        out
    }
}

fn mass_product(a: &CountVector, b: &CountVector) -> BigUint {
    a.mass() * b.mass()
}

fn fast_path_allowed(a: &CountVector, b: &CountVector) -> bool {
    if a.as_small().is_none() || b.as_small().is_none() {
        return false;
    }
    if plan_shape(a.group()).is_none() {
        return false;
    }
    match mass_product(a, b).to_u128() {
        Some(bound) => bound < crt_range(),
        None => false,
    }
}

/// The path [`Engine::Auto`] would take for these operands.
pub fn preferred_engine(a: &CountVector, b: &CountVector) -> Engine {
    if !fast_path_allowed(a, b) {
        return Engine::Naive;
    }
    let (len, log) = match plan_shape(a.group()) {
        Some(shape) => shape,
        None => return Engine::Naive,
    };
    let n = a.group().order() as u128;
    let s = a.support_size().min(b.support_size()) as u128;
    let per_pair = if a.group().rank() > 1 { 2 } else { 1 };
    let naive_cost = s * n * per_pair;
    let ntt_cost = 12 * len as u128 * log as u128;
    if naive_cost > ntt_cost {
        Engine::Ntt
    } else {
        Engine::Naive
    }
}

pub fn convolve(a: &CountVector, b: &CountVector) -> Result<CountVector> {
    convolve_with(a, b, Engine::Auto)
}

pub fn convolve_with(a: &CountVector, b: &CountVector, engine: Engine) -> Result<CountVector> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch);
    }
    match engine {
        Engine::Naive => naive(a, b),
        Engine::Ntt => {
            if !fast_path_allowed(a, b) {
                return Err(Error::FastPathUnavailable);
            }
            Ok(ntt_convolve(a, b))
        }
        Engine::Auto => match preferred_engine(a, b) {
            Engine::Ntt => Ok(ntt_convolve(a, b)),
            _ => naive(a, b),
        },
    }
}

/// Left fold of [`convolve`] over a nonempty list.
pub fn convolve_many(items: &[CountVector]) -> Result<CountVector> {
    convolve_many_with(items, Engine::Auto)
}

pub fn convolve_many_with(items: &[CountVector], engine: Engine) -> Result<CountVector> {
    let (first, rest) = items.split_first().ok_or(Error::EmptySet)?;
    let mut acc = first.clone();
    for it in rest {
        acc = convolve_with(&acc, it, engine)?;
    }
    Ok(acc)
}

fn ntt_convolve(a: &CountVector, b: &CountVector) -> CountVector {
    let plan = plan_for(a.group(), 2).expect("caller checked availability");
    let bound = mass_product(a, b)
        .to_u128()
        .expect("caller checked the reconstruction range");
    let both = bound >= PRIMES[0].p as u128;
    let mut sa = plan.forward(a.as_small().expect("small tier checked"), both);
    let sb = plan.forward(b.as_small().expect("small tier checked"), both);
    plan.mul_assign(&mut sa, &sb);
    let counts = plan.finish(sa, a.group().order() as usize);
    CountVector::from_u128(a.group(), counts).expect("length preserved")
}

fn naive(a: &CountVector, b: &CountVector) -> Result<CountVector> {
    let small_ok = a.as_small().is_some()
        && b.as_small().is_some()
        && mass_product(a, b).to_u128().is_some();
    if small_ok {
        Ok(naive_u128(a, b))
    } else {
        Ok(naive_big(a, b))
    }
}

fn naive_u128(a: &CountVector, b: &CountVector) -> CountVector {
    let group = a.group();
    let n = group.order() as usize;
    let (x, y) = if a.support_size() <= b.support_size() {
        (a, b)
    } else {
        (b, a)
    };
    let xs = x.as_small().expect("small tier checked");
    let ys = y.as_small().expect("small tier checked");
    let mut out = vec![0u128; n];
    if group.rank() == 1 {
        for (i, &xv) in xs.iter().enumerate() {
            if xv == 0 {
                continue;
            }
            let mut t = i;
            for &yv in ys {
                if yv != 0 {
                    out[t] += xv * yv;
                }
                t += 1;
                if t == n {
                    t = 0;
                }
            }
        }
    } else {
        for (i, &xv) in xs.iter().enumerate() {
            if xv == 0 {
                continue;
            }
            for (j, &yv) in ys.iter().enumerate() {
                if yv != 0 {
                    out[group.add_indices(i, j)] += xv * yv;
                }
            }
        }
    }
    CountVector::from_u128(group, out).expect("length preserved")
}

fn naive_big(a: &CountVector, b: &CountVector) -> CountVector {
    let group = a.group();
    let n = group.order() as usize;
    let xs = a.promote_to_big();
    let ys = b.promote_to_big();
    let mut out = vec![BigUint::zero(); n];
    for (i, xv) in xs.iter().enumerate() {
        if xv.is_zero() {
            continue;
        }
        for (j, yv) in ys.iter().enumerate() {
            if yv.is_zero() {
                continue;
            }
            let idx = group.add_indices(i, j);
            out[idx] += xv * yv;
        }
    }
    CountVector::from_big(group, out).expect("length preserved")
}

