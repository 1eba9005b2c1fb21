//! Integer partitions of `h` in colexicographic order, and the signed
//! coefficients attached to them by the inclusion-exclusion identity for
//! distinct-summand counts.
//!
//! A partition is stored as a zero-padded nondecreasing `h`-tuple, e.g. for
//! `h = 4`: `(1,1,1,1) < (0,1,1,2) < (0,0,2,2) < (0,0,1,3) < (0,0,0,4)`.
//! Colex compares from the last coordinate backwards.  The coefficient of a
//! partition equals the signed number of permutations in `S_h` whose cycle
//! type it is:
//!
//! ```text
//! c = (-1)^(sum_r mu(r) (r-1)) * h! / prod_r (mu(r)! * r^mu(r))
//! ```
//!
//! where `mu(r)` counts parts equal to `r`.  Summed over all partitions of
//! `h >= 2` the coefficients cancel to zero, and their absolute values add
//! up to `h!`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const MAX_ENUM_H: u32 = 40;
pub const MAX_COUNT_H: u32 = 200;

/// A partition of `h`, padded with zeros to exactly `h` parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Wraps a raw tuple after checking it is nondecreasing, zero-padded and
    /// sums to its own length.
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        let h = parts.len() as u32;
        if h == 0 || h > MAX_ENUM_H {
            return Err(Error::HOutOfRange {
                h,
                min: 1,
                max: MAX_ENUM_H,
            });
        }
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::SetFileSyntax {
                line: 0,
                reason: "partition parts must be nondecreasing".into(),
            });
        }
        let total: u32 = parts.iter().sum();
        if total != h {
            return Err(Error::SetFileSyntax {
                line: 0,
                reason: format!("parts sum to {total}, expected {h}"),
            });
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn h(&self) -> u32 {
        self.parts.len() as u32
    }

    /// Positive parts in nondecreasing order.
    pub fn positive_parts(&self) -> &[u32] {
        let first = self.parts.iter().position(|&p| p > 0).unwrap_or(0);
        &self.parts[first..]
    }

    /// 1-based position of the first positive part within the padded tuple.
    pub fn first_positive_position(&self) -> usize {
        self.parts.iter().position(|&p| p > 0).map(|i| i + 1).unwrap_or(0)
    }

    /// `(r, mu(r))` for every distinct positive part `r`, ascending in `r`.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.positive_parts() {
            match out.last_mut() {
                Some((r, m)) if *r == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Colex comparison: `a < b` iff at the highest position where they differ,
/// `a` has the smaller part.  Errors when the lengths differ.
pub fn colex_cmp(a: &Partition, b: &Partition) -> Result<Ordering> {
    if a.parts.len() != b.parts.len() {
        return Err(Error::DimensionMismatch {
            expected: a.parts.len(),
            got: b.parts.len(),
        });
    }
    for (x, y) in a.parts.iter().rev().zip(b.parts.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

pub fn colex_less(a: &Partition, b: &Partition) -> Result<bool> {
    Ok(colex_cmp(a, b)? == Ordering::Less)
}

/// All partitions of `h` in ascending colex order, starting at `(1,...,1)`
/// and ending at `(0,...,0,h)`.
pub fn colex_partitions(h: u32) -> Result<Vec<Partition>> {
    if h == 0 || h > MAX_ENUM_H {
        return Err(Error::HOutOfRange {
            h,
            min: 1,
            max: MAX_ENUM_H,
        });
    }
    let mut raw: Vec<Vec<u32>> = Vec::new();
    let mut acc: Vec<u32> = Vec::new();
    enumerate_into(h, 1, &mut acc, &mut raw);
    let mut padded: Vec<Partition> = raw
        .into_iter()
        .map(|p| {
            let mut parts = vec![0u32; h as usize - p.len()];
            parts.extend(p);
            Partition { parts }
        })
        .collect();
    padded.sort_by(|a, b| colex_cmp(a, b).expect("equal lengths by construction"));
    Ok(padded)
}

fn enumerate_into(rest: u32, min_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(acc.clone());
        return;
    }
    for p in min_part..=rest {
        acc.push(p);
        enumerate_into(rest - p, p, acc, out);
        acc.pop();
    }
}

/// Signed count of permutations in `S_h` with this cycle type; always an
/// exact integer because `h! / prod(mu(r)! r^mu(r))` counts something.
pub fn coefficient(p: &Partition) -> BigInt {
    let h = p.h();
    let mut numer = BigInt::one();
    for i in 1..=h as u64 {
        numer *= BigInt::from(i);
    }
    let mut denom = BigInt::one();
    let mut sign_exp = 0u64;
    for (r, m) in p.multiplicities() {
        for i in 1..=m as u64 {
            denom *= BigInt::from(i);
        }
        denom *= BigInt::from(r as u64).pow(m);
        sign_exp += m as u64 * (r as u64 - 1);
    }
    let (q, rem) = (numer.clone() / &denom, numer % &denom);
    debug_assert!(rem.is_zero(), "cycle-type count must divide h!");
    if sign_exp % 2 == 0 {
        q
    } else {
        -q
    }
}

/// 1-based colex position of the partition `(3, 1, ..., 1)`; defined for
/// `h >= 4`.  This is the one partition of its block that the component
/// bound audit treats separately.
pub fn three_one_index(h: u32) -> Result<usize> {
    if h < 4 {
        return Err(Error::HOutOfRange {
            h,
            min: 4,
            max: MAX_ENUM_H,
        });
    }
    let mut parts = vec![0u32; 2];
    parts.extend(std::iter::repeat(1).take(h as usize - 3));
    parts.push(3);
    let target = Partition { parts };
    let all = colex_partitions(h)?;
    all.iter()
        .position(|p| *p == target)
        .map(|i| i + 1)
        .ok_or(Error::HOutOfRange {
            h,
            min: 4,
            max: MAX_ENUM_H,
        })
}

/// `p(h)` by Euler's pentagonal-number recurrence; exact for `h <= 200`.
pub fn partition_count(h: u32) -> Result<u128> {
    if h == 0 || h > MAX_COUNT_H {
        return Err(Error::HOutOfRange {
            h,
            min: 1,
            max: MAX_COUNT_H,
        });
    }
    let n = h as usize;
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut total: i128 = 0;
        let mut k: i128 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[i - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                total += sign * p[i - g2];
            }
            k += 1;
        }
        p[i] = total;
    }
    Ok(p[n] as u128)
}

/// Both sides of Newton's identity for the elementary symmetric polynomial
/// `e_h` in the given values, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonIdentityCheck {
    pub direct: BigRational,
    pub via_power_sums: BigRational,
    pub equal: bool,
}

/// Checks `e_h = (-1)^h sum over partitions of prod_r (-p_r)^mu(r) /
/// (mu(r)! r^mu(r))` where `p_r` are power sums.  `e_h` itself is evaluated
/// from its definition as a sum over h-element index subsets, so the two
/// sides share no code.
pub fn verify_newton_identity(values: &[BigRational], h: u32) -> Result<NewtonIdentityCheck> {
    let direct = elementary_symmetric(values, h);
    let via = if h == 0 {
        BigRational::one()
    } else {
        if h > MAX_ENUM_H {
            return Err(Error::HOutOfRange {
                h,
                min: 0,
                max: MAX_ENUM_H,
            });
        }
        let power_sums: Vec<BigRational> = (0..=h)
            .map(|r| {
                values
                    .iter()
                    .map(|x| pow_rational(x, r))
                    .fold(BigRational::zero(), |acc, v| acc + v)
            })
            .collect();
        let mut total = BigRational::zero();
        for p in colex_partitions(h)? {
            let mut term = BigRational::one();
            for (r, m) in p.multiplicities() {
                let neg_p = -&power_sums[r as usize];
                term *= pow_rational(&neg_p, m);
                let mut fact = BigInt::one();
                for i in 1..=m as u64 {
                    fact *= BigInt::from(i);
                }
                let weight = fact * BigInt::from(r as u64).pow(m);
                term /= BigRational::from_integer(weight);
            }
            total += term;
        }
        if h % 2 == 1 {
            total = -total;
        }
        total
    };
    let equal = direct == via;
    Ok(NewtonIdentityCheck {
        direct,
        via_power_sums: via,
        equal,
    })
}

fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn elementary_symmetric(values: &[BigRational], h: u32) -> BigRational {
    if h == 0 {
        return BigRational::one();
    }
    if h as usize > values.len() {
        return BigRational::zero();
    }
    let mut total = BigRational::zero();
    let k = values.len();
    let h = h as usize;
    let mut idx: Vec<usize> = (0..h).collect();
    loop {
        let mut prod = BigRational::one();
        for &i in &idx {
            prod *= &values[i];
        }
        total += prod;
        // advance the combination (lexicographic odometer)
        let mut pos = h;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + k - h {
                idx[pos] += 1;
                for t in pos + 1..h {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return total;
            }
        }
    }
}
