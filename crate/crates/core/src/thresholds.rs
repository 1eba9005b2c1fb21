//! Density thresholds for restricted sumsets to cover the whole group.
//!
//! For `h >= 3` the polynomial `f_h(x) = x(3x)^(h-2) + x - 1` has a single
//! root in `(1/3, 1/2)`; any density `alpha` strictly above that root makes
//! `f_h(alpha)` positive, and a subset of size `k >= alpha * n` then covers
//! every element by h-fold sums of distinct terms once the (odd) group order
//! `n` clears [`order_threshold`].  The bound is the larger of a density term
//! `3^(h-2) (h^2 - h) / (2 f_h(alpha))` and a partition-census term
//! `(12 (p(h) - 4) (h-4)! + (3h-7)(h-4)) / (6 alpha)`, where `p(h)` is the
//! number of partitions of `h`.
//!
//! Everything here is derived from those formulas at call time; the tables in
//! the test suite exist only to pin the derivation down.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::partitions::partition_count;

/// Largest `h` accepted by the alpha root finder.
pub const MAX_ALPHA_H: u32 = 200;
/// Largest `h` accepted by the order bound (the `(h-4)!` factor must stay
/// comfortably inside `f64`).
pub const MAX_ORDER_H: u32 = 40;

/// `f_h(x) = x (3x)^(h-2) + x - 1`, the covering-density polynomial.
pub fn density_polynomial(h: u32, x: f64) -> Result<f64> {
    if !(3..=MAX_ALPHA_H).contains(&h) {
        return Err(Error::HOutOfRange {
            h,
            min: 3,
            max: MAX_ALPHA_H,
        });
    }
    Ok(x * (3.0 * x).powi(h as i32 - 2) + x - 1.0)
}

/// The unique root of `f_h` in `(1/3, 1/2)`, by bisection to f64 precision.
pub fn alpha_threshold(h: u32) -> Result<f64> {
    let mut lo = 1.0 / 3.0;
    let mut hi = 0.5;
    // f_h(1/3) = -1/3 < 0 and f_h(1/2) > 0 for every h >= 3
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if density_polynomial(h, mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two competing terms inside [`order_threshold`]: the density-driven
/// term `3^(h-2)(h^2-h) / (2 f_h(alpha))` and the partition-census term.
/// `alpha` must lie in `(alpha_threshold(h), 1]`.
pub fn order_threshold_terms(h: u32, alpha: f64) -> Result<(f64, f64)> {
    if !(4..=MAX_ORDER_H).contains(&h) {
        return Err(Error::HOutOfRange {
            h,
            min: 4,
            max: MAX_ORDER_H,
        });
    }
    if !alpha.is_finite() || alpha <= 1.0 / 3.0 || alpha > 1.0 {
        return Err(Error::DensityOutOfRange(alpha));
    }
    let f = density_polynomial(h, alpha)?;
    if f <= 0.0 {
        return Err(Error::DensityBelowRoot { h, alpha });
    }
    let hf = h as f64;
    let term_density = 3f64.powi(h as i32 - 2) * (hf * hf - hf) / (2.0 * f);
    let p_h = partition_count(h)? as f64;
    let mut fact = 1.0f64;
    for t in 2..=(h as u64).saturating_sub(4) {
        fact *= t as f64;
    }
    let term_partition = (12.0 * (p_h - 4.0) * fact + (3.0 * hf - 7.0) * (hf - 4.0)) / (6.0 * alpha);
    Ok((term_density, term_partition))
}

/// The smallest group order the covering argument supports at density
/// `alpha`: the larger of the two [`order_threshold_terms`].
pub fn order_threshold(h: u32, alpha: f64) -> Result<f64> {
    let (term_density, term_partition) = order_threshold_terms(h, alpha)?;
    Ok(term_density.max(term_partition))
}

/// Smallest *odd* integer order strictly above [`order_threshold`] — the
/// covering statement only speaks about odd orders, so this is the first
/// order it applies to.
pub fn minimal_order(h: u32, alpha: f64) -> Result<u64> {
    let bound = order_threshold(h, alpha)?;
    let next = bound.floor() as u64 + 1;
    Ok(if next % 2 == 0 { next + 1 } else { next })
}

/// One row of the derived threshold table: the root, the root rounded down
/// and up at the third decimal, and the order bound at the rounded-up
/// density.
#[derive(Debug, Clone)]
pub struct ThresholdRow {
    pub h: u32,
    pub alpha_root: f64,
    pub alpha_floor3: f64,
    pub alpha_ceil3: f64,
    pub order_bound: f64,
}

/// Rows for `h = 4..=11`.
pub fn threshold_table() -> Result<Vec<ThresholdRow>> {
    (4..=11)
        .map(|h| {
            let root = alpha_threshold(h)?;
            let alpha_floor3 = (root * 1000.0).floor() / 1000.0;
            let alpha_ceil3 = (root * 1000.0).ceil() / 1000.0;
            Ok(ThresholdRow {
                h,
                alpha_root: root,
                alpha_floor3,
                alpha_ceil3,
                order_bound: order_threshold(h, alpha_ceil3)?,
            })
        })
        .collect()
}

/// How the covering-density roots behave as `h` grows: the sequence itself,
/// whether it stays inside `(1/3, 1/2)`, whether it strictly decreases, and
/// whether its distance to `1/3` shrinks monotonically.
#[derive(Debug, Clone)]
pub struct RootSequenceProfile {
    pub roots: Vec<(u32, f64)>,
    pub all_in_range: bool,
    pub strictly_decreasing: bool,
    pub gap_decreasing: bool,
}

/// Profile the root sequence for `h = 4..=h_max`.
pub fn density_root_profile(h_max: u32) -> Result<RootSequenceProfile> {
    if !(5..=MAX_ALPHA_H).contains(&h_max) {
        return Err(Error::HOutOfRange {
            h: h_max,
            min: 5,
            max: MAX_ALPHA_H,
        });
    }
    let roots: Vec<(u32, f64)> = (4..=h_max)
        .map(|h| Ok((h, alpha_threshold(h)?)))
        .collect::<Result<_>>()?;
    let all_in_range = roots.iter().all(|&(_, r)| r > 1.0 / 3.0 && r < 0.5);
    let strictly_decreasing = roots.windows(2).all(|w| w[1].1 < w[0].1);
    let gap_decreasing = roots
        .windows(2)
        .all(|w| w[1].1 - 1.0 / 3.0 < w[0].1 - 1.0 / 3.0);
    Ok(RootSequenceProfile {
        roots,
        all_in_range,
        strictly_decreasing,
        gap_decreasing,
    })
}

/// Order bound in the older three-fold form, `9 / (3 a^2 + a - 1)`.
pub fn legacy_order_threshold_h3(alpha: f64) -> Result<f64> {
    let f = density_polynomial(3, alpha)?;
    if !alpha.is_finite() || alpha <= 1.0 / 3.0 || alpha > 1.0 {
        return Err(Error::DensityOutOfRange(alpha));
    }
    if f <= 0.0 {
        return Err(Error::DensityBelowRoot { h: 3, alpha });
    }
    Ok(9.0 / (3.0 * alpha * alpha + alpha - 1.0))
}

/// Order bound in the older four-fold form, `54 / (9 a^3 + a - 1)`.
pub fn legacy_order_threshold_h4(alpha: f64) -> Result<f64> {
    let f = density_polynomial(4, alpha)?;
    if !alpha.is_finite() || alpha <= 1.0 / 3.0 || alpha > 1.0 {
        return Err(Error::DensityOutOfRange(alpha));
    }
    if f <= 0.0 {
        return Err(Error::DensityBelowRoot { h: 4, alpha });
    }
    Ok(54.0 / (9.0 * alpha.powi(3) + alpha - 1.0))
}

/// Upper bound on the restricted critical number, when applicable.
///
/// For odd `n` with smallest prime factor `p` and `3 <= h <= n/p - 2`, the
/// critical size is at most `floor(c(n) * n) + t` with `c(n) = 2/5` when `5`
/// divides `n` and `5/13` otherwise, and an additive term `t` depending on
/// `p`, provided `n` is large enough for that `p`.  Below the size cutoff
/// the result is explicitly inapplicable rather than an error: the inputs
/// are legal, the method just has nothing to say.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiUpperOutcome {
    Bound(u64),
    Inapplicable { minimum_order: u64 },
}

#[derive(Debug, Clone)]
pub struct ChiUpperReport {
    pub n: u64,
    pub h: u32,
    pub smallest_prime: u64,
    pub c_numerator: u64,
    pub c_denominator: u64,
    pub outcome: ChiUpperOutcome,
}

pub fn chi_upper_bound(n: u64, h: u32) -> Result<ChiUpperReport> {
    if n < 3 {
        return Err(Error::OrderTooSmall { got: n, min: 3 });
    }
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    let p = smallest_prime_factor(n);
    let h_max = (n / p).saturating_sub(2);
    if h < 3 || h as u64 > h_max {
        return Err(Error::HOutOfRange {
            h,
            min: 3,
            max: h_max.min(u32::MAX as u64) as u32,
        });
    }
    let (c_num, c_den) = if n % 5 == 0 { (2, 5) } else { (5, 13) };
    let (additive, minimum_order) = if p == 3 {
        (9, 138_957)
    } else if p == 5 {
        (21, 6_175)
    } else {
        (3, 1_235)
    };
    let outcome = if n >= minimum_order {
        ChiUpperOutcome::Bound(c_num * n / c_den + additive)
    } else {
        ChiUpperOutcome::Inapplicable { minimum_order }
    };
    Ok(ChiUpperReport {
        n,
        h,
        smallest_prime: p,
        c_numerator: c_num,
        c_denominator: c_den,
        outcome,
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut q = 3;
    while q * q <= n {
        if n % q == 0 {
            return q;
        }
        q += 2;
    }
    n
}

/// Exact check of the falling-factorial inequality
///
/// ```text
/// 24 k(k-1)...(k-h+3) <= 24 k^(h-2) - 12 (h-2)(h-3) k^(h-3)
///                        + (h-2)(h-3)(h-4)(3h-7) k^(h-4)
/// ```
///
/// for `h >= 4` and `k >= h(h-1)/2`, in exact integers.
#[derive(Debug, Clone)]
pub struct FallingFactorialReport {
    pub h: u32,
    pub k: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
}

pub fn falling_factorial_upper_check(h: u32, k: u64) -> Result<FallingFactorialReport> {
    if !(4..=MAX_ALPHA_H).contains(&h) {
        return Err(Error::HOutOfRange {
            h,
            min: 4,
            max: MAX_ALPHA_H,
        });
    }
    let min = (h as u64) * (h as u64 - 1) / 2;
    if k < min {
        return Err(Error::SizeBelowMinimum { h, k, min });
    }
    let kb = BigInt::from(k);
    let hb = h as i64;
    let mut lhs = BigInt::from(24);
    for t in 0..(hb - 2) {
        lhs *= &kb - BigInt::from(t);
    }
    let rhs = BigInt::from(24) * kb.pow(h - 2)
        - BigInt::from(12 * (hb - 2) * (hb - 3)) * kb.pow(h - 3)
        + BigInt::from((hb - 2) * (hb - 3) * (hb - 4) * (3 * hb - 7)) * kb.pow(h - 4);
    let holds = lhs <= rhs;
    Ok(FallingFactorialReport {
        h,
        k,
        lhs,
        rhs,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_fold_root_is_closed_form() {
        let root = alpha_threshold(3).unwrap();
        let closed = (13f64.sqrt() - 1.0) / 6.0;
        assert!((root - closed).abs() < 1e-12, "{root} vs {closed}");
    }

    #[test]
    fn roots_at_third_decimal() {
        let expect = [
            (4, 404, 405),
            (5, 388, 389),
            (6, 377, 378),
            (7, 370, 371),
            (8, 365, 366),
            (9, 361, 362),
            (10, 358, 359),
            (11, 356, 357),
        ];
        for (h, floor3, ceil3) in expect {
            let root = alpha_threshold(h).unwrap();
            assert_eq!((root * 1000.0).floor() as i64, floor3, "h={h}");
            assert_eq!((root * 1000.0).ceil() as i64, ceil3, "h={h}");
        }
    }

    #[test]
    fn roots_decrease_toward_one_third() {
        let mut prev = 0.5;
        for h in 3..=60 {
            let root = alpha_threshold(h).unwrap();
            assert!(root < prev, "h={h}");
            assert!(root > 1.0 / 3.0, "h={h}");
            prev = root;
        }
    }

    #[test]
    fn root_profile_is_monotone() {
        let profile = density_root_profile(60).unwrap();
        assert_eq!(profile.roots.len(), 57);
        assert!(profile.all_in_range);
        assert!(profile.strictly_decreasing);
        assert!(profile.gap_decreasing);
        assert!(density_root_profile(4).is_err());
    }

    #[test]
    fn density_term_blows_up_near_root() {
        // approaching the root from above, the density term must grow
        // without bound; sample ever-closer densities and check monotone
        // growth of the overall threshold
        let root = alpha_threshold(4).unwrap();
        let mut prev = 0.0f64;
        for j in 1..=8 {
            let alpha = root + 10f64.powi(-j);
            let bound = order_threshold(4, alpha).unwrap();
            assert!(bound > prev, "j={j}: {bound} <= {prev}");
            prev = bound;
        }
        assert!(prev > 1e8, "threshold should explode near the root: {prev}");
    }

    #[test]
    fn table_rows_match_pinned_bounds() {
        let printed = [
            18807.96,
            37255.68,
            392935.41,
            1097319.46,
            2777127.76,
            11349436.56,
            33321849.20,
            57366134.14,
        ];
        let rows = threshold_table().unwrap();
        assert_eq!(rows.len(), 8);
        for (row, &want) in rows.iter().zip(&printed) {
            let rel = (row.order_bound - want).abs() / want;
            assert!(rel < 1e-3, "h={} got={} want={want}", row.h, row.order_bound);
        }
    }

    #[test]
    fn four_fold_autoscale_example() {
        let bound = order_threshold(4, 0.405).unwrap();
        assert!((bound - 18807.9585528).abs() < 1e-3, "{bound}");
        // 18808 clears the bound but is even; the first usable order is odd
        assert_eq!(minimal_order(4, 0.405).unwrap(), 18809);
        let k = (0.405f64 * 18809.0).ceil() as u64;
        assert_eq!(k, 7618);
        assert_eq!(minimal_order(5, 0.389).unwrap(), 37257);
    }

    #[test]
    fn legacy_forms_agree_with_density_term() {
        let l3 = legacy_order_threshold_h3(0.44).unwrap();
        assert!((l3 - 432.6923076923).abs() < 1e-6, "{l3}");
        let direct = 3.0 * 6.0 / (2.0 * density_polynomial(3, 0.44).unwrap());
        assert!((l3 - direct).abs() < 1e-9);

        let l4 = legacy_order_threshold_h4(0.405).unwrap();
        let m4 = order_threshold(4, 0.405).unwrap();
        assert!((l4 - m4).abs() < 1e-6, "{l4} vs {m4}");

        // the legacy four-fold form is the density term across the whole
        // admissible density range, not just near the root
        use rand::{Rng, SeedableRng};
        let root = alpha_threshold(4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6c65_6761_6379);
        for _ in 0..100 {
            let alpha = root + (1.0 - root) * rng.gen::<f64>().max(1e-12);
            let legacy = legacy_order_threshold_h4(alpha).unwrap();
            let (density_term, _) = order_threshold_terms(4, alpha).unwrap();
            assert!(
                (legacy - density_term).abs() <= 1e-9 * density_term.abs(),
                "alpha={alpha}: {legacy} vs {density_term}"
            );
        }
    }

    #[test]
    fn order_threshold_rejects_bad_density() {
        assert!(matches!(
            order_threshold(4, 0.3),
            Err(Error::DensityOutOfRange(_))
        ));
        assert!(matches!(
            order_threshold(4, 1.2),
            Err(Error::DensityOutOfRange(_))
        ));
        // any density in (root, 1] is legal; a set of 55% density is fine
        assert!(order_threshold(4, 0.55).is_ok());
        assert!(order_threshold(4, 1.0).is_ok());
        assert!(matches!(
            order_threshold(4, 0.36),
            Err(Error::DensityBelowRoot { h: 4, .. })
        ));
        assert!(matches!(
            order_threshold(3, 0.44),
            Err(Error::HOutOfRange { h: 3, .. })
        ));
    }

    #[test]
    fn chi_upper_examples() {
        let r = chi_upper_bound(138_957, 3).unwrap();
        assert_eq!(r.smallest_prime, 3);
        assert_eq!((r.c_numerator, r.c_denominator), (5, 13));
        assert_eq!(r.outcome, ChiUpperOutcome::Bound(53_454));

        let r = chi_upper_bound(200_005, 3).unwrap();
        assert_eq!(r.smallest_prime, 5);
        assert_eq!((r.c_numerator, r.c_denominator), (2, 5));
        assert_eq!(r.outcome, ChiUpperOutcome::Bound(80_023));

        let r = chi_upper_bound(6_175, 4).unwrap();
        assert_eq!(r.outcome, ChiUpperOutcome::Bound(2_491));

        let r = chi_upper_bound(1_241, 3).unwrap();
        assert_eq!(r.smallest_prime, 17);
        assert_eq!(r.outcome, ChiUpperOutcome::Bound(480));

        let r = chi_upper_bound(979, 3).unwrap();
        assert_eq!(
            r.outcome,
            ChiUpperOutcome::Inapplicable {
                minimum_order: 1_235
            }
        );
    }

    #[test]
    fn chi_upper_gates() {
        assert!(matches!(
            chi_upper_bound(138_958, 3),
            Err(Error::EvenOrder(138_958))
        ));
        // n = 1241 = 17 * 73, so h can be at most 73 - 2
        assert!(chi_upper_bound(1_241, 71).is_ok());
        assert!(matches!(
            chi_upper_bound(1_241, 72),
            Err(Error::HOutOfRange { max: 71, .. })
        ));
        assert!(matches!(
            chi_upper_bound(1_241, 2),
            Err(Error::HOutOfRange { min: 3, .. })
        ));
        // prime order: no admissible h at all
        assert!(chi_upper_bound(97, 3).is_err());
    }

    #[test]
    fn falling_factorial_examples() {
        let r = falling_factorial_upper_check(5, 10).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, BigInt::from(17_280));
        assert_eq!(r.rhs, BigInt::from(17_280));

        // h = 4 collapses to equality for every k
        for k in [6u64, 10, 100, 12345] {
            let r = falling_factorial_upper_check(4, k).unwrap();
            assert_eq!(r.lhs, r.rhs, "k={k}");
        }

        let r = falling_factorial_upper_check(6, 15).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, BigInt::from(786_240));
        assert_eq!(r.rhs, BigInt::from(788_400));

        let r = falling_factorial_upper_check(7, 21).unwrap();
        assert!(r.holds);

        let r = falling_factorial_upper_check(6, 200).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn falling_factorial_gates() {
        assert!(matches!(
            falling_factorial_upper_check(5, 9),
            Err(Error::SizeBelowMinimum {
                h: 5,
                k: 9,
                min: 10
            })
        ));
        assert!(matches!(
            falling_factorial_upper_check(3, 100),
            Err(Error::HOutOfRange { h: 3, .. })
        ));
    }

    #[test]
    fn holds_on_a_sweep() {
        for h in 4..=9u32 {
            let min = (h as u64) * (h as u64 - 1) / 2;
            for k in min..min + 40 {
                let r = falling_factorial_upper_check(h, k).unwrap();
                assert!(r.holds, "h={h} k={k}");
            }
        }
    }

    #[test]
    fn order_threshold_large_h_is_finite() {
        let root = alpha_threshold(40).unwrap();
        let bound = order_threshold(40, root + 1e-3).unwrap();
        assert!(bound.is_finite() && bound > 0.0);
    }
}
