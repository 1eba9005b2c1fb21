//! Characters of a finite abelian group and subset character sums.
//!
//! With factors `u_1, .., u_d` and exponent `u = lcm(u_j)`, the character
//! indexed by `r = (r_1, .., r_d)` sends `y` to `e(t / u)` where
//! `t = sum_j r_j y_j (u / u_j) mod u` and `e(x) = exp(2 pi i x)`.  The phase
//! index `t` is computed in exact integer arithmetic; floating point enters
//! only through a precomputed table of the `u`-th roots of unity, so every
//! audit here carries an explicit tolerance instead of pretending to be
//! exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, SubsetA};

/// Absolute tolerance per group element for float character accumulations.
pub const CHARACTER_SUM_TOL: f64 = 1e-9;

pub struct CharacterTable {
    group: GroupSpec,
    exponent: u64,
    /// `e(t / exponent)` for `t` in `0..exponent`.
    roots: Vec<Complex64>,
    /// `exponent / u_j` per dimension.
    cofactors: Vec<u64>,
}

impl CharacterTable {
    pub fn new(group: &GroupSpec) -> Self {
        let u = group.exponent();
        let step = std::f64::consts::TAU / u as f64;
        let roots = (0..u)
            .map(|t| Complex64::from_polar(1.0, step * t as f64))
            .collect();
        let cofactors = group.factors().iter().map(|&uj| u / uj).collect();
        CharacterTable {
            group: group.clone(),
            exponent: u,
            roots,
            cofactors,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The exact phase index `t` with `chi_r(y) = e(t / exponent)`.
    pub fn phase_index(&self, chr: usize, g: usize) -> u64 {
        let factors = self.group.factors();
        let r = self.group.element_at(chr);
        let y = self.group.element_at(g);
        let u = self.exponent as u128;
        let mut t: u128 = 0;
        for (j, (&rj, &yj)) in r.coords().iter().zip(y.coords()).enumerate() {
            let partial = (rj as u128 * yj as u128) % factors[j] as u128;
            t = (t + partial * self.cofactors[j] as u128) % u;
        }
        t as u64
    }

    pub fn chi(&self, chr: usize, g: usize) -> Complex64 {
        self.roots[self.phase_index(chr, g) as usize]
    }

    /// `S_A(chr) = sum over x in A of chi_chr(x)`.
    pub fn subset_sum(&self, chr: usize, a: &SubsetA) -> Result<Complex64> {
        if a.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for &x in a.indices() {
            s += self.chi(chr, x as usize);
        }
        Ok(s)
    }
}

/// All character sums of one subset, with the largest nontrivial magnitude.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub k: u64,
    pub values: Vec<Complex64>,
    pub max_nontrivial: f64,
    pub argmax: u64,
}

pub fn spectrum(a: &SubsetA) -> Result<SpectrumReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let table = CharacterTable::new(a.group());
    let n = a.group().order() as usize;
    let mut values = Vec::with_capacity(n);
    let mut max_nontrivial = 0.0f64;
    let mut argmax = 0u64;
    for chr in 0..n {
        let s = table.subset_sum(chr, a)?;
        if chr > 0 {
            let mag = s.norm();
            if mag > max_nontrivial {
                max_nontrivial = mag;
                argmax = chr as u64;
            }
        }
        values.push(s);
    }
    Ok(SpectrumReport {
        k: a.k(),
        values,
        max_nontrivial,
        argmax,
    })
}

/// Checks `sum_g chi_a(g) * conj(chi_b(g)) = n * [a == b]` over all pairs.
#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn orthogonality_audit(group: &GroupSpec) -> OrthogonalityReport {
    let table = CharacterTable::new(group);
    let n = group.order() as usize;
    let mut max_dev = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for g in 0..n {
                s += table.chi(a, g) * table.chi(b, g).conj();
            }
            let expect = if a == b { n as f64 } else { 0.0 };
            max_dev = max_dev.max((s - Complex64::new(expect, 0.0)).norm());
        }
    }
    OrthogonalityReport {
        max_deviation: max_dev,
        pass: max_dev <= CHARACTER_SUM_TOL * n as f64,
    }
}

/// Power identity: `sum over nontrivial chr of |S_A(chr)|^2 = k(n - k)`.
#[derive(Debug, Clone)]
pub struct ParsevalReport {
    pub lhs_power: f64,
    pub rhs_exact: u128,
    pub abs_error: f64,
    pub pass: bool,
}

pub fn parseval_audit(a: &SubsetA) -> Result<ParsevalReport> {
    let report = spectrum(a)?;
    let n = a.group().order();
    let k = a.k();
    let lhs_power: f64 = report.values[1..].iter().map(|s| s.norm_sqr()).sum();
    let rhs_exact = k as u128 * (n - k) as u128;
    let abs_error = (lhs_power - rhs_exact as f64).abs();
    // power sums n*k terms each of size <= k^2; scale the per-term tolerance
    let tol = CHARACTER_SUM_TOL * (n as f64) * (1.0 + k as f64 * k as f64);
    Ok(ParsevalReport {
        lhs_power,
        rhs_exact,
        abs_error,
        pass: abs_error <= tol,
    })
}

/// For odd group order, no subset has a nontrivial character sum larger than
/// `n / 3`; equality needs an order-3 character constant on `A`'s coset
/// pieces.
#[derive(Debug, Clone)]
pub struct SpectrumMaxReport {
    pub max: f64,
    pub bound: f64,
    pub argmax: u64,
    pub pass: bool,
}

pub fn spectrum_max_audit(a: &SubsetA) -> Result<SpectrumMaxReport> {
    let n = a.group().order();
    if n % 2 == 0 {
        return Err(Error::EvenOrder(n));
    }
    let report = spectrum(a)?;
    let bound = n as f64 / 3.0;
    Ok(SpectrumMaxReport {
        max: report.max_nontrivial,
        bound,
        argmax: report.argmax,
        pass: report.max_nontrivial <= bound + CHARACTER_SUM_TOL * n as f64,
    })
}

fn require_odd_arc(d: u64) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::BadArcLength(d));
    }
    Ok(())
}

/// `Y / (2 sin(pi / 2d))`: the largest possible magnitude of
/// `sum_t y_t e(t / d)` over weights `0 <= y_t <= Y`, for odd `d`.
///
/// Odd order is essential, not cosmetic: for `d = 4` the window `1 + i`
/// already has magnitude `sqrt 2`, above the closed form's `1.307`.
pub fn arc_sum_bound(y_max: u64, d: u64) -> Result<f64> {
    require_odd_arc(d)?;
    Ok(y_max as f64 / (2.0 * (std::f64::consts::PI / (2.0 * d as f64)).sin()))
}

/// `sum_t weights[t] * e(t / d)` with `d = weights.len()`, odd.
pub fn weighted_root_sum(weights: &[u64]) -> Result<Complex64> {
    let d = weights.len() as u64;
    require_odd_arc(d)?;
    let step = std::f64::consts::TAU / d as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for (t, &w) in weights.iter().enumerate() {
        s += Complex64::from_polar(w as f64, step * t as f64);
    }
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct ArcSumReport {
    pub magnitude: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks one weight vector against [`arc_sum_bound`] with cap `y_max`.
pub fn arc_sum_audit(weights: &[u64], y_max: u64) -> Result<ArcSumReport> {
    for (t, &w) in weights.iter().enumerate() {
        if w > y_max {
            return Err(Error::WeightOutOfRange {
                position: t,
                value: w,
                max: y_max,
            });
        }
    }
    let d = weights.len() as u64;
    let magnitude = weighted_root_sum(weights)?.norm();
    let bound = arc_sum_bound(y_max, d)?;
    Ok(ArcSumReport {
        magnitude,
        bound,
        pass: magnitude <= bound + CHARACTER_SUM_TOL * d as f64,
    })
}

/// The largest magnitude of a sum of consecutive `d`-th roots of unity and a
/// window length attaining it; it equals `arc_sum_bound(1, d)` exactly, at
/// window length `(d +- 1) / 2`.
pub fn arc_max_consecutive(d: u64) -> Result<(f64, u64)> {
    require_odd_arc(d)?;
    let mut best = (0.0f64, 0u64);
    for w in 1..d {
        // |sum_{t<w} e(t/d)| = sin(pi w / d) / sin(pi / d)
        let mag = (std::f64::consts::PI * w as f64 / d as f64).sin()
            / (std::f64::consts::PI / d as f64).sin();
        if mag > best.0 {
            best = (mag, w);
        }
    }
    Ok(best)
}
