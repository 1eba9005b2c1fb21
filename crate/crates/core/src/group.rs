//! Finite abelian groups given as explicit products of cyclic factors.
//!
//! A group is described by its factor list `[u_1, ..., u_s]` with every
//! `u_j >= 2`; elements are coordinate tuples `(y_1, ..., y_s)` with
//! `0 <= y_j < u_j`.  Everything downstream works with the dense row-major
//! index `y_1 * u_2 * ... * u_s + ... + y_s`, so a function on the group is a
//! flat vector of length `n = u_1 * ... * u_s`.  Factor lists are taken as
//! given: `[3, 9]` and `[9, 3]` are different specs for isomorphic groups and
//! no invariant-factor normalization is attempted.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported group order; keeps dense indices well inside `usize`.
pub const MAX_ORDER: u64 = 1 << 32;

/// A finite abelian group `Z_{u_1} x ... x Z_{u_s}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    exponent: u64,
}

impl GroupSpec {
    pub fn new(factors: &[u64]) -> Result<GroupSpec> {
        if factors.is_empty() {
            return Err(Error::FactorTooSmall(0));
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &u in factors {
            if u < 2 {
                return Err(Error::FactorTooSmall(u));
            }
            order = order.checked_mul(u).ok_or(Error::OrderOverflow)?;
            if order > MAX_ORDER {
                return Err(Error::OrderOverflow);
            }
            exponent = exponent.lcm(&u);
        }
        let mut strides = vec![1u64; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1];
        }
        Ok(GroupSpec {
            factors: factors.to_vec(),
            strides,
            order,
            exponent,
        })
    }

    /// Parses a factor list like `"18809"` or `"3x9x5"` (`,` also separates).
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut factors = Vec::new();
        for piece in text.split(|c| c == 'x' || c == ',') {
            let piece = piece.trim();
            let u: u64 = piece
                .parse()
                .map_err(|_| Error::FactorTooSmall(0))?;
            factors.push(u);
        }
        GroupSpec::new(&factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Builds an element from a coordinate tuple, reducing each coordinate
    /// modulo its factor.
    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        let reduced = coords
            .iter()
            .zip(&self.factors)
            .map(|(&y, &u)| y % u)
            .collect();
        Ok(Element { coords: reduced })
    }

    pub fn zero(&self) -> Element {
        Element {
            coords: vec![0; self.factors.len()],
        }
    }

    pub fn index_of(&self, e: &Element) -> usize {
        debug_assert_eq!(e.coords.len(), self.factors.len());
        let mut idx = 0u64;
        for (y, stride) in e.coords.iter().zip(&self.strides) {
            idx += y * stride;
        }
        idx as usize
    }

    pub fn element_at(&self, index: usize) -> Element {
        debug_assert!((index as u64) < self.order);
        let mut coords = Vec::with_capacity(self.factors.len());
        let mut rest = index as u64;
        for (&u, &stride) in self.factors.iter().zip(&self.strides) {
            coords.push((rest / stride) % u);
            rest %= stride;
        }
        Element { coords }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        if a.coords.len() != self.factors.len() || b.coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: a.coords.len().max(b.coords.len()),
            });
        }
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &u)| {
                let s = x + y;
                if s >= u {
                    s - u
                } else {
                    s
                }
            })
            .collect();
        Ok(Element { coords })
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        if a.coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: a.coords.len(),
            });
        }
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&y, &u)| if y == 0 { 0 } else { u - y })
            .collect();
        Ok(Element { coords })
    }

    /// Coordinate-wise `lambda * a` with each coordinate reduced modulo its
    /// factor.
    pub fn scale(&self, lambda: u64, a: &Element) -> Result<Element> {
        if a.coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: a.coords.len(),
            });
        }
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&y, &u)| ((y as u128 * lambda as u128) % u as u128) as u64)
            .collect();
        Ok(Element { coords })
    }

    /// Index-level addition; the workhorse for dense loops.
    #[inline]
    pub fn add_indices(&self, i: usize, j: usize) -> usize {
        if self.factors.len() == 1 {
            let n = self.order as usize;
            let t = i + j;
            return if t >= n { t - n } else { t };
        }
        let mut out = 0u64;
        for (&u, &stride) in self.factors.iter().zip(&self.strides) {
            let a = (i as u64 / stride) % u;
            let b = (j as u64 / stride) % u;
            let mut c = a + b;
            if c >= u {
                c -= u;
            }
            out += c * stride;
        }
        out as usize
    }
}

/// An element of a [`GroupSpec`], stored as reduced coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    coords: Vec<u64>,
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|y| y.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A duplicate-free subset of a group, kept sorted by dense index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetA {
    group: GroupSpec,
    indices: Vec<u64>,
}

impl SubsetA {
    pub fn new(group: &GroupSpec, elements: &[Element]) -> Result<SubsetA> {
        let mut indices = Vec::with_capacity(elements.len());
        for e in elements {
            if e.coords.len() != group.rank() {
                return Err(Error::DimensionMismatch {
                    expected: group.rank(),
                    got: e.coords.len(),
                });
            }
            for (pos, (&y, &u)) in e.coords.iter().zip(group.factors()).enumerate() {
                if y >= u {
                    return Err(Error::CoordinateOutOfRange {
                        position: pos,
                        value: y,
                        modulus: u,
                    });
                }
            }
            indices.push(group.index_of(e) as u64);
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateInSubset);
        }
        Ok(SubsetA {
            group: group.clone(),
            indices,
        })
    }

    pub fn from_indices(group: &GroupSpec, indices: &[u64]) -> Result<SubsetA> {
        let mut sorted = indices.to_vec();
        for &i in &sorted {
            if i >= group.order() {
                return Err(Error::CoordinateOutOfRange {
                    position: 0,
                    value: i,
                    modulus: group.order(),
                });
            }
        }
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateInSubset);
        }
        Ok(SubsetA {
            group: group.clone(),
            indices: sorted,
        })
    }

    /// Parses the line-oriented set format: one element per line, coordinates
    /// as comma-separated decimal integers, `#` starts a comment, blank lines
    /// are skipped.  Coordinates must already lie in range (no reduction), so
    /// that duplicate detection never depends on arithmetic.
    pub fn parse(group: &GroupSpec, text: &str) -> Result<SubsetA> {
        let mut indices = Vec::new();
        let mut seen: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut coords = Vec::with_capacity(group.rank());
            for piece in line.split(',') {
                let y: u64 = piece.trim().parse().map_err(|_| Error::SetFileSyntax {
                    line: lineno + 1,
                    reason: format!("bad coordinate {piece:?}"),
                })?;
                coords.push(y);
            }
            if coords.len() != group.rank() {
                return Err(Error::SetFileSyntax {
                    line: lineno + 1,
                    reason: format!(
                        "expected {} coordinates, got {}",
                        group.rank(),
                        coords.len()
                    ),
                });
            }
            for (pos, (&y, &u)) in coords.iter().zip(group.factors()).enumerate() {
                if y >= u {
                    return Err(Error::SetFileSyntax {
                        line: lineno + 1,
                        reason: format!("coordinate {y} at position {pos} is outside [0, {u})"),
                    });
                }
            }
            let e = group.element(&coords)?;
            let idx = group.index_of(&e) as u64;
            if seen.insert(idx, lineno + 1).is_some() {
                return Err(Error::DuplicateElement { line: lineno + 1 });
            }
            indices.push(idx);
        }
        if indices.is_empty() {
            return Err(Error::EmptySet);
        }
        SubsetA::from_indices(group, &indices)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn k(&self) -> u64 {
        self.indices.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn elements(&self) -> Vec<Element> {
        self.indices
            .iter()
            .map(|&i| self.group.element_at(i as usize))
            .collect()
    }

    pub fn contains_index(&self, idx: u64) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    /// The translate `A + g`.
    pub fn translate(&self, g: &Element) -> Result<SubsetA> {
        let gi = self.group.index_of(g);
        let shifted: Vec<u64> = self
            .indices
            .iter()
            .map(|&i| self.group.add_indices(i as usize, gi) as u64)
            .collect();
        SubsetA::from_indices(&self.group, &shifted)
    }
}

/// A nonnegative integer-valued function on a group, stored densely.
///
/// Entries live in `u128` until a product could overflow, then promote to
/// arbitrary precision.  Counts are always exact; no floating point.
#[derive(Debug, Clone)]
pub struct CountVector {
    group: GroupSpec,
    pub(crate) store: CountStore,
}

#[derive(Debug, Clone)]
pub(crate) enum CountStore {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

impl CountVector {
    pub fn zeros(group: &GroupSpec) -> CountVector {
        CountVector {
            group: group.clone(),
            store: CountStore::Small(vec![0; group.order() as usize]),
        }
    }

    pub fn from_u128(group: &GroupSpec, counts: Vec<u128>) -> Result<CountVector> {
        if counts.len() != group.order() as usize {
            return Err(Error::DimensionMismatch {
                expected: group.order() as usize,
                got: counts.len(),
            });
        }
        Ok(CountVector {
            group: group.clone(),
            store: CountStore::Small(counts),
        })
    }

    pub fn from_big(group: &GroupSpec, counts: Vec<BigUint>) -> Result<CountVector> {
        if counts.len() != group.order() as usize {
            return Err(Error::DimensionMismatch {
                expected: group.order() as usize,
                got: counts.len(),
            });
        }
        Ok(CountVector {
            group: group.clone(),
            store: CountStore::Big(counts),
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.group.order() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> BigUint {
        match &self.store {
            CountStore::Small(v) => BigUint::from(v[index]),
            CountStore::Big(v) => v[index].clone(),
        }
    }

    pub fn get_u128(&self, index: usize) -> Option<u128> {
        match &self.store {
            CountStore::Small(v) => Some(v[index]),
            CountStore::Big(v) => v[index].to_u128(),
        }
    }

    pub(crate) fn as_small(&self) -> Option<&[u128]> {
        match &self.store {
            CountStore::Small(v) => Some(v),
            CountStore::Big(_) => None,
        }
    }

    pub fn mass(&self) -> BigUint {
        match &self.store {
            CountStore::Small(v) => {
                let mut acc = BigUint::zero();
                let mut partial: u128 = 0;
                for &x in v {
                    match partial.checked_add(x) {
                        Some(s) => partial = s,
                        None => {
                            acc += BigUint::from(partial);
                            partial = x;
                        }
                    }
                }
                acc + BigUint::from(partial)
            }
            CountStore::Big(v) => v.iter().sum(),
        }
    }

    pub fn support_size(&self) -> usize {
        match &self.store {
            CountStore::Small(v) => v.iter().filter(|&&x| x != 0).count(),
            CountStore::Big(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    pub fn support_indices(&self) -> Vec<usize> {
        match &self.store {
            CountStore::Small(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, _)| i)
                .collect(),
            CountStore::Big(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn is_positive_everywhere(&self) -> bool {
        match &self.store {
            CountStore::Small(v) => v.iter().all(|&x| x != 0),
            CountStore::Big(v) => v.iter().all(|x| !x.is_zero()),
        }
    }

    pub fn entry_decimal(&self, index: usize) -> String {
        match &self.store {
            CountStore::Small(v) => v[index].to_string(),
            CountStore::Big(v) => v[index].to_string(),
        }
    }

    pub(crate) fn promote_to_big(&self) -> Vec<BigUint> {
        match &self.store {
            CountStore::Small(v) => v.iter().map(|&x| BigUint::from(x)).collect(),
            CountStore::Big(v) => v.clone(),
        }
    }
}

impl PartialEq for CountVector {
    fn eq(&self, other: &Self) -> bool {
        if self.group != other.group {
            return false;
        }
        match (&self.store, &other.store) {
            (CountStore::Small(a), CountStore::Small(b)) => a == b,
            (CountStore::Big(a), CountStore::Big(b)) => a == b,
            (CountStore::Small(a), CountStore::Big(b)) | (CountStore::Big(b), CountStore::Small(a)) => a
                .iter()
                .zip(b.iter())
                .all(|(&x, y)| BigUint::from(x) == *y),
        }
    }
}

impl Eq for CountVector {}

/// The indicator function `1_A` of a nonempty subset.
pub fn indicator(a: &SubsetA) -> Result<CountVector> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut counts = vec![0u128; a.group().order() as usize];
    for &i in a.indices() {
        counts[i as usize] = 1;
    }
    CountVector::from_u128(a.group(), counts)
}

/// The counting function of the dilate `lambda * A`: entry at `y` is
/// `#{a in A : lambda * a = y}`.  Mass is always `|A|`; distinct elements
/// may collide when `gcd(lambda, exponent) > 1`.
pub fn dilate_count(a: &SubsetA, lambda: u64) -> Result<CountVector> {
    if lambda == 0 {
        return Err(Error::ZeroDilation);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = a.group();
    let mut counts = vec![0u128; group.order() as usize];
    for &i in a.indices() {
        let e = group.element_at(i as usize);
        let scaled = group.scale(lambda, &e)?;
        counts[group.index_of(&scaled)] += 1;
    }
    CountVector::from_u128(group, counts)
}
