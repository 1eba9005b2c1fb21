//! Exhaustive subset scans and the exact critical-size search.
//!
//! Subsets of `Z_n` (n <= 24 here) are walked as bitmasks in colexicographic
//! order via the classic same-popcount successor trick, which makes long
//! scans restartable: the checkpoint is just the next mask.  Covering checks
//! for the scans are specialized double/triple loops over set bits; the
//! general search falls back to an addition table and a combination walk.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sumset_core::{combination_count, is_covering, GroupSpec, SubsetA};

use crate::report::{write_atomic, SCHEMA_VERSION};
use crate::rng::trial_rng;
use crate::strategies::{draw, Strategy};

/// Checkpoints are written every this many subsets (and on early stops).
pub const CHECKPOINT_EVERY: u64 = 1_000_000;

/// Next mask with the same popcount in increasing (= colex) order, or `None`
/// once it would need bit `n_bits` or higher.
pub fn gosper_next(v: u64, n_bits: u32) -> Option<u64> {
    debug_assert!(v != 0);
    let c = v & v.wrapping_neg();
    let r = match v.checked_add(c) {
        Some(r) => r,
        None => return None,
    };
    let next = (((r ^ v) >> 2) / c) | r;
    if next >> n_bits != 0 {
        None
    } else {
        Some(next)
    }
}

/// Do the sums of two distinct set bits of `mask` reach every residue mod n?
pub fn pair_sums_cover(mask: u64, n: u32) -> bool {
    let full = (1u64 << n) - 1;
    let mut members = [0u32; 64];
    let mut len = 0;
    let mut rest = mask;
    while rest != 0 {
        members[len] = rest.trailing_zeros();
        len += 1;
        rest &= rest - 1;
    }
    let mut cover = 0u64;
    for i in 0..len {
        for j in i + 1..len {
            let mut s = members[i] + members[j];
            if s >= n {
                s -= n;
            }
            cover |= 1u64 << s;
        }
        if cover == full {
            return true;
        }
    }
    cover == full
}

/// Same for sums of three distinct set bits.
pub fn triple_sums_cover(mask: u64, n: u32) -> bool {
    let full = (1u64 << n) - 1;
    let mut members = [0u32; 64];
    let mut len = 0;
    let mut rest = mask;
    while rest != 0 {
        members[len] = rest.trailing_zeros();
        len += 1;
        rest &= rest - 1;
    }
    let mut cover = 0u64;
    for i in 0..len {
        for j in i + 1..len {
            let ij = members[i] + members[j];
            for l in j + 1..len {
                let mut s = ij + members[l];
                if s >= n {
                    s -= n;
                }
                if s >= n {
                    s -= n;
                }
                cover |= 1u64 << s;
            }
        }
        if cover == full {
            return true;
        }
    }
    cover == full
}

/// Resumable scan state, serialized to the `--checkpoint` file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub schema: u32,
    pub kind: String,
    pub n: u32,
    pub size: u32,
    /// Next mask to process.
    pub next_mask: u64,
    pub checked: u64,
    pub failures: Vec<u64>,
}

pub fn load_checkpoint(path: &Path, kind: &str, n: u32, size: u32) -> Result<Option<ScanCheckpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let state: ScanCheckpoint = serde_json::from_str(&text)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    if state.kind != kind || state.n != n || state.size != size {
        bail!(
            "checkpoint {} is for {} n={} size={}, not {kind} n={n} size={size}",
            path.display(),
            state.kind,
            state.n,
            state.size
        );
    }
    Ok(Some(state))
}

pub fn save_checkpoint(path: &Path, state: &ScanCheckpoint) -> Result<()> {
    let mut text = serde_json::to_string(state)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub n: u32,
    pub size: u32,
    pub h: u32,
    pub total: u64,
    pub checked: u64,
    pub complete: bool,
    pub failures: Vec<u64>,
}

/// Scans every size-`size` subset of `Z_n` and records the ones whose h-fold
/// distinct sums miss an element.  `h` must be 2 or 3.  With `max_steps` the
/// scan stops early (checkpointing first) so long runs can be sharded; a
/// finished run removes its checkpoint file.
pub fn run_subset_scan(
    n: u32,
    size: u32,
    h: u32,
    checkpoint: Option<&Path>,
    max_steps: Option<u64>,
) -> Result<ScanOutcome> {
    if !(1..=24).contains(&n) {
        bail!("scan supports n in 1..=24, got {n}");
    }
    if size == 0 || size > n {
        bail!("subset size {size} outside 1..={n}");
    }
    let kind = match h {
        2 => "pair-scan",
        3 => "triple-scan",
        _ => bail!("scan supports h = 2 or 3, got {h}"),
    };
    let total = combination_count(n as u64, size, u64::MAX)? as u64;

    let resumed = match checkpoint {
        Some(path) => load_checkpoint(path, kind, n, size)?,
        None => None,
    };
    let (mut mask, mut checked, mut failures) = match resumed {
        Some(state) => (Some(state.next_mask), state.checked, state.failures),
        None => (Some((1u64 << size) - 1), 0, Vec::new()),
    };

    let mut steps = 0u64;
    while let Some(m) = mask {
        if let Some(limit) = max_steps {
            if steps >= limit {
                if let Some(path) = checkpoint {
                    save_checkpoint(
                        path,
                        &ScanCheckpoint {
                            schema: SCHEMA_VERSION,
                            kind: kind.to_string(),
                            n,
                            size,
                            next_mask: m,
                            checked,
                            failures: failures.clone(),
                        },
                    )?;
                }
                return Ok(ScanOutcome {
                    n,
                    size,
                    h,
                    total,
                    checked,
                    complete: false,
                    failures,
                });
            }
        }
        let covers = match h {
            2 => pair_sums_cover(m, n),
            _ => triple_sums_cover(m, n),
        };
        if !covers {
            failures.push(m);
        }
        checked += 1;
        steps += 1;
        mask = gosper_next(m, n);
        if checked % CHECKPOINT_EVERY == 0 {
            if let (Some(path), Some(next)) = (checkpoint, mask) {
                save_checkpoint(
                    path,
                    &ScanCheckpoint {
                        schema: SCHEMA_VERSION,
                        kind: kind.to_string(),
                        n,
                        size,
                        next_mask: next,
                        checked,
                        failures: failures.clone(),
                    },
                )?;
            }
        }
    }

    if let Some(path) = checkpoint {
        if path.exists() {
            std::fs::remove_file(path)
                .with_context(|| format!("removing finished checkpoint {}", path.display()))?;
        }
    }
    Ok(ScanOutcome {
        n,
        size,
        h,
        total,
        checked,
        complete: true,
        failures,
    })
}

pub fn mask_to_indices(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as u64);
        rest &= rest - 1;
    }
    out
}

/// Result of a critical-size search: the smallest size `m` such that every
/// subset with at least `m` elements has full h-fold distinct sums.
#[derive(Debug, Clone)]
pub struct CriticalOutcome {
    pub h: u32,
    /// `None` means no size works (even the whole group fails).
    pub value: Option<u64>,
    pub exact: bool,
    pub largest_failing_size: Option<u64>,
    pub witness: Option<Vec<u64>>,
    pub subsets_checked: u64,
    /// Greedy mode only: the bracket `[lower, upper]` the search narrowed to.
    pub lower: Option<u64>,
    pub upper: Option<u64>,
}

/// Dense addition table `add[i][j] = index of e_i + e_j`, flattened.
struct AddTable {
    n: usize,
    sums: Vec<u32>,
}

impl AddTable {
    fn new(group: &GroupSpec) -> Result<AddTable> {
        let n = group.order() as usize;
        if n > 2048 {
            bail!("exhaustive search supports order <= 2048, got {n}");
        }
        let mut sums = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let s = group.add_indices(i, j) as u32;
                sums[i * n + j] = s;
                sums[j * n + i] = s;
            }
        }
        Ok(AddTable { n, sums })
    }

    #[inline]
    fn add(&self, i: u32, j: u32) -> u32 {
        self.sums[i as usize * self.n + j as usize]
    }
}

/// Do the h-fold distinct sums of `members` cover all of `0..n`?
fn members_cover(table: &AddTable, members: &[u32], h: u32, zero: u32) -> bool {
    let n = table.n;
    let mut seen = vec![false; n];
    let mut remaining = n;
    // depth-first combination walk with running partial sums
    let mut stack_pos = vec![0usize; h as usize];
    let mut stack_sum = vec![0u32; h as usize + 1];
    stack_sum[0] = zero;
    let mut depth = 0usize;
    let m = members.len();
    let h = h as usize;
    if m < h {
        return false;
    }
    loop {
        if stack_pos[depth] + (h - depth - 1) >= m {
            // no room for the remaining picks; backtrack
            if depth == 0 {
                return remaining == 0;
            }
            depth -= 1;
            stack_pos[depth] += 1;
            continue;
        }
        let sum = table.add(stack_sum[depth], members[stack_pos[depth]]);
        if depth + 1 == h {
            if !seen[sum as usize] {
                seen[sum as usize] = true;
                remaining -= 1;
                if remaining == 0 {
                    return true;
                }
            }
            stack_pos[depth] += 1;
        } else {
            stack_sum[depth + 1] = sum;
            stack_pos[depth + 1] = stack_pos[depth] + 1;
            depth += 1;
        }
    }
}

/// Exact critical size by downward scan: starting from the whole group, find
/// the largest size with a non-covering subset; the answer is one more.  The
/// first failing size ends the scan, so the cost is concentrated at sizes
/// just above the answer.
pub fn critical_exhaustive(group: &GroupSpec, h: u32, guard: u64) -> Result<CriticalOutcome> {
    let n = group.order();
    let table = AddTable::new(group)?;
    let zero = group.index_of(&group.zero()) as u32;
    let mut subsets_checked = 0u64;

    for m in (1..=n).rev() {
        combination_count(n, m.try_into().unwrap_or(u32::MAX), guard)?;
        // walk all size-m index subsets with a lexicographic odometer
        let m_us = m as usize;
        let mut idx: Vec<u32> = (0..m_us as u32).collect();
        loop {
            subsets_checked += 1;
            if !members_cover(&table, &idx, h, zero) {
                let witness: Vec<u64> = idx.iter().map(|&i| i as u64).collect();
                let value = if m == n { None } else { Some(m + 1) };
                return Ok(CriticalOutcome {
                    h,
                    value,
                    exact: true,
                    largest_failing_size: Some(m),
                    witness: Some(witness),
                    subsets_checked,
                    lower: None,
                    upper: None,
                });
            }
            // advance the odometer
            let mut pos = m_us;
            let mut advanced = false;
            while pos > 0 {
                pos -= 1;
                if idx[pos] as u64 != pos as u64 + n - m {
                    idx[pos] += 1;
                    for t in pos + 1..m_us {
                        idx[t] = idx[t - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    // unreachable for any group of order >= 2: sizes below h always fail
    bail!("scan exhausted all sizes without finding a non-covering subset")
}

/// Randomized bracket for the critical size on groups too large to scan.
/// The lower end comes from explicit non-covering witnesses (every subset of
/// a proper coset fails, plus whatever random search finds); the upper end
/// is the whole group when it covers.  Labeled non-exact.
pub fn critical_greedy(group: &GroupSpec, h: u32, trials: u32, seed: u64) -> Result<CriticalOutcome> {
    let n = group.order();
    let mut subsets_checked = 0u64;
    let mut best_fail: Option<(u64, Vec<u64>)> = None;

    // coset witness: all of {a : a_1 = 1 mod p} for the smallest prime p of
    // the first factor; its h-fold sums stay inside a single coset
    let p = {
        let u = group.factors()[0];
        let mut d = 2;
        while d * d <= u && u % d != 0 {
            d += 1;
        }
        if u % d == 0 {
            d
        } else {
            u
        }
    };
    if n / p > 1 {
        let coset: Vec<u64> = (0..n)
            .filter(|&i| group.element_at(i as usize).coords()[0] % p == 1)
            .collect();
        best_fail = Some((coset.len() as u64, coset));
    }

    let whole = SubsetA::from_indices(group, &(0..n).collect::<Vec<_>>())?;
    let group_covers = is_covering(&whole, h)?;
    subsets_checked += 1;

    let mut trial_index = 0u64;
    loop {
        let next_size = best_fail.as_ref().map_or(1, |(s, _)| s + 1);
        if next_size >= n {
            break;
        }
        let mut found = false;
        for _ in 0..trials {
            let mut rng = trial_rng(seed, trial_index);
            trial_index += 1;
            let strategy = if trial_index % 2 == 0 {
                Strategy::Random
            } else {
                Strategy::CosetUnion
            };
            let a = draw(group, next_size, strategy, &mut rng)?;
            subsets_checked += 1;
            if !is_covering(&a, h)? {
                best_fail = Some((next_size, a.indices().to_vec()));
                found = true;
                break;
            }
        }
        if !found {
            break;
        }
    }

    let lower = best_fail.as_ref().map_or(1, |(s, _)| s + 1);
    let upper = if group_covers { Some(n) } else { None };
    Ok(CriticalOutcome {
        h,
        value: None,
        exact: false,
        largest_failing_size: best_fail.as_ref().map(|(s, _)| *s),
        witness: best_fail.map(|(_, w)| w),
        subsets_checked,
        lower: Some(lower),
        upper,
    })
}
