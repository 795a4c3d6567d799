//! Partitions of point indices and a backtracking search for partitions whose
//! parts avoid a family of forbidden sets.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `n` for exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Disjoint nonempty parts covering `0..n`. Parts are sorted internally and
/// ordered by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<usize>>,
}

impl PartitionWitness {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut parts = parts;
        for part in parts.iter_mut() {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            part.sort_unstable();
            for &i in part.iter() {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {i} out of range for {n} points")));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {i} is not covered")));
        }
        parts.sort();
        Ok(PartitionWitness { parts })
    }

    /// The one-part partition.
    pub fn trivial(n: usize) -> Self {
        PartitionWitness { parts: vec![(0..n).collect()] }
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let r = labels.iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); r];
        for (i, &l) in labels.iter().enumerate() {
            parts[l].push(i);
        }
        parts.retain(|p| !p.is_empty());
        Self::new(labels.len(), parts)
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn masks(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.iter().fold(0u64, |m, &i| m | 1 << i)).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (j, p) in self.parts.iter().enumerate() {
            for &i in p {
                out[i] = j;
            }
        }
        out
    }

    /// True when no part repeats a color.
    pub fn is_rainbow(&self, colors: &[u32]) -> bool {
        self.parts.iter().all(|p| {
            let mut cs: Vec<u32> = p.iter().map(|&i| colors[i]).collect();
            cs.sort_unstable();
            cs.windows(2).all(|w| w[0] != w[1])
        })
    }
}

/// Drops sets contained in another set of the family.
pub fn maximal_sets(mut sets: Vec<u64>) -> Vec<u64> {
    sets.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    sets.dedup();
    let mut out: Vec<u64> = Vec::new();
    for s in sets {
        if !out.iter().any(|&m| s & !m == 0) {
            out.push(s);
        }
    }
    out
}

fn is_blocked(part: u64, forbidden: &[u64]) -> bool {
    forbidden.iter().any(|&m| part & !m == 0)
}

/// Visits every partition of `0..n` into exactly `r` nonempty parts whose
/// parts are not contained in any forbidden set, in restricted growth order.
/// With `colors`, parts must also be rainbow.
pub fn for_each_partition<F>(n: usize, r: usize, forbidden: &[u64], colors: Option<&[u32]>, mut visit: F) -> Result<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    if n > 64 {
        return Err(Error::TooLarge(format!("{n} points exceed the 64 supported by partition search")));
    }
    if r == 0 || r > n {
        return Ok(());
    }
    let forbidden = maximal_sets(forbidden.to_vec());
    let mut parts = vec![0u64; r];
    let mut state = Search { n, r, forbidden: &forbidden, colors, visit: &mut visit };
    let _ = state.assign(0, 0, &mut parts);
    Ok(())
}

struct Search<'a, F> {
    n: usize,
    r: usize,
    forbidden: &'a [u64],
    colors: Option<&'a [u32]>,
    visit: &'a mut F,
}

impl<F: FnMut(&[u64]) -> ControlFlow<()>> Search<'_, F> {
    fn assign(&mut self, i: usize, used: usize, parts: &mut [u64]) -> ControlFlow<()> {
        if i == self.n {
            if used == self.r && parts.iter().all(|&p| !is_blocked(p, self.forbidden)) {
                return (self.visit)(parts);
            }
            return ControlFlow::Continue(());
        }
        let remaining = self.n - i;
        if self.r - used > remaining {
            return ControlFlow::Continue(());
        }
        // A part that stays blocked even after absorbing every remaining
        // index can never become valid.
        let rest: u64 = if self.n == 64 && i == 0 { u64::MAX } else { ((1u64 << remaining) - 1) << i };
        if parts[..used].iter().any(|&p| is_blocked(p | rest, self.forbidden)) {
            return ControlFlow::Continue(());
        }
        let top = if used < self.r { used + 1 } else { used };
        for j in 0..top {
            if let Some(colors) = self.colors {
                let c = colors[i];
                let mut clash = false;
                let mut p = parts[j];
                while p != 0 {
                    let k = p.trailing_zeros() as usize;
                    if colors[k] == c {
                        clash = true;
                        break;
                    }
                    p &= p - 1;
                }
                if clash {
                    continue;
                }
            }
            parts[j] |= 1 << i;
            let next_used = if j == used { used + 1 } else { used };
            let flow = self.assign(i + 1, next_used, parts);
            parts[j] &= !(1 << i);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// First admissible partition in restricted growth order.
pub fn find_partition(n: usize, r: usize, forbidden: &[u64], colors: Option<&[u32]>) -> Result<Option<PartitionWitness>> {
    let mut found = None;
    for_each_partition(n, r, forbidden, colors, |parts| {
        found = Some(parts.to_vec());
        ControlFlow::Break(())
    })?;
    found.map(|masks| from_masks(n, &masks)).transpose()
}

/// Number of admissible partitions.
pub fn count_partitions(n: usize, r: usize, forbidden: &[u64], colors: Option<&[u32]>) -> Result<u64> {
    let mut count = 0;
    for_each_partition(n, r, forbidden, colors, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

pub fn from_masks(n: usize, masks: &[u64]) -> Result<PartitionWitness> {
    let parts = masks
        .iter()
        .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    PartitionWitness::new(n, parts)
}
