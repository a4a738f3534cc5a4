//! Hankel-pattern index sets built over a greedy perfect difference
//! sequence. Pairwise sums inside the sequence are distinct, which makes
//! the induced anti-diagonal supports large but combinatorially thin.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::khintchine::sigma::IndexSet;

/// Greedy sequence with all pairwise sums distinct, starting at 0:
/// 0, 1, 3, 7, 12, 20, 30, 44, ...
pub fn mian_chowla(limit: usize) -> Vec<u64> {
    let mut seq: Vec<u64> = Vec::with_capacity(limit);
    let mut sums: HashSet<u64> = HashSet::new();
    let mut next = 0u64;
    while seq.len() < limit {
        let ok = seq.iter().all(|&a| !sums.contains(&(a + next)))
            && !sums.contains(&(next + next));
        if ok {
            for &a in &seq {
                sums.insert(a + next);
            }
            sums.insert(next + next);
            seq.push(next);
        }
        next += 1;
    }
    seq
}

/// Positions (i, j) in an n x n grid whose anti-diagonal index i + j lies
/// in the difference sequence.
pub fn hankel_index_set(n: usize) -> Result<IndexSet> {
    if n == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    // Members up to 2(n-1) suffice; the sequence grows superlinearly so a
    // generous prefix is cheap.
    let mut count = 8;
    let mut members = mian_chowla(count);
    while *members.last().unwrap() < 2 * (n as u64 - 1) && count <= 8 * n {
        count *= 2;
        members = mian_chowla(count);
    }
    let keep: HashSet<u64> = members.into_iter().collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if keep.contains(&((i + j) as u64)) {
                pairs.push((i, j));
            }
        }
    }
    IndexSet::new(n, n, pairs)
}

#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub n: usize,
    pub size: usize,
    /// size / n^{3/2}
    pub ratio: f64,
}

/// Set sizes against the n^{3/2} growth scale.
pub fn sidon_growth(ns: &[usize]) -> Result<Vec<GrowthRow>> {
    ns.iter()
        .map(|&n| {
            let set = hankel_index_set(n)?;
            let size = set.len();
            Ok(GrowthRow {
                n,
                size,
                ratio: size as f64 / (n as f64).powf(1.5),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_prefix() {
        assert_eq!(mian_chowla(8), vec![0, 1, 3, 7, 12, 20, 30, 44]);
    }

    #[test]
    fn pairwise_sums_distinct() {
        let seq = mian_chowla(16);
        let mut sums = HashSet::new();
        for a in 0..seq.len() {
            for b in a..seq.len() {
                assert!(sums.insert(seq[a] + seq[b]), "collision at {a},{b}");
            }
        }
    }

    #[test]
    fn small_grid_size() {
        // n = 4: anti-diagonals 0,1,3 are kept, with 1, 2, 4 cells.
        let set = hankel_index_set(4).unwrap();
        assert_eq!(set.len(), 7);
        assert!(set.contains(0, 0));
        assert!(set.contains(0, 1));
        assert!(set.contains(1, 0));
        assert!(set.contains(0, 3));
        assert!(set.contains(3, 0));
        assert!(!set.contains(1, 1));
    }

    #[test]
    fn growth_stays_above_floor() {
        for row in sidon_growth(&[16, 64]).unwrap() {
            assert!(row.ratio >= 0.3, "n {} ratio {}", row.n, row.ratio);
        }
    }
}
