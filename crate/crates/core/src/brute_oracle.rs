//! Exhaustive enumeration of B_n-partitions straight from the definition:
//! every set partition of the 2n symbols `±1..±n` is generated as a
//! restricted growth string and kept when its blocks are closed under
//! negation with at most one self-negated block.
//!
//! This is deliberately independent of the recurrences in
//! [`crate::exact_enum`].

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Largest supported `n`; Bell(10) = 115975 candidate partitions.
pub const MAX_N: usize = 5;

/// A B_n-partition in canonical form: elements within a block ordered by
/// absolute value with the positive element first, blocks ordered the
/// same way by their leading element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedBlockPartition {
    pub n: usize,
    pub blocks: Vec<Vec<i32>>,
}

fn element_key(x: i32) -> (u32, bool) {
    (x.unsigned_abs(), x < 0)
}

impl SignedBlockPartition {
    /// Sorts blocks and elements into canonical order.
    pub fn canonical(n: usize, mut blocks: Vec<Vec<i32>>) -> Self {
        for block in &mut blocks {
            block.sort_by_key(|&x| element_key(x));
        }
        blocks.sort_by_key(|b| b.first().map(|&x| element_key(x)));
        Self { n, blocks }
    }

    fn is_self_negated(block: &[i32]) -> bool {
        let set: BTreeSet<i32> = block.iter().copied().collect();
        block.iter().all(|x| set.contains(&-x))
    }

    pub fn has_zero_block(&self) -> bool {
        self.blocks.iter().any(|b| Self::is_self_negated(b))
    }

    /// Number of pairs `(B, -B)` with `B != -B`.
    pub fn block_pairs(&self) -> usize {
        let zero = self.blocks.iter().filter(|b| Self::is_self_negated(b)).count();
        (self.blocks.len() - zero) / 2
    }
}

/// Checks the B_n-partition axioms.
pub fn validate_partition(p: &SignedBlockPartition) -> bool {
    let n = p.n as i32;
    let mut seen = BTreeSet::new();
    for block in &p.blocks {
        if block.is_empty() {
            return false;
        }
        for &x in block {
            if x == 0 || x.abs() > n || !seen.insert(x) {
                return false;
            }
        }
    }
    if seen.len() != 2 * p.n {
        return false;
    }
    let as_sets: BTreeSet<BTreeSet<i32>> =
        p.blocks.iter().map(|b| b.iter().copied().collect()).collect();
    let closed = as_sets
        .iter()
        .all(|b| as_sets.contains(&b.iter().map(|x| -x).collect::<BTreeSet<_>>()));
    let zero_blocks = p.blocks.iter().filter(|b| SignedBlockPartition::is_self_negated(b)).count();
    closed && zero_blocks <= 1
}

fn check_range(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::EnumerationRange { n, max: MAX_N })
    }
}

/// Symbol `i` in `0..2n` stands for `i+1` when `i < n`, else `-(i-n+1)`.
fn symbol(n: usize, i: usize) -> i32 {
    if i < n {
        i as i32 + 1
    } else {
        -((i - n) as i32 + 1)
    }
}

/// Visits every restricted growth string of the given length.
fn for_each_rgs(len: usize, mut visit: impl FnMut(&[usize])) {
    let mut a = vec![0usize; len];
    // prefix_max[i] = max(a[0..=i])
    let mut prefix_max = vec![0usize; len];
    loop {
        visit(&a);
        // Find the rightmost position that can be incremented.
        let mut i = len - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] <= prefix_max[i - 1] {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(a[i]);
        for j in i + 1..len {
            a[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// Classifies a set partition of the 2n symbols, returning
/// `Some((blocks, zero_block_present))` when it is a B_n-partition.
fn classify(n: usize, rgs: &[usize]) -> Option<(usize, bool)> {
    let blocks = rgs.iter().max().map_or(0, |m| m + 1);
    let mut image: Vec<Option<usize>> = vec![None; blocks];
    for i in 0..2 * n {
        let neg = if i < n { i + n } else { i - n };
        let (b, nb) = (rgs[i], rgs[neg]);
        match image[b] {
            None => image[b] = Some(nb),
            Some(prev) if prev != nb => return None,
            Some(_) => {}
        }
    }
    let zero = image.iter().enumerate().filter(|(b, img)| **img == Some(*b)).count();
    (zero <= 1).then_some((blocks, zero == 1))
}

/// All B_n-partitions (optionally only those without a zero-block).
pub fn enumerate_bn(n: usize, allow_zero_block: bool) -> Result<Vec<SignedBlockPartition>> {
    check_range(n)?;
    let mut out = Vec::new();
    for_each_rgs(2 * n, |rgs| {
        if let Some((blocks, has_zero)) = classify(n, rgs) {
            if has_zero && !allow_zero_block {
                return;
            }
            let mut grouped = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                grouped[b].push(symbol(n, i));
            }
            out.push(SignedBlockPartition::canonical(n, grouped));
        }
    });
    out.sort();
    Ok(out)
}

/// `counts[k]` = number of B_n-partitions with exactly `k` block pairs.
pub fn count_by_pairs(n: usize, allow_zero_block: bool) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; n + 1];
    for p in enumerate_bn(n, allow_zero_block)? {
        counts[p.block_pairs()] += 1;
    }
    Ok(counts)
}

/// Nested-array JSON, one entry per partition: `[[[1,-1]],[[1],[-1]]]`.
pub fn partitions_to_json(partitions: &[SignedBlockPartition]) -> Result<String> {
    let blocks: Vec<&Vec<Vec<i32>>> = partitions.iter().map(|p| &p.blocks).collect();
    Ok(serde_json::to_string(&blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(n: usize, blocks: &[&[i32]]) -> SignedBlockPartition {
        SignedBlockPartition::canonical(n, blocks.iter().map(|b| b.to_vec()).collect())
    }

    #[test]
    fn n1_partitions() {
        let all = enumerate_bn(1, true).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&part(1, &[&[1, -1]])));
        assert!(all.contains(&part(1, &[&[1], &[-1]])));
        assert_eq!(enumerate_bn(1, false).unwrap(), vec![part(1, &[&[1], &[-1]])]);
    }

    #[test]
    fn n2_partitions() {
        assert_eq!(enumerate_bn(2, true).unwrap().len(), 6);
        let free = enumerate_bn(2, false).unwrap();
        assert_eq!(free.len(), 3);
        assert!(free.contains(&part(2, &[&[1], &[-1], &[2], &[-2]])));
        assert!(free.contains(&part(2, &[&[1, 2], &[-1, -2]])));
        assert!(free.contains(&part(2, &[&[1, -2], &[-1, 2]])));
    }

    #[test]
    fn counts_by_pairs() {
        assert_eq!(count_by_pairs(2, true).unwrap(), vec![1, 4, 1]);
        assert_eq!(count_by_pairs(3, true).unwrap(), vec![1, 13, 9, 1]);
        assert_eq!(count_by_pairs(3, false).unwrap(), vec![0, 4, 6, 1]);
    }

    #[test]
    fn range_is_enforced() {
        assert!(matches!(enumerate_bn(0, true), Err(Error::EnumerationRange { n: 0, .. })));
        assert!(matches!(count_by_pairs(6, false), Err(Error::EnumerationRange { n: 6, .. })));
    }

    #[test]
    fn validation_examples() {
        assert!(validate_partition(&part(1, &[&[1, -1]])));
        assert!(!validate_partition(&part(2, &[&[1], &[2, -2]])));
        assert!(validate_partition(&part(2, &[&[1, 2], &[-1, -2]])));
        // Two zero-blocks.
        assert!(!validate_partition(&part(2, &[&[1, -1], &[2, -2]])));
        // Not closed under negation.
        assert!(!validate_partition(&part(2, &[&[1, 2], &[-1], &[-2]])));
        // Repeated element.
        assert!(!validate_partition(&SignedBlockPartition { n: 1, blocks: vec![vec![1], vec![1, -1]] }));
    }

    #[test]
    fn enumerated_partitions_are_valid_and_distinct() {
        for n in 1..=4 {
            let all = enumerate_bn(n, true).unwrap();
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            for p in &all {
                assert!(validate_partition(p), "{p:?}");
                // Negation permutes the blocks.
                let negated = SignedBlockPartition::canonical(
                    n,
                    p.blocks.iter().map(|b| b.iter().map(|x| -x).collect()).collect(),
                );
                assert_eq!(&negated, p);
            }
        }
    }

    #[test]
    fn json_dump() {
        let all = enumerate_bn(1, true).unwrap();
        assert_eq!(partitions_to_json(&all).unwrap(), "[[[1],[-1]],[[1,-1]]]");
    }
}
