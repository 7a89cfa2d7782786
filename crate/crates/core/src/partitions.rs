//! Partitions, set partitions and refining functions.
//!
//! Parts of a partition are indexed by position `0..len` in weakly decreasing
//! order, so equal part values are distinguishable. Set partitions and
//! refining functions always act on these positions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// The derived order is the canonical enumeration order: by size, then by
/// length (shorter first), then reverse-lexicographically (larger leading
/// parts first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Like [`Partition::new`], dropping zero parts instead of rejecting them.
    pub fn from_nonneg(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Disjoint union σ ⊔ τ, re-sorted.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// σ^P: one part per block, the sum of the parts in that block.
    pub fn merge(&self, blocks: &SetPartition) -> Result<Partition> {
        let mut merged = Vec::with_capacity(blocks.len());
        for block in blocks.blocks() {
            if block.iter().any(|&i| i >= self.len()) {
                return Err(Error::BlockOutOfRange { block: block.clone(), len: self.len() });
            }
            merged.push(block.iter().map(|&i| self.parts[i]).sum());
        }
        Ok(Partition::from_nonneg(merged))
    }

    /// σ|_T, the parts at the given positions. Out-of-range positions are ignored.
    pub fn restrict(&self, positions: &[usize]) -> Partition {
        Partition::from_nonneg(positions.iter().filter_map(|&i| self.parts.get(i).copied()))
    }

    /// |Aut(λ)| = ∏ (multiplicity of each part value)!.
    pub fn automorphism_count(&self) -> u64 {
        let mut count = 1u64;
        let mut run = 0u64;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 && self.parts[i - 1] == *p {
                run += 1;
            } else {
                run = 1;
            }
            count *= run;
        }
        count
    }

    pub fn even_part_count(&self) -> usize {
        self.parts.iter().filter(|p| *p % 2 == 0).count()
    }

    /// True when `self` is a refinement of `coarser`, i.e. some refining
    /// function of `coarser` into `self` exists.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.size() != coarser.size() || self.len() < coarser.len() {
            return false;
        }
        let mut found = false;
        visit_refining_maps(coarser.parts(), self.parts(), &mut |_| {
            found = true;
            false
        });
        found
    }

    /// Parses a literal such as `[3,1,1]`. Returns the partition and whether
    /// the input had to be re-sorted.
    pub fn parse_literal(s: &str) -> Result<(Partition, bool)> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected a list like [3,1,1], got {s:?}")))?;
        let mut parts = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let p: u32 = item.parse().map_err(|_| Error::Parse(format!("bad part {item:?} in {s:?}")))?;
            parts.push(p);
        }
        let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
        Ok((Partition::new(parts)?, !sorted))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then(self.len().cmp(&other.len()))
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse_literal(s).map(|(p, _)| p)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Shorthand used throughout tests: `part![2, 1, 1]`.
#[macro_export]
macro_rules! part {
    () => { $crate::Partition::empty() };
    ($($p:expr),+ $(,)?) => { $crate::Partition::new(vec![$($p),+]).expect("valid partition") };
}

/// All partitions of `n`, optionally of length at most `max_len`, in
/// canonical order.
pub fn enumerate_partitions(n: u32, max_len: Option<usize>) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            cur.push(p);
            rec(remaining - p, p, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len.unwrap_or(usize::MAX), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The canonical basis P(d) with a reverse index.
#[derive(Clone, Debug)]
pub struct PartitionBasis {
    degree: u32,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl PartialEq for PartitionBasis {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
    }
}

impl Eq for PartitionBasis {}

impl PartitionBasis {
    pub fn new(degree: u32) -> Self {
        let parts = enumerate_partitions(degree, None);
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PartitionBasis { degree, parts, index }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }
}

/// A set partition of the positions `0..ground`.
///
/// Canonical form: each block sorted, blocks ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(ground: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::NotASetPartition { len: ground });
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= ground {
                    return Err(Error::BlockOutOfRange { block: block.clone(), len: ground });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::NotASetPartition { len: ground });
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotASetPartition { len: ground });
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { ground, blocks })
    }

    /// The partition into singletons.
    pub fn singletons(ground: usize) -> Self {
        SetPartition { ground, blocks: (0..ground).map(|i| vec![i]).collect() }
    }

    fn from_growth(labels: &[usize], count: usize) -> Self {
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        SetPartition { ground: labels.len(), blocks }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks, |P|.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True iff no block contains two elements of `subset`.
    pub fn separates(&self, subset: &[usize]) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().filter(|i| subset.contains(i)).count() <= 1)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> =
            self.blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect();
        one_based.serialize(s)
    }
}

/// Visits every set partition of `0..n` as a restricted growth string
/// (`labels[i]` is the block of `i`) together with its block count.
///
/// The empty ground set has exactly one set partition, with no blocks.
pub fn visit_set_partitions(n: usize, f: &mut dyn FnMut(&[usize], usize)) {
    fn rec(i: usize, n: usize, blocks: usize, labels: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], usize)) {
        if i == n {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            rec(i + 1, n, blocks.max(b + 1), labels, f);
            labels.pop();
        }
    }
    rec(0, n, 0, &mut Vec::with_capacity(n), f);
}

/// All set partitions of `0..n`; there are Bell(n) of them.
pub fn enumerate_set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    visit_set_partitions(n, &mut |labels, count| out.push(SetPartition::from_growth(labels, count)));
    out
}

/// A map from the positions of `source` to the positions of `target` such
/// that every target part is the sum of the source parts mapped onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefiningFunction {
    pub source: Partition,
    pub target: Partition,
    pub map: Vec<usize>,
}

impl RefiningFunction {
    pub fn is_valid(&self) -> bool {
        let mut sums = vec![0u32; self.target.len()];
        for (j, &i) in self.map.iter().enumerate() {
            match sums.get_mut(i) {
                Some(s) => *s += self.source.parts()[j],
                None => return false,
            }
        }
        self.map.len() == self.source.len() && sums == self.target.parts()
    }

    /// Positions of `source` mapped onto target position `i`.
    pub fn preimage(&self, i: usize) -> Vec<usize> {
        self.map.iter().enumerate().filter(|(_, &t)| t == i).map(|(j, _)| j).collect()
    }
}

/// Visits every refining map `source positions -> target positions`; the
/// callback returns `false` to stop early.
pub fn visit_refining_maps(target: &[u32], source: &[u32], f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        j: usize,
        source: &[u32],
        room: &mut [u32],
        map: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if j == source.len() {
            return if room.iter().all(|&r| r == 0) { f(map) } else { true };
        }
        for i in 0..room.len() {
            if room[i] >= source[j] {
                room[i] -= source[j];
                map.push(i);
                let go_on = rec(j + 1, source, room, map, f);
                map.pop();
                room[i] += source[j];
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    let ts: u32 = target.iter().sum();
    let ss: u32 = source.iter().sum();
    if ts != ss {
        return;
    }
    let mut room = target.to_vec();
    rec(0, source, &mut room, &mut Vec::with_capacity(source.len()), f);
}

/// All refining functions of `target` into `source`, i.e. maps
/// `I(source) -> I(target)` that sum parts correctly. Empty when `source`
/// does not refine `target`.
pub fn enumerate_refining_functions(target: &Partition, source: &Partition) -> Vec<RefiningFunction> {
    let mut out = Vec::new();
    visit_refining_maps(target.parts(), source.parts(), &mut |map| {
        out.push(RefiningFunction { source: source.clone(), target: target.clone(), map: map.to_vec() });
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_partitions(0, None), vec![Partition::empty()]);
        let p4 = enumerate_partitions(4, None);
        assert_eq!(p4, vec![part![4], part![3, 1], part![2, 2], part![2, 1, 1], part![1, 1, 1, 1]]);
        assert_eq!(enumerate_partitions(4, Some(2)), vec![part![4], part![3, 1], part![2, 2]]);
        assert_eq!(enumerate_partitions(3, Some(0)), vec![]);
    }

    #[test]
    fn set_partitions_small() {
        assert_eq!(enumerate_set_partitions(0), vec![SetPartition::singletons(0)]);
        assert_eq!(enumerate_set_partitions(0)[0].len(), 0);
        assert_eq!(enumerate_set_partitions(1).len(), 1);
        assert_eq!(enumerate_set_partitions(3).len(), 5);
    }

    #[test]
    fn refining_functions_examples() {
        assert_eq!(enumerate_refining_functions(&part![2], &part![1, 1]).len(), 1);
        // τ=(2,1), σ=(1,1,1): choose which 1 fills the part 1
        let maps = enumerate_refining_functions(&part![2, 1], &part![1, 1, 1]);
        assert_eq!(maps.len(), 3);
        assert!(maps.iter().all(RefiningFunction::is_valid));
        assert!(enumerate_refining_functions(&part![3], &part![2, 2]).is_empty());
    }

    #[test]
    fn refining_functions_match_exhaustive_maps() {
        // brute force over all |I(τ)|^|I(σ)| maps
        let (tau, sigma) = (part![2, 1], part![1, 1, 1]);
        let mut count = 0;
        for code in 0..8usize {
            let map: Vec<usize> = (0..3).map(|k| (code >> k) & 1).collect();
            let f = RefiningFunction { source: sigma.clone(), target: tau.clone(), map };
            if f.is_valid() {
                count += 1;
            }
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn merge_examples() {
        let id = SetPartition::singletons(2);
        assert_eq!(part![3, 1].merge(&id).unwrap(), part![3, 1]);
        let all = SetPartition::from_blocks(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(part![3, 1].merge(&all).unwrap(), part![4]);
        let p = SetPartition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(part![2, 1, 1].merge(&p).unwrap(), part![3, 1]);
        let wide = SetPartition::from_blocks(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(part![3, 1].merge(&wide), Err(Error::BlockOutOfRange { .. })));
    }

    #[test]
    fn restrict_examples() {
        let s = part![3, 2, 1];
        assert_eq!(s.restrict(&[0, 2]), part![3, 1]);
        assert_eq!(s.restrict(&[]), Partition::empty());
        assert_eq!(s.restrict(&[0, 1, 2]), s);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(part![2, 1].automorphism_count(), 1);
        assert_eq!(part![1, 1, 1].automorphism_count(), 6);
        assert_eq!(part![2, 2, 1, 1, 1].automorphism_count(), 12);
        assert_eq!(Partition::empty().automorphism_count(), 1);
    }

    #[test]
    fn separation() {
        // P={{a,x},{b,y}} with a=0,b=1,x=2,y=3
        let p = SetPartition::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(p.separates(&[0, 1]));
        let q = SetPartition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(!q.separates(&[0, 1]));
        assert!(q.separates(&[]));
    }

    #[test]
    fn literal_round_trip() {
        let (p, resorted) = Partition::parse_literal("[1, 3,1]").unwrap();
        assert!(resorted);
        assert_eq!(p.to_string(), "[3,1,1]");
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert!("[2,0]".parse::<Partition>().is_err());
        assert!("2,1".parse::<Partition>().is_err());
        let sp = SetPartition::from_blocks(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(sp.to_string(), "[[1,2],[3]]");
    }

    #[test]
    fn invalid_set_partitions_rejected() {
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(SetPartition::from_blocks(2, vec![vec![0, 1], vec![1]]).is_err());
        assert!(SetPartition::from_blocks(2, vec![vec![0, 1], vec![]]).is_err());
    }
}
