//! Index sets, codeword multisets and per-position symbol sets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::Code;
use crate::error::{Error, Result};

/// Sorted, duplicate-free set of 1-based codeword indices.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// Collects indices, sorting and deduplicating. Indices must be >= 1.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.first() == Some(&0) {
            return Err(Error::IndexOutOfRange { index: 0, m: 0 });
        }
        Ok(IndexSet(v))
    }

    /// Like [`IndexSet::new`] but also checks every index against the code.
    pub fn for_code(code: &Code, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set = Self::new(indices).map_err(|_| Error::IndexOutOfRange {
            index: 0,
            m: code.m(),
        })?;
        for &j in &set.0 {
            code.check_index(j)?;
        }
        Ok(set)
    }

    /// `{1, .., m}`.
    pub fn full(m: usize) -> Self {
        IndexSet((1..=m).collect())
    }

    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        IndexSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(
            self.0
                .iter()
                .copied()
                .filter(|j| !other.contains(*j))
                .collect(),
        )
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(
            self.0
                .iter()
                .copied()
                .filter(|j| other.contains(*j))
                .collect(),
        )
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|j| other.contains(*j))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    /// Panics on index 0; intended for literals.
    fn from(a: [usize; N]) -> Self {
        IndexSet::new(a).expect("1-based indices")
    }
}

/// Multiset of codeword indices with positive multiplicities.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CodewordMultiset(BTreeMap<usize, usize>);

#[derive(Serialize, Deserialize)]
struct MultisetEntry {
    index: usize,
    mult: usize,
}

impl CodewordMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from `(index, multiplicity)` pairs; repeated indices accumulate
    /// and zero multiplicities are dropped.
    pub fn new(entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut ms = Self::default();
        for (j, r) in entries {
            if j == 0 {
                return Err(Error::IndexOutOfRange { index: 0, m: 0 });
            }
            ms.add(j, r);
        }
        Ok(ms)
    }

    /// Each occurrence of an index counts once.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(indices.into_iter().map(|j| (j, 1)))
    }

    pub fn add(&mut self, j: usize, r: usize) {
        if r > 0 {
            *self.0.entry(j).or_insert(0) += r;
        }
    }

    pub fn multiplicity(&self, j: usize) -> usize {
        self.0.get(&j).copied().unwrap_or(0)
    }

    /// Sum of multiplicities.
    pub fn size(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&j, &r)| (j, r))
    }

    pub fn support(&self) -> IndexSet {
        IndexSet::from_sorted(self.0.keys().copied().collect())
    }
}

impl fmt::Debug for CodewordMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(j, r)| format!("{r}x{j}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for CodewordMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MultisetEntry> = self
            .iter()
            .map(|(index, mult)| MultisetEntry { index, mult })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CodewordMultiset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<MultisetEntry>::deserialize(d)?;
        if v.iter().any(|e| e.mult == 0) {
            return Err(serde::de::Error::custom("multiplicities must be positive"));
        }
        CodewordMultiset::new(v.into_iter().map(|e| (e.index, e.mult)))
            .map_err(serde::de::Error::custom)
    }
}

/// One non-empty symbol set per position, stored as bitmasks over the alphabet.
///
/// This is the product-set representation `R(1) x .. x R(n)` of a
/// descendant code.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSets(Vec<u64>);

impl PositionSets {
    /// Builds from explicit symbol lists; each must be non-empty.
    pub fn from_symbols<I, S>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = u8>,
    {
        let mut masks = Vec::new();
        for (i, set) in sets.into_iter().enumerate() {
            let mut mask = 0u64;
            for s in set {
                if s as usize >= crate::code::MAX_Q {
                    return Err(Error::InvalidParameter(format!(
                        "symbol {s} at position {} exceeds alphabet limit",
                        i + 1
                    )));
                }
                mask |= 1 << s;
            }
            if mask == 0 {
                return Err(Error::Empty("position symbol set"));
            }
            masks.push(mask);
        }
        Ok(PositionSets(masks))
    }

    pub(crate) fn from_masks(masks: Vec<u64>) -> Self {
        debug_assert!(masks.iter().all(|&m| m != 0));
        PositionSets(masks)
    }

    /// Every symbol of a `q`-ary alphabet at each of `n` positions.
    pub fn full(n: usize, q: usize) -> Self {
        let mask = if q >= 64 { u64::MAX } else { (1u64 << q) - 1 };
        PositionSets(vec![mask; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn mask(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn masks(&self) -> &[u64] {
        &self.0
    }

    #[inline]
    pub fn contains(&self, i: usize, symbol: u8) -> bool {
        self.0[i] >> symbol & 1 == 1
    }

    /// Symbols at position `i`, ascending.
    pub fn symbols(&self, i: usize) -> Vec<u8> {
        (0..64u8).filter(|&s| self.contains(i, s)).collect()
    }

    /// Whether `word` lies in the product set.
    pub fn covers(&self, word: &[u8]) -> bool {
        word.len() == self.0.len() && word.iter().enumerate().all(|(i, &s)| self.contains(i, s))
    }
}

impl fmt::Debug for PositionSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len())
            .map(|i| {
                let s: Vec<String> = self.symbols(i).iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        f.write_str(&parts.join("x"))
    }
}

impl Serialize for PositionSets {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<u8>> = (0..self.len()).map(|i| self.symbols(i)).collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_normalizes() {
        let s = IndexSet::new([3, 1, 3, 2]).unwrap();
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert!(IndexSet::new([0, 1]).is_err());
        assert_eq!(s.to_string(), "{1,2,3}");
    }

    #[test]
    fn index_set_ops() {
        let a = IndexSet::from([1, 2, 3]);
        let b = IndexSet::from([3, 5]);
        assert_eq!(a.union(&b), IndexSet::from([1, 2, 3, 5]));
        assert_eq!(a.difference(&b), IndexSet::from([1, 2]));
        assert_eq!(a.intersection(&b), IndexSet::from([3]));
        assert!(IndexSet::from([1, 3]).is_subset(&a));
    }

    #[test]
    fn multiset_size_and_json() {
        let ms = CodewordMultiset::new([(2, 2), (3, 1), (2, 0)]).unwrap();
        assert_eq!(ms.size(), 3);
        assert_eq!(ms.support(), IndexSet::from([2, 3]));
        let json = serde_json::to_string(&ms).unwrap();
        assert_eq!(json, r#"[{"index":2,"mult":2},{"index":3,"mult":1}]"#);
        let back: CodewordMultiset = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ms);
        assert!(serde_json::from_str::<CodewordMultiset>(r#"[{"index":1,"mult":0}]"#).is_err());
    }

    #[test]
    fn position_sets_basics() {
        let r = PositionSets::from_symbols([vec![0], vec![0, 1]]).unwrap();
        assert!(r.covers(&[0, 1]));
        assert!(!r.covers(&[1, 1]));
        assert_eq!(format!("{r:?}"), "{0}x{0,1}");
        assert!(PositionSets::from_symbols([Vec::<u8>::new()]).is_err());
        assert_eq!(PositionSets::full(2, 3).symbols(1), vec![0, 1, 2]);
    }
}
