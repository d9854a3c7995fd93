//! Descendant codes, suspect filtering and parent-set enumeration.
//!
//! The descendant code of a colluder set is the product of the symbol sets
//! seen at each position. A codeword is a *suspect* when it lies inside that
//! product: such a user could have been part of the coalition. Parent sets
//! are all codeword subsets with the same descendant code; every one of
//! them consists of suspects, so enumeration runs over subsets of the
//! suspect set only.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::sets::{IndexSet, PositionSets};
use crate::word::GeneratedWord;

/// Default cap on the number of candidate subsets `2^|suspects|`.
pub const DEFAULT_PARENT_CAP: u64 = 1 << 24;

/// `desc(subset)`: the symbols each position takes across `subset`.
pub fn descendant(code: &Code, subset: &IndexSet) -> Result<PositionSets> {
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    let mut masks = vec![0u64; code.n()];
    for j in subset.iter() {
        code.check_index(j)?;
        for (i, m) in masks.iter_mut().enumerate() {
            *m |= 1 << code.symbol(j, i);
        }
    }
    Ok(PositionSets::from_masks(masks))
}

/// Reads the descendant code off a binary generated word: `{0}` where the
/// entry is 0, `{1}` where it is 1 and `{0,1}` in between.
pub fn desc_from_word(x: &GeneratedWord) -> PositionSets {
    let masks = x
        .entries()
        .iter()
        .map(|e| {
            if e.is_zero() {
                0b01
            } else if e.is_one() {
                0b10
            } else {
                0b11
            }
        })
        .collect();
    PositionSets::from_masks(masks)
}

fn check_dims(code: &Code, r: &PositionSets) -> Result<()> {
    if r.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            got: r.len(),
        });
    }
    Ok(())
}

/// Indices of all codewords lying in the product set `r` (`desc ∩ C`).
pub fn suspects(code: &Code, r: &PositionSets) -> Result<IndexSet> {
    check_dims(code, r)?;
    Ok(IndexSet::from_sorted(
        (1..=code.m())
            .filter(|&j| r.covers(code.codeword(j)))
            .collect(),
    ))
}

/// All subsets `S` of the code with `desc(S) = desc(subset)`, sorted.
///
/// Fails if the suspect set is so large that `2^|suspects|` exceeds `cap`.
pub fn parent_sets(code: &Code, subset: &IndexSet, cap: u64) -> Result<Vec<IndexSet>> {
    let table = CoverageTable::new(code);
    let search = ParentSearch::new(code, &table, subset, cap)?;
    let mut out = Vec::new();
    search.for_each(&mut |mask| {
        out.push(search.indices(mask));
        ControlFlow::Continue(())
    });
    out.sort();
    Ok(out)
}

/// Per position and symbol, the set of codewords (bit `j - 1`) holding it.
pub(crate) struct SymbolIndex {
    n: usize,
    q: usize,
    m: usize,
    bits: Vec<FixedBitSet>,
}

impl SymbolIndex {
    pub(crate) fn new(code: &Code) -> Self {
        let (n, q, m) = (code.n(), code.q(), code.m());
        let mut bits = vec![FixedBitSet::with_capacity(m); n * q];
        for j in 1..=m {
            for i in 0..n {
                bits[i * q + code.symbol(j, i) as usize].insert(j - 1);
            }
        }
        SymbolIndex { n, q, m, bits }
    }

    /// Suspects of `r` as a codeword bitset.
    pub(crate) fn suspects(&self, r: &PositionSets) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.m);
        acc.insert_range(..);
        let mut pos = FixedBitSet::with_capacity(self.m);
        for i in 0..self.n {
            let mask = r.mask(i);
            let full = if self.q >= 64 {
                u64::MAX
            } else {
                (1u64 << self.q) - 1
            };
            if mask & full == full {
                continue;
            }
            pos.clear();
            for s in 0..self.q {
                if mask >> s & 1 == 1 {
                    pos.union_with(&self.bits[i * self.q + s]);
                }
            }
            acc.intersect_with(&pos);
        }
        acc
    }
}

/// Each codeword as a bitmask over (position, symbol) pairs, so the
/// descendant code of a set is the OR of its members' masks.
pub(crate) struct CoverageTable {
    words: usize,
    masks: Vec<u64>,
}

impl CoverageTable {
    pub(crate) fn new(code: &Code) -> Self {
        let (n, q) = (code.n(), code.q());
        let words = (n * q).div_ceil(64);
        let mut masks = vec![0u64; words * code.m()];
        for j in 1..=code.m() {
            let row = &mut masks[(j - 1) * words..j * words];
            for i in 0..n {
                let bit = i * q + code.symbol(j, i) as usize;
                row[bit / 64] |= 1 << (bit % 64);
            }
        }
        CoverageTable { words, masks }
    }

    fn mask(&self, j: usize) -> &[u64] {
        &self.masks[(j - 1) * self.words..j * self.words]
    }
}

/// Depth-first enumeration of the parent sets of one colluder set.
///
/// Candidates are subsets of the suspect list; a branch is cut as soon as
/// the remaining suspects can no longer complete the target coverage.
pub(crate) struct ParentSearch<'a> {
    table: &'a CoverageTable,
    members: Vec<usize>,
    target: Vec<u64>,
    /// `suffix[k]`: OR of the masks of `members[k..]`.
    suffix: Vec<u64>,
}

impl<'a> ParentSearch<'a> {
    pub(crate) fn new(
        code: &Code,
        table: &'a CoverageTable,
        subset: &IndexSet,
        cap: u64,
    ) -> Result<Self> {
        let desc = descendant(code, subset)?;
        let members: Vec<usize> = suspects(code, &desc)?.iter().collect();
        Self::with_suspects(table, subset, members, cap)
    }

    pub(crate) fn with_suspects(
        table: &'a CoverageTable,
        subset: &IndexSet,
        members: Vec<usize>,
        cap: u64,
    ) -> Result<Self> {
        let k = members.len();
        if k >= 63 || (1u64 << k) > cap {
            return Err(Error::EnumerationCap { suspects: k, cap });
        }
        let w = table.words;
        let mut target = vec![0u64; w];
        for j in subset.iter() {
            for (t, m) in target.iter_mut().zip(table.mask(j)) {
                *t |= m;
            }
        }
        let mut suffix = vec![0u64; (k + 1) * w];
        for idx in (0..k).rev() {
            let (head, tail) = suffix.split_at_mut((idx + 1) * w);
            let cur = &mut head[idx * w..];
            for ((c, nx), m) in cur.iter_mut().zip(&tail[..w]).zip(table.mask(members[idx])) {
                *c = nx | m;
            }
        }
        Ok(ParentSearch {
            table,
            members,
            target,
            suffix,
        })
    }

    pub(crate) fn members(&self) -> &[usize] {
        &self.members
    }

    /// Converts a membership mask over [`Self::members`] to codeword indices.
    pub(crate) fn indices(&self, mask: u64) -> IndexSet {
        IndexSet::from_sorted(
            self.members
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &j)| j)
                .collect(),
        )
    }

    /// Calls `f` with the membership mask of every parent set. Returns the
    /// number of search nodes visited.
    pub(crate) fn for_each(&self, f: &mut dyn FnMut(u64) -> ControlFlow<()>) -> u64 {
        let w = self.table.words;
        let mut acc = vec![0u64; (self.members.len() + 1) * w];
        let mut nodes = 0u64;
        let _ = self.dfs(0, 0, &mut acc, &mut nodes, f);
        nodes
    }

    fn dfs(
        &self,
        k: usize,
        chosen: u64,
        acc: &mut [u64],
        nodes: &mut u64,
        f: &mut dyn FnMut(u64) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        *nodes += 1;
        let w = self.table.words;
        let cur = &acc[k * w..(k + 1) * w];
        let reachable = cur
            .iter()
            .zip(&self.suffix[k * w..(k + 1) * w])
            .zip(&self.target)
            .all(|((a, s), t)| a | s == *t);
        if !reachable {
            return ControlFlow::Continue(());
        }
        if k == self.members.len() {
            return f(chosen);
        }
        // include members[k]
        let (head, tail) = acc.split_at_mut((k + 1) * w);
        let cur = &head[k * w..];
        for ((nx, c), m) in tail[..w]
            .iter_mut()
            .zip(cur)
            .zip(self.table.mask(self.members[k]))
        {
            *nx = c | m;
        }
        self.dfs(k + 1, chosen | 1 << k, acc, nodes, f)?;
        // exclude members[k]
        let (head, tail) = acc.split_at_mut((k + 1) * w);
        tail[..w].copy_from_slice(&head[k * w..]);
        self.dfs(k + 1, chosen, acc, nodes, f)
    }
}
