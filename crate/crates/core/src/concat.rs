//! Concatenation `B ∘ D` of a `q`-ary outer code with a binary inner code.
//!
//! Symbol `k` of an outer codeword is replaced by inner codeword `d_{k+1}`;
//! the result is an `(n1 * n2, M, 2)` code whose codeword `j` stacks the
//! inner codewords selected by `b_j`.

use std::collections::BTreeSet;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::word::GeneratedWord;

/// An outer/inner pair that can be concatenated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatSpec {
    outer: Code,
    inner: Code,
}

impl ConcatSpec {
    pub fn new(outer: Code, inner: Code) -> Result<Self> {
        check_pair(&outer, &inner)?;
        Ok(ConcatSpec { outer, inner })
    }

    pub fn outer(&self) -> &Code {
        &self.outer
    }

    pub fn inner(&self) -> &Code {
        &self.inner
    }

    /// Rows per inner block.
    pub fn n2(&self) -> usize {
        self.inner.n()
    }

    pub fn code(&self) -> Code {
        concatenate(&self.outer, &self.inner).expect("pair validated on construction")
    }
}

fn check_pair(outer: &Code, inner: &Code) -> Result<()> {
    if inner.m() != outer.q() {
        return Err(Error::AlphabetMismatch {
            inner_m: inner.m(),
            outer_q: outer.q(),
        });
    }
    if !inner.is_binary() {
        return Err(Error::NonBinary(inner.q()));
    }
    Ok(())
}

/// Builds `outer ∘ inner`.
pub fn concatenate(outer: &Code, inner: &Code) -> Result<Code> {
    check_pair(outer, inner)?;
    let columns = outer
        .codewords()
        .map(|b| {
            b.iter()
                .flat_map(|&k| inner.codeword(k as usize + 1).iter().copied())
                .collect()
        })
        .collect();
    Code::from_columns(2, columns)
}

/// Block `i` (1-based) of `n1` equal-length blocks of `x`.
pub fn window(x: &GeneratedWord, n1: usize, i: usize) -> Result<GeneratedWord> {
    if n1 == 0 || !x.len().is_multiple_of(n1) {
        return Err(Error::InvalidParameter(format!(
            "word length {} is not a multiple of n1 = {n1}",
            x.len()
        )));
    }
    if i == 0 || i > n1 {
        return Err(Error::IndexOutOfRange { index: i, m: n1 });
    }
    let n2 = x.len() / n1;
    Ok(x.slice((i - 1) * n2, i * n2))
}

/// Splits a binary code of length `n1 * n2` into an outer and inner code
/// whose concatenation reproduces it.
///
/// The inner code consists of the distinct `n2`-blocks that occur, in
/// ascending order; outer symbols index into that list. Fails if fewer than
/// two distinct blocks occur (the outer alphabet would be unary).
pub fn decompose(code: &Code, n1: usize) -> Result<(Code, Code)> {
    if !code.is_binary() {
        return Err(Error::NonBinary(code.q()));
    }
    if n1 == 0 || !code.n().is_multiple_of(n1) {
        return Err(Error::InvalidParameter(format!(
            "length {} is not a multiple of n1 = {n1}",
            code.n()
        )));
    }
    let n2 = code.n() / n1;
    let blocks: BTreeSet<&[u8]> = code.codewords().flat_map(|c| c.chunks_exact(n2)).collect();
    let blocks: Vec<&[u8]> = blocks.into_iter().collect();
    if blocks.len() < 2 {
        return Err(Error::InvalidParameter(
            "code uses a single inner block; no binary inner code to recover".into(),
        ));
    }
    let inner = Code::from_columns(2, blocks.iter().map(|b| b.to_vec()).collect())?;
    let outer_cols = code
        .codewords()
        .map(|c| {
            c.chunks_exact(n2)
                .map(|blk| blocks.binary_search(&blk).expect("block present") as u8)
                .collect()
        })
        .collect();
    let outer = Code::from_columns(blocks.len(), outer_cols)?;
    Ok((outer, inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{averaging_attack, multiset_averaging_attack};
    use crate::samples::{concatenated_bd, inner_code_d, outer_code_b};
    use crate::sets::{CodewordMultiset, IndexSet};

    #[test]
    fn concatenation_example() {
        assert_eq!(
            concatenate(&outer_code_b(), &inner_code_d()).unwrap(),
            concatenated_bd()
        );
        let spec = ConcatSpec::new(outer_code_b(), inner_code_d()).unwrap();
        assert_eq!(spec.code(), concatenated_bd());
        assert_eq!(spec.n2(), 2);
    }

    #[test]
    fn single_outer_column() {
        let outer = Code::from_rows(3, &[vec![0], vec![0]]).unwrap();
        let c = concatenate(&outer, &inner_code_d()).unwrap();
        assert_eq!(c.codeword(1), &[0, 0, 0, 0]);
        let d = Code::from_rows(2, &[vec![1, 0, 0], vec![1, 1, 0]]).unwrap();
        let c = concatenate(&outer, &d).unwrap();
        assert_eq!(c.codeword(1), &[1, 1, 1, 1]);
    }

    #[test]
    fn mismatches_rejected() {
        let b = outer_code_b();
        let d2 = Code::from_rows(2, &[vec![0, 1]]).unwrap();
        assert_eq!(
            concatenate(&b, &d2).unwrap_err(),
            Error::AlphabetMismatch {
                inner_m: 2,
                outer_q: 3
            }
        );
        let d3 = Code::from_rows(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(concatenate(&b, &d3).unwrap_err(), Error::NonBinary(3));
    }

    #[test]
    fn windows() {
        let x = GeneratedWord::from_fractions(&[(1, 3), (0, 1), (2, 3), (1, 1)]).unwrap();
        assert_eq!(
            window(&x, 2, 2).unwrap(),
            GeneratedWord::from_fractions(&[(2, 3), (1, 1)]).unwrap()
        );
        assert_eq!(window(&x, 1, 1).unwrap(), x);
        assert!(window(&x, 2, 3).is_err());
        assert!(window(&x, 3, 1).is_err());
    }

    #[test]
    fn window_is_inner_multiset_attack() {
        let (b, d, c) = (outer_code_b(), inner_code_d(), concatenated_bd());
        // Exhaustive over every non-empty coalition of the 6 codewords.
        for mask in 1u32..64 {
            let s = IndexSet::new((0..6).filter(|k| mask >> k & 1 == 1).map(|k| k + 1)).unwrap();
            let x = averaging_attack(&c, &s).unwrap();
            for i in 1..=b.n() {
                let ms = CodewordMultiset::from_indices(
                    s.iter().map(|j| b.symbol(j, i - 1) as usize + 1),
                )
                .unwrap();
                assert_eq!(
                    window(&x, b.n(), i).unwrap(),
                    multiset_averaging_attack(&d, &ms).unwrap()
                );
            }
        }
    }

    #[test]
    fn decompose_round_trip() {
        let c = concatenated_bd();
        let (outer, inner) = decompose(&c, 2).unwrap();
        assert_eq!(concatenate(&outer, &inner).unwrap(), c);
        // blocks sorted: 00, 01, 10 -> d1, d3, d2 relabelled
        assert_eq!(inner.m(), 3);
        assert!(decompose(&c, 3).is_err());
    }
}
