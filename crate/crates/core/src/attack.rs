//! Averaging attacks and residual generated words.
//!
//! Colluders holding codewords `c_1..c_t` produce `x = (c_1 + .. + c_t) / t`
//! computed exactly. During tracing, once a set `U` of colluders is known,
//! the word averaged by the remaining colluders is
//! `(t0 * x - sum_{j in U} c_j) / (t0 - |U|)`. The residual is always
//! rebuilt from the original word and the full traced set, so repeated
//! application never compounds earlier updates.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sets::{CodewordMultiset, IndexSet};
use crate::word::GeneratedWord;

fn require_binary(code: &Code) -> Result<()> {
    if code.is_binary() {
        Ok(())
    } else {
        Err(Error::NonBinary(code.q()))
    }
}

/// `AT(colluders)`: the exact average of the colluders' codewords.
pub fn averaging_attack(code: &Code, colluders: &IndexSet) -> Result<GeneratedWord> {
    if colluders.is_empty() {
        return Err(Error::Empty("colluder set"));
    }
    weighted_average(code, colluders.iter().map(|j| (j, 1)))
}

/// Average of a codeword multiset, each codeword weighted by its multiplicity.
pub fn multiset_averaging_attack(
    code: &Code,
    colluders: &CodewordMultiset,
) -> Result<GeneratedWord> {
    if colluders.is_empty() {
        return Err(Error::Empty("colluder multiset"));
    }
    weighted_average(code, colluders.iter())
}

fn weighted_average(
    code: &Code,
    members: impl Iterator<Item = (usize, usize)>,
) -> Result<GeneratedWord> {
    require_binary(code)?;
    let mut sums = vec![0u64; code.n()];
    let mut total = 0u64;
    for (j, r) in members {
        code.check_index(j)?;
        total += r as u64;
        for (i, s) in sums.iter_mut().enumerate() {
            *s += r as u64 * code.symbol(j, i) as u64;
        }
    }
    let entries = sums
        .into_iter()
        .map(|s| Rational::new(s, total))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratedWord::from_entries_unchecked(entries))
}

/// Generated word of the colluders left after removing `traced`.
///
/// `t0` is the total number of colluders behind `original`. Fails if
/// `|traced| >= t0` or if any entry leaves `[0, 1]`, which happens exactly
/// when `traced` cannot be a subset of the true colluder set.
pub fn residual_word(
    original: &GeneratedWord,
    t0: usize,
    traced: &IndexSet,
    code: &Code,
) -> Result<GeneratedWord> {
    residual(original, t0, traced.iter().map(|j| (j, 1)), code)
}

/// [`residual_word`] for traced multisets (inner-code tracing).
pub fn residual_word_multiset(
    original: &GeneratedWord,
    size: usize,
    traced: &CodewordMultiset,
    code: &Code,
) -> Result<GeneratedWord> {
    residual(original, size, traced.iter(), code)
}

fn residual(
    original: &GeneratedWord,
    t0: usize,
    traced: impl Iterator<Item = (usize, usize)>,
    code: &Code,
) -> Result<GeneratedWord> {
    require_binary(code)?;
    if original.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            got: original.len(),
        });
    }
    let mut removed = vec![0u64; code.n()];
    let mut count = 0usize;
    for (j, r) in traced {
        code.check_index(j)?;
        count += r;
        for (i, s) in removed.iter_mut().enumerate() {
            *s += r as u64 * code.symbol(j, i) as u64;
        }
    }
    if count >= t0 {
        return Err(Error::TracedTooLarge { traced: count, t0 });
    }
    if count == 0 {
        return Ok(original.clone());
    }
    let scale = Ratio::from_integer(BigInt::from(t0));
    let rest = Ratio::from_integer(BigInt::from(t0 - count));
    let one = Ratio::<BigInt>::one();
    let mut entries = Vec::with_capacity(code.n());
    for (i, x) in original.entries().iter().enumerate() {
        let v = (&scale * x.as_ratio() - Ratio::from_integer(BigInt::from(removed[i]))) / &rest;
        if v < Ratio::from_integer(BigInt::from(0)) || v > one {
            return Err(Error::ResidualOutOfRange {
                position: i + 1,
                value: v.to_string(),
            });
        }
        entries.push(Rational::from_ratio(v)?);
    }
    Ok(GeneratedWord::from_entries_unchecked(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{example_code, inner_code_d};

    fn word(pairs: &[(u64, u64)]) -> GeneratedWord {
        GeneratedWord::from_fractions(pairs).unwrap()
    }

    #[test]
    fn example_attack() {
        let c = example_code();
        let x = averaging_attack(&c, &IndexSet::from([1, 2, 3])).unwrap();
        assert_eq!(x, word(&[(0, 1), (2, 3), (2, 3), (1, 3)]));
    }

    #[test]
    fn all_five_colluders() {
        let c = example_code();
        let x = averaging_attack(&c, &IndexSet::full(5)).unwrap();
        assert_eq!(x, word(&[(1, 5), (2, 5), (2, 5), (2, 5)]));
    }

    #[test]
    fn single_colluder_is_its_codeword() {
        let c = example_code();
        for j in 1..=c.m() {
            let x = averaging_attack(&c, &IndexSet::from([j])).unwrap();
            assert_eq!(x, GeneratedWord::from_codeword(c.codeword(j)).unwrap());
        }
    }

    #[test]
    fn attack_errors() {
        let c = example_code();
        assert_eq!(
            averaging_attack(&c, &IndexSet::empty()).unwrap_err(),
            Error::Empty("colluder set")
        );
        assert!(matches!(
            averaging_attack(&c, &IndexSet::from([6])),
            Err(Error::IndexOutOfRange { index: 6, .. })
        ));
        let b = Code::from_rows(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(
            averaging_attack(&b, &IndexSet::from([1])).unwrap_err(),
            Error::NonBinary(3)
        );
    }

    #[test]
    fn multiset_examples() {
        let d = inner_code_d();
        let ms = CodewordMultiset::new([(2, 2), (3, 1)]).unwrap();
        assert_eq!(
            multiset_averaging_attack(&d, &ms).unwrap(),
            word(&[(2, 3), (1, 3)])
        );
        let all = CodewordMultiset::from_indices([1, 2, 3]).unwrap();
        assert_eq!(
            multiset_averaging_attack(&d, &all).unwrap(),
            word(&[(1, 3), (1, 3)])
        );
        for k in 1..5 {
            let ms = CodewordMultiset::new([(3, k)]).unwrap();
            assert_eq!(
                multiset_averaging_attack(&d, &ms).unwrap(),
                GeneratedWord::from_codeword(d.codeword(3)).unwrap()
            );
        }
        assert!(multiset_averaging_attack(&d, &CodewordMultiset::empty()).is_err());
    }

    #[test]
    fn residual_examples() {
        let c = example_code();
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        assert_eq!(
            residual_word(&x, 3, &IndexSet::from([3]), &c).unwrap(),
            word(&[(0, 1), (1, 1), (1, 2), (0, 1)])
        );
        assert_eq!(residual_word(&x, 3, &IndexSet::empty(), &c).unwrap(), x);
        assert_eq!(
            residual_word(&x, 3, &IndexSet::from([1, 3]), &c).unwrap(),
            GeneratedWord::from_codeword(c.codeword(2)).unwrap()
        );
    }

    #[test]
    fn residual_errors() {
        let c = example_code();
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        assert_eq!(
            residual_word(&x, 3, &IndexSet::from([1, 2, 3]), &c).unwrap_err(),
            Error::TracedTooLarge { traced: 3, t0: 3 }
        );
        // c4 has a 1 in position 1 where x is 0.
        assert!(matches!(
            residual_word(&x, 3, &IndexSet::from([4]), &c),
            Err(Error::ResidualOutOfRange { position: 1, .. })
        ));
        assert!(matches!(
            residual_word(&word(&[(0, 1)]), 3, &IndexSet::from([4]), &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
