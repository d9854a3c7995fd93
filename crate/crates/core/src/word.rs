//! Generated words: exact per-position averages of colluding codewords.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{lcm_u64, Rational};

/// A vector of reduced rationals in `[0, 1]`.
///
/// JSON form: `{"entries":[{"num":0,"den":1}, ...]}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord")]
pub struct GeneratedWord {
    entries: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawWord {
    entries: Vec<Rational>,
}

impl TryFrom<RawWord> for GeneratedWord {
    type Error = Error;
    fn try_from(raw: RawWord) -> Result<Self> {
        GeneratedWord::new(raw.entries)
    }
}

impl GeneratedWord {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("generated word"));
        }
        if let Some(bad) = entries.iter().find(|e| !e.in_unit_interval()) {
            return Err(Error::OutOfUnitInterval(bad.to_string()));
        }
        Ok(GeneratedWord { entries })
    }

    /// Builds from `(numerator, denominator)` pairs.
    pub fn from_fractions(pairs: &[(u64, u64)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|&(a, t)| Rational::new(a, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// A single codeword viewed as a word of 0/1 entries.
    pub fn from_codeword(word: &[u8]) -> Result<Self> {
        Self::new(word.iter().map(|&s| Rational::integer(s as u64)).collect())
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Rational>) -> Self {
        debug_assert!(entries.iter().all(Rational::in_unit_interval));
        GeneratedWord { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn denominators(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(Rational::denom_u64)
    }

    pub fn max_denominator(&self) -> u64 {
        self.denominators().max().unwrap_or(1)
    }

    pub fn lcm_denominator(&self) -> u64 {
        lcm_u64(self.denominators())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Rational::to_f64).collect()
    }

    /// Entries `start..end` as a new word.
    pub(crate) fn slice(&self, start: usize, end: usize) -> GeneratedWord {
        GeneratedWord {
            entries: self.entries[start..end].to_vec(),
        }
    }
}

impl std::fmt::Display for GeneratedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl std::fmt::Debug for GeneratedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let w = GeneratedWord::from_fractions(&[(0, 1), (2, 3)]).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"entries":[{"num":0,"den":1},{"num":2,"den":3}]}"#);
        let back: GeneratedWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(GeneratedWord::from_fractions(&[(4, 3)]).is_err());
        assert!(
            serde_json::from_str::<GeneratedWord>(r#"{"entries":[{"num":5,"den":4}]}"#).is_err()
        );
        assert!(
            serde_json::from_str::<GeneratedWord>(r#"{"entries":[{"num":1,"den":0}]}"#).is_err()
        );
        assert!(GeneratedWord::new(vec![]).is_err());
    }

    #[test]
    fn zero_entries_have_unit_denominator() {
        let w = GeneratedWord::from_fractions(&[(0, 5), (3, 6)]).unwrap();
        assert_eq!(w.denominators().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(w.max_denominator(), 2);
    }
}
