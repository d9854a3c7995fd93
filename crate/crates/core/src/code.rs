//! `(n, M, q)` codes and their text format.
//!
//! A code is an `n x M` matrix over `{0, .., q-1}` whose columns are the
//! users' codewords. Codewords are addressed by 1-based column index.
//!
//! Text format:
//!
//! ```text
//! # comment lines start with '#'
//! n M q
//! <row 1: M space-separated symbols>
//! ...
//! <row n>
//! ```
//!
//! Row `i` lists position `i` of every codeword, so column `j` of the
//! matrix is codeword `j`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest alphabet supported; symbol sets are stored as `u64` bitmasks.
pub const MAX_Q: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    n: usize,
    m: usize,
    q: usize,
    /// Column-major: codeword `j` (0-based) occupies `symbols[j*n..(j+1)*n]`.
    symbols: Vec<u8>,
}

impl Code {
    /// Builds a code from its codewords (columns).
    pub fn from_columns(q: usize, columns: Vec<Vec<u8>>) -> Result<Self> {
        let m = columns.len();
        if m == 0 {
            return Err(Error::InvalidDimensions(
                "a code needs at least one codeword".into(),
            ));
        }
        let n = columns[0].len();
        let mut symbols = Vec::with_capacity(n * m);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidDimensions(format!(
                    "codeword {} has length {}, expected {}",
                    j + 1,
                    col.len(),
                    n
                )));
            }
            symbols.extend_from_slice(col);
        }
        Self::from_column_major(n, m, q, symbols)
    }

    /// Builds a code from its incidence-matrix rows.
    pub fn from_rows(q: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidDimensions(
                "a code needs at least one position".into(),
            ));
        }
        let m = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidDimensions(format!(
                    "row {} has {} symbols, expected {}",
                    i + 1,
                    r.len(),
                    m
                )));
            }
        }
        let mut symbols = vec![0u8; n * m];
        for (i, r) in rows.iter().enumerate() {
            for (j, &s) in r.iter().enumerate() {
                symbols[j * n + i] = s;
            }
        }
        Self::from_column_major(n, m, q, symbols)
    }

    fn from_column_major(n: usize, m: usize, q: usize, symbols: Vec<u8>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidDimensions(format!("n = {n}, M = {m}")));
        }
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidDimensions(format!(
                "q = {q} must lie in 2..={MAX_Q}"
            )));
        }
        for (idx, &s) in symbols.iter().enumerate() {
            if s as usize >= q {
                return Err(Error::SymbolOutOfRange {
                    position: idx % n + 1,
                    codeword: idx / n + 1,
                    symbol: s as u64,
                    q,
                });
            }
        }
        let code = Code { n, m, q, symbols };
        let mut seen: HashMap<&[u8], usize> = HashMap::with_capacity(m);
        for j in 1..=m {
            if let Some(prev) = seen.insert(code.codeword(j), j) {
                return Err(Error::DuplicateColumns(prev, j));
            }
        }
        Ok(code)
    }

    /// Draws `m` distinct uniformly random codewords of length `n` over `q` symbols.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, q: usize, rng: &mut R) -> Result<Self> {
        let space = (q as f64).powi(n as i32);
        if (m as f64) > space {
            return Err(Error::InvalidDimensions(format!(
                "cannot draw {m} distinct codewords from {q}^{n}"
            )));
        }
        let mut seen = HashSet::with_capacity(m);
        let mut columns = Vec::with_capacity(m);
        while columns.len() < m {
            let col: Vec<u8> = (0..n).map(|_| rng.random_range(0..q) as u8).collect();
            if seen.insert(col.clone()) {
                columns.push(col);
            }
        }
        Self::from_columns(q, columns)
    }

    /// Length of each codeword.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Alphabet size.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    /// Codeword `j`, 1-based.
    pub fn codeword(&self, j: usize) -> &[u8] {
        assert!(
            j >= 1 && j <= self.m,
            "codeword index {j} outside 1..={}",
            self.m
        );
        &self.symbols[(j - 1) * self.n..j * self.n]
    }

    /// Symbol of codeword `j` (1-based) at position `i` (0-based).
    #[inline]
    pub fn symbol(&self, j: usize, i: usize) -> u8 {
        self.symbols[(j - 1) * self.n + i]
    }

    pub fn codewords(&self) -> impl Iterator<Item = &[u8]> {
        self.symbols.chunks_exact(self.n)
    }

    /// Row `i` (0-based) of the incidence matrix.
    pub fn row(&self, i: usize) -> Vec<u8> {
        (1..=self.m).map(|j| self.symbol(j, i)).collect()
    }

    /// Index (1-based) of the codeword equal to `word`, if any.
    pub fn find(&self, word: &[u8]) -> Option<usize> {
        self.codewords().position(|c| c == word).map(|p| p + 1)
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.m {
            Err(Error::IndexOutOfRange {
                index: j,
                m: self.m,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Code({}, {}, {})\n{}",
            self.n,
            self.m,
            self.q,
            serialize_code(self)
        )
    }
}

/// Parses the text format described in the module docs.
pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header \"n M q\"".into(),
    })?;
    let dims = parse_numbers(hline, header)?;
    let [n, m, q] = dims[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header needs 3 numbers, found {}", dims.len()),
        });
    };
    let (n, m, q) = (n as usize, m as usize, q as usize);
    if n == 0 || m == 0 || !(2..=MAX_Q).contains(&q) {
        return Err(Error::Parse {
            line: hline,
            msg: format!("need n >= 1, M >= 1, 2 <= q <= {MAX_Q}"),
        });
    }

    let mut rows = Vec::with_capacity(n);
    for (lineno, line) in lines {
        if rows.len() == n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("more than {n} rows"),
            });
        }
        let vals = parse_numbers(lineno, line)?;
        if vals.len() != m {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("row has {} symbols, expected {m}", vals.len()),
            });
        }
        let mut row = Vec::with_capacity(m);
        for (j, v) in vals.into_iter().enumerate() {
            if v >= q as u64 {
                return Err(Error::SymbolOutOfRange {
                    position: rows.len() + 1,
                    codeword: j + 1,
                    symbol: v,
                    q,
                });
            }
            row.push(v as u8);
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Code::from_rows(q, &rows)
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a non-negative integer: {tok:?}"),
            })
        })
        .collect()
}

/// Canonical text form; `parse_code(&serialize_code(c)) == c`.
pub fn serialize_code(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.n, code.m, code.q);
    for i in 0..code.n {
        let row: Vec<String> = code.row(i).iter().map(|s| s.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

impl FromStr for Code {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_code(s)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_code(self))
    }
}
