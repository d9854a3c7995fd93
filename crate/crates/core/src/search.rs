//! Searching for large codes with a given property at small parameters.
//!
//! All searchable properties are hereditary: deleting codewords never
//! breaks them, since suspect lists and parent sets only shrink. Greedy
//! search therefore grows a code one column at a time, and exhaustive
//! search can prune any branch whose current code already fails.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::code::{serialize_code, Code, MAX_Q};
use crate::error::{Error, Result};
use crate::props::{code_rate, CheckConfig, Checker, Property};

/// Exhaustive mode is only offered when `n * q` is at most this.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Cap on `q^n` for enumerating candidate words.
const MAX_WORDS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub q: usize,
    pub t: usize,
    pub property: Property,
    pub mode: SearchMode,
    pub seed: u64,
    /// Greedy restarts, each over a fresh shuffle.
    pub trials: usize,
    /// Exhaustive search nodes allowed before giving up.
    pub node_budget: u64,
    pub check: CheckConfig,
}

impl SearchConfig {
    pub fn greedy(n: usize, q: usize, t: usize, property: Property, seed: u64) -> Self {
        SearchConfig {
            n,
            q,
            t,
            property,
            mode: SearchMode::Greedy,
            seed,
            trials: 16,
            node_budget: 1_000_000,
            check: CheckConfig::default(),
        }
    }

    pub fn exhaustive(n: usize, q: usize, t: usize, property: Property) -> Self {
        SearchConfig {
            mode: SearchMode::Exhaustive,
            ..Self::greedy(n, q, t, property, 0)
        }
    }
}

fn text<S: Serializer>(code: &Code, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&serialize_code(code))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub property: String,
    pub mode: SearchMode,
    pub n: usize,
    pub q: usize,
    pub t: usize,
    pub seed: u64,
    pub m: usize,
    pub rate: f64,
    /// True only when exhaustive search finished within its budget.
    pub optimal: bool,
    pub nodes: u64,
    #[serde(serialize_with = "text")]
    pub code: Code,
}

fn all_words(n: usize, q: usize) -> Result<Vec<Vec<u8>>> {
    if n == 0 || !(2..=MAX_Q).contains(&q) {
        return Err(Error::InvalidDimensions(format!("n = {n}, q = {q}")));
    }
    let total = (q as u64)
        .checked_pow(n as u32)
        .filter(|&w| w <= MAX_WORDS as u64)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("{q}^{n} candidate words is too many to enumerate"))
        })? as usize;
    Ok((0..total)
        .map(|mut k| {
            let mut w = vec![0u8; n];
            for s in w.iter_mut().rev() {
                *s = (k % q) as u8;
                k /= q;
            }
            w
        })
        .collect())
}

fn holds(cols: &[Vec<u8>], cfg: &SearchConfig) -> Result<bool> {
    if cols.is_empty() {
        return Ok(true);
    }
    let code = Code::from_columns(cfg.q, cols.to_vec())?;
    let verdict = Checker::with_config(&code, cfg.check).check(cfg.property, cfg.t)?;
    Ok(verdict.holds)
}

fn report(
    cfg: &SearchConfig,
    cols: Vec<Vec<u8>>,
    optimal: bool,
    nodes: u64,
) -> Result<SearchReport> {
    let code = Code::from_columns(cfg.q, cols)?;
    Ok(SearchReport {
        property: cfg.property.to_string(),
        mode: cfg.mode,
        n: cfg.n,
        q: cfg.q,
        t: cfg.t,
        seed: cfg.seed,
        m: code.m(),
        rate: code_rate(&code),
        optimal,
        nodes,
        code,
    })
}

pub fn search(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    match cfg.mode {
        SearchMode::Greedy => greedy(cfg),
        SearchMode::Exhaustive => exhaustive(cfg),
    }
}

fn greedy(cfg: &SearchConfig) -> Result<SearchReport> {
    let mut words = all_words(cfg.n, cfg.q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Vec<Vec<u8>> = Vec::new();
    let mut nodes = 0u64;
    for _ in 0..cfg.trials.max(1) {
        words.shuffle(&mut rng);
        let mut cols: Vec<Vec<u8>> = Vec::new();
        for w in &words {
            cols.push(w.clone());
            nodes += 1;
            if !holds(&cols, cfg)? {
                cols.pop();
            }
        }
        if cols.len() > best.len() {
            best = cols;
        }
        if best.len() == words.len() {
            break;
        }
    }
    report(cfg, best, false, nodes)
}

struct Exhaustive<'a> {
    cfg: &'a SearchConfig,
    words: Vec<Vec<u8>>,
    cols: Vec<Vec<u8>>,
    best: Vec<Vec<u8>>,
    nodes: u64,
    exhausted: bool,
}

impl Exhaustive<'_> {
    fn dfs(&mut self, next: usize) -> Result<()> {
        if self.cols.len() > self.best.len() {
            self.best = self.cols.clone();
        }
        for k in next..self.words.len() {
            if self.cols.len() + (self.words.len() - k) <= self.best.len() {
                return Ok(());
            }
            if self.nodes >= self.cfg.node_budget {
                self.exhausted = true;
                return Ok(());
            }
            self.nodes += 1;
            self.cols.push(self.words[k].clone());
            if holds(&self.cols, self.cfg)? {
                self.dfs(k + 1)?;
            }
            self.cols.pop();
            if self.exhausted {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Largest code with the property, by backtracking over ordered column
/// sets. Reports `optimal = false` if the node budget ran out first.
fn exhaustive(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.n * cfg.q > EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search needs n*q <= {EXHAUSTIVE_LIMIT}, got {}",
            cfg.n * cfg.q
        )));
    }
    let mut state = Exhaustive {
        cfg,
        words: all_words(cfg.n, cfg.q)?,
        cols: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        exhausted: false,
    };
    state.dfs(0)?;
    let optimal = !state.exhausted;
    report(cfg, state.best, optimal, state.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::is_smippc;

    const SEARCHABLE: [Property; 5] = [
        Property::Frameproof,
        Property::Separable,
        Property::StronglySeparable,
        Property::Smippc,
        Property::Udc,
    ];

    // Independent oracle: every subset of the q^n words, largest passing.
    fn brute_max(n: usize, q: usize, t: usize, p: Property) -> usize {
        let words = all_words(n, q).unwrap();
        let mut best = 0;
        for mask in 1u32..1 << words.len() {
            let k = mask.count_ones() as usize;
            if k <= best {
                continue;
            }
            let cols: Vec<_> = (0..words.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| words[b].clone())
                .collect();
            let code = Code::from_columns(q, cols).unwrap();
            if Checker::new(&code).check(p, t).unwrap().holds {
                best = k;
            }
        }
        best
    }

    #[test]
    fn trivial_binary_line() {
        let r = search(&SearchConfig::greedy(1, 2, 1, Property::Udc, 3)).unwrap();
        assert_eq!(r.m, 2);
        assert!(!r.optimal);
        let r = search(&SearchConfig::exhaustive(1, 2, 1, Property::Udc)).unwrap();
        assert_eq!(r.m, 2);
        assert!(r.optimal);
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            for t in 1..=3 {
                for p in SEARCHABLE {
                    let r = search(&SearchConfig::exhaustive(n, q, t, p)).unwrap();
                    assert!(r.optimal);
                    assert_eq!(r.m, brute_max(n, q, t, p), "n={n} q={q} t={t} {p}");
                }
            }
        }
    }

    #[test]
    fn greedy_finds_five_word_smippc() {
        let r = search(&SearchConfig::greedy(4, 2, 3, Property::Smippc, 1)).unwrap();
        assert!(r.m >= 5, "m = {}", r.m);
        assert!(is_smippc(&r.code, 3).unwrap().holds);
    }

    #[test]
    fn greedy_output_reverifies_and_is_reproducible() {
        for p in SEARCHABLE {
            let cfg = SearchConfig::greedy(3, 3, 2, p, 42);
            let r = search(&cfg).unwrap();
            assert!(Checker::new(&r.code).check(p, 2).unwrap().holds);
            assert_eq!(search(&cfg).unwrap(), r);
        }
    }

    #[test]
    fn budget_marks_non_optimal() {
        let mut cfg = SearchConfig::exhaustive(2, 3, 1, Property::Udc);
        cfg.node_budget = 3;
        let r = search(&cfg).unwrap();
        assert!(!r.optimal);
        assert_eq!(r.m, 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(search(&SearchConfig::exhaustive(5, 3, 2, Property::Udc)).is_err());
        assert!(search(&SearchConfig::greedy(2, 1, 2, Property::Udc, 0)).is_err());
        assert!(search(&SearchConfig::greedy(40, 2, 2, Property::Udc, 0)).is_err());
        assert!(search(&SearchConfig::greedy(2, 2, 0, Property::Udc, 0)).is_err());
    }

    #[test]
    fn report_json_carries_code_text() {
        let r = search(&SearchConfig::exhaustive(1, 2, 1, Property::Frameproof)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["code"], "1 2 2\n0 1\n");
        assert_eq!(v["mode"], "exhaustive");
        assert_eq!(v["optimal"], true);
    }
}
