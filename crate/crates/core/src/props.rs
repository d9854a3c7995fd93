//! Brute-force verifiers for fingerprinting-code classes.
//!
//! Every checker walks all colluder sets of size `1..=t` (sizes ascending,
//! colexicographic within a size), stops at the first violation and returns
//! it as a witness. A global budget bounds the number of subset and
//! parent-candidate evaluations; running out is an error, never a `true`.
//!
//! | property | condition on every `C0`, `1 <= |C0| <= t` |
//! |---|---|
//! | frameproof | `desc(C0) ∩ C = C0` |
//! | separable | `desc(C1) != desc(C2)` for distinct `C1, C2` |
//! | secure list decoding | separable and `|desc(C0) ∩ C| <= L` |
//! | strongly separable | intersection of all parent sets is `C0` |
//! | SMIPPC | intersection of all parent sets is non-empty |
//! | uniqueness descendant | some `c in C0` has a symbol no other suspect has |

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::code::Code;
use crate::descend::{CoverageTable, ParentSearch, SymbolIndex, DEFAULT_PARENT_CAP};
use crate::error::{Error, Result};
use crate::sets::{IndexSet, PositionSets};
use crate::subsets::{count_up_to, for_each_subset};

/// Default number of subset evaluations allowed per check.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub budget: u64,
    /// Cap on `2^|suspects|` for parent-set enumeration.
    pub parent_cap: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            budget: DEFAULT_BUDGET,
            parent_cap: DEFAULT_PARENT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A colluder set violating the condition.
    Subset(IndexSet),
    /// Two distinct colluder sets with the same descendant code.
    Pair(IndexSet, IndexSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub checked_subsets: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Frameproof,
    Separable,
    Scld { list_cap: usize },
    StronglySeparable,
    Smippc,
    Udc,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Frameproof => "fpc",
            Property::Separable => "sc",
            Property::Scld { .. } => "scld",
            Property::StronglySeparable => "ssc",
            Property::Smippc => "smippc",
            Property::Udc => "udc",
        }
    }

    /// Parses `fpc`, `sc`, `ssc`, `smippc`, `udc`, or `scld` (which takes
    /// `list_cap`).
    pub fn parse(name: &str, list_cap: usize) -> Result<Self> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "fpc" => Property::Frameproof,
            "sc" => Property::Separable,
            "scld" => Property::Scld { list_cap },
            "ssc" => Property::StronglySeparable,
            "smippc" => Property::Smippc,
            "udc" => Property::Udc,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown property {other:?}"
                )))
            }
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs property checks against one code, sharing precomputed indexes.
pub struct Checker<'a> {
    code: &'a Code,
    config: CheckConfig,
    symbols: SymbolIndex,
    coverage: CoverageTable,
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self, k: u64) -> Result<()> {
        self.used = self.used.saturating_add(k);
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

enum Stop {
    Violation(Witness),
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

impl<'a> Checker<'a> {
    pub fn new(code: &'a Code) -> Self {
        Self::with_config(code, CheckConfig::default())
    }

    pub fn with_config(code: &'a Code, config: CheckConfig) -> Self {
        Checker {
            code,
            config,
            symbols: SymbolIndex::new(code),
            coverage: CoverageTable::new(code),
        }
    }

    pub fn check(&self, property: Property, t: usize) -> Result<PropertyVerdict> {
        match property {
            Property::Frameproof => self.frameproof(t),
            Property::Separable => self.separable(t),
            Property::Scld { list_cap } => self.scld(t, list_cap),
            Property::StronglySeparable => self.strongly_separable(t),
            Property::Smippc => self.smippc(t),
            Property::Udc => self.udc(t),
        }
    }

    fn descendant(&self, subset: &[usize]) -> PositionSets {
        let mut masks = vec![0u64; self.code.n()];
        for &j in subset {
            for (i, m) in masks.iter_mut().enumerate() {
                *m |= 1 << self.code.symbol(j, i);
            }
        }
        PositionSets::from_masks(masks)
    }

    fn suspects(&self, desc: &PositionSets) -> Vec<usize> {
        self.symbols.suspects(desc).ones().map(|b| b + 1).collect()
    }

    /// Drives `visit` over all subsets, translating the first violation
    /// into a verdict.
    fn run(
        &self,
        t: usize,
        mut visit: impl FnMut(&[usize], &mut Budget) -> Result<(), Stop>,
    ) -> Result<PropertyVerdict> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        let m = self.code.m();
        if count_up_to(m, t) > self.config.budget {
            return Err(Error::BudgetExceeded(self.config.budget));
        }
        let mut budget = Budget {
            limit: self.config.budget,
            used: 0,
        };
        let mut checked = 0u64;
        let res = for_each_subset(m, t, |s| {
            checked += 1;
            budget.spend(1)?;
            visit(s, &mut budget)
        });
        match res {
            Ok(()) => Ok(PropertyVerdict {
                holds: true,
                witness: None,
                checked_subsets: checked,
            }),
            Err(Stop::Violation(w)) => Ok(PropertyVerdict {
                holds: false,
                witness: Some(w),
                checked_subsets: checked,
            }),
            Err(Stop::Fail(e)) => Err(e),
        }
    }

    pub fn frameproof(&self, t: usize) -> Result<PropertyVerdict> {
        self.run(t, |s, _| {
            let sus = self.symbols.suspects(&self.descendant(s));
            if sus.count_ones(..) != s.len() {
                return Err(Stop::Violation(Witness::Subset(IndexSet::from_sorted(
                    s.to_vec(),
                ))));
            }
            Ok(())
        })
    }

    pub fn separable(&self, t: usize) -> Result<PropertyVerdict> {
        let mut seen: HashMap<PositionSets, IndexSet> = HashMap::new();
        self.run(t, |s, _| {
            let subset = IndexSet::from_sorted(s.to_vec());
            match seen.entry(self.descendant(s)) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    Err(Stop::Violation(Witness::Pair(e.get().clone(), subset)))
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(subset);
                    Ok(())
                }
            }
        })
    }

    pub fn scld(&self, t: usize, list_cap: usize) -> Result<PropertyVerdict> {
        let mut seen: HashMap<PositionSets, IndexSet> = HashMap::new();
        self.run(t, |s, _| {
            let subset = IndexSet::from_sorted(s.to_vec());
            let desc = self.descendant(s);
            if self.symbols.suspects(&desc).count_ones(..) > list_cap {
                return Err(Stop::Violation(Witness::Subset(subset)));
            }
            if let Some(prev) = seen.get(&desc) {
                return Err(Stop::Violation(Witness::Pair(prev.clone(), subset)));
            }
            seen.insert(desc, subset);
            Ok(())
        })
    }

    /// Intersection of all parent sets of `s`, as a mask over the suspect
    /// list, with early exit once `done` reports the answer is settled.
    fn parent_intersection(
        &self,
        s: &[usize],
        budget: &mut Budget,
        done: impl Fn(u64, u64) -> bool,
    ) -> Result<(u64, u64), Stop> {
        let subset = IndexSet::from_sorted(s.to_vec());
        let members = self.suspects(&self.descendant(s));
        let search =
            ParentSearch::with_suspects(&self.coverage, &subset, members, self.config.parent_cap)?;
        let own = s.iter().fold(0u64, |acc, j| {
            let k = search
                .members()
                .binary_search(j)
                .expect("colluders are suspects");
            acc | 1 << k
        });
        let mut inter = u64::MAX;
        let nodes = search.for_each(&mut |mask| {
            inter &= mask;
            if done(inter, own) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        budget.spend(nodes)?;
        Ok((inter, own))
    }

    pub fn strongly_separable(&self, t: usize) -> Result<PropertyVerdict> {
        self.run(t, |s, budget| {
            let (inter, own) = self.parent_intersection(s, budget, |i, own| i & own != own)?;
            if inter != own {
                return Err(Stop::Violation(Witness::Subset(IndexSet::from_sorted(
                    s.to_vec(),
                ))));
            }
            Ok(())
        })
    }

    pub fn smippc(&self, t: usize) -> Result<PropertyVerdict> {
        self.run(t, |s, budget| {
            let (inter, _) = self.parent_intersection(s, budget, |i, _| i == 0)?;
            if inter == 0 {
                return Err(Stop::Violation(Witness::Subset(IndexSet::from_sorted(
                    s.to_vec(),
                ))));
            }
            Ok(())
        })
    }

    pub fn udc(&self, t: usize) -> Result<PropertyVerdict> {
        let q = self.code.q();
        let mut counts = vec![0usize; q];
        self.run(t, |s, _| {
            let sus = self.suspects(&self.descendant(s));
            for i in 0..self.code.n() {
                counts.iter_mut().for_each(|c| *c = 0);
                for &j in &sus {
                    counts[self.code.symbol(j, i) as usize] += 1;
                }
                if s.iter()
                    .any(|&j| counts[self.code.symbol(j, i) as usize] == 1)
                {
                    return Ok(());
                }
            }
            Err(Stop::Violation(Witness::Subset(IndexSet::from_sorted(
                s.to_vec(),
            ))))
        })
    }
}

/// `t`-frameproof: every coalition of size `<= t` frames no one else.
pub fn is_frameproof(code: &Code, t: usize) -> Result<PropertyVerdict> {
    Checker::new(code).frameproof(t)
}

/// `t̄`-separable: coalitions of size `<= t` have pairwise distinct descendant codes.
pub fn is_separable(code: &Code, t: usize) -> Result<PropertyVerdict> {
    Checker::new(code).separable(t)
}

/// Separable with every suspect list bounded by `list_cap`.
pub fn is_scld(code: &Code, t: usize, list_cap: usize) -> Result<PropertyVerdict> {
    Checker::new(code).scld(t, list_cap)
}

pub fn is_strongly_separable(code: &Code, t: usize) -> Result<PropertyVerdict> {
    Checker::new(code).strongly_separable(t)
}

pub fn is_smippc(code: &Code, t: usize) -> Result<PropertyVerdict> {
    Checker::new(code).smippc(t)
}

/// `t`-uniqueness descendant code, the condition under which soft tracing
/// recovers every coalition of size `<= t`.
pub fn has_udc(code: &Code, t: usize) -> Result<PropertyVerdict> {
    Checker::new(code).udc(t)
}

/// `log_q(M) / n`.
pub fn code_rate(code: &Code) -> f64 {
    (code.m() as f64).ln() / (code.q() as f64).ln() / code.n() as f64
}
