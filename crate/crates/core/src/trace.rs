//! Soft tracing of averaging-attack colluders.
//!
//! The tracer first reads the exact coalition size off the generated word,
//! then repeats: rebuild the residual word of the not-yet-traced colluders,
//! take its descendant code, and pick out every suspect that holds a symbol
//! no other suspect holds at some position. Such a suspect must have
//! contributed that symbol, so it is a colluder.
//!
//! Three variants share this loop:
//! - [`soft_trace`] for binary codes,
//! - [`multiset_soft_trace`] when codewords may repeat (the inner code of a
//!   concatenation),
//! - [`two_stage_trace`] for concatenated codes, which traces each inner
//!   window as a multiset and then runs the unique-contributor step on the
//!   outer code.

use serde::{Serialize, Serializer};

use crate::attack::{residual_word, residual_word_multiset};
use crate::code::Code;
use crate::concat::{concatenate, window};
use crate::descend::{desc_from_word, suspects};
use crate::error::{Error, Result};
use crate::sets::{CodewordMultiset, IndexSet, PositionSets};
use crate::word::GeneratedWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Success,
    ConditionsViolated,
}

/// Diagnostics for one pass of a tracing loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Word averaged by the colluders not yet traced.
    pub residual: GeneratedWord,
    /// Descendant code handed to the unique-contributor step.
    pub descendant: PositionSets,
    pub suspects: IndexSet,
    /// Newly identified colluders.
    pub found: IndexSet,
}

/// Result of a tracing run. `colluders` is present iff the run succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceOutcome<C> {
    pub status: TraceStatus,
    pub colluders: Option<C>,
    /// Number of while-loop passes.
    pub iterations: usize,
    /// Coalition size the run was working towards.
    pub colluder_count: usize,
    pub reason: Option<String>,
    pub steps: Vec<TraceStep>,
}

impl<C> TraceOutcome<C> {
    pub fn is_success(&self) -> bool {
        self.status == TraceStatus::Success
    }

    fn violated(iterations: usize, count: usize, steps: Vec<TraceStep>, reason: String) -> Self {
        TraceOutcome {
            status: TraceStatus::ConditionsViolated,
            colluders: None,
            iterations,
            colluder_count: count,
            reason: Some(reason),
            steps,
        }
    }

    fn success(colluders: C, iterations: usize, count: usize, steps: Vec<TraceStep>) -> Self {
        TraceOutcome {
            status: TraceStatus::Success,
            colluders: Some(colluders),
            iterations,
            colluder_count: count,
            reason: None,
            steps,
        }
    }
}

#[derive(Serialize)]
struct OutcomeJson<'a, C> {
    status: TraceStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    colluders: Option<&'a C>,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

/// `{"status": .., "colluders": [..], "iterations": k}`; `colluders` is
/// omitted on failure, where a `reason` string is added instead.
impl<C: Serialize> Serialize for TraceOutcome<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OutcomeJson {
            status: self.status,
            colluders: self.colluders.as_ref(),
            iterations: self.iterations,
            reason: self.reason.as_deref(),
        }
        .serialize(s)
    }
}

/// Unique-contributor step: suspects of `r` that hold, at some position, a
/// symbol of `r` carried by no other suspect.
///
/// An empty result is not an error; tracers treat it as a failure of the
/// code to meet the algorithm's conditions.
pub fn find_inter(code: &Code, r: &PositionSets) -> Result<IndexSet> {
    Ok(find_inter_detailed(code, r)?.1)
}

/// [`find_inter`] that also returns the suspect set it filtered against.
pub fn find_inter_detailed(code: &Code, r: &PositionSets) -> Result<(IndexSet, IndexSet)> {
    let sus = suspects(code, r)?;
    let q = code.q();
    let mut counts = vec![0usize; q];
    let mut holder = vec![0usize; q];
    let mut found = Vec::new();
    for i in 0..code.n() {
        counts.iter_mut().for_each(|c| *c = 0);
        for j in sus.iter() {
            let s = code.symbol(j, i) as usize;
            counts[s] += 1;
            holder[s] = j;
        }
        for s in 0..q {
            if counts[s] == 1 && r.contains(i, s as u8) {
                found.push(holder[s]);
            }
        }
    }
    Ok((sus, IndexSet::new(found)?))
}

/// Coalition size for binary codes with the uniqueness property: the
/// largest reduced denominator of the generated word.
pub fn colluder_count_max(x: &GeneratedWord) -> u64 {
    x.max_denominator()
}

/// Coalition size for concatenated codes: the lcm of all reduced
/// denominators (saturating at `u64::MAX`).
pub fn colluder_count_lcm(x: &GeneratedWord) -> u64 {
    x.lcm_denominator()
}

fn check_word(code: &Code, x: &GeneratedWord) -> Result<()> {
    if !code.is_binary() {
        return Err(Error::NonBinary(code.q()));
    }
    if x.len() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Soft tracing for a binary code.
///
/// `t_cap` is the assumed bound on the coalition size. Succeeds with exactly
/// the colluders whenever the code has `t_cap`-uniqueness descendant code
/// and `x` is a genuine averaging-attack word.
pub fn soft_trace(code: &Code, x: &GeneratedWord, t_cap: usize) -> Result<TraceOutcome<IndexSet>> {
    check_word(code, x)?;
    let count = colluder_count_max(x);
    if count > t_cap as u64 {
        return Ok(TraceOutcome::violated(
            0,
            count.min(usize::MAX as u64) as usize,
            Vec::new(),
            format!("colluder count {count} exceeds bound {t_cap}"),
        ));
    }
    let t0 = count as usize;
    let mut traced = IndexSet::empty();
    let mut steps = Vec::new();
    let mut iterations = 0;
    while traced.len() < t0 {
        iterations += 1;
        let residual = match residual_word(x, t0, &traced, code) {
            Ok(w) => w,
            Err(e) => return Ok(TraceOutcome::violated(iterations, t0, steps, e.to_string())),
        };
        let r = desc_from_word(&residual);
        let (sus, found) = find_inter_detailed(code, &r)?;
        let fresh = found.difference(&traced);
        steps.push(TraceStep {
            residual,
            descendant: r,
            suspects: sus,
            found: found.clone(),
        });
        if fresh.is_empty() {
            return Ok(TraceOutcome::violated(
                iterations,
                t0,
                steps,
                "no suspect holds a unique symbol".into(),
            ));
        }
        traced = traced.union(&found);
    }
    if traced.len() != t0 {
        return Ok(TraceOutcome::violated(
            iterations,
            t0,
            steps,
            format!("identified {} codewords for {} colluders", traced.len(), t0),
        ));
    }
    Ok(TraceOutcome::success(traced, iterations, t0, steps))
}

/// Soft tracing when the same codeword may be used several times.
///
/// `size` is the multiset size, known to the caller. Each pass adds one copy
/// of every newly identified codeword, then subtracts it from the word.
pub fn multiset_soft_trace(
    code: &Code,
    x: &GeneratedWord,
    size: usize,
) -> Result<TraceOutcome<CodewordMultiset>> {
    check_word(code, x)?;
    if size == 0 {
        return Err(Error::InvalidParameter(
            "multiset size must be positive".into(),
        ));
    }
    let mut traced = CodewordMultiset::empty();
    let mut steps = Vec::new();
    let mut iterations = 0;
    while traced.size() < size {
        iterations += 1;
        let residual = match residual_word_multiset(x, size, &traced, code) {
            Ok(w) => w,
            Err(e) => {
                return Ok(TraceOutcome::violated(
                    iterations,
                    size,
                    steps,
                    e.to_string(),
                ))
            }
        };
        let r = desc_from_word(&residual);
        let (sus, found) = find_inter_detailed(code, &r)?;
        steps.push(TraceStep {
            residual,
            descendant: r,
            suspects: sus,
            found: found.clone(),
        });
        if found.is_empty() {
            return Ok(TraceOutcome::violated(
                iterations,
                size,
                steps,
                "no suspect holds a unique symbol".into(),
            ));
        }
        for j in found.iter() {
            traced.add(j, 1);
        }
    }
    if traced.size() != size {
        return Ok(TraceOutcome::violated(
            iterations,
            size,
            steps,
            format!(
                "identified {} codewords for multiset of size {}",
                traced.size(),
                size
            ),
        ));
    }
    Ok(TraceOutcome::success(traced, iterations, size, steps))
}

/// Two-stage soft tracing for `outer ∘ inner`.
///
/// Each pass traces every length-`n2` window of the residual word as a
/// multiset over the inner code (of the residual coalition size), turns the
/// recovered inner indices `j` into outer symbols `j - 1`, and runs the
/// unique-contributor step against the outer code.
pub fn two_stage_trace(
    outer: &Code,
    inner: &Code,
    x: &GeneratedWord,
    t_cap: usize,
) -> Result<TraceOutcome<IndexSet>> {
    let code = concatenate(outer, inner)?;
    check_word(&code, x)?;
    let n1 = outer.n();
    let count = colluder_count_lcm(x);
    if count > t_cap as u64 {
        return Ok(TraceOutcome::violated(
            0,
            count.min(usize::MAX as u64) as usize,
            Vec::new(),
            format!("colluder count {count} exceeds bound {t_cap}"),
        ));
    }
    let t0 = count as usize;
    let mut traced = IndexSet::empty();
    let mut steps = Vec::new();
    let mut iterations = 0;
    while traced.len() < t0 {
        iterations += 1;
        let remaining = t0 - traced.len();
        let residual = match residual_word(x, t0, &traced, &code) {
            Ok(w) => w,
            Err(e) => return Ok(TraceOutcome::violated(iterations, t0, steps, e.to_string())),
        };
        let mut masks = Vec::with_capacity(n1);
        for i in 1..=n1 {
            let xi = window(&residual, n1, i)?;
            let inner_out = multiset_soft_trace(inner, &xi, remaining)?;
            match inner_out.colluders {
                Some(ms) if ms.size() == remaining => {
                    masks.push(ms.iter().fold(0u64, |acc, (j, _)| acc | 1 << (j - 1)));
                }
                _ => {
                    return Ok(TraceOutcome::violated(
                        iterations,
                        t0,
                        steps,
                        format!("inner trace of window {i} failed"),
                    ))
                }
            }
        }
        let r = PositionSets::from_masks(masks);
        let (sus, found) = find_inter_detailed(outer, &r)?;
        let fresh = found.difference(&traced);
        steps.push(TraceStep {
            residual,
            descendant: r,
            suspects: sus,
            found: found.clone(),
        });
        if fresh.is_empty() {
            return Ok(TraceOutcome::violated(
                iterations,
                t0,
                steps,
                "no outer suspect holds a unique symbol".into(),
            ));
        }
        traced = traced.union(&found);
    }
    if traced.len() != t0 {
        return Ok(TraceOutcome::violated(
            iterations,
            t0,
            steps,
            format!("identified {} codewords for {} colluders", traced.len(), t0),
        ));
    }
    Ok(TraceOutcome::success(traced, iterations, t0, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{averaging_attack, multiset_averaging_attack};
    use crate::descend::descendant;
    use crate::samples::{concatenated_bd, example_code, inner_code_d, outer_code_b};

    fn word(pairs: &[(u64, u64)]) -> GeneratedWord {
        GeneratedWord::from_fractions(pairs).unwrap()
    }

    fn sets(v: &[&[u8]]) -> PositionSets {
        PositionSets::from_symbols(v.iter().map(|s| s.to_vec())).unwrap()
    }

    #[test]
    fn find_inter_examples() {
        let c = example_code();
        let r = sets(&[&[0], &[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(find_inter(&c, &r).unwrap(), IndexSet::from([3]));
        let r = sets(&[&[0], &[1], &[0, 1], &[0]]);
        assert_eq!(find_inter(&c, &r).unwrap(), IndexSet::from([1, 2]));
        for j in 1..=5 {
            let r = descendant(&c, &IndexSet::from([j])).unwrap();
            assert_eq!(find_inter(&c, &r).unwrap(), IndexSet::from([j]));
        }
    }

    #[test]
    fn find_inter_may_be_empty() {
        // Suspects {1,2,3} all share position 1; the full product set has
        // every symbol held twice.
        let c = Code::from_rows(2, &[vec![0, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        assert!(find_inter(&c, &PositionSets::full(2, 2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn colluder_counts() {
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        assert_eq!(colluder_count_max(&x), 3);
        assert_eq!(colluder_count_lcm(&x), 3);
        assert_eq!(colluder_count_max(&word(&[(0, 1), (1, 1), (1, 1)])), 1);
        assert_eq!(
            colluder_count_max(&word(&[(1, 2), (1, 1), (0, 1), (1, 2)])),
            2
        );
        let c = example_code();
        let x14 = averaging_attack(&c, &IndexSet::from([1, 4])).unwrap();
        assert_eq!(x14, word(&[(1, 2), (1, 2), (1, 2), (1, 2)]));
        assert_eq!(colluder_count_max(&x14), 2);
        assert_eq!(
            colluder_count_lcm(&word(&[(1, 2), (1, 3), (1, 1), (1, 6)])),
            6
        );
        let x = averaging_attack(&concatenated_bd(), &IndexSet::from([1, 2, 3])).unwrap();
        assert_eq!(x, word(&[(1, 3), (0, 1), (2, 3), (0, 1)]));
        assert_eq!(colluder_count_lcm(&x), 3);
    }

    #[test]
    fn soft_trace_worked_example() {
        let c = example_code();
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        let out = soft_trace(&c, &x, 3).unwrap();
        assert!(out.is_success());
        assert_eq!(out.colluders, Some(IndexSet::from([1, 2, 3])));
        assert_eq!(out.iterations, 2);
        assert_eq!(out.steps[0].suspects, IndexSet::from([1, 2, 3, 5]));
        assert_eq!(out.steps[0].found, IndexSet::from([3]));
        assert_eq!(
            out.steps[1].residual,
            word(&[(0, 1), (1, 1), (1, 2), (0, 1)])
        );
        assert_eq!(out.steps[1].suspects, IndexSet::from([1, 2]));
        assert_eq!(out.steps[1].found, IndexSet::from([1, 2]));
    }

    #[test]
    fn soft_trace_single_codeword() {
        let c = example_code();
        for j in 1..=5 {
            let x = GeneratedWord::from_codeword(c.codeword(j)).unwrap();
            let out = soft_trace(&c, &x, 3).unwrap();
            assert_eq!(out.colluders, Some(IndexSet::from([j])));
            assert_eq!(out.iterations, 1);
        }
    }

    #[test]
    fn soft_trace_count_above_cap() {
        let c = example_code();
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        let out = soft_trace(&c, &x, 2).unwrap();
        assert_eq!(out.status, TraceStatus::ConditionsViolated);
        assert_eq!(out.iterations, 0);
        assert!(out.colluders.is_none());
    }

    #[test]
    fn soft_trace_rejects_bad_input() {
        let b = outer_code_b();
        let x = word(&[(0, 1), (0, 1)]);
        assert_eq!(soft_trace(&b, &x, 2).unwrap_err(), Error::NonBinary(3));
        assert!(matches!(
            soft_trace(&example_code(), &x, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn soft_trace_inconsistent_word_fails_cleanly() {
        // Not an averaging word of any subset of this code.
        let c = example_code();
        let x = word(&[(1, 2), (1, 1), (0, 1), (1, 2)]);
        let out = soft_trace(&c, &x, 5).unwrap();
        assert_eq!(out.status, TraceStatus::ConditionsViolated);
    }

    #[test]
    fn multiset_trace_examples() {
        let d = inner_code_d();
        let out = multiset_soft_trace(&d, &word(&[(2, 3), (1, 3)]), 3).unwrap();
        assert_eq!(
            out.colluders,
            Some(CodewordMultiset::new([(2, 2), (3, 1)]).unwrap())
        );
        let out = multiset_soft_trace(&d, &word(&[(1, 3), (1, 3)]), 3).unwrap();
        assert_eq!(
            out.colluders,
            Some(CodewordMultiset::from_indices([1, 2, 3]).unwrap())
        );
        for j in 1..=3 {
            let x = GeneratedWord::from_codeword(d.codeword(j)).unwrap();
            let out = multiset_soft_trace(&d, &x, 1).unwrap();
            assert_eq!(
                out.colluders,
                Some(CodewordMultiset::from_indices([j]).unwrap())
            );
        }
        assert!(multiset_soft_trace(&d, &word(&[(1, 3), (1, 3)]), 0).is_err());
    }

    #[test]
    fn multiset_trace_all_small_multisets() {
        // Oracle: every multiset of size <= 3 over D is recovered (D has
        // 3-uniqueness descendant code by exhaustive check in props tests).
        let d = inner_code_d();
        for a in 0..=3usize {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    if a + b + c == 0 {
                        continue;
                    }
                    let ms = CodewordMultiset::new([(1, a), (2, b), (3, c)]).unwrap();
                    let x = multiset_averaging_attack(&d, &ms).unwrap();
                    let out = multiset_soft_trace(&d, &x, ms.size()).unwrap();
                    assert_eq!(out.colluders, Some(ms));
                }
            }
        }
    }

    #[test]
    fn two_stage_examples() {
        let (b, d) = (outer_code_b(), inner_code_d());
        let c = concatenated_bd();
        let x = averaging_attack(&c, &IndexSet::from([1, 2, 3])).unwrap();
        let out = two_stage_trace(&b, &d, &x, 3).unwrap();
        assert_eq!(out.colluders, Some(IndexSet::from([1, 2, 3])));
        for j in 1..=6 {
            let x = averaging_attack(&c, &IndexSet::from([j])).unwrap();
            let out = two_stage_trace(&b, &d, &x, 3).unwrap();
            assert_eq!(out.colluders, Some(IndexSet::from([j])));
        }
    }

    #[test]
    fn two_stage_without_uniqueness() {
        // B lacks 3-uniqueness; these two coalitions defeat the tracer.
        let (b, d) = (outer_code_b(), inner_code_d());
        let c = concatenated_bd();
        for s in [[1, 3, 5], [2, 4, 6]] {
            let x = averaging_attack(&c, &IndexSet::from(s)).unwrap();
            let out = two_stage_trace(&b, &d, &x, 3).unwrap();
            assert_eq!(out.status, TraceStatus::ConditionsViolated);
        }
        let x = averaging_attack(&c, &IndexSet::full(6)).unwrap();
        let out = two_stage_trace(&b, &d, &x, 6).unwrap();
        assert_ne!(out.colluders, Some(IndexSet::from([1, 2, 3])));
        if let Some(u) = out.colluders {
            assert_eq!(u, IndexSet::full(6));
        }
    }

    #[test]
    fn two_stage_length_mismatch() {
        let (b, d) = (outer_code_b(), inner_code_d());
        assert!(matches!(
            two_stage_trace(&b, &d, &word(&[(0, 1); 3]), 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn outcome_json() {
        let c = example_code();
        let x = word(&[(0, 1), (2, 3), (2, 3), (1, 3)]);
        let out = soft_trace(&c, &x, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"status":"success","colluders":[1,2,3],"iterations":2}"#
        );
        let d = inner_code_d();
        let out = multiset_soft_trace(&d, &word(&[(2, 3), (1, 3)]), 3).unwrap();
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"status":"success","colluders":[{"index":2,"mult":2},{"index":3,"mult":1}],"iterations":2}"#
        );
        let out = soft_trace(&c, &x, 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&out).unwrap();
        assert_eq!(v["status"], "conditions_violated");
        assert!(v.get("colluders").is_none());
    }
}
