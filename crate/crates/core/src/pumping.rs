//! The constructive heart of the crate: for a grammar in normal form and a
//! long-enough sentence, produce a five-way split `u v w x y` whose middle
//! can be repeated any number of times, check such a split from two
//! independent directions, and exhaustively refute candidate constants for
//! languages where no split works.
//!
//! The split comes from tree surgery. A sentence of length at least
//! `n = 2^k` (with `k` the nonterminal inventory size) forces a derivation
//! tree of height at least `k + 1`, so among the last `k + 1` labels on a
//! maximal root-to-leaf path some nonterminal repeats. Carving the tree at
//! the two occurrences yields an outer context (contributing `u` and `y`),
//! an inner context (contributing `v` and `x`), and a core subtree
//! (contributing `w`); regrafting the inner context `i` times yields a
//! valid tree for `u v^i w x^i y`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cyk::{cyk_member, cyk_tree, validate_tree};
use crate::exec;
use crate::symbol::{NonTerminal, Sentence};
use crate::transform::CnfGrammar;
use crate::tree::{find_duplicate, DerivationTree, TreeCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PumpingError {
    #[error("the grammar has {k} nonterminals, so the pumping constant 2^{k} overflows the supported range")]
    ConstantTooLarge { k: usize },
    #[error("the sentence is not in the language of the grammar")]
    NotInLanguage,
    #[error("the sentence has length {len}, shorter than the pumping constant {n}")]
    TooShort { len: usize, n: usize },
}

/// `2^k` for a `k`-nonterminal grammar: every sentence at least this long
/// admits a pumpable split. Refused for `k > 30`, where the constant (and
/// with it any sentence long enough to split) stops being practical.
pub fn pumping_constant(g: &CnfGrammar) -> Result<usize, PumpingError> {
    let k = g.nonterminal_count();
    if k > 30 {
        return Err(PumpingError::ConstantTooLarge { k });
    }
    Ok(1usize << k)
}

/// A pumpable split of a sentence: `u v w x y` with `|v x| >= 1` and
/// `|v w x| <= n`, together with the tree coordinates that produced it.
/// `outer_code` addresses the upper occurrence of the repeated nonterminal
/// in the derivation tree of the original sentence; `inner_code` continues
/// from there to the lower occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub u: Sentence,
    pub v: Sentence,
    pub w: Sentence,
    pub x: Sentence,
    pub y: Sentence,
    pub repeated: NonTerminal,
    pub outer_code: TreeCode,
    pub inner_code: TreeCode,
    pub n: usize,
}

impl Decomposition {
    /// `u v^i w x^i y`.
    pub fn pump(&self, i: usize) -> Sentence {
        Sentence::concat([
            &self.u,
            &self.v.repeated(i),
            &self.w,
            &self.x.repeated(i),
            &self.y,
        ])
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "u = {}", self.u)?;
        writeln!(f, "v = {}", self.v)?;
        writeln!(f, "w = {}", self.w)?;
        writeln!(f, "x = {}", self.x)?;
        writeln!(f, "y = {}", self.y)?;
        writeln!(f, "repeated nonterminal = {}", self.repeated)?;
        writeln!(f, "outer code = {}", self.outer_code)?;
        writeln!(f, "inner code = {}", self.inner_code)?;
        write!(f, "pumping constant n = {}", self.n)
    }
}

/// Computes a pumpable split for `s`, which must be in the language and at
/// least the pumping constant long. Deterministic: the same grammar and
/// sentence always give the same split.
pub fn decompose_sentence(g: &CnfGrammar, s: &Sentence) -> Result<Decomposition, PumpingError> {
    let k = g.nonterminal_count();
    let n = pumping_constant(g)?;
    if s.len() < n {
        return Err(PumpingError::TooShort { len: s.len(), n });
    }
    let t = cyk_tree(g, s).ok_or(PumpingError::NotInLanguage)?;

    // A tree with at least 2^k leaves has height at least k + 1, so its
    // longest path carries at least k + 1 nonterminal labels before the
    // final terminal.
    let z = t.longest_path();
    let h = t.height();
    assert!(h >= k + 1, "frontier of length {} forces height above {k}", s.len());
    let labels: Vec<NonTerminal> = z.symbols()[..z.len() - 1]
        .iter()
        .map(|sym| {
            sym.as_nonterminal()
                .expect("every path symbol before the terminal is a nonterminal")
                .clone()
        })
        .collect();
    let m = labels.len();

    // The last k + 1 labels draw on k nonterminals, so one repeats; take
    // the first repeating label with its first and last occurrence.
    let universe: Vec<NonTerminal> = g.base().nonterminals().iter().cloned().collect();
    let tail = &labels[m - (k + 1)..];
    let dup = find_duplicate(tail, &universe)
        .expect("k + 1 labels over a k-nonterminal inventory repeat");
    let (j1, j2) = (m - (k + 1) + dup.first, m - (k + 1) + dup.last);

    // Carve the tree at depth j1 (the upper occurrence), then carve that
    // subtree at the lower occurrence. Depth 0 means the upper occurrence
    // is the root itself and there is nothing to carve off.
    let c = t.code_of_path(&z).expect("the tree's own longest path has a code");
    let (outer_code, t1, u, y, c1) = if j1 == 0 {
        (TreeCode::empty(), t.clone(), Sentence::empty(), Sentence::empty(), c)
    } else {
        let split = t
            .split_code(&z.symbols()[..j1], &z.symbols()[j1..], &c)
            .expect("the longest path splits at the upper occurrence");
        (split.prefix, split.subtree, split.left, split.right, split.suffix)
    };
    let split = t1
        .split_code(&z.symbols()[j1..j2], &z.symbols()[j2..], &c1)
        .expect("the remaining path splits at the lower occurrence");
    let (inner_code, t2, v, x) = (split.prefix, split.subtree, split.left, split.right);
    let w = t2.frontier();

    // The shape guarantees behind the split, checked outright because they
    // are what downstream consumers rely on.
    assert_eq!(t1.root(), &dup.value, "upper occurrence carries the repeated label");
    assert_eq!(t2.root(), &dup.value, "lower occurrence carries the repeated label");
    assert_eq!(t1.height(), k + 1 - dup.first, "upper subtree height is determined");
    assert_eq!(t2.height(), k + 1 - dup.last, "lower subtree height is determined");
    assert!(v.len() + x.len() >= 1, "the binary node above the lower occurrence adds a sibling");
    assert!(v.len() + w.len() + x.len() <= n, "the upper subtree is too shallow to overflow n");
    assert_eq!(
        Sentence::concat([&u, &v, &w, &x, &y]),
        *s,
        "the five parts reassemble the sentence"
    );
    debug_assert_eq!(t.decompose(&outer_code), Some((u.clone(), t1.clone(), y.clone())));
    debug_assert_eq!(t1.decompose(&inner_code), Some((v.clone(), t2, x.clone())));

    Ok(Decomposition {
        u,
        v,
        w,
        x,
        y,
        repeated: dup.value,
        outer_code,
        inner_code,
        n,
    })
}

/// One pumped sentence in a verification report. `member` is the verdict;
/// the two route fields behind it record how it was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PumpRow {
    pub i: usize,
    pub sentence: Sentence,
    pub member: bool,
    #[serde(skip_serializing)]
    pub by_parse: bool,
    #[serde(skip_serializing)]
    pub by_surgery: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PumpReport {
    pub rows: Vec<PumpRow>,
    pub overall: bool,
}

/// Checks `u v^i w x^i y` for every `i` up to `i_max`, each sentence by two
/// independent routes: parsing it from scratch, and rebuilding a derivation
/// tree for it by surgery on the tree of the original sentence. A row
/// passes only when both routes succeed; route failures are reported in the
/// row, never raised.
pub fn verify_pumping(g: &CnfGrammar, d: &Decomposition, i_max: usize) -> PumpReport {
    let original = d.pump(1);
    let base_tree = cyk_tree(g, &original);
    let indices: Vec<usize> = (0..=i_max).collect();
    let rows = exec::map_slice(&indices, |&i| {
        let sentence = d.pump(i);
        let by_parse = cyk_member(g, &sentence);
        let by_surgery = base_tree
            .as_ref()
            .is_some_and(|t| surgery_route(g, t, d, i, &sentence));
        PumpRow { i, member: by_parse && by_surgery, by_parse, by_surgery, sentence }
    });
    let overall = rows.iter().all(|r| r.member);
    PumpReport { rows, overall }
}

/// Builds the pumped tree (pump the inner context, regraft into the outer
/// context) and checks it is a valid derivation of the expected sentence
/// from the start symbol. Any surgery failure is a `false`, not a panic:
/// a corrupted split should fail verification, not crash it.
fn surgery_route(
    g: &CnfGrammar,
    t: &DerivationTree,
    d: &Decomposition,
    i: usize,
    expected: &Sentence,
) -> bool {
    let Some(t1) = t.subtree(&d.outer_code) else {
        return false;
    };
    let Ok(pumped) = t1.pump_tree(&d.inner_code, i) else {
        return false;
    };
    let Ok(full) = t.replace_at(&d.outer_code, pumped) else {
        return false;
    };
    validate_tree(g, &full) && full.root() == g.fresh_start() && full.frontier() == *expected
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationOutcome {
    Refuted,
    NotRefuted,
}

/// A five-way split of the candidate sentence, by sentences rather than
/// tree coordinates: refutation quantifies over all splits, not just those
/// a tree produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSentences {
    pub u: Sentence,
    pub v: Sentence,
    pub w: Sentence,
    pub x: Sentence,
    pub y: Sentence,
}

/// A split together with the smallest `i` whose pumped sentence leaves the
/// language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationWitness {
    pub split: SplitSentences,
    pub failing_i: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    pub outcome: RefutationOutcome,
    pub n: usize,
    pub i_max: usize,
    pub total_splits: usize,
    /// When refuted: one witness per split, in enumeration order.
    pub witnesses: Vec<RefutationWitness>,
    /// When not refuted: the first split every tested `i` fails to break.
    pub surviving_split: Option<SplitSentences>,
}

/// Tests whether `n` can be a pumping constant for the language decided by
/// `member`, using `s` as the long sentence. Enumerates every split
/// `u v w x y` of `s` with `|v x| >= 1` and `|v w x| <= n` and pumps each
/// with `i = 0..=i_max`. If every split has some failing `i`, the language
/// cannot be pumped at `n` — for a context-free language this refutes the
/// candidate constant, and if it holds for all `n` the language is not
/// context-free. One surviving split leaves the candidate undecided.
///
/// Splits are enumerated in lexicographic order of their three cut points
/// and the report is deterministic.
pub fn refute_candidate<F>(member: F, s: &Sentence, n: usize, i_max: usize) -> RefutationReport
where
    F: Fn(&Sentence) -> bool + Sync,
{
    let len = s.len();
    let mut cuts: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in 0..=len {
        for b in a..=len {
            for c in b..=len {
                for e in c..=len.min(a + n) {
                    if (b - a) + (e - c) >= 1 {
                        cuts.push((a, b, c, e));
                    }
                }
            }
        }
    }
    let total_splits = cuts.len();

    let split_at = |&(a, b, c, e): &(usize, usize, usize, usize)| SplitSentences {
        u: s.slice(0..a),
        v: s.slice(a..b),
        w: s.slice(b..c),
        x: s.slice(c..e),
        y: s.slice(e..len),
    };
    let failures: Vec<Option<usize>> = exec::map_slice(&cuts, |cut| {
        let sp = split_at(cut);
        (0..=i_max).find(|&i| {
            let pumped = Sentence::concat([&sp.u, &sp.v.repeated(i), &sp.w, &sp.x.repeated(i), &sp.y]);
            !member(&pumped)
        })
    });

    if failures.iter().all(Option::is_some) {
        let witnesses = cuts
            .iter()
            .zip(&failures)
            .map(|(cut, fail)| RefutationWitness {
                split: split_at(cut),
                failing_i: fail.expect("checked above"),
            })
            .collect();
        RefutationReport {
            outcome: RefutationOutcome::Refuted,
            n,
            i_max,
            total_splits,
            witnesses,
            surviving_split: None,
        }
    } else {
        let surviving_split = cuts
            .iter()
            .zip(&failures)
            .find(|(_, fail)| fail.is_none())
            .map(|(cut, _)| split_at(cut));
        RefutationReport {
            outcome: RefutationOutcome::NotRefuted,
            n,
            i_max,
            total_splits,
            witnesses: Vec::new(),
            surviving_split,
        }
    }
}
