//! CYK chart parsing over grammars in Chomsky normal form: membership,
//! derivation-tree extraction, and tree validation.

use crate::grammar::Rule;
use crate::symbol::{NonTerminal, Sentence, Symbol};
use crate::transform::CnfGrammar;
use crate::tree::DerivationTree;

/// Rules compiled to dense indices so repeated queries against one grammar
/// skip the string comparisons.
pub struct CykIndex<'g> {
    g: &'g CnfGrammar,
    nts: Vec<NonTerminal>,
    start_id: usize,
    /// terminal name -> [(rule index, lhs id)], in rule order.
    lexical: std::collections::BTreeMap<String, Vec<(usize, usize)>>,
    /// (rule index, lhs id, left id, right id), in rule order.
    pairs: Vec<(usize, usize, usize, usize)>,
}

impl<'g> CykIndex<'g> {
    pub fn new(g: &'g CnfGrammar) -> Self {
        let nts: Vec<NonTerminal> = g.base().nonterminals().iter().cloned().collect();
        let id = |n: &NonTerminal| nts.binary_search(n).expect("inventory is complete");
        let start_id = id(g.base().start());
        let mut lexical: std::collections::BTreeMap<String, Vec<(usize, usize)>> =
            Default::default();
        let mut pairs = Vec::new();
        for (idx, rule) in g.base().rules().enumerate() {
            match rule.rhs() {
                [Symbol::T(t)] => lexical
                    .entry(t.name().to_string())
                    .or_default()
                    .push((idx, id(rule.lhs()))),
                [Symbol::N(l), Symbol::N(r)] => {
                    pairs.push((idx, id(rule.lhs()), id(l), id(r)))
                }
                [] => {} // the start's empty rule; handled by has_empty_rule
                _ => unreachable!("CnfGrammar guarantees normal-form rules"),
            }
        }
        CykIndex { g, nts, start_id, lexical, pairs }
    }

    fn k(&self) -> usize {
        self.nts.len()
    }

    /// `chart[((len - 1) * n + start) * k + nt]` says whether `nt` derives
    /// `s[start .. start + len]`.
    fn chart(&self, s: &Sentence) -> Vec<bool> {
        let n = s.len();
        let k = self.k();
        let mut chart = vec![false; n * n * k];
        let cell = |start: usize, len: usize| ((len - 1) * n + start) * k;
        for (pos, t) in s.iter().enumerate() {
            if let Some(hits) = self.lexical.get(t.name()) {
                for &(_, lhs) in hits {
                    chart[cell(pos, 1) + lhs] = true;
                }
            }
        }
        for len in 2..=n {
            for start in 0..=n - len {
                for split in 1..len {
                    let left = cell(start, split);
                    let right = cell(start + split, len - split);
                    let here = cell(start, len);
                    for &(_, lhs, l, r) in &self.pairs {
                        if chart[left + l] && chart[right + r] {
                            chart[here + lhs] = true;
                        }
                    }
                }
            }
        }
        chart
    }

    pub fn member(&self, s: &Sentence) -> bool {
        if s.is_empty() {
            return self.g.has_empty_rule();
        }
        let chart = self.chart(s);
        let n = s.len();
        chart[((n - 1) * n) * self.k() + self.start_id]
    }

    /// The canonical derivation tree for a nonempty member sentence: at each
    /// chart cell the lowest-indexed rule wins, then the shortest left
    /// split. `None` for non-members and for the empty sentence, which has
    /// no binary derivation tree.
    pub fn tree(&self, s: &Sentence) -> Option<DerivationTree> {
        if s.is_empty() {
            return None;
        }
        let n = s.len();
        let k = self.k();
        let chart = self.chart(s);
        let cell = |start: usize, len: usize| ((len - 1) * n + start) * k;
        if !chart[cell(0, n) + self.start_id] {
            return None;
        }

        fn build(
            index: &CykIndex<'_>,
            chart: &[bool],
            s: &Sentence,
            start: usize,
            len: usize,
            nt: usize,
        ) -> DerivationTree {
            let n = s.len();
            let k = index.k();
            let cell = |start: usize, len: usize| ((len - 1) * n + start) * k;
            if len == 1 {
                let t = &s.as_slice()[start];
                let hits = index.lexical.get(t.name()).expect("cell was derivable");
                assert!(hits.iter().any(|(_, lhs)| *lhs == nt), "cell was derivable");
                return DerivationTree::leaf(index.nts[nt].clone(), t.clone());
            }
            for &(_, lhs, l, r) in &index.pairs {
                if lhs != nt {
                    continue;
                }
                for split in 1..len {
                    if chart[cell(start, split) + l]
                        && chart[cell(start + split, len - split) + r]
                    {
                        let left = build(index, chart, s, start, split, l);
                        let right = build(index, chart, s, start + split, len - split, r);
                        return DerivationTree::node(index.nts[nt].clone(), left, right);
                    }
                }
            }
            unreachable!("cell was derivable but no rule applied")
        }
        Some(build(self, &chart, s, 0, n, self.start_id))
    }
}

/// Membership of `s` in `L(g)`.
pub fn cyk_member(g: &CnfGrammar, s: &Sentence) -> bool {
    CykIndex::new(g).member(s)
}

/// Membership for a batch of sentences against one grammar, evaluated in
/// parallel when the `parallel` feature is on. Results line up with the
/// input order.
pub fn cyk_member_batch(g: &CnfGrammar, sentences: &[Sentence]) -> Vec<bool> {
    let index = CykIndex::new(g);
    crate::exec::map_slice(sentences, |s| index.member(s))
}

/// The canonical derivation tree of `s`, if `s` is a nonempty member.
pub fn cyk_tree(g: &CnfGrammar, s: &Sentence) -> Option<DerivationTree> {
    CykIndex::new(g).tree(s)
}

/// True when every leaf and node of `t` applies a rule of `g`. Root and
/// frontier are the caller's business.
pub fn validate_tree(g: &CnfGrammar, t: &DerivationTree) -> bool {
    match t {
        DerivationTree::Leaf { nt, terminal } => g
            .base()
            .contains_rule(&Rule::new(nt.clone(), vec![Symbol::T(terminal.clone())])),
        DerivationTree::Node { nt, left, right } => {
            g.base().contains_rule(&Rule::new(
                nt.clone(),
                vec![
                    Symbol::N(left.root().clone()),
                    Symbol::N(right.root().clone()),
                ],
            )) && validate_tree(g, left)
                && validate_tree(g, right)
        }
    }
}

/// Convenience used throughout the tests: a terminal per character.
#[cfg(test)]
fn sent(s: &str) -> Sentence {
    Sentence::from_chars(s)
}
