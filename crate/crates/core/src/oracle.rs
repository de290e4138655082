//! A reference oracle for derivability: exhaustive enumeration of the
//! language fragment up to a length bound, plus fixpoint deciders for
//! "derives the empty string" and "derives a nonempty string".
//!
//! Two deliberately different enumerators are provided. The primary one runs
//! breadth-first search over sentential forms; [`enumerate_by_expansion`]
//! computes per-nonterminal sentence sets by fixpoint instead, and exists so
//! the two can be checked against each other.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::grammar::{Grammar, Rule};
use crate::symbol::{NonTerminal, Sentence, SententialForm, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration visited more than {budget} sentential forms; the grammar is too generative for oracle use at this length bound")]
    BudgetExceeded { budget: usize },
    #[error("enumeration reached a sentential form longer than {cap} symbols; raise the form length cap if the grammar nests deeply before shedding nullable symbols")]
    FormCapExceeded { cap: usize },
}

/// Tuning knobs for [`enumerate_language_with`]. The defaults are generous
/// enough for every grammar in `grammars/`; pathological grammars surface as
/// errors rather than silently truncated results.
#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub max_len: usize,
    /// Hard cap on sentential form length, the termination guard against
    /// grammars whose forms grow without adding terminals. `None` picks
    /// `max_len + #nonterminals + 2 * max_len + 4`, which leaves room for
    /// derivations that stack nullable symbols before resolving them.
    pub form_len_cap: Option<usize>,
    /// Cap on distinct sentential forms visited.
    pub node_budget: usize,
}

impl EnumerateOptions {
    pub fn new(max_len: usize) -> Self {
        EnumerateOptions { max_len, form_len_cap: None, node_budget: 1 << 20 }
    }
}

/// Every sentence of `L(g)` with length at most `max_len`, by breadth-first
/// search over sentential forms with leftmost expansion.
pub fn enumerate_language(
    g: &Grammar,
    max_len: usize,
) -> Result<BTreeSet<Sentence>, OracleError> {
    enumerate_language_with(g, &EnumerateOptions::new(max_len))
}

pub fn enumerate_language_with(
    g: &Grammar,
    opts: &EnumerateOptions,
) -> Result<BTreeSet<Sentence>, OracleError> {
    let max_len = opts.max_len;
    let cap = opts
        .form_len_cap
        .unwrap_or(max_len + g.nonterminals().len() + 2 * max_len + 4);
    let yields = min_yields(g);
    let by_lhs = rules_by_lhs(g);

    let mut out = BTreeSet::new();
    let mut visited: HashSet<SententialForm> = HashSet::new();
    let mut queue: VecDeque<SententialForm> = VecDeque::new();

    let start_form = vec![Symbol::N(g.start().clone())];
    if form_min_yield(&start_form, &yields).is_some_and(|m| m <= max_len) {
        visited.insert(start_form.clone());
        queue.push_back(start_form);
    }

    while let Some(form) = queue.pop_front() {
        let leftmost = form.iter().position(|s| !s.is_terminal());
        let Some(pos) = leftmost else {
            // All terminals; the min-yield prune already bounded the length.
            out.insert(Sentence::from_symbols(&form).expect("all-terminal form"));
            continue;
        };
        let nt = form[pos].as_nonterminal().expect("position of a nonterminal");
        let Some(rules) = by_lhs.get(nt) else { continue };
        for rule in rules {
            let mut next: SententialForm =
                Vec::with_capacity(form.len() + rule.rhs().len());
            next.extend_from_slice(&form[..pos]);
            next.extend_from_slice(rule.rhs());
            next.extend_from_slice(&form[pos + 1..]);
            // Prune on the shortest sentence this form can still yield.
            match form_min_yield(&next, &yields) {
                Some(m) if m <= max_len => {}
                _ => continue,
            }
            if next.len() > cap {
                return Err(OracleError::FormCapExceeded { cap });
            }
            if visited.insert(next.clone()) {
                if visited.len() > opts.node_budget {
                    return Err(OracleError::BudgetExceeded { budget: opts.node_budget });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// Independent cross-check for [`enumerate_language`]: iterate
/// per-nonterminal sentence sets to a fixpoint, concatenating rule
/// right-hand sides and discarding anything longer than `max_len`.
pub fn enumerate_by_expansion(g: &Grammar, max_len: usize) -> BTreeSet<Sentence> {
    let mut sets: BTreeMap<&NonTerminal, BTreeSet<Sentence>> =
        g.nonterminals().iter().map(|n| (n, BTreeSet::new())).collect();
    loop {
        let mut changed = false;
        for rule in g.rules() {
            let mut partial: Vec<Sentence> = vec![Sentence::empty()];
            for sym in rule.rhs() {
                let mut next = Vec::new();
                match sym {
                    Symbol::T(t) => {
                        for p in &partial {
                            if p.len() + 1 <= max_len {
                                let mut q = p.clone();
                                q.push(t.clone());
                                next.push(q);
                            }
                        }
                    }
                    Symbol::N(n) => {
                        for s in &sets[n] {
                            for p in &partial {
                                if p.len() + s.len() <= max_len {
                                    next.push(Sentence::concat([p, s]));
                                }
                            }
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            let set = sets.get_mut(rule.lhs()).expect("lhs is in the inventory");
            for s in partial {
                changed |= set.insert(s);
            }
        }
        if !changed {
            return sets.remove(g.start()).expect("start is in the inventory");
        }
    }
}

/// True iff the empty string is in `L(g)`, by the nullable-set fixpoint.
pub fn decide_produces_empty(g: &Grammar) -> bool {
    nullable_set(g).contains(g.start())
}

/// True iff `L(g)` contains a sentence of length at least one: the start
/// symbol must be productive, and some derivation from it must commit to a
/// terminal.
pub fn decide_produces_non_empty(g: &Grammar) -> bool {
    let productive = min_yields(g);
    let symbol_ok = |sym: &Symbol| match sym {
        Symbol::T(_) => true,
        Symbol::N(n) => productive.contains_key(n),
    };
    let mut yields_nonempty: BTreeSet<&NonTerminal> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rule in g.rules() {
            if yields_nonempty.contains(rule.lhs()) {
                continue;
            }
            let usable = rule.rhs().iter().all(symbol_ok);
            let committed = rule.rhs().iter().any(|sym| match sym {
                Symbol::T(_) => true,
                Symbol::N(n) => yields_nonempty.contains(n),
            });
            if usable && committed {
                yields_nonempty.insert(rule.lhs());
                changed = true;
            }
        }
        if !changed {
            return yields_nonempty.contains(g.start());
        }
    }
}

/// The set of nonterminals that derive the empty string.
pub(crate) fn nullable_set(g: &Grammar) -> BTreeSet<NonTerminal> {
    let mut nullable: BTreeSet<NonTerminal> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rule in g.rules() {
            if nullable.contains(rule.lhs()) {
                continue;
            }
            let all_nullable = rule.rhs().iter().all(|sym| match sym {
                Symbol::T(_) => false,
                Symbol::N(n) => nullable.contains(n),
            });
            if all_nullable {
                nullable.insert(rule.lhs().clone());
                changed = true;
            }
        }
        if !changed {
            return nullable;
        }
    }
}

/// For each productive nonterminal, the length of the shortest terminal
/// string it derives. Unproductive nonterminals are absent.
pub(crate) fn min_yields(g: &Grammar) -> BTreeMap<NonTerminal, usize> {
    let mut yields: BTreeMap<NonTerminal, usize> = BTreeMap::new();
    loop {
        let mut changed = false;
        for rule in g.rules() {
            let mut total = 0usize;
            let mut ok = true;
            for sym in rule.rhs() {
                match sym {
                    Symbol::T(_) => total += 1,
                    Symbol::N(n) => match yields.get(n) {
                        Some(m) => total += m,
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if !ok {
                continue;
            }
            match yields.get(rule.lhs()) {
                Some(old) if *old <= total => {}
                _ => {
                    yields.insert(rule.lhs().clone(), total);
                    changed = true;
                }
            }
        }
        if !changed {
            return yields;
        }
    }
}

/// The shortest sentence derivable from `form`, or `None` if some symbol in
/// it is unproductive.
fn form_min_yield(
    form: &[Symbol],
    yields: &BTreeMap<NonTerminal, usize>,
) -> Option<usize> {
    let mut total = 0usize;
    for sym in form {
        match sym {
            Symbol::T(_) => total += 1,
            Symbol::N(n) => total += *yields.get(n)?,
        }
    }
    Some(total)
}

fn rules_by_lhs(g: &Grammar) -> BTreeMap<NonTerminal, Vec<&Rule>> {
    let mut map: BTreeMap<NonTerminal, Vec<&Rule>> = BTreeMap::new();
    for rule in g.rules() {
        map.entry(rule.lhs().clone()).or_default().push(rule);
    }
    map
}
