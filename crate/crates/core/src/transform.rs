//! Simplification passes and conversion to Chomsky normal form.
//!
//! Every pass is language-preserving and deterministic, including the names
//! it mints: `S'` (primed further on collision) for a fresh start symbol,
//! `T_<terminal>` for terminal isolation, and `X1, X2, ...` for
//! binarization, numbered in the order the sorted rule set needs them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{Grammar, Rule};
use crate::oracle::{min_yields, nullable_set};
use crate::symbol::{NonTerminal, Symbol, Terminal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("the grammar derives no sentence at all")]
    EmptyLanguage,
    #[error("rule `{0}` is not in Chomsky normal form")]
    NotCnf(Rule),
    #[error("start symbol occurs on the right-hand side of `{0}`")]
    StartInRhs(Rule),
}

fn rebuild(start: NonTerminal, rules: impl IntoIterator<Item = Rule>) -> Grammar {
    Grammar::new(start, rules).expect("pass output reuses already-validated names")
}

fn fresh_name(base: &str, used: &BTreeSet<NonTerminal>) -> NonTerminal {
    let mut name = base.to_string();
    while used.contains(&NonTerminal::new(&name)) {
        name.push('\'');
    }
    NonTerminal::new(name)
}

/// A new start symbol with a unit rule to the old one. Guarantees the start
/// never occurs on a right-hand side.
fn add_fresh_start(g: &Grammar) -> Grammar {
    let fresh = fresh_name("S'", g.nonterminals());
    let mut rules: Vec<Rule> = g.rules().cloned().collect();
    rules.push(Rule::new(fresh.clone(), vec![Symbol::N(g.start().clone())]));
    rebuild(fresh, rules)
}

/// Eliminates empty rules. Each rule is replaced by every variant that drops
/// some subset of its nullable occurrences; if the language contains the
/// empty string, a single `start -> _` survives, with a fresh start symbol
/// minted first should the current one occur on a right-hand side.
pub fn remove_empty_rules(g: &Grammar) -> Grammar {
    let nullable = nullable_set(g);
    let derives_empty = nullable.contains(g.start());

    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    for rule in g.rules() {
        let droppable: Vec<usize> = rule
            .rhs()
            .iter()
            .enumerate()
            .filter_map(|(i, sym)| match sym {
                Symbol::N(n) if nullable.contains(n) => Some(i),
                _ => None,
            })
            .collect();
        for mask in 0u32..(1 << droppable.len()) {
            let dropped: BTreeSet<usize> = droppable
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, i)| *i)
                .collect();
            let rhs: Vec<Symbol> = rule
                .rhs()
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, sym)| sym.clone())
                .collect();
            let trivial = rhs.is_empty()
                || (rhs.len() == 1 && rhs[0] == Symbol::N(rule.lhs().clone()));
            if !trivial {
                rules.insert(Rule::new(rule.lhs().clone(), rhs));
            }
        }
    }

    let start_in_rhs = rules
        .iter()
        .any(|r| r.rhs().contains(&Symbol::N(g.start().clone())));
    let start = if start_in_rhs {
        let fresh = fresh_name("S'", g.nonterminals());
        rules.insert(Rule::new(fresh.clone(), vec![Symbol::N(g.start().clone())]));
        fresh
    } else {
        g.start().clone()
    };
    if derives_empty {
        rules.insert(Rule::new(start.clone(), vec![]));
    }
    rebuild(start, rules)
}

/// Eliminates unit rules (`A -> B`) by folding in the non-unit rules of
/// every nonterminal reachable through unit chains, cycles included.
pub fn remove_unit_rules(g: &Grammar) -> Grammar {
    let unit_target = |r: &Rule| -> Option<NonTerminal> {
        match r.rhs() {
            [Symbol::N(n)] => Some(n.clone()),
            _ => None,
        }
    };

    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    for nt in g.nonterminals() {
        // Unit-closure of nt.
        let mut closure: BTreeSet<NonTerminal> = BTreeSet::new();
        let mut stack = vec![nt.clone()];
        while let Some(cur) = stack.pop() {
            if !closure.insert(cur.clone()) {
                continue;
            }
            for rule in g.rules_for(&cur) {
                if let Some(target) = unit_target(rule) {
                    stack.push(target);
                }
            }
        }
        for member in &closure {
            for rule in g.rules_for(member) {
                if unit_target(rule).is_none() {
                    rules.insert(Rule::new(nt.clone(), rule.rhs().to_vec()));
                }
            }
        }
    }
    rebuild(g.start().clone(), rules)
}

/// Drops rules that mention unproductive nonterminals. Errors when the start
/// symbol itself is unproductive, i.e. the language is empty.
pub fn remove_useless(g: &Grammar) -> Result<Grammar, TransformError> {
    let productive = min_yields(g);
    if !productive.contains_key(g.start()) {
        return Err(TransformError::EmptyLanguage);
    }
    let usable = |rule: &Rule| {
        rule.rhs().iter().all(|sym| match sym {
            Symbol::T(_) => true,
            Symbol::N(n) => productive.contains_key(n),
        })
    };
    let rules: Vec<Rule> = g.rules().filter(|r| usable(r)).cloned().collect();
    Ok(rebuild(g.start().clone(), rules))
}

/// Drops rules whose left-hand side is unreachable from the start symbol.
pub fn remove_inaccessible(g: &Grammar) -> Grammar {
    let mut reachable: BTreeSet<NonTerminal> = BTreeSet::new();
    let mut stack = vec![g.start().clone()];
    while let Some(cur) = stack.pop() {
        if !reachable.insert(cur.clone()) {
            continue;
        }
        for rule in g.rules_for(&cur) {
            for sym in rule.rhs() {
                if let Symbol::N(n) = sym {
                    stack.push(n.clone());
                }
            }
        }
    }
    let rules: Vec<Rule> = g
        .rules()
        .filter(|r| reachable.contains(r.lhs()))
        .cloned()
        .collect();
    rebuild(g.start().clone(), rules)
}

/// In every rule with two or more right-hand-side symbols, replaces each
/// terminal `a` by a nonterminal `T_a` defined by `T_a -> a`.
fn isolate_terminals(g: &Grammar) -> Grammar {
    let needs_isolation: BTreeSet<Terminal> = g
        .rules()
        .filter(|r| r.rhs().len() >= 2)
        .flat_map(|r| r.rhs().iter().filter_map(Symbol::as_terminal))
        .cloned()
        .collect();
    let mut used = g.nonterminals().clone();
    let mut alias: BTreeMap<Terminal, NonTerminal> = BTreeMap::new();
    for t in &needs_isolation {
        let name = fresh_name(&format!("T_{}", t.name()), &used);
        used.insert(name.clone());
        alias.insert(t.clone(), name);
    }

    let mut rules: Vec<Rule> = Vec::new();
    for rule in g.rules() {
        if rule.rhs().len() < 2 {
            rules.push(rule.clone());
            continue;
        }
        let rhs = rule
            .rhs()
            .iter()
            .map(|sym| match sym {
                Symbol::T(t) => Symbol::N(alias[t].clone()),
                n => n.clone(),
            })
            .collect();
        rules.push(Rule::new(rule.lhs().clone(), rhs));
    }
    for (t, nt) in &alias {
        rules.push(Rule::new(nt.clone(), vec![Symbol::T(t.clone())]));
    }
    rebuild(g.start().clone(), rules)
}

/// Splits right-hand sides longer than two into chains of fresh pair
/// nonterminals, reusing a chain symbol whenever an identical suffix comes
/// up again.
fn binarize(g: &Grammar) -> Grammar {
    let mut used = g.nonterminals().clone();
    let mut counter = 0usize;
    let mut cache: BTreeMap<Vec<Symbol>, NonTerminal> = BTreeMap::new();
    let mut extra: Vec<Rule> = Vec::new();

    // Resolves the chain symbol deriving `suffix` (length >= 2), minting
    // definitions as needed.
    fn chain(
        suffix: &[Symbol],
        used: &mut BTreeSet<NonTerminal>,
        counter: &mut usize,
        cache: &mut BTreeMap<Vec<Symbol>, NonTerminal>,
        extra: &mut Vec<Rule>,
    ) -> NonTerminal {
        if let Some(nt) = cache.get(suffix) {
            return nt.clone();
        }
        *counter += 1;
        let nt = fresh_name(&format!("X{counter}"), used);
        used.insert(nt.clone());
        cache.insert(suffix.to_vec(), nt.clone());
        let rhs = if suffix.len() == 2 {
            suffix.to_vec()
        } else {
            let rest = chain(&suffix[1..], used, counter, cache, extra);
            vec![suffix[0].clone(), Symbol::N(rest)]
        };
        extra.push(Rule::new(nt.clone(), rhs));
        nt
    }

    let mut rules: Vec<Rule> = Vec::new();
    for rule in g.rules() {
        if rule.rhs().len() <= 2 {
            rules.push(rule.clone());
            continue;
        }
        let rest = chain(&rule.rhs()[1..], &mut used, &mut counter, &mut cache, &mut extra);
        rules.push(Rule::new(
            rule.lhs().clone(),
            vec![rule.rhs()[0].clone(), Symbol::N(rest)],
        ));
    }
    rules.extend(extra);
    rebuild(g.start().clone(), rules)
}

/// The four classical simplification passes in order: empty-rule
/// elimination, unit elimination, unproductive-rule removal, and
/// inaccessible-rule removal.
pub fn simplify(g: &Grammar) -> Result<Grammar, TransformError> {
    let g = remove_empty_rules(g);
    let g = remove_unit_rules(&g);
    let g = remove_useless(&g)?;
    Ok(remove_inaccessible(&g))
}

/// The verdict of [`check_cnf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfCheck {
    /// Every rule is `A -> B C` or `A -> a`.
    Cnf,
    /// As above, except the start symbol also has an empty rule.
    CnfWithEmptyRule,
    /// Carries the first offending rule in canonical order.
    NotCnf(Rule),
}

fn is_cnf_rule(rule: &Rule) -> bool {
    match rule.rhs() {
        [Symbol::N(_), Symbol::N(_)] => true,
        [Symbol::T(_)] => true,
        _ => false,
    }
}

/// Classifies a grammar against the two normal-form shapes.
pub fn check_cnf(g: &Grammar) -> CnfCheck {
    let mut saw_empty = false;
    for rule in g.rules() {
        if is_cnf_rule(rule) {
            continue;
        }
        if rule.lhs() == g.start() && rule.rhs().is_empty() {
            saw_empty = true;
            continue;
        }
        return CnfCheck::NotCnf(rule.clone());
    }
    if saw_empty {
        CnfCheck::CnfWithEmptyRule
    } else {
        CnfCheck::Cnf
    }
}

/// A grammar in Chomsky normal form. The start symbol never occurs on a
/// right-hand side, and `has_empty_rule` tracks whether the language
/// contains the empty string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfGrammar {
    base: Grammar,
    has_empty_rule: bool,
}

impl CnfGrammar {
    /// Validates the normal-form shape of an arbitrary grammar.
    pub fn new(base: Grammar) -> Result<Self, TransformError> {
        let has_empty_rule = match check_cnf(&base) {
            CnfCheck::Cnf => false,
            CnfCheck::CnfWithEmptyRule => true,
            CnfCheck::NotCnf(rule) => return Err(TransformError::NotCnf(rule)),
        };
        if let Some(rule) = base
            .rules()
            .find(|r| r.rhs().contains(&Symbol::N(base.start().clone())))
        {
            return Err(TransformError::StartInRhs(rule.clone()));
        }
        Ok(CnfGrammar { base, has_empty_rule })
    }

    pub fn base(&self) -> &Grammar {
        &self.base
    }

    pub fn fresh_start(&self) -> &NonTerminal {
        self.base.start()
    }

    pub fn has_empty_rule(&self) -> bool {
        self.has_empty_rule
    }

    /// `k`, the size of the nonterminal inventory.
    pub fn nonterminal_count(&self) -> usize {
        self.base.nonterminals().len()
    }
}

impl fmt::Display for CnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.base.fmt(f)
    }
}

/// Full conversion to Chomsky normal form: fresh start, empty-rule
/// elimination, unit elimination, useless- and inaccessible-rule removal,
/// terminal isolation, binarization.
pub fn to_cnf(g: &Grammar) -> Result<CnfGrammar, TransformError> {
    let g = add_fresh_start(g);
    let g = remove_empty_rules(&g);
    let g = remove_unit_rules(&g);
    let g = remove_useless(&g)?;
    let g = remove_inaccessible(&g);
    let g = isolate_terminals(&g);
    let g = binarize(&g);
    Ok(CnfGrammar::new(g).expect("pipeline output is in normal form"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::oracle::{decide_produces_empty, enumerate_language};

    fn nt(s: &str) -> NonTerminal {
        NonTerminal::new(s)
    }

    #[test]
    fn empty_rule_elimination_mints_a_fresh_start() {
        let g = parse_grammar("S -> a S b | _").unwrap();
        let out = remove_empty_rules(&g);
        let expected = parse_grammar("start: S'\nS' -> _ | S\nS -> a S b | a b").unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn empty_rule_elimination_without_nullables() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        let out = remove_empty_rules(&g);
        assert_eq!(out, g);
    }

    #[test]
    fn empty_rule_elimination_drops_nullable_occurrences() {
        let g = parse_grammar("S -> A B\nA -> a | _\nB -> b").unwrap();
        let out = remove_empty_rules(&g);
        let expected = parse_grammar("S -> A B | B\nA -> a\nB -> b").unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn unit_elimination_folds_chains() {
        let g = parse_grammar("S -> A\nA -> a").unwrap();
        let out = remove_unit_rules(&g);
        let expected = parse_grammar("S -> a\nA -> a").unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn unit_elimination_handles_cycles() {
        let g = parse_grammar("S -> A\nA -> S | a").unwrap();
        let out = remove_unit_rules(&g);
        let expected = parse_grammar("S -> a\nA -> a").unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn unit_elimination_leaves_non_units_alone() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        assert_eq!(remove_unit_rules(&g), g);
    }

    #[test]
    fn useless_removal_drops_unproductive_rules() {
        let g = parse_grammar("S -> a | A B\nA -> a\nB -> b B").unwrap();
        let out = remove_useless(&g).unwrap();
        let expected = parse_grammar("S -> a\nA -> a").unwrap();
        assert_eq!(out, expected);
        // ...and the later reachability pass then drops the stranded A.
        let out = remove_inaccessible(&out);
        assert_eq!(out, parse_grammar("S -> a").unwrap());
    }

    #[test]
    fn useless_removal_reports_the_empty_language() {
        let g = parse_grammar("S -> S S").unwrap();
        assert_eq!(remove_useless(&g), Err(TransformError::EmptyLanguage));
    }

    #[test]
    fn useless_removal_keeps_productive_grammars() {
        let g = parse_grammar("S -> a S | a").unwrap();
        assert_eq!(remove_useless(&g).unwrap(), g);
    }

    #[test]
    fn inaccessible_removal() {
        let g = parse_grammar("S -> a\nB -> b").unwrap();
        assert_eq!(remove_inaccessible(&g), parse_grammar("S -> a").unwrap());
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        assert_eq!(remove_inaccessible(&g), g);
    }

    #[test]
    fn cnf_of_a_single_terminal_rule_collapses() {
        let g = parse_grammar("S -> a").unwrap();
        let cnf = to_cnf(&g).unwrap();
        assert_eq!(cnf.base(), &parse_grammar("start: S'\nS' -> a").unwrap());
        assert!(!cnf.has_empty_rule());
        assert_eq!(cnf.nonterminal_count(), 1);
    }

    #[test]
    fn cnf_of_the_empty_string_language() {
        let g = parse_grammar("S -> _").unwrap();
        let cnf = to_cnf(&g).unwrap();
        assert_eq!(cnf.base(), &parse_grammar("start: S'\nS' -> _").unwrap());
        assert!(cnf.has_empty_rule());
    }

    #[test]
    fn cnf_of_anbn_is_deterministic() {
        let g = parse_grammar("S -> a S b | a b").unwrap();
        let cnf = to_cnf(&g).unwrap();
        let expected = "\
start: S'
S' -> T_a T_b | T_a X1
S -> T_a T_b | T_a X1
T_a -> a
T_b -> b
X1 -> S T_b
";
        assert_eq!(cnf.base().to_string(), expected);
        assert_eq!(cnf.nonterminal_count(), 5);
        assert!(!cnf.has_empty_rule());
    }

    #[test]
    fn cnf_preserves_small_language_fragments() {
        for text in [
            "S -> a S b | a b",
            "S -> ( S ) S | _",
            "S -> a S a | b S b | a | b | _",
            "S -> A B\nA -> a | _\nB -> b B | _",
            "start: E\nE -> E + T | T\nT -> T * F | F\nF -> ( E ) | a",
        ] {
            let g = parse_grammar(text).unwrap();
            let cnf = to_cnf(&g).unwrap();
            assert_eq!(
                enumerate_language(&g, 8).unwrap(),
                enumerate_language(cnf.base(), 8).unwrap(),
                "language changed for {text:?}"
            );
            assert_eq!(cnf.has_empty_rule(), decide_produces_empty(&g));
        }
    }

    #[test]
    fn to_cnf_reports_the_empty_language() {
        let g = parse_grammar("S -> S S").unwrap();
        assert_eq!(to_cnf(&g).unwrap_err(), TransformError::EmptyLanguage);
    }

    #[test]
    fn check_cnf_classification() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        assert_eq!(check_cnf(&g), CnfCheck::Cnf);
        let g = parse_grammar("S -> _ | A B\nA -> a\nB -> b").unwrap();
        assert_eq!(check_cnf(&g), CnfCheck::CnfWithEmptyRule);
        let g = parse_grammar("S -> a S").unwrap();
        assert_eq!(
            check_cnf(&g),
            CnfCheck::NotCnf(Rule::new(nt("S"), vec![Symbol::t("a"), Symbol::nt("S")]))
        );
        // An empty rule on a non-start symbol is an offender, not a flag.
        let g = parse_grammar("S -> A B\nA -> a | _\nB -> b").unwrap();
        assert_eq!(check_cnf(&g), CnfCheck::NotCnf(Rule::new(nt("A"), vec![])));
    }

    #[test]
    fn cnf_grammar_rejects_start_in_rhs() {
        let g = parse_grammar("S -> A S\nA -> a\nS -> a").unwrap();
        assert!(matches!(
            CnfGrammar::new(g),
            Err(TransformError::StartInRhs(_))
        ));
    }

    #[test]
    fn fresh_names_dodge_collisions() {
        let g = parse_grammar("S' -> a S' b | a b").unwrap();
        let cnf = to_cnf(&g).unwrap();
        assert_eq!(cnf.fresh_start(), &nt("S''"));
        let g = parse_grammar("S -> a b\nT_a -> c\nS -> T_a T_a").unwrap();
        let cnf = to_cnf(&g).unwrap();
        // The isolation symbol for `a` cannot reuse the existing T_a.
        assert!(cnf.base().nonterminals().contains(&nt("T_a'")));
        assert_eq!(
            enumerate_language(&g, 4).unwrap(),
            enumerate_language(cnf.base(), 4).unwrap()
        );
    }

    #[test]
    fn binarization_reuses_suffix_chains() {
        let g = parse_grammar("S -> a b c d | p Q\nQ -> z b c d").unwrap();
        let cnf = to_cnf(&g).unwrap();
        // Both four-symbol rules share the (T_b, T_c, T_d) tail, so exactly
        // two chain symbols appear, not four.
        let xs: Vec<_> = cnf
            .base()
            .nonterminals()
            .iter()
            .filter(|n| n.name().starts_with('X'))
            .collect();
        assert_eq!(xs.len(), 2, "{:?}", cnf.base().to_string());
    }

    #[test]
    fn simplify_runs_all_four_passes() {
        let g = parse_grammar("S -> A | a S\nA -> _ | a\nB -> b B").unwrap();
        let out = simplify(&g).unwrap();
        let expected = parse_grammar("start: S'\nS' -> _ | a | a S\nS -> a | a S").unwrap();
        assert_eq!(out, expected);
    }
}
