//! Grammars, the line-oriented text format, and its canonical printer.
//!
//! The format, by example:
//!
//! ```text
//! # comments run to end of line
//! start: S          # optional; defaults to the first rule's left-hand side
//! S -> a S b | a b
//! A -> _            # `_` is the empty string
//! B -> 'Zero'       # quotes force a terminal despite the uppercase start
//! ```
//!
//! Identifiers starting with an uppercase letter are nonterminals, all
//! others terminals. Printing a grammar and parsing it back yields the same
//! grammar.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::symbol::{symbol_name_ok, NonTerminal, Symbol, Terminal};

/// A single production. The rule set of a [`Grammar`] is a set: duplicates
/// collapse, and iteration order is the derived lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    lhs: NonTerminal,
    rhs: Vec<Symbol>,
}

impl Rule {
    pub fn new(lhs: NonTerminal, rhs: Vec<Symbol>) -> Self {
        Rule { lhs, rhs }
    }

    pub fn lhs(&self) -> &NonTerminal {
        &self.lhs
    }

    pub fn rhs(&self) -> &[Symbol] {
        &self.rhs
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, format_rhs(&self.rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("invalid nonterminal name `{0}`: must start with an uppercase letter and avoid whitespace, quotes, `#`, `|`, and `->`")]
    InvalidNonTerminal(String),
    #[error("invalid terminal name `{0}`: must be nonempty and avoid whitespace, a leading quote, `#`, `|`, and `->`")]
    InvalidTerminal(String),
}

/// A context-free grammar: a start symbol and a set of rules. The symbol
/// inventories are derived, holding exactly the symbols the rules mention
/// plus the start symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    start: NonTerminal,
    rules: BTreeSet<Rule>,
    nonterminals: BTreeSet<NonTerminal>,
    terminals: BTreeSet<Terminal>,
}

impl Grammar {
    pub fn new(
        start: NonTerminal,
        rules: impl IntoIterator<Item = Rule>,
    ) -> Result<Self, GrammarError> {
        let rules: BTreeSet<Rule> = rules.into_iter().collect();
        let mut nonterminals = BTreeSet::new();
        let mut terminals = BTreeSet::new();
        check_nonterminal(&start)?;
        nonterminals.insert(start.clone());
        for rule in &rules {
            check_nonterminal(rule.lhs())?;
            nonterminals.insert(rule.lhs().clone());
            for sym in rule.rhs() {
                match sym {
                    Symbol::N(n) => {
                        check_nonterminal(n)?;
                        nonterminals.insert(n.clone());
                    }
                    Symbol::T(t) => {
                        if !symbol_name_ok(t.name()) {
                            return Err(GrammarError::InvalidTerminal(t.name().to_string()));
                        }
                        terminals.insert(t.clone());
                    }
                }
            }
        }
        Ok(Grammar { start, rules, nonterminals, terminals })
    }

    pub fn start(&self) -> &NonTerminal {
        &self.start
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn contains_rule(&self, rule: &Rule) -> bool {
        self.rules.contains(rule)
    }

    pub fn nonterminals(&self) -> &BTreeSet<NonTerminal> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<Terminal> {
        &self.terminals
    }

    /// Rules whose left-hand side is `nt`, in canonical order.
    pub fn rules_for<'a>(&'a self, nt: &'a NonTerminal) -> impl Iterator<Item = &'a Rule> {
        self.rules.iter().filter(move |r| r.lhs() == nt)
    }

    /// True when `nt` occurs on the right-hand side of any rule.
    pub fn occurs_in_rhs(&self, nt: &NonTerminal) -> bool {
        let sym = Symbol::N(nt.clone());
        self.rules.iter().any(|r| r.rhs().contains(&sym))
    }
}

fn check_nonterminal(n: &NonTerminal) -> Result<(), GrammarError> {
    let ok = symbol_name_ok(n.name())
        && n.name().chars().next().is_some_and(char::is_uppercase);
    if ok {
        Ok(())
    } else {
        Err(GrammarError::InvalidNonTerminal(n.name().to_string()))
    }
}

fn format_symbol(sym: &Symbol) -> String {
    match sym {
        Symbol::N(n) => n.name().to_string(),
        Symbol::T(t) => {
            let needs_quotes = t.name() == "_"
                || t.name().chars().next().is_some_and(char::is_uppercase);
            if needs_quotes {
                format!("'{}'", t.name())
            } else {
                t.name().to_string()
            }
        }
    }
}

fn format_rhs(rhs: &[Symbol]) -> String {
    if rhs.is_empty() {
        "_".to_string()
    } else {
        rhs.iter().map(format_symbol).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Grammar {
    /// Canonical form: a `start:` line, then one line per left-hand side
    /// with sorted alternatives — the start symbol's line first, the rest in
    /// sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        let mut order: Vec<&NonTerminal> = Vec::new();
        let with_rules: BTreeSet<&NonTerminal> = self.rules.iter().map(Rule::lhs).collect();
        if with_rules.contains(&self.start) {
            order.push(&self.start);
        }
        order.extend(with_rules.iter().filter(|n| **n != &self.start));
        for nt in order {
            let alts: Vec<String> =
                self.rules_for(nt).map(|r| format_rhs(r.rhs())).collect();
            writeln!(f, "{} -> {}", nt, alts.join(" | "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("grammar has no rules")]
    EmptyRuleSet,
    #[error("start symbol `{0}` does not occur in any rule")]
    UndeclaredStart(String),
    #[error(transparent)]
    Invalid(#[from] GrammarError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// One token of an alternative: a symbol, or `_` standing for the empty
/// string.
fn parse_token(tok: &str, line: usize) -> Result<Option<Symbol>, ParseError> {
    if tok == "_" {
        return Ok(None);
    }
    if let Some(rest) = tok.strip_prefix('\'') {
        let inner = rest
            .strip_suffix('\'')
            .filter(|i| !i.is_empty())
            .ok_or_else(|| syntax(line, format!("malformed quoted terminal `{tok}`")))?;
        if !symbol_name_ok(inner) {
            return Err(syntax(line, format!("invalid terminal name `{inner}`")));
        }
        return Ok(Some(Symbol::t(inner)));
    }
    if !symbol_name_ok(tok) {
        return Err(syntax(line, format!("invalid symbol `{tok}`")));
    }
    if tok.chars().next().is_some_and(char::is_uppercase) {
        Ok(Some(Symbol::nt(tok)))
    } else {
        Ok(Some(Symbol::t(tok)))
    }
}

/// Parses the text format. Errors carry the 1-based line number; an
/// explicitly declared start symbol must occur somewhere in the rules.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut declared: Option<NonTerminal> = None;
    let mut first_lhs: Option<NonTerminal> = None;
    let mut rules: Vec<Rule> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            if declared.is_some() {
                return Err(syntax(line_no, "duplicate start declaration"));
            }
            if first_lhs.is_some() {
                return Err(syntax(line_no, "start declaration must precede all rules"));
            }
            let name = rest.trim();
            match parse_token(name, line_no)? {
                Some(Symbol::N(n)) => declared = Some(n),
                _ => {
                    return Err(syntax(
                        line_no,
                        format!("start symbol `{name}` is not a nonterminal"),
                    ))
                }
            }
            continue;
        }
        let (lhs_part, rhs_part) = line
            .split_once("->")
            .ok_or_else(|| syntax(line_no, "expected `NT -> alternatives`"))?;
        let lhs = match parse_token(lhs_part.trim(), line_no)? {
            Some(Symbol::N(n)) => n,
            _ => {
                return Err(syntax(
                    line_no,
                    format!("left-hand side `{}` is not a nonterminal", lhs_part.trim()),
                ))
            }
        };
        first_lhs.get_or_insert_with(|| lhs.clone());
        for alt in rhs_part.split('|') {
            let toks: Vec<&str> = alt.split_whitespace().collect();
            if toks.is_empty() {
                return Err(syntax(
                    line_no,
                    "empty alternative (write `_` for the empty string)",
                ));
            }
            let mut rhs = Vec::new();
            for tok in toks {
                if let Some(sym) = parse_token(tok, line_no)? {
                    rhs.push(sym);
                }
            }
            rules.push(Rule::new(lhs.clone(), rhs));
        }
    }

    if rules.is_empty() {
        return Err(ParseError::EmptyRuleSet);
    }
    let start = match declared {
        Some(s) => {
            let mentioned = rules.iter().any(|r| {
                r.lhs() == &s || r.rhs().contains(&Symbol::N(s.clone()))
            });
            if !mentioned {
                return Err(ParseError::UndeclaredStart(s.name().to_string()));
            }
            s
        }
        None => first_lhs.expect("nonempty rule list has a first lhs"),
    };
    Ok(Grammar::new(start, rules)?)
}

impl FromStr for Grammar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grammar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nt(s: &str) -> NonTerminal {
        NonTerminal::new(s)
    }

    #[test]
    fn parses_basic_grammar() {
        let g = parse_grammar("S -> a S b | a b").unwrap();
        assert_eq!(g.start(), &nt("S"));
        assert_eq!(g.rule_count(), 2);
        assert!(g.contains_rule(&Rule::new(
            nt("S"),
            vec![Symbol::t("a"), Symbol::nt("S"), Symbol::t("b")],
        )));
        assert!(g.contains_rule(&Rule::new(nt("S"), vec![Symbol::t("a"), Symbol::t("b")])));
        assert_eq!(g.terminals().len(), 2);
        assert_eq!(g.nonterminals().len(), 1);
    }

    #[test]
    fn parses_epsilon_comments_and_start() {
        let text = "# a comment\nstart: A\nA -> _ | a A  # trailing comment\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.start(), &nt("A"));
        assert!(g.contains_rule(&Rule::new(nt("A"), vec![])));
        assert!(g.contains_rule(&Rule::new(nt("A"), vec![Symbol::t("a"), Symbol::nt("A")])));
    }

    #[test]
    fn quoted_terminals_and_accumulated_alternatives() {
        let text = "S -> 'Zero'\nS -> '_' x";
        let g = parse_grammar(text).unwrap();
        assert!(g.contains_rule(&Rule::new(nt("S"), vec![Symbol::t("Zero")])));
        assert!(g.contains_rule(&Rule::new(nt("S"), vec![Symbol::t("_"), Symbol::t("x")])));
        assert_eq!(g.terminals().len(), 3);
    }

    #[test]
    fn duplicate_rules_collapse() {
        let g = parse_grammar("S -> a | a\nS -> a").unwrap();
        assert_eq!(g.rule_count(), 1);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_grammar("S -> a\nnope").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err:?}");
        let err = parse_grammar("S -> a |  | b").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err:?}");
        let err = parse_grammar("s -> a").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn empty_rule_set_is_an_error() {
        assert_eq!(parse_grammar("# nothing\n\n"), Err(ParseError::EmptyRuleSet));
    }

    #[test]
    fn unknown_declared_start_is_an_error() {
        let err = parse_grammar("start: B\nS -> a").unwrap_err();
        assert_eq!(err, ParseError::UndeclaredStart("B".to_string()));
        // Appearing only on a right-hand side is enough to be "declared".
        let g = parse_grammar("start: B\nS -> a B").unwrap();
        assert_eq!(g.start(), &nt("B"));
    }

    #[test]
    fn late_start_declaration_is_an_error() {
        let err = parse_grammar("S -> a\nstart: S").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn print_parse_round_trip() {
        let texts = [
            "S -> a S b | a b",
            "start: E\nE -> E + T | T\nT -> T * F | F\nF -> ( E ) | a",
            "S -> A B\nA -> a | _\nB -> b B | _",
            "S -> 'Zero' | '_'\nQ' -> q | S",
        ];
        for text in texts {
            let g = parse_grammar(text).unwrap();
            let printed = g.to_string();
            let back = parse_grammar(&printed).unwrap();
            assert_eq!(g, back, "round trip failed for:\n{printed}");
        }
    }

    #[test]
    fn display_orders_start_first() {
        let g = parse_grammar("start: E\nA -> a\nE -> A").unwrap();
        let printed = g.to_string();
        assert_eq!(printed, "start: E\nE -> A\nA -> a\n");
    }

    #[test]
    fn primed_names_survive_the_format() {
        let g = parse_grammar("S' -> a S' | a").unwrap();
        assert_eq!(g.start(), &nt("S'"));
        let back: Grammar = g.to_string().parse().unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_invalid_programmatic_names() {
        let bad = Grammar::new(nt("lower"), vec![Rule::new(nt("lower"), vec![])]);
        assert!(matches!(bad, Err(GrammarError::InvalidNonTerminal(_))));
        let bad = Grammar::new(
            nt("S"),
            vec![Rule::new(nt("S"), vec![Symbol::t("a b")])],
        );
        assert!(matches!(bad, Err(GrammarError::InvalidTerminal(_))));
    }
}
