//! Symbols and sentences: the vocabulary every other module works over.

use std::fmt;

use serde::Serialize;

/// True when `name` can appear in grammar text. Quoting handles terminals
/// that would otherwise read as nonterminals, so the only hard bans are the
/// characters the format itself claims: whitespace, `#`, `|`, a leading
/// quote, and the arrow.
pub(crate) fn symbol_name_ok(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('\'')
        && !name.contains(['#', '|'])
        && !name.contains(char::is_whitespace)
        && !name.contains("->")
}

/// A nonterminal symbol. Names start with an uppercase letter; everything
/// else in grammar text reads as a terminal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NonTerminal {
    name: String,
}

impl NonTerminal {
    pub fn new(name: impl Into<String>) -> Self {
        NonTerminal { name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for NonTerminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A terminal symbol. Usually a single character, but token mode allows
/// arbitrary names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Terminal {
    name: String,
}

impl Terminal {
    pub fn new(name: impl Into<String>) -> Self {
        Terminal { name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Symbol {
    N(NonTerminal),
    T(Terminal),
}

impl Symbol {
    pub fn nt(name: impl Into<String>) -> Self {
        Symbol::N(NonTerminal::new(name))
    }

    pub fn t(name: impl Into<String>) -> Self {
        Symbol::T(Terminal::new(name))
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::N(n) => n.name(),
            Symbol::T(t) => t.name(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::T(_))
    }

    pub fn as_nonterminal(&self) -> Option<&NonTerminal> {
        match self {
            Symbol::N(n) => Some(n),
            Symbol::T(_) => None,
        }
    }

    pub fn as_terminal(&self) -> Option<&Terminal> {
        match self {
            Symbol::N(_) => None,
            Symbol::T(t) => Some(t),
        }
    }
}

impl From<NonTerminal> for Symbol {
    fn from(n: NonTerminal) -> Self {
        Symbol::N(n)
    }
}

impl From<Terminal> for Symbol {
    fn from(t: Terminal) -> Self {
        Symbol::T(t)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A string over both terminals and nonterminals, as it appears mid-derivation.
pub type SententialForm = Vec<Symbol>;

/// A terminal string. The ordering is lexicographic, which keeps enumerated
/// language fragments in a stable order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Sentence(Vec<Terminal>);

impl Sentence {
    pub fn new(terminals: Vec<Terminal>) -> Self {
        Sentence(terminals)
    }

    pub fn empty() -> Self {
        Sentence(Vec::new())
    }

    /// One terminal per character. The usual way to read CLI input.
    pub fn from_chars(s: &str) -> Self {
        s.chars().map(|c| Terminal::new(c.to_string())).collect()
    }

    /// One terminal per whitespace-separated token, for multi-character
    /// alphabets.
    pub fn from_tokens(s: &str) -> Self {
        s.split_whitespace().map(Terminal::new).collect()
    }

    /// Reads an all-terminal sentential form back as a sentence.
    pub fn from_symbols(form: &[Symbol]) -> Option<Self> {
        form.iter().map(|s| s.as_terminal().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Terminal] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Terminal> {
        self.0.iter()
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Sentence {
        Sentence(self.0[range].to_vec())
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Sentence>) -> Sentence {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Sentence(out)
    }

    /// The sentence repeated `i` times; `i = 0` gives the empty sentence.
    pub fn repeated(&self, i: usize) -> Sentence {
        let mut out = Vec::with_capacity(self.0.len() * i);
        for _ in 0..i {
            out.extend_from_slice(&self.0);
        }
        Sentence(out)
    }

    pub fn push(&mut self, t: Terminal) {
        self.0.push(t);
    }
}

impl FromIterator<Terminal> for Sentence {
    fn from_iter<I: IntoIterator<Item = Terminal>>(iter: I) -> Self {
        Sentence(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Sentence {
    type Item = &'a Terminal;
    type IntoIter = std::slice::Iter<'a, Terminal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Sentence {
    /// The empty sentence prints as `ε`. Single-character terminals print
    /// run together; anything longer gets space separators so the boundary
    /// stays visible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let compact = self.0.iter().all(|t| t.name().chars().count() == 1);
        let sep = if compact { "" } else { " " };
        let mut first = true;
        for t in &self.0 {
            if !first {
                f.write_str(sep)?;
            }
            f.write_str(t.name())?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_validity() {
        assert!(symbol_name_ok("a"));
        assert!(symbol_name_ok("S'"));
        assert!(symbol_name_ok("T_+"));
        assert!(symbol_name_ok("_"));
        assert!(!symbol_name_ok(""));
        assert!(!symbol_name_ok("a b"));
        assert!(!symbol_name_ok("a#b"));
        assert!(!symbol_name_ok("a|b"));
        assert!(!symbol_name_ok("'a"));
        assert!(!symbol_name_ok("a->b"));
    }

    #[test]
    fn sentence_display() {
        assert_eq!(Sentence::empty().to_string(), "ε");
        assert_eq!(Sentence::from_chars("aab").to_string(), "aab");
        assert_eq!(Sentence::from_tokens("id plus id").to_string(), "id plus id");
    }

    #[test]
    fn sentence_ops() {
        let s = Sentence::from_chars("ab");
        assert_eq!(s.repeated(3).to_string(), "ababab");
        assert_eq!(s.repeated(0), Sentence::empty());
        assert_eq!(s.slice(1..2).to_string(), "b");
        let t = Sentence::concat([&s, &Sentence::empty(), &s]);
        assert_eq!(t.to_string(), "abab");
    }

    #[test]
    fn symbols_round_trip_through_forms() {
        let form: SententialForm = vec![Symbol::t("a"), Symbol::t("b")];
        assert_eq!(Sentence::from_symbols(&form), Some(Sentence::from_chars("ab")));
        let mixed: SententialForm = vec![Symbol::t("a"), Symbol::nt("S")];
        assert_eq!(Sentence::from_symbols(&mixed), None);
    }
}
