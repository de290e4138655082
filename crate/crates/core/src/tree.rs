//! Binary derivation trees and the surgery the pumping argument needs:
//! paths, codes addressing subtrees, decomposition, splicing, and pumping.
//!
//! A tree code is a root-to-node sequence of left/right steps; the empty
//! code addresses the root. A tree path is the symbol sequence along a
//! root-to-leaf walk, nonterminal labels followed by the leaf's terminal,
//! so a path through a tree of height `h` has `h + 1` symbols while its
//! code has `h - 1` steps.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::symbol::{NonTerminal, Sentence, Symbol, Terminal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// An address of a subtree: the turn taken at each level from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TreeCode(Vec<Direction>);

impl TreeCode {
    pub fn new(steps: Vec<Direction>) -> Self {
        TreeCode(steps)
    }

    pub fn empty() -> Self {
        TreeCode(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Direction] {
        &self.0
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> TreeCode {
        TreeCode(self.0[range].to_vec())
    }

    pub fn concat(&self, other: &TreeCode) -> TreeCode {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        TreeCode(steps)
    }

    /// The code repeated `i` times, addressing the `i`-fold nesting.
    pub fn repeated(&self, i: usize) -> TreeCode {
        let mut steps = Vec::with_capacity(self.0.len() * i);
        for _ in 0..i {
            steps.extend_from_slice(&self.0);
        }
        TreeCode(steps)
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            f.write_str(match d {
                Direction::Left => "L",
                Direction::Right => "R",
            })?;
        }
        Ok(())
    }
}

/// A complete root-to-leaf path: nonterminal labels, then the terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath(Vec<Symbol>);

impl TreePath {
    pub fn new(symbols: Vec<Symbol>) -> Option<Self> {
        let well_formed = symbols.len() >= 2
            && symbols[..symbols.len() - 1].iter().all(|s| !s.is_terminal())
            && symbols[symbols.len() - 1].is_terminal();
        well_formed.then_some(TreePath(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a path always holds at least a label and a terminal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("code does not address a node of the tree")]
    InvalidCode,
    #[error("path does not occur in the tree")]
    PathNotFound,
    #[error("code does not realize the given path: {0}")]
    CodePathMismatch(String),
    #[error("no symbol occurs twice")]
    NoDuplicate,
    #[error("subtree root `{found}` does not match the tree root `{expected}`")]
    RootMismatch { expected: NonTerminal, found: NonTerminal },
    #[error("pumping requires a nonempty code")]
    EmptyCode,
}

/// A binary derivation tree: leaves apply `A -> a`, inner nodes `A -> B C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum DerivationTree {
    Leaf {
        nt: NonTerminal,
        terminal: Terminal,
    },
    Node {
        nt: NonTerminal,
        left: Box<DerivationTree>,
        right: Box<DerivationTree>,
    },
}

impl DerivationTree {
    pub fn leaf(nt: NonTerminal, terminal: Terminal) -> Self {
        DerivationTree::Leaf { nt, terminal }
    }

    pub fn node(nt: NonTerminal, left: DerivationTree, right: DerivationTree) -> Self {
        DerivationTree::Node { nt, left: Box::new(left), right: Box::new(right) }
    }

    pub fn root(&self) -> &NonTerminal {
        match self {
            DerivationTree::Leaf { nt, .. } => nt,
            DerivationTree::Node { nt, .. } => nt,
        }
    }

    /// Leaves count one; a node is one more than its taller child.
    pub fn height(&self) -> usize {
        match self {
            DerivationTree::Leaf { .. } => 1,
            DerivationTree::Node { left, right, .. } => 1 + left.height().max(right.height()),
        }
    }

    /// The terminal string along the leaves, left to right. Never empty:
    /// every leaf contributes exactly one terminal.
    pub fn frontier(&self) -> Sentence {
        fn walk(t: &DerivationTree, out: &mut Sentence) {
            match t {
                DerivationTree::Leaf { terminal, .. } => out.push(terminal.clone()),
                DerivationTree::Node { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        let mut out = Sentence::empty();
        walk(self, &mut out);
        out
    }

    /// Every nonterminal labelling a leaf or node.
    pub fn nonterminals(&self) -> BTreeSet<NonTerminal> {
        fn walk(t: &DerivationTree, out: &mut BTreeSet<NonTerminal>) {
            out.insert(t.root().clone());
            if let DerivationTree::Node { left, right, .. } = t {
                walk(left, out);
                walk(right, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// A maximal root-to-leaf path, taking the left child on height ties.
    /// Its symbol count is `height + 1`.
    pub fn longest_path(&self) -> TreePath {
        fn walk(t: &DerivationTree, out: &mut Vec<Symbol>) {
            match t {
                DerivationTree::Leaf { nt, terminal } => {
                    out.push(Symbol::N(nt.clone()));
                    out.push(Symbol::T(terminal.clone()));
                }
                DerivationTree::Node { nt, left, right } => {
                    out.push(Symbol::N(nt.clone()));
                    if left.height() >= right.height() {
                        walk(left, out);
                    } else {
                        walk(right, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        TreePath(out)
    }

    /// The subtree the code addresses.
    pub fn subtree(&self, code: &TreeCode) -> Option<&DerivationTree> {
        let mut cur = self;
        for d in code.steps() {
            match cur {
                DerivationTree::Leaf { .. } => return None,
                DerivationTree::Node { left, right, .. } => {
                    cur = match d {
                        Direction::Left => left,
                        Direction::Right => right,
                    };
                }
            }
        }
        Some(cur)
    }

    /// Splits the tree at `code` into the frontier to the left of the
    /// addressed subtree, the subtree itself, and the frontier to its right,
    /// so that `left ++ frontier(subtree) ++ right == frontier(self)`.
    pub fn decompose(&self, code: &TreeCode) -> Option<(Sentence, DerivationTree, Sentence)> {
        let mut left = Sentence::empty();
        let mut right_parts: Vec<Sentence> = Vec::new();
        let mut cur = self;
        for d in code.steps() {
            match cur {
                DerivationTree::Leaf { .. } => return None,
                DerivationTree::Node { left: l, right: r, .. } => match d {
                    Direction::Left => {
                        right_parts.push(r.frontier());
                        cur = l;
                    }
                    Direction::Right => {
                        left = Sentence::concat([&left, &l.frontier()]);
                        cur = r;
                    }
                },
            }
        }
        let right = Sentence::concat(right_parts.iter().rev());
        Some((left, cur.clone(), right))
    }

    /// A copy of the tree with the subtree at `code` swapped for
    /// `replacement`. The surrounding structure is untouched, so the new
    /// frontier is the old one with the addressed span substituted.
    pub fn replace_at(
        &self,
        code: &TreeCode,
        replacement: DerivationTree,
    ) -> Result<DerivationTree, TreeError> {
        fn go(
            t: &DerivationTree,
            steps: &[Direction],
            replacement: DerivationTree,
        ) -> Result<DerivationTree, TreeError> {
            let Some((d, rest)) = steps.split_first() else {
                return Ok(replacement);
            };
            match t {
                DerivationTree::Leaf { .. } => Err(TreeError::InvalidCode),
                DerivationTree::Node { nt, left, right } => Ok(match d {
                    Direction::Left => DerivationTree::node(
                        nt.clone(),
                        go(left, rest, replacement)?,
                        (**right).clone(),
                    ),
                    Direction::Right => DerivationTree::node(
                        nt.clone(),
                        (**left).clone(),
                        go(right, rest, replacement)?,
                    ),
                }),
            }
        }
        go(self, code.steps(), replacement)
    }

    /// The code of the leftmost occurrence of `path`, found by trying left
    /// subtrees first.
    pub fn code_of_path(&self, path: &TreePath) -> Result<TreeCode, TreeError> {
        fn go(t: &DerivationTree, syms: &[Symbol]) -> Option<Vec<Direction>> {
            match t {
                DerivationTree::Leaf { nt, terminal } => {
                    let matches = syms.len() == 2
                        && syms[0] == Symbol::N(nt.clone())
                        && syms[1] == Symbol::T(terminal.clone());
                    matches.then(Vec::new)
                }
                DerivationTree::Node { nt, left, right } => {
                    if syms.first() != Some(&Symbol::N(nt.clone())) {
                        return None;
                    }
                    if let Some(mut steps) = go(left, &syms[1..]) {
                        steps.insert(0, Direction::Left);
                        return Some(steps);
                    }
                    let mut steps = go(right, &syms[1..])?;
                    steps.insert(0, Direction::Right);
                    Some(steps)
                }
            }
        }
        go(self, path.symbols())
            .map(TreeCode::new)
            .ok_or(TreeError::PathNotFound)
    }

    /// The path the code walks, provided it lands exactly on a leaf.
    pub fn path_of_code(&self, code: &TreeCode) -> Result<TreePath, TreeError> {
        let mut syms = Vec::with_capacity(code.len() + 2);
        let mut cur = self;
        for d in code.steps() {
            match cur {
                DerivationTree::Leaf { .. } => return Err(TreeError::InvalidCode),
                DerivationTree::Node { nt, left, right } => {
                    syms.push(Symbol::N(nt.clone()));
                    cur = match d {
                        Direction::Left => left,
                        Direction::Right => right,
                    };
                }
            }
        }
        match cur {
            DerivationTree::Leaf { nt, terminal } => {
                syms.push(Symbol::N(nt.clone()));
                syms.push(Symbol::T(terminal.clone()));
                Ok(TreePath(syms))
            }
            DerivationTree::Node { .. } => Err(TreeError::InvalidCode),
        }
    }

    /// Carves the tree along a maximal path split as `p1 ++ p2`: the subtree
    /// at depth `|p1|` together with the flanking frontiers and the two code
    /// halves. Requires `|p1| >= 1`, `|p2| >= 2`, `c` realizing `p1 ++ p2`,
    /// and the path to be maximal, i.e. `height == |p1| + |p2| - 1`.
    pub fn split_code(
        &self,
        p1: &[Symbol],
        p2: &[Symbol],
        c: &TreeCode,
    ) -> Result<CodeSplit, TreeError> {
        let mismatch = |msg: &str| TreeError::CodePathMismatch(msg.to_string());
        if p1.is_empty() {
            return Err(mismatch("the prefix path must be nonempty"));
        }
        if p2.len() < 2 {
            return Err(mismatch("the suffix path must reach past its own root"));
        }
        let full: Vec<Symbol> = p1.iter().chain(p2).cloned().collect();
        let walked = self
            .path_of_code(c)
            .map_err(|_| mismatch("code does not reach a leaf"))?;
        if walked.symbols() != full {
            return Err(mismatch("code walks a different path"));
        }
        if self.height() != p1.len() + p2.len() - 1 {
            return Err(mismatch("path is not maximal in the tree"));
        }
        let prefix = c.slice(0..p1.len());
        let suffix = c.slice(p1.len()..c.len());
        let (left, subtree, right) = self
            .decompose(&prefix)
            .expect("a prefix of a leaf code addresses a node");
        debug_assert_eq!(subtree.height(), p2.len() - 1);
        debug_assert_eq!(
            subtree.path_of_code(&suffix).as_ref().map(TreePath::symbols),
            Ok(p2),
        );
        Ok(CodeSplit { prefix, suffix, subtree, left, right })
    }

    /// The `i`-fold pump: grafting the subtree at `code` back into this tree
    /// `i` times over. With `decompose(self, code) = (v, t2, x)`, the result
    /// has frontier `v^i ++ frontier(t2) ++ x^i`. Requires a nonempty code
    /// whose subtree carries the same label as the root.
    pub fn pump_tree(&self, code: &TreeCode, i: usize) -> Result<DerivationTree, TreeError> {
        if code.is_empty() {
            return Err(TreeError::EmptyCode);
        }
        let inner = self.subtree(code).ok_or(TreeError::InvalidCode)?;
        if inner.root() != self.root() {
            return Err(TreeError::RootMismatch {
                expected: self.root().clone(),
                found: inner.root().clone(),
            });
        }
        let mut pumped = inner.clone();
        for _ in 0..i {
            pumped = self.replace_at(code, pumped)?;
        }
        Ok(pumped)
    }
}

/// The outcome of [`DerivationTree::split_code`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSplit {
    /// Addresses the carved subtree; as long as `p1`.
    pub prefix: TreeCode,
    /// The rest of the walked code, valid inside the subtree.
    pub suffix: TreeCode,
    pub subtree: DerivationTree,
    /// Frontier left of the subtree.
    pub left: Sentence,
    /// Frontier right of the subtree.
    pub right: Sentence,
}

/// The first value occurring twice in `xs`, scanning left to right, paired
/// with its first and last occurrence: `xs = before ++ [value] ++ between ++
/// [value] ++ after`. By pigeonhole this cannot fail when `xs` draws from
/// `universe` and is longer than the number of distinct values in it.
pub fn find_duplicate<T: Eq + Clone>(
    xs: &[T],
    universe: &[T],
) -> Result<DuplicateSplit<T>, TreeError> {
    for (first, value) in xs.iter().enumerate() {
        let last = xs.len() - 1 - xs.iter().rev().position(|x| x == value).expect("present");
        if last > first {
            return Ok(DuplicateSplit {
                value: value.clone(),
                first,
                last,
                before: xs[..first].to_vec(),
                between: xs[first + 1..last].to_vec(),
                after: xs[last + 1..].to_vec(),
            });
        }
    }
    let mut distinct: Vec<&T> = Vec::new();
    for u in universe {
        if !distinct.contains(&u) {
            distinct.push(u);
        }
    }
    debug_assert!(
        xs.len() <= distinct.len() || xs.iter().any(|x| !universe.contains(x)),
        "pigeonhole violated"
    );
    Err(TreeError::NoDuplicate)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateSplit<T> {
    pub value: T,
    pub first: usize,
    pub last: usize,
    pub before: Vec<T>,
    pub between: Vec<T>,
    pub after: Vec<T>,
}

impl fmt::Display for DerivationTree {
    /// Parenthesized form: `(S (A a) (B b))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationTree::Leaf { nt, terminal } => write!(f, "({nt} {terminal})"),
            DerivationTree::Node { nt, left, right } => write!(f, "({nt} {left} {right})"),
        }
    }
}
