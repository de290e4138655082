//! Context-free grammars end to end: parsing grammar descriptions,
//! normalizing to Chomsky normal form, deciding membership with CYK, and —
//! the centerpiece — an executable pumping argument: for any long-enough
//! sentence, compute a `u v w x y` split by derivation-tree surgery,
//! machine-check that pumping it stays in the language by two independent
//! routes, and exhaustively refute candidate pumping constants for
//! languages that resist every split.
//!
//! Everything is deterministic: rule sets are ordered, tie-breaks are
//! fixed, and parallel maps preserve input order, so identical inputs give
//! identical outputs (and identical JSON) run over run.

pub mod cyk;
pub mod exec;
pub mod grammar;
pub mod oracle;
pub mod pumping;
pub mod symbol;
pub mod transform;
pub mod tree;

pub use cyk::{cyk_member, cyk_member_batch, cyk_tree, validate_tree, CykIndex};
pub use grammar::{parse_grammar, Grammar, GrammarError, ParseError, Rule};
pub use oracle::{
    decide_produces_empty, decide_produces_non_empty, enumerate_by_expansion, enumerate_language,
    enumerate_language_with, EnumerateOptions, OracleError,
};
pub use pumping::{
    decompose_sentence, pumping_constant, refute_candidate, verify_pumping, Decomposition,
    PumpReport, PumpRow, PumpingError, RefutationOutcome, RefutationReport, RefutationWitness,
    SplitSentences,
};
pub use symbol::{NonTerminal, Sentence, SententialForm, Symbol, Terminal};
pub use transform::{
    check_cnf, remove_empty_rules, remove_inaccessible, remove_unit_rules, remove_useless,
    simplify, to_cnf, CnfCheck, CnfGrammar, TransformError,
};
pub use tree::{
    find_duplicate, CodeSplit, DerivationTree, Direction, DuplicateSplit, TreeCode, TreeError,
    TreePath,
};
