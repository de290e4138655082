//! CYK against the enumeration oracle, exhaustively: for every corpus
//! grammar and every string over its alphabet up to length 6, the chart
//! decision must equal membership in the oracle-enumerated language, and
//! every extracted tree must be a valid derivation of its sentence.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use cfl_core::{
    cyk_member, cyk_tree, enumerate_language, parse_grammar, to_cnf, validate_tree, Grammar,
    Sentence, Terminal,
};

const LEN: usize = 6;

fn corpus() -> Vec<(String, Grammar)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../grammars");
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|entry| entry.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "cfg"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().expect("file stem").to_string_lossy().into_owned();
            let text = fs::read_to_string(&p).expect("readable corpus file");
            (name, parse_grammar(&text).expect("corpus grammar parses"))
        })
        .collect()
}

/// Every string over `alphabet` of length at most `max_len`.
fn all_strings(alphabet: &[Terminal], max_len: usize) -> Vec<Sentence> {
    let mut out = vec![Sentence::empty()];
    let mut layer = vec![Sentence::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for s in &layer {
            for t in alphabet {
                let mut longer = s.clone();
                longer.push(t.clone());
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn chart_decision_equals_oracle_membership() {
    for (name, g) in corpus() {
        let oracle: BTreeSet<Sentence> =
            enumerate_language(&g, LEN).expect("enumeration stays within budget");
        let cnf = to_cnf(&g).expect("corpus language is nonempty");
        let alphabet: Vec<Terminal> = g.terminals().iter().cloned().collect();
        for s in all_strings(&alphabet, LEN) {
            assert_eq!(
                cyk_member(&cnf, &s),
                oracle.contains(&s),
                "{name}: disagreement on `{s}`"
            );
        }
    }
}

#[test]
fn extracted_trees_derive_their_sentences() {
    for (name, g) in corpus() {
        let oracle: BTreeSet<Sentence> =
            enumerate_language(&g, LEN).expect("enumeration stays within budget");
        let cnf = to_cnf(&g).expect("corpus language is nonempty");
        for s in &oracle {
            if s.is_empty() {
                assert!(cyk_tree(&cnf, s).is_none(), "{name}: no tree for ε");
                continue;
            }
            let t = cyk_tree(&cnf, s).unwrap_or_else(|| panic!("{name}: no tree for `{s}`"));
            assert!(validate_tree(&cnf, &t), "{name}: invalid tree for `{s}`");
            assert_eq!(&t.frontier(), s, "{name}: frontier mismatch");
            assert_eq!(t.root(), cnf.fresh_start(), "{name}: root mismatch");
        }
    }
}
