//! Command-line front end: grammar file in, human-readable or JSON report
//! out.
//!
//! Exit codes: 0 success (member, refuted, report produced), 1 domain
//! failure (non-member, sentence unusable for pumping, refutation
//! inconclusive, empty language), 2 usage or parse errors. Diagnostics go
//! to stderr; stdout carries only the requested output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cfl_core::{
    cyk_member, cyk_tree, decompose_sentence, enumerate_language, parse_grammar, pumping_constant,
    refute_candidate, simplify, to_cnf, verify_pumping, Decomposition, Grammar, PumpReport,
    RefutationOutcome, Sentence,
};

#[derive(Parser)]
#[command(
    name = "cfl",
    version,
    about = "Context-free grammar toolkit: normal forms, parsing, and executable pumping arguments"
)]
struct Cli {
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove ε-rules, unit rules, and useless or unreachable symbols.
    Simplify {
        /// Grammar file.
        file: PathBuf,
    },
    /// Convert to Chomsky normal form and report the pumping constant.
    Cnf {
        /// Grammar file.
        file: PathBuf,
    },
    /// Decide membership; exit 0 exactly when the sentence is in the language.
    Member {
        /// Grammar file.
        file: PathBuf,
        /// The sentence, one terminal per character (see --tokens).
        sentence: String,
        /// Split the sentence on whitespace into multi-character terminals.
        #[arg(long)]
        tokens: bool,
    },
    /// Print one canonical derivation tree for the sentence.
    Parse {
        /// Grammar file.
        file: PathBuf,
        /// The sentence, one terminal per character (see --tokens).
        sentence: String,
        /// Split the sentence on whitespace into multi-character terminals.
        #[arg(long)]
        tokens: bool,
        /// Emit JSON instead of the parenthesized form.
        #[arg(long)]
        json: bool,
    },
    /// Split the sentence as u v w x y and verify pumping for i = 0..=imax.
    Pump {
        /// Grammar file.
        file: PathBuf,
        /// The sentence, one terminal per character (see --tokens).
        sentence: String,
        /// Largest pump count to verify.
        #[arg(long, default_value_t = 4, value_name = "N")]
        imax: usize,
        /// Split the sentence on whitespace into multi-character terminals.
        #[arg(long)]
        tokens: bool,
        /// Emit JSON instead of the textual report.
        #[arg(long)]
        json: bool,
    },
    /// List every sentence of the language up to a length bound.
    Enumerate {
        /// Grammar file.
        file: PathBuf,
        /// Largest sentence length to include.
        #[arg(long, value_name = "L")]
        max_len: usize,
        /// Emit a JSON array instead of one sentence per line.
        #[arg(long)]
        json: bool,
    },
    /// Refute the candidate pumping constant n = m for a^m b^m c^m.
    RefuteDemo {
        /// Block length of the candidate sentence.
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Largest pump count to try against each split.
        #[arg(long, default_value_t = 2, value_name = "N")]
        imax: usize,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    /// Unreadable or unparsable input: exit 2.
    Usage(String),
    /// Well-formed input outside the operation's domain: exit 1.
    Domain(String),
}

fn domain(err: impl std::fmt::Display) -> Failure {
    Failure::Domain(err.to_string())
}

fn load_grammar(path: &Path) -> Result<Grammar, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_grammar(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn sentence_of(text: &str, tokens: bool) -> Sentence {
    if tokens {
        Sentence::from_tokens(text)
    } else {
        Sentence::from_chars(text)
    }
}

/// The `pump --json` schema: the split and the verification table.
#[derive(Serialize)]
struct PumpOutput<'a> {
    decomposition: &'a Decomposition,
    report: &'a PumpReport,
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable report"));
}

fn run(cmd: Command) -> Result<ExitCode, Failure> {
    match cmd {
        Command::Simplify { file } => {
            let g = load_grammar(&file)?;
            let out = simplify(&g).map_err(domain)?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Cnf { file } => {
            let g = load_grammar(&file)?;
            let cnf = to_cnf(&g).map_err(domain)?;
            print!("{cnf}");
            println!("# k = {}", cnf.nonterminal_count());
            match pumping_constant(&cnf) {
                Ok(n) => println!("# n = {n}"),
                Err(e) => println!("# n = unavailable ({e})"),
            }
            println!("# empty: {}", cnf.has_empty_rule());
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { file, sentence, tokens } => {
            let g = load_grammar(&file)?;
            let cnf = to_cnf(&g).map_err(domain)?;
            let s = sentence_of(&sentence, tokens);
            if cyk_member(&cnf, &s) {
                println!("member");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not a member");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Parse { file, sentence, tokens, json } => {
            let g = load_grammar(&file)?;
            let cnf = to_cnf(&g).map_err(domain)?;
            let s = sentence_of(&sentence, tokens);
            if !cyk_member(&cnf, &s) {
                return Err(Failure::Domain(
                    "the sentence is not in the language of the grammar".into(),
                ));
            }
            match cyk_tree(&cnf, &s) {
                Some(tree) if json => print_json(&tree),
                Some(tree) => println!("{tree}"),
                // ε is derived by the start symbol's empty rule; there is
                // no binary tree to show.
                None if json => println!("null"),
                None => println!("ε"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pump { file, sentence, imax, tokens, json } => {
            let g = load_grammar(&file)?;
            let cnf = to_cnf(&g).map_err(domain)?;
            let s = sentence_of(&sentence, tokens);
            let d = decompose_sentence(&cnf, &s).map_err(domain)?;
            let report = verify_pumping(&cnf, &d, imax);
            if json {
                print_json(&PumpOutput { decomposition: &d, report: &report });
            } else {
                println!("{d}");
                for row in &report.rows {
                    println!(
                        "i = {}: {} (length {})",
                        row.i,
                        if row.member { "member" } else { "NOT a member" },
                        row.sentence.len()
                    );
                }
                println!("overall: {}", report.overall);
            }
            Ok(if report.overall { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Enumerate { file, max_len, json } => {
            let g = load_grammar(&file)?;
            let language = enumerate_language(&g, max_len).map_err(domain)?;
            if json {
                print_json(&language);
            } else {
                for s in &language {
                    println!("{s}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::RefuteDemo { m, imax, json } => {
            if m == 0 {
                return Err(Failure::Usage("--m must be at least 1".into()));
            }
            let s = Sentence::from_chars(&format!(
                "{}{}{}",
                "a".repeat(m),
                "b".repeat(m),
                "c".repeat(m)
            ));
            let report = refute_candidate(in_equal_blocks, &s, m, imax);
            if json {
                print_json(&report);
            } else {
                println!("sentence: {s}");
                println!("candidate constant n = {m}, i up to {imax}");
                println!("splits examined: {}", report.total_splits);
                match report.outcome {
                    RefutationOutcome::Refuted => {
                        println!("Refuted: every split fails for some i <= {imax}");
                    }
                    RefutationOutcome::NotRefuted => {
                        println!("NotRefuted: a split survived every i <= {imax}");
                    }
                }
            }
            Ok(match report.outcome {
                RefutationOutcome::Refuted => ExitCode::SUCCESS,
                RefutationOutcome::NotRefuted => ExitCode::FAILURE,
            })
        }
    }
}

/// Membership in {a^m b^m c^m | m >= 1}, the classic non-context-free
/// target of the refutation demo.
fn in_equal_blocks(s: &Sentence) -> bool {
    let names: Vec<&str> = s.iter().map(|t| t.name()).collect();
    let a = names.iter().take_while(|c| **c == "a").count();
    let b = names[a..].iter().take_while(|c| **c == "b").count();
    let c = names[a + b..].iter().take_while(|c| **c == "c").count();
    a + b + c == names.len() && a == b && b == c && a >= 1
}

#[cfg(feature = "parallel")]
fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not configure {n} worker threads: {e}");
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(jobs: Option<usize>) {
    if jobs.is_some() {
        eprintln!("note: built without the parallel feature; --jobs has no effect");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_jobs(cli.jobs);
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
