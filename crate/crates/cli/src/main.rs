//! Command-line front end: query answering, reason enumeration, pairwise
//! comparison, sphere computations, and the brute-force oracle, over the
//! graph and automaton text formats.
//!
//! Results go to stdout (TSV by default, JSON lines on request), diagnostics
//! to stderr as a single line. Exit codes: 0 success, 1 input or usage
//! errors, 2 exceeded resource caps, 3 an unknown comparison verdict.
//! Identical invocations produce identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rpqprov::{
    answers, compare_pairs, compile, fuzzy_inner_sphere, load_database, multiplicity_expand,
    multiplicity_outer_sphere_support, parse_rpq, reasons_automaton, tropical_inner_sphere,
    AnnotatedAutomaton, ClassicalAutomaton, ComparisonConfig, Database, DirectionOutcome,
    DominanceRelation, DominanceVerdict, Error, SemiringKind, SphereFamily, StateCap,
};

#[derive(Parser)]
#[command(
    name = "rpqprov",
    version,
    about = "Regular path queries over semiring-weighted graphs, with per-answer provenance"
)]
struct Cli {
    /// State budget for automaton constructions (default 1000000; the
    /// RPQPROV_STATE_CAP environment variable overrides the default).
    #[arg(long, global = true)]
    state_cap: Option<usize>,

    /// Output format for result rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    JsonLines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SphereKindArg {
    Inner,
    Outer,
    Stripe,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query on a graph: one row per answer pair, sorted.
    Answers {
        /// Graph file (one `<src> <label> <weight> <dst>` edge per line).
        #[arg(long)]
        graph: PathBuf,
        /// Regular path query, e.g. "r.s|r".
        #[arg(long)]
        query: String,
        /// boolean, tropical, fuzzy, or multiplicity.
        #[arg(long)]
        semiring: String,
    },

    /// Enumerate the reasons of one answer pair: one (word, weight) row per
    /// reason, best weight first.
    Reasons {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long)]
        semiring: String,
        /// The answer pair, as `source:target`.
        #[arg(long)]
        pair: String,
        /// Longest reason word to enumerate.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Also write the reasons automaton to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },

    /// Compare the reasons of two answer pairs; prints the verdict record.
    Compare {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long)]
        semiring: String,
        /// Exactly two answer pairs, each as `source:target`.
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Sphere level bound; required for tropical and multiplicity.
        #[arg(long)]
        bound: Option<u64>,
    },

    /// Compute a sphere or stripe of an annotated automaton file.
    Sphere {
        /// Input file in the annotated-automaton text format.
        #[arg(long)]
        automaton: PathBuf,
        /// Optional check that the file uses this semiring.
        #[arg(long)]
        semiring: Option<String>,
        /// Sphere level.
        #[arg(long)]
        k: u64,
        /// inner (tropical/fuzzy), outer (multiplicity), or stripe.
        #[arg(long, value_enum)]
        kind: SphereKindArg,
        /// Output file; `-` writes to stdout. Inner spheres use the
        /// annotated format, outer spheres and stripes the classical one.
        #[arg(long)]
        out: PathBuf,
    },

    /// Compare two pairs with the brute-force pointwise oracle (for
    /// validating bounded decisions).
    OracleCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long)]
        semiring: String,
        /// Exactly two answer pairs, each as `source:target`.
        #[arg(long = "pair")]
        pairs: Vec<String>,
        /// Word-length window the oracle enumerates.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::StateCapExceeded { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cap = resolve_cap(cli.state_cap)?;
    let format = cli.format;
    match cli.command {
        Command::Answers {
            graph,
            query,
            semiring,
        } => {
            let (db, query) = load_inputs(&graph, &query, &semiring)?;
            let mut out = String::new();
            for entry in answers(&query, &db, cap)? {
                match format {
                    Format::Tsv => out.push_str(&format!(
                        "{}\t{}\t{}\n",
                        entry.source, entry.target, entry.weight
                    )),
                    Format::JsonLines => out.push_str(&format!(
                        "{}\n",
                        json!({
                            "source": entry.source,
                            "target": entry.target,
                            "weight": entry.weight.to_string(),
                        })
                    )),
                }
            }
            emit(&out)?;
            Ok(0)
        }

        Command::Reasons {
            graph,
            query,
            semiring,
            pair,
            max_len,
            export,
        } => {
            let (db, query) = load_inputs(&graph, &query, &semiring)?;
            let (source, target) = split_pair(&pair)?;
            let reasons = reasons_automaton(&query, &db, source, target, cap)?;
            if let Some(path) = export {
                std::fs::write(&path, reasons.to_text())?;
            }
            let mut out = String::new();
            for entry in reasons.enumerate_annotated(max_len)? {
                match format {
                    Format::Tsv => out.push_str(&format!("{}\t{}\n", entry.word, entry.weight)),
                    Format::JsonLines => out.push_str(&format!(
                        "{}\n",
                        json!({
                            "word": entry.word.to_string(),
                            "weight": entry.weight.to_string(),
                        })
                    )),
                }
            }
            emit(&out)?;
            Ok(0)
        }

        Command::Compare {
            graph,
            query,
            semiring,
            pairs,
            bound,
        } => {
            let (db, query) = load_inputs(&graph, &query, &semiring)?;
            let [first, second] = two_pairs(&pairs)?;
            let mut cfg = ComparisonConfig::new(db.kind()).with_state_cap(cap);
            cfg.bound = bound;
            let verdict =
                compare_pairs(&query, &db, split_pair(first)?, split_pair(second)?, &cfg)?;
            emit(&render_verdict(&verdict, format))?;
            Ok(if verdict.relation == DominanceRelation::Unknown {
                3
            } else {
                0
            })
        }

        Command::Sphere {
            automaton,
            semiring,
            k,
            kind,
            out,
        } => {
            let text = std::fs::read_to_string(&automaton)?;
            let input = AnnotatedAutomaton::parse_text(&text)?;
            if let Some(tag) = semiring {
                let expected = SemiringKind::parse(&tag)?;
                if input.kind() != expected {
                    return Err(Failure::usage(format!(
                        "{} is a {} automaton, not {}",
                        automaton.display(),
                        input.kind(),
                        expected
                    )));
                }
            }
            let rendered = compute_sphere(&input, k, kind, cap)?;
            if out == Path::new("-") {
                emit(&rendered)?;
            } else {
                std::fs::write(&out, rendered)?;
            }
            Ok(0)
        }

        Command::OracleCheck {
            graph,
            query,
            semiring,
            pairs,
            max_len,
        } => {
            let (db, query) = load_inputs(&graph, &query, &semiring)?;
            let [first, second] = two_pairs(&pairs)?;
            let (a, b) = split_pair(first)?;
            let (c, d) = split_pair(second)?;
            let l1 = reasons_automaton(&query, &db, a, b, cap)?;
            let l2 = reasons_automaton(&query, &db, c, d, cap)?;
            let forward = pointwise_failure(&l1, &l2, max_len)?;
            let backward = pointwise_failure(&l2, &l1, max_len)?;
            let relation = match (&forward, &backward) {
                (None, None) => DominanceRelation::Equal,
                (None, Some(_)) => DominanceRelation::LeftDominates,
                (Some(_), None) => DominanceRelation::RightDominates,
                (Some(_), Some(_)) => DominanceRelation::Incomparable,
            };
            let row = match format {
                Format::Tsv => format!(
                    "{relation}\t{}\t{}\t{}\t{}\t{max_len}\n",
                    outcome_word(&forward),
                    witness_word(&forward),
                    outcome_word(&backward),
                    witness_word(&backward),
                ),
                Format::JsonLines => format!(
                    "{}\n",
                    json!({
                        "relation": relation.to_string(),
                        "left_to_right": oracle_direction_json(&forward),
                        "right_to_left": oracle_direction_json(&backward),
                        "max_len": max_len,
                    })
                ),
            };
            emit(&row)?;
            Ok(0)
        }
    }
}

fn resolve_cap(flag: Option<usize>) -> Result<StateCap, Failure> {
    if let Some(cap) = flag {
        return Ok(StateCap::new(cap));
    }
    match std::env::var("RPQPROV_STATE_CAP") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map(StateCap::new)
            .map_err(|_| Failure::usage(format!("RPQPROV_STATE_CAP is not a number: `{text}`"))),
        Err(std::env::VarError::NotPresent) => Ok(StateCap::default()),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn load_inputs(
    graph: &Path,
    query: &str,
    semiring: &str,
) -> Result<(Database, ClassicalAutomaton), Failure> {
    let kind = SemiringKind::parse(semiring)?;
    let text = std::fs::read_to_string(graph)
        .map_err(|e| Failure::usage(format!("{}: {e}", graph.display())))?;
    let db = load_database(&text, kind)?;
    let query = compile(&parse_rpq(query)?);
    Ok((db, query))
}

fn split_pair(pair: &str) -> Result<(&str, &str), Failure> {
    pair.split_once(':')
        .ok_or_else(|| Failure::usage(format!("pair `{pair}` is not of the form source:target")))
}

fn two_pairs(pairs: &[String]) -> Result<[&String; 2], Failure> {
    match pairs {
        [first, second] => Ok([first, second]),
        _ => Err(Failure::usage(format!(
            "exactly two --pair arguments are required, got {}",
            pairs.len()
        ))),
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn outcome_text(outcome: &DirectionOutcome) -> String {
    match outcome {
        DirectionOutcome::Holds => "holds".to_string(),
        DirectionOutcome::FailsSupport { .. } => "fails-support".to_string(),
        DirectionOutcome::FailsStripe { level, .. } => format!("fails-stripe:{level}"),
        DirectionOutcome::Unknown { .. } => "unknown".to_string(),
    }
}

fn witness_text(outcome: &DirectionOutcome) -> String {
    outcome
        .witness()
        .map_or_else(|| "-".to_string(), |w| w.to_string())
}

fn direction_json(outcome: &DirectionOutcome) -> serde_json::Value {
    match outcome {
        DirectionOutcome::Holds => json!({ "outcome": "holds" }),
        DirectionOutcome::FailsSupport { witness } => json!({
            "outcome": "fails",
            "condition": "support",
            "witness": witness.to_string(),
        }),
        DirectionOutcome::FailsStripe { level, witness } => json!({
            "outcome": "fails",
            "condition": "stripe",
            "level": level,
            "witness": witness.to_string(),
        }),
        DirectionOutcome::Unknown { bound } => json!({
            "outcome": "unknown",
            "bound": bound,
        }),
    }
}

fn render_verdict(verdict: &DominanceVerdict, format: Format) -> String {
    match format {
        Format::Tsv => format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            verdict.relation,
            outcome_text(&verdict.left_to_right),
            witness_text(&verdict.left_to_right),
            outcome_text(&verdict.right_to_left),
            witness_text(&verdict.right_to_left),
            verdict
                .bound
                .map_or_else(|| "-".to_string(), |b| b.to_string()),
        ),
        Format::JsonLines => format!(
            "{}\n",
            json!({
                "relation": verdict.relation.to_string(),
                "left_to_right": direction_json(&verdict.left_to_right),
                "right_to_left": direction_json(&verdict.right_to_left),
                "bound": verdict.bound,
            })
        ),
    }
}

/// First word of `l1` (shortest, then lexicographic) that `l2` fails to
/// cover with a weight at least as good, within the window.
fn pointwise_failure(
    l1: &AnnotatedAutomaton,
    l2: &AnnotatedAutomaton,
    max_len: usize,
) -> Result<Option<rpqprov::Word>, Failure> {
    let mut entries = l1.enumerate_annotated(max_len)?;
    entries.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    for entry in entries {
        let other = l2.word_weight(&entry.word)?;
        if other.is_zero() || !other.leq(&entry.weight)? {
            return Ok(Some(entry.word));
        }
    }
    Ok(None)
}

fn outcome_word(failure: &Option<rpqprov::Word>) -> &'static str {
    if failure.is_some() {
        "fails"
    } else {
        "holds"
    }
}

fn witness_word(failure: &Option<rpqprov::Word>) -> String {
    failure
        .as_ref()
        .map_or_else(|| "-".to_string(), |w| w.to_string())
}

fn oracle_direction_json(failure: &Option<rpqprov::Word>) -> serde_json::Value {
    match failure {
        None => json!({ "outcome": "holds" }),
        Some(word) => json!({ "outcome": "fails", "witness": word.to_string() }),
    }
}

fn compute_sphere(
    input: &AnnotatedAutomaton,
    k: u64,
    kind: SphereKindArg,
    cap: StateCap,
) -> Result<String, Failure> {
    let unsupported = |what: &str| {
        Failure::usage(format!(
            "unsupported sphere request: {what} (inner spheres exist for tropical and fuzzy, \
             outer spheres for multiplicity, stripes for all three)"
        ))
    };
    match (kind, input.kind()) {
        (SphereKindArg::Inner, SemiringKind::Tropical) => {
            Ok(tropical_inner_sphere(input, k, cap)?.to_text())
        }
        (SphereKindArg::Inner, SemiringKind::Fuzzy) => Ok(fuzzy_inner_sphere(input, k)?.to_text()),
        (SphereKindArg::Inner, other) => {
            Err(unsupported(&format!("inner sphere of a {other} automaton")))
        }
        (SphereKindArg::Outer, SemiringKind::Multiplicity) => {
            let expanded = multiplicity_expand(input, cap)?;
            Ok(multiplicity_outer_sphere_support(&expanded, k, cap)?.to_text())
        }
        (SphereKindArg::Outer, other) => {
            Err(unsupported(&format!("outer sphere of a {other} automaton")))
        }
        (SphereKindArg::Stripe, SemiringKind::Tropical) => {
            let family = SphereFamily::tropical(input, k, cap)?;
            Ok(family.stripe(k, cap)?.to_text())
        }
        (SphereKindArg::Stripe, SemiringKind::Fuzzy) => {
            let family = SphereFamily::fuzzy(input, [k.saturating_sub(1), k])?;
            Ok(family.stripe(k, cap)?.to_text())
        }
        (SphereKindArg::Stripe, SemiringKind::Multiplicity) => {
            if k == 0 {
                return Err(Failure::usage(
                    "multiplicity stripes need k ≥ 1 (weight 0 marks absent words)".to_string(),
                ));
            }
            let family = SphereFamily::multiplicity(input, k + 1, cap)?;
            Ok(family.stripe(k, cap)?.to_text())
        }
        (SphereKindArg::Stripe, SemiringKind::Boolean) => {
            Err(unsupported("stripe of a boolean automaton"))
        }
    }
}
