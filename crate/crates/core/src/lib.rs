//! Regular path queries over semiring-weighted graph databases.
//!
//! A graph database here is an edge-labeled directed graph whose edges carry
//! weights from one of four totally ordered, discrete semirings (Boolean,
//! tropical, fuzzy, multiplicity). A regular path query (RPQ) is a regular
//! language over the edge labels; its answers are object pairs connected by
//! paths spelling words of that language, each pair annotated with the
//! semiring aggregate of its path weights.
//!
//! Beyond plain answers, the library materializes *why* a pair is an answer:
//! the reason language of a pair is the annotated language of all query words
//! witnessed between the two objects, represented as a weighted automaton
//! built by a lazy product of the query automaton with the database. Two
//! answers can then be compared: one set of reasons dominates another when
//! every witnessed word of the first appears in the second with a weight at
//! least as good. The decision procedure reduces dominance to containment
//! checks between classical (unweighted) languages carved out of the
//! annotated ones by sphere and stripe constructions.
//!
//! Module map:
//!
//! - [`semiring`] — the four weight domains, their shared total order, and
//!   discrete successor/predecessor steps.
//! - [`automata`] — classical automata: RPQ parsing and compilation,
//!   determinization, Boolean language algebra, containment, enumeration.
//! - [`annotated`] — weighted automata, their behavior, supports, and a
//!   line-oriented text format.
//! - [`graphdb`] — databases, query answering, and reason languages.
//! - [`spheres`] — inner spheres, outer spheres, and stripes per semiring.
//! - [`provenance`] — the dominance decision, its verdicts, and a brute-force
//!   oracle for validating bounded decisions.
//!
//! ```
//! use rpqprov::{compile, parse_rpq, answers, load_database, SemiringKind, StateCap};
//!
//! let db = load_database("a r 2 b\nb s 5 c\na r 4 c\n", SemiringKind::Tropical)?;
//! let query = compile(&parse_rpq("r.s|r")?);
//! for entry in answers(&query, &db, StateCap::default())? {
//!     println!("{} {} {}", entry.source, entry.target, entry.weight);
//! }
//! # Ok::<(), rpqprov::Error>(())
//! ```

pub mod alphabet;
pub mod annotated;
pub mod automata;
pub mod error;
pub mod graphdb;
pub mod limits;
pub mod provenance;
pub mod semiring;
pub mod spheres;

pub use alphabet::{Alphabet, SymbolId, Word};
pub use annotated::{AnnotatedAutomaton, AnnotatedEntry};
pub use automata::{compile, parse_rpq, ClassicalAutomaton, RpqExpr};
pub use error::{Error, Result};
pub use graphdb::{answers, load_database, reasons_automaton, reasons_enumerate};
pub use graphdb::{AnswerEntry, AnswerWeight, Database, DbPath};
pub use limits::StateCap;
pub use provenance::{compare, compare_pairs, dominates, oracle_dominates};
pub use provenance::{ComparisonConfig, DirectionOutcome, DominanceRelation, DominanceVerdict};
pub use semiring::{ExtNat, SemiringKind, Weight};
pub use spheres::{fuzzy_inner_sphere, multiplicity_expand, multiplicity_outer_sphere_support};
pub use spheres::{tropical_inner_sphere, MaskAutomaton, MultiTransitionAutomaton};
pub use spheres::{SphereFamily, SphereKind};
