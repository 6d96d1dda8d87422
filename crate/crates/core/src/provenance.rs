//! The dominance decision between annotated languages.
//!
//! `L₁ ⪯ L₂` holds when (1) every support word of L₁ is a support word of
//! L₂, and (2) for every weight x, each word in the x-stripe of L₂ that L₁
//! also supports lies in the x-outer sphere of L₁ — pointwise: every word of
//! L₁ appears in L₂ with a weight at least as good. Both conditions are
//! containment checks between classical languages, so the decision reduces
//! to Boolean automaton algebra over sphere and stripe supports.
//!
//! Per semiring:
//!
//! - Boolean: a single non-zero weight makes condition (2) vacuous; the
//!   decision is plain language containment. Always decides.
//! - fuzzy: the realized weights of a language are among its transition
//!   weights plus the semiring one, so finitely many stripes settle it.
//!   Always decides.
//! - tropical and multiplicity: sphere levels are unbounded in general (the
//!   unrestricted problems are undecidable), so the decision takes an
//!   explicit weight bound and answers [`DirectionOutcome::Unknown`] exactly
//!   when either language has a word weighted beyond the bound.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::Word;
use crate::annotated::AnnotatedAutomaton;
use crate::automata::ClassicalAutomaton;
use crate::error::{Error, Result};
use crate::graphdb::{reasons_automaton, Database};
use crate::limits::StateCap;
use crate::semiring::{ExtNat, SemiringKind, Weight};
use crate::spheres::SphereFamily;

/// Parameters of a dominance decision.
#[derive(Debug, Clone)]
pub struct ComparisonConfig {
    pub semiring: SemiringKind,
    /// Largest sphere level to explore; required for tropical and
    /// multiplicity, ignored for Boolean and fuzzy.
    pub bound: Option<u64>,
    pub state_cap: StateCap,
}

impl ComparisonConfig {
    pub fn new(semiring: SemiringKind) -> Self {
        ComparisonConfig {
            semiring,
            bound: None,
            state_cap: StateCap::default(),
        }
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_state_cap(mut self, cap: StateCap) -> Self {
        self.state_cap = cap;
        self
    }
}

/// Outcome of one direction of the dominance check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectionOutcome {
    Holds,
    /// Condition (1) failed: `witness` is in the left support but not the
    /// right one.
    FailsSupport {
        witness: Word,
    },
    /// Condition (2) failed at `level`: the right language assigns `witness`
    /// the weight `level`, but the left language beats it.
    FailsStripe {
        level: u64,
        witness: Word,
    },
    /// Some word of either language weighs more than the bound.
    Unknown {
        bound: u64,
    },
}

impl DirectionOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, DirectionOutcome::Holds)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, DirectionOutcome::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            DirectionOutcome::FailsSupport { witness }
            | DirectionOutcome::FailsStripe { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// The four-way dominance relation, plus `Unknown` for bounded modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceRelation {
    LeftDominates,
    RightDominates,
    Equal,
    Incomparable,
    Unknown,
}

impl fmt::Display for DominanceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceRelation::LeftDominates => "left-dominates",
            DominanceRelation::RightDominates => "right-dominates",
            DominanceRelation::Equal => "equal",
            DominanceRelation::Incomparable => "incomparable",
            DominanceRelation::Unknown => "unknown",
        })
    }
}

/// Result of comparing two annotated languages in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceVerdict {
    pub relation: DominanceRelation,
    /// Does the left language dominate (⪯) the right one?
    pub left_to_right: DirectionOutcome,
    pub right_to_left: DirectionOutcome,
    pub bound: Option<u64>,
}

/// One language, prepared for containment checks: its support, its sphere
/// family, and the candidate stripe levels its weights can realize.
struct Prepared {
    support: ClassicalAutomaton,
    family: Option<SphereFamily>,
    candidates: Vec<u64>,
}

fn finite_transition_weights(l: &AnnotatedAutomaton) -> BTreeSet<u64> {
    l.transitions()
        .map(|(_, t)| match &t.weight {
            Weight::Tropical(ExtNat::Finite(n)) | Weight::Fuzzy(ExtNat::Finite(n)) => *n,
            _ => unreachable!("fuzzy transition weights are finite"),
        })
        .collect()
}

fn prepare_pair(
    l1: &AnnotatedAutomaton,
    l2: &AnnotatedAutomaton,
    cfg: &ComparisonConfig,
) -> Result<(Prepared, Prepared)> {
    for l in [l1, l2] {
        if l.kind() != cfg.semiring {
            return Err(Error::SemiringMismatch {
                expected: cfg.semiring,
                found: l.kind(),
            });
        }
    }
    let cap = cfg.state_cap;
    let prepared = |l: &AnnotatedAutomaton| -> Result<Prepared> {
        match cfg.semiring {
            SemiringKind::Boolean => Ok(Prepared {
                support: l.support(),
                family: None,
                candidates: Vec::new(),
            }),
            SemiringKind::Fuzzy => {
                // Realized weights of either language; both families carry
                // spheres for the union so one preparation serves both
                // directions. Stripe levels also need their predecessors.
                let mut candidates: BTreeSet<u64> = finite_transition_weights(l);
                candidates.insert(0);
                let mut levels = candidates.clone();
                levels.extend(finite_transition_weights(l1));
                levels.extend(finite_transition_weights(l2));
                for x in levels.clone() {
                    levels.insert(x.saturating_sub(1));
                }
                Ok(Prepared {
                    support: l.support(),
                    family: Some(SphereFamily::fuzzy(l, levels)?),
                    candidates: candidates.into_iter().collect(),
                })
            }
            SemiringKind::Tropical => {
                let bound = cfg.bound.ok_or(Error::MissingBound(cfg.semiring))?;
                Ok(Prepared {
                    support: l.support(),
                    family: Some(SphereFamily::tropical(l, bound, cap)?),
                    candidates: (0..=bound).collect(),
                })
            }
            SemiringKind::Multiplicity => {
                let bound = cfg.bound.ok_or(Error::MissingBound(cfg.semiring))?;
                Ok(Prepared {
                    support: l.support(),
                    family: Some(SphereFamily::multiplicity(l, bound + 1, cap)?),
                    candidates: (1..=bound).collect(),
                })
            }
        }
    };
    Ok((prepared(l1)?, prepared(l2)?))
}

/// Checks whether the prepared left language dominates the prepared right
/// one. (Note the argument roles: `left ⪯ right` means every left word
/// appears on the right with a weight at least as good — condition (2) walks
/// the stripes of the right language against the outer spheres of the left.)
fn check_direction(
    left: &Prepared,
    right: &Prepared,
    cfg: &ComparisonConfig,
) -> Result<DirectionOutcome> {
    let cap = cfg.state_cap;

    // Bounded modes refuse to answer when either language has weights beyond
    // the bound: sphere levels above it were never built.
    if matches!(
        cfg.semiring,
        SemiringKind::Tropical | SemiringKind::Multiplicity
    ) {
        let bound = cfg.bound.ok_or(Error::MissingBound(cfg.semiring))?;
        for side in [left, right] {
            let family = side.family.as_ref().expect("bounded modes carry families");
            let exceeded = match cfg.semiring {
                SemiringKind::Tropical => {
                    let within = family
                        .level(bound)
                        .ok_or(Error::MissingSphereLevel(bound))?;
                    !side.support.difference(within, cap)?.is_empty_language()
                }
                _ => !family
                    .level(bound + 1)
                    .ok_or(Error::MissingSphereLevel(bound + 1))?
                    .is_empty_language(),
            };
            if exceeded {
                return Ok(DirectionOutcome::Unknown { bound });
            }
        }
    }

    // Condition (1): support containment.
    let missing = left.support.difference(&right.support, cap)?;
    if !missing.is_empty_language() {
        let witness = missing.shortest_word().expect("nonempty language");
        return Ok(DirectionOutcome::FailsSupport { witness });
    }

    // Condition (2): per realized stripe level x of the right language,
    // stripe ∩ left support ⊆ left x-outer sphere.
    for &x in &right.candidates {
        let stripe = right
            .family
            .as_ref()
            .expect("weighted semirings carry families")
            .stripe(x, cap)?;
        let shared = stripe.intersect(&left.support, cap)?;
        if shared.is_empty_language() {
            continue;
        }
        let outer = left
            .family
            .as_ref()
            .expect("weighted semirings carry families")
            .outer(x, cap)?;
        let beaten = shared.difference(&outer, cap)?;
        if !beaten.is_empty_language() {
            let witness = beaten.shortest_word().expect("nonempty language");
            return Ok(DirectionOutcome::FailsStripe { level: x, witness });
        }
    }
    Ok(DirectionOutcome::Holds)
}

/// Decides whether `l1 ⪯ l2`.
pub fn dominates(
    l1: &AnnotatedAutomaton,
    l2: &AnnotatedAutomaton,
    cfg: &ComparisonConfig,
) -> Result<DirectionOutcome> {
    let (left, right) = prepare_pair(l1, l2, cfg)?;
    check_direction(&left, &right, cfg)
}

/// Runs the dominance check in both directions and classifies the pair.
pub fn compare(
    l1: &AnnotatedAutomaton,
    l2: &AnnotatedAutomaton,
    cfg: &ComparisonConfig,
) -> Result<DominanceVerdict> {
    let (left, right) = prepare_pair(l1, l2, cfg)?;
    let left_to_right = check_direction(&left, &right, cfg)?;
    let right_to_left = check_direction(&right, &left, cfg)?;
    let relation = if left_to_right.is_unknown() || right_to_left.is_unknown() {
        DominanceRelation::Unknown
    } else {
        match (left_to_right.holds(), right_to_left.holds()) {
            (true, true) => DominanceRelation::Equal,
            (true, false) => DominanceRelation::LeftDominates,
            (false, true) => DominanceRelation::RightDominates,
            (false, false) => DominanceRelation::Incomparable,
        }
    };
    Ok(DominanceVerdict {
        relation,
        left_to_right,
        right_to_left,
        bound: cfg.bound,
    })
}

/// Compares the reason languages of two answer pairs of the same query.
pub fn compare_pairs(
    query: &ClassicalAutomaton,
    db: &Database,
    pair1: (&str, &str),
    pair2: (&str, &str),
    cfg: &ComparisonConfig,
) -> Result<DominanceVerdict> {
    if db.kind() != cfg.semiring {
        return Err(Error::SemiringMismatch {
            expected: cfg.semiring,
            found: db.kind(),
        });
    }
    let l1 = reasons_automaton(query, db, pair1.0, pair1.1, cfg.state_cap)?;
    let l2 = reasons_automaton(query, db, pair2.0, pair2.1, cfg.state_cap)?;
    compare(&l1, &l2, cfg)
}

/// Brute-force check of the pointwise dominance predicate on the window of
/// words up to `max_len`: every non-zero word of `l1` must get a non-zero
/// weight at least as good in `l2`. Sound and complete on instances whose
/// supports the window covers; independent of the sphere machinery.
pub fn oracle_dominates(
    l1: &AnnotatedAutomaton,
    l2: &AnnotatedAutomaton,
    max_len: usize,
    cfg: &ComparisonConfig,
) -> Result<bool> {
    for l in [l1, l2] {
        if l.kind() != cfg.semiring {
            return Err(Error::SemiringMismatch {
                expected: cfg.semiring,
                found: l.kind(),
            });
        }
    }
    for entry in l1.enumerate_annotated(max_len)? {
        let other = l2.word_weight(&entry.word)?;
        if other.is_zero() || !other.leq(&entry.weight)? {
            return Ok(false);
        }
    }
    Ok(true)
}
