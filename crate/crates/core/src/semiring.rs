//! The four weight semirings and their shared total order.
//!
//! | tag            | carrier  | ⊕   | ⊗   | 0   | 1 | order          |
//! |----------------|----------|-----|-----|-----|---|----------------|
//! | `boolean`      | {t, f}   | ∨   | ∧   | f   | t | t ≺ f          |
//! | `tropical`     | ℕ ∪ {∞} | min | +   | ∞  | 0 | numeric, ∞ max |
//! | `fuzzy`        | ℕ ∪ {∞} | min | max | ∞  | 0 | numeric, ∞ max |
//! | `multiplicity` | ℕ        | +   | ·   | 0   | 1 | numeric        |
//!
//! Smaller is better throughout: `x ⪯ y` reads "x is at least as good as y".
//! All four orders are discrete — every element except the worst has an
//! immediate successor ([`Weight::next_worse`]) and every element except the
//! best has an immediate predecessor ([`Weight::previous_better`]).
//!
//! Multiplicity values are arbitrary precision. Tropical and fuzzy values are
//! naturals up to `u64::MAX` plus an explicit infinity; a tropical ⊗ that
//! would exceed the carrier reports [`Error::Overflow`] rather than wrapping.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Tag identifying one of the four supported semirings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemiringKind {
    Boolean,
    Tropical,
    Fuzzy,
    Multiplicity,
}

impl SemiringKind {
    pub const ALL: [SemiringKind; 4] = [
        SemiringKind::Boolean,
        SemiringKind::Tropical,
        SemiringKind::Fuzzy,
        SemiringKind::Multiplicity,
    ];

    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "boolean" => Ok(SemiringKind::Boolean),
            "tropical" => Ok(SemiringKind::Tropical),
            "fuzzy" => Ok(SemiringKind::Fuzzy),
            "multiplicity" => Ok(SemiringKind::Multiplicity),
            other => Err(Error::UnknownSemiring(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemiringKind::Boolean => "boolean",
            SemiringKind::Tropical => "tropical",
            SemiringKind::Fuzzy => "fuzzy",
            SemiringKind::Multiplicity => "multiplicity",
        }
    }

    /// The ⊕ identity (and ⊗ annihilator).
    pub fn zero(self) -> Weight {
        match self {
            SemiringKind::Boolean => Weight::Boolean(false),
            SemiringKind::Tropical => Weight::Tropical(ExtNat::Infinity),
            SemiringKind::Fuzzy => Weight::Fuzzy(ExtNat::Infinity),
            SemiringKind::Multiplicity => Weight::Multiplicity(BigUint::zero()),
        }
    }

    /// The ⊗ identity.
    pub fn one(self) -> Weight {
        match self {
            SemiringKind::Boolean => Weight::Boolean(true),
            SemiringKind::Tropical => Weight::Tropical(ExtNat::Finite(0)),
            SemiringKind::Fuzzy => Weight::Fuzzy(ExtNat::Finite(0)),
            SemiringKind::Multiplicity => Weight::Multiplicity(BigUint::one()),
        }
    }
}

impl fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A natural number extended with infinity; the tropical and fuzzy carrier.
///
/// The derived order puts `Finite` values numerically and `Infinity` above
/// them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtNat::Infinity)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

/// A value from one of the four semirings.
///
/// Operations on weights are dynamically checked: combining values from two
/// different semirings is a usage error, never a silent coercion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    Boolean(bool),
    Tropical(ExtNat),
    Fuzzy(ExtNat),
    Multiplicity(BigUint),
}

impl Weight {
    pub fn boolean(value: bool) -> Self {
        Weight::Boolean(value)
    }

    pub fn tropical(value: u64) -> Self {
        Weight::Tropical(ExtNat::Finite(value))
    }

    pub fn fuzzy(value: u64) -> Self {
        Weight::Fuzzy(ExtNat::Finite(value))
    }

    pub fn multiplicity(value: u64) -> Self {
        Weight::Multiplicity(BigUint::from(value))
    }

    pub fn kind(&self) -> SemiringKind {
        match self {
            Weight::Boolean(_) => SemiringKind::Boolean,
            Weight::Tropical(_) => SemiringKind::Tropical,
            Weight::Fuzzy(_) => SemiringKind::Fuzzy,
            Weight::Multiplicity(_) => SemiringKind::Multiplicity,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == self.kind().zero()
    }

    pub fn is_one(&self) -> bool {
        *self == self.kind().one()
    }

    fn check_same(&self, other: &Weight) -> Result<()> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(Error::MixedSemirings {
                left: self.kind(),
                right: other.kind(),
            })
        }
    }

    /// The semiring addition ⊕ (∨ / min / min / +).
    pub fn plus(&self, other: &Weight) -> Result<Weight> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Weight::Boolean(a), Weight::Boolean(b)) => Weight::Boolean(*a || *b),
            (Weight::Tropical(a), Weight::Tropical(b)) => Weight::Tropical((*a).min(*b)),
            (Weight::Fuzzy(a), Weight::Fuzzy(b)) => Weight::Fuzzy((*a).min(*b)),
            (Weight::Multiplicity(a), Weight::Multiplicity(b)) => Weight::Multiplicity(a + b),
            _ => unreachable!("kinds checked above"),
        })
    }

    /// The semiring multiplication ⊗ (∧ / + / max / ·).
    pub fn times(&self, other: &Weight) -> Result<Weight> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Weight::Boolean(a), Weight::Boolean(b)) => Weight::Boolean(*a && *b),
            (Weight::Tropical(a), Weight::Tropical(b)) => Weight::Tropical(match (a, b) {
                (ExtNat::Finite(x), ExtNat::Finite(y)) => ExtNat::Finite(
                    x.checked_add(*y)
                        .ok_or(Error::Overflow("tropical multiplication"))?,
                ),
                _ => ExtNat::Infinity,
            }),
            (Weight::Fuzzy(a), Weight::Fuzzy(b)) => Weight::Fuzzy((*a).max(*b)),
            (Weight::Multiplicity(a), Weight::Multiplicity(b)) => Weight::Multiplicity(a * b),
            _ => unreachable!("kinds checked above"),
        })
    }

    /// The total order ⪯: `Ordering::Less` means strictly better.
    pub fn cmp_order(&self, other: &Weight) -> Result<Ordering> {
        self.check_same(other)?;
        Ok(match (self, other) {
            // t ≺ f, the reverse of the native bool order.
            (Weight::Boolean(a), Weight::Boolean(b)) => a.cmp(b).reverse(),
            (Weight::Tropical(a), Weight::Tropical(b)) => a.cmp(b),
            (Weight::Fuzzy(a), Weight::Fuzzy(b)) => a.cmp(b),
            (Weight::Multiplicity(a), Weight::Multiplicity(b)) => a.cmp(b),
            _ => unreachable!("kinds checked above"),
        })
    }

    /// Decides x ⪯ y.
    pub fn leq(&self, other: &Weight) -> Result<bool> {
        Ok(self.cmp_order(other)? != Ordering::Greater)
    }

    /// The immediate successor in ⪯, where one exists.
    pub fn next_worse(&self) -> Option<Weight> {
        match self {
            Weight::Boolean(true) => Some(Weight::Boolean(false)),
            Weight::Boolean(false) => None,
            Weight::Tropical(ExtNat::Finite(n)) => n.checked_add(1).map(Weight::tropical),
            Weight::Tropical(ExtNat::Infinity) => None,
            Weight::Fuzzy(ExtNat::Finite(n)) => n.checked_add(1).map(Weight::fuzzy),
            Weight::Fuzzy(ExtNat::Infinity) => None,
            Weight::Multiplicity(n) => Some(Weight::Multiplicity(n + 1u32)),
        }
    }

    /// The immediate predecessor in ⪯, where one exists.
    pub fn previous_better(&self) -> Option<Weight> {
        match self {
            Weight::Boolean(false) => Some(Weight::Boolean(true)),
            Weight::Boolean(true) => None,
            Weight::Tropical(ExtNat::Finite(n)) => n.checked_sub(1).map(Weight::tropical),
            Weight::Tropical(ExtNat::Infinity) => None,
            Weight::Fuzzy(ExtNat::Finite(n)) => n.checked_sub(1).map(Weight::fuzzy),
            Weight::Fuzzy(ExtNat::Infinity) => None,
            Weight::Multiplicity(n) => {
                if n.is_zero() {
                    None
                } else {
                    Some(Weight::Multiplicity(n - 1u32))
                }
            }
        }
    }

    /// Parses the shared weight text syntax: a nonnegative decimal integer
    /// for the numeric semirings, `t`/`f` for Boolean. The token `inf` is
    /// rejected — it denotes the tropical/fuzzy zero, which edge and
    /// transition syntax bans.
    pub fn parse(kind: SemiringKind, text: &str) -> Result<Weight> {
        let err = |message: String| Error::Format { line: 0, message };
        match kind {
            SemiringKind::Boolean => match text {
                "t" => Ok(Weight::Boolean(true)),
                "f" => Ok(Weight::Boolean(false)),
                other => Err(err(format!("expected `t` or `f`, got `{other}`"))),
            },
            SemiringKind::Tropical | SemiringKind::Fuzzy => {
                if text == "inf" {
                    return Err(err(
                        "`inf` denotes the semiring zero and cannot be written here".to_string(),
                    ));
                }
                let n = parse_decimal_u64(text).map_err(err)?;
                Ok(match kind {
                    SemiringKind::Tropical => Weight::tropical(n),
                    _ => Weight::fuzzy(n),
                })
            }
            SemiringKind::Multiplicity => {
                if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(format!(
                        "expected a nonnegative decimal integer, got `{text}`"
                    )));
                }
                let n = BigUint::parse_bytes(text.as_bytes(), 10)
                    .expect("all-digit string parses as BigUint");
                Ok(Weight::Multiplicity(n))
            }
        }
    }
}

fn parse_decimal_u64(text: &str) -> std::result::Result<u64, String> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!(
            "expected a nonnegative decimal integer, got `{text}`"
        ));
    }
    text.parse::<u64>()
        .map_err(|_| format!("weight `{text}` is out of range"))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Boolean(true) => f.write_str("t"),
            Weight::Boolean(false) => f.write_str("f"),
            Weight::Tropical(n) | Weight::Fuzzy(n) => write!(f, "{n}"),
            Weight::Multiplicity(n) => write!(f, "{n}"),
        }
    }
}
