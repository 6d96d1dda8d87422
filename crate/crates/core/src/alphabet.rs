//! Label alphabets and words over them.
//!
//! Edge labels, like object and state names, are identifiers
//! (`[A-Za-z_][A-Za-z0-9_]*`). An [`Alphabet`] interns the labels of one
//! automaton or database and hands out dense [`SymbolId`]s; a [`Word`] is a
//! sequence of labels, independent of any particular interning.

use std::collections::HashMap;
use std::fmt;

/// Dense index of a label within one [`Alphabet`].
pub type SymbolId = u32;

/// Returns true for `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(text: &str) -> bool {
    let mut bytes = text.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// An interned set of labels. Ids are assigned in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    labels: Vec<String>,
    index: HashMap<String, SymbolId>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet::default()
    }

    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut alphabet = Alphabet::new();
        for label in labels {
            alphabet.intern(label.as_ref());
        }
        alphabet
    }

    pub fn intern(&mut self, label: &str) -> SymbolId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len() as SymbolId;
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<SymbolId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: SymbolId) -> &str {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    /// Ids ordered by label text; enumeration in this order is lexicographic.
    pub fn ids_by_label(&self) -> Vec<SymbolId> {
        let mut ids: Vec<SymbolId> = (0..self.labels.len() as SymbolId).collect();
        ids.sort_by(|&a, &b| self.label(a).cmp(self.label(b)));
        ids
    }

    /// A new alphabet holding the labels of both, `self`'s first.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut merged = self.clone();
        for label in other.labels() {
            merged.intern(label);
        }
        merged
    }
}

/// Alphabets compare as label sets; interning order is irrelevant.
impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        self.labels().all(|l| other.id(l).is_some())
    }
}

impl Eq for Alphabet {}

/// A word over label identifiers. The derived order is lexicographic on the
/// label sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<String>);

impl Word {
    pub fn epsilon() -> Self {
        Word(Vec::new())
    }

    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Word(labels.into_iter().map(Into::into).collect())
    }

    pub(crate) fn from_ids(ids: &[SymbolId], alphabet: &Alphabet) -> Self {
        Word(
            ids.iter()
                .map(|&id| alphabet.label(id).to_string())
                .collect(),
        )
    }

    pub fn push(&mut self, label: impl Into<String>) {
        self.0.push(label.into());
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }
}

/// Words render as their labels run together; the empty word renders as `()`,
/// matching the query syntax for ε.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for label in &self.0 {
            f.write_str(label)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers() {
        assert!(is_identifier("r"));
        assert!(is_identifier("_knows2"));
        assert!(!is_identifier("2r"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn interning_is_stable() {
        let mut a = Alphabet::new();
        assert_eq!(a.intern("r"), 0);
        assert_eq!(a.intern("s"), 1);
        assert_eq!(a.intern("r"), 0);
        assert_eq!(a.label(1), "s");
        assert_eq!(a.ids_by_label(), vec![0, 1]);
    }

    #[test]
    fn union_and_set_equality() {
        let a = Alphabet::from_labels(["s", "r"]);
        let b = Alphabet::from_labels(["r", "t"]);
        let u = a.union(&b);
        assert_eq!(u.len(), 3);
        assert_eq!(u, Alphabet::from_labels(["t", "s", "r"]));
        assert_ne!(a, b);
    }

    #[test]
    fn word_order_and_rendering() {
        let eps = Word::epsilon();
        let r = Word::from_labels(["r"]);
        let rs = Word::from_labels(["r", "s"]);
        assert!(eps < r && r < rs);
        assert_eq!(eps.to_string(), "()");
        assert_eq!(rs.to_string(), "rs");
    }
}
