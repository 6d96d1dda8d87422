//! Annotated (semiring-weighted) automata and their behavior.
//!
//! An annotated automaton denotes an annotated language: the weight of a word
//! is the ⊕-aggregate, over all accepting transition paths spelling it, of
//! the ⊗-product of the transition weights along the path. Words with no
//! accepting path implicitly carry the semiring zero; zero never appears on a
//! transition, which keeps the support construction exact (all four semirings
//! are zero-sum-free).

use std::collections::BTreeSet;

use crate::alphabet::{is_identifier, Alphabet, SymbolId, Word};
use crate::automata::ClassicalAutomaton;
use crate::error::{Error, Result};
use crate::semiring::{SemiringKind, Weight};

/// One outgoing transition: symbol, weight, target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub sym: SymbolId,
    pub weight: Weight,
    pub dst: usize,
}

/// A word paired with its non-zero weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedEntry {
    pub word: Word,
    pub weight: Weight,
}

/// A weighted finite automaton over one of the four semirings.
#[derive(Debug, Clone)]
pub struct AnnotatedAutomaton {
    kind: SemiringKind,
    alphabet: Alphabet,
    state_names: Vec<String>,
    initial: usize,
    finals: BTreeSet<usize>,
    /// Outgoing transitions per state, in insertion order, duplicate-free.
    out: Vec<Vec<Transition>>,
}

impl AnnotatedAutomaton {
    /// A fresh automaton with a single initial state `s0`.
    pub fn new(kind: SemiringKind) -> Self {
        AnnotatedAutomaton {
            kind,
            alphabet: Alphabet::new(),
            state_names: vec!["s0".to_string()],
            initial: 0,
            finals: BTreeSet::new(),
            out: vec![Vec::new()],
        }
    }

    pub fn with_alphabet(kind: SemiringKind, alphabet: Alphabet) -> Self {
        let mut a = AnnotatedAutomaton::new(kind);
        a.alphabet = alphabet;
        a
    }

    pub fn add_state(&mut self) -> usize {
        let id = self.out.len();
        self.out.push(Vec::new());
        self.state_names.push(format!("s{id}"));
        id
    }

    pub fn add_named_state(&mut self, name: impl Into<String>) -> usize {
        let id = self.add_state();
        self.state_names[id] = name.into();
        id
    }

    pub fn set_initial(&mut self, state: usize) {
        debug_assert!(state < self.out.len());
        self.initial = state;
    }

    pub fn add_final(&mut self, state: usize) {
        debug_assert!(state < self.out.len());
        self.finals.insert(state);
    }

    /// Adds one transition. The weight must belong to this automaton's
    /// semiring and must not be its zero. Exact duplicates are ignored
    /// (the transition set is a set).
    pub fn add_transition(
        &mut self,
        src: usize,
        label: &str,
        weight: Weight,
        dst: usize,
    ) -> Result<()> {
        debug_assert!(src < self.out.len() && dst < self.out.len());
        if weight.kind() != self.kind {
            return Err(Error::SemiringMismatch {
                expected: self.kind,
                found: weight.kind(),
            });
        }
        if weight.is_zero() {
            return Err(Error::ZeroWeight("transition"));
        }
        let sym = self.alphabet.intern(label);
        let transition = Transition { sym, weight, dst };
        if !self.out[src].contains(&transition) {
            self.out[src].push(transition);
        }
        Ok(())
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals.contains(&state)
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.state_names[state]
    }

    /// Replaces all state names at once (product constructions name their
    /// states after the pairs they stand for).
    pub(crate) fn rename_states(&mut self, names: Vec<String>) {
        debug_assert_eq!(names.len(), self.out.len());
        self.state_names = names;
    }

    pub fn transitions_from(&self, state: usize) -> &[Transition] {
        &self.out[state]
    }

    /// All transitions as `(source, &transition)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &Transition)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(src, row)| row.iter().map(move |t| (src, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// The behavior on one word: a dynamic program over word positions which
    /// maintains, per state, the ⊕-aggregate of the path weights of all
    /// transition paths from the initial state spelling the consumed prefix.
    /// Distributivity makes this equal to the ⊕ over whole paths; a fixed
    /// word has finitely many, so the value is exact for all four semirings.
    pub fn word_weight(&self, word: &Word) -> Result<Weight> {
        let zero = self.kind.zero();
        let mut current: Vec<Option<Weight>> = vec![None; self.out.len()];
        current[self.initial] = Some(self.kind.one());
        for label in word.labels() {
            let Some(sym) = self.alphabet.id(label) else {
                return Ok(zero);
            };
            let mut next: Vec<Option<Weight>> = vec![None; self.out.len()];
            for (state, weight) in current.iter().enumerate() {
                let Some(weight) = weight else { continue };
                for t in &self.out[state] {
                    if t.sym != sym {
                        continue;
                    }
                    let via = weight.times(&t.weight)?;
                    next[t.dst] = Some(match next[t.dst].take() {
                        None => via,
                        Some(acc) => acc.plus(&via)?,
                    });
                }
            }
            current = next;
        }
        let mut total: Option<Weight> = None;
        for &f in &self.finals {
            if let Some(weight) = &current[f] {
                total = Some(match total {
                    None => weight.clone(),
                    Some(acc) => acc.plus(weight)?,
                });
            }
        }
        Ok(total.unwrap_or(zero))
    }

    /// The support automaton: same shape, weights dropped. Because no
    /// transition carries zero and the semirings are zero-sum-free, its
    /// language is exactly the set of words with non-zero behavior.
    pub fn support(&self) -> ClassicalAutomaton {
        let mut support = ClassicalAutomaton::new(self.alphabet.clone());
        for _ in 1..self.out.len() {
            support.add_state();
        }
        support.set_initial(self.initial);
        for &f in &self.finals {
            support.add_final(f);
        }
        for (src, t) in self.transitions() {
            support.add_transition_sym(src, t.sym, t.dst);
        }
        support.set_state_names(self.state_names.clone());
        support
    }

    /// All `(word, weight)` entries with non-zero weight and length at most
    /// `max_len`, sorted by weight (best first) and then by word.
    pub fn enumerate_annotated(&self, max_len: usize) -> Result<Vec<AnnotatedEntry>> {
        let words = self.support().enumerate_words(max_len);
        let mut entries = Vec::with_capacity(words.len());
        for word in words {
            let weight = self.word_weight(&word)?;
            debug_assert!(!weight.is_zero(), "support words have non-zero weight");
            entries.push(AnnotatedEntry { word, weight });
        }
        entries.sort_by(|a, b| {
            a.weight
                .cmp_order(&b.weight)
                .expect("one automaton, one semiring")
                .then_with(|| a.word.cmp(&b.word))
        });
        Ok(entries)
    }

    /// Drops states that are not both reachable from the initial state and
    /// co-reachable to a final state. Behavior is unchanged.
    pub fn trim(&self) -> AnnotatedAutomaton {
        let n = self.out.len();
        let mut reachable = vec![false; n];
        reachable[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(state) = stack.pop() {
            for t in &self.out[state] {
                if !reachable[t.dst] {
                    reachable[t.dst] = true;
                    stack.push(t.dst);
                }
            }
        }
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (src, t) in self.transitions() {
            incoming[t.dst].push(src);
        }
        let mut coreachable = vec![false; n];
        let mut stack: Vec<usize> = self.finals.iter().copied().collect();
        for &f in &self.finals {
            coreachable[f] = true;
        }
        while let Some(state) = stack.pop() {
            for &src in &incoming[state] {
                if !coreachable[src] {
                    coreachable[src] = true;
                    stack.push(src);
                }
            }
        }

        let keep: Vec<usize> = (0..n).filter(|&s| reachable[s] && coreachable[s]).collect();
        if !keep.contains(&self.initial) {
            // No accepting path at all; keep just the initial state.
            let mut empty = AnnotatedAutomaton::with_alphabet(self.kind, self.alphabet.clone());
            empty.state_names[0] = self.state_names[self.initial].clone();
            return empty;
        }
        let mut renumber = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            renumber[old] = new;
        }
        let mut trimmed = AnnotatedAutomaton::with_alphabet(self.kind, self.alphabet.clone());
        trimmed.out = vec![Vec::new(); keep.len()];
        trimmed.state_names = keep.iter().map(|&s| self.state_names[s].clone()).collect();
        trimmed.initial = renumber[self.initial];
        trimmed.finals = self
            .finals
            .iter()
            .filter(|&&f| renumber[f] != usize::MAX)
            .map(|&f| renumber[f])
            .collect();
        for (src, t) in self.transitions() {
            if renumber[src] != usize::MAX && renumber[t.dst] != usize::MAX {
                trimmed.out[renumber[src]].push(Transition {
                    sym: t.sym,
                    weight: t.weight.clone(),
                    dst: renumber[t.dst],
                });
            }
        }
        trimmed
    }

    /// Parses the annotated text format:
    ///
    /// ```text
    /// semiring tropical
    /// initial p0
    /// final p1 p2
    /// trans p0 r 3 p1
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored. The semiring line must
    /// appear exactly once; transition weights are parsed in that semiring
    /// and must not be its zero.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut kind: Option<SemiringKind> = None;
        for (number, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            let mut fields = content.split_whitespace();
            if fields.next() == Some("semiring") {
                let line = number + 1;
                let tag = fields.next().ok_or_else(|| Error::Format {
                    line,
                    message: "expected `semiring <tag>`".to_string(),
                })?;
                if kind.is_some() {
                    return Err(Error::Format {
                        line,
                        message: "duplicate `semiring` line".to_string(),
                    });
                }
                kind = Some(SemiringKind::parse(tag)?);
            }
        }
        let Some(kind) = kind else {
            return Err(Error::Format {
                line: text.lines().count() + 1,
                message: "missing `semiring` line".to_string(),
            });
        };

        let mut automaton = AnnotatedAutomaton::new(kind);
        automaton.out.clear();
        automaton.state_names.clear();
        let mut index = std::collections::HashMap::new();
        let mut initial: Option<usize> = None;

        for (number, raw) in text.lines().enumerate() {
            let line = number + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let mut state_id = |name: &str, automaton: &mut Self| -> Result<usize> {
                if !is_identifier(name) {
                    return Err(Error::Format {
                        line,
                        message: format!("`{name}` is not a valid state name"),
                    });
                }
                Ok(*index.entry(name.to_string()).or_insert_with(|| {
                    automaton.out.push(Vec::new());
                    automaton.state_names.push(name.to_string());
                    automaton.out.len() - 1
                }))
            };
            match fields[0] {
                "semiring" => {}
                "initial" => {
                    if fields.len() != 2 {
                        return Err(Error::Format {
                            line,
                            message: "expected `initial <state>`".to_string(),
                        });
                    }
                    if initial.is_some() {
                        return Err(Error::Format {
                            line,
                            message: "duplicate `initial` line".to_string(),
                        });
                    }
                    initial = Some(state_id(fields[1], &mut automaton)?);
                }
                "final" => {
                    for name in &fields[1..] {
                        let id = state_id(name, &mut automaton)?;
                        automaton.finals.insert(id);
                    }
                }
                "trans" => {
                    if fields.len() != 5 {
                        return Err(Error::Format {
                            line,
                            message: "expected `trans <src> <label> <weight> <dst>`".to_string(),
                        });
                    }
                    let src = state_id(fields[1], &mut automaton)?;
                    let dst = state_id(fields[4], &mut automaton)?;
                    if !is_identifier(fields[2]) {
                        return Err(Error::Format {
                            line,
                            message: format!("`{}` is not a valid label", fields[2]),
                        });
                    }
                    let weight = Weight::parse(kind, fields[3]).map_err(|e| match e {
                        Error::Format { message, .. } => Error::Format { line, message },
                        other => other,
                    })?;
                    automaton
                        .add_transition(src, fields[2], weight, dst)
                        .map_err(|e| match e {
                            Error::ZeroWeight(_) => Error::Format {
                                line,
                                message:
                                    "zero-weight transition (the semiring zero is not allowed)"
                                        .to_string(),
                            },
                            other => other,
                        })?;
                }
                other => {
                    return Err(Error::Format {
                        line,
                        message: format!("unknown directive `{other}`"),
                    });
                }
            }
        }

        let Some(initial) = initial else {
            return Err(Error::Format {
                line: text.lines().count() + 1,
                message: "missing `initial` line".to_string(),
            });
        };
        automaton.initial = initial;
        Ok(automaton)
    }

    /// Canonical text form; loading it back reconstructs the automaton
    /// exactly (state names included).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("semiring {}\n", self.kind.name()));
        out.push_str(&format!("initial {}\n", self.state_names[self.initial]));
        if !self.finals.is_empty() {
            let mut names: Vec<&str> = self
                .finals
                .iter()
                .map(|&f| self.state_names[f].as_str())
                .collect();
            names.sort();
            out.push_str(&format!("final {}\n", names.join(" ")));
        }
        let mut rows: Vec<(String, String, Weight, String)> = self
            .transitions()
            .map(|(src, t)| {
                (
                    self.state_names[src].clone(),
                    self.alphabet.label(t.sym).to_string(),
                    t.weight.clone(),
                    self.state_names[t.dst].clone(),
                )
            })
            .collect();
        rows.sort_by(|a, b| {
            (&a.0, &a.1)
                .cmp(&(&b.0, &b.1))
                .then_with(|| a.2.cmp_order(&b.2).expect("one semiring"))
                .then_with(|| a.3.cmp(&b.3))
        });
        for (src, label, weight, dst) in rows {
            out.push_str(&format!("trans {src} {label} {weight} {dst}\n"));
        }
        out
    }
}
