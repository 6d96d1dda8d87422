//! Classical (unweighted) finite automata.
//!
//! These are the machines behind every support-language computation: query
//! compilation targets them, sphere and stripe constructions produce them,
//! and the dominance decision reduces to Boolean algebra over them. States
//! are dense integers; there are no epsilon transitions anywhere — query
//! compilation produces epsilon-free automata directly.

mod ops;
mod rpq;

pub use rpq::{compile, parse_rpq, RpqExpr};

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::alphabet::{is_identifier, Alphabet, SymbolId, Word};
use crate::error::{Error, Result};

/// A nondeterministic or deterministic finite automaton over identifiers.
#[derive(Debug, Clone)]
pub struct ClassicalAutomaton {
    alphabet: Alphabet,
    /// Present when the automaton came from a file; generated states render
    /// as `s{id}`.
    state_names: Option<Vec<String>>,
    initial: usize,
    finals: BTreeSet<usize>,
    /// Per-state transitions, sorted by `(symbol, target)` and duplicate-free.
    delta: Vec<Vec<(SymbolId, usize)>>,
    /// True only when there is exactly one transition per (state, symbol).
    det_complete: bool,
}

impl ClassicalAutomaton {
    /// A one-state automaton accepting nothing.
    pub fn new(alphabet: Alphabet) -> Self {
        ClassicalAutomaton {
            alphabet,
            state_names: None,
            initial: 0,
            finals: BTreeSet::new(),
            delta: vec![Vec::new()],
            det_complete: false,
        }
    }

    /// The automaton accepting every word over `alphabet`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut a = ClassicalAutomaton::new(alphabet);
        a.add_final(0);
        for sym in 0..a.alphabet.len() as SymbolId {
            a.add_transition_sym(0, sym, 0);
        }
        a.det_complete = true;
        a
    }

    pub fn add_state(&mut self) -> usize {
        let id = self.delta.len();
        self.delta.push(Vec::new());
        if let Some(names) = &mut self.state_names {
            names.push(format!("s{id}"));
        }
        id
    }

    pub fn set_initial(&mut self, state: usize) {
        debug_assert!(state < self.delta.len());
        self.initial = state;
    }

    pub fn add_final(&mut self, state: usize) {
        debug_assert!(state < self.delta.len());
        self.finals.insert(state);
    }

    pub fn add_transition(&mut self, src: usize, label: &str, dst: usize) {
        let sym = self.alphabet.intern(label);
        self.add_transition_sym(src, sym, dst);
    }

    pub(crate) fn add_transition_sym(&mut self, src: usize, sym: SymbolId, dst: usize) {
        debug_assert!(src < self.delta.len() && dst < self.delta.len());
        let row = &mut self.delta[src];
        if let Err(at) = row.binary_search(&(sym, dst)) {
            row.insert(at, (sym, dst));
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
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

    pub fn is_det_complete(&self) -> bool {
        self.det_complete
    }

    pub(crate) fn mark_det_complete(&mut self) {
        self.det_complete = true;
    }

    pub fn transitions_from(&self, state: usize) -> &[(SymbolId, usize)] {
        &self.delta[state]
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    /// All transitions as `(source, symbol, target)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, SymbolId, usize)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(src, row)| row.iter().map(move |&(sym, dst)| (src, sym, dst)))
    }

    pub fn state_name(&self, state: usize) -> String {
        match &self.state_names {
            Some(names) => names[state].clone(),
            None => format!("s{state}"),
        }
    }

    pub(crate) fn set_state_names(&mut self, names: Vec<String>) {
        debug_assert_eq!(names.len(), self.delta.len());
        self.state_names = Some(names);
    }

    fn step(&self, states: &BTreeSet<usize>, sym: SymbolId) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &state in states {
            let row = &self.delta[state];
            let start = row.partition_point(|&(s, _)| s < sym);
            for &(s, dst) in &row[start..] {
                if s != sym {
                    break;
                }
                next.insert(dst);
            }
        }
        next
    }

    fn contains_final(&self, states: &BTreeSet<usize>) -> bool {
        states.iter().any(|s| self.finals.contains(s))
    }

    /// NFA simulation; symbols outside the alphabet reject immediately.
    pub fn accepts(&self, word: &Word) -> bool {
        let mut current = BTreeSet::from([self.initial]);
        for label in word.labels() {
            let Some(sym) = self.alphabet.id(label) else {
                return false;
            };
            current = self.step(&current, sym);
            if current.is_empty() {
                return false;
            }
        }
        self.contains_final(&current)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.delta.len()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(state) = queue.pop_front() {
            for &(_, dst) in &self.delta[state] {
                if !seen[dst] {
                    seen[dst] = true;
                    queue.push_back(dst);
                }
            }
        }
        seen
    }

    /// True iff no final state is reachable.
    pub fn is_empty_language(&self) -> bool {
        let reachable = self.reachable();
        !self.finals.iter().any(|&f| reachable[f])
    }

    /// All accepted words of length at most `max_len`, in lexicographic
    /// order (by label sequence), duplicate-free.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Word> {
        let order = self.alphabet.ids_by_label();
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        let start = BTreeSet::from([self.initial]);
        self.enumerate_rec(&start, &order, max_len, &mut prefix, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        states: &BTreeSet<usize>,
        order: &[SymbolId],
        max_len: usize,
        prefix: &mut Vec<SymbolId>,
        out: &mut Vec<Word>,
    ) {
        if self.contains_final(states) {
            out.push(Word::from_ids(prefix, &self.alphabet));
        }
        if prefix.len() == max_len {
            return;
        }
        for &sym in order {
            let next = self.step(states, sym);
            if next.is_empty() {
                continue;
            }
            prefix.push(sym);
            self.enumerate_rec(&next, order, max_len, prefix, out);
            prefix.pop();
        }
    }

    /// The shortest accepted word, lexicographically least among the
    /// shortest; `None` for the empty language.
    pub fn shortest_word(&self) -> Option<Word> {
        let order = self.alphabet.ids_by_label();
        let start = BTreeSet::from([self.initial]);
        if self.contains_final(&start) {
            return Some(Word::epsilon());
        }
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([(start, Vec::<SymbolId>::new())]);
        while let Some((states, word)) = queue.pop_front() {
            for &sym in &order {
                let next = self.step(&states, sym);
                if next.is_empty() || seen.contains(&next) {
                    continue;
                }
                let mut extended = word.clone();
                extended.push(sym);
                if self.contains_final(&next) {
                    return Some(Word::from_ids(&extended, &self.alphabet));
                }
                seen.insert(next.clone());
                queue.push_back((next, extended));
            }
        }
        None
    }

    /// Rebuilds the automaton over `target`, which must contain every label
    /// of the current alphabet.
    pub(crate) fn remap(&self, target: &Alphabet) -> ClassicalAutomaton {
        let translate: Vec<SymbolId> = self
            .alphabet
            .labels()
            .map(|l| target.id(l).expect("target alphabet must cover the source"))
            .collect();
        let mut delta = Vec::with_capacity(self.delta.len());
        for row in &self.delta {
            let mut new_row: Vec<(SymbolId, usize)> = row
                .iter()
                .map(|&(sym, dst)| (translate[sym as usize], dst))
                .collect();
            new_row.sort_unstable();
            new_row.dedup();
            delta.push(new_row);
        }
        ClassicalAutomaton {
            alphabet: target.clone(),
            state_names: self.state_names.clone(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta,
            det_complete: self.det_complete && target.len() == self.alphabet.len(),
        }
    }

    /// Parses the classical text format: `initial <state>`, `final <state>…`,
    /// `trans <src> <label> <dst>`; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut automaton = ClassicalAutomaton::new(Alphabet::new());
        automaton.delta.clear();
        let mut names: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut initial: Option<usize> = None;

        let mut state_id = |name: &str,
                            line: usize,
                            names: &mut Vec<String>,
                            delta: &mut Vec<Vec<(SymbolId, usize)>>|
         -> Result<usize> {
            if !is_identifier(name) {
                return Err(Error::Format {
                    line,
                    message: format!("`{name}` is not a valid state name"),
                });
            }
            Ok(*index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                delta.push(Vec::new());
                names.len() - 1
            }))
        };

        for (number, raw) in text.lines().enumerate() {
            let line = number + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
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
                    initial = Some(state_id(fields[1], line, &mut names, &mut automaton.delta)?);
                }
                "final" => {
                    for name in &fields[1..] {
                        let id = state_id(name, line, &mut names, &mut automaton.delta)?;
                        automaton.finals.insert(id);
                    }
                }
                "trans" => {
                    if fields.len() != 4 {
                        return Err(Error::Format {
                            line,
                            message: "expected `trans <src> <label> <dst>`".to_string(),
                        });
                    }
                    let src = state_id(fields[1], line, &mut names, &mut automaton.delta)?;
                    if !is_identifier(fields[2]) {
                        return Err(Error::Format {
                            line,
                            message: format!("`{}` is not a valid label", fields[2]),
                        });
                    }
                    let dst = state_id(fields[3], line, &mut names, &mut automaton.delta)?;
                    automaton.add_transition(src, fields[2], dst);
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
        automaton.set_state_names(names);
        Ok(automaton)
    }

    /// Canonical text form: initial, sorted finals, transitions sorted by
    /// (source name, label, target name). Stable across reruns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("initial {}\n", self.state_name(self.initial)));
        if !self.finals.is_empty() {
            let mut names: Vec<String> = self.finals.iter().map(|&f| self.state_name(f)).collect();
            names.sort();
            out.push_str(&format!("final {}\n", names.join(" ")));
        }
        let mut rows: Vec<(String, String, String)> = self
            .transitions()
            .map(|(src, sym, dst)| {
                (
                    self.state_name(src),
                    self.alphabet.label(sym).to_string(),
                    self.state_name(dst),
                )
            })
            .collect();
        rows.sort();
        rows.dedup();
        for (src, label, dst) in rows {
            out.push_str(&format!("trans {src} {label} {dst}\n"));
        }
        out
    }
}
