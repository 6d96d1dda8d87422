//! Boolean language algebra over classical automata.
//!
//! Binary operations work over the union of the operand alphabets; a symbol
//! absent from one operand simply has no transitions there. Complements are
//! taken relative to an explicit universe alphabet so that set differences in
//! containment checks share a universe. Subset constructions and products
//! count materialized states against a [`StateCap`].

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, SymbolId};
use crate::error::Result;
use crate::limits::StateCap;

use super::ClassicalAutomaton;

impl ClassicalAutomaton {
    /// Subset construction. The result is deterministic but partial: absent
    /// (state, symbol) pairs mean rejection.
    pub fn determinize(&self, cap: StateCap) -> Result<ClassicalAutomaton> {
        let mut result = ClassicalAutomaton::new(self.alphabet.clone());
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let start = vec![self.initial];
        index.insert(start.clone(), 0);
        if self.is_final(self.initial) {
            result.add_final(0);
        }
        let mut queue = VecDeque::from([start]);
        while let Some(subset) = queue.pop_front() {
            let src = index[&subset];
            for sym in 0..self.alphabet.len() as SymbolId {
                let mut next: Vec<usize> = Vec::new();
                for &state in &subset {
                    let row = self.transitions_from(state);
                    let from = row.partition_point(|&(s, _)| s < sym);
                    for &(s, dst) in &row[from..] {
                        if s != sym {
                            break;
                        }
                        next.push(dst);
                    }
                }
                next.sort_unstable();
                next.dedup();
                if next.is_empty() {
                    continue;
                }
                let dst = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        cap.charge(index.len() + 1, "determinization")?;
                        let id = result.add_state();
                        if next.iter().any(|s| self.is_final(*s)) {
                            result.add_final(id);
                        }
                        index.insert(next.clone(), id);
                        queue.push_back(next);
                        id
                    }
                };
                result.add_transition_sym(src, sym, dst);
            }
        }
        Ok(result)
    }

    /// Makes a deterministic automaton complete by adding a reject sink where
    /// transitions are missing. Requires a deterministic input.
    fn complete(&self) -> ClassicalAutomaton {
        let mut result = self.clone();
        result.state_names = None;
        let n = result.num_states();
        let syms = result.alphabet.len() as SymbolId;
        let missing: Vec<(usize, SymbolId)> = (0..n)
            .flat_map(|state| {
                (0..syms)
                    .filter(move |&sym| {
                        !self.transitions_from(state).iter().any(|&(s, _)| s == sym)
                    })
                    .map(move |sym| (state, sym))
            })
            .collect();
        if !missing.is_empty() {
            let sink = result.add_state();
            for sym in 0..syms {
                result.add_transition_sym(sink, sym, sink);
            }
            for (state, sym) in missing {
                result.add_transition_sym(state, sym, sink);
            }
        }
        result.mark_det_complete();
        result
    }

    /// The complement with respect to `Δ*` over `universe ∪ Δ(self)`.
    pub fn complement_over(
        &self,
        universe: &Alphabet,
        cap: StateCap,
    ) -> Result<ClassicalAutomaton> {
        let alphabet = self.alphabet.union(universe);
        let mut result = self.remap(&alphabet).determinize(cap)?.complete();
        result.finals = (0..result.num_states())
            .filter(|s| !result.finals.contains(s))
            .collect();
        Ok(result)
    }

    /// The complement over the automaton's own alphabet.
    pub fn complement(&self, cap: StateCap) -> Result<ClassicalAutomaton> {
        self.complement_over(&self.alphabet, cap)
    }

    /// Product automaton for the intersection of the two languages.
    pub fn intersect(
        &self,
        other: &ClassicalAutomaton,
        cap: StateCap,
    ) -> Result<ClassicalAutomaton> {
        let alphabet = self.alphabet.union(&other.alphabet);
        let left = self.remap(&alphabet);
        let right = other.remap(&alphabet);
        let mut result = ClassicalAutomaton::new(alphabet);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let start = (left.initial, right.initial);
        index.insert(start, 0);
        if left.is_final(start.0) && right.is_final(start.1) {
            result.add_final(0);
        }
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            let src = index[&pair];
            for &(sym, d1) in left.transitions_from(pair.0) {
                let row = right.transitions_from(pair.1);
                let from = row.partition_point(|&(s, _)| s < sym);
                for &(s, d2) in &row[from..] {
                    if s != sym {
                        break;
                    }
                    let next = (d1, d2);
                    let dst = match index.get(&next) {
                        Some(&id) => id,
                        None => {
                            cap.charge(index.len() + 1, "intersection")?;
                            let id = result.add_state();
                            if left.is_final(d1) && right.is_final(d2) {
                                result.add_final(id);
                            }
                            index.insert(next, id);
                            queue.push_back(next);
                            id
                        }
                    };
                    result.add_transition_sym(src, sym, dst);
                }
            }
        }
        Ok(result)
    }

    /// Automaton for the union of the two languages (epsilon-free: the fresh
    /// initial state copies both initial states' transitions).
    pub fn union(&self, other: &ClassicalAutomaton) -> ClassicalAutomaton {
        let alphabet = self.alphabet.union(&other.alphabet);
        let left = self.remap(&alphabet);
        let right = other.remap(&alphabet);
        let mut result = ClassicalAutomaton::new(alphabet);
        let offset_left = 1;
        for _ in 0..left.num_states() {
            result.add_state();
        }
        let offset_right = offset_left + left.num_states();
        for _ in 0..right.num_states() {
            result.add_state();
        }
        for (src, sym, dst) in left.transitions() {
            result.add_transition_sym(src + offset_left, sym, dst + offset_left);
        }
        for (src, sym, dst) in right.transitions() {
            result.add_transition_sym(src + offset_right, sym, dst + offset_right);
        }
        for &(sym, dst) in left.transitions_from(left.initial) {
            result.add_transition_sym(0, sym, dst + offset_left);
        }
        for &(sym, dst) in right.transitions_from(right.initial) {
            result.add_transition_sym(0, sym, dst + offset_right);
        }
        for &f in left.finals() {
            result.add_final(f + offset_left);
        }
        for &f in right.finals() {
            result.add_final(f + offset_right);
        }
        if left.is_final(left.initial) || right.is_final(right.initial) {
            result.add_final(0);
        }
        result
    }

    /// Automaton for `L(self) \ L(other)`.
    pub fn difference(
        &self,
        other: &ClassicalAutomaton,
        cap: StateCap,
    ) -> Result<ClassicalAutomaton> {
        let complement = other.complement_over(&self.alphabet, cap)?;
        self.intersect(&complement, cap)
    }

    /// Decides `L(other) ⊆ L(self)`.
    pub fn contains(&self, other: &ClassicalAutomaton, cap: StateCap) -> Result<bool> {
        Ok(other.difference(self, cap)?.is_empty_language())
    }

    /// Mutual containment.
    pub fn language_equal(&self, other: &ClassicalAutomaton, cap: StateCap) -> Result<bool> {
        Ok(self.contains(other, cap)? && other.contains(self, cap)?)
    }
}
