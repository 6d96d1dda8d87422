//! Sphere, stripe, and outer-sphere computations.
//!
//! The x-inner sphere of an annotated language keeps the support words of
//! weight at most x, the x-outer sphere those of weight at least x, and the
//! x-stripe those of weight exactly x. Three constructions produce them:
//!
//! - tropical inner spheres come from a product with a digit [`MaskAutomaton`]
//!   whose paths are exactly the weight sequences summing to at most k;
//! - fuzzy inner spheres come from deleting every transition heavier than k;
//! - multiplicity outer spheres come from counting distinct accepting runs of
//!   the weight-expanded automaton with a k-fold product ([`multiplicity_outer_sphere_support`]).
//!
//! A [`SphereFamily`] collects sphere supports per level and derives stripes
//! (difference of adjacent levels) and, for inner families, outer spheres via
//! the identity ⌊L^x̆⌋ = (⌊L⌋ ∖ ⌊L^x⌋) ∪ ⌊L^ẋ⌋.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::ToPrimitive;

use crate::alphabet::{Alphabet, SymbolId};
use crate::annotated::AnnotatedAutomaton;
use crate::automata::ClassicalAutomaton;
use crate::error::{Error, Result};
use crate::limits::StateCap;
use crate::semiring::{ExtNat, SemiringKind, Weight};

/// The digit automaton M_k over the alphabet {0, …, k}: states p_0 … p_k,
/// all final, with a transition p_i --n--> p_{i+n} whenever i + n ≤ k. Its
/// paths from p_0 are exactly the digit sequences with sum at most k, so a
/// product with it masks away tropical paths heavier than k. Size O(k²).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskAutomaton {
    k: u64,
}

impl MaskAutomaton {
    pub fn new(k: u64) -> Self {
        MaskAutomaton { k }
    }

    pub fn parameter(self) -> u64 {
        self.k
    }

    pub fn initial(self) -> u64 {
        0
    }

    pub fn num_states(self) -> u64 {
        self.k + 1
    }

    /// Every state is final.
    pub fn is_final(self, state: u64) -> bool {
        state <= self.k
    }

    pub fn num_transitions(self) -> u128 {
        (u128::from(self.k) + 1) * (u128::from(self.k) + 2) / 2
    }

    /// The transition on digit `n` from `state`, if any.
    pub fn step(self, state: u64, digit: u64) -> Option<u64> {
        state.checked_add(digit).filter(|&next| next <= self.k)
    }

    /// Materialized transition set `(source, digit, target)`.
    pub fn transitions(self) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::new();
        for i in 0..=self.k {
            for n in 0..=(self.k - i) {
                out.push((i, n, i + n));
            }
        }
        out
    }

    /// Runs the digit word from the initial state.
    pub fn accepts(self, digits: &[u64]) -> bool {
        let mut state = 0;
        for &digit in digits {
            match self.step(state, digit) {
                Some(next) => state = next,
                None => return false,
            }
        }
        self.is_final(state)
    }
}

fn require_kind(a: &AnnotatedAutomaton, expected: SemiringKind) -> Result<()> {
    if a.kind() != expected {
        return Err(Error::SemiringMismatch {
            expected,
            found: a.kind(),
        });
    }
    Ok(())
}

fn finite_weight(weight: &Weight) -> u64 {
    match weight {
        Weight::Tropical(ExtNat::Finite(n)) | Weight::Fuzzy(ExtNat::Finite(n)) => *n,
        _ => unreachable!("transition weights are finite by construction"),
    }
}

/// The k-inner sphere of a tropical language: the product of the automaton
/// with M_k. Transitions heavier than k find no mask partner and vanish;
/// words of weight at most k keep their exact weight.
pub fn tropical_inner_sphere(
    a: &AnnotatedAutomaton,
    k: u64,
    cap: StateCap,
) -> Result<AnnotatedAutomaton> {
    require_kind(a, SemiringKind::Tropical)?;
    let mask = MaskAutomaton::new(k);
    let mut result =
        AnnotatedAutomaton::with_alphabet(SemiringKind::Tropical, a.alphabet().clone());
    let mut index: HashMap<(usize, u64), usize> = HashMap::new();
    let start = (a.initial(), 0u64);
    index.insert(start, 0);
    if a.is_final(a.initial()) {
        result.add_final(0);
    }
    let mut pending = VecDeque::from([start]);
    while let Some((state, used)) = pending.pop_front() {
        let src = index[&(state, used)];
        for t in a.transitions_from(state) {
            let n = finite_weight(&t.weight);
            let Some(next_used) = mask.step(used, n) else {
                continue;
            };
            let pair = (t.dst, next_used);
            let dst = match index.get(&pair) {
                Some(&id) => id,
                None => {
                    cap.charge(index.len() + 1, "tropical sphere product")?;
                    let id = result.add_state();
                    if a.is_final(pair.0) {
                        result.add_final(id);
                    }
                    index.insert(pair, id);
                    pending.push_back(pair);
                    id
                }
            };
            result.add_transition(src, a.alphabet().label(t.sym), t.weight.clone(), dst)?;
        }
    }
    Ok(result)
}

/// The k-inner sphere of a fuzzy language: the same automaton without the
/// transitions weighted by more than k.
pub fn fuzzy_inner_sphere(a: &AnnotatedAutomaton, k: u64) -> Result<AnnotatedAutomaton> {
    require_kind(a, SemiringKind::Fuzzy)?;
    let mut result = AnnotatedAutomaton::with_alphabet(SemiringKind::Fuzzy, a.alphabet().clone());
    for state in 1..a.num_states() {
        let id = result.add_state();
        debug_assert_eq!(id, state);
    }
    result.rename_states(
        (0..a.num_states())
            .map(|s| a.state_name(s).to_string())
            .collect(),
    );
    result.set_initial(a.initial());
    for &f in a.finals() {
        result.add_final(f);
    }
    for (src, t) in a.transitions() {
        if finite_weight(&t.weight) <= k {
            result.add_transition(src, a.alphabet().label(t.sym), t.weight.clone(), t.dst)?;
        }
    }
    Ok(result)
}

/// An unweighted automaton whose transitions have distinct identities, with
/// possibly several identical-shape copies between the same source, label,
/// and target. Identity is the index into [`Self::transitions`].
#[derive(Debug, Clone)]
pub struct MultiTransitionAutomaton {
    alphabet: Alphabet,
    num_states: usize,
    initial: usize,
    finals: BTreeSet<usize>,
    transitions: Vec<(usize, SymbolId, usize)>,
}

impl MultiTransitionAutomaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn transitions(&self) -> &[(usize, SymbolId, usize)] {
        &self.transitions
    }
}

/// Expands a multiplicity automaton into identity-distinct transition copies:
/// a weight-n transition becomes n parallel copies, so that the weight of a
/// word equals the number of accepting identified transition paths spelling
/// it.
pub fn multiplicity_expand(
    a: &AnnotatedAutomaton,
    cap: StateCap,
) -> Result<MultiTransitionAutomaton> {
    require_kind(a, SemiringKind::Multiplicity)?;
    let mut transitions = Vec::new();
    for (src, t) in a.transitions() {
        let Weight::Multiplicity(n) = &t.weight else {
            unreachable!("multiplicity automaton")
        };
        let copies = n.to_usize().ok_or(Error::StateCapExceeded {
            cap: cap.get(),
            during: "multiplicity expansion",
        })?;
        cap.charge(transitions.len() + copies, "multiplicity expansion")?;
        for _ in 0..copies {
            transitions.push((src, t.sym, t.dst));
        }
    }
    Ok(MultiTransitionAutomaton {
        alphabet: a.alphabet().clone(),
        num_states: a.num_states(),
        initial: a.initial(),
        finals: a.finals().clone(),
        transitions,
    })
}

fn pair_bit(i: usize, j: usize, k: usize) -> u32 {
    debug_assert!(i < j && j < k);
    (i * (2 * k - i - 1) / 2 + (j - i - 1)) as u32
}

/// The support of the k-outer sphere of a multiplicity language: an automaton
/// accepting exactly the words spelled by at least k distinct accepting
/// transition paths of `b`.
///
/// States are k-tuples of `b`-states plus a Boolean divergence matrix ψ; a
/// transition picks one identified `b`-transition per coordinate and records
/// in ψ which coordinate pairs have diverged. Acceptance needs every
/// coordinate final and ψ all-ones, i.e. k pairwise distinct runs. ψ is
/// symmetric with a constant diagonal, so only the strict upper triangle is
/// stored, as bits of a word.
pub fn multiplicity_outer_sphere_support(
    b: &MultiTransitionAutomaton,
    k: u64,
    cap: StateCap,
) -> Result<ClassicalAutomaton> {
    if k == 0 {
        return Err(Error::Unsupported(
            "outer-sphere index k must be at least 1".to_string(),
        ));
    }
    let k = usize::try_from(k).map_err(|_| Error::StateCapExceeded {
        cap: cap.get(),
        during: "outer-sphere product",
    })?;
    let pair_bits = k * (k - 1) / 2;
    if pair_bits > u64::BITS as usize {
        return Err(Error::Unsupported(format!(
            "outer-sphere index k={k} needs {pair_bits} divergence bits; at most 64 are supported"
        )));
    }
    let full: u64 = if pair_bits == 0 {
        0
    } else if pair_bits == 64 {
        u64::MAX
    } else {
        (1u64 << pair_bits) - 1
    };

    // Identified transitions, grouped by (state, symbol).
    let mut choices: HashMap<(usize, SymbolId), Vec<usize>> = HashMap::new();
    for (tid, &(src, sym, _)) in b.transitions().iter().enumerate() {
        choices.entry((src, sym)).or_default().push(tid);
    }

    let mut result = ClassicalAutomaton::new(b.alphabet().clone());
    let mut index: HashMap<(Vec<usize>, u64), usize> = HashMap::new();
    let start = (vec![b.initial(); k], 0u64);
    let is_final =
        |coords: &[usize], psi: u64| psi == full && coords.iter().all(|q| b.finals().contains(q));
    if is_final(&start.0, start.1) {
        result.add_final(0);
    }
    index.insert(start.clone(), 0);
    let mut pending = VecDeque::from([start]);
    let mut work = 0usize;
    let budget = cap.get().saturating_mul(16);
    while let Some((coords, psi)) = pending.pop_front() {
        let src = index[&(coords.clone(), psi)];
        'symbols: for sym in 0..b.alphabet().len() as SymbolId {
            let mut per_coord: Vec<&[usize]> = Vec::with_capacity(k);
            for &q in &coords {
                match choices.get(&(q, sym)) {
                    Some(tids) => per_coord.push(tids),
                    None => continue 'symbols,
                }
            }
            // Odometer over one identified transition per coordinate.
            let mut pick = vec![0usize; k];
            loop {
                work += 1;
                if work > budget {
                    return Err(Error::StateCapExceeded {
                        cap: cap.get(),
                        during: "outer-sphere product",
                    });
                }
                let tuple: Vec<usize> = (0..k).map(|i| per_coord[i][pick[i]]).collect();
                let mut next_psi = psi;
                for i in 0..k {
                    for j in (i + 1)..k {
                        if tuple[i] != tuple[j] {
                            next_psi |= 1u64 << pair_bit(i, j, k);
                        }
                    }
                }
                let next_coords: Vec<usize> =
                    tuple.iter().map(|&tid| b.transitions()[tid].2).collect();
                let key = (next_coords, next_psi);
                let dst = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        cap.charge(index.len() + 1, "outer-sphere product")?;
                        let id = result.add_state();
                        if is_final(&key.0, key.1) {
                            result.add_final(id);
                        }
                        index.insert(key.clone(), id);
                        pending.push_back(key);
                        id
                    }
                };
                result.add_transition_sym(src, sym, dst);

                // Advance the odometer.
                let mut coordinate = 0;
                loop {
                    if coordinate == k {
                        break;
                    }
                    pick[coordinate] += 1;
                    if pick[coordinate] < per_coord[coordinate].len() {
                        break;
                    }
                    pick[coordinate] = 0;
                    coordinate += 1;
                }
                if coordinate == k {
                    break;
                }
            }
        }
    }
    Ok(result)
}

/// Whether a family's levels are inner spheres (weight ≤ level) or outer
/// spheres (weight ≥ level).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereKind {
    Inner,
    Outer,
}

/// Sphere supports of one annotated language, indexed by level, together
/// with the full support. Stripes and (for inner families) outer spheres are
/// derived by Boolean language algebra.
#[derive(Debug, Clone)]
pub struct SphereFamily {
    kind: SphereKind,
    support: ClassicalAutomaton,
    levels: BTreeMap<u64, ClassicalAutomaton>,
}

impl SphereFamily {
    pub fn new(kind: SphereKind, support: ClassicalAutomaton) -> Self {
        SphereFamily {
            kind,
            support,
            levels: BTreeMap::new(),
        }
    }

    /// Inner-sphere supports of a tropical language at levels 0..=max_level.
    pub fn tropical(a: &AnnotatedAutomaton, max_level: u64, cap: StateCap) -> Result<Self> {
        require_kind(a, SemiringKind::Tropical)?;
        let mut family = SphereFamily::new(SphereKind::Inner, a.support());
        for level in 0..=max_level {
            family.insert_level(level, tropical_inner_sphere(a, level, cap)?.support());
        }
        Ok(family)
    }

    /// Inner-sphere supports of a fuzzy language at the requested levels.
    pub fn fuzzy(a: &AnnotatedAutomaton, levels: impl IntoIterator<Item = u64>) -> Result<Self> {
        require_kind(a, SemiringKind::Fuzzy)?;
        let mut family = SphereFamily::new(SphereKind::Inner, a.support());
        for level in levels {
            family.insert_level(level, fuzzy_inner_sphere(a, level)?.support());
        }
        Ok(family)
    }

    /// Outer-sphere supports of a multiplicity language at levels
    /// 1..=max_level.
    pub fn multiplicity(a: &AnnotatedAutomaton, max_level: u64, cap: StateCap) -> Result<Self> {
        require_kind(a, SemiringKind::Multiplicity)?;
        let expanded = multiplicity_expand(a, cap)?;
        let mut family = SphereFamily::new(SphereKind::Outer, a.support());
        for level in 1..=max_level {
            family.insert_level(
                level,
                multiplicity_outer_sphere_support(&expanded, level, cap)?,
            );
        }
        Ok(family)
    }

    pub fn insert_level(&mut self, level: u64, sphere_support: ClassicalAutomaton) {
        self.levels.insert(level, sphere_support);
    }

    pub fn kind(&self) -> SphereKind {
        self.kind
    }

    pub fn support(&self) -> &ClassicalAutomaton {
        &self.support
    }

    pub fn level(&self, level: u64) -> Option<&ClassicalAutomaton> {
        self.levels.get(&level)
    }

    fn require_level(&self, level: u64) -> Result<&ClassicalAutomaton> {
        self.level(level).ok_or(Error::MissingSphereLevel(level))
    }

    /// The support of the x-stripe: for inner families ⌊L^x⌋ ∖ ⌊L^(x−1)⌋
    /// (at the best level, the sphere itself); for outer families
    /// ⌊L^x̆⌋ ∖ ⌊L^((x+1)˘)⌋.
    pub fn stripe(&self, x: u64, cap: StateCap) -> Result<ClassicalAutomaton> {
        match self.kind {
            SphereKind::Inner => {
                let current = self.require_level(x)?;
                if x == 0 {
                    Ok(current.clone())
                } else {
                    current.difference(self.require_level(x - 1)?, cap)
                }
            }
            SphereKind::Outer => {
                let current = self.require_level(x)?;
                let next = self.require_level(
                    x.checked_add(1)
                        .ok_or(Error::MissingSphereLevel(u64::MAX))?,
                )?;
                current.difference(next, cap)
            }
        }
    }

    /// The support of the x-outer sphere: direct for outer families; for
    /// inner families via ⌊L^x̆⌋ = (⌊L⌋ ∖ ⌊L^x⌋) ∪ ⌊L^ẋ⌋.
    pub fn outer(&self, x: u64, cap: StateCap) -> Result<ClassicalAutomaton> {
        match self.kind {
            SphereKind::Outer => Ok(self.require_level(x)?.clone()),
            SphereKind::Inner => {
                let above = self.support.difference(self.require_level(x)?, cap)?;
                let stripe = self.stripe(x, cap)?;
                Ok(above.union(&stripe))
            }
        }
    }
}
