//! Shared oracles and random generators for the integration suites.
//!
//! Everything here recomputes quantities by direct enumeration — naive
//! regex matching by splitting, transition-path and database-path DFS,
//! length-indexed dynamic programming — independently of the library's
//! algorithmic paths (lazy products, label-setting searches, sphere
//! products), so agreement is meaningful.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

use rpqprov::{
    AnnotatedAutomaton, ClassicalAutomaton, Database, RpqExpr, SemiringKind, Weight, Word,
};

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(labels: &[&str]) -> Word {
    Word::from_labels(labels.iter().copied())
}

/// All words over `labels` of length at most `max_len`.
pub fn all_words(labels: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for label in labels {
                let mut longer = w.clone();
                longer.push((*label).to_string());
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn as_refs(w: &[String]) -> Vec<&str> {
    w.iter().map(String::as_str).collect()
}

// ---------------------------------------------------------------------------
// Regular-expression oracle: matching by recursive splitting.

pub fn naive_matches(expr: &RpqExpr, w: &[&str]) -> bool {
    match expr {
        RpqExpr::Empty => false,
        RpqExpr::Epsilon => w.is_empty(),
        RpqExpr::Symbol(s) => w.len() == 1 && w[0] == s,
        RpqExpr::Concat(a, b) => {
            (0..=w.len()).any(|i| naive_matches(a, &w[..i]) && naive_matches(b, &w[i..]))
        }
        RpqExpr::Alt(a, b) => naive_matches(a, w) || naive_matches(b, w),
        RpqExpr::Star(a) => star_matches(a, w),
        RpqExpr::Plus(a) => {
            (0..=w.len()).any(|i| naive_matches(a, &w[..i]) && star_matches(a, &w[i..]))
        }
        RpqExpr::Optional(a) => w.is_empty() || naive_matches(a, w),
    }
}

fn star_matches(expr: &RpqExpr, w: &[&str]) -> bool {
    if w.is_empty() {
        return true;
    }
    (1..=w.len()).any(|i| naive_matches(expr, &w[..i]) && star_matches(expr, &w[i..]))
}

// ---------------------------------------------------------------------------
// Annotated-automaton oracle: explicit transition-path enumeration.

/// ⊕ over all accepting transition paths spelling `w`, each path weighted by
/// the ⊗-product of its transition weights; the semiring zero if none.
pub fn brute_word_weight(a: &AnnotatedAutomaton, w: &[&str]) -> Weight {
    let mut total: Option<Weight> = None;
    brute_paths(a, a.initial(), w, &a.kind().one(), &mut total);
    total.unwrap_or_else(|| a.kind().zero())
}

fn brute_paths(
    a: &AnnotatedAutomaton,
    state: usize,
    rest: &[&str],
    acc: &Weight,
    total: &mut Option<Weight>,
) {
    let Some((label, tail)) = rest.split_first() else {
        if a.is_final(state) {
            *total = Some(match total.take() {
                None => acc.clone(),
                Some(t) => t.plus(acc).unwrap(),
            });
        }
        return;
    };
    for t in a.transitions_from(state) {
        if a.alphabet().label(t.sym) == *label {
            let via = acc.times(&t.weight).unwrap();
            brute_paths(a, t.dst, tail, &via, total);
        }
    }
}

/// The number of accepting transition paths spelling `w` in a multiplicity
/// expansion, counted one by one.
pub fn brute_path_count(b: &rpqprov::MultiTransitionAutomaton, w: &[&str]) -> BigUint {
    fn rec(
        b: &rpqprov::MultiTransitionAutomaton,
        state: usize,
        rest: &[&str],
        count: &mut BigUint,
    ) {
        let Some((label, tail)) = rest.split_first() else {
            if b.finals().contains(&state) {
                *count += 1u32;
            }
            return;
        };
        for &(src, sym, dst) in b.transitions() {
            if src == state && b.alphabet().label(sym) == *label {
                rec(b, dst, tail, count);
            }
        }
    }
    let mut count = BigUint::zero();
    rec(b, b.initial(), w, &mut count);
    count
}

// ---------------------------------------------------------------------------
// Database-path oracle.

/// Every path from `start` of length at most `max_len` (the empty path
/// included), as (end object, label word, ⊗-weight).
pub fn db_paths_from(db: &Database, start: u32, max_len: usize) -> Vec<(u32, Vec<String>, Weight)> {
    let mut out = Vec::new();
    let mut labels = Vec::new();
    fn rec(
        db: &Database,
        at: u32,
        weight: &Weight,
        labels: &mut Vec<String>,
        max_len: usize,
        out: &mut Vec<(u32, Vec<String>, Weight)>,
    ) {
        out.push((at, labels.clone(), weight.clone()));
        if labels.len() == max_len {
            return;
        }
        for edge in db.edges_from(at) {
            labels.push(db.alphabet().label(edge.sym).to_string());
            let via = weight.times(&edge.weight).unwrap();
            rec(db, edge.dst, &via, labels, max_len, out);
            labels.pop();
        }
    }
    rec(db, start, &db.kind().one(), &mut labels, max_len, &mut out);
    out
}

/// The reason language of (source, target) by direct path enumeration:
/// group the paths source → target of length ≤ max_len whose label word the
/// query matches, ⊕ their weights per word, sort like the library does.
pub fn oracle_reasons(
    db: &Database,
    expr: &RpqExpr,
    source: &str,
    target: &str,
    max_len: usize,
) -> Vec<(Vec<String>, Weight)> {
    let source = db.object_id(source).unwrap();
    let target = db.object_id(target).unwrap();
    let mut by_word: BTreeMap<Vec<String>, Weight> = BTreeMap::new();
    for (end, labels, weight) in db_paths_from(db, source, max_len) {
        if end != target || !naive_matches(expr, &as_refs(&labels)) {
            continue;
        }
        match by_word.get_mut(&labels) {
            Some(acc) => *acc = acc.plus(&weight).unwrap(),
            None => {
                by_word.insert(labels, weight);
            }
        }
    }
    let mut entries: Vec<(Vec<String>, Weight)> = by_word.into_iter().collect();
    entries.sort_by(|a, b| a.1.cmp_order(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    entries
}

// ---------------------------------------------------------------------------
// Length-indexed answer oracles over a test-side product.

/// ⊕ over all database paths source → target of length ≤ max_len whose word
/// the query accepts, computed by dynamic programming over (object, query
/// state). Valid for the idempotent semirings, where counting a path once
/// per accepting run is harmless.
pub fn oracle_answer_idempotent(
    query: &ClassicalAutomaton,
    db: &Database,
    source: u32,
    target: u32,
    max_len: usize,
) -> Option<Weight> {
    assert_ne!(db.kind(), SemiringKind::Multiplicity);
    let mut current: HashMap<(u32, usize), Weight> = HashMap::new();
    current.insert((source, query.initial()), db.kind().one());
    let mut total: Option<Weight> = None;
    let absorb = |layer: &HashMap<(u32, usize), Weight>, total: &mut Option<Weight>| {
        for ((object, state), weight) in layer {
            if *object == target && query.is_final(*state) {
                *total = Some(match total.take() {
                    None => weight.clone(),
                    Some(t) => t.plus(weight).unwrap(),
                });
            }
        }
    };
    absorb(&current, &mut total);
    for _ in 0..max_len {
        let mut next: HashMap<(u32, usize), Weight> = HashMap::new();
        for ((object, state), weight) in &current {
            for edge in db.edges_from(*object) {
                let label = db.alphabet().label(edge.sym);
                for &(sym, dst) in query.transitions_from(*state) {
                    if query.alphabet().label(sym) != label {
                        continue;
                    }
                    let via = weight.times(&edge.weight).unwrap();
                    let slot = next.entry((edge.dst, dst));
                    match slot {
                        std::collections::hash_map::Entry::Occupied(mut o) => {
                            let merged = o.get().plus(&via).unwrap();
                            o.insert(merged);
                        }
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(via);
                        }
                    }
                }
            }
        }
        absorb(&next, &mut total);
        current = next;
    }
    total
}

/// Multiplicity answer oracle: a test-side subset construction of the query
/// keeps accepting runs and database paths in bijection, then a
/// length-indexed DP sums path weights. Sums are compared at the product
/// size and at twice the product size: growth means some accepting path
/// runs through a cycle (`None`); stability means the sum is exact.
pub fn oracle_answer_multiplicity(
    query: &ClassicalAutomaton,
    db: &Database,
    source: u32,
    target: u32,
) -> Option<Option<BigUint>> {
    assert_eq!(db.kind(), SemiringKind::Multiplicity);
    // Subset construction, written out here on purpose.
    let mut subsets: Vec<BTreeSet<usize>> = vec![BTreeSet::from([query.initial()])];
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    index.insert(subsets[0].clone(), 0);
    let mut dfa: Vec<HashMap<String, usize>> = vec![HashMap::new()];
    let mut at = 0;
    while at < subsets.len() {
        let current = subsets[at].clone();
        for label in query.alphabet().labels() {
            let mut next = BTreeSet::new();
            for &state in &current {
                for &(sym, dst) in query.transitions_from(state) {
                    if query.alphabet().label(sym) == label {
                        next.insert(dst);
                    }
                }
            }
            if next.is_empty() {
                continue;
            }
            let id = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next.clone());
                dfa.push(HashMap::new());
                subsets.len() - 1
            });
            dfa[at].insert(label.to_string(), id);
        }
        at += 1;
    }
    let accepting: Vec<bool> = subsets
        .iter()
        .map(|set| set.iter().any(|&s| query.is_final(s)))
        .collect();

    let product_states = subsets.len() * db.num_objects();
    let horizon = 2 * product_states + 1;
    let mut current: HashMap<(u32, usize), BigUint> = HashMap::new();
    current.insert((source, 0), BigUint::one());
    let mut total = BigUint::zero();
    let mut total_at_product_size = BigUint::zero();
    for step in 0..=horizon {
        for ((object, state), count) in &current {
            if *object == target && accepting[*state] {
                total += count;
            }
        }
        if step == product_states {
            total_at_product_size = total.clone();
        }
        let mut next: HashMap<(u32, usize), BigUint> = HashMap::new();
        for ((object, state), count) in &current {
            for edge in db.edges_from(*object) {
                let label = db.alphabet().label(edge.sym);
                let Some(&dst) = dfa[*state].get(label) else {
                    continue;
                };
                let Weight::Multiplicity(w) = &edge.weight else {
                    unreachable!()
                };
                *next.entry((edge.dst, dst)).or_insert_with(BigUint::zero) += count * w;
            }
        }
        current = next;
    }
    if total.is_zero() {
        return None; // no answer pair at all
    }
    if total == total_at_product_size {
        Some(Some(total))
    } else {
        Some(None) // keeps growing: productive cycle
    }
}

// ---------------------------------------------------------------------------
// Random generators (seeded by the caller).

pub fn random_regex(rng: &mut TestRng, depth: usize, labels: &[&str]) -> RpqExpr {
    if depth == 0 || rng.random_bool(0.3) {
        return if rng.random_bool(0.1) {
            RpqExpr::Epsilon
        } else {
            RpqExpr::symbol(labels[rng.random_range(0..labels.len())])
        };
    }
    match rng.random_range(0..5) {
        0 => RpqExpr::alt(
            random_regex(rng, depth - 1, labels),
            random_regex(rng, depth - 1, labels),
        ),
        1 | 2 => RpqExpr::concat(
            random_regex(rng, depth - 1, labels),
            random_regex(rng, depth - 1, labels),
        ),
        3 => RpqExpr::star(random_regex(rng, depth - 1, labels)),
        4 if rng.random_bool(0.5) => RpqExpr::plus(random_regex(rng, depth - 1, labels)),
        _ => RpqExpr::optional(random_regex(rng, depth - 1, labels)),
    }
}

/// A non-zero weight: the generators never produce the semiring zero, which
/// is banned on transitions and edges.
pub fn random_weight(rng: &mut TestRng, kind: SemiringKind, max: u64) -> Weight {
    match kind {
        SemiringKind::Boolean => Weight::boolean(true),
        SemiringKind::Tropical => Weight::tropical(rng.random_range(0..=max)),
        SemiringKind::Fuzzy => Weight::fuzzy(rng.random_range(0..=max)),
        SemiringKind::Multiplicity => Weight::multiplicity(rng.random_range(1..=max.max(1))),
    }
}

/// Any carrier element at all, the zero included; for algebraic law checks.
pub fn random_element(rng: &mut TestRng, kind: SemiringKind, max: u64) -> Weight {
    if rng.random_bool(0.15) {
        return kind.zero();
    }
    match kind {
        SemiringKind::Boolean => Weight::boolean(rng.random_bool(0.5)),
        _ => random_weight(rng, kind, max),
    }
}

pub fn random_annotated(
    rng: &mut TestRng,
    kind: SemiringKind,
    max_states: usize,
    labels: &[&str],
    max_weight: u64,
    max_transitions: usize,
) -> AnnotatedAutomaton {
    let mut a = AnnotatedAutomaton::new(kind);
    let states = rng.random_range(1..=max_states);
    for _ in 1..states {
        a.add_state();
    }
    for state in 0..states {
        if rng.random_bool(0.4) {
            a.add_final(state);
        }
    }
    let transitions = rng.random_range(0..=max_transitions);
    for _ in 0..transitions {
        let src = rng.random_range(0..states);
        let dst = rng.random_range(0..states);
        let label = labels[rng.random_range(0..labels.len())];
        let weight = random_weight(rng, kind, max_weight);
        a.add_transition(src, label, weight, dst).unwrap();
    }
    a
}

pub fn random_database(
    rng: &mut TestRng,
    kind: SemiringKind,
    max_objects: usize,
    max_edges: usize,
    labels: &[&str],
    max_weight: u64,
) -> Database {
    let mut db = Database::new(kind);
    let objects = rng.random_range(1..=max_objects);
    let names: Vec<String> = (0..objects).map(|i| format!("o{i}")).collect();
    for name in &names {
        db.add_object(name).unwrap();
    }
    let edges = rng.random_range(0..=max_edges);
    for _ in 0..edges {
        let src = &names[rng.random_range(0..objects)];
        let dst = &names[rng.random_range(0..objects)];
        let label = labels[rng.random_range(0..labels.len())];
        let weight = random_weight(rng, kind, max_weight);
        db.add_edge(src, label, weight, dst).unwrap();
    }
    db
}

/// A finite-language automaton: one chain per entry, the whole weight on the
/// first transition. ε entries carry the semiring one by construction.
pub fn dictionary(kind: SemiringKind, entries: &[(Vec<String>, Weight)]) -> AnnotatedAutomaton {
    let mut a = AnnotatedAutomaton::new(kind);
    for (labels, weight) in entries {
        if labels.is_empty() {
            assert!(weight.is_one());
            a.add_final(0);
            continue;
        }
        let mut src = 0;
        for (i, label) in labels.iter().enumerate() {
            let dst = a.add_state();
            let w = if i == 0 { weight.clone() } else { kind.one() };
            a.add_transition(src, label, w, dst).unwrap();
            src = dst;
        }
        a.add_final(src);
    }
    a
}

/// Wraps a classical automaton as a Boolean annotated automaton (every
/// transition weighted true).
pub fn boolean_annotated(support: &ClassicalAutomaton) -> AnnotatedAutomaton {
    let mut a = AnnotatedAutomaton::new(SemiringKind::Boolean);
    for _ in 1..support.num_states() {
        a.add_state();
    }
    a.set_initial(support.initial());
    for &f in support.finals() {
        a.add_final(f);
    }
    for (src, sym, dst) in support.transitions() {
        a.add_transition(
            src,
            support.alphabet().label(sym),
            Weight::boolean(true),
            dst,
        )
        .unwrap();
    }
    a
}

pub fn random_dictionary(
    rng: &mut TestRng,
    kind: SemiringKind,
    labels: &[&str],
    max_words: usize,
    max_word_len: usize,
    max_weight: u64,
) -> AnnotatedAutomaton {
    let mut entries: Vec<(Vec<String>, Weight)> = Vec::new();
    let mut used: BTreeSet<Vec<String>> = BTreeSet::new();
    for _ in 0..rng.random_range(0..=max_words) {
        let len = rng.random_range(0..=max_word_len);
        let labels: Vec<String> = (0..len)
            .map(|_| labels[rng.random_range(0..labels.len())].to_string())
            .collect();
        if !used.insert(labels.clone()) {
            continue;
        }
        let weight = if labels.is_empty() {
            kind.one()
        } else {
            random_weight(rng, kind, max_weight)
        };
        entries.push((labels, weight));
    }
    dictionary(kind, &entries)
}
