//! Weighted graph databases, query answers, and reason languages.
//!
//! A database is an edge-labeled directed graph with weights from one
//! semiring. Query answering works on the product of the query automaton
//! with the whole database (one search per source object); per-pair reason
//! languages are materialized lazily as annotated automata, so only product
//! states reachable from the source pair exist.
//!
//! For the multiplicity semiring the query automaton is determinized first:
//! ⊕ is not idempotent there, and a word with several accepting runs in a
//! nondeterministic query automaton would otherwise be counted once per run
//! instead of once per database path.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::{is_identifier, Alphabet, SymbolId, Word};
use crate::annotated::{AnnotatedAutomaton, AnnotatedEntry};
use crate::automata::ClassicalAutomaton;
use crate::error::{Error, Result};
use crate::limits::StateCap;
use crate::semiring::{ExtNat, SemiringKind, Weight};

/// Dense object handle within one [`Database`].
pub type ObjectId = u32;

/// One directed edge: source, label, weight, target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: ObjectId,
    pub sym: SymbolId,
    pub weight: Weight,
    pub dst: ObjectId,
}

/// An edge-labeled, semiring-weighted directed graph.
#[derive(Debug, Clone)]
pub struct Database {
    kind: SemiringKind,
    objects: Vec<String>,
    index: HashMap<String, ObjectId>,
    alphabet: Alphabet,
    edges: Vec<Edge>,
    /// Outgoing edge indices per object.
    out: Vec<Vec<usize>>,
}

impl Database {
    pub fn new(kind: SemiringKind) -> Self {
        Database {
            kind,
            objects: Vec::new(),
            index: HashMap::new(),
            alphabet: Alphabet::new(),
            edges: Vec::new(),
            out: Vec::new(),
        }
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = &str> {
        self.objects.iter().map(String::as_str)
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.index.get(name).copied()
    }

    pub fn object_name(&self, id: ObjectId) -> &str {
        &self.objects[id as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_from(&self, object: ObjectId) -> impl Iterator<Item = &Edge> {
        self.out[object as usize].iter().map(|&i| &self.edges[i])
    }

    /// Registers an object; returns its id (existing objects are reused).
    pub fn add_object(&mut self, name: &str) -> Result<ObjectId> {
        if !is_identifier(name) {
            return Err(Error::Format {
                line: 0,
                message: format!("`{name}` is not a valid object name"),
            });
        }
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        let id = self.objects.len() as ObjectId;
        self.objects.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.out.push(Vec::new());
        Ok(id)
    }

    /// Declares a label without adding an edge carrying it.
    pub fn declare_label(&mut self, label: &str) {
        self.alphabet.intern(label);
    }

    /// Adds one edge. The weight must belong to the database's semiring and
    /// must not be its zero. Exact duplicates are ignored (the edge set is a
    /// set).
    pub fn add_edge(&mut self, src: &str, label: &str, weight: Weight, dst: &str) -> Result<()> {
        if weight.kind() != self.kind {
            return Err(Error::SemiringMismatch {
                expected: self.kind,
                found: weight.kind(),
            });
        }
        if weight.is_zero() {
            return Err(Error::ZeroWeight("edge"));
        }
        if !is_identifier(label) {
            return Err(Error::Format {
                line: 0,
                message: format!("`{label}` is not a valid label"),
            });
        }
        let src = self.add_object(src)?;
        let dst = self.add_object(dst)?;
        let sym = self.alphabet.intern(label);
        let edge = Edge {
            src,
            sym,
            weight,
            dst,
        };
        if self.out[src as usize]
            .iter()
            .any(|&i| self.edges[i] == edge)
        {
            return Ok(());
        }
        self.out[src as usize].push(self.edges.len());
        self.edges.push(edge);
        Ok(())
    }

    /// Parses the graph file format: one `<src> <label> <weight> <dst>` per
    /// line; Boolean databases may omit the weight column (it defaults to
    /// `t`); `#` starts a comment; blank lines are ignored.
    pub fn parse_text(text: &str, kind: SemiringKind) -> Result<Self> {
        let mut db = Database::new(kind);
        for (number, raw) in text.lines().enumerate() {
            let line = number + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let (src, label, weight_text, dst) = match fields.len() {
                4 => (fields[0], fields[1], Some(fields[2]), fields[3]),
                3 if kind == SemiringKind::Boolean => (fields[0], fields[1], None, fields[2]),
                _ => {
                    return Err(Error::Format {
                        line,
                        message: format!(
                            "expected `<src> <label> <weight> <dst>`, got {} fields",
                            fields.len()
                        ),
                    });
                }
            };
            let weight = match weight_text {
                Some(text) => Weight::parse(kind, text).map_err(|e| match e {
                    Error::Format { message, .. } => Error::Format { line, message },
                    other => other,
                })?,
                None => Weight::boolean(true),
            };
            db.add_edge(src, label, weight, dst).map_err(|e| match e {
                Error::ZeroWeight(_) => Error::Format {
                    line,
                    message: "zero-weight edge (the semiring zero is not allowed)".to_string(),
                },
                Error::Format { message, .. } => Error::Format { line, message },
                other => other,
            })?;
        }
        Ok(db)
    }
}

/// Parses a database from the graph file format.
pub fn load_database(text: &str, kind: SemiringKind) -> Result<Database> {
    Database::parse_text(text, kind)
}

/// A path in a database: an anchor object plus a (possibly empty) run of
/// adjacent edges. The empty path has label ε and weight 1.
#[derive(Debug, Clone)]
pub struct DbPath {
    start: ObjectId,
    edges: Vec<Edge>,
}

impl DbPath {
    pub fn empty_at(object: ObjectId) -> Self {
        DbPath {
            start: object,
            edges: Vec::new(),
        }
    }

    /// Builds a nonempty path, checking that consecutive edges meet.
    pub fn from_edges(edges: Vec<Edge>) -> Result<Self> {
        let Some(first) = edges.first() else {
            return Err(Error::Unsupported(
                "a path needs at least one edge; use `empty_at` for the empty path".to_string(),
            ));
        };
        let start = first.src;
        for pair in edges.windows(2) {
            if pair[0].dst != pair[1].src {
                return Err(Error::Unsupported(
                    "path edges must share endpoints".to_string(),
                ));
            }
        }
        Ok(DbPath { start, edges })
    }

    pub fn start(&self) -> ObjectId {
        self.start
    }

    pub fn end(&self) -> ObjectId {
        self.edges.last().map_or(self.start, |e| e.dst)
    }

    pub fn label(&self, db: &Database) -> Word {
        Word::from_labels(self.edges.iter().map(|e| db.alphabet().label(e.sym)))
    }

    /// The ⊗-product of the edge weights; the semiring one for the empty path.
    pub fn weight(&self, db: &Database) -> Result<Weight> {
        let mut total = db.kind().one();
        for edge in &self.edges {
            total = total.times(&edge.weight)?;
        }
        Ok(total)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// One row of a query answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerEntry {
    pub source: String,
    pub target: String,
    pub weight: AnswerWeight,
}

/// The aggregate weight of an answer pair. `Unbounded` arises only in the
/// multiplicity semiring, when some accepting path runs through a cycle and
/// the sum over paths has no value in ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnswerWeight {
    Finite(Weight),
    Unbounded,
}

impl fmt::Display for AnswerWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnswerWeight::Finite(w) => write!(f, "{w}"),
            AnswerWeight::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Uses the query automaton as-is, except that multiplicity databases get a
/// determinized copy so that accepting runs and database paths correspond
/// one to one.
fn query_for<'a>(
    query: &'a ClassicalAutomaton,
    kind: SemiringKind,
    cap: StateCap,
) -> Result<std::borrow::Cow<'a, ClassicalAutomaton>> {
    if kind == SemiringKind::Multiplicity {
        Ok(std::borrow::Cow::Owned(query.determinize(cap)?))
    } else {
        Ok(std::borrow::Cow::Borrowed(query))
    }
}

/// The reason language of `(source, target)` as an annotated automaton: the
/// lazy product of the query automaton with the database, started at
/// `(initial, source)`, accepting at `(final, target)`.
pub fn reasons_automaton(
    query: &ClassicalAutomaton,
    db: &Database,
    source: &str,
    target: &str,
    cap: StateCap,
) -> Result<AnnotatedAutomaton> {
    let source = db
        .object_id(source)
        .ok_or_else(|| Error::UnknownObject(source.to_string()))?;
    let target = db
        .object_id(target)
        .ok_or_else(|| Error::UnknownObject(target.to_string()))?;
    let query = query_for(query, db.kind(), cap)?;

    // Query symbol -> database symbol, where the label exists there at all.
    let translate: Vec<Option<SymbolId>> = query
        .alphabet()
        .labels()
        .map(|l| db.alphabet().id(l))
        .collect();

    let alphabet = query.alphabet().union(db.alphabet());
    let mut result = AnnotatedAutomaton::with_alphabet(db.kind(), alphabet);
    let mut index: HashMap<(usize, ObjectId), usize> = HashMap::new();

    let start = (query.initial(), source);
    index.insert(start, 0);
    let name = |q: usize, v: ObjectId| format!("q{q}_{}", db.object_name(v));
    let mut pending = VecDeque::from([start]);
    let mut names = vec![name(start.0, start.1)];
    if query.is_final(start.0) && start.1 == target {
        result.add_final(0);
    }
    while let Some((qstate, object)) = pending.pop_front() {
        let src = index[&(qstate, object)];
        for &(qsym, qdst) in query.transitions_from(qstate) {
            let Some(dsym) = translate[qsym as usize] else {
                continue;
            };
            for edge in db.edges_from(object) {
                if edge.sym != dsym {
                    continue;
                }
                let pair = (qdst, edge.dst);
                let dst = match index.get(&pair) {
                    Some(&id) => id,
                    None => {
                        cap.charge(index.len() + 1, "reasons product")?;
                        let id = result.add_state();
                        names.push(name(pair.0, pair.1));
                        if query.is_final(pair.0) && pair.1 == target {
                            result.add_final(id);
                        }
                        index.insert(pair, id);
                        pending.push_back(pair);
                        id
                    }
                };
                result.add_transition(
                    src,
                    db.alphabet().label(edge.sym),
                    edge.weight.clone(),
                    dst,
                )?;
            }
        }
    }
    result.rename_states(names);
    Ok(result)
}

/// Enumerated reasons of one pair, up to `max_len` symbols.
pub fn reasons_enumerate(
    query: &ClassicalAutomaton,
    db: &Database,
    source: &str,
    target: &str,
    max_len: usize,
    cap: StateCap,
) -> Result<Vec<AnnotatedEntry>> {
    reasons_automaton(query, db, source, target, cap)?.enumerate_annotated(max_len)
}

struct Product {
    objects: usize,
    /// Dense product index `q * objects + v` -> outgoing `(target, weight)`.
    adjacency: Vec<Vec<(usize, Weight)>>,
    /// Final query states.
    query_finals: Vec<usize>,
    initial_query: usize,
}

impl Product {
    fn build(query: &ClassicalAutomaton, db: &Database, cap: StateCap) -> Result<Product> {
        let query_states = query.num_states();
        let objects = db.num_objects();
        cap.charge(query_states.saturating_mul(objects), "answers product")?;
        // Group query transitions by database symbol.
        let mut by_dsym: Vec<Vec<(usize, usize)>> = vec![Vec::new(); db.alphabet().len()];
        for (qsrc, qsym, qdst) in query.transitions() {
            if let Some(dsym) = db.alphabet().id(query.alphabet().label(qsym)) {
                by_dsym[dsym as usize].push((qsrc, qdst));
            }
        }
        let mut adjacency = vec![Vec::new(); query_states * objects];
        for edge in db.edges() {
            for &(qsrc, qdst) in &by_dsym[edge.sym as usize] {
                adjacency[qsrc * objects + edge.src as usize]
                    .push((qdst * objects + edge.dst as usize, edge.weight.clone()));
            }
        }
        Ok(Product {
            objects,
            adjacency,
            query_finals: query.finals().iter().copied().collect(),
            initial_query: query.initial(),
        })
    }

    fn start(&self, source: usize) -> usize {
        self.initial_query * self.objects + source
    }

    fn finals_for(&self, target: usize) -> impl Iterator<Item = usize> + '_ {
        self.query_finals
            .iter()
            .map(move |&qf| qf * self.objects + target)
    }
}

fn finite(weight: &Weight) -> u64 {
    match weight {
        Weight::Tropical(ExtNat::Finite(n)) | Weight::Fuzzy(ExtNat::Finite(n)) => *n,
        _ => unreachable!("edge weights are finite by construction"),
    }
}

/// All answers of the query on the database, sorted by (source, target).
///
/// Per semiring: Boolean answers come from product reachability; tropical
/// from least-weight label-setting search; fuzzy from minimax label-setting;
/// multiplicity from a topological-order sum, with pairs whose relevant
/// product subgraph contains a cycle reported as unbounded.
pub fn answers(
    query: &ClassicalAutomaton,
    db: &Database,
    cap: StateCap,
) -> Result<Vec<AnswerEntry>> {
    let kind = db.kind();
    let query = query_for(query, kind, cap)?;
    let product = Product::build(&query, db, cap)?;
    let objects = db.num_objects();

    let mut entries = Vec::new();
    match kind {
        SemiringKind::Boolean => {
            for source in 0..objects {
                let reach = reachable_from(&product.adjacency, product.start(source));
                for target in 0..objects {
                    if product.finals_for(target).any(|f| reach[f]) {
                        entries.push((source, target, AnswerWeight::Finite(Weight::boolean(true))));
                    }
                }
            }
        }
        SemiringKind::Tropical | SemiringKind::Fuzzy => {
            for source in 0..objects {
                let dist = label_setting(&product.adjacency, product.start(source), kind)?;
                for target in 0..objects {
                    let best = product.finals_for(target).filter_map(|f| dist[f]).min();
                    if let Some(best) = best {
                        let weight = match kind {
                            SemiringKind::Tropical => Weight::tropical(best),
                            _ => Weight::fuzzy(best),
                        };
                        entries.push((source, target, AnswerWeight::Finite(weight)));
                    }
                }
            }
        }
        SemiringKind::Multiplicity => {
            let cyclic = cyclic_states(&product.adjacency);
            let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); product.adjacency.len()];
            for (src, row) in product.adjacency.iter().enumerate() {
                for (dst, _) in row {
                    reverse[*dst].push(src);
                }
            }
            let coreach_of: Vec<Vec<bool>> = (0..objects)
                .map(|target| reachable_from_many(&reverse, product.finals_for(target)))
                .collect();
            for source in 0..objects {
                let reach = reachable_from(&product.adjacency, product.start(source));
                for (target, coreach) in coreach_of.iter().enumerate() {
                    if !product.finals_for(target).any(|f| reach[f]) {
                        continue;
                    }
                    let in_sub = |s: usize| reach[s] && coreach[s];
                    if (0..product.adjacency.len()).any(|s| in_sub(s) && cyclic[s]) {
                        entries.push((source, target, AnswerWeight::Unbounded));
                        continue;
                    }
                    let total = acyclic_sum(&product, source, target, &reach, coreach);
                    entries.push((
                        source,
                        target,
                        AnswerWeight::Finite(Weight::Multiplicity(total)),
                    ));
                }
            }
        }
    }

    let mut rows: Vec<AnswerEntry> = entries
        .into_iter()
        .map(|(source, target, weight)| AnswerEntry {
            source: db.object_name(source as ObjectId).to_string(),
            target: db.object_name(target as ObjectId).to_string(),
            weight,
        })
        .collect();
    rows.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    Ok(rows)
}

fn reachable_from(adjacency: &[Vec<(usize, Weight)>], start: usize) -> Vec<bool> {
    reachable_from_many(
        &adjacency
            .iter()
            .map(|row| row.iter().map(|&(d, _)| d).collect())
            .collect::<Vec<Vec<usize>>>(),
        std::iter::once(start),
    )
}

fn reachable_from_many(adjacency: &[Vec<usize>], starts: impl Iterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut queue: VecDeque<usize> = starts
        .filter(|&s| {
            let fresh = !seen[s];
            seen[s] = true;
            fresh
        })
        .collect();
    while let Some(state) = queue.pop_front() {
        for &next in &adjacency[state] {
            if !seen[next] {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Priority-queue label-setting for tropical (⊗ = +) and fuzzy (⊗ = max)
/// weights; both accumulations are monotone, so settled states are optimal.
fn label_setting(
    adjacency: &[Vec<(usize, Weight)>],
    start: usize,
    kind: SemiringKind,
) -> Result<Vec<Option<u64>>> {
    let mut dist: Vec<Option<u64>> = vec![None; adjacency.len()];
    let mut heap = BinaryHeap::new();
    dist[start] = Some(0);
    heap.push(Reverse((0u64, start)));
    while let Some(Reverse((d, state))) = heap.pop() {
        if dist[state] != Some(d) {
            continue;
        }
        for (next, weight) in &adjacency[state] {
            let w = finite(weight);
            let candidate = match kind {
                SemiringKind::Tropical => d
                    .checked_add(w)
                    .ok_or(Error::Overflow("tropical multiplication"))?,
                _ => d.max(w),
            };
            if dist[*next].is_none_or(|old| candidate < old) {
                dist[*next] = Some(candidate);
                heap.push(Reverse((candidate, *next)));
            }
        }
    }
    Ok(dist)
}

/// Marks states lying on a cycle (nontrivial strongly connected component or
/// a self-loop).
fn cyclic_states(adjacency: &[Vec<(usize, Weight)>]) -> Vec<bool> {
    let n = adjacency.len();
    // Iterative Kosaraju: forward postorder, then reverse-graph sweeps.
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        visited[root] = true;
        while let Some(&mut (state, ref mut next)) = stack.last_mut() {
            if *next < adjacency[state].len() {
                let target = adjacency[state][*next].0;
                *next += 1;
                if !visited[target] {
                    visited[target] = true;
                    stack.push((target, 0));
                }
            } else {
                order.push(state);
                stack.pop();
            }
        }
    }
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (src, row) in adjacency.iter().enumerate() {
        for &(dst, _) in row {
            reverse[dst].push(src);
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        sizes.push(0usize);
        let mut stack = vec![root];
        component[root] = id;
        while let Some(state) = stack.pop() {
            sizes[id] += 1;
            for &prev in &reverse[state] {
                if component[prev] == usize::MAX {
                    component[prev] = id;
                    stack.push(prev);
                }
            }
        }
    }
    (0..n)
        .map(|s| sizes[component[s]] > 1 || adjacency[s].iter().any(|&(d, _)| d == s))
        .collect()
}

/// Sum over all paths in the (acyclic) relevant subgraph, by dynamic
/// programming in topological order.
fn acyclic_sum(
    product: &Product,
    source: usize,
    target: usize,
    reach: &[bool],
    coreach: &[bool],
) -> BigUint {
    let n = product.adjacency.len();
    let in_sub = |s: usize| reach[s] && coreach[s];
    let mut indegree = vec![0usize; n];
    for (src, row) in product.adjacency.iter().enumerate() {
        if !in_sub(src) {
            continue;
        }
        for &(dst, _) in row {
            if in_sub(dst) {
                indegree[dst] += 1;
            }
        }
    }
    let mut paths: Vec<BigUint> = vec![BigUint::zero(); n];
    paths[product.start(source)] = BigUint::one();
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| in_sub(s) && indegree[s] == 0).collect();
    while let Some(state) = queue.pop_front() {
        for (dst, weight) in &product.adjacency[state] {
            if !in_sub(*dst) {
                continue;
            }
            let Weight::Multiplicity(w) = weight else {
                unreachable!("multiplicity database")
            };
            let add = &paths[state] * w;
            paths[*dst] += add;
            indegree[*dst] -= 1;
            if indegree[*dst] == 0 {
                queue.push_back(*dst);
            }
        }
    }
    let mut total = BigUint::zero();
    for f in product.finals_for(target) {
        if in_sub(f) {
            total += &paths[f];
        }
    }
    total
}
