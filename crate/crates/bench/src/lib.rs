//! Deterministic synthetic inputs for the benchmarks.

use rpqprov::{compile, parse_rpq, ClassicalAutomaton, Database, SemiringKind, Weight};

fn weight(kind: SemiringKind, seed: u64) -> Weight {
    match kind {
        SemiringKind::Boolean => Weight::boolean(true),
        SemiringKind::Tropical => Weight::tropical(seed % 7),
        SemiringKind::Fuzzy => Weight::fuzzy(seed % 7),
        SemiringKind::Multiplicity => Weight::multiplicity(1 + seed % 3),
    }
}

/// A layered graph: `layers` columns of `width` objects, every object wired
/// to two successors in the next column, labels alternating between `r` and
/// `s` per column.
pub fn layered_database(layers: usize, width: usize, kind: SemiringKind) -> Database {
    let mut db = Database::new(kind);
    let name = |layer: usize, row: usize| format!("n{layer}_{row}");
    for layer in 0..layers.saturating_sub(1) {
        let label = if layer % 2 == 0 { "r" } else { "s" };
        for row in 0..width {
            for offset in 0..2 {
                let dst = (row + offset) % width;
                let seed = (layer * width + row + offset) as u64;
                db.add_edge(
                    &name(layer, row),
                    label,
                    weight(kind, seed),
                    &name(layer + 1, dst),
                )
                .unwrap();
            }
        }
    }
    db
}

/// A single directed ring with one label, for cyclic workloads.
pub fn ring_database(size: usize, kind: SemiringKind) -> Database {
    let mut db = Database::new(kind);
    for i in 0..size {
        db.add_edge(
            &format!("n{i}"),
            "r",
            weight(kind, i as u64),
            &format!("n{}", (i + 1) % size),
        )
        .unwrap();
    }
    db
}

pub fn query(text: &str) -> ClassicalAutomaton {
    compile(&parse_rpq(text).unwrap())
}
