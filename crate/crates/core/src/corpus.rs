//! The fixed small-graph corpus and default model matrix driving the
//! verification sweeps: every labeled connected graph on up to five
//! vertices, plus paths, cycles, stars and K4 up to eight edges.

use crate::bits::{Subset, SubsetKind};
use crate::graph::{components_count, Graph};
use crate::model::WeightModel;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
}

/// All labeled connected graphs on exactly `n` vertices, enumerated as edge
/// subsets of the complete graph in lexicographic pair order.
pub fn labeled_connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= 6, "enumeration intended for tiny n");
    let mut pairs = Vec::new();
    for v in 1..n {
        for u in 0..v {
            pairs.push((u, v));
        }
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::new(n, edges).expect("subset of a simple graph");
        let full = Subset::from_mask(SubsetKind::Edge, g.m(), if g.m() == 0 {
            0
        } else {
            (1u64 << g.m()) - 1
        });
        if components_count(&g, &full) == 1 {
            out.push(g);
        }
    }
    out
}

/// The default corpus: labeled connected graphs for n = 1..=5 and the named
/// families with at most eight edges.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut entries = Vec::new();
    for n in 1..=5 {
        for g in labeled_connected_graphs(n) {
            let mask: u64 = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (u, v) = (u.min(v), u.max(v));
                    1u64 << (v * (v - 1) / 2 + u)
                })
                .sum();
            entries.push(CorpusEntry {
                name: format!("g{n}_{mask:x}"),
                graph: g,
            });
        }
    }
    for n in 3..=9 {
        entries.push(CorpusEntry {
            name: format!("P{n}"),
            graph: Graph::path(n),
        });
    }
    for n in 3..=8 {
        entries.push(CorpusEntry {
            name: format!("C{n}"),
            graph: Graph::cycle(n),
        });
    }
    for leaves in 2..=8 {
        entries.push(CorpusEntry {
            name: format!("S{leaves}"),
            graph: Graph::star(leaves),
        });
    }
    entries.push(CorpusEntry {
        name: "K4".to_string(),
        graph: Graph::complete(4),
    });
    entries
}

fn cycle_vec(pattern: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|i| pattern[i % pattern.len()]).collect()
}

/// Two parameter points per edge family, with per-graph vector parameters
/// derived from fixed patterns.
pub fn edge_model_matrix(g: &Graph) -> Vec<WeightModel> {
    vec![
        WeightModel::Rc { q: 2.0, mu: 1.0 },
        WeightModel::Rc { q: 0.5, mu: 3.0 },
        WeightModel::Tutte { x: 3.0, y: 2.0 },
        WeightModel::Tutte { x: 1.5, y: 4.0 },
        WeightModel::R2 { q: 2.0, mu: 1.0 },
        WeightModel::R2 { q: 1.4, mu: 0.7 },
        WeightModel::MultiTutte {
            q: 2.0,
            v: cycle_vec(&[0.5, 2.0, 1.5, 1.0, 3.0], g.m()),
        },
        WeightModel::MultiTutte {
            q: 0.8,
            v: cycle_vec(&[1.0, 0.6, 1.8, 2.5, 0.9], g.m()),
        },
        WeightModel::UPoly {
            y: 2.0,
            x: cycle_vec(&[1.5, 0.75, 1.25, 1.0], g.n()),
        },
        WeightModel::UPoly {
            y: 3.0,
            x: cycle_vec(&[0.8, 1.2, 1.0, 2.0], g.n()),
        },
    ]
}

/// Two parameter points for the vertex family.
pub fn vertex_model_matrix() -> Vec<WeightModel> {
    vec![
        WeightModel::Interlace { x: 2.0, y: 3.0 },
        WeightModel::Interlace { x: 3.0, y: 1.5 },
    ]
}

/// One corpus instance of a verification manifest: a graph file plus the
/// models to run on it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub graph: String,
    pub models: Vec<WeightModel>,
}
