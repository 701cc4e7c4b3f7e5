//! Immutable simple graphs and the combinatorial kernels the weight models
//! are built from: connected-component counts, component size profiles, and
//! induced subgraphs.

use crate::bits::{Bits, Subset, SubsetKind};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({0}, {1}) joins v1 to v2 across the cut")]
    CutViolation(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing \"n m\" header line")]
    MissingHeader,
    #[error("malformed header {0:?}, expected \"n m\"")]
    BadHeader(String),
    #[error("line {line}: malformed edge {text:?}, expected \"u v\"")]
    BadEdgeLine { line: usize, text: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
}

/// A simple graph with indexed vertices `0..n` and indexed edges `0..m`.
/// Edge indices are fixed by construction order and never change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Build from an explicit edge list. Rejects self-loops, parallel edges
    /// and endpoints outside `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Parse the edge-list text format: a header line `n m` followed by
    /// `m` lines `u v`. Edge indices follow file order.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::BadHeader(header.to_string()))?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::BadHeader(header.to_string()))?;
        if parts.next().is_some() {
            return Err(ParseError::BadHeader(header.to_string()));
        }

        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::new();
        for (line, text) in lines {
            let mut parts = text.split_whitespace();
            let parse_endpoint = |t: Option<&str>| {
                t.and_then(|t| t.parse::<usize>().ok())
                    .ok_or(ParseError::BadEdgeLine {
                        line,
                        text: text.to_string(),
                    })
            };
            let u = parse_endpoint(parts.next())?;
            let v = parse_endpoint(parts.next())?;
            if parts.next().is_some() {
                return Err(ParseError::BadEdgeLine {
                    line,
                    text: text.to_string(),
                });
            }
            if u == v {
                return Err(ParseError::SelfLoop { line, vertex: u });
            }
            for w in [u, v] {
                if w >= n {
                    return Err(ParseError::VertexOutOfRange {
                        line,
                        vertex: w,
                        n,
                    });
                }
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ParseError::DuplicateEdge { line, u, v });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(ParseError::WrongEdgeCount {
                expected: m,
                found: edges.len(),
            });
        }
        Ok(Graph::new(n, edges).expect("validated during parse"))
    }

    /// Render in the same edge-list format `parse` accepts.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Path on `n` vertices, edges `(0,1), (1,2), ...` in path order.
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices, edges in cyclic order.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, edges).expect("cycle is simple")
    }

    /// Complete graph, edges in lexicographic order.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// Star with `leaves` leaves; vertex 0 is the center.
    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect()).expect("star is simple")
    }
}

/// A partition (v1, k, v2) of the vertices where no edge joins v1 to v2;
/// k is the cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub v1: Bits,
    pub k: Bits,
    pub v2: Bits,
}

impl Separation {
    /// Validates the partition against `g`: the three parts must be disjoint,
    /// cover all vertices, and no edge of `g` may join `v1` to `v2`.
    pub fn new(g: &Graph, v1: Bits, k: Bits, v2: Bits) -> Result<Self, GraphError> {
        assert!(
            v1.len() == g.n() && k.len() == g.n() && v2.len() == g.n(),
            "separation parts must range over the vertex set"
        );
        for v in 0..g.n() {
            let hits = [&v1, &k, &v2].iter().filter(|b| b.get(v)).count();
            assert_eq!(hits, 1, "vertex {v} must lie in exactly one part");
        }
        for &(u, v) in g.edges() {
            if (v1.get(u) && v2.get(v)) || (v1.get(v) && v2.get(u)) {
                return Err(GraphError::CutViolation(u, v));
            }
        }
        Ok(Separation { v1, k, v2 })
    }

    /// True when no edge of the given edge subset crosses v1--v2.
    pub fn separates(&self, g: &Graph, edge_subset: &Subset) -> bool {
        edge_subset.ones().all(|e| {
            let (u, v) = g.endpoints(e);
            !((self.v1.get(u) && self.v2.get(v)) || (self.v1.get(v) && self.v2.get(u)))
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Number of connected components of the spanning subgraph `(V, S)`,
/// counting isolated vertices.
pub fn components_count(g: &Graph, s: &Subset) -> usize {
    assert_eq!(s.kind(), SubsetKind::Edge, "edge subset required");
    assert_eq!(s.len(), g.m(), "subset universe must be the edge set");
    let mut uf = UnionFind::new(g.n());
    for e in s.ones() {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    (0..g.n()).filter(|&v| uf.find(v) == v).count()
}

/// Entry `i` (0-based) counts components of `(V, S)` with exactly `i + 1`
/// vertices; the weighted sum of entries recovers `n`.
pub fn component_size_profile(g: &Graph, s: &Subset) -> Vec<usize> {
    assert_eq!(s.kind(), SubsetKind::Edge, "edge subset required");
    assert_eq!(s.len(), g.m(), "subset universe must be the edge set");
    let mut uf = UnionFind::new(g.n());
    for e in s.ones() {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    let mut profile = vec![0; g.n()];
    for v in 0..g.n() {
        if uf.find(v) == v {
            profile[uf.size[v] - 1] += 1;
        }
    }
    profile
}

/// Component count of the piece `(vmask, emask)` of the host graph: vertices
/// restricted to `vmask`, edges to `emask`. Requires n, m <= 64.
pub(crate) fn components_masked(g: &Graph, vmask: u64, emask: u64) -> usize {
    let mut uf = UnionFind::new(g.n());
    for e in 0..g.m() {
        if emask >> e & 1 == 1 {
            let (u, v) = g.endpoints(e);
            debug_assert!(vmask >> u & 1 == 1 && vmask >> v & 1 == 1);
            uf.union(u, v);
        }
    }
    (0..g.n())
        .filter(|&v| vmask >> v & 1 == 1 && uf.find(v) == v)
        .count()
}

/// Component size profile of the piece `(vmask, emask)`; entry `i` counts
/// components on `i + 1` vertices. Length is the host vertex count.
pub(crate) fn profile_masked(g: &Graph, vmask: u64, emask: u64) -> Vec<usize> {
    let mut uf = UnionFind::new(g.n());
    for e in 0..g.m() {
        if emask >> e & 1 == 1 {
            let (u, v) = g.endpoints(e);
            debug_assert!(vmask >> u & 1 == 1 && vmask >> v & 1 == 1);
            uf.union(u, v);
        }
    }
    let mut profile = vec![0; g.n()];
    for v in 0..g.n() {
        if vmask >> v & 1 == 1 && uf.find(v) == v {
            profile[uf.size[v] - 1] += 1;
        }
    }
    profile
}

/// The subgraph induced by a vertex subset, reindexed by ascending original
/// vertex index. Edge order follows the host graph's edge order.
pub fn induced_subgraph(g: &Graph, s: &Subset) -> Graph {
    assert_eq!(s.kind(), SubsetKind::Vertex, "vertex subset required");
    assert_eq!(s.len(), g.n(), "subset universe must be the vertex set");
    let mut index = vec![usize::MAX; g.n()];
    for (new, old) in s.ones().enumerate() {
        index[old] = new;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
        .map(|&(u, v)| (index[u], index[v]))
        .collect();
    Graph::new(s.count(), edges).expect("induced subgraph of a simple graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_subset(g: &Graph, mask: u64) -> Subset {
        Subset::from_mask(SubsetKind::Edge, g.m(), mask)
    }

    #[test]
    fn parse_smallest() {
        let g = Graph::parse("2 1\n0 1").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn parse_triangle() {
        let g = Graph::parse("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(
            Graph::parse("2 1\n0 0"),
            Err(ParseError::SelfLoop { line: 2, vertex: 0 })
        );
        assert_eq!(
            Graph::parse("2 2\n0 1\n1 0"),
            Err(ParseError::DuplicateEdge { line: 3, u: 1, v: 0 })
        );
        assert_eq!(
            Graph::parse("2 1\n0 5"),
            Err(ParseError::VertexOutOfRange {
                line: 2,
                vertex: 5,
                n: 2
            })
        );
        assert!(matches!(
            Graph::parse("3 2\n0 1\nx y"),
            Err(ParseError::BadEdgeLine { line: 3, .. })
        ));
        assert_eq!(
            Graph::parse("3 2\n0 1"),
            Err(ParseError::WrongEdgeCount {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(Graph::parse(""), Err(ParseError::MissingHeader)));
        assert!(matches!(Graph::parse("3"), Err(ParseError::BadHeader(_))));
    }

    #[test]
    fn parse_round_trip() {
        let g = Graph::cycle(5);
        assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn components_of_empty_subset_is_n() {
        let g = Graph::new(5, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(components_count(&g, &edge_subset(&g, 0)), 5);
    }

    #[test]
    fn components_of_full_triangle_is_one() {
        let g = Graph::cycle(3);
        assert_eq!(components_count(&g, &edge_subset(&g, 0b111)), 1);
    }

    #[test]
    fn components_of_middle_path_edge() {
        // P4 with edges 01, 12, 23; only edge 12 present.
        let g = Graph::path(4);
        assert_eq!(components_count(&g, &edge_subset(&g, 0b010)), 3);
    }

    #[test]
    fn profile_examples() {
        let g = Graph::path(4);
        assert_eq!(component_size_profile(&g, &edge_subset(&g, 0)), [4, 0, 0, 0]);
        assert_eq!(
            component_size_profile(&g, &edge_subset(&g, 0b001)),
            [2, 1, 0, 0]
        );
        let c3 = Graph::cycle(3);
        assert_eq!(component_size_profile(&c3, &edge_subset(&c3, 0b111)), [0, 0, 1]);
    }

    #[test]
    fn profile_weighted_sum_is_n() {
        let g = Graph::complete(5);
        for mask in 0..1u64 << g.m() {
            let p = component_size_profile(&g, &edge_subset(&g, mask));
            let total: usize = p.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
            assert_eq!(total, 5);
        }
    }

    #[test]
    fn induced_subgraph_examples() {
        let c3 = Graph::cycle(3);
        let empty = induced_subgraph(&c3, &Subset::empty(SubsetKind::Vertex, 3));
        assert_eq!((empty.n(), empty.m()), (0, 0));

        let k2 = induced_subgraph(&c3, &Subset::from_mask(SubsetKind::Vertex, 3, 0b011));
        assert_eq!((k2.n(), k2.m()), (2, 1));

        let p4 = Graph::path(4);
        let sub = induced_subgraph(&p4, &Subset::from_mask(SubsetKind::Vertex, 4, 0b1101));
        assert_eq!((sub.n(), sub.m()), (3, 1));
        assert_eq!(sub.edges(), &[(1, 2)]);
    }

    #[test]
    fn separation_rejects_crossing_edges() {
        let g = Graph::path(3);
        let v1 = Bits::from_indices(3, &[0]);
        let k = Bits::from_indices(3, &[1]);
        let v2 = Bits::from_indices(3, &[2]);
        assert!(Separation::new(&g, v1, k, v2).is_ok());

        let v1 = Bits::from_indices(3, &[0]);
        let k = Bits::from_indices(3, &[2]);
        let v2 = Bits::from_indices(3, &[1]);
        assert!(Separation::new(&g, v1, k, v2).is_err());
    }
}
