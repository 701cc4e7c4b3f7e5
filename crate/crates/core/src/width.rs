//! Edge orderings and their linear-width; vertex orderings and their
//! vertex-separation. Exact optima come from a subset dynamic program over
//! prefix sets (the boundary count at a cut depends only on which elements
//! sit in the prefix, not on their order); a greedy heuristic covers graphs
//! above the exact-search cap.

use crate::bits::SubsetKind;
use crate::caps;
use crate::graph::Graph;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WidthError {
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("ground set of {size} exceeds exact search cap {cap}")]
    SearchCapExceeded { size: usize, cap: usize },
}

/// A permutation of the edges (or vertices) together with its width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ordering {
    kind: SubsetKind,
    perm: Vec<usize>,
    width: usize,
}

impl Ordering {
    /// Wrap an explicit permutation, validating it and computing its width.
    pub fn from_perm(g: &Graph, kind: SubsetKind, perm: Vec<usize>) -> Result<Self, WidthError> {
        let width = match kind {
            SubsetKind::Edge => linear_width_of_ordering(g, &perm)?,
            SubsetKind::Vertex => vertex_separation_of_ordering(g, &perm)?,
        };
        Ok(Ordering { kind, perm, width })
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

fn check_permutation(perm: &[usize], len: usize) -> Result<(), WidthError> {
    if perm.len() != len {
        return Err(WidthError::NotAPermutation(len));
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(WidthError::NotAPermutation(len));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Max over cut positions i (1-based) of the number of vertices incident to
/// both an edge among the first i-1 and an edge among the rest (the suffix
/// includes position i itself). Zero when m <= 1.
pub fn linear_width_of_ordering(g: &Graph, perm: &[usize]) -> Result<usize, WidthError> {
    check_permutation(perm, g.m())?;
    let m = g.m();
    if m == 0 {
        return Ok(0);
    }
    // position (1-based) of each vertex's first and last incident edge
    let mut first = vec![usize::MAX; g.n()];
    let mut last = vec![0usize; g.n()];
    for (pos0, &e) in perm.iter().enumerate() {
        let pos = pos0 + 1;
        let (u, v) = g.endpoints(e);
        for w in [u, v] {
            first[w] = first[w].min(pos);
            last[w] = last[w].max(pos);
        }
    }
    // vertex w crosses cut i iff first[w] < i <= last[w]
    let mut delta = vec![0isize; m + 2];
    for w in 0..g.n() {
        if first[w] != usize::MAX && first[w] < last[w] {
            delta[first[w] + 1] += 1;
            delta[last[w] + 1] -= 1;
        }
    }
    let mut width = 0isize;
    let mut active = 0isize;
    for d in delta.iter().take(m + 1).skip(1) {
        active += d;
        width = width.max(active);
    }
    Ok(width as usize)
}

/// Max over cut positions i of the number of vertices among the first i-1
/// that are adjacent to some vertex at position i or later.
pub fn vertex_separation_of_ordering(g: &Graph, perm: &[usize]) -> Result<usize, WidthError> {
    check_permutation(perm, g.n())?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let mut pos = vec![0usize; n];
    for (p0, &v) in perm.iter().enumerate() {
        pos[v] = p0 + 1;
    }
    // vertex v counts at cut i iff pos[v] < i <= max neighbor position
    let mut delta = vec![0isize; n + 2];
    for v in 0..n {
        let latest = g
            .adjacency(v)
            .iter()
            .map(|&(w, _)| pos[w])
            .max()
            .unwrap_or(0);
        if latest > pos[v] {
            delta[pos[v] + 1] += 1;
            delta[latest + 1] -= 1;
        }
    }
    let mut width = 0isize;
    let mut active = 0isize;
    for d in delta.iter().take(n + 1).skip(1) {
        active += d;
        width = width.max(active);
    }
    Ok(width as usize)
}

/// Boundary size of an edge-prefix set: vertices incident to an edge inside
/// the prefix and an edge outside it.
fn edge_prefix_boundary(incident: &[u64], prefix: u64, full: u64) -> usize {
    let rest = full & !prefix;
    incident
        .iter()
        .filter(|&&inc| inc & prefix != 0 && inc & rest != 0)
        .count()
}

/// Boundary size of a vertex-prefix set: prefix vertices with a neighbor
/// outside the prefix.
fn vertex_prefix_boundary(neighbors: &[u64], prefix: u64, full: u64) -> usize {
    let rest = full & !prefix;
    (0..neighbors.len())
        .filter(|&v| prefix >> v & 1 == 1 && neighbors[v] & rest != 0)
        .count()
}

/// Shared subset DP: `boundary(prefix)` scores every proper prefix along a
/// chain from the empty set to the full set; minimise the max score.
fn optimal_order_dp(size: usize, boundary: impl Fn(u64) -> usize) -> (Vec<usize>, usize) {
    let full: u64 = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
    let states = 1usize << size;
    // best[p] = min over orderings of the prefix set p of the max boundary
    // over all proper prefixes of the chain (including p's predecessors,
    // excluding p itself)
    let mut best = vec![u32::MAX; states];
    let mut bound_of = vec![0u32; states];
    best[0] = 0;
    for p in 0..states as u64 {
        bound_of[p as usize] = boundary(p) as u32;
    }
    for p in 1..states as u64 {
        let mut rest = p;
        let mut b = u32::MAX;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            let prev = (p ^ bit) as usize;
            b = b.min(best[prev].max(bound_of[prev]));
        }
        best[p as usize] = b;
    }
    let width = best[full as usize] as usize;

    // reconstruct one optimal chain back to front
    let mut perm = vec![0usize; size];
    let mut p = full;
    for slot in (0..size).rev() {
        let mut rest = p;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            let prev = (p ^ bit) as usize;
            if best[prev].max(bound_of[prev]) == best[p as usize] {
                perm[slot] = bit.trailing_zeros() as usize;
                p ^= bit;
                break;
            }
        }
    }
    (perm, width)
}

/// An edge ordering achieving the graph's linear-width exactly.
pub fn optimal_edge_ordering(g: &Graph) -> Result<Ordering, WidthError> {
    if g.m() > caps::WIDTH_EXACT {
        return Err(WidthError::SearchCapExceeded {
            size: g.m(),
            cap: caps::WIDTH_EXACT,
        });
    }
    let incident = edge_incidence_masks(g);
    let full: u64 = if g.m() == 0 { 0 } else { (1u64 << g.m()) - 1 };
    let (perm, width) = optimal_order_dp(g.m(), |p| edge_prefix_boundary(&incident, p, full));
    debug_assert_eq!(linear_width_of_ordering(g, &perm), Ok(width));
    Ok(Ordering {
        kind: SubsetKind::Edge,
        perm,
        width,
    })
}

/// A vertex ordering achieving the graph's vertex-separation exactly.
pub fn optimal_vertex_ordering(g: &Graph) -> Result<Ordering, WidthError> {
    if g.n() > caps::WIDTH_EXACT {
        return Err(WidthError::SearchCapExceeded {
            size: g.n(),
            cap: caps::WIDTH_EXACT,
        });
    }
    let neighbors = neighbor_masks(g);
    let full: u64 = if g.n() == 0 { 0 } else { (1u64 << g.n()) - 1 };
    let (perm, width) = optimal_order_dp(g.n(), |p| vertex_prefix_boundary(&neighbors, p, full));
    debug_assert_eq!(vertex_separation_of_ordering(g, &perm), Ok(width));
    Ok(Ordering {
        kind: SubsetKind::Vertex,
        perm,
        width,
    })
}

fn edge_incidence_masks(g: &Graph) -> Vec<u64> {
    let mut incident = vec![0u64; g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u] |= 1 << e;
        incident[v] |= 1 << e;
    }
    incident
}

fn neighbor_masks(g: &Graph) -> Vec<u64> {
    let mut neighbors = vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        neighbors[u] |= 1 << v;
        neighbors[v] |= 1 << u;
    }
    neighbors
}

/// Greedy ordering: repeatedly append the element whose addition minimises
/// the boundary of the grown prefix, breaking ties by lowest index. Works at
/// any size; the returned width is computed exactly for the produced order.
pub fn greedy_ordering(g: &Graph, kind: SubsetKind) -> Ordering {
    let size = match kind {
        SubsetKind::Edge => g.m(),
        SubsetKind::Vertex => g.n(),
    };
    let mut in_prefix = vec![false; size];
    let mut perm = Vec::with_capacity(size);
    for _ in 0..size {
        let mut chosen = usize::MAX;
        let mut chosen_boundary = usize::MAX;
        for cand in 0..size {
            if in_prefix[cand] {
                continue;
            }
            in_prefix[cand] = true;
            let b = match kind {
                SubsetKind::Edge => edge_boundary_general(g, &in_prefix),
                SubsetKind::Vertex => vertex_boundary_general(g, &in_prefix),
            };
            in_prefix[cand] = false;
            if b < chosen_boundary {
                chosen_boundary = b;
                chosen = cand;
            }
        }
        in_prefix[chosen] = true;
        perm.push(chosen);
    }
    Ordering::from_perm(g, kind, perm).expect("greedy constructs a permutation")
}

fn edge_boundary_general(g: &Graph, in_prefix: &[bool]) -> usize {
    (0..g.n())
        .filter(|&v| {
            let mut inside = false;
            let mut outside = false;
            for &(_, e) in g.adjacency(v) {
                if in_prefix[e] {
                    inside = true;
                } else {
                    outside = true;
                }
            }
            inside && outside
        })
        .count()
}

fn vertex_boundary_general(g: &Graph, in_prefix: &[bool]) -> usize {
    (0..g.n())
        .filter(|&v| in_prefix[v] && g.adjacency(v).iter().any(|&(w, _)| !in_prefix[w]))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_ordered_along_itself_has_width_one() {
        let g = Graph::path(4);
        assert_eq!(linear_width_of_ordering(&g, &[0, 1, 2]), Ok(1));
    }

    #[test]
    fn single_edge_has_width_zero() {
        let g = Graph::path(2);
        assert_eq!(linear_width_of_ordering(&g, &[0]), Ok(0));
    }

    #[test]
    fn cycle_in_cyclic_order_has_width_two() {
        let g = Graph::cycle(4);
        assert_eq!(linear_width_of_ordering(&g, &[0, 1, 2, 3]), Ok(2));
    }

    #[test]
    fn vertex_separation_examples() {
        let p4 = Graph::path(4);
        assert_eq!(vertex_separation_of_ordering(&p4, &[0, 1, 2, 3]), Ok(1));

        let edgeless = Graph::new(4, vec![]).unwrap();
        assert_eq!(vertex_separation_of_ordering(&edgeless, &[0, 1, 2, 3]), Ok(0));

        // every ordering of K3 hits separation 2
        let k3 = Graph::complete(3);
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert_eq!(vertex_separation_of_ordering(&k3, &perm), Ok(2));
        }
    }

    #[test]
    fn non_permutations_are_rejected() {
        let g = Graph::path(3);
        assert_eq!(
            linear_width_of_ordering(&g, &[0, 0]),
            Err(WidthError::NotAPermutation(2))
        );
        assert_eq!(
            linear_width_of_ordering(&g, &[0]),
            Err(WidthError::NotAPermutation(2))
        );
        assert_eq!(
            vertex_separation_of_ordering(&g, &[0, 1, 5]),
            Err(WidthError::NotAPermutation(3))
        );
    }

    #[test]
    fn optimal_widths_of_named_families() {
        for n in 3..=8 {
            assert_eq!(optimal_edge_ordering(&Graph::path(n)).unwrap().width(), 1);
        }
        for n in 3..=7 {
            assert_eq!(optimal_edge_ordering(&Graph::cycle(n)).unwrap().width(), 2);
        }
        assert_eq!(optimal_edge_ordering(&Graph::path(2)).unwrap().width(), 0);
        for n in 2..=6 {
            assert_eq!(
                optimal_vertex_ordering(&Graph::complete(n)).unwrap().width(),
                n - 1
            );
        }
        let edgeless = Graph::new(5, vec![]).unwrap();
        assert_eq!(optimal_vertex_ordering(&edgeless).unwrap().width(), 0);
        for n in 3..=8 {
            assert_eq!(optimal_vertex_ordering(&Graph::path(n)).unwrap().width(), 1);
        }
    }

    #[test]
    fn exact_matches_brute_force_on_tiny_graphs() {
        fn permutations(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in permutations(k - 1) {
                for slot in 0..=rest.len() {
                    let mut p = rest.clone();
                    p.insert(slot, k - 1);
                    out.push(p);
                }
            }
            out
        }
        for g in [
            Graph::cycle(4),
            Graph::complete(4),
            Graph::star(4),
            Graph::new(5, vec![(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap(),
        ] {
            let brute_lw = permutations(g.m())
                .iter()
                .map(|p| linear_width_of_ordering(&g, p).unwrap())
                .min()
                .unwrap();
            assert_eq!(optimal_edge_ordering(&g).unwrap().width(), brute_lw);

            let brute_vs = permutations(g.n())
                .iter()
                .map(|p| vertex_separation_of_ordering(&g, p).unwrap())
                .min()
                .unwrap();
            assert_eq!(optimal_vertex_ordering(&g).unwrap().width(), brute_vs);
        }
    }

    #[test]
    fn greedy_finds_path_order_from_degree_one_start() {
        let g = Graph::path(6);
        let o = greedy_ordering(&g, SubsetKind::Edge);
        assert_eq!(o.width(), 1);
    }

    #[test]
    fn greedy_never_beats_exact() {
        for g in [Graph::cycle(6), Graph::complete(5), Graph::star(5)] {
            let exact = optimal_edge_ordering(&g).unwrap().width();
            assert!(greedy_ordering(&g, SubsetKind::Edge).width() >= exact);
            let exact_v = optimal_vertex_ordering(&g).unwrap().width();
            assert!(greedy_ordering(&g, SubsetKind::Vertex).width() >= exact_v);
        }
    }

    #[test]
    fn search_cap_is_enforced() {
        let g = Graph::complete(7); // 21 edges
        assert!(matches!(
            optimal_edge_ordering(&g),
            Err(WidthError::SearchCapExceeded { size: 21, .. })
        ));
    }

    #[test]
    fn ordering_from_perm_records_width() {
        let g = Graph::path(4);
        let o = Ordering::from_perm(&g, SubsetKind::Edge, vec![2, 0, 1]).unwrap();
        assert_eq!(o.width(), linear_width_of_ordering(&g, o.perm()).unwrap());
    }
}
