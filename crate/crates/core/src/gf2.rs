//! GF(2) matrix ranks by bitset Gaussian elimination.
//!
//! Rank routines work from scratch on every call; nothing is maintained
//! incrementally across subset changes.

use crate::bits::{Subset, SubsetKind};
use crate::graph::Graph;

/// Rank of a set of rows, each row a block vector of `width` bits.
/// Consumes the rows; elimination keys pivots on the lowest set bit.
fn rank_of_block_rows(mut rows: Vec<Vec<u64>>) -> usize {
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for row in rows.iter_mut() {
        loop {
            let Some(low) = lowest_bit(row) else { break };
            match pivots.iter().find(|(p, _)| *p == low) {
                Some((_, pivot_row)) => {
                    for (a, b) in row.iter_mut().zip(pivot_row) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots.push((low, row.clone()));
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &b)| b != 0)
        .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
}

/// Rank of single-word rows; the fast path for everything the verification
/// sweeps touch.
pub(crate) fn rank_of_word_rows(rows: &mut [u64]) -> usize {
    let mut pivots: Vec<u64> = Vec::new();
    for mut row in rows.iter().copied() {
        for &p in &pivots {
            let low = p & p.wrapping_neg();
            if row & low != 0 {
                row ^= p;
            }
        }
        if row != 0 {
            // clear the new lowest bit from the older pivots so every pivot
            // keeps a unique lowest bit
            let low = row & row.wrapping_neg();
            for p in pivots.iter_mut() {
                if *p & low != 0 {
                    *p ^= row;
                }
            }
            pivots.push(row);
        }
    }
    pivots.len()
}

fn blocks_for(width: usize) -> usize {
    width.div_ceil(64)
}

/// GF(2) rank of the vertex/edge incidence matrix of `(V, S)`: one row per
/// vertex, one column per edge of `S` in ascending edge-index order.
pub fn incidence_rank(g: &Graph, s: &Subset) -> usize {
    assert_eq!(s.kind(), SubsetKind::Edge, "edge subset required");
    assert_eq!(s.len(), g.m(), "subset universe must be the edge set");
    let width = s.count();
    let mut rows = vec![vec![0u64; blocks_for(width)]; g.n()];
    for (col, e) in s.ones().enumerate() {
        let (u, v) = g.endpoints(e);
        rows[u][col / 64] ^= 1 << (col % 64);
        rows[v][col / 64] ^= 1 << (col % 64);
    }
    rank_of_block_rows(rows)
}

/// GF(2) rank of the n-by-n adjacency matrix of the spanning subgraph
/// `(V, S)`. Always even: the matrix is symmetric with zero diagonal.
pub fn adjacency_rank_edges(g: &Graph, s: &Subset) -> usize {
    assert_eq!(s.kind(), SubsetKind::Edge, "edge subset required");
    assert_eq!(s.len(), g.m(), "subset universe must be the edge set");
    let mut rows = vec![vec![0u64; blocks_for(g.n())]; g.n()];
    for e in s.ones() {
        let (u, v) = g.endpoints(e);
        rows[u][v / 64] ^= 1 << (v % 64);
        rows[v][u / 64] ^= 1 << (u % 64);
    }
    rank_of_block_rows(rows)
}

/// GF(2) rank of the adjacency matrix of the induced subgraph `G[S]`.
pub fn adjacency_rank_induced(g: &Graph, s: &Subset) -> usize {
    assert_eq!(s.kind(), SubsetKind::Vertex, "vertex subset required");
    assert_eq!(s.len(), g.n(), "subset universe must be the vertex set");
    let mut rows = vec![vec![0u64; blocks_for(g.n())]; g.n()];
    for &(u, v) in g.edges() {
        if s.contains(u) && s.contains(v) {
            rows[u][v / 64] ^= 1 << (v % 64);
            rows[v][u / 64] ^= 1 << (u % 64);
        }
    }
    rank_of_block_rows(rows)
}

/// Incidence rank of the piece `(vmask, emask)` of the host graph, columns
/// restricted to `emask` edges, rows to `vmask` vertices. Masked variant for
/// the small graphs the verification module sweeps; requires n, m <= 64.
pub(crate) fn incidence_rank_masked(g: &Graph, vmask: u64, emask: u64) -> usize {
    let mut rows = vec![0u64; g.n()];
    let mut col = 0;
    for e in 0..g.m() {
        if emask >> e & 1 == 1 {
            let (u, v) = g.endpoints(e);
            debug_assert!(vmask >> u & 1 == 1 && vmask >> v & 1 == 1);
            rows[u] ^= 1 << col;
            rows[v] ^= 1 << col;
            col += 1;
        }
    }
    let mut kept: Vec<u64> = (0..g.n())
        .filter(|&v| vmask >> v & 1 == 1)
        .map(|v| rows[v])
        .collect();
    rank_of_word_rows(&mut kept)
}

/// Adjacency rank of the piece `(vmask, emask)`; requires n <= 64.
pub(crate) fn adjacency_rank_masked(g: &Graph, vmask: u64, emask: u64) -> usize {
    let mut rows = vec![0u64; g.n()];
    for e in 0..g.m() {
        if emask >> e & 1 == 1 {
            let (u, v) = g.endpoints(e);
            debug_assert!(vmask >> u & 1 == 1 && vmask >> v & 1 == 1);
            rows[u] ^= 1 << v;
            rows[v] ^= 1 << u;
        }
    }
    let mut kept: Vec<u64> = (0..g.n())
        .filter(|&v| vmask >> v & 1 == 1)
        .map(|v| rows[v])
        .collect();
    rank_of_word_rows(&mut kept)
}

/// Adjacency rank of the induced piece `G[vmask]` with all host edges inside
/// `vmask` present; requires n <= 64.
pub(crate) fn adjacency_rank_induced_masked(g: &Graph, vmask: u64) -> usize {
    let mut rows = vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        if vmask >> u & 1 == 1 && vmask >> v & 1 == 1 {
            rows[u] ^= 1 << v;
            rows[v] ^= 1 << u;
        }
    }
    let mut kept: Vec<u64> = (0..g.n())
        .filter(|&v| vmask >> v & 1 == 1)
        .map(|v| rows[v])
        .collect();
    rank_of_word_rows(&mut kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::components_count;

    fn edge_subset(g: &Graph, mask: u64) -> Subset {
        Subset::from_mask(SubsetKind::Edge, g.m(), mask)
    }

    /// Plain dense elimination over u8 entries, kept deliberately separate
    /// from the bitset code path.
    fn naive_rank(mut a: Vec<Vec<u8>>) -> usize {
        let rows = a.len();
        if rows == 0 {
            return 0;
        }
        let cols = a[0].len();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows).find(|&r| a[r][c] == 1) {
                a.swap(rank, p);
                for r in 0..rows {
                    if r != rank && a[r][c] == 1 {
                        for cc in 0..cols {
                            a[r][cc] ^= a[rank][cc];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn naive_incidence_rank(g: &Graph, mask: u64) -> usize {
        let cols: Vec<usize> = (0..g.m()).filter(|&e| mask >> e & 1 == 1).collect();
        let mut a = vec![vec![0u8; cols.len()]; g.n()];
        for (c, &e) in cols.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            a[u][c] = 1;
            a[v][c] = 1;
        }
        naive_rank(a)
    }

    #[test]
    fn empty_subset_has_rank_zero() {
        let g = Graph::cycle(3);
        assert_eq!(incidence_rank(&g, &edge_subset(&g, 0)), 0);
        assert_eq!(adjacency_rank_edges(&g, &edge_subset(&g, 0)), 0);
    }

    #[test]
    fn single_edge_ranks() {
        let g = Graph::path(2);
        assert_eq!(incidence_rank(&g, &edge_subset(&g, 1)), 1);
        assert_eq!(adjacency_rank_edges(&g, &edge_subset(&g, 1)), 2);
    }

    #[test]
    fn triangle_ranks_match_elimination_oracle() {
        let g = Graph::cycle(3);
        let full = edge_subset(&g, 0b111);
        assert_eq!(naive_incidence_rank(&g, 0b111), 2);
        assert_eq!(incidence_rank(&g, &full), 2);
        assert_eq!(incidence_rank(&g, &full), g.n() - components_count(&g, &full));

        // rows 011, 101, 110: the third is the sum of the first two
        let mut rows = vec![0b011u64, 0b101, 0b110];
        assert_eq!(rank_of_word_rows(&mut rows), 2);
        assert_eq!(adjacency_rank_edges(&g, &full), 2);
    }

    #[test]
    fn induced_rank_examples() {
        let c3 = Graph::cycle(3);
        assert_eq!(
            adjacency_rank_induced(&c3, &Subset::empty(SubsetKind::Vertex, 3)),
            0
        );
        assert_eq!(
            adjacency_rank_induced(&c3, &Subset::from_mask(SubsetKind::Vertex, 3, 0b001)),
            0
        );
        assert_eq!(
            adjacency_rank_induced(&c3, &Subset::from_mask(SubsetKind::Vertex, 3, 0b111)),
            2
        );
    }

    #[test]
    fn incidence_matches_oracle_exhaustively() {
        for g in [Graph::path(5), Graph::cycle(5), Graph::complete(4)] {
            for mask in 0..1u64 << g.m() {
                assert_eq!(
                    incidence_rank(&g, &edge_subset(&g, mask)),
                    naive_incidence_rank(&g, mask),
                );
            }
        }
    }

    #[test]
    fn adjacency_ranks_are_even() {
        let g = Graph::complete(5);
        for mask in 0..1u64 << g.m() {
            assert_eq!(adjacency_rank_edges(&g, &edge_subset(&g, mask)) % 2, 0);
        }
    }

    #[test]
    fn masked_variants_agree_with_public_ops() {
        let g = Graph::complete(4);
        let all_v = (1u64 << g.n()) - 1;
        for mask in 0..1u64 << g.m() {
            let s = edge_subset(&g, mask);
            assert_eq!(incidence_rank_masked(&g, all_v, mask), incidence_rank(&g, &s));
            assert_eq!(
                adjacency_rank_masked(&g, all_v, mask),
                adjacency_rank_edges(&g, &s)
            );
        }
        for vmask in 0..1u64 << g.n() {
            let s = Subset::from_mask(SubsetKind::Vertex, g.n(), vmask);
            assert_eq!(
                adjacency_rank_induced_masked(&g, vmask),
                adjacency_rank_induced(&g, &s)
            );
        }
    }
}
