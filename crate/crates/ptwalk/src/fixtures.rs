//! Named example graphs.
//!
//! * [`g3`] — the three-vertex example: a reciprocal pair `1 ⇄ 2` fed by a
//!   pure source `3 → 1`, `3 → 2`. Its Hamiltonian is
//!   `[[1, −1, −1], [−1, 1, −1], [0, 0, 2]]`, spectrum `{0, 2, 2}`.
//! * [`four_vertex_c1`], [`four_vertex_c2`] — the two four-vertex graphs
//!   compatible with the stated degree signature (vertices 1 and 3 have
//!   in-degree 2 and out-degree 1). They are isospectral mirror images with
//!   identical centrality values; `c1` is the canonical choice.
//! * [`directed_cycle`], [`undirected_path`] — standard broken and
//!   Hermitian examples.

use crate::graphcore::DirectedGraph;

/// Three-vertex example `{1→2, 2→1, 3→1, 3→2}`.
pub fn g3() -> DirectedGraph {
    DirectedGraph::from_edge_list(3, &[(1, 2), (2, 1), (3, 1), (3, 2)])
        .expect("fixture is well formed")
}

/// Four-vertex candidate `{2→1, 2→3, 4→1, 4→3, 1→2, 3→4}`.
pub fn four_vertex_c1() -> DirectedGraph {
    DirectedGraph::from_edge_list(4, &[(2, 1), (2, 3), (4, 1), (4, 3), (1, 2), (3, 4)])
        .expect("fixture is well formed")
}

/// Four-vertex candidate `{2→1, 2→3, 4→1, 4→3, 1→4, 3→2}`.
pub fn four_vertex_c2() -> DirectedGraph {
    DirectedGraph::from_edge_list(4, &[(2, 1), (2, 3), (4, 1), (4, 3), (1, 4), (3, 2)])
        .expect("fixture is well formed")
}

/// Directed cycle `1 → 2 → … → n → 1` (`n ≥ 2`).
pub fn directed_cycle(n: usize) -> DirectedGraph {
    let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    DirectedGraph::from_edge_list(n, &edges).expect("fixture is well formed")
}

/// Undirected path `1 — 2 — … — n` (both directions of every edge).
pub fn undirected_path(n: usize) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((i, i + 1));
        edges.push((i + 1, i));
    }
    DirectedGraph::from_edge_list(n, &edges).expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vertex_degree_signature() {
        for g in [four_vertex_c1(), four_vertex_c2()] {
            let (ind, outd) = (g.in_degrees(), g.out_degrees());
            assert_eq!((ind[0], outd[0]), (2, 1));
            assert_eq!((ind[2], outd[2]), (2, 1));
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(g3().edge_count(), 4);
        assert_eq!(directed_cycle(3).edge_count(), 3);
        assert!(undirected_path(4).is_symmetric());
    }
}
