//! Directed graphs, graph Hamiltonians and related constructions.
//!
//! Vertices are 1-indexed at every I/O boundary (edge lists, error
//! messages, CSV output) and 0-indexed internally.
//!
//! The Hamiltonian convention used throughout the crate is
//! `H = (D_out − A)ᵀ` with `A[i][j] = 1` iff there is an edge `i → j`:
//! amplitude flows along edge direction and the diagonal holds the
//! out-degree of each vertex. This is the transpose of the usual directed
//! combinatorial Laplacian, i.e. the generator of a continuous-time random
//! walk acting on probability column vectors.

pub mod format;
mod interdependent;
mod weighted;

pub use interdependent::{
    build_interdependent, check_interdependent_theorem, InterdependentSpec, TheoremReport,
};
pub use weighted::{
    complete_laplacian_direct, weighted_laplacian, weights_from_hermitized, IncidenceEdge,
    OrientedIncidence, WeightedGraph,
};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::{Error, RMatrix, Result};

/// A simple directed graph on `n` vertices (no self-loops, no multi-edges).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: RMatrix,
}

impl DirectedGraph {
    /// Build a graph from 1-indexed `(source, target)` pairs.
    ///
    /// Fails on indices outside `1..=n`, self-loops and duplicate edges.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(edges.len());
        for &(s, t) in edges {
            for v in [s, t] {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            zero_based.push((s - 1, t - 1));
        }
        Self::from_zero_based(n, &zero_based)
    }

    /// Build a graph from 0-indexed `(source, target)` pairs.
    ///
    /// Errors are reported with 1-indexed vertex labels.
    pub fn from_zero_based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = RMatrix::zeros(n, n);
        let mut seen = HashSet::with_capacity(edges.len());
        for &(s, t) in edges {
            for v in [s, t] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            if s == t {
                return Err(Error::SelfLoop { vertex: s + 1 });
            }
            if !seen.insert((s, t)) {
                return Err(Error::DuplicateEdge {
                    from: s + 1,
                    to: t + 1,
                });
            }
            adjacency[(s, t)] = 1.0;
        }
        Ok(Self {
            n,
            edges: edges.to_vec(),
            adjacency,
        })
    }

    /// Build a graph from a 0/1 adjacency matrix. Edges are listed in
    /// row-major order.
    pub fn from_adjacency(adjacency: &RMatrix) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "adjacency matrix must be square, got {}x{}",
                adjacency.nrows(),
                adjacency.ncols()
            )));
        }
        let n = adjacency.nrows();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let a = adjacency[(i, j)];
                if a == 1.0 {
                    edges.push((i, j));
                } else if a != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency entry ({}, {}) = {a} is not 0 or 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Self::from_zero_based(n, &edges)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-indexed `(source, target)` pairs, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as 1-indexed `(source, target)` pairs, in insertion order.
    pub fn edges_one_based(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(s, t)| (s + 1, t + 1)).collect()
    }

    /// Adjacency matrix, `A[i][j] = 1` iff edge `i → j` (0-indexed).
    pub fn adjacency(&self) -> &RMatrix {
        &self.adjacency
    }

    /// `true` iff the 0-indexed edge `s → t` exists.
    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.adjacency[(s, t)] != 0.0
    }

    /// Out-degree of every vertex (row sums of `A`).
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(s, _) in &self.edges {
            d[s] += 1;
        }
        d
    }

    /// In-degree of every vertex (column sums of `A`).
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, t) in &self.edges {
            d[t] += 1;
        }
        d
    }

    /// `true` iff every edge is paired with its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(s, t)| self.has_edge(t, s))
    }

    /// `true` iff the graph has no directed cycle, decided by Kahn's
    /// algorithm (repeatedly removing vertices of zero in-degree).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = self.in_degrees();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(s, t) in &self.edges {
            out[s].push(t);
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &t in &out[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        removed == self.n
    }

    /// Pairs `(s, t)` (0-indexed, `s < t`) for which both `s → t` and
    /// `t → s` are present.
    pub fn reciprocal_pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|&&(s, t)| s < t && self.has_edge(t, s))
            .copied()
            .collect()
    }

    /// The graph with vertex `v` relabelled `perm[v]` (0-indexed
    /// permutation).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for a graph on {} vertices",
                perm.len(),
                self.n
            )));
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(s, t)| (perm[s], perm[t]))
            .collect();
        Self::from_zero_based(self.n, &edges)
    }
}

/// Where a Hamiltonian came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianSource {
    /// `(D_out − A)ᵀ` of a directed graph.
    DirectedLaplacian,
    /// `ηHη⁻¹` of a pseudo-Hermitian Hamiltonian.
    Hermitized,
    /// Kronecker sum of single-particle Hamiltonians.
    KroneckerSum,
    /// Block Hamiltonian of an interdependent network.
    Interdependent,
    /// Any user-supplied matrix.
    Custom,
}

/// A real square matrix acting as the generator of a walk.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: RMatrix,
    source: HamiltonianSource,
}

impl Hamiltonian {
    /// Wrap a square matrix. Fails if the matrix is not square.
    pub fn new(matrix: RMatrix, source: HamiltonianSource) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, source })
    }

    /// Wrap a user-supplied square matrix.
    pub fn custom(matrix: RMatrix) -> Result<Self> {
        Self::new(matrix, HamiltonianSource::Custom)
    }

    /// The matrix itself.
    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    /// Provenance tag.
    pub fn source(&self) -> HamiltonianSource {
        self.source
    }

    /// Dimension of the (square) matrix.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Graph Hamiltonian `H = (D_out − A)ᵀ`.
///
/// `H[i][i]` is the out-degree of vertex `i` and `H[i][j] = −1` exactly when
/// the edge `j → i` exists.
pub fn hamiltonian(g: &DirectedGraph) -> Hamiltonian {
    let n = g.n();
    let mut m = RMatrix::zeros(n, n);
    for &(s, t) in g.edges() {
        m[(s, s)] += 1.0;
        m[(t, s)] -= 1.0;
    }
    Hamiltonian {
        matrix: m,
        source: HamiltonianSource::DirectedLaplacian,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> DirectedGraph {
        DirectedGraph::from_edge_list(3, &[(1, 2), (2, 1), (3, 1), (3, 2)]).unwrap()
    }

    #[test]
    fn g3_adjacency() {
        let expected = RMatrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 0., 1., 1., 0.]);
        assert_eq!(g3().adjacency(), &expected);
    }

    #[test]
    fn g3_hamiltonian() {
        let h = hamiltonian(&g3());
        let expected = RMatrix::from_row_slice(3, 3, &[1., -1., -1., -1., 1., -1., 0., 0., 2.]);
        assert_eq!(h.matrix(), &expected);
        assert_eq!(h.source(), HamiltonianSource::DirectedLaplacian);
    }

    #[test]
    fn empty_graph() {
        let g = DirectedGraph::from_edge_list(2, &[]).unwrap();
        assert_eq!(g.adjacency(), &RMatrix::zeros(2, 2));
        assert_eq!(hamiltonian(&g).matrix(), &RMatrix::zeros(2, 2));
    }

    #[test]
    fn undirected_pair_is_symmetric() {
        let g = DirectedGraph::from_edge_list(2, &[(1, 2), (2, 1)]).unwrap();
        let h = hamiltonian(&g);
        assert_eq!(
            h.matrix(),
            &RMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.])
        );
        assert!(g.is_symmetric());
    }

    #[test]
    fn rejects_self_loop() {
        let err = DirectedGraph::from_edge_list(3, &[(1, 1)]).unwrap_err();
        assert!(matches!(err, Error::SelfLoop { vertex: 1 }));
    }

    #[test]
    fn rejects_duplicate() {
        let err = DirectedGraph::from_edge_list(3, &[(1, 2), (1, 2)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { from: 1, to: 2 }));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            DirectedGraph::from_edge_list(3, &[(1, 4)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 4, n: 3 }
        ));
        assert!(matches!(
            DirectedGraph::from_edge_list(3, &[(0, 1)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 0, n: 3 }
        ));
    }

    #[test]
    fn degrees() {
        let g = g3();
        assert_eq!(g.out_degrees(), vec![1, 1, 2]);
        assert_eq!(g.in_degrees(), vec![2, 2, 0]);
    }

    #[test]
    fn acyclicity() {
        assert!(!g3().is_acyclic());
        let dag = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(dag.is_acyclic());
        let cycle = DirectedGraph::from_edge_list(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(!cycle.is_acyclic());
    }

    #[test]
    fn adjacency_round_trip() {
        let g = g3();
        let back = DirectedGraph::from_adjacency(g.adjacency()).unwrap();
        assert_eq!(back.adjacency(), g.adjacency());
        assert!(DirectedGraph::from_adjacency(&RMatrix::from_element(2, 2, 0.5)).is_err());
    }

    #[test]
    fn reciprocal_pairs_of_g3() {
        assert_eq!(g3().reciprocal_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn relabel_permutes_hamiltonian() {
        let g = g3();
        let perm = [2, 0, 1];
        let r = g.relabel(&perm).unwrap();
        let h = hamiltonian(&g);
        let hr = hamiltonian(&r);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(hr.matrix()[(perm[i], perm[j])], h.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn non_square_hamiltonian_rejected() {
        assert!(Hamiltonian::custom(RMatrix::zeros(2, 3)).is_err());
    }
}
