//! Weighted undirected graphs with self-loops and their Laplacians.
//!
//! A Hermitian (real symmetric) Hamiltonian `H̃` can be read as the weighted
//! Laplacian of an undirected *complete* graph with self-loops. With the
//! self-loop incidence value 2, the Laplacian `L = MWMᵀ` has entries
//!
//! ```text
//! L_ii = Σ_k w_ik + 3 w_ii,      L_ij = −w_ij   (i ≠ j)
//! ```
//!
//! and the inverse map is `w_ij = −H̃_ij`, `w_ii = ¼ Σ_k H̃_ik`. Mapped
//! weights may be negative.

use nalgebra::DMatrix;

use super::{Hamiltonian, HamiltonianSource};
use crate::linalg::symmetry_defect;
use crate::{Error, RMatrix, Result};

/// Symmetry tolerance accepted by [`weights_from_hermitized`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Undirected weighted graph stored as a symmetric weight matrix; the
/// diagonal holds self-loop weights. Weights may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    weights: RMatrix,
}

impl WeightedGraph {
    /// Wrap an exactly symmetric square weight matrix.
    pub fn new(weights: RMatrix) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "weight matrix must be square, got {}x{}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        if weights != weights.transpose() {
            return Err(Error::InvalidParameter(
                "weight matrix must be exactly symmetric".into(),
            ));
        }
        Ok(Self { weights })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    /// Weight matrix (0-indexed).
    pub fn weights(&self) -> &RMatrix {
        &self.weights
    }
}

/// One column of an oriented incidence matrix (0-indexed endpoints).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncidenceEdge {
    /// Endpoint carrying `+1` (or `2` for a self-loop).
    pub head: usize,
    /// Endpoint carrying `−1`; equal to `head` for a self-loop.
    pub tail: usize,
}

impl IncidenceEdge {
    /// `true` iff both endpoints coincide.
    pub fn is_self_loop(&self) -> bool {
        self.head == self.tail
    }
}

/// Oriented incidence matrix `M` (`n × m`) over an explicit edge ordering.
///
/// A non-loop column has one `+1` (head) and one `−1` (tail); a self-loop
/// column has a single `2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedIncidence {
    matrix: DMatrix<i32>,
    edges: Vec<IncidenceEdge>,
}

impl OrientedIncidence {
    /// Build from 0-indexed `(head, tail)` pairs; `head == tail` denotes a
    /// self-loop.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut matrix = DMatrix::<i32>::zeros(n, edges.len());
        let mut list = Vec::with_capacity(edges.len());
        for (col, &(head, tail)) in edges.iter().enumerate() {
            for v in [head, tail] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            if head == tail {
                matrix[(head, col)] = 2;
            } else {
                matrix[(head, col)] = 1;
                matrix[(tail, col)] = -1;
            }
            list.push(IncidenceEdge { head, tail });
        }
        Ok(Self {
            matrix,
            edges: list,
        })
    }

    /// Incidence matrix of the complete graph on `n` vertices with a
    /// self-loop at every vertex. Edges are ordered `(i, j)` for `i ≤ j`,
    /// row-major.
    pub fn complete_with_self_loops(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                edges.push((i, j));
            }
        }
        Self::new(n, &edges).expect("indices are in range by construction")
    }

    /// The integer matrix `M`.
    pub fn matrix(&self) -> &DMatrix<i32> {
        &self.matrix
    }

    /// Edge ordering of the columns.
    pub fn edges(&self) -> &[IncidenceEdge] {
        &self.edges
    }

    /// Per-edge weights read off a weight matrix in this incidence's edge
    /// ordering.
    pub fn edge_weights(&self, wg: &WeightedGraph) -> Result<Vec<f64>> {
        if wg.n() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "weighted graph has {} vertices, incidence has {}",
                wg.n(),
                self.matrix.nrows()
            )));
        }
        Ok(self
            .edges
            .iter()
            .map(|e| wg.weights()[(e.head, e.tail)])
            .collect())
    }
}

/// Weighted Laplacian `L = MWMᵀ` with `W = diag(weights)`.
pub fn weighted_laplacian(inc: &OrientedIncidence, weights: &[f64]) -> Result<RMatrix> {
    let m = inc.matrix();
    if weights.len() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} edges",
            weights.len(),
            m.ncols()
        )));
    }
    let mf = m.map(f64::from);
    let mut scaled = mf.clone();
    for (col, &w) in weights.iter().enumerate() {
        scaled.column_mut(col).scale_mut(w);
    }
    Ok(&scaled * mf.transpose())
}

/// Laplacian of a complete graph with self-loops computed entrywise:
/// `L_ii = Σ_k w_ik + 3w_ii`, `L_ij = −w_ij`.
pub fn complete_laplacian_direct(wg: &WeightedGraph) -> RMatrix {
    let w = wg.weights();
    let n = wg.n();
    RMatrix::from_fn(n, n, |i, j| {
        if i == j {
            w.row(i).sum() + 3.0 * w[(i, i)]
        } else {
            -w[(i, j)]
        }
    })
}

/// Edge weights whose complete-graph Laplacian reproduces a symmetric
/// Hamiltonian: `w_ij = −H̃_ij`, `w_ii = ¼ Σ_k H̃_ik`.
///
/// The input must be symmetric within `1e-10` (entrywise); it is
/// symmetrized before mapping so the output is exactly symmetric.
pub fn weights_from_hermitized(ht: &Hamiltonian) -> Result<WeightedGraph> {
    let h = ht.matrix();
    let defect = symmetry_defect(h);
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    let s = (h + h.transpose()) * 0.5;
    let n = s.nrows();
    let w = RMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.25 * s.row(i).sum()
        } else {
            -s[(i, j)]
        }
    });
    WeightedGraph::new(w)
}

impl From<WeightedGraph> for RMatrix {
    fn from(wg: WeightedGraph) -> Self {
        wg.weights
    }
}

impl WeightedGraph {
    /// The complete-graph Laplacian of these weights as a Hamiltonian.
    pub fn laplacian_hamiltonian(&self) -> Hamiltonian {
        Hamiltonian::new(complete_laplacian_direct(self), HamiltonianSource::Custom)
            .expect("weight matrix is square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff_real;

    #[test]
    fn single_edge_unit_weight() {
        let inc = OrientedIncidence::new(2, &[(0, 1)]).unwrap();
        let l = weighted_laplacian(&inc, &[1.0]).unwrap();
        assert_eq!(l, RMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.]));
    }

    #[test]
    fn single_self_loop() {
        let inc = OrientedIncidence::new(1, &[(0, 0)]).unwrap();
        let l = weighted_laplacian(&inc, &[0.7]).unwrap();
        assert!((l[(0, 0)] - 2.8).abs() < 1e-15);
        let wg = WeightedGraph::new(RMatrix::from_element(1, 1, 0.7)).unwrap();
        assert!((complete_laplacian_direct(&wg)[(0, 0)] - 2.8).abs() < 1e-15);
    }

    #[test]
    fn incidence_columns() {
        let inc = OrientedIncidence::complete_with_self_loops(3);
        assert_eq!(inc.edges().len(), 6);
        for (col, e) in inc.edges().iter().enumerate() {
            let c = inc.matrix().column(col);
            if e.is_self_loop() {
                assert_eq!(c.iter().filter(|&&x| x != 0).count(), 1);
                assert_eq!(c[e.head], 2);
            } else {
                assert_eq!(c.iter().sum::<i32>(), 0);
                assert_eq!(c[e.head], 1);
                assert_eq!(c[e.tail], -1);
            }
        }
    }

    #[test]
    fn weight_count_mismatch() {
        let inc = OrientedIncidence::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            weighted_laplacian(&inc, &[1.0, 2.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn direct_identity_weights() {
        let wg = WeightedGraph::new(RMatrix::identity(3, 3)).unwrap();
        assert_eq!(
            complete_laplacian_direct(&wg),
            RMatrix::identity(3, 3) * 4.0
        );
    }

    #[test]
    fn direct_k3() {
        let w = RMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        let wg = WeightedGraph::new(w).unwrap();
        let expected = RMatrix::from_row_slice(3, 3, &[2., -1., -1., -1., 2., -1., -1., -1., 2.]);
        assert_eq!(complete_laplacian_direct(&wg), expected);
    }

    #[test]
    fn incidence_and_direct_agree_on_complete_graph() {
        let w = RMatrix::from_row_slice(3, 3, &[0.3, -1.2, 0.5, -1.2, 2.0, 0.25, 0.5, 0.25, -0.4]);
        let wg = WeightedGraph::new(w).unwrap();
        let inc = OrientedIncidence::complete_with_self_loops(3);
        let per_edge = inc.edge_weights(&wg).unwrap();
        let l1 = weighted_laplacian(&inc, &per_edge).unwrap();
        let l2 = complete_laplacian_direct(&wg);
        assert!(max_abs_diff_real(&l1, &l2) < 1e-14);
    }

    #[test]
    fn single_vertex_inverse_map() {
        let h = Hamiltonian::custom(RMatrix::from_element(1, 1, 4.0)).unwrap();
        let wg = weights_from_hermitized(&h).unwrap();
        assert_eq!(wg.weights()[(0, 0)], 1.0);
    }

    #[test]
    fn k3_laplacian_maps_to_itself() {
        let l = RMatrix::from_row_slice(3, 3, &[2., -1., -1., -1., 2., -1., -1., -1., 2.]);
        let wg = weights_from_hermitized(&Hamiltonian::custom(l).unwrap()).unwrap();
        let expected = RMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        assert_eq!(wg.weights(), &expected);
    }

    #[test]
    fn rejects_non_symmetric() {
        let h = Hamiltonian::custom(RMatrix::from_row_slice(2, 2, &[1., 0., 1., 1.])).unwrap();
        assert!(matches!(
            weights_from_hermitized(&h),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn weighted_graph_requires_symmetry() {
        assert!(WeightedGraph::new(RMatrix::from_row_slice(2, 2, &[0., 1., 2., 0.])).is_err());
        assert!(WeightedGraph::new(RMatrix::zeros(2, 3)).is_err());
    }
}
