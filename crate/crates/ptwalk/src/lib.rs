//! Vertex centrality on directed graphs via pseudo-Hermitian continuous-time
//! quantum walks.
//!
//! A directed graph yields a non-Hermitian Hamiltonian `H = (D_out − A)ᵀ`.
//! Whenever `H` has a real spectrum and a complete eigenbasis it is
//! *pseudo-Hermitian*: there is a positive-definite metric `η` such that
//! `H̃ = ηHη⁻¹` is Hermitian. A walker evolving under `H̃` conserves
//! probability, and its infinite-time average occupation defines a
//! centrality measure (η-CTQW) that can be compared with classical PageRank
//! and eigenvector centrality.
//!
//! Module map:
//!
//! * [`graphcore`] — directed and weighted graphs, Hamiltonians, weighted
//!   Laplacians, the directed → weighted-complete-graph mapping,
//!   interdependent networks, graph file formats.
//! * [`spectral`] — biorthonormal eigendecomposition, classification,
//!   metric `η`, hermitization, evolution factors.
//! * [`walk`] — non-unitary and η walks, trajectories, multi-particle
//!   Kronecker sums.
//! * [`centrality`] — η-CTQW, CTQW, PageRank, eigenvector centrality and a
//!   quadrature oracle.
//! * [`randnet`] — seeded Erdős–Rényi and Barabási–Albert generators
//!   filtered for pseudo-Hermiticity.
//! * [`stats`] — Kendall and Vigna rank correlations, top-k Jaccard
//!   agreement, Agresti–Coull intervals and ensemble aggregation.
//!
//! Numerical work is carried out in `f64`; the aliases below name the
//! concrete types used at every public boundary. The rank statistics in
//! [`stats`] are generic over any [`num_traits::Float`].
//!
//! ```
//! use ptwalk::{centrality, fixtures, graphcore, spectral};
//!
//! let g = fixtures::g3();
//! let h = graphcore::hamiltonian(&g);
//! let sd = spectral::eigen_biorthonormal(&h).unwrap();
//! let ed = spectral::build_eta(&sd).unwrap();
//! let scores = centrality::eta_ctqw_centrality(&h, &ed).unwrap();
//! assert!((scores.scores()[2] - 41.0 / 243.0).abs() < 1e-10);
//! ```

// Negated float comparisons (`!(x > 0.0)`) are used deliberately so that
// NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centrality;
pub mod error;
pub mod fixtures;
pub mod graphcore;
pub mod linalg;
pub mod numfmt;
pub mod randnet;
pub mod spectral;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};

/// Real scalar used for all numerical work.
pub type Real = f64;
/// Complex scalar used for amplitudes, eigenvalues and eigenvectors.
pub type Complex = num_complex::Complex<Real>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<Real>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<Complex>;
/// Dense real column vector.
pub type RVector = nalgebra::DVector<Real>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex>;
