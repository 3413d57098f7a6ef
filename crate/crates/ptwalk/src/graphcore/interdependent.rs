//! Interdependent networks: two component graphs coupled through an
//! interconnection matrix `B₀`.
//!
//! The composite Hamiltonian is
//!
//! ```text
//! H = [[ 𝓗₁,  −B₀ ],
//!      [ −B₀ᵀ, 𝓗₂ ]]
//! ```
//!
//! with `𝓗₁ = H₁ + diag(row sums of B₀)` and
//! `𝓗₂ = H₂ + diag(column sums of B₀)`.
//!
//! Sufficient conditions for `H` to be pseudo-Hermitian when `H₁`, `H₂` are:
//! (a) `B₀` pseudo-Hermitian, (b) `B₀` degree-regular with degree `c`,
//! (c) `H₁B₀ = B₀H₂`, (d) `H₂B₀ᵀ = B₀ᵀH₁`. They are not necessary.

use serde::Serialize;

use super::{hamiltonian, DirectedGraph, Hamiltonian, HamiltonianSource};
use crate::linalg::max_abs_diff_real;
use crate::spectral::{classify, PhClass};
use crate::{Error, RMatrix, Result};

/// Tolerance for the commutation conditions (c) and (d).
pub const COMMUTATION_TOLERANCE: f64 = 1e-10;

/// Two component Hamiltonians and their 0/1 interconnection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InterdependentSpec {
    h1: RMatrix,
    h2: RMatrix,
    b0: RMatrix,
}

impl InterdependentSpec {
    /// Build from component Hamiltonians `H₁` (`n₁×n₁`), `H₂` (`n₂×n₂`)
    /// and `B₀` (`n₁×n₂`, entries in {0, 1}).
    pub fn new(h1: RMatrix, h2: RMatrix, b0: RMatrix) -> Result<Self> {
        if !h1.is_square() || !h2.is_square() {
            return Err(Error::DimensionMismatch(
                "component Hamiltonians must be square".into(),
            ));
        }
        if b0.shape() != (h1.nrows(), h2.nrows()) {
            return Err(Error::DimensionMismatch(format!(
                "B0 is {}x{}, expected {}x{}",
                b0.nrows(),
                b0.ncols(),
                h1.nrows(),
                h2.nrows()
            )));
        }
        if b0.iter().any(|&x| x != 0.0 && x != 1.0) {
            return Err(Error::InvalidParameter(
                "interconnection entries must be 0 or 1".into(),
            ));
        }
        Ok(Self { h1, h2, b0 })
    }

    /// Build from two directed graphs using their graph Hamiltonians.
    pub fn from_graphs(g1: &DirectedGraph, g2: &DirectedGraph, b0: RMatrix) -> Result<Self> {
        Self::new(
            hamiltonian(g1).matrix().clone(),
            hamiltonian(g2).matrix().clone(),
            b0,
        )
    }

    /// First component Hamiltonian.
    pub fn h1(&self) -> &RMatrix {
        &self.h1
    }

    /// Second component Hamiltonian.
    pub fn h2(&self) -> &RMatrix {
        &self.h2
    }

    /// Interconnection matrix.
    pub fn b0(&self) -> &RMatrix {
        &self.b0
    }

    /// Common row/column sum of `B₀` if it is degree-regular.
    pub fn degree(&self) -> Option<f64> {
        let rows: Vec<f64> = self.b0.row_iter().map(|r| r.sum()).collect();
        let cols: Vec<f64> = self.b0.column_iter().map(|c| c.sum()).collect();
        let c = *rows.first().or(cols.first())?;
        rows.iter().chain(cols.iter()).all(|&x| x == c).then_some(c)
    }
}

/// Block Hamiltonian of the interdependent network.
pub fn build_interdependent(spec: &InterdependentSpec) -> Hamiltonian {
    let n1 = spec.h1.nrows();
    let n2 = spec.h2.nrows();
    let mut m = RMatrix::zeros(n1 + n2, n1 + n2);
    m.view_mut((0, 0), (n1, n1)).copy_from(&spec.h1);
    m.view_mut((n1, n1), (n2, n2)).copy_from(&spec.h2);
    m.view_mut((0, n1), (n1, n2)).copy_from(&(-&spec.b0));
    m.view_mut((n1, 0), (n2, n1))
        .copy_from(&(-spec.b0.transpose()));
    for i in 0..n1 {
        m[(i, i)] += spec.b0.row(i).sum();
    }
    for j in 0..n2 {
        m[(n1 + j, n1 + j)] += spec.b0.column(j).sum();
    }
    Hamiltonian::new(m, HamiltonianSource::Interdependent).expect("block matrix is square")
}

/// Outcome of checking the sufficient conditions of the interdependent
/// pseudo-Hermiticity theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    /// (a) `B₀` has real spectrum and is diagonalizable; `None` when `B₀`
    /// is not square and the condition does not apply.
    pub b0_pseudo_hermitian: Option<bool>,
    /// (b) all row and column sums of `B₀` equal a common `c`.
    pub degree_regular: bool,
    /// The common degree `c` when (b) holds.
    pub degree: Option<f64>,
    /// (c) `H₁B₀ = B₀H₂` within tolerance.
    pub commutes_h1_b0: bool,
    /// (d) `H₂B₀ᵀ = B₀ᵀH₁` within tolerance.
    pub commutes_h2_b0t: bool,
    /// All applicable conditions hold. `true` guarantees pseudo-Hermiticity
    /// of the composite (given pseudo-Hermitian components); `false` makes
    /// no claim.
    pub verdict: bool,
}

/// Evaluate the four sufficient conditions.
pub fn check_interdependent_theorem(spec: &InterdependentSpec) -> TheoremReport {
    let b0 = &spec.b0;
    let b0_pseudo_hermitian = b0.is_square().then(|| {
        let h = Hamiltonian::custom(b0.clone()).expect("square");
        matches!(
            classify(&h).class,
            PhClass::Hermitian | PhClass::PseudoHermitian
        )
    });
    let degree = spec.degree();
    let c1 = max_abs_diff_real(&(&spec.h1 * b0), &(b0 * &spec.h2)) <= COMMUTATION_TOLERANCE;
    let b0t = b0.transpose();
    let c2 = max_abs_diff_real(&(&spec.h2 * &b0t), &(&b0t * &spec.h1)) <= COMMUTATION_TOLERANCE;
    let verdict = b0_pseudo_hermitian.unwrap_or(true) && degree.is_some() && c1 && c2;
    TheoremReport {
        b0_pseudo_hermitian,
        degree_regular: degree.is_some(),
        degree,
        commutes_h1_b0: c1,
        commutes_h2_b0t: c2,
        verdict,
    }
}
