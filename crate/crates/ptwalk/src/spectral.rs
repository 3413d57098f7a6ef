//! Non-Hermitian spectral machinery: biorthonormal eigenbases,
//! pseudo-Hermiticity classification, the metric `η` and hermitization.
//!
//! A real matrix `H` is pseudo-Hermitian exactly when its spectrum is real
//! and it is diagonalizable. Then, with right eigenvectors `Ψ = [ψ_j]` and
//! left eigenvectors `Φ = [φ_j]` normalised so that `Φ†Ψ = I`, the metric
//! `V = ΦΦ†` is Hermitian positive definite, satisfies `VHV⁻¹ = H†`, and
//! its principal square root `η` makes `H̃ = ηHη⁻¹` Hermitian.
//!
//! # Eigenspace normalisation
//!
//! `Φ† = Ψ⁻¹` fixes `Φ` once `Ψ` is chosen, but `Ψ` itself is only defined
//! up to an invertible change of basis inside each eigenspace, and `V`
//! depends on that choice whenever an eigenvalue is repeated. This module
//! fixes it canonically and independently of the eigensolver:
//!
//! for every distinct eigenvalue `λ` with spectral projector
//! `P_λ = Ψ_λΦ_λ†`, the left block is rescaled to `Φ_λ = σ_λ Q_λ`, where
//! `Q_λ` is an orthonormal basis of the left eigenspace and `σ_λ` is the
//! smallest non-zero singular value of `P_λ`; `Ψ_λ` is replaced by its dual
//! basis. For a simple eigenvalue this is exactly the familiar choice of a
//! unit-norm right eigenvector. For a Hermitian matrix every `P_λ` is an
//! orthogonal projector, so `V = I` and `η = I`.

use std::ops::Range;

use nalgebra::linalg::{Schur, SymmetricEigen};
use serde::Serialize;

use crate::graphcore::{Hamiltonian, HamiltonianSource};
use crate::linalg::{hermitian_defect, max_abs, reciprocal_condition, symmetry_defect, to_complex};
use crate::{CMatrix, CVector, Complex, Error, RMatrix, Result};

/// `max |H − Hᵀ|` at or below which a real matrix is called Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Relative bound on `|Im λ|` for an eigenvalue to count as real:
/// `|Im λ| ≤ IMAG_TOLERANCE · max(1, |λ|)`.
pub const IMAG_TOLERANCE: f64 = 1e-9;
/// Reciprocal condition of the unit-column eigenbasis below which a matrix
/// is declared non-diagonalizable.
pub const RCOND_THRESHOLD: f64 = 1e-10;
/// `V` is singular when its smallest eigenvalue is at most this fraction
/// of its largest.
pub const SINGULAR_METRIC_RATIO: f64 = 1e-12;
/// Largest admissible `max |H̃ − H̃†|` before symmetrisation.
pub const HERMITIZE_TOLERANCE: f64 = 1e-7;
/// Relative distance below which computed eigenvalues are treated as one
/// (possibly repeated) eigenvalue.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;
/// Relative size of a singular value of `H − λI` still counted as zero when
/// extracting an eigenspace.
const NULL_SPACE_TOLERANCE: f64 = 1e-7;

/// Pseudo-Hermiticity class of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhClass {
    /// `H = Hᵀ` (within [`HERMITIAN_TOLERANCE`]).
    Hermitian,
    /// Real spectrum and diagonalizable, but not Hermitian.
    PseudoHermitian,
    /// Complex eigenvalues or not diagonalizable.
    Broken,
}

impl PhClass {
    /// Lower-case name used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            PhClass::Hermitian => "hermitian",
            PhClass::PseudoHermitian => "pseudo_hermitian",
            PhClass::Broken => "broken",
        }
    }

    /// `true` for the Hermitian and pseudo-Hermitian classes.
    pub fn admits_metric(&self) -> bool {
        !matches!(self, PhClass::Broken)
    }
}

impl std::fmt::Display for PhClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification together with its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    /// The verdict.
    pub class: PhClass,
    /// Largest `|Im λ|` over the computed spectrum.
    pub max_imag: f64,
    /// Reciprocal condition of the unit-column eigenbasis, when it was
    /// computed (it is skipped once the spectrum is found to be complex).
    pub rcond: Option<f64>,
    /// `max |H − Hᵀ|`.
    pub asymmetry: f64,
    /// Why the matrix is broken, if it is.
    pub reason: Option<String>,
}

/// Eigenvalues with right and left eigenvectors, biorthonormal
/// (`Φ†Ψ = I`) and completeness-normalised (`ΨΦ† = I`).
#[derive(Debug, Clone)]
pub struct SpectralData {
    eigenvalues: Vec<Complex>,
    right: CMatrix,
    left: CMatrix,
    condition: f64,
    blocks: Vec<Range<usize>>,
}

impl SpectralData {
    /// Eigenvalues, ascending by real part then imaginary part; repeated
    /// eigenvalues are stored with identical values.
    pub fn eigenvalues(&self) -> &[Complex] {
        &self.eigenvalues
    }

    /// Real parts of the eigenvalues.
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.re).collect()
    }

    /// Right eigenvectors `Ψ` (columns `ψ_j`).
    pub fn right_vectors(&self) -> &CMatrix {
        &self.right
    }

    /// Left eigenvectors `Φ` (columns `φ_j`), `Φ† = Ψ⁻¹`.
    pub fn left_vectors(&self) -> &CMatrix {
        &self.left
    }

    /// Reciprocal condition of the unit-column eigenbasis.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Index ranges of the distinct eigenvalues (eigenspace blocks).
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Spectral projector `P_λ = Ψ_λΦ_λ†` of eigenspace block `b`.
    pub fn projector(&self, b: usize) -> CMatrix {
        let r = self.blocks[b].clone();
        let psi = self.right.columns(r.start, r.len());
        let phi = self.left.columns(r.start, r.len());
        psi * phi.adjoint()
    }

    /// Largest `|Im λ|`.
    pub fn max_imag(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.im.abs())
            .fold(0.0, f64::max)
    }

    /// `true` iff every eigenvalue passes the real-eigenvalue tolerance.
    pub fn is_real(&self) -> bool {
        self.eigenvalues.iter().all(is_real_eigenvalue)
    }
}

fn is_real_eigenvalue(l: &Complex) -> bool {
    l.im.abs() <= IMAG_TOLERANCE * l.norm().max(1.0)
}

/// The metric operator and its square root.
#[derive(Debug, Clone)]
pub struct EtaDecomposition {
    eta: CMatrix,
    eta_inv: CMatrix,
    v: CMatrix,
    spectral: SpectralData,
}

impl EtaDecomposition {
    /// `η`, Hermitian positive definite.
    pub fn eta(&self) -> &CMatrix {
        &self.eta
    }

    /// `η⁻¹`.
    pub fn eta_inv(&self) -> &CMatrix {
        &self.eta_inv
    }

    /// `V = η² = ΦΦ†`.
    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    /// The spectral data `η` was built from.
    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    /// Real part of `η` (exact for real Hamiltonians with real spectra, up
    /// to rounding).
    pub fn eta_real(&self) -> RMatrix {
        self.eta.map(|z| z.re)
    }
}

/// Eigenvalues of a real square matrix, sorted ascending by real part,
/// then imaginary part.
///
/// The matrix is first split into the strongly connected components of its
/// off-diagonal pattern; singleton components contribute their diagonal
/// entry exactly (so every DAG Hamiltonian yields its integer diagonal),
/// larger blocks go through the real Schur form.
pub fn eigenvalues(m: &RMatrix) -> Result<Vec<Complex>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut ev = Vec::with_capacity(n);
    for comp in pattern_components(m) {
        if let [v] = comp[..] {
            ev.push(Complex::new(m[(v, v)], 0.0));
            continue;
        }
        let block = m.select_rows(&comp).select_columns(&comp);
        let max_iter = 2000 * comp.len().max(10);
        let schur = Schur::try_new(block.clone(), f64::EPSILON, max_iter)
            .or_else(|| Schur::try_new(block, 1e-14, max_iter))
            .ok_or(Error::EigenSolverFailed)?;
        ev.extend(schur.complex_eigenvalues().iter().copied());
    }
    sort_eigenvalues(&mut ev);
    Ok(ev)
}

/// Fast screen for "real spectrum and diagonalizable".
///
/// Applies the same eigenvalue clustering and null-space tolerance as
/// [`eigen_biorthonormal`], but only computes singular values of the real
/// shifted matrices, and only for repeated eigenvalues (a simple eigenvalue
/// always has a one-dimensional eigenspace). Returns `false` when the
/// spectrum is complex or some eigenvalue is defective; `true` means the
/// full decomposition is worth attempting.
pub fn real_diagonalizable_screen(m: &RMatrix) -> bool {
    let n = m.nrows();
    let ev = match eigenvalues(m) {
        Ok(ev) => ev,
        Err(_) => return false,
    };
    if !ev.iter().all(is_real_eigenvalue) {
        return false;
    }
    for r in cluster(&ev) {
        let k = r.len();
        if k < 2 {
            continue;
        }
        let mu = ev[r].iter().map(|l| l.re).sum::<f64>() / k as f64;
        let shifted = m - RMatrix::identity(n, n) * mu;
        let mut s: Vec<f64> = shifted.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        if s[n - k] > NULL_SPACE_TOLERANCE * s[0].max(1.0) {
            return false;
        }
    }
    true
}

/// Strongly connected components of the pattern of nonzero off-diagonal
/// entries (`i → j` when `m[i][j] ≠ 0`), each sorted ascending.
///
/// Ordering the indices component by component makes `m` block
/// triangular, so its spectrum is the union of the spectra of the diagonal
/// blocks.
fn pattern_components(m: &RMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && m[(i, j)] != 0.0).collect())
        .collect();
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("component on stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn sort_eigenvalues(ev: &mut [Complex]) {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Group sorted eigenvalues into clusters of numerically equal values.
fn cluster(ev: &[Complex]) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    for (i, l) in ev.iter().enumerate() {
        match out.last_mut() {
            Some(r) if (l - ev[i - 1]).norm() <= CLUSTER_TOLERANCE * l.norm().max(1.0) => {
                r.end = i + 1
            }
            _ => out.push(i..i + 1),
        }
    }
    out
}

/// Orthonormal basis of the numerical null space of `a`, requiring exactly
/// `k` (near-)zero singular values.
fn null_space(a: CMatrix, k: usize) -> Option<CMatrix> {
    let n = a.ncols();
    let svd = a.svd(false, true);
    let s = &svd.singular_values;
    let scale = s[0].max(1.0);
    if s[n - k] > NULL_SPACE_TOLERANCE * scale {
        return None;
    }
    let v_t = svd.v_t.expect("right singular vectors were requested");
    Some(v_t.rows(n - k, k).adjoint())
}

/// Biorthonormal eigendecomposition of a real square matrix.
///
/// Right eigenvectors are extracted per distinct eigenvalue as the null
/// space of `H − λI`; left eigenvectors come from `Φ† = Ψ⁻¹`; each
/// eigenspace is then normalised canonically (see the module docs).
/// Complex spectra are allowed as long as `H` is diagonalizable.
///
/// # Errors
/// [`Error::NotDiagonalizable`] when an eigenvalue's geometric multiplicity
/// is smaller than its algebraic multiplicity or the eigenbasis has
/// reciprocal condition below [`RCOND_THRESHOLD`].
pub fn eigen_biorthonormal(h: &Hamiltonian) -> Result<SpectralData> {
    let m = h.matrix();
    let n = m.nrows();
    let raw = eigenvalues(m)?;
    let blocks = cluster(&raw);
    let hc = to_complex(m);

    let mut psi = CMatrix::zeros(n, n);
    let mut centers = Vec::with_capacity(blocks.len());
    for r in &blocks {
        let k = r.len();
        let mu = raw[r.clone()].iter().sum::<Complex>() / k as f64;
        let shifted = &hc - CMatrix::identity(n, n) * mu;
        let basis = null_space(shifted, k).ok_or(Error::NotDiagonalizable { rcond: 0.0 })?;
        psi.columns_mut(r.start, k).copy_from(&basis);
        centers.push(mu);
    }

    let rcond = reciprocal_condition(&psi);
    if rcond < RCOND_THRESHOLD {
        return Err(Error::NotDiagonalizable { rcond });
    }
    let psi_inv = psi
        .clone()
        .try_inverse()
        .ok_or(Error::NotDiagonalizable { rcond })?;
    let mut phi = psi_inv.adjoint();

    for r in &blocks {
        normalise_block(&mut psi, &mut phi, r.clone());
    }

    // Rayleigh-quotient refinement of each eigenvalue: trace(Φ_λ† H Ψ_λ)/k.
    let mut ev = vec![Complex::new(0.0, 0.0); n];
    for (r, mu) in blocks.iter().zip(&centers) {
        let k = r.len();
        let p = psi.columns(r.start, k);
        let q = phi.columns(r.start, k);
        let mut lam = (q.adjoint() * &hc * p).trace() / k as f64;
        if !lam.re.is_finite() || (lam - mu).norm() > CLUSTER_TOLERANCE * mu.norm().max(1.0) {
            lam = *mu;
        }
        for slot in &mut ev[r.clone()] {
            *slot = lam;
        }
    }

    Ok(SpectralData {
        eigenvalues: ev,
        right: psi,
        left: phi,
        condition: rcond,
        blocks,
    })
}

/// Canonical normalisation of one eigenspace block (see module docs).
fn normalise_block(psi: &mut CMatrix, phi: &mut CMatrix, r: Range<usize>) {
    let k = r.len();
    let psi_b = psi.columns(r.start, k).clone_owned();
    let phi_b = phi.columns(r.start, k).clone_owned();
    let qr_phi = phi_b.qr();
    let (q2, r2) = (qr_phi.q(), qr_phi.r());
    let r1 = psi_b.clone().qr().r();
    // Non-zero singular values of P_λ = Ψ_λΦ_λ† are those of R₁R₂†.
    let sigma_min = (&r1 * r2.adjoint())
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let new_phi = q2 * Complex::new(sigma_min, 0.0);
    let new_psi = psi_b * r2.adjoint() * Complex::new(1.0 / sigma_min, 0.0);
    phi.columns_mut(r.start, k).copy_from(&new_phi);
    psi.columns_mut(r.start, k).copy_from(&new_psi);
}

/// Classify a real square matrix as Hermitian, pseudo-Hermitian or broken.
///
/// Never fails: solver failures are reported as [`PhClass::Broken`] with a
/// reason.
pub fn classify(h: &Hamiltonian) -> Classification {
    let m = h.matrix();
    let asymmetry = symmetry_defect(m);
    if asymmetry <= HERMITIAN_TOLERANCE {
        return Classification {
            class: PhClass::Hermitian,
            max_imag: 0.0,
            rcond: Some(1.0),
            asymmetry,
            reason: None,
        };
    }
    let raw = match eigenvalues(m) {
        Ok(ev) => ev,
        Err(e) => {
            return Classification {
                class: PhClass::Broken,
                max_imag: f64::NAN,
                rcond: None,
                asymmetry,
                reason: Some(e.to_string()),
            }
        }
    };
    let max_imag = raw.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
    if !raw.iter().all(is_real_eigenvalue) {
        return Classification {
            class: PhClass::Broken,
            max_imag,
            rcond: None,
            asymmetry,
            reason: Some("complex eigenvalues".into()),
        };
    }
    match eigen_biorthonormal(h) {
        Ok(sd) => Classification {
            class: PhClass::PseudoHermitian,
            max_imag,
            rcond: Some(sd.condition()),
            asymmetry,
            reason: None,
        },
        Err(e) => Classification {
            class: PhClass::Broken,
            max_imag,
            rcond: match e {
                Error::NotDiagonalizable { rcond } => Some(rcond),
                _ => None,
            },
            asymmetry,
            reason: Some(e.to_string()),
        },
    }
}

/// Build `V = ΦΦ†`, `η = √V` (principal root via Hermitian
/// eigendecomposition) and `η⁻¹`.
///
/// # Errors
/// [`Error::ComplexSpectrum`] if the spectrum is not real;
/// [`Error::SingularMetric`] if `V` is numerically singular.
pub fn build_eta(sd: &SpectralData) -> Result<EtaDecomposition> {
    if !sd.is_real() {
        return Err(Error::ComplexSpectrum {
            max_imag: sd.max_imag(),
        });
    }
    let phi = sd.left_vectors();
    let n = phi.nrows();
    let v = phi * phi.adjoint();
    let v = (&v + v.adjoint()) * Complex::new(0.5, 0.0);
    if n == 0 {
        return Ok(EtaDecomposition {
            eta: v.clone(),
            eta_inv: v.clone(),
            v,
            spectral: sd.clone(),
        });
    }
    let eig = SymmetricEigen::new(v.clone());
    let d = &eig.eigenvalues;
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= SINGULAR_METRIC_RATIO * max {
        return Err(Error::SingularMetric {
            ratio: if max > 0.0 { min / max } else { 0.0 },
        });
    }
    let q = &eig.eigenvectors;
    let scaled = |f: &dyn Fn(f64) -> f64| {
        let mut qd = q.clone();
        for (j, &dj) in d.iter().enumerate() {
            qd.column_mut(j).scale_mut(f(dj));
        }
        qd * q.adjoint()
    };
    let eta = scaled(&|x| x.sqrt());
    let eta_inv = scaled(&|x| 1.0 / x.sqrt());
    Ok(EtaDecomposition {
        eta: (&eta + eta.adjoint()) * Complex::new(0.5, 0.0),
        eta_inv: (&eta_inv + eta_inv.adjoint()) * Complex::new(0.5, 0.0),
        v,
        spectral: sd.clone(),
    })
}

/// Convenience: biorthonormal decomposition followed by [`build_eta`].
pub fn eta_for(h: &Hamiltonian) -> Result<EtaDecomposition> {
    build_eta(&eigen_biorthonormal(h)?)
}

/// `ηHη⁻¹` before symmetrisation.
pub fn similarity_transform(h: &Hamiltonian, ed: &EtaDecomposition) -> CMatrix {
    ed.eta() * to_complex(h.matrix()) * ed.eta_inv()
}

/// Hermitized Hamiltonian `H̃ = ηHη⁻¹`, returned as a real symmetric
/// matrix `(H̃ + H̃†)/2`.
///
/// # Errors
/// [`Error::NotHermitian`] if `ηHη⁻¹` deviates from a real symmetric matrix
/// by more than [`HERMITIZE_TOLERANCE`] (entrywise).
pub fn hermitize(h: &Hamiltonian, ed: &EtaDecomposition) -> Result<Hamiltonian> {
    let ht = similarity_transform(h, ed);
    let defect = hermitian_defect(&ht);
    let imag = ht.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let asymmetry = defect.max(imag);
    if asymmetry > HERMITIZE_TOLERANCE {
        return Err(Error::NotHermitian { asymmetry });
    }
    let re = ht.map(|z| z.re);
    let sym = (&re + re.transpose()) * 0.5;
    Hamiltonian::new(sym, HamiltonianSource::Hermitized)
}

/// Factors of the propagator `U(t) = B·diag(e^{−iλ_j t})·C` with `C = B⁻¹`.
#[derive(Debug, Clone)]
pub struct EvolutionFactors {
    basis: CMatrix,
    basis_inv: CMatrix,
    eigenvalues: Vec<Complex>,
    unitary: bool,
}

impl EvolutionFactors {
    /// Non-unitary factors `B = Ψ`, `C = Φ†` from spectral data.
    pub fn from_spectral(sd: &SpectralData) -> Self {
        Self {
            basis: sd.right_vectors().clone(),
            basis_inv: sd.left_vectors().adjoint(),
            eigenvalues: sd.eigenvalues().to_vec(),
            unitary: false,
        }
    }

    /// Unitary factors `B = S`, `C = Sᵀ` of a real symmetric matrix, with
    /// eigenvalues ascending.
    pub fn from_symmetric(h: &RMatrix) -> Self {
        let n = h.nrows();
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let s = RMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        let eigenvalues = order
            .iter()
            .map(|&j| Complex::new(eig.eigenvalues[j], 0.0))
            .collect();
        let basis = to_complex(&s);
        Self {
            basis_inv: basis.adjoint(),
            basis,
            eigenvalues,
            unitary: true,
        }
    }

    /// Outer factor `B`.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Inner factor `C = B⁻¹`.
    pub fn basis_inv(&self) -> &CMatrix {
        &self.basis_inv
    }

    /// Eigenvalues `λ_j` matching the columns of `B`.
    pub fn eigenvalues(&self) -> &[Complex] {
        &self.eigenvalues
    }

    /// `true` when `B` is unitary (hermitized input).
    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Diagonal phases `e^{−iλ_j t}`.
    pub fn phases(&self, t: f64) -> Vec<Complex> {
        self.eigenvalues
            .iter()
            .map(|l| (Complex::new(0.0, -t) * l).exp())
            .collect()
    }

    /// Full propagator `U(t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let mut b = self.basis.clone();
        for (j, p) in self.phases(t).into_iter().enumerate() {
            let mut col = b.column_mut(j);
            col *= p;
        }
        b * &self.basis_inv
    }

    /// Expansion coefficients `C·ψ₀` of an initial state.
    pub fn coefficients(&self, psi0: &CVector) -> CVector {
        &self.basis_inv * psi0
    }

    /// `U(t)ψ₀` given precomputed coefficients `C·ψ₀`.
    pub fn apply_coefficients(&self, coeffs: &CVector, t: f64) -> CVector {
        let phased = CVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(self.phases(t)).map(|(c, p)| c * p),
        );
        &self.basis * phased
    }

    /// `U(t)ψ₀`.
    pub fn apply(&self, psi0: &CVector, t: f64) -> CVector {
        self.apply_coefficients(&self.coefficients(psi0), t)
    }
}

/// Diagonal evolution factors of `H` (non-unitary, `ed = None`) or of
/// `H̃ = ηHη⁻¹` (unitary, `ed = Some`).
pub fn decompose_evolution(
    h: &Hamiltonian,
    ed: Option<&EtaDecomposition>,
) -> Result<EvolutionFactors> {
    match ed {
        None => Ok(EvolutionFactors::from_spectral(&eigen_biorthonormal(h)?)),
        Some(ed) => {
            let ht = hermitize(h, ed)?;
            Ok(EvolutionFactors::from_symmetric(ht.matrix()))
        }
    }
}

/// Largest entry of `|Φ†Ψ − I|` (biorthonormality residual).
pub fn biorthonormality_residual(sd: &SpectralData) -> f64 {
    let n = sd.right.nrows();
    max_abs(&(sd.left.adjoint() * &sd.right - CMatrix::identity(n, n)))
}

/// Largest entry of `|ΨΦ† − I|` (completeness residual).
pub fn completeness_residual(sd: &SpectralData) -> f64 {
    let n = sd.right.nrows();
    max_abs(&(&sd.right * sd.left.adjoint() - CMatrix::identity(n, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn g3() -> Hamiltonian {
        Hamiltonian::custom(RMatrix::from_row_slice(
            3,
            3,
            &[1., -1., -1., -1., 1., -1., 0., 0., 2.],
        ))
        .unwrap()
    }

    #[test]
    fn block_triangular_spectrum() {
        // 2-cycle {0, 1} feeding a singleton {2}: block triangular.
        let m = RMatrix::from_row_slice(3, 3, &[2., -1., 0., -1., 2., -1., 0., 0., 5.]);
        let comps = pattern_components(&m);
        assert_eq!(comps.len(), 2);
        let ev = eigenvalues(&m).unwrap();
        let re: Vec<f64> = ev.iter().map(|l| l.re).collect();
        assert!((re[0] - 1.0).abs() < 1e-12 && (re[1] - 3.0).abs() < 1e-12);
        assert_eq!(re[2], 5.0);
        // A nilpotent shift has the exact spectrum {0, 0, 0}.
        let shift = RMatrix::from_row_slice(3, 3, &[0., 1., 0., 0., 0., 1., 0., 0., 0.]);
        assert!(eigenvalues(&shift).unwrap().iter().all(|l| l.norm() == 0.0));
    }

    #[test]
    fn screen_agrees_with_decomposition() {
        assert!(real_diagonalizable_screen(g3().matrix()));
        let jordan = RMatrix::from_row_slice(2, 2, &[1., 1., 0., 1.]);
        assert!(!real_diagonalizable_screen(&jordan));
        let rot = RMatrix::from_row_slice(2, 2, &[0., -1., 1., 0.]);
        assert!(!real_diagonalizable_screen(&rot));
    }

    #[test]
    fn g3_spectrum() {
        let sd = eigen_biorthonormal(&g3()).unwrap();
        let ev = sd.real_eigenvalues();
        assert!((ev[0] - 0.0).abs() < 1e-12);
        assert!((ev[1] - 2.0).abs() < 1e-12);
        assert!((ev[2] - 2.0).abs() < 1e-12);
        assert_eq!(sd.blocks(), &[0..1, 1..3]);
        assert!(biorthonormality_residual(&sd) < 1e-12);
        assert!(completeness_residual(&sd) < 1e-12);
    }

    #[test]
    fn identity_spectrum() {
        let h = Hamiltonian::custom(RMatrix::identity(3, 3)).unwrap();
        let sd = eigen_biorthonormal(&h).unwrap();
        assert!(sd
            .real_eigenvalues()
            .iter()
            .all(|&l| (l - 1.0).abs() < 1e-14));
        // Eigenvectors span the whole space; with canonical normalisation
        // Ψ is unitary and Φ = Ψ.
        assert!(max_abs_diff(sd.right_vectors(), sd.left_vectors()) < 1e-12);
        let ed = build_eta(&sd).unwrap();
        assert!(max_abs_diff(ed.eta(), &CMatrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn jordan_block_is_not_diagonalizable() {
        let h = Hamiltonian::custom(RMatrix::from_row_slice(2, 2, &[0., 1., 0., 0.])).unwrap();
        assert!(matches!(
            eigen_biorthonormal(&h),
            Err(Error::NotDiagonalizable { .. })
        ));
        assert_eq!(classify(&h).class, PhClass::Broken);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&g3()).class, PhClass::PseudoHermitian);
        let path = Hamiltonian::custom(RMatrix::from_row_slice(
            3,
            3,
            &[1., -1., 0., -1., 2., -1., 0., -1., 1.],
        ))
        .unwrap();
        assert_eq!(classify(&path).class, PhClass::Hermitian);
        // Directed 3-cycle 1→2→3→1: H = I − P has eigenvalues 1 − ω^k.
        let cycle = Hamiltonian::custom(RMatrix::from_row_slice(
            3,
            3,
            &[1., 0., -1., -1., 1., 0., 0., -1., 1.],
        ))
        .unwrap();
        let c = classify(&cycle);
        assert_eq!(c.class, PhClass::Broken);
        assert!((c.max_imag - 3f64.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn eta_of_g3_matches_closed_form() {
        let ed = eta_for(&g3()).unwrap();
        let r2 = 2f64.sqrt();
        let expected = RMatrix::from_row_slice(
            3,
            3,
            &[
                3. + 2. * r2,
                -3. + 2. * r2,
                r2,
                -3. + 2. * r2,
                3. + 2. * r2,
                r2,
                r2,
                r2,
                5. * r2,
            ],
        ) / 6.0;
        assert!(max_abs_diff(ed.eta(), &to_complex(&expected)) < 1e-12);
    }

    #[test]
    fn hermitized_g3() {
        let h = g3();
        let ed = eta_for(&h).unwrap();
        let ht = hermitize(&h, &ed).unwrap();
        let expected =
            RMatrix::from_row_slice(3, 3, &[10., -8., -4., -8., 10., -4., -4., -4., 16.]) / 9.0;
        assert!(crate::linalg::max_abs_diff_real(ht.matrix(), &expected) < 1e-12);
        assert_eq!(ht.source(), HamiltonianSource::Hermitized);
    }

    #[test]
    fn metric_intertwines_h_and_adjoint() {
        let h = g3();
        let ed = eta_for(&h).unwrap();
        let hc = to_complex(h.matrix());
        let v_inv = ed.eta_inv() * ed.eta_inv();
        assert!(max_abs_diff(&(ed.v() * &hc * v_inv), &hc.adjoint()) < 1e-10);
        assert!(max_abs_diff(&(ed.eta() * ed.eta()), ed.v()) < 1e-12);
        // η²ψ_j = φ_j.
        let sd = ed.spectral();
        assert!(max_abs_diff(&(ed.v() * sd.right_vectors()), sd.left_vectors()) < 1e-12);
    }

    #[test]
    fn hermitian_input_gives_identity_metric() {
        let h = Hamiltonian::custom(RMatrix::from_row_slice(
            3,
            3,
            &[2., -1., -1., -1., 2., -1., -1., -1., 2.],
        ))
        .unwrap();
        let ed = eta_for(&h).unwrap();
        assert!(max_abs_diff(ed.eta(), &CMatrix::identity(3, 3)) < 1e-8);
        let ht = hermitize(&h, &ed).unwrap();
        assert!(crate::linalg::max_abs_diff_real(ht.matrix(), h.matrix()) < 1e-8);
    }

    #[test]
    fn evolution_factors_invert() {
        let h = g3();
        let f = decompose_evolution(&h, None).unwrap();
        assert!(!f.is_unitary());
        let n = 3;
        assert!(max_abs_diff(&(f.basis() * f.basis_inv()), &CMatrix::identity(n, n)) < 1e-12);
        let ed = eta_for(&h).unwrap();
        let u = decompose_evolution(&h, Some(&ed)).unwrap();
        assert!(u.is_unitary());
        assert!(max_abs_diff(&(u.basis().adjoint() * u.basis()), &CMatrix::identity(n, n)) < 1e-12);
        assert!((u.basis().determinant().norm() - 1.0).abs() < 1e-10);
        assert!(max_abs_diff(&f.propagator(0.0), &CMatrix::identity(n, n)) < 1e-12);
    }

    #[test]
    fn identity_evolution() {
        let h = Hamiltonian::custom(RMatrix::identity(2, 2)).unwrap();
        let f = decompose_evolution(&h, None).unwrap();
        assert!(f.eigenvalues().iter().all(|l| (l - 1.0).norm() < 1e-14));
        assert!(max_abs_diff(f.basis(), &CMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn complex_spectrum_rejected_by_build_eta() {
        let cycle = Hamiltonian::custom(RMatrix::from_row_slice(
            3,
            3,
            &[1., 0., -1., -1., 1., 0., 0., -1., 1.],
        ))
        .unwrap();
        let sd = eigen_biorthonormal(&cycle).unwrap();
        assert!(matches!(build_eta(&sd), Err(Error::ComplexSpectrum { .. })));
    }

    #[test]
    fn clustering() {
        let ev = [
            Complex::new(0.0, 0.0),
            Complex::new(2.0, 0.0),
            Complex::new(2.0 + 1e-9, 0.0),
            Complex::new(3.0, 0.0),
        ];
        assert_eq!(cluster(&ev), vec![0..1, 1..3, 3..4]);
    }

    #[test]
    fn empty_matrix() {
        let h = Hamiltonian::custom(RMatrix::zeros(0, 0)).unwrap();
        assert!(eigenvalues(h.matrix()).unwrap().is_empty());
        assert_eq!(classify(&h).class, PhClass::Hermitian);
    }
}
