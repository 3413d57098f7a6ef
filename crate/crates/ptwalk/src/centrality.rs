//! Vertex centrality measures.
//!
//! * **η-CTQW** — infinite-time average of `|⟨j|e^{−iH̃t}ψ₀⟩|²` for the
//!   uniform initial state `ψ₀ = N^{−1/2} Σ_k |k⟩`, `H̃ = ηHη⁻¹`.
//! * **CTQW** — the same average for the non-unitary walk `e^{−iHt}ψ₀`,
//!   normalised by the time-averaged total norm.
//! * **PageRank** — damped random surfer, dangling rows redistributed
//!   uniformly.
//! * **Eigenvector** — principal eigenvector of `Aᵀ` (in-link based),
//!   L1-normalised.
//!
//! The quantum averages are evaluated exactly: writing
//! `ψ(t) = Σ_λ e^{−iλt} P_λψ₀` with spectral projectors `P_λ` of the
//! distinct eigenvalues, the cross terms average out and
//! `⟨|ψ_j|²⟩ = Σ_λ |(P_λψ₀)_j|²`.

use serde::{Deserialize, Serialize};

use crate::graphcore::{hamiltonian, DirectedGraph, Hamiltonian};
use crate::spectral::{
    eigen_biorthonormal, eigenvalues, hermitize, EtaDecomposition, EvolutionFactors, SpectralData,
};
use crate::stats::rank_order;
use crate::walk::{sample_times, trajectory_with, Propagator, WalkMode, WalkState};
use crate::{CVector, Complex, Error, RMatrix, Result};

/// Absolute tolerance for treating two eigenvalues as equal when grouping
/// the infinite-time average.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;
/// Scores within this distance are tied in rankings.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Centrality method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Unitary walk under `H̃ = ηHη⁻¹`.
    EtaCtqw,
    /// Non-unitary walk under `H`, normalised.
    Ctqw,
    /// Damped PageRank.
    Pagerank,
    /// Principal in-link eigenvector.
    Eigenvector,
}

impl Method {
    /// Every method, in canonical order.
    pub const ALL: [Method; 4] = [
        Method::EtaCtqw,
        Method::Ctqw,
        Method::Pagerank,
        Method::Eigenvector,
    ];

    /// Lower-case name.
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::EtaCtqw => "eta_ctqw",
            Method::Ctqw => "ctqw",
            Method::Pagerank => "pagerank",
            Method::Eigenvector => "eigenvector",
        }
    }

    /// `true` for the quantum walk measures, which need a pseudo-Hermitian
    /// Hamiltonian.
    pub fn is_quantum(&self) -> bool {
        matches!(self, Method::EtaCtqw | Method::Ctqw)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eta_ctqw" | "eta-ctqw" | "eta" => Ok(Method::EtaCtqw),
            "ctqw" => Ok(Method::Ctqw),
            "pagerank" => Ok(Method::Pagerank),
            "eigenvector" => Ok(Method::Eigenvector),
            other => Err(Error::InvalidParameter(format!(
                "unknown method '{other}' (expected eta_ctqw, ctqw, pagerank or eigenvector)"
            ))),
        }
    }
}

/// Parse a comma-separated method list; `all` selects every method.
pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    if s.trim() == "all" {
        return Ok(Method::ALL.to_vec());
    }
    let mut out: Vec<Method> = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("no methods selected".into()));
    }
    Ok(out)
}

/// Nonnegative per-vertex scores and the induced ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityScores {
    method: Method,
    scores: Vec<f64>,
    order: Vec<usize>,
    ranks: Vec<usize>,
    degenerate: bool,
}

impl CentralityScores {
    /// Wrap raw scores, computing the ranking.
    pub fn new(method: Method, scores: Vec<f64>, degenerate: bool) -> Self {
        let order = rank_order(&scores, TIE_TOLERANCE);
        let mut ranks = vec![0; scores.len()];
        // Competition ranking: tied vertices share the best position.
        let mut pos = 0;
        while pos < order.len() {
            let mut end = pos + 1;
            while end < order.len()
                && (scores[order[end - 1]] - scores[order[end]]).abs() <= TIE_TOLERANCE
            {
                end += 1;
            }
            for &v in &order[pos..end] {
                ranks[v] = pos + 1;
            }
            pos = end;
        }
        Self {
            method,
            scores,
            order,
            ranks,
            degenerate,
        }
    }

    /// Method tag.
    pub fn method(&self) -> Method {
        self.method
    }

    /// Scores, indexed by 0-based vertex.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Vertices (0-based) sorted by decreasing score; ties (within
    /// [`TIE_TOLERANCE`]) by ascending index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based competition rank of each vertex (tied vertices share a rank).
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Groups of tied vertices in rank order.
    pub fn tie_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &v in &self.order {
            match groups.last_mut() {
                Some(g) if self.ranks[g[0]] == self.ranks[v] => g.push(v),
                _ => groups.push(vec![v]),
            }
        }
        groups
    }

    /// `true` when the method fell back to a uniform answer (eigenvector
    /// centrality of a graph whose adjacency matrix has spectral radius 0).
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

fn normalise(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        for x in &mut v {
            *x /= total;
        }
    }
    v
}

/// Ranges of equal values (within [`DEGENERACY_TOLERANCE`]) in an
/// ascending list.
fn degenerate_groups(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out: Vec<std::ops::Range<usize>> = Vec::new();
    for i in 0..values.len() {
        match out.last_mut() {
            Some(r) if (values[i] - values[i - 1]).abs() <= DEGENERACY_TOLERANCE => r.end = i + 1,
            _ => out.push(i..i + 1),
        }
    }
    out
}

/// Infinite-time average of `|⟨j|Σ_n e^{−iλ_n t} b_n c_n⟩|²` given factors
/// `U(t) = B diag(e^{−iλt}) C` with real, ascending eigenvalues.
fn time_average(factors: &EvolutionFactors, psi0: &CVector) -> Vec<f64> {
    let n = psi0.len();
    let lam: Vec<f64> = factors.eigenvalues().iter().map(|l| l.re).collect();
    let coeffs = factors.coefficients(psi0);
    let b = factors.basis();
    let mut avg = vec![0.0; n];
    for g in degenerate_groups(&lam) {
        for (j, slot) in avg.iter_mut().enumerate() {
            let amp: Complex = g.clone().map(|k| b[(j, k)] * coeffs[k]).sum();
            *slot += amp.norm_sqr();
        }
    }
    avg
}

/// η-CTQW centrality: exact infinite-time average of the unitary walk
/// under `H̃` from the uniform superposition.
pub fn eta_ctqw_centrality(h: &Hamiltonian, ed: &EtaDecomposition) -> Result<CentralityScores> {
    let ht = hermitize(h, ed)?;
    let factors = EvolutionFactors::from_symmetric(ht.matrix());
    let psi0 = WalkState::uniform(h.dim()).amplitudes;
    Ok(CentralityScores::new(
        Method::EtaCtqw,
        normalise(time_average(&factors, &psi0)),
        false,
    ))
}

/// CTQW centrality from precomputed spectral data.
pub fn ctqw_centrality_from(sd: &SpectralData) -> Result<CentralityScores> {
    if !sd.is_real() {
        return Err(Error::ComplexSpectrum {
            max_imag: sd.max_imag(),
        });
    }
    let factors = EvolutionFactors::from_spectral(sd);
    let psi0 = WalkState::uniform(sd.right_vectors().nrows()).amplitudes;
    Ok(CentralityScores::new(
        Method::Ctqw,
        normalise(time_average(&factors, &psi0)),
        false,
    ))
}

/// CTQW centrality: exact infinite-time average of the non-unitary walk
/// under `H`, normalised by the averaged total norm.
///
/// # Errors
/// Complex spectra or non-diagonalizable `H`.
pub fn ctqw_centrality(h: &Hamiltonian) -> Result<CentralityScores> {
    ctqw_centrality_from(&eigen_biorthonormal(h)?)
}

/// Quadrature oracle for the quantum time averages: trapezoidal average
/// over `[0, t_max]` on the grid `0, dt, …` (η mode: per-vertex squared
/// moduli; non-unitary mode: per-vertex average divided by the averaged
/// total norm). Uses the uniform initial state.
pub fn ctqw_centrality_quadrature(
    h: &Hamiltonian,
    mode: WalkMode,
    t_max: f64,
    dt: f64,
) -> Result<CentralityScores> {
    let times = sample_times(t_max, dt)?;
    let prop = Propagator::for_mode(h, mode)?;
    let psi0 = WalkState::uniform(h.dim());
    let tr = trajectory_with(&prop, &psi0, &times);
    let n = h.dim();
    let mut acc = vec![0.0; n];
    let last = times.len() - 1;
    for (k, p) in tr.probabilities.iter().enumerate() {
        let w = if k == 0 || k == last { 0.5 } else { 1.0 };
        for (a, x) in acc.iter_mut().zip(p) {
            *a += w * x;
        }
    }
    let span = times[last];
    let avg: Vec<f64> = if span > 0.0 {
        acc.iter().map(|a| a * dt / span).collect()
    } else {
        tr.probabilities[0].clone()
    };
    let method = match mode {
        WalkMode::Eta => Method::EtaCtqw,
        WalkMode::Nonunitary => Method::Ctqw,
    };
    Ok(CentralityScores::new(method, normalise(avg), false))
}

/// PageRank parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    /// Damping factor in `[0, 1]`.
    pub alpha: f64,
    /// Convergence threshold on the L1 change between iterates.
    pub tolerance: f64,
    /// Iteration budget.
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            alpha: 0.85,
            tolerance: 1e-12,
            max_iterations: 100_000,
        }
    }
}

/// One PageRank step `(1−α)/N + α Mᵀp` with dangling rows uniform.
fn pagerank_step(g: &DirectedGraph, out_deg: &[usize], alpha: f64, p: &[f64]) -> Vec<f64> {
    let n = g.n();
    let nf = n as f64;
    let dangling: f64 = p
        .iter()
        .zip(out_deg)
        .filter(|(_, &d)| d == 0)
        .map(|(x, _)| x)
        .sum();
    let base = (1.0 - alpha) / nf + alpha * dangling / nf;
    let mut next = vec![base; n];
    for &(s, t) in g.edges() {
        next[t] += alpha * p[s] / out_deg[s] as f64;
    }
    next
}

/// PageRank by power iteration from the uniform vector.
///
/// # Errors
/// [`Error::NoConvergence`] if the L1 change stays above the tolerance for
/// `max_iterations` steps; [`Error::InvalidParameter`] for `α ∉ [0, 1]`.
pub fn pagerank(g: &DirectedGraph, params: &PageRankParams) -> Result<CentralityScores> {
    if !(0.0..=1.0).contains(&params.alpha) {
        return Err(Error::InvalidParameter(format!(
            "damping factor must lie in [0, 1], got {}",
            params.alpha
        )));
    }
    let n = g.n();
    let out_deg = g.out_degrees();
    let mut p = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iterations {
        let next = pagerank_step(g, &out_deg, params.alpha, &p);
        residual = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if residual < params.tolerance {
            return Ok(CentralityScores::new(Method::Pagerank, normalise(p), false));
        }
    }
    Err(Error::NoConvergence {
        iterations: params.max_iterations,
        residual,
    })
}

/// L1 change produced by one further PageRank iteration from `scores`.
pub fn pagerank_fixed_point_residual(g: &DirectedGraph, alpha: f64, scores: &[f64]) -> f64 {
    let next = pagerank_step(g, &g.out_degrees(), alpha, scores);
    next.iter().zip(scores).map(|(a, b)| (a - b).abs()).sum()
}

/// Spectral radius below which the adjacency matrix is treated as
/// nilpotent.
const NILPOTENT_TOLERANCE: f64 = 1e-9;

/// Eigenvector centrality: principal eigenvector of `Aᵀ` (eigenvalue of
/// largest real part), sign-fixed, clamped at zero and L1-normalised.
///
/// If the principal eigenvalue is (numerically) zero — e.g. any acyclic
/// graph — the result is uniform and flagged degenerate. If the principal
/// eigenspace has dimension above one, the uniform vector is projected
/// onto it to obtain a deterministic representative.
pub fn eigenvector_centrality(g: &DirectedGraph) -> Result<CentralityScores> {
    let n = g.n();
    let uniform = vec![1.0 / n as f64; n];
    if n == 1 {
        return Ok(CentralityScores::new(Method::Eigenvector, vec![1.0], false));
    }
    let at = g.adjacency().transpose();
    let ev = eigenvalues(&at)?;
    let rho = ev.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if rho <= NILPOTENT_TOLERANCE {
        return Ok(CentralityScores::new(Method::Eigenvector, uniform, true));
    }
    let shifted = &at - RMatrix::identity(n, n) * rho;
    let svd = shifted.svd(false, true);
    let s = &svd.singular_values;
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let tol = 1e-8 * rho.max(1.0);
    let dim = s.iter().filter(|&&x| x <= tol).count().max(1);
    let basis = v_t.rows(n - dim, dim).transpose();
    let mut x: Vec<f64> = if dim == 1 {
        basis.column(0).iter().copied().collect()
    } else {
        let u = nalgebra::DVector::from_element(n, 1.0);
        let proj = &basis * (basis.transpose() * u);
        proj.iter().copied().collect()
    };
    let sum: f64 = x.iter().sum();
    let sign = if sum.abs() > 1e-12 {
        sum.signum()
    } else {
        let (i, _) = x
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("n > 0");
        x[i].signum()
    };
    for v in &mut x {
        *v = (*v * sign).max(0.0);
        if *v < 1e-14 {
            *v = 0.0;
        }
    }
    let total: f64 = x.iter().sum();
    if !(total > 0.0) {
        return Ok(CentralityScores::new(Method::Eigenvector, uniform, true));
    }
    Ok(CentralityScores::new(
        Method::Eigenvector,
        normalise(x),
        dim > 1,
    ))
}

/// Everything needed to evaluate any method on one graph.
#[derive(Debug, Clone)]
pub struct GraphAnalysis {
    /// The graph.
    pub graph: DirectedGraph,
    /// Its Hamiltonian.
    pub hamiltonian: Hamiltonian,
    /// Metric decomposition, or the reason it could not be built.
    pub eta: Result<EtaDecomposition>,
}

impl GraphAnalysis {
    /// Analyse a graph; `eta` holds the error if `H` is not
    /// pseudo-Hermitian.
    pub fn new(g: &DirectedGraph) -> Self {
        let h = hamiltonian(g);
        let eta = eigen_biorthonormal(&h).and_then(|sd| crate::spectral::build_eta(&sd));
        Self {
            graph: g.clone(),
            hamiltonian: h,
            eta,
        }
    }

    /// Evaluate one method.
    pub fn scores(&self, method: Method) -> Result<CentralityScores> {
        match method {
            Method::EtaCtqw => eta_ctqw_centrality(&self.hamiltonian, self.require_eta()?),
            Method::Ctqw => ctqw_centrality_from(self.require_eta()?.spectral()),
            Method::Pagerank => pagerank(&self.graph, &PageRankParams::default()),
            Method::Eigenvector => eigenvector_centrality(&self.graph),
        }
    }

    fn require_eta(&self) -> Result<&EtaDecomposition> {
        self.eta.as_ref().map_err(Clone::clone)
    }
}

/// Evaluate one method on a graph.
pub fn centrality(g: &DirectedGraph, method: Method) -> Result<CentralityScores> {
    GraphAnalysis::new(g).scores(method)
}
