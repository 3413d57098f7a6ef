//! Time evolution of walkers.
//!
//! Two propagation modes are supported:
//!
//! * **non-unitary** — `ψ(t) = e^{−iHt}ψ₀` with the raw graph Hamiltonian;
//!   the norm oscillates but does not grow for pseudo-Hermitian `H`;
//! * **η** — `ψ(t) = ηe^{−iHt}η⁻¹ψ₀ = e^{−iH̃t}ψ₀`, unitary.
//!
//! Both are evaluated in closed form from a cached diagonal decomposition,
//! so every sample time is exact rather than step-accumulated.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::graphcore::{Hamiltonian, HamiltonianSource};
use crate::linalg::kron_power;
use crate::numfmt::sig15;
use crate::spectral::{classify, decompose_evolution, eta_for, EtaDecomposition, EvolutionFactors};
use crate::{CMatrix, CVector, Complex, Error, RMatrix, Result};

/// Tolerance on the norm of an initial state.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// Propagation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    /// Raw `e^{−iHt}`, not norm preserving.
    Nonunitary,
    /// `e^{−iH̃t}` with `H̃ = ηHη⁻¹`, norm preserving.
    Eta,
}

impl WalkMode {
    /// Lower-case name.
    pub fn as_str(&self) -> &'static str {
        match self {
            WalkMode::Nonunitary => "nonunitary",
            WalkMode::Eta => "eta",
        }
    }
}

impl std::str::FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonunitary" | "non-unitary" => Ok(WalkMode::Nonunitary),
            "eta" => Ok(WalkMode::Eta),
            other => Err(Error::InvalidParameter(format!(
                "unknown walk mode '{other}' (expected nonunitary or eta)"
            ))),
        }
    }
}

/// Amplitude vector at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    /// Complex amplitudes over vertices (0-indexed).
    pub amplitudes: CVector,
    /// Time in atomic units.
    pub time: f64,
}

impl WalkState {
    /// State at time 0.
    pub fn new(amplitudes: CVector) -> Self {
        Self {
            amplitudes,
            time: 0.0,
        }
    }

    /// Uniform superposition `N^{−1/2} Σ_k |k⟩`.
    pub fn uniform(n: usize) -> Self {
        let a = Complex::new(1.0 / (n as f64).sqrt(), 0.0);
        Self::new(CVector::from_element(n, a))
    }

    /// Basis state `|v⟩` (0-indexed).
    pub fn basis(n: usize, v: usize) -> Self {
        let mut a = CVector::zeros(n);
        a[v] = Complex::new(1.0, 0.0);
        Self::new(a)
    }

    /// Squared moduli `|a_j|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨ψ|ψ⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }
}

fn check_unit(psi0: &WalkState, n: usize) -> Result<()> {
    if psi0.amplitudes.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for a {n}-dimensional Hamiltonian",
            psi0.amplitudes.len()
        )));
    }
    let norm = psi0.norm_sqr().sqrt();
    if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "initial state must have unit norm, got {norm}"
        )));
    }
    Ok(())
}

/// A cached propagator for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Propagator {
    factors: EvolutionFactors,
    eta: Option<(CMatrix, CMatrix)>,
    mode: WalkMode,
}

impl Propagator {
    /// Non-unitary propagator `e^{−iHt}`.
    pub fn nonunitary(h: &Hamiltonian) -> Result<Self> {
        Ok(Self {
            factors: decompose_evolution(h, None)?,
            eta: None,
            mode: WalkMode::Nonunitary,
        })
    }

    /// η propagator `e^{−iH̃t}`.
    pub fn eta(h: &Hamiltonian, ed: &EtaDecomposition) -> Result<Self> {
        Ok(Self {
            factors: decompose_evolution(h, Some(ed))?,
            eta: Some((ed.eta().clone(), ed.eta_inv().clone())),
            mode: WalkMode::Eta,
        })
    }

    /// Build for the requested mode, constructing `η` when needed.
    pub fn for_mode(h: &Hamiltonian, mode: WalkMode) -> Result<Self> {
        match mode {
            WalkMode::Nonunitary => Self::nonunitary(h),
            WalkMode::Eta => Self::eta(h, &eta_for(h)?),
        }
    }

    /// Mode of this propagator.
    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    /// Underlying diagonal factors.
    pub fn factors(&self) -> &EvolutionFactors {
        &self.factors
    }

    /// Propagator matrix at time `t`.
    pub fn matrix(&self, t: f64) -> CMatrix {
        self.factors.propagator(t)
    }

    /// Option-B form `η e^{−iHt} η⁻¹` built from the non-unitary factors of
    /// `H` (η mode only; equals [`Propagator::matrix`] mathematically).
    pub fn option_b_matrix(&self, h: &Hamiltonian, t: f64) -> Result<CMatrix> {
        let (eta, eta_inv) = self
            .eta
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("option-B propagator requires η mode".into()))?;
        let u = decompose_evolution(h, None)?.propagator(t);
        Ok(eta * u * eta_inv)
    }

    /// Evolve a state from its own time by `t`.
    pub fn evolve(&self, psi: &WalkState, t: f64) -> WalkState {
        WalkState {
            amplitudes: self.factors.apply(&psi.amplitudes, t),
            time: psi.time + t,
        }
    }
}

/// `ψ(t) = B diag(e^{−iλt}) B⁻¹ ψ₀` under the raw Hamiltonian.
pub fn evolve_nonunitary(h: &Hamiltonian, psi0: &WalkState, t: f64) -> Result<WalkState> {
    check_unit(psi0, h.dim())?;
    Ok(Propagator::nonunitary(h)?.evolve(psi0, t))
}

/// `ψ(t) = e^{−iH̃t} ψ₀`, `H̃ = ηHη⁻¹`.
pub fn evolve_eta(
    h: &Hamiltonian,
    ed: &EtaDecomposition,
    psi0: &WalkState,
    t: f64,
) -> Result<WalkState> {
    check_unit(psi0, h.dim())?;
    Ok(Propagator::eta(h, ed)?.evolve(psi0, t))
}

/// Sampled time evolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Propagation mode.
    pub mode: WalkMode,
    /// Sample times `0, dt, 2dt, … ≤ t_max`.
    pub times: Vec<f64>,
    /// Per-sample squared moduli, one inner vector per time.
    pub probabilities: Vec<Vec<f64>>,
    /// Per-sample total squared norm.
    pub totals: Vec<f64>,
}

impl Trajectory {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.probabilities.first().map_or(0, |p| p.len())
    }

    /// Write as CSV: header `t,p1,…,pn,total`, one row per sample, 15
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.n();
        let mut header = String::from("t");
        for j in 1..=n {
            header.push_str(&format!(",p{j}"));
        }
        header.push_str(",total");
        writeln!(w, "{header}")?;
        for ((t, p), total) in self.times.iter().zip(&self.probabilities).zip(&self.totals) {
            let mut row = sig15(*t);
            for x in p {
                row.push(',');
                row.push_str(&sig15(*x));
            }
            row.push(',');
            row.push_str(&sig15(*total));
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    /// CSV as a string.
    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Sample times `k·dt` for `k = 0, 1, …` while `k·dt ≤ t_max` (with a
/// relative slack of `1e-9` so that `t_max = K·dt` includes the endpoint).
pub fn sample_times(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_max >= dt) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_max must be at least dt, got t_max = {t_max}, dt = {dt}"
        )));
    }
    let steps = (t_max / dt * (1.0 + 1e-9)).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// Sample `|ψ_j(t)|²` on a regular grid, each sample from the closed form
/// at its own time.
pub fn trajectory(
    h: &Hamiltonian,
    mode: WalkMode,
    psi0: &WalkState,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory> {
    check_unit(psi0, h.dim())?;
    let times = sample_times(t_max, dt)?;
    let prop = Propagator::for_mode(h, mode)?;
    Ok(trajectory_with(&prop, psi0, &times))
}

/// Sample a trajectory with a prebuilt propagator.
pub fn trajectory_with(prop: &Propagator, psi0: &WalkState, times: &[f64]) -> Trajectory {
    let coeffs = prop.factors().coefficients(&psi0.amplitudes);
    let mut probabilities = Vec::with_capacity(times.len());
    let mut totals = Vec::with_capacity(times.len());
    for &t in times {
        let psi = prop.factors().apply_coefficients(&coeffs, t);
        let p: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
        totals.push(p.iter().sum());
        probabilities.push(p);
    }
    Trajectory {
        mode: prop.mode(),
        times: times.to_vec(),
        probabilities,
        totals,
    }
}

/// `P` distinguishable non-interacting (or interacting) walkers.
#[derive(Debug, Clone)]
pub struct MultiParticleSystem {
    particles: usize,
    base: Hamiltonian,
    interaction: Option<RMatrix>,
    composite: Hamiltonian,
    eta: Option<EtaMatrices>,
}

/// A metric and its inverse.
#[derive(Debug, Clone)]
pub struct EtaMatrices {
    /// `η`.
    pub eta: CMatrix,
    /// `η⁻¹`.
    pub eta_inv: CMatrix,
}

impl MultiParticleSystem {
    /// Particle count `P`.
    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Single-particle Hamiltonian.
    pub fn base(&self) -> &Hamiltonian {
        &self.base
    }

    /// Interaction term, if any.
    pub fn interaction(&self) -> Option<&RMatrix> {
        self.interaction.as_ref()
    }

    /// Composite Hamiltonian `H^(P)`.
    pub fn composite(&self) -> &Hamiltonian {
        &self.composite
    }

    /// Composite metric: `η^{⊗P}` without interaction, rebuilt from scratch
    /// with interaction; `None` when the base Hamiltonian is not
    /// pseudo-Hermitian.
    pub fn eta(&self) -> Option<&EtaMatrices> {
        self.eta.as_ref()
    }
}

/// Kronecker sum `H^{⊕P} = Σ_k I⊗…⊗H⊗…⊗I` (`H` in slot `k`).
pub fn kronecker_sum_matrix(h: &RMatrix, p: usize) -> RMatrix {
    let n = h.nrows();
    let dim = n.pow(p as u32);
    let mut out = RMatrix::zeros(dim, dim);
    for slot in 0..p {
        let left = n.pow(slot as u32);
        let right = n.pow((p - 1 - slot) as u32);
        let term = crate::linalg::kron(
            &crate::linalg::kron(&RMatrix::identity(left, left), h),
            &RMatrix::identity(right, right),
        );
        out += term;
    }
    out
}

/// Build the `P`-particle composite `H^(P) = H^{⊕P} + Γ_int`.
///
/// Without interaction and with a pseudo-Hermitian base, the metric is
/// `η^{⊗P}`. With interaction the composite is re-classified and its
/// metric rebuilt, since pseudo-Hermitian matrices are not closed under
/// addition.
///
/// # Errors
/// Dimension mismatch of `gamma`; a broken interacting composite.
pub fn kronecker_sum(
    h: &Hamiltonian,
    p: usize,
    gamma: Option<&RMatrix>,
) -> Result<MultiParticleSystem> {
    if p == 0 {
        return Err(Error::InvalidParameter(
            "particle count must be at least 1".into(),
        ));
    }
    let n = h.dim();
    let dim = n
        .checked_pow(p as u32)
        .ok_or_else(|| Error::InvalidParameter("composite dimension overflows".into()))?;
    let mut m = kronecker_sum_matrix(h.matrix(), p);
    let eta = match gamma {
        None => {
            let composite = Hamiltonian::new(m, HamiltonianSource::KroneckerSum)?;
            let eta = if classify(h).class.admits_metric() {
                let ed = eta_for(h)?;
                Some(EtaMatrices {
                    eta: kron_power(ed.eta(), p),
                    eta_inv: kron_power(ed.eta_inv(), p),
                })
            } else {
                None
            };
            return Ok(MultiParticleSystem {
                particles: p,
                base: h.clone(),
                interaction: None,
                composite,
                eta,
            });
        }
        Some(g) => {
            if g.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "interaction is {}x{}, expected {dim}x{dim}",
                    g.nrows(),
                    g.ncols()
                )));
            }
            m += g;
            let composite = Hamiltonian::new(m.clone(), HamiltonianSource::KroneckerSum)?;
            let c = classify(&composite);
            if !c.class.admits_metric() {
                return Err(match c.rcond {
                    Some(rcond) if c.max_imag <= crate::spectral::IMAG_TOLERANCE => {
                        Error::NotDiagonalizable { rcond }
                    }
                    _ => Error::ComplexSpectrum {
                        max_imag: c.max_imag,
                    },
                });
            }
            let ed = eta_for(&composite)?;
            Some(EtaMatrices {
                eta: ed.eta().clone(),
                eta_inv: ed.eta_inv().clone(),
            })
        }
    };
    Ok(MultiParticleSystem {
        particles: p,
        base: h.clone(),
        interaction: gamma.cloned(),
        composite: Hamiltonian::new(m, HamiltonianSource::KroneckerSum)?,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_defect, to_complex};
    use std::f64::consts::PI;

    fn g3() -> Hamiltonian {
        crate::graphcore::hamiltonian(&crate::fixtures::g3())
    }

    #[test]
    fn nonunitary_norm_closed_form() {
        let h = g3();
        let psi0 = WalkState::uniform(3);
        for &t in &[0.0, 0.3, 1.0, 2.5, 10.0] {
            let s = evolve_nonunitary(&h, &psi0, t).unwrap();
            assert!(
                (s.norm_sqr() - (2.0 - (2.0 * t).cos())).abs() < 1e-10,
                "t = {t}"
            );
        }
    }

    #[test]
    fn source_vertex_probability_is_constant() {
        let h = g3();
        let psi0 = WalkState::basis(3, 2);
        for &t in &[0.1, 1.0, 7.0] {
            let s = evolve_nonunitary(&h, &psi0, t).unwrap();
            assert!((s.amplitudes[2].norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eta_walk_closed_form() {
        let h = g3();
        let ed = eta_for(&h).unwrap();
        let psi0 = WalkState::uniform(3);
        for &t in &[0.0, 0.4, 1.0, 3.3] {
            let s = evolve_eta(&h, &ed, &psi0, t).unwrap();
            let p = s.probabilities();
            let c = (2.0 * t).cos();
            assert!((p[2] - (41.0 + 40.0 * c) / 243.0).abs() < 1e-10);
            assert!((p[0] - (101.0 - 20.0 * c) / 243.0).abs() < 1e-10);
            assert!((p[1] - p[0]).abs() < 1e-12);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let h = g3();
        let ed = eta_for(&h).unwrap();
        let psi0 = WalkState::uniform(3);
        let a = evolve_eta(&h, &ed, &psi0, 0.0).unwrap();
        let b = evolve_nonunitary(&h, &psi0, 0.0).unwrap();
        assert!((&a.amplitudes - &psi0.amplitudes).norm() < 1e-12);
        assert!((&b.amplitudes - &psi0.amplitudes).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_unit_state() {
        let h = g3();
        let s = WalkState::new(CVector::from_element(3, Complex::new(1.0, 0.0)));
        assert!(evolve_nonunitary(&h, &s, 1.0).is_err());
    }

    #[test]
    fn trajectory_grid() {
        let h = g3();
        let psi0 = WalkState::uniform(3);
        let tr = trajectory(&h, WalkMode::Nonunitary, &psi0, 0.5, 0.5).unwrap();
        assert_eq!(tr.times, vec![0.0, 0.5]);
        let tr = trajectory(&h, WalkMode::Nonunitary, &psi0, PI, PI / 100.0).unwrap();
        assert_eq!(tr.times.len(), 101);
        let mid = tr.totals[50];
        assert!((mid - 3.0).abs() < 1e-10);
        assert!(trajectory(&h, WalkMode::Eta, &psi0, 1.0, 0.0).is_err());
        assert!(trajectory(&h, WalkMode::Eta, &psi0, 0.1, 0.2).is_err());
    }

    #[test]
    fn eta_trajectory_equal_vertices() {
        let h = g3();
        let tr = trajectory(&h, WalkMode::Eta, &WalkState::uniform(3), PI, PI / 100.0).unwrap();
        for (p, total) in tr.probabilities.iter().zip(&tr.totals) {
            assert!((p[0] - p[1]).abs() < 1e-10);
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_layout() {
        let h = g3();
        let tr = trajectory(&h, WalkMode::Eta, &WalkState::uniform(3), 1.0, 0.5).unwrap();
        let csv = tr.to_csv_string();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,p1,p2,p3,total");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0.33333333333333"), "{}", lines[1]);
    }

    #[test]
    fn two_particle_spectrum_and_metric() {
        let h = g3();
        let sys = kronecker_sum(&h, 2, None).unwrap();
        assert_eq!(sys.composite().dim(), 9);
        let mut ev = crate::spectral::eigen_biorthonormal(sys.composite())
            .unwrap()
            .real_eigenvalues();
        ev.sort_by(f64::total_cmp);
        let expected = [0., 2., 2., 2., 2., 4., 4., 4., 4.];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-8);
        }
        let eta = sys.eta().unwrap();
        let ht = &eta.eta * to_complex(sys.composite().matrix()) * &eta.eta_inv;
        assert!(hermitian_defect(&ht) < 1e-10);
    }

    #[test]
    fn single_particle_is_identity_construction() {
        let h = g3();
        let sys = kronecker_sum(&h, 1, None).unwrap();
        assert_eq!(sys.composite().matrix(), h.matrix());
        let ed = eta_for(&h).unwrap();
        assert!(crate::linalg::max_abs_diff(&sys.eta().unwrap().eta, ed.eta()) < 1e-14);
    }

    #[test]
    fn interaction_dimension_checked() {
        let h = g3();
        assert!(kronecker_sum(&h, 2, Some(&RMatrix::zeros(3, 3))).is_err());
        assert!(kronecker_sum(&h, 0, None).is_err());
        let sys = kronecker_sum(&h, 2, Some(&RMatrix::identity(9, 9))).unwrap();
        assert!(sys.eta().is_some());
        assert!(sys.interaction().is_some());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("eta".parse::<WalkMode>().unwrap(), WalkMode::Eta);
        assert_eq!(
            "nonunitary".parse::<WalkMode>().unwrap(),
            WalkMode::Nonunitary
        );
        assert!("foo".parse::<WalkMode>().is_err());
    }
}
