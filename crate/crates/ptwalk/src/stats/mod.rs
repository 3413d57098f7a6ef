//! Rank-agreement statistics.
//!
//! * [`kendall_tau`] — Kendall's τ_b (tie-corrected).
//! * [`vigna_tau`] — Vigna's weighted τ with additive hyperbolic weights.
//! * [`jaccard_topk`] — overlap of the `k` highest-ranked vertices.
//! * [`agresti_coull`] — 95% binomial confidence interval.
//! * [`ensemble`] — ensemble runner and aggregate report.
//!
//! The correlation and set statistics are generic over any
//! [`num_traits::Float`] score type. Two scores are tied when they differ by
//! at most [`TIE_TOLERANCE`].

pub mod ensemble;

pub use ensemble::{run_ensemble, EnsembleOptions, EnsembleReport};

use num_traits::Float;
use serde::Serialize;

use crate::{Error, Result};

/// Scores closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Normal quantile used by [`agresti_coull`].
pub const Z_95: f64 = 1.96;

fn tol<T: Float>() -> T {
    T::from(TIE_TOLERANCE).expect("tolerance representable")
}

/// Vertices sorted by decreasing score. Runs of scores whose consecutive
/// differences are at most `tie_tol` form tie groups, ordered internally by
/// ascending index. NaN scores sort last.
pub fn rank_order<T: Float>(scores: &[T], tie_tol: T) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        let (x, y) = (scores[a], scores[b]);
        match (x.is_nan(), y.is_nan()) {
            (true, true) => a.cmp(&b),
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            _ => y.partial_cmp(&x).expect("non-NaN").then(a.cmp(&b)),
        }
    });
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    for i in 1..=idx.len() {
        let boundary = i == idx.len() || !((scores[idx[i - 1]] - scores[idx[i]]).abs() <= tie_tol);
        if boundary {
            let mut group = idx[start..i].to_vec();
            group.sort_unstable();
            out.extend(group);
            start = i;
        }
    }
    out
}

/// Zero-based average ranks by decreasing score: the highest score has
/// rank 0 and a tie group occupying positions `p..p+m` shares rank
/// `p + (m−1)/2`.
pub fn average_ranks<T: Float>(scores: &[T]) -> Vec<f64> {
    let order = rank_order(scores, tol::<T>());
    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || !((scores[order[i - 1]] - scores[order[i]]).abs() <= tol::<T>()) {
            let r = start as f64 + (i - start - 1) as f64 / 2.0;
            for &v in &order[start..i] {
                ranks[v] = r;
            }
            start = i;
        }
    }
    ranks
}

/// Which correlation coefficient a [`CorrelationResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMethod {
    /// Kendall's τ_b.
    Kendall,
    /// Vigna's weighted τ.
    Vigna,
}

/// A rank correlation and its tie diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    /// Coefficient in `[−1, 1]`; `None` when undefined (one input entirely
    /// tied).
    pub value: Option<f64>,
    /// Which coefficient.
    pub method: CorrelationMethod,
    /// Number of tied pairs in the first input.
    pub ties_x: usize,
    /// Number of tied pairs in the second input.
    pub ties_y: usize,
}

fn check_pair<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "score vectors of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter(
            "rank correlation needs at least two items".into(),
        ));
    }
    Ok(())
}

/// Sign of `a − b` with ties (within tolerance) mapped to 0.
fn tie_sign<T: Float>(a: T, b: T) -> i8 {
    let d = a - b;
    if d.abs() <= tol::<T>() {
        0
    } else if d > T::zero() {
        1
    } else {
        -1
    }
}

/// Kendall's τ_b: `(C − D)/√((P − Tₓ)(P − T_y))` with `P = n(n−1)/2` and
/// `Tₓ`, `T_y` the tied pairs in each input.
pub fn kendall_tau<T: Float>(x: &[T], y: &[T]) -> Result<CorrelationResult> {
    check_pair(x, y)?;
    let n = x.len();
    let (mut num, mut tx, mut ty) = (0i64, 0usize, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            let sx = tie_sign(x[i], x[j]);
            let sy = tie_sign(y[i], y[j]);
            tx += usize::from(sx == 0);
            ty += usize::from(sy == 0);
            num += i64::from(sx) * i64::from(sy);
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let denom = ((pairs - tx as f64) * (pairs - ty as f64)).sqrt();
    Ok(CorrelationResult {
        value: (denom > 0.0).then(|| (num as f64 / denom).clamp(-1.0, 1.0)),
        method: CorrelationMethod::Kendall,
        ties_x: tx,
        ties_y: ty,
    })
}

/// Vigna's weighted τ with additive hyperbolic weights.
///
/// Each pair `(i, j)` carries the weight
/// `w(i, j) = ½[h(rₓ(i)) + h(rₓ(j)) + h(r_y(i)) + h(r_y(j))]`, `h(r) = 1/(r+1)`,
/// i.e. the average of the additive hyperbolic weights induced by the two
/// rankings, where `rₓ`, `r_y` are zero-based average ranks by decreasing
/// score. Then
///
/// ```text
/// τ = Σ w·sgn(xᵢ−xⱼ)·sgn(yᵢ−yⱼ) / √(Σ w·[xᵢ≠xⱼ] · Σ w·[yᵢ≠yⱼ])
/// ```
///
/// The symmetrised weights make the coefficient symmetric in its
/// arguments; tied pairs drop out of the corresponding normaliser. The
/// direct `O(n²)` sum is used.
pub fn vigna_tau<T: Float>(x: &[T], y: &[T]) -> Result<CorrelationResult> {
    check_pair(x, y)?;
    let n = x.len();
    let hx: Vec<f64> = average_ranks(x).iter().map(|r| 1.0 / (r + 1.0)).collect();
    let hy: Vec<f64> = average_ranks(y).iter().map(|r| 1.0 / (r + 1.0)).collect();
    let (mut num, mut nx, mut ny) = (0.0, 0.0, 0.0);
    let (mut tx, mut ty) = (0usize, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            let w = 0.5 * (hx[i] + hx[j] + hy[i] + hy[j]);
            let sx = tie_sign(x[i], x[j]);
            let sy = tie_sign(y[i], y[j]);
            tx += usize::from(sx == 0);
            ty += usize::from(sy == 0);
            num += w * f64::from(sx * sy);
            nx += w * f64::from(sx * sx);
            ny += w * f64::from(sy * sy);
        }
    }
    let denom = (nx * ny).sqrt();
    Ok(CorrelationResult {
        value: (denom > 0.0).then(|| (num / denom).clamp(-1.0, 1.0)),
        method: CorrelationMethod::Vigna,
        ties_x: tx,
        ties_y: ty,
    })
}

/// The `k` highest-ranked vertices (ties broken by ascending index).
pub fn top_k<T: Float>(scores: &[T], k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = rank_order(scores, tol::<T>()).into_iter().take(k).collect();
    v.sort_unstable();
    v
}

/// `|topₖ(x) ∩ topₖ(y)|`.
pub fn topk_overlap<T: Float>(x: &[T], y: &[T], k: usize) -> Result<usize> {
    check_topk(x, y, k)?;
    let a = top_k(x, k);
    let b = top_k(y, k);
    Ok(a.iter().filter(|v| b.binary_search(v).is_ok()).count())
}

fn check_topk<T>(x: &[T], y: &[T], k: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "score vectors of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if k == 0 || k > x.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            x.len()
        )));
    }
    Ok(())
}

/// Fraction of shared vertices among the top `k` of each score vector,
/// `|topₖ(x) ∩ topₖ(y)| / k`.
pub fn jaccard_topk<T: Float>(x: &[T], y: &[T], k: usize) -> Result<f64> {
    Ok(topk_overlap(x, y, k)? as f64 / k as f64)
}

/// Agresti–Coull 95% interval for a binomial proportion:
/// `ñ = n + z²`, `p̃ = (s + z²/2)/ñ`, `p̃ ± z√(p̃(1−p̃)/ñ)`, clamped to
/// `[0, 1]`, with `z = 1.96`.
pub fn agresti_coull(successes: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}"
        )));
    }
    let z2 = Z_95 * Z_95;
    let n_t = trials as f64 + z2;
    let p_t = (successes as f64 + z2 / 2.0) / n_t;
    let half = Z_95 * (p_t * (1.0 - p_t) / n_t).sqrt();
    Ok(((p_t - half).max(0.0), (p_t + half).min(1.0)))
}
