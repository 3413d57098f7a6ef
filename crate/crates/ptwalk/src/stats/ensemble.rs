//! Ensemble experiments: generate a family of random graphs, score every
//! vertex with several centrality methods and aggregate the agreement
//! between methods.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{GraphAnalysis, Method};
use crate::numfmt::sig15;
use crate::randnet::{generate, RandomGraphSpec};
use crate::{Error, Result};

use super::{agresti_coull, topk_overlap, vigna_tau};

/// Largest top-k set size reported.
pub const MAX_K: usize = 5;

/// How per-graph score vectors are aligned before position-wise averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreAlignment {
    /// Each method's scores sorted in decreasing order.
    #[default]
    OwnSorted,
    /// Every method's scores listed in the graph's PageRank rank order.
    PagerankOrder,
}

/// Ensemble run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    /// Number of graphs.
    pub count: usize,
    /// Methods to evaluate.
    pub methods: Vec<Method>,
    /// Score alignment for the rank profiles.
    #[serde(default)]
    pub alignment: ScoreAlignment,
    /// Worker threads (`0` = all cores). Results do not depend on it.
    #[serde(default)]
    pub threads: usize,
}

impl EnsembleOptions {
    /// `count` graphs, all four methods, default alignment and threads.
    pub fn new(count: usize) -> Self {
        Self {
            count,
            methods: Method::ALL.to_vec(),
            alignment: ScoreAlignment::default(),
            threads: 0,
        }
    }
}

/// Scores of one ensemble member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphRecord {
    /// Graph index within the ensemble.
    pub index: u64,
    /// Edge count.
    pub edges: usize,
    /// One entry per requested method, in request order.
    pub scores: Vec<crate::centrality::CentralityScores>,
}

/// Position-wise mean and population standard deviation of aligned score
/// vectors for one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankProfile {
    /// Method.
    pub method: Method,
    /// Mean score at each position.
    pub mean: Vec<f64>,
    /// Standard deviation at each position.
    pub std: Vec<f64>,
}

/// Mean Vigna τ between two methods over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelation {
    /// First method.
    pub a: Method,
    /// Second method.
    pub b: Method,
    /// Mean over graphs where τ is defined; `None` if it never is.
    pub mean: Option<f64>,
    /// Number of graphs where τ was undefined (one side entirely tied).
    pub undefined: usize,
}

/// Top-k agreement between two methods for one `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    /// Set size.
    pub k: usize,
    /// `|topₖ(a) ∩ topₖ(b)| / k` for each graph.
    pub fractions: Vec<f64>,
    /// Ensemble mean of `fractions`.
    pub mean: f64,
    /// Agresti–Coull lower bound (pooled over graphs).
    pub low: f64,
    /// Agresti–Coull upper bound.
    pub high: f64,
}

/// Top-k agreement between two methods for every `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairAgreement {
    /// First method.
    pub a: Method,
    /// Second method.
    pub b: Method,
    /// One report per `k = 1..=min(5, n)`.
    pub reports: Vec<AgreementReport>,
}

/// Full result of an ensemble experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    /// Generator parameters (including the master seed).
    pub spec: RandomGraphSpec,
    /// Number of graphs.
    pub count: usize,
    /// Methods, in request order.
    pub methods: Vec<Method>,
    /// Alignment used for `profiles`.
    pub alignment: ScoreAlignment,
    /// Per-graph scores.
    pub graphs: Vec<GraphRecord>,
    /// Aligned score profiles, one per method.
    pub profiles: Vec<RankProfile>,
    /// Mean Vigna τ per unordered method pair.
    pub correlations: Vec<PairCorrelation>,
    /// Top-k agreement per unordered method pair.
    pub agreement: Vec<PairAgreement>,
}

impl EnsembleReport {
    /// Agreement reports for a method pair, in either order.
    pub fn agreement_for(&self, a: Method, b: Method) -> Option<&PairAgreement> {
        self.agreement
            .iter()
            .find(|p| (p.a, p.b) == (a, b) || (p.a, p.b) == (b, a))
    }

    /// Mean Vigna τ for a method pair, in either order.
    pub fn correlation_for(&self, a: Method, b: Method) -> Option<&PairCorrelation> {
        self.correlations
            .iter()
            .find(|p| (p.a, p.b) == (a, b) || (p.a, p.b) == (b, a))
    }

    /// Pretty-printed JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Rank-profile table: `method,position,mean,std` (1-based positions).
    pub fn profiles_csv(&self) -> String {
        let mut out = String::from("method,position,mean,std\n");
        for p in &self.profiles {
            for (i, (m, s)) in p.mean.iter().zip(&p.std).enumerate() {
                let _ = writeln!(out, "{},{},{},{}", p.method, i + 1, sig15(*m), sig15(*s));
            }
        }
        out
    }

    /// Agreement table: `method_a,method_b,k,mean,low,high`.
    pub fn agreement_csv(&self) -> String {
        let mut out = String::from("method_a,method_b,k,mean,low,high\n");
        for p in &self.agreement {
            for r in &p.reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    p.a,
                    p.b,
                    r.k,
                    sig15(r.mean),
                    sig15(r.low),
                    sig15(r.high)
                );
            }
        }
        out
    }
}

fn score_graph(
    spec: &RandomGraphSpec,
    index: u64,
    methods: &[Method],
    alignment: ScoreAlignment,
) -> Result<(GraphRecord, Option<Vec<usize>>)> {
    let wrap = |cause: Error| Error::EnsembleGraph {
        seed: spec.seed,
        index,
        cause: Box::new(cause),
    };
    let g = generate(spec, index).map_err(wrap)?;
    let analysis = GraphAnalysis::new(&g);
    let scores = methods
        .iter()
        .map(|&m| analysis.scores(m))
        .collect::<Result<Vec<_>>>()
        .map_err(wrap)?;
    let order = match alignment {
        ScoreAlignment::OwnSorted => None,
        ScoreAlignment::PagerankOrder => Some(
            match scores.iter().find(|s| s.method() == Method::Pagerank) {
                Some(s) => s.order().to_vec(),
                None => analysis
                    .scores(Method::Pagerank)
                    .map_err(wrap)?
                    .order()
                    .to_vec(),
            },
        ),
    };
    Ok((
        GraphRecord {
            index,
            edges: g.edge_count(),
            scores,
        },
        order,
    ))
}

fn mean_std(columns: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let count = columns.len() as f64;
    let n = columns[0].len();
    let mut mean = vec![0.0; n];
    for c in columns {
        for (m, x) in mean.iter_mut().zip(c) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= count);
    let mut var = vec![0.0; n];
    for c in columns {
        for ((v, x), m) in var.iter_mut().zip(c).zip(&mean) {
            *v += (x - m) * (x - m);
        }
    }
    let std = var.into_iter().map(|v| (v / count).sqrt()).collect();
    (mean, std)
}

/// Generate `options.count` graphs from `spec`, score them with every
/// requested method and aggregate:
///
/// * position-wise mean and population standard deviation of the aligned
///   score vectors of each method;
/// * the mean Vigna τ of every method pair;
/// * top-k agreement for `k = 1..=min(5, n)` for every method pair, with an
///   Agresti–Coull interval over the pooled counts
///   (successes `Σ |topₖ ∩ topₖ|`, trials `k · count`).
///
/// Graphs are processed in parallel and merged in index order, so the
/// report is identical for any thread count.
///
/// # Errors
/// Invalid parameters, or [`Error::EnsembleGraph`] naming the master seed
/// and graph index of the first failing graph.
pub fn run_ensemble(spec: &RandomGraphSpec, options: &EnsembleOptions) -> Result<EnsembleReport> {
    spec.validate()?;
    if options.count == 0 {
        return Err(Error::InvalidParameter(
            "ensemble count must be at least 1".into(),
        ));
    }
    if options.methods.is_empty() {
        return Err(Error::InvalidParameter("no methods selected".into()));
    }
    let mut methods = Vec::new();
    for &m in &options.methods {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let results = crate::randnet::with_pool(options.threads, || {
        (0..options.count as u64)
            .into_par_iter()
            .map(|i| score_graph(spec, i, &methods, options.alignment))
            .collect::<Result<Vec<_>>>()
    })??;
    let (graphs, orders): (Vec<GraphRecord>, Vec<Option<Vec<usize>>>) = results.into_iter().unzip();

    let profiles = methods
        .iter()
        .enumerate()
        .map(|(mi, &method)| {
            let columns: Vec<Vec<f64>> = graphs
                .iter()
                .zip(&orders)
                .map(|(g, order)| {
                    let s = &g.scores[mi];
                    let order = order.as_deref().unwrap_or(s.order());
                    order.iter().map(|&v| s.scores()[v]).collect()
                })
                .collect();
            let (mean, std) = mean_std(&columns);
            RankProfile { method, mean, std }
        })
        .collect();

    let n = spec.n;
    let mut correlations = Vec::new();
    let mut agreement = Vec::new();
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let (a, b) = (methods[i], methods[j]);
            let mut sum = 0.0;
            let mut defined = 0usize;
            for g in &graphs {
                if n >= 2 {
                    if let Some(v) = vigna_tau(g.scores[i].scores(), g.scores[j].scores())?.value {
                        sum += v;
                        defined += 1;
                    }
                }
            }
            correlations.push(PairCorrelation {
                a,
                b,
                mean: (defined > 0).then(|| sum / defined as f64),
                undefined: graphs.len() - defined,
            });
            let mut reports = Vec::new();
            for k in 1..=MAX_K.min(n) {
                let mut successes = 0u64;
                let mut fractions = Vec::with_capacity(graphs.len());
                for g in &graphs {
                    let hits = topk_overlap(g.scores[i].scores(), g.scores[j].scores(), k)?;
                    successes += hits as u64;
                    fractions.push(hits as f64 / k as f64);
                }
                let trials = (k * graphs.len()) as u64;
                let (low, high) = agresti_coull(successes, trials)?;
                reports.push(AgreementReport {
                    k,
                    mean: fractions.iter().sum::<f64>() / fractions.len() as f64,
                    fractions,
                    low,
                    high,
                });
            }
            agreement.push(PairAgreement { a, b, reports });
        }
    }

    Ok(EnsembleReport {
        spec: spec.clone(),
        count: options.count,
        methods,
        alignment: options.alignment,
        graphs,
        profiles,
        correlations,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randnet::Family;

    fn small_spec() -> RandomGraphSpec {
        RandomGraphSpec::erdos_renyi(Family::ErDag, 8, 0.3, 5)
    }

    #[test]
    fn single_graph_has_zero_spread() {
        let r = run_ensemble(&small_spec(), &EnsembleOptions::new(1)).unwrap();
        for p in &r.profiles {
            assert!(p.std.iter().all(|&s| s == 0.0));
            assert_eq!(p.mean.len(), 8);
        }
        assert_eq!(r.agreement.len(), 6);
        assert_eq!(r.agreement[0].reports.len(), 5);
    }

    #[test]
    fn report_is_thread_independent() {
        let mut opts = EnsembleOptions::new(6);
        opts.threads = 1;
        let a = run_ensemble(&small_spec(), &opts).unwrap();
        opts.threads = 3;
        let b = run_ensemble(&small_spec(), &opts).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn pooled_interval_matches_counts() {
        let r = run_ensemble(&small_spec(), &EnsembleOptions::new(4)).unwrap();
        let pair = r.agreement_for(Method::Pagerank, Method::EtaCtqw).unwrap();
        for rep in &pair.reports {
            let hits: f64 = rep.fractions.iter().map(|f| f * rep.k as f64).sum();
            let (lo, hi) = agresti_coull(hits.round() as u64, (rep.k * 4) as u64).unwrap();
            assert_eq!((lo, hi), (rep.low, rep.high));
            assert!(rep.fractions.iter().all(|f| (0.0..=1.0).contains(f)));
        }
    }

    #[test]
    fn sorted_profiles_are_nonincreasing() {
        let r = run_ensemble(&small_spec(), &EnsembleOptions::new(3)).unwrap();
        for p in &r.profiles {
            assert!(p.mean.windows(2).all(|w| w[0] >= w[1] - 1e-15));
        }
    }

    #[test]
    fn pagerank_alignment_orders_by_pagerank() {
        let mut opts = EnsembleOptions::new(3);
        opts.methods = vec![Method::EtaCtqw];
        opts.alignment = ScoreAlignment::PagerankOrder;
        let r = run_ensemble(&small_spec(), &opts).unwrap();
        assert_eq!(r.profiles.len(), 1);
        assert!(r.agreement.is_empty());
    }

    #[test]
    fn rejects_empty_requests() {
        assert!(run_ensemble(&small_spec(), &EnsembleOptions::new(0)).is_err());
        let mut opts = EnsembleOptions::new(1);
        opts.methods.clear();
        assert!(run_ensemble(&small_spec(), &opts).is_err());
    }

    #[test]
    fn csv_headers() {
        let r = run_ensemble(&small_spec(), &EnsembleOptions::new(1)).unwrap();
        assert!(r.profiles_csv().starts_with("method,position,mean,std\n"));
        assert!(r
            .agreement_csv()
            .starts_with("method_a,method_b,k,mean,low,high\n"));
        assert_eq!(r.agreement_csv().lines().count(), 1 + 6 * 5);
    }
}
