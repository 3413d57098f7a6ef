//! JSON configuration of the `ensemble` command.
//!
//! ```json
//! {
//!   "seed": 2019,
//!   "methods": ["pagerank", "ctqw", "eta_ctqw"],
//!   "alignment": "own_sorted",
//!   "threads": 0,
//!   "ensembles": [
//!     { "name": "er_dag", "family": "er_dag", "n": 25, "p": 0.3, "count": 100 },
//!     { "family": "ba_in_regular", "n": 40, "m": 3, "count": 100, "max_attempts": 100000 }
//!   ]
//! }
//! ```
//!
//! `seed` is the master seed shared by all ensembles unless an entry sets
//! its own; `methods` defaults to all four, `alignment` to `own_sorted`
//! (alternative `pagerank_order`), `threads` to all cores, `name` to the
//! family name and `max_attempts` to 10⁴.

use std::collections::HashSet;

use ptwalk::centrality::Method;
use ptwalk::randnet::{Family, RandomGraphSpec, DEFAULT_MAX_ATTEMPTS};
use ptwalk::stats::ensemble::ScoreAlignment;
use ptwalk::stats::EnsembleOptions;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub seed: u64,
    #[serde(default)]
    pub methods: Option<Vec<Method>>,
    #[serde(default)]
    pub alignment: ScoreAlignment,
    #[serde(default)]
    pub threads: usize,
    pub ensembles: Vec<EnsembleEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    pub count: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_attempts: Option<u64>,
}

/// One fully resolved ensemble run.
pub struct Run {
    pub name: String,
    pub spec: RandomGraphSpec,
    pub options: EnsembleOptions,
}

impl EnsembleConfig {
    /// Resolve defaults and validate; `seed_override` replaces every seed.
    pub fn runs(&self, seed_override: Option<u64>) -> Result<Vec<Run>, CliError> {
        if self.ensembles.is_empty() {
            return Err(CliError::Usage("config lists no ensembles".into()));
        }
        let methods = self.methods.clone().unwrap_or_else(|| Method::ALL.to_vec());
        let mut names = HashSet::new();
        let mut runs = Vec::new();
        for e in &self.ensembles {
            let name = e.name.clone().unwrap_or_else(|| e.family.to_string());
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(CliError::Usage(format!("invalid ensemble name `{name}`")));
            }
            if !names.insert(name.clone()) {
                return Err(CliError::Usage(format!("duplicate ensemble name `{name}`")));
            }
            if e.count == 0 {
                return Err(CliError::Usage(format!(
                    "ensemble `{name}`: count must be at least 1"
                )));
            }
            let spec = RandomGraphSpec {
                family: e.family,
                n: e.n,
                p: e.p,
                m: e.m,
                seed: seed_override.or(e.seed).unwrap_or(self.seed),
                max_attempts: e.max_attempts.unwrap_or(DEFAULT_MAX_ATTEMPTS),
            };
            spec.validate()
                .map_err(|err| CliError::Usage(format!("ensemble `{name}`: {err}")))?;
            runs.push(Run {
                name,
                spec,
                options: EnsembleOptions {
                    count: e.count,
                    methods: methods.clone(),
                    alignment: self.alignment,
                    threads: self.threads,
                },
            });
        }
        Ok(runs)
    }
}
