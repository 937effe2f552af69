use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::functions::TestFunction;
use super::nodes::{generate_nodes, NodeKind};
use crate::error::{Error, Result};
use crate::interp::{Config, Fallback, GridSpec, Interpolant, JetSource};

/// A named operator configuration.
///
/// Recognised names: `sb<m>` (Bernoulli mode, exact jets), `st<m>` (Taylor
/// mode, exact jets), `bshep32`, `bshep33` and `qshep2d` (fitted jets).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    name: String,
    config: Config,
}

impl Operator {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Configuration with the benchmark parameters applied.
    pub fn config(&self, params: &BenchParams) -> Config {
        let mut c = self.config.clone().with_n_w(params.n_w).with_fallback(Fallback::Nearest);
        c.mu = params.mu;
        c.n_q = match c.jet_source {
            JetSource::Analytic => None,
            JetSource::WlsQuadratic => Some(params.n_q_quadratic),
            JetSource::WlsCubic => Some(params.n_q_cubic),
        };
        c
    }

    pub fn standard_set() -> Vec<Operator> {
        ["sb3", "st2", "bshep32", "bshep33", "qshep2d"].iter().map(|s| s.parse().expect("builtin name")).collect()
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let config = match s {
            "bshep32" => Config::bernoulli(3).with_jet_source(JetSource::WlsQuadratic),
            "bshep33" => Config::bernoulli(3).with_jet_source(JetSource::WlsCubic),
            "qshep2d" => Config::taylor(2).with_jet_source(JetSource::WlsQuadratic),
            _ => {
                let degree = |rest: &str| {
                    rest.parse::<usize>().map_err(|_| Error::arg(format!("unknown operator '{s}'")))
                };
                if let Some(rest) = s.strip_prefix("sb") {
                    Config::bernoulli(degree(rest)?)
                } else if let Some(rest) = s.strip_prefix("st") {
                    Config::taylor(degree(rest)?)
                } else {
                    return Err(Error::arg(format!("unknown operator '{s}'")));
                }
            }
        };
        config.validate()?;
        Ok(Operator { name: s.to_string(), config })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchParams {
    pub n_w: usize,
    pub n_q_quadratic: usize,
    pub n_q_cubic: usize,
    pub mu: f64,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self { n_w: 9, n_q_quadratic: 13, n_q_cubic: 17, mu: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeSpec {
    pub kind: NodeKind,
    pub n: usize,
    pub seed: u64,
}

/// One benchmark row. `error` holds the failure message when the build or
/// evaluation failed; the numeric fields are then NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub operator: String,
    pub function: usize,
    pub kind: NodeKind,
    pub n: usize,
    pub n_w: usize,
    pub n_q: Option<usize>,
    pub seed: u64,
    pub max_abs: f64,
    pub rms: f64,
    pub runtime: f64,
    pub error: Option<String>,
}

/// The benchmark's default error grid.
pub fn default_grid() -> GridSpec {
    GridSpec::unit_square(100, 100)
}

/// Builds every (operator, function) interpolant on one node set and
/// measures its error on `grid`. Rows come back in operator-major input
/// order; a failing row records its error and leaves the others untouched.
pub fn run_benchmark(
    operators: &[Operator],
    functions: &[TestFunction],
    nodes: &NodeSpec,
    grid: &GridSpec,
    params: &BenchParams,
) -> Result<Vec<ErrorReport>> {
    grid.validate()?;
    let node_set = generate_nodes(nodes.kind, nodes.n, nodes.seed)?;
    let pairs: Vec<(&Operator, &TestFunction)> =
        operators.iter().flat_map(|op| functions.iter().map(move |f| (op, f))).collect();
    Ok(pairs
        .into_par_iter()
        .map(|(op, f)| {
            let config = op.config(params);
            let start = Instant::now();
            let outcome = Interpolant::from_function(node_set.clone(), f, &config)
                .and_then(|interp| interp.max_error(&|p| f.eval(p), grid));
            let runtime = start.elapsed().as_secs_f64();
            let (max_abs, rms, error) = match outcome {
                Ok(stats) => (stats.max_abs, stats.rms, None),
                Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
            };
            ErrorReport {
                operator: op.name().to_string(),
                function: f.id(),
                kind: nodes.kind,
                n: nodes.n,
                n_w: config.n_w,
                n_q: config.n_q,
                seed: nodes.seed,
                max_abs,
                rms,
                runtime,
                error,
            }
        })
        .collect())
}
