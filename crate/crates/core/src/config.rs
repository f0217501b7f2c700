//! Method selection and the defaults shared by the library entry point and
//! the command line.

use std::fmt;
use std::str::FromStr;

use crate::engine::{run_rounds, RoundStats};
use crate::graph::{DanglingPolicy, Graph, LabelMatrix};
use crate::ica::{ica_run, ClassifierKind, LocalClassifierSpec, DEFAULT_TAU};
use crate::walk::{
    adsorption, lp, regularize, rendezvous, tstep_walk_with, Injection, Kernel, Route,
    SolverOptions, WalkResult, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::{Error, Result};

/// Largest graph for which dense matrices are built.
pub const DEFAULT_DENSE_THRESHOLD: usize = 2000;
pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 1.5;
pub const DEFAULT_T: usize = 8;
pub const DEFAULT_WALKS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    IcaVote,
    IcaNn,
    Lp,
    TStep,
    Rendezvous,
    Regularize,
    Adsorption,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::IcaVote,
        Method::IcaNn,
        Method::Lp,
        Method::TStep,
        Method::Rendezvous,
        Method::Regularize,
        Method::Adsorption,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::IcaVote => "ica-vote",
            Method::IcaNn => "ica-nn",
            Method::Lp => "lp",
            Method::TStep => "tstep",
            Method::Rendezvous => "rendezvous",
            Method::Regularize => "regularize",
            Method::Adsorption => "adsorption",
        }
    }

    pub fn is_ica(self) -> bool {
        matches!(self, Method::IcaVote | Method::IcaNn)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    Direct,
    Iterative,
    SecondOrder,
    MonteCarlo,
}

impl Solver {
    pub const ALL: [Solver; 4] = [
        Solver::Direct,
        Solver::Iterative,
        Solver::SecondOrder,
        Solver::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Direct => "direct",
            Solver::Iterative => "iterative",
            Solver::SecondOrder => "second-order",
            Solver::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Solver::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown solver {s:?}")))
    }
}

/// A method and every parameter any method reads. Fields a method does not
/// use are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodConfig {
    pub method: Method,
    /// `None` picks direct up to the dense threshold, iterative above it.
    pub solver: Option<Solver>,
    pub alpha: f64,
    pub kernel: Kernel,
    pub beta: f64,
    pub t: usize,
    /// ICA iteration limit.
    pub tau: usize,
    pub top_k: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    /// Adsorption continuation probability on seed nodes (1 elsewhere).
    pub injection: f64,
    /// Per-node continuation probabilities; overrides `injection`.
    pub injection_vector: Option<Vec<f64>>,
    pub walks: usize,
    pub seed: u64,
    /// When set, `ica-vote` runs on the map/reduce engine with this many
    /// workers (hard labels).
    pub workers: Option<usize>,
    pub dense_threshold: usize,
    pub dangling: DanglingPolicy,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self::new(Method::Lp)
    }
}

impl MethodConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            solver: None,
            alpha: DEFAULT_ALPHA,
            kernel: Kernel::Transition,
            beta: DEFAULT_BETA,
            t: DEFAULT_T,
            tau: DEFAULT_TAU,
            top_k: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            injection: Injection::DEFAULT_LABELED,
            injection_vector: None,
            walks: DEFAULT_WALKS,
            seed: 0,
            workers: None,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            dangling: DanglingPolicy::Reject,
        }
    }

    /// Parameter checks that do not need the graph.
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 || self.tau == 0 {
            return Err(Error::InvalidConfig(
                "iteration limits must be at least 1".into(),
            ));
        }
        if self.t == 0 {
            return Err(Error::InvalidConfig("t must be at least 1".into()));
        }
        if self.top_k == Some(0) {
            return Err(Error::InvalidConfig("top-k must be at least 1".into()));
        }
        if self.walks == 0 {
            return Err(Error::InvalidConfig("walk count must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "beta must be finite, got {}",
                self.beta
            )));
        }
        if self.method == Method::Regularize && !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        if self.method == Method::Adsorption && !(0.0..=1.0).contains(&self.injection) {
            return Err(Error::InjectionOutOfRange {
                node: usize::MAX,
                value: self.injection,
            });
        }
        Ok(())
    }

    /// Numerical route for a graph with `n` nodes.
    pub fn route(&self, n: usize) -> Result<Route> {
        Ok(match self.solver {
            None if n <= self.dense_threshold => Route::Direct,
            None => Route::Iterative,
            Some(Solver::Direct) => {
                if n > self.dense_threshold {
                    return Err(Error::DenseThresholdExceeded {
                        n,
                        threshold: self.dense_threshold,
                    });
                }
                Route::Direct
            }
            Some(Solver::Iterative) => Route::Iterative,
            Some(Solver::SecondOrder) => Route::SecondOrder { beta: self.beta },
            Some(Solver::MonteCarlo) => Route::MonteCarlo {
                walks: self.walks,
                seed: self.seed,
            },
        })
    }

    pub fn solver_options(&self, n: usize) -> Result<SolverOptions> {
        Ok(SolverOptions {
            route: self.route(n)?,
            tol: self.tol,
            max_iter: self.max_iter,
            dangling: self.dangling,
        })
    }
}

/// Runs the configured method.
pub fn run_method(g: &Graph, y: &LabelMatrix, cfg: &MethodConfig) -> Result<WalkResult> {
    cfg.validate()?;
    let n = g.node_count();
    match cfg.method {
        Method::Lp => lp(g, y, &cfg.solver_options(n)?),
        Method::TStep => tstep_walk_with(g, y, cfg.t, cfg.dangling),
        Method::Rendezvous => {
            match cfg.solver {
                None | Some(Solver::Direct) => {}
                Some(other) => {
                    return Err(Error::UnsupportedSolver {
                        solver: other.name(),
                        reason: "rendezvous is an eigenvector construction".into(),
                    })
                }
            }
            if n > cfg.dense_threshold {
                return Err(Error::DenseThresholdExceeded {
                    n,
                    threshold: cfg.dense_threshold,
                });
            }
            rendezvous(g, y)
        }
        Method::Regularize => regularize(g, y, cfg.alpha, cfg.kernel, &cfg.solver_options(n)?),
        Method::Adsorption => {
            let injection = match &cfg.injection_vector {
                Some(v) => Injection::new(v.clone())?,
                None => Injection::for_labels(y, cfg.injection, 1.0)?,
            };
            adsorption(g, y, &injection, &cfg.solver_options(n)?)
        }
        Method::IcaVote if cfg.workers.is_some() => run_engine(g, y, cfg).map(|(r, _)| r),
        Method::IcaVote | Method::IcaNn => {
            let spec = LocalClassifierSpec {
                kind: if cfg.method == Method::IcaNn {
                    ClassifierKind::NearestNeighbor
                } else {
                    ClassifierKind::WeightedVote
                },
                top_k: cfg.top_k,
                ..LocalClassifierSpec::default()
            };
            let run = ica_run(g, y, &spec, cfg.tau)?;
            Ok(ica_result(run.labels, run.iterations, run.converged))
        }
    }
}

/// Hard-vote ICA on the map/reduce engine with `cfg.workers` workers (1 if
/// unset), returning the per-round statistics alongside the result.
pub fn run_engine(
    g: &Graph,
    y: &LabelMatrix,
    cfg: &MethodConfig,
) -> Result<(WalkResult, Vec<RoundStats>)> {
    cfg.validate()?;
    let run = run_rounds(g, y, cfg.workers.unwrap_or(1), cfg.tau, true)?;
    let converged = run.rounds.last().is_some_and(|r| r.changed == 0);
    let result = ica_result(run.to_label_matrix(y), run.rounds.len(), converged);
    Ok((result, run.rounds))
}

fn ica_result(labels: LabelMatrix, iterations: usize, converged: bool) -> WalkResult {
    let hard = labels.hard_labels();
    WalkResult {
        labels,
        iterations_used: iterations,
        residual: 0.0,
        converged,
        hard_labels: Some(hard),
        trace: None,
    }
}
