//! Random-walk labeling: label propagation, t-step walks, the rendezvous
//! construction, graph regularization and adsorption.
//!
//! Methods with more than one numerical route take a [`SolverOptions`]; every
//! route of a method computes the same limit.

mod adsorption;
mod lp;
mod regularize;
mod rendezvous;
mod tstep;

pub use adsorption::{adsorption, augmented_matrix, Injection};
pub use lp::{absorption_probabilities, lp, lp_closed_form, lp_iterative};
pub use regularize::{regularize, regularize_scores, Kernel};
pub use rendezvous::{rendezvous, rendezvous_limit, RendezvousLimit};
pub use tstep::{tstep_walk, tstep_walk_with};

use crate::graph::{DanglingPolicy, LabelMatrix};
use crate::matrix::Matrix;
use crate::solve::{fixed_point, second_order_with, FixedPoint, IterationTrace};
use crate::Result;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Labels produced by a walk method.
#[derive(Debug, Clone)]
pub struct WalkResult {
    pub labels: LabelMatrix,
    pub iterations_used: usize,
    /// Final max-norm change between iterates; zero for closed-form routes.
    pub residual: f64,
    pub converged: bool,
    /// Per-node argmax, ties to the lower label id.
    pub hard_labels: Option<Vec<Option<usize>>>,
    pub trace: Option<IterationTrace>,
}

impl WalkResult {
    pub(crate) fn direct(labels: LabelMatrix, iterations_used: usize) -> Self {
        let hard = labels.hard_labels();
        Self {
            labels,
            iterations_used,
            residual: 0.0,
            converged: true,
            hard_labels: Some(hard),
            trace: None,
        }
    }

    pub(crate) fn iterated(labels: LabelMatrix, trace: IterationTrace) -> Self {
        let hard = labels.hard_labels();
        Self {
            labels,
            iterations_used: trace.iterations(),
            residual: trace.last_residual(),
            converged: trace.converged,
            hard_labels: Some(hard),
            trace: Some(trace),
        }
    }
}

/// How a walk method computes its limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Route {
    /// Dense linear solve.
    Direct,
    /// First-order fixed-point iteration.
    Iterative,
    /// `Yᵗ⁺¹ = β F(Yᵗ) + (1 − β) Yᵗ⁻¹`.
    SecondOrder { beta: f64 },
    /// End points of `walks` simulated walks per node.
    MonteCarlo { walks: usize, seed: u64 },
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Iterative => "iterative",
            Route::SecondOrder { .. } => "second-order",
            Route::MonteCarlo { .. } => "montecarlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub route: Route,
    pub tol: f64,
    pub max_iter: usize,
    pub dangling: DanglingPolicy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            route: Route::Direct,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            dangling: DanglingPolicy::Reject,
        }
    }
}

impl SolverOptions {
    pub fn with_route(route: Route) -> Self {
        Self {
            route,
            ..Self::default()
        }
    }

    /// Runs the iterative or second-order route of an affine update.
    pub(crate) fn iterate<F>(&self, update: F, y0: Matrix) -> Result<FixedPoint>
    where
        F: FnMut(&Matrix, &mut Matrix),
    {
        match self.route {
            Route::SecondOrder { beta } => {
                second_order_with(update, y0, beta, self.tol, self.max_iter)
            }
            _ => fixed_point(update, y0, self.tol, self.max_iter),
        }
    }
}

/// `out = Σ_j dist[j] · Y_j`, the label row seen by a walk ending at `j` with
/// probability `dist[j]`.
pub(crate) fn mix_rows(dist: &[f64], y: &LabelMatrix, out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for (j, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            for (o, &v) in out.iter_mut().zip(y.row(j)) {
                *o += p * v;
            }
        }
    }
}
