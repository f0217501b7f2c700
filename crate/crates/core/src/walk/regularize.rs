use rayon::prelude::*;

use crate::graph::{
    normalize_row, symmetric_normalize, transition_matrix, DanglingPolicy, Graph, LabelMatrix,
    TransitionMatrix,
};
use crate::matrix::Matrix;
use crate::solve::{linear_solve, IterationTrace, StoppingWalk};
use crate::{Error, Result};

use super::lp::check_sizes;
use super::{mix_rows, Route, SolverOptions, WalkResult};

/// Walk matrix used by regularization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Kernel {
    /// `T = D⁻¹W`.
    #[default]
    Transition,
    /// `𝓟 = D^(-1/2) W D^(-1/2)`; needs a symmetric graph.
    SymmetricNormalized,
}

fn kernel_matrix(g: &Graph, kernel: Kernel, policy: DanglingPolicy) -> Result<TransitionMatrix> {
    match kernel {
        Kernel::Transition => transition_matrix(g, policy),
        Kernel::SymmetricNormalized => symmetric_normalize(g),
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `(1 − α)(I − αK)⁻¹ Y` before any row normalization, with the trace when
/// an iterative route was used.
pub fn regularize_scores(
    g: &Graph,
    y: &LabelMatrix,
    alpha: f64,
    kernel: Kernel,
    opts: &SolverOptions,
) -> Result<(Matrix, Option<IterationTrace>)> {
    check_sizes(g, y)?;
    check_alpha(alpha)?;
    let k = kernel_matrix(g, kernel, opts.dangling)?;
    let n = g.node_count();
    let mut y0 = y.scores().clone();
    y0.scale(1.0 - alpha);
    match opts.route {
        Route::Direct => {
            let mut a = Matrix::identity(n);
            for i in 0..n {
                for (j, v) in k.row(i) {
                    a[(i, j)] -= alpha * v;
                }
            }
            Ok((linear_solve(&a, &y0)?, None))
        }
        Route::Iterative | Route::SecondOrder { .. } => {
            let update = |cur: &Matrix, out: &mut Matrix| {
                k.apply_into(cur, out);
                for (o, &b) in out.as_mut_slice().iter_mut().zip(y0.as_slice()) {
                    *o = alpha * *o + b;
                }
            };
            let fp = opts.iterate(update, y.scores().clone())?;
            Ok((fp.value, Some(fp.trace)))
        }
        Route::MonteCarlo { walks, seed } => {
            if kernel == Kernel::SymmetricNormalized {
                return Err(Error::UnsupportedSolver {
                    solver: "montecarlo",
                    reason: "the symmetric kernel is not a walk matrix".into(),
                });
            }
            if walks == 0 {
                return Err(Error::InvalidConfig("walk count must be at least 1".into()));
            }
            // stopping with probability 1 − α at every visit samples the
            // end point of (1 − α) Σ_t αᵗ Tᵗ
            let walker = StoppingWalk::new(g, vec![1.0 - alpha; n]);
            let mut scores = Matrix::zeros(n, y.label_count());
            for i in 0..n {
                let dist = walker.end_distribution(i, walks, seed)?;
                mix_rows(&dist, y, scores.row_mut(i));
            }
            Ok((scores, None))
        }
    }
}

/// Graph regularization with each nonzero output row scaled to sum 1. The
/// input labels may change; `hard_labels` holds the per-row argmax.
pub fn regularize(
    g: &Graph,
    y: &LabelMatrix,
    alpha: f64,
    kernel: Kernel,
    opts: &SolverOptions,
) -> Result<WalkResult> {
    let (mut scores, trace) = regularize_scores(g, y, alpha, kernel, opts)?;
    scores.row_chunks_mut().for_each(|row| {
        normalize_row(row);
    });
    let labels = y.with_scores(scores);
    Ok(match trace {
        Some(t) => WalkResult::iterated(labels, t),
        None => WalkResult::direct(labels, 0),
    })
}
