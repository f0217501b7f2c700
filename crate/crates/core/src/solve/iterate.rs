use crate::graph::TransitionMatrix;
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Residual history of an iterative solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    /// `‖Yᵗ − Yᵗ⁻¹‖_∞` for t = 1, 2, …
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn last_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub value: Matrix,
    pub trace: IterationTrace,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Iterates `Y ← update(Y)` until the max-norm change is at most `tol` or
/// `max_iter` steps have run. Hitting the cap is not an error; the trace
/// reports `converged = false`.
///
/// `update(y, out)` must overwrite every entry of `out`.
pub fn fixed_point<F>(mut update: F, y0: Matrix, tol: f64, max_iter: usize) -> Result<FixedPoint>
where
    F: FnMut(&Matrix, &mut Matrix),
{
    check_tol(tol)?;
    let mut cur = y0;
    let mut next = Matrix::zeros(cur.rows(), cur.cols());
    let mut trace = IterationTrace::default();
    for _ in 0..max_iter {
        update(&cur, &mut next);
        let r = next.max_abs_diff(&cur);
        std::mem::swap(&mut cur, &mut next);
        trace.residuals.push(r);
        if r <= tol {
            trace.converged = true;
            break;
        }
    }
    Ok(FixedPoint { value: cur, trace })
}

/// Two-term recurrence `Yᵗ⁺¹ = β F(Yᵗ) + (1 − β) Yᵗ⁻¹`, started with
/// `Y¹ = F(Y⁰)`. With `β = 1` this reproduces [`fixed_point`] step for step.
pub fn second_order_with<F>(
    mut update: F,
    y0: Matrix,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint>
where
    F: FnMut(&Matrix, &mut Matrix),
{
    check_tol(tol)?;
    if !(1.0..=2.0).contains(&beta) {
        log::warn!("second-order beta = {beta} lies outside [1, 2]");
    }
    let (rows, cols) = (y0.rows(), y0.cols());
    let mut prev = y0.clone();
    let mut cur = y0;
    let mut step = Matrix::zeros(rows, cols);
    let mut trace = IterationTrace::default();
    for t in 0..max_iter {
        update(&cur, &mut step);
        if t > 0 {
            for (s, &p) in step.as_mut_slice().iter_mut().zip(prev.as_slice()) {
                *s = beta * *s + (1.0 - beta) * p;
            }
        }
        let r = step.max_abs_diff(&cur);
        // prev <- cur, cur <- step
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut step);
        trace.residuals.push(r);
        if r <= tol {
            trace.converged = true;
            break;
        }
    }
    Ok(FixedPoint { value: cur, trace })
}

/// [`second_order_with`] for the linear map `Y ↦ P Y`.
pub fn second_order(
    p: &TransitionMatrix,
    y0: Matrix,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint> {
    second_order_with(|y, out| p.apply_into(y, out), y0, beta, tol, max_iter)
}
