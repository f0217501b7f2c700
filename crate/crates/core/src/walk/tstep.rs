use rayon::prelude::*;

use crate::graph::{normalize_row, transition_matrix, DanglingPolicy, Graph, LabelMatrix};
use crate::{Error, Result};

use super::lp::check_sizes;
use super::WalkResult;

/// Labels from `t` steps of the non-absorbing walk `T`, rejecting dangling
/// nodes.
pub fn tstep_walk(g: &Graph, y: &LabelMatrix, t: usize) -> Result<WalkResult> {
    tstep_walk_with(g, y, t, DanglingPolicy::Reject)
}

/// Row `i` is the label mass of the walk's endpoints after `t` steps from
/// `i`, renormalized over the labeled endpoints. Mass landing on unlabeled
/// nodes is discarded; a row with no labeled mass stays zero.
pub fn tstep_walk_with(
    g: &Graph,
    y: &LabelMatrix,
    t: usize,
    policy: DanglingPolicy,
) -> Result<WalkResult> {
    check_sizes(g, y)?;
    if t == 0 {
        return Err(Error::InvalidConfig("t must be at least 1".into()));
    }
    let p = transition_matrix(g, policy)?;
    let mut cur = y.scores().clone();
    let mut next = cur.clone();
    for _ in 0..t {
        p.apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    cur.row_chunks_mut().for_each(|row| {
        normalize_row(row);
    });
    Ok(WalkResult::direct(y.with_scores(cur), t))
}
