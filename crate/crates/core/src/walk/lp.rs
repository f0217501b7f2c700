use crate::graph::{
    absorbing_block, reorder_labeled_first, require_label_connected, Graph, LabelMatrix,
    NodeOrdering,
};
use crate::matrix::Matrix;
use crate::solve::{linear_solve, StoppingWalk};
use crate::{Error, Result};

use super::{mix_rows, Route, SolverOptions, WalkResult};

/// `(I − P_uu, P_ul)` for a graph already ordered labeled-first with `l`
/// labeled nodes.
fn blocks(g: &Graph, l: usize) -> Result<(Matrix, Matrix)> {
    let n = g.node_count();
    let mask: Vec<bool> = (0..n).map(|i| i < l).collect();
    let p = absorbing_block(g, &mask)?;
    let u = n - l;
    let mut a = Matrix::identity(u);
    let mut p_ul = Matrix::zeros(u, l);
    for i in l..n {
        for (j, v) in p.row(i) {
            if j < l {
                p_ul[(i - l, j)] = v;
            } else {
                a[(i - l, j - l)] -= v;
            }
        }
    }
    Ok((a, p_ul))
}

fn check_connected(g: &Graph, labeled: &[bool]) -> Result<()> {
    if !labeled.iter().any(|&b| b) {
        return Err(Error::NoLabeledNodes);
    }
    match g.cannot_reach(labeled).first() {
        Some(&node) => Err(Error::NotLabelConnected { node }),
        None => Ok(()),
    }
}

/// Probabilities that a walk from each node is absorbed at each labeled node:
/// the labeled columns of `P^∞`, an n×l matrix with columns in increasing
/// node id. Labeled rows are indicator rows.
pub fn absorption_probabilities(g: &Graph, labeled: &[bool]) -> Result<Matrix> {
    let n = g.node_count();
    if labeled.len() != n {
        return Err(Error::SizeMismatch(format!(
            "{} labeled flags for {n} nodes",
            labeled.len()
        )));
    }
    check_connected(g, labeled)?;
    let ord = NodeOrdering::labeled_first(labeled);
    let l = ord.labeled_count();
    let (a, p_ul) = blocks(&g.permute(ord.forward()), l)?;
    let x = linear_solve(&a, &p_ul)?;
    let mut out = Matrix::zeros(n, l);
    for r in 0..n {
        let dst = out.row_mut(ord.to_external(r));
        if r < l {
            dst[r] = 1.0;
        } else {
            dst.copy_from_slice(x.row(r - l));
        }
    }
    Ok(out)
}

/// `Ỹ_u = (I − P_uu)⁻¹ P_ul Y_l`; labeled rows are returned unchanged.
pub fn lp_closed_form(g: &Graph, y: &LabelMatrix) -> Result<WalkResult> {
    check_sizes(g, y)?;
    require_label_connected(g, y)?;
    let (pg, py, ord) = reorder_labeled_first(g, y);
    let l = ord.labeled_count();
    let (a, p_ul) = blocks(&pg, l)?;
    let y_l = py.scores().select(
        &(0..l).collect::<Vec<_>>(),
        &(0..y.label_count()).collect::<Vec<_>>(),
    );
    let x = linear_solve(&a, &p_ul.matmul(&y_l))?;
    let mut scores = Matrix::zeros(g.node_count(), y.label_count());
    for r in 0..g.node_count() {
        let src = if r < l { py.row(r) } else { x.row(r - l) };
        scores.row_mut(ord.to_external(r)).copy_from_slice(src);
    }
    Ok(WalkResult::direct(y.with_scores(scores), 0))
}

/// Power iteration `Y ← PY`, re-clamping the labeled rows after every step.
pub fn lp_iterative(g: &Graph, y: &LabelMatrix, tol: f64, max_iter: usize) -> Result<WalkResult> {
    lp(
        g,
        y,
        &SolverOptions {
            route: Route::Iterative,
            tol,
            max_iter,
            ..SolverOptions::default()
        },
    )
}

/// Label propagation with absorbing labeled nodes, by any route.
pub fn lp(g: &Graph, y: &LabelMatrix, opts: &SolverOptions) -> Result<WalkResult> {
    match opts.route {
        Route::Direct => lp_closed_form(g, y),
        Route::Iterative | Route::SecondOrder { .. } => {
            check_sizes(g, y)?;
            require_label_connected(g, y)?;
            let p = absorbing_block(g, y.seed_mask())?;
            let update = |cur: &Matrix, out: &mut Matrix| {
                p.apply_into(cur, out);
                for &s in y.seeds() {
                    out.row_mut(s).copy_from_slice(y.row(s));
                }
            };
            let fp = opts.iterate(update, y.scores().clone())?;
            Ok(WalkResult::iterated(y.with_scores(fp.value), fp.trace))
        }
        Route::MonteCarlo { walks, seed } => {
            check_sizes(g, y)?;
            require_label_connected(g, y)?;
            if walks == 0 {
                return Err(Error::InvalidConfig("walk count must be at least 1".into()));
            }
            let stop = y
                .seed_mask()
                .iter()
                .map(|&s| if s { 1.0 } else { 0.0 })
                .collect();
            let walker = StoppingWalk::new(g, stop);
            let mut scores = y.scores().clone();
            for i in (0..g.node_count()).filter(|&i| !y.is_seed(i)) {
                let dist = walker.end_distribution(i, walks, seed)?;
                mix_rows(&dist, y, scores.row_mut(i));
            }
            Ok(WalkResult::direct(y.with_scores(scores), 0))
        }
    }
}

pub(crate) fn check_sizes(g: &Graph, y: &LabelMatrix) -> Result<()> {
    if g.node_count() == y.node_count() {
        Ok(())
    } else {
        Err(Error::SizeMismatch(format!(
            "graph has {} nodes, label matrix {} rows",
            g.node_count(),
            y.node_count()
        )))
    }
}
