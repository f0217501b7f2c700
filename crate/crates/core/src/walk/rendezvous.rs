use crate::graph::{absorbing_block, Graph, LabelMatrix, NodeOrdering};
use crate::matrix::Matrix;
use crate::solve::{leading_eigenvectors, linear_solve};
use crate::{Error, Result};

use super::lp::check_sizes;
use super::WalkResult;

/// Leading eigenvalues of the absorbing walk must be this close to 1.
const UNIT_EIGENVALUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RendezvousLimit {
    /// The labeled columns of `P^∞`: n×l, columns in increasing node id.
    pub absorption: Matrix,
    /// The l leading eigenvalues of `P`.
    pub eigenvalues: Vec<f64>,
}

/// `P^∞` assembled from the l leading eigenvectors of the absorbing walk.
///
/// The eigenvalue-1 eigenspace has dimension l, so any basis `S` of it is
/// first aligned to `S' = S S_l⁻¹`, whose labeled block is the identity; then
/// `(P^∞)_ij = s'_ij / s'_jj`.
pub fn rendezvous_limit(g: &Graph, labeled: &[bool]) -> Result<RendezvousLimit> {
    let n = g.node_count();
    if labeled.len() != n {
        return Err(Error::SizeMismatch(format!(
            "{} labeled flags for {n} nodes",
            labeled.len()
        )));
    }
    if !g.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    if !labeled.iter().any(|&b| b) {
        return Err(Error::NoLabeledNodes);
    }
    if let Some(&node) = g.cannot_reach(labeled).first() {
        return Err(Error::NotLabelConnected { node });
    }
    let ord = NodeOrdering::labeled_first(labeled);
    let l = ord.labeled_count();
    let internal: Vec<bool> = (0..n).map(|i| i < l).collect();
    let p = absorbing_block(&g.permute(ord.forward()), &internal)?.to_dense();

    let eig = leading_eigenvectors(&p, l)?;
    if let Some(&bad) = eig
        .values
        .iter()
        .find(|v| (*v - 1.0).abs() > UNIT_EIGENVALUE_TOL)
    {
        return Err(Error::EigensolverFailure(format!(
            "leading eigenvalue {bad} is not 1"
        )));
    }
    let s = eig.vectors;
    let head: Vec<usize> = (0..l).collect();
    let s_l = s.select(&head, &head);
    // S' = S S_l⁻¹  ⇔  S_lᵀ S'ᵀ = Sᵀ
    let aligned = linear_solve(&s_l.transpose(), &s.transpose())?.transpose();

    let mut absorption = Matrix::zeros(n, l);
    for r in 0..n {
        let dst = absorption.row_mut(ord.to_external(r));
        for (j, d) in dst.iter_mut().enumerate() {
            *d = aligned[(r, j)] / aligned[(j, j)];
        }
    }
    Ok(RendezvousLimit {
        absorption,
        eigenvalues: eig.values,
    })
}

/// Label propagation limit through the eigenvector construction. Needs a
/// symmetric, label-connected graph.
pub fn rendezvous(g: &Graph, y: &LabelMatrix) -> Result<WalkResult> {
    check_sizes(g, y)?;
    let limit = rendezvous_limit(g, y.seed_mask())?;
    let seeds = y.seeds();
    let m = y.label_count();
    let y_l = y.scores().select(seeds, &(0..m).collect::<Vec<_>>());
    let mut scores = limit.absorption.matmul(&y_l);
    for &s in seeds {
        scores.row_mut(s).copy_from_slice(y.row(s));
    }
    Ok(WalkResult::direct(y.with_scores(scores), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::walk::lp_closed_form;

    #[test]
    fn fully_labeled_is_identity() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)], 3, false).unwrap();
        let y = LabelMatrix::from_hard(3, 2, &[(0, 0), (1, 1), (2, 0)]).unwrap();
        let r = rendezvous(&g, &y).unwrap();
        assert_eq!(r.labels, y);
    }

    #[test]
    fn path_middle_is_even() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)], 3, false).unwrap();
        let y = LabelMatrix::from_hard(3, 2, &[(0, 0), (2, 1)]).unwrap();
        let r = rendezvous(&g, &y).unwrap();
        assert!((r.labels.row(1)[0] - 0.5).abs() < 1e-10);
        assert!((r.labels.row(1)[1] - 0.5).abs() < 1e-10);
        let lim = rendezvous_limit(&g, y.seed_mask()).unwrap();
        for v in lim.eigenvalues {
            assert!((v - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn matches_lp_on_a_cycle_with_chord() {
        let g = build_graph(
            &[
                (0, 1, 1.0),
                (1, 2, 2.0),
                (2, 3, 1.0),
                (3, 4, 1.5),
                (4, 0, 1.0),
                (1, 3, 0.5),
            ],
            5,
            false,
        )
        .unwrap();
        let y = LabelMatrix::from_hard(5, 2, &[(2, 0), (4, 1)]).unwrap();
        let a = rendezvous(&g, &y).unwrap();
        let b = lp_closed_form(&g, &y).unwrap();
        assert!(a.labels.scores().max_abs_diff(b.labels.scores()) <= 1e-10);
    }

    #[test]
    fn rejects_asymmetric() {
        let g = build_graph(&[(0, 1, 1.0), (1, 0, 2.0)], 2, true).unwrap();
        assert!(matches!(
            rendezvous_limit(&g, &[true, false]),
            Err(Error::AsymmetricInput)
        ));
    }
}
