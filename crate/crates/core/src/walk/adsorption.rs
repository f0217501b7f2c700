use crate::graph::{
    transition_matrix, DanglingPolicy, Graph, LabelMatrix, TransitionKind, TransitionMatrix,
};
use crate::matrix::{Matrix, SparseMatrix};
use crate::solve::{linear_solve, StoppingWalk};
use crate::{Error, Result};

use super::lp::check_sizes;
use super::{mix_rows, Route, SolverOptions, WalkResult};

/// Per-node continuation probabilities `αᵢ`. A walk at node `i` moves on with
/// probability `αᵢ` and jumps to the node's absorbing shadow with
/// probability `1 − αᵢ`, picking up the node's input labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection(Vec<f64>);

impl Injection {
    /// Continuation probability on labeled nodes unless configured otherwise.
    pub const DEFAULT_LABELED: f64 = 0.75;

    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        for (node, &value) in alphas.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InjectionOutOfRange { node, value });
            }
        }
        Ok(Self(alphas))
    }

    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![alpha; n])
    }

    /// `labeled` on seed nodes, `unlabeled` everywhere else.
    pub fn for_labels(y: &LabelMatrix, labeled: f64, unlabeled: f64) -> Result<Self> {
        Self::new(
            y.seed_mask()
                .iter()
                .map(|&s| if s { labeled } else { unlabeled })
                .collect(),
        )
    }

    /// `3/4` on seed nodes and `1` elsewhere.
    pub fn default_for(y: &LabelMatrix) -> Self {
        Self::for_labels(y, Self::DEFAULT_LABELED, 1.0).expect("constants are in range")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Nodes from which the walk terminates with probability 1.
fn live_nodes(g: &Graph, alphas: &[f64]) -> Result<Vec<bool>> {
    let terminating: Vec<bool> = alphas.iter().map(|&a| a < 1.0).collect();
    if !terminating.iter().any(|&t| t) {
        return Err(Error::NonTerminatingWalk);
    }
    let mut live = vec![true; g.node_count()];
    for i in g.cannot_reach(&terminating) {
        live[i] = false;
    }
    Ok(live)
}

/// Adsorption `Ỹ = (I − AT)⁻¹ (I − A) Y⁰` with `A = diag(αᵢ)`.
///
/// Rows are not rescaled. Nodes whose walks can never terminate (no path to
/// a node with `αᵢ < 1`) get zero rows.
pub fn adsorption(
    g: &Graph,
    y: &LabelMatrix,
    injection: &Injection,
    opts: &SolverOptions,
) -> Result<WalkResult> {
    check_sizes(g, y)?;
    let n = g.node_count();
    if injection.len() != n {
        return Err(Error::SizeMismatch(format!(
            "{} injection values for {n} nodes",
            injection.len()
        )));
    }
    let alpha = injection.values();
    let live = live_nodes(g, alpha)?;
    let t = transition_matrix(g, opts.dangling)?;
    let m = y.label_count();

    // (I − A) Y⁰, zero on nodes that never terminate
    let mut injected = Matrix::zeros(n, m);
    for i in (0..n).filter(|&i| live[i]) {
        for (o, &v) in injected.row_mut(i).iter_mut().zip(y.row(i)) {
            *o = (1.0 - alpha[i]) * v;
        }
    }

    let result = match opts.route {
        Route::Direct => {
            let index: Vec<usize> = (0..n).filter(|&i| live[i]).collect();
            let mut local = vec![usize::MAX; n];
            for (k, &i) in index.iter().enumerate() {
                local[i] = k;
            }
            let mut a = Matrix::identity(index.len());
            for (k, &i) in index.iter().enumerate() {
                for (j, p) in t.row(i) {
                    if live[j] {
                        a[(k, local[j])] -= alpha[i] * p;
                    }
                }
            }
            let b = injected.select(&index, &(0..m).collect::<Vec<_>>());
            let x = linear_solve(&a, &b)?;
            let mut scores = Matrix::zeros(n, m);
            for (k, &i) in index.iter().enumerate() {
                scores.row_mut(i).copy_from_slice(x.row(k));
            }
            WalkResult::direct(y.with_scores(scores), 0)
        }
        Route::Iterative | Route::SecondOrder { .. } => {
            // yᵢ ← αᵢ Σ_j p_ji y_j + (1 − αᵢ) yᵢ⁰ over the reversed graph,
            // whose edge j → i carries T_ij
            let rev = t.reversed();
            let update = |cur: &Matrix, out: &mut Matrix| {
                out.as_mut_slice().iter_mut().for_each(|x| *x = 0.0);
                for j in (0..n).filter(|&j| live[j]) {
                    for (i, p) in rev.row(j) {
                        if live[i] {
                            for (o, &v) in out.row_mut(i).iter_mut().zip(cur.row(j)) {
                                *o += p * v;
                            }
                        }
                    }
                }
                for (i, &a) in alpha.iter().enumerate() {
                    for (o, &b) in out.row_mut(i).iter_mut().zip(injected.row(i)) {
                        *o = a * *o + b;
                    }
                }
            };
            let mut y0 = y.scores().clone();
            for i in (0..n).filter(|&i| !live[i]) {
                y0.row_mut(i).iter_mut().for_each(|x| *x = 0.0);
            }
            let fp = opts.iterate(update, y0)?;
            WalkResult::iterated(y.with_scores(fp.value), fp.trace)
        }
        Route::MonteCarlo { walks, seed } => {
            if walks == 0 {
                return Err(Error::InvalidConfig("walk count must be at least 1".into()));
            }
            let walker = StoppingWalk::new(g, alpha.iter().map(|a| 1.0 - a).collect());
            let mut scores = Matrix::zeros(n, m);
            for i in (0..n).filter(|&i| live[i]) {
                let dist = walker.end_distribution(i, walks, seed)?;
                mix_rows(&dist, y, scores.row_mut(i));
            }
            WalkResult::direct(y.with_scores(scores), 0)
        }
    };
    Ok(result)
}

/// The 2n×2n walk over shadow vertices (ids `0..n`, absorbing) followed by
/// the graph nodes (ids `n..2n`). Node `i` jumps to its shadow with
/// probability `1 − αᵢ` and follows `T` with probability `αᵢ`.
pub fn augmented_matrix(
    g: &Graph,
    injection: &Injection,
    policy: DanglingPolicy,
) -> Result<TransitionMatrix> {
    let n = g.node_count();
    if injection.len() != n {
        return Err(Error::SizeMismatch(format!(
            "{} injection values for {n} nodes",
            injection.len()
        )));
    }
    let t = transition_matrix(g, policy)?;
    let alpha = injection.values();
    let mut lists: Vec<Vec<(usize, f64)>> = (0..n).map(|s| vec![(s, 1.0)]).collect();
    for (i, &a) in alpha.iter().enumerate() {
        let mut row = Vec::with_capacity(t.matrix().row_len(i) + 1);
        if a < 1.0 {
            row.push((i, 1.0 - a));
        }
        if a > 0.0 {
            row.extend(t.row(i).map(|(j, p)| (n + j, a * p)));
        }
        lists.push(row);
    }
    Ok(TransitionMatrix::new(
        SparseMatrix::from_row_lists(2 * n, lists),
        TransitionKind::Augmented,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::solve::fixed_point;
    use crate::walk::{lp_closed_form, regularize_scores, Kernel};

    fn edge() -> (Graph, LabelMatrix) {
        let g = build_graph(&[(0, 1, 1.0)], 2, false).unwrap();
        let y = LabelMatrix::from_hard(2, 1, &[(0, 0)]).unwrap();
        (g, y)
    }

    #[test]
    fn single_edge_default_injection() {
        let (g, y) = edge();
        let inj = Injection::default_for(&y);
        for route in [Route::Direct, Route::Iterative] {
            let mut opts = SolverOptions::with_route(route);
            opts.tol = 1e-12;
            let r = adsorption(&g, &y, &inj, &opts).unwrap();
            assert!((r.labels.row(0)[0] - 1.0).abs() < 1e-10);
            assert!((r.labels.row(1)[0] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reductions_on_a_small_graph() {
        let g = build_graph(
            &[
                (0, 1, 1.0),
                (1, 2, 2.0),
                (2, 3, 1.0),
                (3, 0, 0.5),
                (1, 3, 1.0),
            ],
            4,
            false,
        )
        .unwrap();
        let y = LabelMatrix::from_hard(4, 2, &[(0, 0), (2, 1)]).unwrap();
        let opts = SolverOptions::default();

        let uniform = adsorption(&g, &y, &Injection::uniform(4, 0.4).unwrap(), &opts).unwrap();
        let (reg, _) = regularize_scores(&g, &y, 0.4, Kernel::Transition, &opts).unwrap();
        assert!(uniform.labels.scores().max_abs_diff(&reg) <= 1e-12);

        let lp_like =
            adsorption(&g, &y, &Injection::for_labels(&y, 0.0, 1.0).unwrap(), &opts).unwrap();
        let lp = lp_closed_form(&g, &y).unwrap();
        assert!(lp_like.labels.scores().max_abs_diff(lp.labels.scores()) <= 1e-12);
    }

    #[test]
    fn routes_agree_on_directed_graph() {
        let g = build_graph(
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 0, 3.0),
                (2, 1, 1.0),
                (1, 0, 2.0),
            ],
            3,
            true,
        )
        .unwrap();
        let y = LabelMatrix::from_hard(3, 2, &[(0, 0), (1, 1)]).unwrap();
        let inj = Injection::default_for(&y);
        let direct = adsorption(&g, &y, &inj, &SolverOptions::default()).unwrap();
        let mut opts = SolverOptions::with_route(Route::Iterative);
        opts.tol = 1e-13;
        let it = adsorption(&g, &y, &inj, &opts).unwrap();
        assert!(direct.labels.scores().max_abs_diff(it.labels.scores()) <= 1e-10);
    }

    #[test]
    fn augmented_walk_limit_matches_closed_form() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)], 4, false).unwrap();
        let y = LabelMatrix::from_hard(4, 2, &[(0, 0), (3, 1)]).unwrap();
        let inj = Injection::default_for(&y);
        let r = augmented_matrix(&g, &inj, DanglingPolicy::Reject).unwrap();
        // shadows carry Y⁰; the absorbed label mass seen from node i is
        // row n + i of R^∞ applied to [Y⁰; 0]
        let mut z0 = Matrix::zeros(8, 2);
        for i in 0..4 {
            z0.row_mut(i).copy_from_slice(y.row(i));
        }
        let fp = fixed_point(|z, out| r.apply_into(z, out), z0, 1e-14, 100_000).unwrap();
        let direct = adsorption(&g, &y, &inj, &SolverOptions::default()).unwrap();
        for i in 0..4 {
            for c in 0..2 {
                assert!((fp.value[(4 + i, c)] - direct.labels.row(i)[c]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn never_terminating_walk() {
        let (g, y) = edge();
        let inj = Injection::uniform(2, 1.0).unwrap();
        assert!(matches!(
            adsorption(&g, &y, &inj, &SolverOptions::default()),
            Err(Error::NonTerminatingWalk)
        ));
    }

    #[test]
    fn out_of_range_injection() {
        assert!(matches!(
            Injection::new(vec![0.5, 1.5]),
            Err(Error::InjectionOutOfRange { node: 1, .. })
        ));
    }

    #[test]
    fn unseeded_component_is_zero() {
        let g = build_graph(&[(0, 1, 1.0), (2, 3, 1.0)], 4, false).unwrap();
        let y = LabelMatrix::from_hard(4, 1, &[(0, 0)]).unwrap();
        let inj = Injection::default_for(&y);
        for route in [
            Route::Direct,
            Route::Iterative,
            Route::MonteCarlo {
                walks: 100,
                seed: 1,
            },
        ] {
            let r = adsorption(&g, &y, &inj, &SolverOptions::with_route(route)).unwrap();
            assert_eq!(r.labels.row(2), &[0.0]);
            assert_eq!(r.labels.row(3), &[0.0]);
        }
    }
}
