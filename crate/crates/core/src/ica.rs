//! Iterative classification: repeated local classification of the unlabeled
//! nodes from features of their labeled neighborhoods.
//!
//! Updates are synchronous: every node in iteration t is classified from the
//! labels of iteration t − 1.

use rayon::prelude::*;

use crate::graph::{argmax, normalize_row, Graph, LabelMatrix};
use crate::matrix::Matrix;
use crate::{Error, Result};

pub const DEFAULT_TAU: usize = 50;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ClassifierKind {
    /// Weighted average of neighbor label distributions.
    #[default]
    WeightedVote,
    /// Labels of the seed node with the closest feature vector.
    NearestNeighbor,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocalClassifierSpec {
    pub kind: ClassifierKind,
    /// Vote with neighbors' argmax labels and keep a single label per node.
    /// This is the map/reduce engine's update rule.
    pub hard: bool,
    /// Accepted for parametric classifiers; vote and nearest neighbor have
    /// nothing to retrain.
    pub retrain_each_iteration: bool,
    /// Keep only the k most probable labels of each inferred row.
    pub top_k: Option<usize>,
}

impl LocalClassifierSpec {
    pub fn vote() -> Self {
        Self::default()
    }

    pub fn hard_vote() -> Self {
        Self {
            hard: true,
            ..Self::default()
        }
    }

    pub fn nearest_neighbor() -> Self {
        Self {
            kind: ClassifierKind::NearestNeighbor,
            ..Self::default()
        }
    }
}

/// Per-node feature vectors: optional node features followed by link
/// features (one block of m label frequencies, or in- then out-blocks on a
/// directed graph).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Matrix,
    node_width: usize,
}

impl FeatureMatrix {
    pub fn build(g: &Graph, y: &LabelMatrix, node_features: Option<&Matrix>) -> Result<Self> {
        let n = g.node_count();
        let node_width = match node_features {
            Some(f) if f.rows() != n => {
                return Err(Error::SizeMismatch(format!(
                    "{} node feature rows for {n} nodes",
                    f.rows()
                )))
            }
            Some(f) => f.cols(),
            None => 0,
        };
        let blocks = if g.is_directed() { 2 } else { 1 };
        let width = node_width + blocks * y.label_count();
        let mut data = Matrix::zeros(n, width);
        data.row_chunks_mut().enumerate().for_each(|(i, row)| {
            if let Some(f) = node_features {
                row[..node_width].copy_from_slice(f.row(i));
            }
            row[node_width..].copy_from_slice(&link_features(g, y, i));
        });
        Ok(Self { data, node_width })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.data.row(i)
    }

    pub fn node_width(&self) -> usize {
        self.node_width
    }

    pub fn link_block(&self, i: usize) -> &[f64] {
        &self.data.row(i)[self.node_width..]
    }

    pub fn width(&self) -> usize {
        self.data.cols()
    }
}

fn accumulate(edges: impl Iterator<Item = (usize, f64)>, y: &LabelMatrix, out: &mut [f64]) {
    for (j, w) in edges {
        if y.is_labeled(j) {
            for (o, &v) in out.iter_mut().zip(y.row(j)) {
                *o += w * v;
            }
        }
    }
    normalize_row(out);
}

/// Weighted label frequencies over the labeled neighbors of `i`, each block
/// summing to 1 or all zero. Directed graphs get the in-neighbor block first.
pub fn link_features(g: &Graph, y: &LabelMatrix, i: usize) -> Vec<f64> {
    let m = y.label_count();
    if g.is_directed() {
        let mut f = vec![0.0; 2 * m];
        let (inc, out) = f.split_at_mut(m);
        accumulate(g.in_edges(i), y, inc);
        accumulate(g.out_edges(i), y, out);
        f
    } else {
        let mut f = vec![0.0; m];
        accumulate(g.out_edges(i), y, &mut f);
        f
    }
}

/// `Σ_j T_ij y_j` over the out-neighbors of `i`, in neighbor-id order.
fn vote_tally(g: &Graph, y: &LabelMatrix, i: usize, acc: &mut [f64]) {
    acc.iter_mut().for_each(|a| *a = 0.0);
    for (j, p) in g.out_probabilities(i) {
        for (a, &v) in acc.iter_mut().zip(y.row(j)) {
            *a += p * v;
        }
    }
}

/// Unnormalized tally of neighbors' argmax labels, one `T_ij` per neighbor.
fn hard_tally(g: &Graph, hard: &[Option<usize>], i: usize, acc: &mut [f64]) {
    acc.iter_mut().for_each(|a| *a = 0.0);
    for (j, p) in g.out_probabilities(i) {
        if let Some(c) = hard[j] {
            acc[c] += p;
        }
    }
}

/// Weighted vote of the neighbors' label distributions, normalized. All zero
/// when no neighbor is labeled.
pub fn classify_weighted_vote(g: &Graph, y: &LabelMatrix, i: usize) -> Vec<f64> {
    let mut acc = vec![0.0; y.label_count()];
    vote_tally(g, y, i, &mut acc);
    normalize_row(&mut acc);
    acc
}

/// Labels of the seed whose feature vector is nearest to node `i`'s
/// (euclidean, ties to the lower node id).
pub fn classify_nearest_neighbor(
    g: &Graph,
    y: &LabelMatrix,
    phi: &FeatureMatrix,
    i: usize,
) -> Result<Vec<f64>> {
    debug_assert_eq!(g.node_count(), y.node_count());
    let target = phi.row(i);
    let mut best: Option<(usize, f64)> = None;
    for &s in y.seeds() {
        let d: f64 = phi
            .row(s)
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((s, d));
        }
    }
    best.map(|(s, _)| y.row(s).to_vec())
        .ok_or(Error::NoLabeledNodes)
}

/// Keeps the `k` largest entries (ties to the lower label id) and
/// renormalizes.
pub fn prune_top_k(row: &mut [f64], k: usize) {
    if k >= row.len() {
        return;
    }
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    for &c in &order[k..] {
        row[c] = 0.0;
    }
    normalize_row(row);
}

#[derive(Debug, Clone)]
pub struct IcaRun {
    pub labels: LabelMatrix,
    pub iterations: usize,
    /// Number of nodes whose argmax label changed, per iteration.
    pub changes: Vec<usize>,
    /// True when an iteration changed no label before `tau` ran out.
    pub converged: bool,
}

pub fn ica_run(
    g: &Graph,
    y0: &LabelMatrix,
    spec: &LocalClassifierSpec,
    tau: usize,
) -> Result<IcaRun> {
    ica_run_with_features(g, y0, spec, tau, None)
}

/// Runs at most `tau` synchronous iterations, stopping early once an
/// iteration changes no argmax label.
///
/// Seed rows are never modified. A node whose labeled neighborhood is empty
/// (and which has no node features) keeps its previous row, so components
/// without seeds stay unlabeled.
pub fn ica_run_with_features(
    g: &Graph,
    y0: &LabelMatrix,
    spec: &LocalClassifierSpec,
    tau: usize,
    node_features: Option<&Matrix>,
) -> Result<IcaRun> {
    let n = g.node_count();
    if y0.node_count() != n {
        return Err(Error::SizeMismatch(format!(
            "graph has {n} nodes, label matrix {} rows",
            y0.node_count()
        )));
    }
    if tau == 0 {
        return Err(Error::InvalidConfig("tau must be at least 1".into()));
    }
    if spec.top_k == Some(0) {
        return Err(Error::InvalidConfig("top_k must be at least 1".into()));
    }
    if spec.kind == ClassifierKind::NearestNeighbor && y0.seeds().is_empty() {
        return Err(Error::NoLabeledNodes);
    }
    let m = y0.label_count();
    let mut state = y0.clone();
    let mut hard = state.hard_labels();
    let mut changes = Vec::new();
    let mut converged = false;

    for _ in 0..tau {
        let phi = match spec.kind {
            ClassifierKind::NearestNeighbor => {
                Some(FeatureMatrix::build(g, &state, node_features)?)
            }
            ClassifierKind::WeightedVote => None,
        };
        let mut next = state.scores().clone();
        next.row_chunks_mut()
            .enumerate()
            .try_for_each(|(i, row)| -> Result<()> {
                if y0.is_seed(i) {
                    return Ok(());
                }
                let mut new = vec![0.0; m];
                let assigned = match (spec.kind, spec.hard) {
                    (ClassifierKind::WeightedVote, true) => {
                        hard_tally(g, &hard, i, &mut new);
                        match argmax(&new) {
                            Some(c) => {
                                new.iter_mut().for_each(|x| *x = 0.0);
                                new[c] = 1.0;
                                true
                            }
                            None => false,
                        }
                    }
                    (ClassifierKind::WeightedVote, false) => {
                        vote_tally(g, &state, i, &mut new);
                        normalize_row(&mut new)
                    }
                    (ClassifierKind::NearestNeighbor, _) => {
                        let phi = phi.as_ref().expect("built above");
                        let empty = phi.link_block(i).iter().all(|&x| x == 0.0);
                        if empty && phi.node_width() == 0 {
                            false
                        } else {
                            new = classify_nearest_neighbor(g, &state, phi, i)?;
                            if spec.hard {
                                let c = argmax(&new).expect("seed rows are nonzero");
                                new.iter_mut().for_each(|x| *x = 0.0);
                                new[c] = 1.0;
                            }
                            true
                        }
                    }
                };
                if assigned {
                    if let Some(k) = spec.top_k {
                        prune_top_k(&mut new, k);
                    }
                    row.copy_from_slice(&new);
                }
                Ok(())
            })?;
        state = y0.with_scores(next);
        let new_hard = state.hard_labels();
        let changed = new_hard.iter().zip(&hard).filter(|(a, b)| a != b).count();
        hard = new_hard;
        changes.push(changed);
        if changed == 0 {
            converged = true;
            break;
        }
    }
    Ok(IcaRun {
        labels: state,
        iterations: changes.len(),
        changes,
        converged,
    })
}
