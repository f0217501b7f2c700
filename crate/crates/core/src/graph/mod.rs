//! Weighted graphs, label matrices and the walk matrices derived from them.

mod labels;
mod ordering;
mod transition;

use std::collections::{HashSet, VecDeque};

pub(crate) use labels::argmax;
pub use labels::{normalize_row, LabelMatrix};
pub use ordering::{reorder_labeled_first, NodeOrdering};
pub use transition::{
    absorbing_block, laplacian, reversed_transition, symmetric_normalize, transition_matrix,
    DanglingPolicy, TransitionKind, TransitionMatrix,
};

use crate::matrix::SparseMatrix;
use crate::{Error, Result};

/// Tolerance for row sums of stochastic matrices and label rows.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Tolerance for exact algebraic identities such as `𝓟 + 𝓛 = I`.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// A weighted graph over nodes `0..n`.
///
/// Undirected edges are stored once (with `src <= dst`) and expanded into both
/// directions in the adjacency. Adjacency is kept in CSR form for out-edges and
/// in-edges; rows are sorted by neighbor id.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    out: SparseMatrix,
    inc: SparseMatrix,
    degree: Vec<f64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.directed == other.directed && self.edges == other.edges
    }
}

/// Builds a graph from `(src, dst, weight)` triples.
///
/// Zero weights are dropped. A pair given twice (in either orientation for
/// undirected graphs) is rejected.
pub fn build_graph(edge_list: &[(usize, usize, f64)], n: usize, directed: bool) -> Result<Graph> {
    let mut seen = HashSet::with_capacity(edge_list.len());
    let mut edges = Vec::with_capacity(edge_list.len());
    for &(src, dst, weight) in edge_list {
        for node in [src, dst] {
            if node >= n {
                return Err(Error::NodeIdOutOfRange { node, n });
            }
        }
        if !weight.is_finite() {
            return Err(Error::NonFiniteWeight { src, dst });
        }
        if weight < 0.0 {
            return Err(Error::NegativeWeight { src, dst, weight });
        }
        let key = if directed {
            (src, dst)
        } else {
            (src.min(dst), src.max(dst))
        };
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { src, dst });
        }
        if weight > 0.0 {
            edges.push(Edge {
                src: key.0,
                dst: key.1,
                weight,
            });
        }
    }
    Ok(Graph::from_canonical(n, directed, edges))
}

impl Graph {
    fn from_canonical(n: usize, directed: bool, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| (e.src, e.dst));
        let mut lists = vec![Vec::new(); n];
        for e in &edges {
            lists[e.src].push((e.dst, e.weight));
            if !directed && e.src != e.dst {
                lists[e.dst].push((e.src, e.weight));
            }
        }
        let out = SparseMatrix::from_row_lists(n, lists);
        let inc = out.transpose();
        let degree = (0..n).map(|i| out.row_sum(i)).collect();
        Self {
            n,
            directed,
            edges,
            out,
            inc,
            degree,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Stored edges in canonical order (undirected edges once, `src <= dst`).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The expanded weight matrix W.
    pub fn weights(&self) -> &SparseMatrix {
        &self.out
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.out.get(i, j)
    }

    /// Out-neighbors of `i` with edge weights, sorted by neighbor id.
    pub fn out_edges(&self, i: usize) -> impl ExactSizeIterator<Item = (usize, f64)> + '_ {
        self.out.row(i)
    }

    /// In-neighbors of `i` with edge weights, sorted by neighbor id.
    pub fn in_edges(&self, i: usize) -> impl ExactSizeIterator<Item = (usize, f64)> + '_ {
        self.inc.row(i)
    }

    /// Out-degree sum `d_i = Σ_j w_ij`.
    pub fn degree(&self, i: usize) -> f64 {
        self.degree[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    /// Transition probabilities `w_ij / d_i` of the out-edges of `i`; empty for
    /// dangling nodes. Every consumer of `T` goes through here so the values
    /// are bit-identical across methods.
    pub fn out_probabilities(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let d = self.degree[i];
        self.out.row(i).map(move |(j, w)| (j, w / d))
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.directed {
            return true;
        }
        (0..self.n).all(|i| {
            self.out.row(i).all(|(j, w)| {
                let back = self.out.get(j, i);
                (w - back).abs() <= IDENTITY_TOL * w.abs().max(back.abs()).max(1.0)
            })
        })
    }

    /// The same graph with every edge reversed.
    pub fn reversed(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                src: e.dst,
                dst: e.src,
                weight: e.weight,
            })
            .collect();
        Graph::from_canonical(self.n, true, edges)
    }

    /// Relabels node `i` as `new_id[i]`. `new_id` must be a permutation of `0..n`.
    pub fn permute(&self, new_id: &[usize]) -> Graph {
        assert_eq!(new_id.len(), self.n);
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (s, d) = (new_id[e.src], new_id[e.dst]);
                let (s, d) = if self.directed {
                    (s, d)
                } else {
                    (s.min(d), s.max(d))
                };
                Edge {
                    src: s,
                    dst: d,
                    weight: e.weight,
                }
            })
            .collect();
        Graph::from_canonical(self.n, self.directed, edges)
    }

    /// Nodes that have no directed positive-weight path to any node in `targets`.
    pub fn cannot_reach(&self, targets: &[bool]) -> Vec<usize> {
        assert_eq!(targets.len(), self.n);
        let mut reached = targets.to_vec();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&i| targets[i]).collect();
        while let Some(v) = queue.pop_front() {
            for (u, _) in self.in_edges(v) {
                if !reached[u] {
                    reached[u] = true;
                    queue.push_back(u);
                }
            }
        }
        (0..self.n).filter(|&i| !reached[i]).collect()
    }
}

/// True iff every node outside `labeled` can reach a labeled node.
pub fn is_label_connected(g: &Graph, labeled: &[usize]) -> bool {
    let mut mask = vec![false; g.node_count()];
    for &i in labeled {
        mask[i] = true;
    }
    g.cannot_reach(&mask).is_empty()
}

/// Errors with the first node that cannot reach the labeled set.
pub(crate) fn require_label_connected(g: &Graph, y: &LabelMatrix) -> Result<()> {
    if y.seeds().is_empty() {
        return Err(Error::NoLabeledNodes);
    }
    match g.cannot_reach(y.seed_mask()).first() {
        Some(&node) => Err(Error::NotLabelConnected { node }),
        None => Ok(()),
    }
}
