use crate::matrix::{Matrix, SparseMatrix};
use crate::{Error, Result};

use super::{Graph, ROW_SUM_TOL};

/// What to do with nodes whose out-degree sum is zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DanglingPolicy {
    #[default]
    Reject,
    /// Give the node a self-loop, making it absorbing.
    SelfLoop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    /// `T = D⁻¹W`.
    RowStochastic,
    /// `𝓟 = D^(-1/2) W D^(-1/2)`; not stochastic.
    SymmetricKernel,
    /// Label propagation `P`: labeled rows are indicator rows.
    AbsorbingBlock,
    /// Adsorption matrix over shadow vertices followed by graph nodes.
    Augmented,
    /// Transpose of a row-stochastic matrix: row `j` lists `(i, T_ij)`.
    Reversed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    matrix: SparseMatrix,
    kind: TransitionKind,
}

impl TransitionMatrix {
    pub(crate) fn new(matrix: SparseMatrix, kind: TransitionKind) -> Self {
        debug_assert!(
            !matches!(
                kind,
                TransitionKind::RowStochastic
                    | TransitionKind::AbsorbingBlock
                    | TransitionKind::Augmented
            ) || (0..matrix.rows()).all(|i| (matrix.row_sum(i) - 1.0).abs() <= ROW_SUM_TOL),
            "rows must be stochastic"
        );
        Self { matrix, kind }
    }

    pub fn kind(&self) -> TransitionKind {
        self.kind
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn row(&self, i: usize) -> impl ExactSizeIterator<Item = (usize, f64)> + '_ {
        self.matrix.row(i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn apply(&self, y: &Matrix) -> Matrix {
        self.matrix.mul_dense(y)
    }

    pub fn apply_into(&self, y: &Matrix, out: &mut Matrix) {
        self.matrix.mul_dense_into(y, out)
    }

    pub fn to_dense(&self) -> Matrix {
        self.matrix.to_dense()
    }

    /// Transpose of a row-stochastic matrix, for reversed-edge iterations.
    pub fn reversed(&self) -> TransitionMatrix {
        TransitionMatrix {
            matrix: self.matrix.transpose(),
            kind: TransitionKind::Reversed,
        }
    }
}

/// `T = D⁻¹W`, normalizing by out-degree.
pub fn transition_matrix(g: &Graph, policy: DanglingPolicy) -> Result<TransitionMatrix> {
    let n = g.node_count();
    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        if g.degree(i) > 0.0 {
            lists.push(g.out_probabilities(i).collect());
        } else {
            match policy {
                DanglingPolicy::Reject => return Err(Error::DanglingNode(i)),
                DanglingPolicy::SelfLoop => lists.push(vec![(i, 1.0)]),
            }
        }
    }
    Ok(TransitionMatrix::new(
        SparseMatrix::from_row_lists(n, lists),
        TransitionKind::RowStochastic,
    ))
}

/// `Tᵀ` with row `j` listing `(i, T_ij)` over the in-edges of `j`. Dangling
/// nodes contribute nothing instead of being rejected, so this is usable on any
/// graph; values come from [`Graph::out_probabilities`] unchanged.
pub fn reversed_transition(g: &Graph) -> TransitionMatrix {
    let n = g.node_count();
    let mut lists = vec![Vec::new(); n];
    for i in 0..n {
        for (j, p) in g.out_probabilities(i) {
            lists[j].push((i, p));
        }
    }
    TransitionMatrix::new(
        SparseMatrix::from_row_lists(n, lists),
        TransitionKind::Reversed,
    )
}

/// Label propagation walk matrix: rows of `labeled` nodes are `e_i`, the rest
/// are rows of `T`. Dangling unlabeled nodes are rejected.
pub fn absorbing_block(g: &Graph, labeled: &[bool]) -> Result<TransitionMatrix> {
    let n = g.node_count();
    assert_eq!(labeled.len(), n);
    let mut lists = Vec::with_capacity(n);
    for (i, &is_labeled) in labeled.iter().enumerate() {
        if is_labeled {
            lists.push(vec![(i, 1.0)]);
        } else if g.degree(i) > 0.0 {
            lists.push(g.out_probabilities(i).collect());
        } else {
            return Err(Error::DanglingNode(i));
        }
    }
    Ok(TransitionMatrix::new(
        SparseMatrix::from_row_lists(n, lists),
        TransitionKind::AbsorbingBlock,
    ))
}

/// `L = D − W`, or `𝓛 = D^(-1/2) L D^(-1/2)` when `normalized`.
pub fn laplacian(g: &Graph, normalized: bool) -> Result<SparseMatrix> {
    let n = g.node_count();
    let d = g.degrees();
    if normalized {
        if let Some(i) = d.iter().position(|&x| x <= 0.0) {
            return Err(Error::DanglingNode(i));
        }
    }
    let lists = (0..n)
        .map(|i| {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(g.out_edges(i).len() + 1);
            let mut diag = d[i];
            for (j, w) in g.out_edges(i) {
                if j == i {
                    diag -= w;
                } else {
                    row.push((j, -w));
                }
            }
            row.push((i, diag));
            if normalized {
                for (j, v) in row.iter_mut() {
                    *v /= (d[i] * d[*j]).sqrt();
                }
            }
            row
        })
        .collect();
    Ok(SparseMatrix::from_row_lists(n, lists))
}

/// `𝓟 = D^(-1/2) W D^(-1/2)` for a symmetric weight matrix.
pub fn symmetric_normalize(g: &Graph) -> Result<TransitionMatrix> {
    if !g.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    let d = g.degrees();
    if let Some(i) = d.iter().position(|&x| x <= 0.0) {
        return Err(Error::DanglingNode(i));
    }
    let lists = (0..g.node_count())
        .map(|i| {
            g.out_edges(i)
                .map(|(j, w)| (j, w / (d[i] * d[j]).sqrt()))
                .collect()
        })
        .collect();
    Ok(TransitionMatrix::new(
        SparseMatrix::from_row_lists(g.node_count(), lists),
        TransitionKind::SymmetricKernel,
    ))
}
