use crate::matrix::Matrix;
use crate::{Error, Result};

use super::ROW_SUM_TOL;

/// An n×m matrix of label distributions.
///
/// Each row is either a probability distribution over the m labels or all
/// zero. The seed set is the set of nodes labeled in the input; it is carried
/// unchanged through every method so outputs remember which rows were given.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    scores: Matrix,
    seeds: Vec<usize>,
    seed_mask: Vec<bool>,
}

impl LabelMatrix {
    /// Validates an input label matrix; nonzero rows become the seed set.
    pub fn new(scores: Matrix) -> Result<Self> {
        for i in 0..scores.rows() {
            let row = scores.row(i);
            if row.iter().any(|&x| !x.is_finite() || x < 0.0) {
                return Err(Error::InvalidLabels(format!(
                    "row {i} has a negative or non-finite entry"
                )));
            }
            let s: f64 = row.iter().sum();
            if s != 0.0 && (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidLabels(format!("row {i} sums to {s}")));
            }
        }
        let seed_mask: Vec<bool> = (0..scores.rows())
            .map(|i| scores.row_sum(i) > 0.0)
            .collect();
        Ok(Self::with_seed_mask(scores, seed_mask))
    }

    /// One label per listed node, probability 1.
    pub fn from_hard(n: usize, m: usize, assignments: &[(usize, usize)]) -> Result<Self> {
        let mut scores = Matrix::zeros(n, m);
        for &(node, label) in assignments {
            if node >= n {
                return Err(Error::NodeIdOutOfRange { node, n });
            }
            if label >= m {
                return Err(Error::InvalidLabels(format!("label {label} >= m = {m}")));
            }
            scores.row_mut(node).iter_mut().for_each(|x| *x = 0.0);
            scores[(node, label)] = 1.0;
        }
        Self::new(scores)
    }

    pub fn unlabeled(n: usize, m: usize) -> Self {
        Self::with_seed_mask(Matrix::zeros(n, m), vec![false; n])
    }

    /// Output label matrix sharing the seed set of `self`; rows are not validated.
    pub(crate) fn with_scores(&self, scores: Matrix) -> Self {
        debug_assert_eq!(scores.rows(), self.node_count());
        Self::with_seed_mask(scores, self.seed_mask.clone())
    }

    pub(crate) fn with_seed_mask(scores: Matrix, seed_mask: Vec<bool>) -> Self {
        let seeds = (0..seed_mask.len()).filter(|&i| seed_mask[i]).collect();
        Self {
            scores,
            seeds,
            seed_mask,
        }
    }

    pub fn node_count(&self) -> usize {
        self.scores.rows()
    }

    pub fn label_count(&self) -> usize {
        self.scores.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.scores.row(i)
    }

    pub fn scores(&self) -> &Matrix {
        &self.scores
    }

    pub fn into_scores(self) -> Matrix {
        self.scores
    }

    /// Nodes labeled in the input, ascending.
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn seed_mask(&self) -> &[bool] {
        &self.seed_mask
    }

    pub fn is_seed(&self, i: usize) -> bool {
        self.seed_mask[i]
    }

    /// Whether row `i` currently carries any label mass.
    pub fn is_labeled(&self, i: usize) -> bool {
        self.scores.row(i).iter().any(|&x| x != 0.0)
    }

    /// Most probable label of row `i`; ties go to the lower label id.
    pub fn argmax(&self, i: usize) -> Option<usize> {
        argmax(self.scores.row(i))
    }

    pub fn hard_labels(&self) -> Vec<Option<usize>> {
        (0..self.node_count()).map(|i| self.argmax(i)).collect()
    }

    /// Relabels node `i` as `new_id[i]`.
    pub fn permute(&self, new_id: &[usize]) -> LabelMatrix {
        let n = self.node_count();
        let mut scores = Matrix::zeros(n, self.label_count());
        let mut mask = vec![false; n];
        for i in 0..n {
            scores.row_mut(new_id[i]).copy_from_slice(self.row(i));
            mask[new_id[i]] = self.seed_mask[i];
        }
        Self::with_seed_mask(scores, mask)
    }
}

/// Index of the largest entry, lower index on ties; `None` for an all-zero row.
pub(crate) fn argmax(row: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (c, &v) in row.iter().enumerate() {
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((c, v));
        }
    }
    best.map(|(c, _)| c)
}

/// Scales a nonnegative row to sum 1. Returns false (leaving the row
/// untouched) when it has no mass.
pub fn normalize_row(row: &mut [f64]) -> bool {
    let s: f64 = row.iter().sum();
    if s > 0.0 {
        row.iter_mut().for_each(|x| *x /= s);
        true
    } else {
        false
    }
}
