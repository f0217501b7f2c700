use super::{Graph, LabelMatrix};

/// Permutation placing labeled nodes at internal ids `0..l`.
///
/// Labeled nodes keep their relative order, as do unlabeled ones, so an
/// already-ordered input maps to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeOrdering {
    to_internal: Vec<usize>,
    to_external: Vec<usize>,
    labeled: usize,
}

impl NodeOrdering {
    pub fn labeled_first(labeled: &[bool]) -> Self {
        let mut to_external: Vec<usize> = (0..labeled.len()).filter(|&i| labeled[i]).collect();
        let l = to_external.len();
        to_external.extend((0..labeled.len()).filter(|&i| !labeled[i]));
        let mut to_internal = vec![0; labeled.len()];
        for (internal, &external) in to_external.iter().enumerate() {
            to_internal[external] = internal;
        }
        Self {
            to_internal,
            to_external,
            labeled: l,
        }
    }

    pub fn labeled_count(&self) -> usize {
        self.labeled
    }

    pub fn to_internal(&self, external: usize) -> usize {
        self.to_internal[external]
    }

    pub fn to_external(&self, internal: usize) -> usize {
        self.to_external[internal]
    }

    /// `external → internal` as a slice, suitable for [`Graph::permute`].
    pub fn forward(&self) -> &[usize] {
        &self.to_internal
    }

    /// `internal → external`.
    pub fn inverse(&self) -> &[usize] {
        &self.to_external
    }

    pub fn is_identity(&self) -> bool {
        self.to_external.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn restore_graph(&self, g: &Graph) -> Graph {
        g.permute(&self.to_external)
    }

    pub fn restore_labels(&self, y: &LabelMatrix) -> LabelMatrix {
        y.permute(&self.to_external)
    }
}

/// Permutes graph and labels so the seed nodes come first.
pub fn reorder_labeled_first(g: &Graph, y: &LabelMatrix) -> (Graph, LabelMatrix, NodeOrdering) {
    let ord = NodeOrdering::labeled_first(y.seed_mask());
    (g.permute(ord.forward()), y.permute(ord.forward()), ord)
}
