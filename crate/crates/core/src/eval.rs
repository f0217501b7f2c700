//! Holdout evaluation and a planted-partition graph generator.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{run_method, MethodConfig};
use crate::graph::{build_graph, Graph, LabelMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Correct predictions over withheld nodes that received a label.
    pub accuracy: f64,
    /// Fraction of the nodes unlabeled in the run that got a nonzero row.
    pub coverage: f64,
    pub withheld: usize,
    pub correct: usize,
    /// Withheld nodes left without a label.
    pub uncovered: usize,
    pub iterations: usize,
    pub wall_time: Duration,
}

/// Withholds `⌈fraction · l⌉` of the `l` seed labels (chosen by a shuffle
/// seeded with `seed`), runs the method on the rest and scores the argmax
/// predictions on the withheld nodes.
pub fn holdout_evaluate(
    g: &Graph,
    y: &LabelMatrix,
    cfg: &MethodConfig,
    fraction: f64,
    seed: u64,
) -> Result<EvalReport> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "holdout fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let l = y.seeds().len();
    if l == 0 {
        return Err(Error::NoLabeledNodes);
    }
    let k = (fraction * l as f64).ceil() as usize;
    if k >= l {
        return Err(Error::AllLabelsWithheld);
    }
    let mut order = y.seeds().to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut withheld = order[..k].to_vec();
    withheld.sort_unstable();

    let mut scores = y.scores().clone();
    for &i in &withheld {
        scores.row_mut(i).iter_mut().for_each(|x| *x = 0.0);
    }
    let train = LabelMatrix::new(scores)?;

    let start = Instant::now();
    let result = run_method(g, &train, cfg)?;
    let wall_time = start.elapsed();

    let mut correct = 0;
    let mut uncovered = 0;
    for &i in &withheld {
        match result.labels.argmax(i) {
            Some(c) if Some(c) == y.argmax(i) => correct += 1,
            Some(_) => {}
            None => uncovered += 1,
        }
    }
    let covered = withheld.len() - uncovered;
    let unlabeled: Vec<usize> = (0..g.node_count()).filter(|&i| !train.is_seed(i)).collect();
    let filled = unlabeled
        .iter()
        .filter(|&&i| result.labels.is_labeled(i))
        .count();
    Ok(EvalReport {
        accuracy: if covered == 0 {
            0.0
        } else {
            correct as f64 / covered as f64
        },
        coverage: if unlabeled.is_empty() {
            1.0
        } else {
            filled as f64 / unlabeled.len() as f64
        },
        withheld: withheld.len(),
        correct,
        uncovered,
        iterations: result.iterations_used,
        wall_time,
    })
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: Graph,
    /// Revealed seed labels.
    pub labels: LabelMatrix,
    /// Block of every node.
    pub truth: Vec<usize>,
}

/// Undirected planted-partition graph: `blocks` contiguous id ranges, edges
/// inside a block with probability `p_in` and across blocks with `p_out`.
/// In each block `⌈labeled_fraction · size⌉` nodes reveal their block.
pub fn generate_planted(
    n: usize,
    blocks: usize,
    p_in: f64,
    p_out: f64,
    labeled_fraction: f64,
    seed: u64,
) -> Result<Planted> {
    if blocks < 2 {
        return Err(Error::InvalidConfig(
            "at least two blocks are needed".into(),
        ));
    }
    if !(0.0 <= p_out && p_out < p_in && p_in <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "need 0 <= p_out < p_in <= 1, got p_in = {p_in}, p_out = {p_out}"
        )));
    }
    if !(0.0..=1.0).contains(&labeled_fraction) {
        return Err(Error::InvalidConfig(format!(
            "labeled fraction must lie in [0, 1], got {labeled_fraction}"
        )));
    }
    let (base, extra) = (n / blocks, n % blocks);
    let mut truth = Vec::with_capacity(n);
    let mut ranges = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        if size == 0 {
            return Err(Error::DegenerateBlock(b));
        }
        ranges.push(truth.len()..truth.len() + size);
        truth.extend(std::iter::repeat_n(b, size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if truth[i] == truth[j] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    let graph = build_graph(&edges, n, false)?;

    let mut revealed = Vec::new();
    for (b, range) in ranges.into_iter().enumerate() {
        let count = (labeled_fraction * range.len() as f64).ceil() as usize;
        let mut nodes: Vec<usize> = range.collect();
        nodes.shuffle(&mut rng);
        revealed.extend(nodes[..count].iter().map(|&i| (i, b)));
    }
    revealed.sort_unstable();
    let labels = LabelMatrix::from_hard(n, blocks, &revealed)?;
    Ok(Planted {
        graph,
        labels,
        truth,
    })
}
