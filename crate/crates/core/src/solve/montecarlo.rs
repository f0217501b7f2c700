//! Random-walk simulation as a surrogate for the limiting walk distribution.
//!
//! Each walk draws from its own ChaCha8 stream keyed by `(seed, start)` with
//! the walk index as stream id, so results do not depend on how walks are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::Graph;
use crate::{Error, Result};

/// Per-walk step limit; exceeding it signals a walk that never terminates.
pub const WALK_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkSample {
    pub start: usize,
    pub end: usize,
    pub steps: usize,
    pub walk_index: u64,
    pub seed: u64,
}

/// A walk on `T = D⁻¹W` that, on arriving at node `v` (including the start),
/// halts with probability `stop[v]`. Label propagation uses `stop = 1` on
/// labeled nodes; regularization and adsorption use `1 − α`.
///
/// A node with no out-edges that does not stop stays where it is.
#[derive(Debug, Clone)]
pub struct StoppingWalk<'g> {
    graph: &'g Graph,
    stop: Vec<f64>,
    targets: Vec<Vec<usize>>,
    cumulative: Vec<Vec<f64>>,
}

impl<'g> StoppingWalk<'g> {
    pub fn new(graph: &'g Graph, stop: Vec<f64>) -> Self {
        assert_eq!(stop.len(), graph.node_count());
        let cumulative = (0..graph.node_count())
            .map(|i| {
                let mut acc = 0.0;
                graph
                    .out_edges(i)
                    .map(|(_, w)| {
                        acc += w;
                        acc
                    })
                    .collect()
            })
            .collect();
        let targets = (0..graph.node_count())
            .map(|i| graph.out_edges(i).map(|(j, _)| j).collect())
            .collect();
        Self {
            graph,
            stop,
            targets,
            cumulative,
        }
    }

    fn rng(seed: u64, start: usize, walk_index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&(start as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(walk_index);
        rng
    }

    pub fn sample(&self, start: usize, seed: u64, walk_index: u64) -> Result<WalkSample> {
        let mut rng = Self::rng(seed, start, walk_index);
        let mut v = start;
        let mut steps = 0;
        loop {
            let s = self.stop[v];
            if s >= 1.0 || (s > 0.0 && rng.random::<f64>() < s) {
                return Ok(WalkSample {
                    start,
                    end: v,
                    steps,
                    walk_index,
                    seed,
                });
            }
            if steps == WALK_STEP_CAP {
                return Err(Error::WalkLengthCap {
                    start,
                    cap: WALK_STEP_CAP,
                });
            }
            let cum = &self.cumulative[v];
            if let Some(&total) = cum.last() {
                let u = rng.random::<f64>() * total;
                let k = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
                v = self.targets[v][k];
            }
            steps += 1;
        }
    }

    /// End-node counts of `r` walks from `start`.
    pub fn end_counts(&self, start: usize, r: usize, seed: u64) -> Result<Vec<u64>> {
        let ends: Vec<usize> = (0..r as u64)
            .into_par_iter()
            .map(|w| self.sample(start, seed, w).map(|s| s.end))
            .collect::<Result<_>>()?;
        let mut counts = vec![0u64; self.graph.node_count()];
        for e in ends {
            counts[e] += 1;
        }
        Ok(counts)
    }

    /// Empirical end-node distribution of `r` walks from `start`.
    pub fn end_distribution(&self, start: usize, r: usize, seed: u64) -> Result<Vec<f64>> {
        let counts = self.end_counts(start, r, seed)?;
        Ok(counts.into_iter().map(|c| c as f64 / r as f64).collect())
    }
}

/// Absorption frequencies of `r` walks from `start` that halt at the first
/// labeled node. Indexed by node; zero off the labeled set.
pub fn monte_carlo_absorption(
    g: &Graph,
    labeled: &[usize],
    start: usize,
    r: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = g.node_count();
    if r == 0 {
        return Err(Error::InvalidConfig("walk count must be at least 1".into()));
    }
    if start >= n {
        return Err(Error::NodeIdOutOfRange { node: start, n });
    }
    let mut stop = vec![0.0; n];
    for &i in labeled {
        if i >= n {
            return Err(Error::NodeIdOutOfRange { node: i, n });
        }
        stop[i] = 1.0;
    }
    let mask: Vec<bool> = stop.iter().map(|&s| s > 0.0).collect();
    if labeled.is_empty() {
        return Err(Error::NoLabeledNodes);
    }
    if let Some(&node) = g.cannot_reach(&mask).first() {
        return Err(Error::NotLabelConnected { node });
    }
    StoppingWalk::new(g, stop).end_distribution(start, r, seed)
}
