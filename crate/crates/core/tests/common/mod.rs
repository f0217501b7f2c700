#![allow(dead_code)]

use nodeclass::{build_graph, Graph, LabelMatrix, Matrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph whose every node reaches node 0: a random tree oriented
/// toward 0 plus `extra` random edges, every node with an out-edge.
/// Undirected graphs get unit-to-3 weights on each undirected edge.
pub fn random_graph(n: usize, extra: usize, directed: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = std::collections::BTreeMap::new();
    let add = |a: usize,
               b: usize,
               w: f64,
               pairs: &mut std::collections::BTreeMap<(usize, usize), f64>| {
        if a == b {
            return;
        }
        let key = if directed {
            (a, b)
        } else {
            (a.min(b), a.max(b))
        };
        pairs.entry(key).or_insert(w);
    };
    for i in 1..n {
        let parent = rng.random_range(0..i);
        let w = rng.random_range(1.0..3.0);
        add(i, parent, w, &mut pairs);
    }
    if n > 1 {
        let w = rng.random_range(1.0..3.0);
        let j = rng.random_range(1..n);
        add(0, j, w, &mut pairs);
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let w = rng.random_range(0.5..3.0);
        add(a, b, w, &mut pairs);
    }
    let edges: Vec<(usize, usize, f64)> = pairs.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    build_graph(&edges, n, directed).unwrap()
}

/// Hard seeds on node 0 and a random `fraction` of the others, labels uniform over `m`.
pub fn random_seeds(n: usize, m: usize, fraction: f64, seed: u64) -> LabelMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let count = ((fraction * n as f64).ceil() as usize).max(1);
    let mut others: Vec<usize> = (1..n).collect();
    others.shuffle(&mut rng);
    let mut nodes = vec![0];
    nodes.extend(others.into_iter().take(count - 1));
    nodes.sort_unstable();
    let pairs: Vec<(usize, usize)> = nodes.iter().map(|&i| (i, rng.random_range(0..m))).collect();
    LabelMatrix::from_hard(n, m, &pairs).unwrap()
}

/// Dense `T = D⁻¹W` computed straight from the edge list.
pub fn dense_transition(g: &Graph) -> Matrix {
    let n = g.node_count();
    let mut w = Matrix::zeros(n, n);
    for e in g.edges() {
        w[(e.src, e.dst)] += e.weight;
        if !g.is_directed() {
            w[(e.dst, e.src)] += e.weight;
        }
    }
    for i in 0..n {
        let d: f64 = w.row(i).iter().sum();
        if d > 0.0 {
            w.row_mut(i).iter_mut().for_each(|x| *x /= d);
        }
    }
    w
}

pub fn normalized_rows(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let s: f64 = m.row(i).iter().sum();
        if s > 0.0 {
            out.row_mut(i).iter_mut().for_each(|x| *x /= s);
        }
    }
    out
}
