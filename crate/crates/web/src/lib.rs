//! Browser demo: two interleaved half-moons, a kNN graph over them and a
//! handful of seeds the user can toggle. The page asks for propagated scores,
//! residual traces per solver, and the gap between simulated walks and the
//! exact solve.

use std::collections::BTreeMap;

use nodeclass::induce::{knn_graph, KnnMode, Metric, PointSet};
use nodeclass::{
    build_graph, run_method, Graph, LabelMatrix, Method, MethodConfig, Result, Solver,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const LABELS: usize = 2;

#[wasm_bindgen]
pub struct Demo {
    points: Vec<[f64; 2]>,
    graph: Graph,
    seeds: BTreeMap<usize, usize>,
}

/// `per_moon` points on each half-moon with uniform jitter of half-width `noise`.
pub fn two_moons(per_moon: usize, noise: f64, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(2 * per_moon);
    for moon in 0..2 {
        for k in 0..per_moon {
            let theta = std::f64::consts::PI * k as f64 / (per_moon.max(2) - 1) as f64;
            let (x, y) = if moon == 0 {
                (theta.cos(), theta.sin())
            } else {
                (1.0 - theta.cos(), 0.5 - theta.sin())
            };
            pts.push([
                x + noise * rng.random_range(-1.0..=1.0),
                y + noise * rng.random_range(-1.0..=1.0),
            ]);
        }
    }
    pts
}

/// Symmetrized kNN graph with unit weights.
fn knn_union(points: &[[f64; 2]], k: usize) -> Result<Graph> {
    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    let directed = knn_graph(
        &PointSet::new(&rows, Metric::Euclidean)?,
        k,
        KnnMode::Directed,
        None,
    )?;
    let mut pairs: Vec<(usize, usize, f64)> = directed
        .edges()
        .iter()
        .map(|e| (e.src.min(e.dst), e.src.max(e.dst), 1.0))
        .collect();
    pairs.sort_by_key(|&(a, b, _)| (a, b));
    pairs.dedup_by_key(|&mut (a, b, _)| (a, b));
    build_graph(&pairs, points.len(), false)
}

fn method_config(method: &str) -> Result<MethodConfig> {
    Ok(MethodConfig::new(method.parse::<Method>()?))
}

fn js_err(e: nodeclass::Error) -> JsError {
    JsError::new(&e.to_string())
}

impl Demo {
    pub fn build(per_moon: usize, noise: f64, k: usize, seed: u64) -> Result<Demo> {
        let points = two_moons(per_moon, noise, seed);
        let graph = knn_union(&points, k)?;
        let mut seeds = BTreeMap::new();
        seeds.insert(0, 0);
        seeds.insert(2 * per_moon - 1, 1);
        Ok(Demo {
            points,
            graph,
            seeds,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn label_matrix(&self) -> Result<LabelMatrix> {
        let pairs: Vec<(usize, usize)> = self.seeds.iter().map(|(&i, &c)| (i, c)).collect();
        LabelMatrix::from_hard(self.points.len(), LABELS, &pairs)
    }

    /// Probability of label 1 per node, NaN where the node got no label.
    pub fn scores(&self, method: &str) -> Result<Vec<f64>> {
        let r = run_method(&self.graph, &self.label_matrix()?, &method_config(method)?)?;
        Ok((0..self.points.len())
            .map(|i| {
                if r.labels.is_labeled(i) {
                    r.labels.row(i)[1]
                } else {
                    f64::NAN
                }
            })
            .collect())
    }

    /// Per-iteration residuals of label propagation under `solver`.
    pub fn residuals(&self, solver: &str) -> Result<Vec<f64>> {
        let mut cfg = MethodConfig::new(Method::Lp);
        cfg.solver = Some(solver.parse::<Solver>()?);
        let r = run_method(&self.graph, &self.label_matrix()?, &cfg)?;
        Ok(r.trace.map(|t| t.residuals).unwrap_or_default())
    }

    /// Largest entrywise gap between simulated and exact label propagation.
    pub fn walk_gap(&self, walks: usize, seed: u64) -> Result<f64> {
        let y = self.label_matrix()?;
        let exact = run_method(&self.graph, &y, &MethodConfig::new(Method::Lp))?;
        let mut cfg = MethodConfig::new(Method::Lp);
        cfg.solver = Some(Solver::MonteCarlo);
        cfg.walks = walks;
        cfg.seed = seed;
        let sim = run_method(&self.graph, &y, &cfg)?;
        Ok(exact.labels.scores().max_abs_diff(sim.labels.scores()))
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(
        per_moon: usize,
        noise: f64,
        k: usize,
        seed: u64,
    ) -> std::result::Result<Demo, JsError> {
        Demo::build(per_moon, noise, k, seed).map_err(js_err)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Flat `x0, y0, x1, y1, …`.
    pub fn coordinates(&self) -> Vec<f64> {
        self.points.iter().flatten().copied().collect()
    }

    /// Flat `a0, b0, a1, b1, …` over undirected edges.
    pub fn edge_list(&self) -> Vec<u32> {
        self.graph
            .edges()
            .iter()
            .filter(|e| e.src < e.dst)
            .flat_map(|e| [e.src as u32, e.dst as u32])
            .collect()
    }

    /// Seed label per node, -1 where unseeded.
    pub fn seed_labels(&self) -> Vec<i32> {
        (0..self.points.len())
            .map(|i| self.seeds.get(&i).map_or(-1, |&c| c as i32))
            .collect()
    }

    /// Cycles node `i` through unseeded, label 0, label 1.
    pub fn toggle_seed(&mut self, i: usize) {
        if i >= self.points.len() {
            return;
        }
        match self.seeds.get(&i).copied() {
            None => {
                self.seeds.insert(i, 0);
            }
            Some(0) => {
                self.seeds.insert(i, 1);
            }
            Some(_) => {
                self.seeds.remove(&i);
            }
        }
    }

    /// Index of the point closest to `(x, y)`.
    pub fn nearest(&self, x: f64, y: f64) -> usize {
        let d = |p: &[f64; 2]| (p[0] - x).powi(2) + (p[1] - y).powi(2);
        (0..self.points.len())
            .min_by(|&a, &b| d(&self.points[a]).total_cmp(&d(&self.points[b])))
            .unwrap_or(0)
    }

    pub fn propagate(&self, method: &str) -> std::result::Result<Vec<f64>, JsError> {
        self.scores(method).map_err(js_err)
    }

    pub fn trace(&self, solver: &str) -> std::result::Result<Vec<f64>, JsError> {
        self.residuals(solver).map_err(js_err)
    }

    pub fn monte_carlo_gap(&self, walks: usize, seed: u64) -> std::result::Result<f64, JsError> {
        self.walk_gap(walks, seed).map_err(js_err)
    }
}
