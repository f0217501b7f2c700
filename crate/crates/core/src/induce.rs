//! Graphs induced from point sets: exp-weighted, k-nearest-neighbor and
//! ε-threshold graphs.

use rayon::prelude::*;

use crate::graph::{build_graph, Graph};
use crate::matrix::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 − cos θ`; a zero vector is at distance 1 from everything else.
    Cosine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    coords: Matrix,
    metric: Metric,
}

impl PointSet {
    pub fn new(points: &[Vec<f64>], metric: Metric) -> Result<Self> {
        let d = points.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::EmptyPointSet);
        }
        let mut data = Vec::with_capacity(points.len() * d);
        for (index, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: d,
                    found: p.len(),
                });
            }
            data.extend_from_slice(p);
        }
        Ok(Self {
            coords: Matrix::from_vec(points.len(), d, data),
            metric,
        })
    }

    pub fn from_matrix(coords: Matrix, metric: Metric) -> Result<Self> {
        if coords.cols() == 0 {
            return Err(Error::EmptyPointSet);
        }
        Ok(Self { coords, metric })
    }

    pub fn len(&self) -> usize {
        self.coords.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.coords.cols()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.coords.row(i)
    }

    pub fn coords(&self) -> &Matrix {
        &self.coords
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.point(i), self.point(j));
        match self.metric {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Cosine => {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                if i == j {
                    0.0
                } else if na == 0.0 || nb == 0.0 {
                    1.0
                } else {
                    (1.0 - dot / (na * nb)).max(0.0)
                }
            }
        }
    }

    fn squared_distance(&self, i: usize, j: usize) -> f64 {
        match self.metric {
            Metric::Euclidean => self
                .point(i)
                .iter()
                .zip(self.point(j))
                .map(|(x, y)| (x - y) * (x - y))
                .sum(),
            Metric::Cosine => self.distance(i, j).powi(2),
        }
    }

    /// Mean squared euclidean distance of the points to their centroid.
    pub fn variance(&self) -> f64 {
        let (n, d) = (self.len(), self.dim());
        if n == 0 {
            return 0.0;
        }
        let mut centroid = vec![0.0; d];
        for i in 0..n {
            for (c, &x) in centroid.iter_mut().zip(self.point(i)) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);
        (0..n)
            .map(|i| {
                self.point(i)
                    .iter()
                    .zip(&centroid)
                    .map(|(x, c)| (x - c) * (x - c))
                    .sum::<f64>()
            })
            .sum::<f64>()
            / n as f64
    }
}

/// Bandwidth of the exp weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma2 {
    /// [`PointSet::variance`].
    Auto,
    Value(f64),
}

impl Sigma2 {
    pub fn resolve(self, p: &PointSet) -> Result<f64> {
        let s = match self {
            Sigma2::Auto => p.variance(),
            Sigma2::Value(v) => v,
        };
        if s > 0.0 && s.is_finite() {
            Ok(s)
        } else {
            Err(Error::NonPositiveSigma(s))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum KnnMode {
    /// Edge `i → j` for each of the k nearest neighbors `j` of `i`.
    #[default]
    Directed,
    /// Undirected edge where each point is among the other's k nearest.
    Mutual,
}

fn exp_weight(d2: f64, sigma2: f64) -> f64 {
    (-d2 / (2.0 * sigma2)).exp()
}

/// Weights of all pairs `i < j`.
fn pair_weights(p: &PointSet, sigma2: f64) -> Vec<(usize, usize, f64)> {
    let n = p.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..n).map(move |j| (i, j, exp_weight(p.squared_distance(i, j), sigma2)))
        })
        .collect()
}

/// Complete undirected graph with `w_ij = exp(−‖vᵢ − vⱼ‖² / 2σ²)`.
pub fn exp_weighted_graph(p: &PointSet, sigma2: Sigma2) -> Result<Graph> {
    if p.len() < 2 {
        return Err(Error::EmptyPointSet);
    }
    let s2 = sigma2.resolve(p)?;
    build_graph(&pair_weights(p, s2), p.len(), false)
}

/// Edges of the exp-weighted graph with weight strictly above `eps`.
pub fn epsilon_graph(p: &PointSet, sigma2: Sigma2, eps: f64) -> Result<Graph> {
    if p.len() < 2 {
        return Err(Error::EmptyPointSet);
    }
    let s2 = sigma2.resolve(p)?;
    let edges: Vec<_> = pair_weights(p, s2)
        .into_iter()
        .filter(|&(_, _, w)| w > eps)
        .collect();
    build_graph(&edges, p.len(), false)
}

/// The k nearest other points of each point, closer first, ties to the lower id.
fn neighbor_lists(p: &PointSet, k: usize) -> Vec<Vec<usize>> {
    let n = p.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut others: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (p.distance(i, j), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.truncate(k);
            others.into_iter().map(|(_, j)| j).collect()
        })
        .collect()
}

/// k-nearest-neighbor graph. Edge weights are the exp weights when `sigma2`
/// is given and 1 otherwise.
pub fn knn_graph(p: &PointSet, k: usize, mode: KnnMode, sigma2: Option<Sigma2>) -> Result<Graph> {
    let n = p.len();
    if k == 0 || k >= n {
        return Err(Error::KTooLarge { k, n });
    }
    let s2 = sigma2.map(|s| s.resolve(p)).transpose()?;
    let weight = |i: usize, j: usize| s2.map_or(1.0, |s| exp_weight(p.squared_distance(i, j), s));
    let lists = neighbor_lists(p, k);
    match mode {
        KnnMode::Directed => {
            let edges: Vec<_> = lists
                .iter()
                .enumerate()
                .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
                .map(|(i, j)| (i, j, weight(i, j)))
                .collect();
            build_graph(&edges, n, true)
        }
        KnnMode::Mutual => {
            let edges: Vec<_> = lists
                .iter()
                .enumerate()
                .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
                .filter(|&(i, j)| i < j && lists[j].contains(&i))
                .map(|(i, j)| (i, j, weight(i, j)))
                .collect();
            build_graph(&edges, n, false)
        }
    }
}
