//! Node classification on partially labeled graphs.
//!
//! Two families of methods share one set of graph and label types:
//!
//! * local iterative classification ([`ica`]), with a weighted-vote and a
//!   nearest-neighbor classifier over link features, and its map/reduce
//!   execution ([`engine`]);
//! * random-walk labeling ([`walk`]): label propagation with absorbing
//!   labeled nodes, t-step walks, the rendezvous eigenvector construction,
//!   graph regularization and adsorption.
//!
//! Each walk method has a closed-form route (dense linear solve or
//! eigenvectors) and iterative routes (power iteration, second-order
//! iteration, Monte Carlo walk simulation) from [`solve`].

pub mod config;
pub mod engine;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ica;
pub mod induce;
pub mod io;
pub mod matrix;
pub mod solve;
pub mod walk;

pub use config::{run_method, Method, MethodConfig, Solver};
pub use error::{Error, Result};
pub use graph::{build_graph, Graph, LabelMatrix};
pub use matrix::{Matrix, SparseMatrix};
pub use walk::WalkResult;
