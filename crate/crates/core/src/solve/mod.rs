//! Numerical back-ends shared by the walk methods.

mod dense;
mod eigen;
mod iterate;
mod montecarlo;

pub use dense::{linear_solve, PIVOT_TOL};
pub use eigen::{leading_eigenvectors, Eigenpairs};
pub use iterate::{fixed_point, second_order, second_order_with, FixedPoint, IterationTrace};
pub use montecarlo::{monte_carlo_absorption, StoppingWalk, WalkSample, WALK_STEP_CAP};
