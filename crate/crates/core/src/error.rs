use thiserror::Error;

use crate::geometry::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("homotopy matrix {0:?} is neither the identity nor a Dehn twist [[1,k],[0,1]]")]
    InvalidHomotopy([[i64; 2]; 2]),
    #[error("orbit escaped the coordinate bound at step {step}")]
    Escape { step: u64, partial: Vec<Vec2> },
    #[error("non-finite image of ({}, {}): parameter overflow", point.x, point.y)]
    NonFinite { point: Vec2 },
    #[error("requested {requested} iterates, budget is {budget}")]
    BudgetExceeded { requested: i64, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RotationError {
    #[error("seed grid is empty")]
    EmptyGrid,
    #[error("no samples given")]
    NoSamples,
    #[error("horizons must satisfy 1 <= n1 < n2, got ({0}, {1})")]
    BadHorizons(u64, u64),
    #[error("wrong homotopy class: {0}")]
    WrongHomotopy(&'static str),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NewtonError {
    #[error("period must be at least 1")]
    BadPeriod,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("singular Newton matrix at ({}, {})", at.x, at.y)]
    Singular { at: Vec2 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManifoldError {
    #[error("periodic point is not hyperbolic with positive eigenvalues ({0})")]
    NotHyperbolicPositive(String),
    #[error("parameters must be positive: {0}")]
    BadParameter(&'static str),
    #[error("arclength budget {budget} exhausted inside the first fundamental domain (length {first_domain})")]
    BudgetInsideFirstDomain { budget: f64, first_domain: f64 },
    #[error("refinement exceeded the vertex cap of {cap}")]
    VertexCap { cap: usize },
    #[error("manifold growth produced a non-finite point")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfinementError {
    #[error("grid is empty")]
    EmptyGrid,
    #[error("horizon must be at least 1")]
    BadHorizon,
    #[error("wrong homotopy class for this mode: {0}")]
    WrongHomotopy(&'static str),
    #[error("region is smaller than one grid cell")]
    RegionTooSmall,
    #[error("obstacle is empty")]
    EmptyObstacle,
    #[error("confinement cloud is empty")]
    EmptyCloud,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SftError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("graph has no cycle")]
    Acyclic,
    #[error("cycle cap {cap} is below the vertex count {vertices}")]
    CapTooSmall { cap: usize, vertices: usize },
    #[error("rotation vector is not in the relative interior of the cycle hull")]
    NotInterior,
    #[error("chosen cycles are not connected in the graph")]
    NotConnected,
    #[error("deviation bound violated: observed {observed} > bound {bound} at n = {n}")]
    BoundViolated { observed: f64, bound: f64, n: u64 },
}
