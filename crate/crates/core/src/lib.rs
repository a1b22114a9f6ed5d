//! Numerical tools for rotation sets of torus homeomorphisms and their lifts:
//! rotation set estimation, periodic orbits, invariant manifolds with
//! transverse intersection witnesses, confinement clouds and weighted
//! subshifts of finite type.

pub mod confinement;
pub mod error;
pub mod geometry;
pub mod manifold;
pub mod map;
pub mod par;
pub mod periodic;
pub mod probes;
pub mod rotation;
pub mod sft;
pub mod transversality;

pub use error::{ConfinementError, ManifoldError, MapError, NewtonError, RotationError, SftError};
pub use geometry::{IVec2, Mat2, Rect, Vec2};
pub use map::{HomotopyMatrix, LiftedTorusMap, LinearSaddle, PlaneMap};
