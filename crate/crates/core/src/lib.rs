//! Evacuation of two robots from a unit disk: trajectory geometry, the
//! catch-up solver, the cost engine and the algorithm families built on it.

// `!(a >= b)` is used on purpose so that NaN falls into the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod delta;
pub mod engine;
pub mod frontier;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod verify;

pub use algorithms::{build, closed_form_worst, constants, Family, FamilySpec};
pub use delta::delta;
pub use engine::{Engine, EngineConfig, EvacuationAlgorithm, Founder};
pub use error::{EvacError, Result};
pub use geometry::{cycle, Point, Trajectory};
