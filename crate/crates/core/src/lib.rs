//! Demand-aware continuous-discrete networks.
//!
//! Nodes are placed on the unit cycle by a Shannon-Fano-Elias code of their
//! activity, so busy nodes get short codewords, wide segments and short
//! routes. Geometry is exact on a `2^-128` grid; reported metrics are generic
//! over [`Real`].

pub mod coding;
pub mod continuum;
pub mod decimal;
pub mod demand;
pub mod error;
pub mod export;
pub mod harness;
pub mod point;
pub mod real;
pub mod routing;
pub mod topology;

pub use coding::{code_length, code_segment, codeword, CodeEntry, CodeTable};
pub use continuum::{image_left, image_right, walk, Segment};
pub use demand::{entropy, product_demand, select_build_distribution, zipf, ActivityVector, DemandMatrix, Distribution, Prob};
pub use error::{Error, Result, Side};
pub use point::{BitString, UnitPoint};
pub use real::Real;
pub use routing::{Algorithm, DropReason, MessageHeader, Mode, Outcome, RouteTrace, Router};
pub use topology::{DiscreteGraph, Edge, EdgeKind, FailureMask, Network, Placement};

/// Scalar used by the concrete aliases below.
pub type Scalar = f64;
pub type DegreeRow64 = harness::DegreeRow<f64>;
pub type DegreeRow32 = harness::DegreeRow<f32>;
