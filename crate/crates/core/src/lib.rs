//! Boundary integral toolkit for the two-dimensional inverse heat conduction
//! problem: reconstruct the boundary heat flux of a solution of
//! `u_t - Laplace u = 0` with zero initial data from Dirichlet measurements on all
//! or part of a smooth closed boundary.
//!
//! The numerical core is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`, which the experiment harness and
//! CLI use throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod inverse;
pub mod kernels;
pub mod potentials;
pub mod scalar;
pub mod synthetic;

pub use error::{Error, Result};
pub use kernels::{KernelEvalContext, KernelMode};
pub use scalar::{Scalar, Vec2};

pub type Point = scalar::Vec2<f64>;
pub type BoundaryCurve = geometry::BoundaryCurve<f64>;
pub type TrigSeries = geometry::TrigSeries<f64>;
pub type SpaceTimeGrid = geometry::SpaceTimeGrid<f64>;
pub type BoundaryField = potentials::BoundaryField<f64>;
pub type InteriorSamples = potentials::InteriorSamples<f64>;
pub type PointSourceSolution = synthetic::PointSourceSolution<f64>;
pub type ReconstructionResult = inverse::ReconstructionResult<f64>;
pub type ErrorMetrics = inverse::ErrorMetrics<f64>;

pub type Point32 = scalar::Vec2<f32>;
pub type BoundaryCurve32 = geometry::BoundaryCurve<f32>;
pub type SpaceTimeGrid32 = geometry::SpaceTimeGrid<f32>;
pub type BoundaryField32 = potentials::BoundaryField<f32>;
