//! Exact-arithmetic workbench for pseudo-orbit and shadowing experiments
//! on zero-dimensional dynamical systems.
//!
//! Everything here computes with arbitrary-precision rationals: map
//! evaluations, metrics, tolerances, and every inequality in every report
//! is exact. The crate ships three concrete systems (a two-ladder space
//! with three fixed points, depth-truncated odometers, and an odometer
//! with one extra pre-fixed point) together with the machinery to build
//! and analyse pseudo orbits over finite windows, decompose finite samples
//! into delta-chain components, and verify shadowing claims by brute force
//! plus interval certificates.
//!
//! Modules:
//! - [`rat`]: exact rationals.
//! - [`system`]: the dynamical-system contract and shared checks.
//! - [`systems`]: the three built-in systems.
//! - [`pseudo`]: pseudo-orbit construction and tail analytics.
//! - [`chains`]: delta-chain graphs, components and reachability.
//! - [`shadow`]: shadowing verification and counterexample pipelines.
//! - [`report`]: structured verification records.

pub mod chains;
mod error;
pub mod pseudo;
pub mod rat;
pub mod report;
pub mod shadow;
pub mod system;
pub mod systems;

pub use error::Error;
pub use rat::Rat;
pub use report::{Status, VerificationReport};
pub use system::{DynamicalSystem, KnownSets, OrbitSegment};
