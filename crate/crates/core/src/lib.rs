//! Hamiltonicity of random graphs sampled from graphons.
//!
//! The crate is organised around the objects of the theory:
//!
//! * [`graphon`] — step graphons and the power family, with exact checkers for
//!   connectivity, the degree tail, peninsulae and the exact bipartite split.
//! * [`sampler`] — the two-stage generative model with counter-based seeding.
//! * [`fracmatch`] — half-integral fractional matchings and vertex covers,
//!   uniquely-half-covered tests and graph peninsula certificates.
//! * [`hamilton`] — cheap obstructions, an exact search and the Pósa heuristic.
//! * [`pathsys`] — odd walks, binary-tree path decompositions and the
//!   low-degree path system.
//! * [`cutnorm`] — cut norm of step functions and sample-to-graphon distance.
//! * [`harness`] — seeded Monte Carlo campaigns and their reports.

// symmetric matrices read better with explicit (i, j) loops
#![allow(clippy::needless_range_loop)]

pub mod cutnorm;
pub mod error;
pub mod exec;
pub mod flow;
pub mod fracmatch;
pub mod graph;
pub mod graphon;
pub mod hamilton;
pub mod harness;
pub mod pathsys;
pub mod rational;
pub mod sampler;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::FiniteGraph;
pub use rational::Rational;
