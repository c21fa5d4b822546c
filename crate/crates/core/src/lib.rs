//! Percolation laboratory for finite vertex-transitive graphs.
//!
//! The crate is organized in four layers:
//!
//! * [`graph`] builds finite transitive graphs (cycles, tori, circulants,
//!   Cayley graphs from explicit tables) and exposes their metric structure:
//!   balls, spheres, growth, diameter, nets.
//! * [`perc`] samples Bernoulli bond percolation through the standard
//!   monotone coupling, computes cluster structure with union-find, evolves
//!   whole insertion curves in a single pass, and decides configuration-level
//!   events (two-arm, pivotality, tube-restricted connection, ghost fields).
//! * [`estimate`] wraps Monte Carlo estimation of probabilities and
//!   expectations with Wilson confidence intervals, solves for thresholds by
//!   per-sample critical values, and evaluates the scale predicates built
//!   from them (orange/green status, corridor bounds, uniqueness zone).
//! * [`geometry`] holds the deterministic coarse-geometry toolkit: exposed
//!   spheres, cutset audits, cycle-space diameter brackets over GF(2),
//!   disjoint tube packing, and certified Gromov-Hausdorff bounds against
//!   the circle.
//!
//! [`labs`] ties the layers into named, reproducible experiments that emit
//! pass/fail reports with explicit statistical margins.
//!
//! Every randomized routine is keyed by `(seed, stream, trial)` so results
//! are byte-identical at any worker count.

#![forbid(unsafe_code)]

pub mod error;
pub mod estimate;
pub mod geometry;
pub mod graph;
pub mod labs;
pub mod perc;

pub use error::{Error, Result};
pub use graph::{ball, metric_profile, sphere, EdgeId, FiniteGraph, MetricProfile, VertexId};
pub use perc::{clusters, config_at, sample_weights, ClusterReport, Config, PercolationSample};
