//! Bernoulli bond percolation: sampling, clusters, evolution, events.
//!
//! Sampling realizes the standard monotone coupling: each edge carries a
//! uniform weight in (0,1) and the configuration at parameter p opens the
//! edges with weight <= p, so configurations are monotone in p over a fixed
//! sample. Weights are a pure function of (seed, stream, trial, edge), which
//! makes every estimate reproducible at any worker count.

mod clusters;
mod evolution;
mod events;
pub mod rng;
mod sample;
mod unionfind;

pub use clusters::{clusters, connected, ClusterReport};
pub use evolution::{evolution_curve, EvolutionCurve};
pub use events::{piv_event, tube_connected, two_arm_event};
pub use sample::{
    config_at, ghost_connected, sample_ghost, sample_ghost_trial, sample_weights,
    sample_weights_trial, Config, GhostField, PercolationSample,
};
pub use unionfind::DisjointSets;

pub(crate) use events::{crossing_min_dists, tube_membership};
