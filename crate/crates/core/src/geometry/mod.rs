//! Deterministic coarse geometry of the generated graphs.
//!
//! Everything in this module is exact and randomness-free (the one
//! exception, [`shrink_to_minimal_cutset`], takes its scan order as an
//! argument): exposed spheres, cutset audits, r-connectedness, the cycle
//! space diameter bracket, greedy tube packings, and certified two-sided
//! bounds on the Gromov-Hausdorff distance between the rescaled graph and
//! the unit circle. Certificates carry their witnesses so every reported
//! bound can be re-verified without rerunning the search.

mod circle;
mod cutset;
mod cyclespace;
mod exposed;
mod tubes;

pub use circle::{
    dense_cycle_certificate, gamma_quantities, gh_circle_lower, gh_circle_upper, CycleWitness,
    GHCertificate, GHWitness, GammaReport, LowerWitness,
};
pub use cutset::{
    cutset_audit, is_r_connected, removal_components, shrink_to_minimal_cutset, CutsetReport,
    CutsetWitness, ProbeComponents, RConnectivity,
};
pub use cyclespace::{delta_bracket, CycleSpaceBracket, DeltaMethod};
pub use exposed::{exposed_sphere, ExposedSphere};
pub use tubes::{plentiful_tubes, TubeEndpoints, TubeFamily};
