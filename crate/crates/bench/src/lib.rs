//! Shared inputs for the criterion benchmarks.

use dbmapper::synthgen::{gen_genus1, gen_three_component, SynthSpec};
use dbmapper::{LensMap, PointCloud};

/// The default three-component cloud (1550 points in 3-D).
pub fn three_component() -> (PointCloud, LensMap) {
    gen_three_component(&SynthSpec::three_component(42)).expect("default spec is valid")
}

/// The default genus-1 cloud (2-D).
pub fn genus1() -> (PointCloud, LensMap) {
    gen_genus1(&SynthSpec::genus1(42)).expect("default spec is valid")
}
