//! Composition orbits of map sequences and the five-component target set.

pub mod sector_sets;
pub mod sequence;

pub use sector_sets::{
    component_distance, disjointness_check, sector_sets_membership, Component, DisjointnessReport, SectorSetParams,
};
pub use sequence::{
    nonauto_attracting_probe, nonauto_orbit, planar_witness_points, pointwise_vs_uniform_report, MapSequence,
    NonautoOrbit, SeqMap, UniformityRow,
};
