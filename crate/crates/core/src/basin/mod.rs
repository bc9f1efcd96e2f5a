//! Orbit verdicts, basin probes and the explicit counterexample maps.

pub mod gallery;
pub mod orbit;
pub mod probes;

pub use gallery::{nonuniformity_witness, planar_homeo, psi, sphere_map, sphere_map_iterate_check, PlanarDemo, Witness};
pub use orbit::{orbit, orbit_verdict, OrbitOptions, OrbitRecord, Verdict};
pub use probes::{bounded_set_probe, dichotomy_probe, dichotomy_search, interior_probe, DichotomyReport, InteriorReport};
