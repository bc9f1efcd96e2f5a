//! Maps tangent to the identity: quadratic parts, characteristic
//! directions, blow-up dynamics and the attracting sector.

pub mod blowup;
pub mod directions;
pub mod graph_point;
pub mod quadratic;

pub use blowup::{
    blowup_step, calibrate_epsilon, expansion_check, in_sector, sector_orbit, ExpansionReport, SectorOrbitOptions,
    SectorPoint, SectorVerdict,
};
pub use directions::{
    characteristic_directions, make_nondegenerate, normalize, CharacteristicDirection, DirectionSet, NormalForm,
};
pub use graph_point::{graph_point, parabolic_stability_experiment, perturbed_normal_form, GraphPoint, GraphPointOptions};
pub use quadratic::{quadratic_part, HomogeneousQuadratic};
