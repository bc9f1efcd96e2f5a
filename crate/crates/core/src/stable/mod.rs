//! Local stable manifolds of saddle points, their pullbacks, and
//! perturbation experiments.

pub mod cloud;
pub mod graph;
pub mod stability;

pub use cloud::{density_probe, hausdorff, is_in_stable, occupancy, pullback_cloud, DensityReport, MembershipOptions, PointCloud};
pub use graph::{graph_distance, graph_residual, local_stable_graph, local_stable_graph_auto, GraphOptions, LocalGraph};
pub use stability::{stability_experiment, StabilityRow};
