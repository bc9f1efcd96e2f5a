use serde::Serialize;

use crate::chain::{AutoChain, ElementaryMap};
use crate::error::Result;
use crate::fixed_point::{find_fixed_point, FixedPointInfo, NewtonOptions};
use crate::linalg::Point2;
use crate::poly::Poly1;
use crate::stable::cloud::{hausdorff, pullback_cloud};
use crate::stable::graph::{graph_distance, local_stable_graph, GraphOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub t: f64,
    /// `|p_t - p_0|`
    pub fp_offset: f64,
    pub graph_distance: f64,
    /// Hausdorff distance between the depth-`n` pullback clouds.
    pub cloud_hausdorff: f64,
}

/// `f` followed by the shear `y -> y + t x^2`.
pub fn shear_y_family(base: &AutoChain, t: f64) -> Result<AutoChain> {
    base.then_step(ElementaryMap::ShearY(Poly1::real(&[0.0, 0.0, t])))
}

/// Tracks the saddle of each perturbed map by Newton from the unperturbed
/// one and compares local graphs and depth-`depth` pullback clouds.
pub fn stability_experiment<F>(
    base: &AutoChain,
    base_fp: &FixedPointInfo,
    family: F,
    t_values: &[f64],
    opts: GraphOptions,
    depth: usize,
) -> Result<Vec<StabilityRow>>
where
    F: Fn(f64) -> Result<AutoChain>,
{
    let g0 = local_stable_graph(base, base_fp, opts)?;
    let c0 = pullback_cloud(base, &g0, depth, "base");
    let newton = NewtonOptions::default();
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let chain = family(t)?;
        let fp = find_fixed_point(&chain, base_fp.location, newton)?;
        let g = local_stable_graph(&chain, &fp, opts)?;
        let cl = pullback_cloud(&chain, &g, depth, "perturbed");
        rows.push(StabilityRow {
            t,
            fp_offset: fp.location.dist(base_fp.location),
            graph_distance: graph_distance(&g0, &g)?,
            cloud_hausdorff: hausdorff(&c0.points, &cl.points),
        });
    }
    Ok(rows)
}

/// Default seed used to locate the saddle of the Hénon family.
pub fn henon_saddle_seed() -> Point2 {
    Point2::real(1.4, 1.4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_perturbation_gives_zero_rows() {
        let h = AutoChain::henon(0.75);
        let fp = find_fixed_point(&h, henon_saddle_seed(), NewtonOptions::default()).unwrap();
        let rows = stability_experiment(&h, &fp, |t| shear_y_family(&h, t), &[0.0], GraphOptions::default(), 2).unwrap();
        assert_eq!(rows[0].fp_offset, 0.0);
        assert_eq!(rows[0].graph_distance, 0.0);
        assert_eq!(rows[0].cloud_hausdorff, 0.0);
    }

    #[test]
    fn distances_shrink_with_t() {
        let h = AutoChain::henon(0.75);
        let fp = find_fixed_point(&h, henon_saddle_seed(), NewtonOptions::default()).unwrap();
        let rows = stability_experiment(
            &h,
            &fp,
            |t| shear_y_family(&h, t),
            &[1e-2, 1e-3, 1e-4],
            GraphOptions::default(),
            3,
        )
        .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].fp_offset < w[0].fp_offset);
            assert!(w[1].graph_distance < w[0].graph_distance);
        }
        assert!(rows[1].graph_distance > 0.0 && rows[1].graph_distance < 0.05);
        assert!(rows[2].graph_distance < rows[0].graph_distance / 10.0);
    }
}
