use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{AutoChain, Map2};
use crate::error::{Error, Result};
use crate::grid::{Box4, Grid4, Occupancy};
use crate::linalg::Point2;
use crate::stable::graph::LocalGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub chain_id: String,
    pub depth: usize,
    pub delta: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

/// Backward images `f^{-k}` of the local graph samples for `k = 0..=depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<Point2>,
    /// Pullback depth of each point.
    pub depths: Vec<usize>,
    pub provenance: Provenance,
    /// Samples whose backward orbit overflowed before reaching `depth`.
    pub dropped: usize,
}

impl PointCloud {
    pub fn from_points(points: Vec<Point2>) -> Self {
        let depths = vec![0; points.len()];
        Self {
            points,
            depths,
            provenance: Provenance {
                chain_id: String::new(),
                depth: 0,
                delta: 0.0,
                n_r: 0,
                n_theta: 0,
            },
            dropped: 0,
        }
    }

    pub fn at_depth(&self, k: usize) -> Vec<Point2> {
        self.points
            .iter()
            .zip(&self.depths)
            .filter(|(_, &d)| d == k)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Points of depth at most `k`.
    pub fn up_to_depth(&self, k: usize) -> Vec<Point2> {
        self.points
            .iter()
            .zip(&self.depths)
            .filter(|(_, &d)| d <= k)
            .map(|(p, _)| *p)
            .collect()
    }
}

/// Pulls every graph sample back `depth` times, keeping all intermediate
/// depths. Ordering is mesh order, then depth.
pub fn pullback_cloud(chain: &AutoChain, graph: &LocalGraph, depth: usize, chain_id: &str) -> PointCloud {
    let per_sample: Vec<(Vec<Point2>, bool)> = graph
        .points()
        .par_iter()
        .map(|&p| {
            let mut out = Vec::with_capacity(depth + 1);
            out.push(p);
            let mut z = p;
            for _ in 0..depth {
                match chain.inverse_evaluate(z) {
                    Ok(w) => {
                        out.push(w);
                        z = w;
                    }
                    Err(_) => return (out, true),
                }
            }
            (out, false)
        })
        .collect();
    let mut points = Vec::new();
    let mut depths = Vec::new();
    let mut dropped = 0;
    for (pts, overflowed) in per_sample {
        dropped += overflowed as usize;
        for (k, p) in pts.into_iter().enumerate() {
            points.push(p);
            depths.push(k);
        }
    }
    PointCloud {
        points,
        depths,
        provenance: Provenance {
            chain_id: chain_id.to_string(),
            depth,
            delta: graph.delta,
            n_r: graph.n_r,
            n_theta: graph.n_theta,
        },
        dropped,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MembershipOptions {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-6,
        }
    }
}

/// True when some forward iterate lands within `tol` of the local graph;
/// false when the orbit escapes.
pub fn is_in_stable<M: Map2 + ?Sized>(
    map: &M,
    graph: &LocalGraph,
    z: Point2,
    opts: MembershipOptions,
) -> Result<bool> {
    let mut w = z;
    for _ in 0..=opts.max_iter {
        if let Some(d) = graph.distance_to_graph(w) {
            if d < opts.tol {
                return Ok(true);
            }
        }
        match map.apply(w) {
            Ok(next) => w = next,
            Err(Error::Overflow { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive {
        iterations: opts.max_iter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    #[serde(rename = "box")]
    pub bounds: Box4,
    pub cells_per_axis: usize,
    pub depth: usize,
    pub occupied: usize,
    pub total: usize,
    pub fraction: f64,
}

/// Occupancy of the 4-real-dimensional grid by the points.
pub fn occupancy(points: &[Point2], grid: &Grid4) -> Occupancy {
    let mut marked = vec![false; grid.total()];
    for p in points {
        if let Some(i) = grid.cell_of(*p) {
            marked[i] = true;
        }
    }
    Occupancy { grid: *grid, marked }
}

/// Fraction of cells of `bounds` (split `cells_per_axis` times per real
/// axis) containing at least one cloud point.
pub fn density_probe(cloud: &PointCloud, bounds: Box4, cells_per_axis: usize) -> Result<DensityReport> {
    let grid = Grid4::uniform(bounds, cells_per_axis)?;
    let occ = occupancy(&cloud.points, &grid);
    Ok(DensityReport {
        bounds,
        cells_per_axis,
        depth: cloud.provenance.depth,
        occupied: occ.count(),
        total: grid.total(),
        fraction: occ.fraction(),
    })
}

/// Symmetric Hausdorff distance between finite point sets (brute force).
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |from: &[Point2], to: &[Point2]| {
        from.par_iter()
            .map(|p| to.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::{find_fixed_point, NewtonOptions};
    use crate::linalg::Mat2;
    use crate::stable::graph::{local_stable_graph, GraphOptions};

    #[test]
    fn depth_zero_and_linear_depth_one() {
        let l = AutoChain::linear(Mat2::real(0.5, 0.0, 0.0, 2.0)).unwrap();
        let fp = find_fixed_point(&l, Point2::real(0.3, 0.3), NewtonOptions::default()).unwrap();
        let g = local_stable_graph(&l, &fp, GraphOptions::default()).unwrap();
        let c0 = pullback_cloud(&l, &g, 0, "lin");
        assert_eq!(c0.points, g.points());
        let c1 = pullback_cloud(&l, &g, 1, "lin");
        for (p, q) in g.points().iter().zip(c1.at_depth(1)) {
            assert!((q - p.scale(crate::linalg::re(2.0))).norm() < 1e-15);
            assert_eq!(q.y, crate::linalg::re(0.0));
        }
    }

    #[test]
    fn density_edge_cases() {
        let b = Box4::cube(1.0).unwrap();
        let grid = Grid4::uniform(b, 3).unwrap();
        let centers: Vec<Point2> = (0..grid.total()).map(|i| grid.center(i)).collect();
        let full = density_probe(&PointCloud::from_points(centers), b, 3).unwrap();
        assert_eq!(full.fraction, 1.0);
        let empty = density_probe(&PointCloud::from_points(vec![]), b, 3).unwrap();
        assert_eq!(empty.fraction, 0.0);
    }

    #[test]
    fn hausdorff_basics() {
        let a = vec![Point2::real(0.0, 0.0), Point2::real(1.0, 0.0)];
        let b = vec![Point2::real(0.0, 0.0)];
        assert_eq!(hausdorff(&a, &b), 1.0);
        assert_eq!(hausdorff(&a, &a), 0.0);
        assert_eq!(hausdorff(&a, &b), hausdorff(&b, &a));
    }
}
