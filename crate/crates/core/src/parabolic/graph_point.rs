use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ElementaryMap, EndoChain, EndoStep, Map2};
use crate::error::{Error, Result};
use crate::linalg::{c, re, C64};
use crate::parabolic::quadratic::HomogeneousQuadratic;
use crate::poly::Poly1;
use crate::parabolic::blowup::{arg_deviation, sector_residence, SectorPoint};

/// Cells per axis at level 0.
const BASE_CELLS: i64 = 16;
const MAX_LEVEL: u32 = 40;
/// Refinement stops early when the candidate set grows past this.
const MAX_CANDIDATES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphPointOptions {
    pub epsilon: f64,
    /// Cap on the survival horizon.
    pub max_iter: usize,
    /// Target diameter of the surviving cluster.
    pub resolution: f64,
}

impl Default for GraphPointOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.02,
            max_iter: 100_000,
            resolution: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphPoint {
    pub x: C64,
    pub u: C64,
    /// Radius of a disc around `u` covering the dilated surviving cells.
    pub radius: f64,
    pub level: u32,
    pub horizon: usize,
    pub survivors: usize,
    /// True when the cluster diameter reached the requested resolution.
    pub resolved: bool,
}

struct Level {
    half_width: f64,
    n: i64,
}

impl Level {
    fn new(x: C64, level: u32) -> Self {
        Self {
            half_width: x.norm() / 2.0,
            n: BASE_CELLS << level,
        }
    }

    fn size(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    fn center(&self, (i, j): (i64, i64)) -> C64 {
        let h = self.size();
        c(-self.half_width + (i as f64 + 0.5) * h, -self.half_width + (j as f64 + 0.5) * h)
    }

    fn contains(&self, (i, j): (i64, i64)) -> bool {
        (0..self.n).contains(&i) && (0..self.n).contains(&j)
    }
}

fn clusters(cells: &[(i64, i64)]) -> Vec<Vec<(i64, i64)>> {
    let mut left: BTreeSet<(i64, i64)> = cells.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&start) = left.iter().next() {
        left.remove(&start);
        let mut stack = vec![start];
        let mut comp = vec![start];
        while let Some((i, j)) = stack.pop() {
            for di in -1..=1 {
                for dj in -1..=1 {
                    if left.remove(&(i + di, j + dj)) {
                        stack.push((i + di, j + dj));
                        comp.push((i + di, j + dj));
                    }
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn dilate(cells: &[(i64, i64)], lvl: &Level) -> Vec<(i64, i64)> {
    let mut out = BTreeSet::new();
    for &(i, j) in cells {
        for di in -1..=1 {
            for dj in -1..=1 {
                if lvl.contains((i + di, j + dj)) {
                    out.insert((i + di, j + dj));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The unique `u` over `x` whose orbit stays in the sector, by nested
/// survival-set refinement of the disc `2|u| <= |x|`.
pub fn graph_point<M: Map2 + ?Sized>(map: &M, x: C64, opts: GraphPointOptions) -> Result<GraphPoint> {
    let eps = opts.epsilon;
    if !(x.norm() < eps && arg_deviation(x) < eps) {
        return Err(Error::InvalidParams("x must lie in the sector base".into()));
    }
    if !(opts.resolution > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let lvl0 = Level::new(x, 0);
    let mut candidates: Vec<(i64, i64)> = (0..lvl0.n).flat_map(|i| (0..lvl0.n).map(move |j| (i, j))).collect();
    let mut level = 0u32;
    let mut previous_best = 0usize;
    loop {
        let lvl = Level::new(x, level);
        let horizon = (10usize << level.min(40)).min(opts.max_iter);
        let times: Vec<usize> = candidates
            .par_iter()
            .map(|&ij| sector_residence(map, SectorPoint::new(x, lvl.center(ij), eps), horizon))
            .collect();
        let best = times.iter().copied().max().unwrap_or(0);
        if best == 0 || (best < horizon && best <= previous_best) {
            return Err(Error::NoSurvivor);
        }
        previous_best = best;
        let survivors: Vec<(i64, i64)> = candidates
            .iter()
            .zip(&times)
            .filter(|(_, &t)| t == best)
            .map(|(&ij, _)| ij)
            .collect();
        let comps = clusters(&survivors);
        let centers: Vec<C64> = survivors.iter().map(|&ij| lvl.center(ij)).collect();
        let u = centers.iter().sum::<C64>() / centers.len() as f64;
        let diameter = centers
            .iter()
            .flat_map(|a| centers.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max)
            + lvl.size() * std::f64::consts::SQRT_2;
        let resolved = comps.len() == 1 && diameter < opts.resolution;
        let next_count = 36 * survivors.len();
        if resolved || level == MAX_LEVEL || next_count > MAX_CANDIDATES {
            if comps.len() > 1 {
                return Err(Error::Ambiguous { clusters: comps.len() });
            }
            let half_diag = lvl.size() * std::f64::consts::FRAC_1_SQRT_2;
            let radius = dilate(&survivors, &lvl)
                .iter()
                .map(|&ij| (lvl.center(ij) - u).norm() + half_diag)
                .fold(0.0, f64::max);
            return Ok(GraphPoint {
                x,
                u,
                radius,
                level,
                horizon,
                survivors: survivors.len(),
                resolved,
            });
        }
        let next = Level::new(x, level + 1);
        candidates = dilate(&survivors, &lvl)
            .into_iter()
            .flat_map(|(i, j)| [(2 * i, 2 * j), (2 * i + 1, 2 * j), (2 * i, 2 * j + 1), (2 * i + 1, 2 * j + 1)])
            .filter(|&ij| next.contains(ij))
            .collect();
        level += 1;
    }
}

/// `Id + (x^2 + 2xy + c y^2, -2xy - y^2)` followed by `y -> y + kappa x^3`.
///
/// The cubic term moves the attracting curve off the axis `u = 0` by about
/// `kappa x / 4` without changing the quadratic part.
pub fn perturbed_normal_form(c: f64, kappa: f64) -> EndoChain {
    let mut f = EndoChain::jet(HomogeneousQuadratic::normal_form(re(c)));
    f.steps
        .push(EndoStep::Elementary(ElementaryMap::ShearY(Poly1::real(&[0.0, 0.0, 0.0, kappa]))));
    f
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicStabilityRow {
    pub t: f64,
    /// `sup_x |u_t(x) - u_0(x)|` over the mesh.
    pub sup_distance: f64,
    /// Largest certified radius among both graphs.
    pub max_radius: f64,
    /// True when the distance is below twice the certified radii.
    pub resolution_limited: bool,
}

/// Compares graph points of each family member with those of `t = 0`.
pub fn parabolic_stability_experiment<M, F>(
    family: F,
    x_mesh: &[C64],
    t_values: &[f64],
    opts: GraphPointOptions,
) -> Result<Vec<ParabolicStabilityRow>>
where
    M: Map2,
    F: Fn(f64) -> M,
{
    let base_map = family(0.0);
    let base: Vec<GraphPoint> = x_mesh
        .iter()
        .map(|&x| graph_point(&base_map, x, opts))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let m = family(t);
        let mut sup: f64 = 0.0;
        let mut max_radius: f64 = 0.0;
        let mut limited = false;
        for (b, &x) in base.iter().zip(x_mesh) {
            let g = graph_point(&m, x, opts)?;
            let d = (g.u - b.u).norm();
            let r = g.radius.max(b.radius);
            limited |= d < 2.0 * r;
            sup = sup.max(d);
            max_radius = max_radius.max(r);
        }
        rows.push(ParabolicStabilityRow {
            t,
            sup_distance: sup,
            max_radius,
            resolution_limited: limited,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{AutoChain, EndoChain};
    use crate::linalg::re;
    use crate::parabolic::quadratic::HomogeneousQuadratic;

    #[test]
    fn invariant_fiber_point() {
        let f = EndoChain::jet(HomogeneousQuadratic::normal_form(re(0.0)));
        let opts = GraphPointOptions {
            resolution: 1e-6,
            ..Default::default()
        };
        let g = graph_point(&f, re(-0.01), opts).unwrap();
        assert!(g.u.norm() <= g.radius, "{g:?}");
        assert!(g.resolved);
        let finer = graph_point(&f, re(-0.01), GraphPointOptions { resolution: 5e-7, ..opts }).unwrap();
        assert!((finer.u - g.u).norm() < g.radius);
        assert!(sector_residence(&f, SectorPoint::new(re(-0.01), g.u, 0.02), 200) == 200);
    }

    #[test]
    fn off_axis_x_and_perturbed_map() {
        let f = perturbed_normal_form(1.0, 0.2);
        let x = C64::from_polar(0.01, std::f64::consts::PI + 0.005);
        let g = graph_point(&f, x, GraphPointOptions::default()).unwrap();
        assert!(g.resolved);
        assert!((g.u - x * 0.05).norm() < 0.2 * (x * 0.05).norm(), "{g:?}");
        assert!(sector_residence(&f, SectorPoint::new(x, g.u, 0.02), 200) == 200);
        assert!(matches!(
            graph_point(&f, re(0.01), GraphPointOptions::default()),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn curve_on_sector_boundary_has_no_survivor() {
        let f = AutoChain::parabolic_normal_form(re(1.0));
        assert!(matches!(
            graph_point(&f, re(-0.01), GraphPointOptions::default()),
            Err(Error::NoSurvivor)
        ));
    }

    #[test]
    fn stability_distances_shrink() {
        let xs = [re(-0.005), re(-0.01), re(-0.015)];
        let rows = parabolic_stability_experiment(
            |t| perturbed_normal_form(t, t),
            &xs,
            &[0.0, 1e-1, 1e-2, 1e-3],
            GraphPointOptions::default(),
        )
        .unwrap();
        assert!(rows[0].sup_distance <= 2.0 * rows[0].max_radius);
        for w in rows[1..].windows(2) {
            assert!(w[1].sup_distance < w[0].sup_distance, "{rows:?}");
        }
    }
}
