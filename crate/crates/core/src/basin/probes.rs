use rayon::prelude::*;
use serde::Serialize;

use crate::basin::orbit::{orbit_verdict, OrbitOptions, Verdict};
use crate::chain::Map2;
use crate::error::{Error, Result};
use crate::fixed_point::{Classification, FixedPointInfo};
use crate::grid::{Grid4, Occupancy};
use crate::linalg::{c, Point2};
use crate::sampling::{ball_point, sample_rng};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub r: f64,
    pub m_max: usize,
    pub samples: usize,
    /// `witness_counts[m]` is the number of samples in `C_m`.
    pub witness_counts: Vec<usize>,
    /// Largest `m` with a witness.
    pub largest_m: usize,
    /// Smallest `m` without a witness, if any.
    pub cutoff: Option<usize>,
    /// One witness per `m = 1..=largest_m`.
    pub witnesses: Vec<Point2>,
}

/// Number of consecutive iterates `f^1, f^2, ...` (up to `m_max`) outside
/// the open ball `B_r(center)`. Escape to the cap counts as outside.
pub fn exit_run<M: Map2 + ?Sized>(map: &M, z: Point2, center: Point2, r: f64, m_max: usize) -> usize {
    let mut w = z;
    for j in 1..=m_max {
        match map.apply(w) {
            Ok(next) if next.is_finite() => {
                if next.dist(center) < r {
                    return j - 1;
                }
                w = next;
            }
            _ => return m_max,
        }
    }
    m_max
}

/// Searches `C_m = {x in closed B_r : f^j(x) not in B_r, j = 1..m}` for
/// witnesses, using random ball samples plus seeds along the unstable
/// direction when the fixed point has one.
pub fn dichotomy_probe<M: Map2 + ?Sized>(
    map: &M,
    fp: &FixedPointInfo,
    r: f64,
    m_max: usize,
    samples: usize,
    seed: u64,
) -> Result<DichotomyReport> {
    if fp.classification == Classification::Attracting {
        return Err(Error::InvalidParams("the dichotomy probe needs a non-attracting fixed point".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParams("radius must be positive".into()));
    }
    dichotomy_search(map, fp.location, fp.unstable_direction, r, m_max, samples, seed)
}

/// Same search without the precondition on the fixed point; used for
/// control maps.
pub fn dichotomy_search<M: Map2 + ?Sized>(
    map: &M,
    center: Point2,
    unstable: Option<Point2>,
    r: f64,
    m_max: usize,
    samples: usize,
    seed: u64,
) -> Result<DichotomyReport> {
    let mut points: Vec<Point2> = (0..samples)
        .into_par_iter()
        .map(|i| ball_point(&mut sample_rng(seed, i as u64), center, r))
        .collect();
    if let Some(v) = unstable {
        let n = 64;
        for k in 1..=n {
            let s = r * k as f64 / n as f64;
            for phase in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
                points.push(center + v.scale(phase * s));
            }
        }
    }
    let runs: Vec<usize> = points.par_iter().map(|&z| exit_run(map, z, center, r, m_max)).collect();
    let mut counts = vec![0usize; m_max + 1];
    let mut witnesses = vec![None; m_max + 1];
    for (z, &run) in points.iter().zip(&runs) {
        for m in 0..=run {
            counts[m] += 1;
            if witnesses[m].is_none() {
                witnesses[m] = Some(*z);
            }
        }
    }
    let largest_m = (0..=m_max).rev().find(|&m| counts[m] > 0).unwrap_or(0);
    let cutoff = (0..=m_max).find(|&m| counts[m] == 0);
    Ok(DichotomyReport {
        r,
        m_max,
        samples: points.len(),
        witness_counts: counts,
        largest_m,
        cutoff,
        witnesses: witnesses[1..=largest_m.max(0)].iter().flatten().copied().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorReport {
    pub radius: f64,
    pub samples: usize,
    pub converged: usize,
    pub escaped: usize,
    pub undecided: usize,
    pub fraction: f64,
    /// False when the map is not volume preserving or the fixed point is
    /// attracting, so an empty interior is not expected.
    pub premises_hold: bool,
}

/// Fraction of uniform samples in the ball of radius `radius` around the
/// fixed point whose orbits converge to it.
pub fn interior_probe<M: Map2 + ?Sized>(
    map: &M,
    fp: &FixedPointInfo,
    volume_preserving: bool,
    radius: f64,
    samples: usize,
    opts: OrbitOptions,
    seed: u64,
) -> Result<InteriorReport> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let opts = OrbitOptions {
        target: fp.location,
        ..opts
    };
    let verdicts: Vec<u8> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let z = ball_point(&mut sample_rng(seed, i as u64), fp.location, radius);
            match orbit_verdict(map, z, &opts) {
                Verdict::ConvergedTo { .. } => 0,
                Verdict::Escaped { .. } => 1,
                Verdict::BoundedUndecided => 2,
            }
        })
        .collect();
    let count = |k: u8| verdicts.iter().filter(|&&v| v == k).count();
    let converged = count(0);
    Ok(InteriorReport {
        radius,
        samples,
        converged,
        escaped: count(1),
        undecided: count(2),
        fraction: converged as f64 / samples as f64,
        premises_hold: volume_preserving && fp.classification != Classification::Attracting,
    })
}

/// Marks cells whose center orbit stays under the magnitude cap for `max_iter` steps.
pub fn bounded_set_probe<M: Map2 + ?Sized>(map: &M, grid: &Grid4, max_iter: usize) -> Occupancy {
    let marked = (0..grid.total())
        .into_par_iter()
        .map(|i| {
            let mut w = grid.center(i);
            for _ in 0..max_iter {
                match map.apply(w) {
                    Ok(next) if next.is_finite() => w = next,
                    _ => return false,
                }
            }
            true
        })
        .collect();
    Occupancy { grid: *grid, marked }
}
