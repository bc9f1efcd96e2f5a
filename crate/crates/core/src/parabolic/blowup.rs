use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::Map2;
use crate::error::{Error, Result};
use crate::linalg::{Point2, C64};
use crate::sampling::{disc_point, sample_rng};
use rand::Rng;

/// Default sector size.
pub const DEFAULT_EPSILON: f64 = 0.02;

/// Point `(x, u)` in the blow-up chart `y = u x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorPoint {
    pub x: C64,
    pub u: C64,
    pub epsilon: f64,
}

impl SectorPoint {
    pub fn new(x: C64, u: C64, epsilon: f64) -> Self {
        Self { x, u, epsilon }
    }

    pub fn to_point(self) -> Point2 {
        Point2::new(self.x, self.u * self.x)
    }
}

/// `|arg(x) - pi|` with `arg` taken in `[0, 2 pi)`.
pub fn arg_deviation(x: C64) -> f64 {
    let mut a = x.arg();
    if a < 0.0 {
        a += 2.0 * PI;
    }
    (a - PI).abs()
}

/// Membership in the sector `max(|x|, |arg x - pi|) < eps`, `2|u| < |x|`.
pub fn in_sector(pt: &SectorPoint) -> bool {
    let r = pt.x.norm();
    r < pt.epsilon && arg_deviation(pt.x) < pt.epsilon && 2.0 * pt.u.norm() < r
}

/// One step of the map in blow-up coordinates, using the full map.
pub fn blowup_step<M: Map2 + ?Sized>(map: &M, pt: &SectorPoint) -> Result<SectorPoint> {
    if pt.x.norm() == 0.0 {
        return Err(Error::BlowupSingular);
    }
    let w = map.apply(pt.to_point())?;
    if w.x.norm() <= f64::EPSILON * pt.x.norm() * 1e-2 || !w.is_finite() {
        return Err(Error::BlowupSingular);
    }
    Ok(SectorPoint::new(w.x, w.y / w.x, pt.epsilon))
}

/// Second-order truncation of the `x` recurrence for the normal form with parameter `c`.
pub fn truncated_x(x: C64, u: C64, c: C64) -> C64 {
    x + (u * 2.0 + c * u * u + 1.0) * x * x
}

/// First-order truncation of the `u` recurrence for the normal form with parameter `c`.
pub fn truncated_u(x: C64, u: C64, c: C64) -> C64 {
    u - (u * 3.0 + u * u * 3.0 + c * u * u * u) * x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SectorVerdict {
    ConvergedToOrigin { steps: usize },
    LeftSector { step: usize },
    Undecided { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorOrbitOptions {
    pub max_iter: usize,
    /// `|x_n|` below which the orbit counts as converged.
    pub floor: f64,
}

impl Default for SectorOrbitOptions {
    fn default() -> Self {
        Self {
            max_iter: 100_000,
            floor: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorOrbit {
    pub verdict: SectorVerdict,
    pub last: SectorPoint,
    /// True when every iterate up to termination was in the sector.
    pub stayed_in_sector: bool,
}

/// Iterates in blow-up coordinates until the orbit leaves the sector, its
/// `|x|` drops below the floor, or `max_iter` is reached.
pub fn sector_orbit<M: Map2 + ?Sized>(map: &M, pt: SectorPoint, opts: SectorOrbitOptions) -> Result<SectorOrbit> {
    if !in_sector(&pt) {
        return Ok(SectorOrbit {
            verdict: SectorVerdict::LeftSector { step: 0 },
            last: pt,
            stayed_in_sector: false,
        });
    }
    let mut p = pt;
    for n in 1..=opts.max_iter {
        p = blowup_step(map, &p)?;
        if !in_sector(&p) {
            return Ok(SectorOrbit {
                verdict: SectorVerdict::LeftSector { step: n },
                last: p,
                stayed_in_sector: false,
            });
        }
        if p.x.norm() < opts.floor {
            return Ok(SectorOrbit {
                verdict: SectorVerdict::ConvergedToOrigin { steps: n },
                last: p,
                stayed_in_sector: true,
            });
        }
    }
    Ok(SectorOrbit {
        verdict: SectorVerdict::Undecided { steps: opts.max_iter },
        last: p,
        stayed_in_sector: true,
    })
}

/// Number of steps (up to `horizon`) the orbit stays in the sector.
pub fn sector_residence<M: Map2 + ?Sized>(map: &M, pt: SectorPoint, horizon: usize) -> usize {
    if !in_sector(&pt) {
        return 0;
    }
    let mut p = pt;
    for n in 1..=horizon {
        match blowup_step(map, &p) {
            Ok(q) if in_sector(&q) => p = q,
            _ => return n - 1,
        }
    }
    horizon
}

/// Expansion margin `|u1 - v1| - max(|u - v|, 2|x1 - y1|)` for a pair, or
/// `None` when the pair does not satisfy `2|x - y| < |u - v|`.
pub fn expansion_margin<M: Map2 + ?Sized>(map: &M, a: &SectorPoint, b: &SectorPoint) -> Result<Option<f64>> {
    let du = (a.u - b.u).norm();
    if !(2.0 * (a.x - b.x).norm() < du) {
        return Ok(None);
    }
    let a1 = blowup_step(map, a)?;
    let b1 = blowup_step(map, b)?;
    let lhs = (a1.u - b1.u).norm();
    Ok(Some(lhs - du.max(2.0 * (a1.x - b1.x).norm())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub epsilon: f64,
    pub trials: usize,
    /// Pairs drawn that met the hypothesis.
    pub admissible: usize,
    pub violations: usize,
    pub min_margin: f64,
    /// Smallest `|u1 - v1| / max(|u - v|, 2|x1 - y1|)`.
    pub min_ratio: f64,
    /// False when violations were found, i.e. `epsilon` is too large.
    pub in_regime: bool,
}

fn sector_x<R: Rng>(rng: &mut R, eps: f64) -> C64 {
    let r = eps * rng.random::<f64>();
    let t = PI + eps * (2.0 * rng.random::<f64>() - 1.0);
    C64::from_polar(r, t)
}

fn admissible_pair<R: Rng>(rng: &mut R, eps: f64) -> Option<(SectorPoint, SectorPoint)> {
    for _ in 0..64 {
        let x = sector_x(rng, eps);
        let u = disc_point(rng, x.norm() / 2.0);
        let v = disc_point(rng, x.norm() / 2.0);
        let h = disc_point(rng, (u - v).norm() / 2.0);
        let a = SectorPoint::new(x, u, eps);
        let b = SectorPoint::new(x + h, v, eps);
        if in_sector(&a) && in_sector(&b) && 2.0 * h.norm() < (u - v).norm() {
            return Some((a, b));
        }
    }
    None
}

/// Checks the expansion inequality on `trials` random admissible pairs.
pub fn expansion_check<M: Map2 + ?Sized>(map: &M, epsilon: f64, trials: usize, seed: u64) -> Result<ExpansionReport> {
    let results: Vec<Option<(f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Option<(f64, f64)>> {
            let mut rng = sample_rng(seed, i as u64);
            let Some((a, b)) = admissible_pair(&mut rng, epsilon) else {
                return Ok(None);
            };
            let a1 = blowup_step(map, &a)?;
            let b1 = blowup_step(map, &b)?;
            let lhs = (a1.u - b1.u).norm();
            let rhs = (a.u - b.u).norm().max(2.0 * (a1.x - b1.x).norm());
            Ok(Some((lhs - rhs, lhs / rhs)))
        })
        .collect::<Result<_>>()?;
    let mut report = ExpansionReport {
        epsilon,
        trials,
        admissible: 0,
        violations: 0,
        min_margin: f64::INFINITY,
        min_ratio: f64::INFINITY,
        in_regime: true,
    };
    for (margin, ratio) in results.into_iter().flatten() {
        report.admissible += 1;
        if !(margin > 0.0) {
            report.violations += 1;
        }
        report.min_margin = report.min_margin.min(margin);
        report.min_ratio = report.min_ratio.min(ratio);
    }
    report.in_regime = report.violations == 0;
    Ok(report)
}

/// Largest candidate `epsilon` whose expansion check has no violations.
pub fn calibrate_epsilon<M: Map2 + ?Sized>(
    map: &M,
    candidates: &[f64],
    trials: usize,
    seed: u64,
) -> Result<(Option<f64>, Vec<ExpansionReport>)> {
    let mut reports = Vec::with_capacity(candidates.len());
    let mut best: Option<f64> = None;
    for &eps in candidates {
        let r = expansion_check(map, eps, trials, seed)?;
        if r.in_regime && best.is_none_or(|b| eps > b) {
            best = Some(eps);
        }
        reports.push(r);
    }
    Ok((best, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{AutoChain, EndoChain};
    use crate::linalg::{c, re};
    use crate::parabolic::quadratic::HomogeneousQuadratic;

    fn jet(cv: f64) -> EndoChain {
        EndoChain::jet(HomogeneousQuadratic::normal_form(re(cv)))
    }

    #[test]
    fn sector_membership_examples() {
        assert!(in_sector(&SectorPoint::new(re(-0.01), re(0.0), 0.05)));
        assert!(!in_sector(&SectorPoint::new(re(-0.01), re(0.006), 0.05)));
        assert!(!in_sector(&SectorPoint::new(re(0.01), re(0.0), 0.05)));
    }

    #[test]
    fn step_on_invariant_fiber() {
        let f = jet(0.0);
        let p = blowup_step(&f, &SectorPoint::new(re(-0.1), re(0.0), 0.2)).unwrap();
        assert!((p.x - re(-0.09)).norm() < 1e-15);
        assert_eq!(p.u, re(0.0));
        let g = jet(2.5);
        let q = blowup_step(&g, &SectorPoint::new(c(-0.01, 0.001), re(0.0), 0.2)).unwrap();
        assert_eq!(q.u.norm(), 0.0);
        assert!(matches!(
            blowup_step(&f, &SectorPoint::new(re(0.0), re(0.0), 0.2)),
            Err(Error::BlowupSingular)
        ));
    }

    #[test]
    fn jet_matches_truncation_in_x() {
        let f = jet(1.0);
        let (x, u) = (c(-0.01, 0.002), c(0.001, -0.002));
        let p = blowup_step(&f, &SectorPoint::new(x, u, 0.1)).unwrap();
        assert!((p.x - truncated_x(x, u, re(1.0))).norm() < 1e-17);
        assert!((p.u - truncated_u(x, u, re(1.0))).norm() < 10.0 * x.norm() * x.norm());
    }

    #[test]
    fn sector_orbit_cases() {
        let f = jet(0.0);
        let o = sector_orbit(&f, SectorPoint::new(re(-0.01), re(0.0), 0.05), SectorOrbitOptions::default()).unwrap();
        assert!(matches!(o.verdict, SectorVerdict::ConvergedToOrigin { .. }));
        let o = sector_orbit(&f, SectorPoint::new(re(-0.01), re(-0.004), 0.05), SectorOrbitOptions::default()).unwrap();
        if o.stayed_in_sector {
            assert!(o.last.x.norm() < 1e-4);
        }
        let eps = 0.05;
        let x = C64::from_polar(0.01, PI - 2.0 * eps);
        let o = sector_orbit(&f, SectorPoint::new(x, re(0.0), eps), SectorOrbitOptions::default()).unwrap();
        assert_eq!(o.verdict, SectorVerdict::LeftSector { step: 0 });
    }

    #[test]
    fn identical_pair_is_skipped() {
        let f = jet(0.0);
        let a = SectorPoint::new(re(-0.01), re(0.001), 0.02);
        assert_eq!(expansion_margin(&f, &a, &a).unwrap(), None);
    }

    #[test]
    fn expansion_holds_at_small_epsilon() {
        for cv in [0.0, 1.0, 3.0] {
            let f = AutoChain::parabolic_normal_form(re(cv));
            let r = expansion_check(&f, 0.02, 2000, 11).unwrap();
            assert!(r.admissible > 1900);
            assert_eq!(r.violations, 0, "c = {cv}: {r:?}");
        }
    }
}
