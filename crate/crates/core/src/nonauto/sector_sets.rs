use std::f64::consts::SQRT_2;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{re, Point2, C64};
use crate::sampling::{ball_point, disc_point, sample_rng};

/// Tolerance for membership in the components of measure zero.
pub const THIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorSetParams {
    #[serde(rename = "R")]
    pub r: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Radius of the target balls the components are sent into.
    pub rho: f64,
}

impl SectorSetParams {
    pub fn new(r: f64, epsilon: f64, delta: f64, rho: f64) -> Result<Self> {
        if !(epsilon > 0.0 && delta > 0.0 && rho > 0.0) {
            return Err(Error::InvalidParams("epsilon, delta and rho must be positive".into()));
        }
        if !(r > epsilon) || !r.is_finite() {
            return Err(Error::InvalidParams("R must exceed epsilon".into()));
        }
        Ok(Self { r, epsilon, delta, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Component {
    Ball,
    KxDisc,
    LxZero,
    ZeroxK,
    ZeroxL,
    Outside,
}

pub const COMPONENTS: [Component; 5] = [
    Component::Ball,
    Component::KxDisc,
    Component::LxZero,
    Component::ZeroxK,
    Component::ZeroxL,
];

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Ball => "Ball",
            Component::KxDisc => "KxDisc",
            Component::LxZero => "LxZero",
            Component::ZeroxK => "ZeroxK",
            Component::ZeroxL => "ZeroxL",
            Component::Outside => "Outside",
        }
    }
}

/// The slit disc: the closed disc of radius `R` minus the open sector
/// `|arg| < eps` (closure taken, so the apex is included), shifted left by `eps`.
pub fn in_k(p: &SectorSetParams, z: C64) -> bool {
    let w = z + p.epsilon;
    if w.norm() > p.r + THIN_TOL {
        return false;
    }
    w.norm() <= THIN_TOL || w.arg().abs() >= p.epsilon - THIN_TOL
}

/// The segment `[eps, R]` of the real axis.
pub fn in_l(p: &SectorSetParams, z: C64) -> bool {
    z.im.abs() <= THIN_TOL && z.re >= p.epsilon - THIN_TOL && z.re <= p.r + THIN_TOL
}

pub fn in_component(p: &SectorSetParams, comp: Component, z: Point2) -> bool {
    let zero = |v: C64| v.norm() <= THIN_TOL;
    match comp {
        Component::Ball => z.norm() <= p.delta,
        Component::KxDisc => in_k(p, z.x) && z.y.norm() <= p.r,
        Component::LxZero => in_l(p, z.x) && zero(z.y),
        Component::ZeroxK => zero(z.x) && in_k(p, z.y),
        Component::ZeroxL => zero(z.x) && in_l(p, z.y),
        Component::Outside => false,
    }
}

/// The component containing `z`.
pub fn sector_sets_membership(p: &SectorSetParams, z: Point2) -> Result<Component> {
    let mut found: Option<Component> = None;
    for comp in COMPONENTS {
        if in_component(p, comp, z) {
            if let Some(first) = found {
                return Err(Error::AmbiguousComponent {
                    first: first.name().into(),
                    second: comp.name().into(),
                });
            }
            found = Some(comp);
        }
    }
    Ok(found.unwrap_or(Component::Outside))
}

/// Exact distance between two components.
pub fn component_distance(p: &SectorSetParams, a: Component, b: Component) -> f64 {
    use Component::*;
    let e = p.epsilon;
    let d0k = e * e.sin();
    let dkl = 2.0 * e * e.sin();
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let d = match (a, b) {
        (Ball, KxDisc) | (Ball, ZeroxK) => d0k - p.delta,
        (Ball, LxZero) | (Ball, ZeroxL) => e - p.delta,
        (KxDisc, LxZero) => dkl,
        (KxDisc, ZeroxK) | (KxDisc, ZeroxL) => d0k,
        (LxZero, ZeroxK) => (e * e + d0k * d0k).sqrt(),
        (LxZero, ZeroxL) => e * SQRT_2,
        (ZeroxK, ZeroxL) => dkl,
        _ => 0.0,
    };
    d.max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDistance {
    pub a: Component,
    pub b: Component,
    pub exact: f64,
    /// Min distance between the sampled points of both components.
    pub sampled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisjointnessReport {
    pub params: SectorSetParams,
    pub samples_per_component: usize,
    pub pairs: Vec<PairDistance>,
    pub min_distance: f64,
    pub disjoint: bool,
    /// Pairs at distance zero.
    pub colliding: Vec<(Component, Component)>,
    /// Sampled points that were assigned to two components.
    pub ambiguous_samples: usize,
}

fn sample_k<R: Rng>(p: &SectorSetParams, rng: &mut R) -> C64 {
    loop {
        let w = disc_point(rng, p.r);
        if w.arg().abs() >= p.epsilon {
            return w - p.epsilon;
        }
    }
}

fn sample_component<R: Rng>(p: &SectorSetParams, comp: Component, rng: &mut R) -> Point2 {
    let seg = |rng: &mut R| re(p.epsilon + (p.r - p.epsilon) * rng.random::<f64>());
    let zero = re(0.0);
    match comp {
        Component::Ball => ball_point(rng, Point2::ZERO, p.delta),
        Component::KxDisc => Point2::new(sample_k(p, rng), disc_point(rng, p.r)),
        Component::LxZero => Point2::new(seg(rng), zero),
        Component::ZeroxK => Point2::new(zero, sample_k(p, rng)),
        Component::ZeroxL => Point2::new(zero, seg(rng)),
        Component::Outside => Point2::ZERO,
    }
}

/// Points of a component nearest to the others: apex, slit rays and segment ends.
fn landmarks(p: &SectorSetParams, comp: Component) -> Vec<Point2> {
    let e = p.epsilon;
    let zero = re(0.0);
    let ray = |s: f64| [C64::from_polar(s, e) - e, C64::from_polar(s, -e) - e];
    let k_pts: Vec<C64> = [e.cos(), 2.0 * e.cos(), 0.0]
        .iter()
        .flat_map(|&s| ray(s))
        .collect();
    match comp {
        Component::Ball => vec![Point2::new(re(p.delta), zero), Point2::new(zero, re(p.delta))],
        Component::KxDisc => k_pts.iter().map(|&x| Point2::new(x, zero)).collect(),
        Component::LxZero => vec![Point2::new(re(e), zero)],
        Component::ZeroxK => k_pts.iter().map(|&y| Point2::new(zero, y)).collect(),
        Component::ZeroxL => vec![Point2::new(zero, re(e))],
        Component::Outside => vec![],
    }
}

/// Exact pairwise distances cross-checked against dense samples of each component.
pub fn disjointness_check(p: &SectorSetParams, samples: usize, seed: u64) -> Result<DisjointnessReport> {
    let p = SectorSetParams::new(p.r, p.epsilon, p.delta, p.rho)?;
    let clouds: Vec<Vec<Point2>> = COMPONENTS
        .iter()
        .enumerate()
        .map(|(k, &comp)| {
            let mut rng = sample_rng(seed, k as u64);
            let mut pts = landmarks(&p, comp);
            pts.extend((0..samples).map(|_| sample_component(&p, comp, &mut rng)));
            pts
        })
        .collect();
    let ambiguous_samples = clouds
        .iter()
        .flatten()
        .filter(|&&z| sector_sets_membership(&p, z).is_err())
        .count();
    let mut pairs = Vec::new();
    for i in 0..COMPONENTS.len() {
        for j in i + 1..COMPONENTS.len() {
            let sampled = clouds[i]
                .iter()
                .flat_map(|a| clouds[j].iter().map(move |b| a.dist(*b)))
                .fold(f64::INFINITY, f64::min);
            pairs.push(PairDistance {
                a: COMPONENTS[i],
                b: COMPONENTS[j],
                exact: component_distance(&p, COMPONENTS[i], COMPONENTS[j]),
                sampled,
            });
        }
    }
    let min_distance = pairs.iter().map(|d| d.exact).fold(f64::INFINITY, f64::min);
    let colliding: Vec<_> = pairs.iter().filter(|d| d.exact <= 0.0).map(|d| (d.a, d.b)).collect();
    Ok(DisjointnessReport {
        params: p,
        samples_per_component: samples,
        disjoint: colliding.is_empty(),
        pairs,
        min_distance,
        colliding,
        ambiguous_samples,
    })
}
