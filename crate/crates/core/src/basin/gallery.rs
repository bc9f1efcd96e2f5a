use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::chain::Map2;
use crate::error::{Error, Result};
use crate::linalg::{re, Point2, C64};

/// Distance to a pole below which an iterate counts as hitting it.
pub const POLE_TOL: f64 = 1e-12;
/// Points with `|z| >= 1 - BAND` use the outer branch of [`planar_homeo`].
pub const BAND: f64 = 1e-12;

/// Closed form of the `m`-th iterate of `z -> z / (1 + z)`.
pub fn sphere_map(m: u64, z: C64) -> Result<C64> {
    let d = z * m as f64 + 1.0;
    if d.norm() < POLE_TOL {
        return Err(Error::PoleHit { step: m as usize });
    }
    Ok(z / d)
}

/// `|closed form - m-fold iteration|`.
pub fn sphere_map_iterate_check(z: C64, m: u64) -> Result<f64> {
    let mut w = z;
    for k in 0..m {
        let d = w + 1.0;
        if d.norm() < POLE_TOL {
            return Err(Error::PoleHit { step: k as usize + 1 });
        }
        w /= d;
    }
    Ok((w - sphere_map(m, z)?).norm())
}

/// `psi(t) = t (4 pi - t) / (2 pi)`, an increasing bijection of `[0, 2 pi]`.
pub fn psi(theta: f64) -> f64 {
    theta * (2.0 * TAU - theta) / TAU
}

/// Angle in `[0, 2 pi)`.
fn angle(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// The planar homeomorphism fixing 1: on `|z| >= 1` it maps
/// `r e^{i t}` to `(r + 1)/2 e^{i psi(t)}`; inside the unit disc it moves
/// each circle through 1 tangent to the unit circle along itself by `psi`
/// of its angle coordinate.
pub fn planar_homeo(z: C64) -> C64 {
    let r = z.norm();
    if r >= 1.0 - BAND {
        return C64::from_polar((r + 1.0) / 2.0, psi(angle(z)));
    }
    let d = re(1.0) - z;
    let rho = d.norm_sqr() / (2.0 * d.re);
    let center = re(1.0 - rho);
    let phi = angle(z - center);
    center + C64::from_polar(rho, psi(phi))
}

/// `(z, w) -> (f(z + 1) - 1, w / 2)` with `f` = [`planar_homeo`]; fixes the origin.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlanarDemo;

impl Map2 for PlanarDemo {
    fn apply(&self, z: Point2) -> Result<Point2> {
        Ok(Point2::new(planar_homeo(z.x + 1.0) - 1.0, z.y * 0.5))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub m: usize,
    pub theta: f64,
    pub z: C64,
    /// `|z - 1|`
    pub distance: f64,
    /// `|f^m(z) - 1|` recomputed by forward iteration.
    pub image_distance: f64,
    /// Whether the forward iterate lands in the half plane of angles `[pi/2, 3pi/2]`.
    pub verified: bool,
}

/// The smallest `theta > 0` with `psi^m(theta) = pi / 2`, found by
/// bisection, and the resulting point `e^{i theta}` whose `m`-th image is at
/// distance at least `sqrt 2` from 1.
pub fn nonuniformity_witness(m: usize) -> Result<Witness> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let target = PI / 2.0;
    let g = |t: f64| (0..m).fold(t, |a, _| psi(a)) - target;
    let (mut lo, mut hi) = (0.0f64, target);
    if !(g(lo) < 0.0 && g(hi) >= 0.0) {
        return Err(Error::NotFound { theta: hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = hi;
    let z = C64::from_polar(1.0, theta);
    let mut w = z;
    for _ in 0..m {
        w = planar_homeo(w);
    }
    let a = angle(w);
    let verified = (target - 1e-9..=1.5 * PI).contains(&a) && (w - 1.0).norm() > 1.0;
    if !verified {
        return Err(Error::NotFound { theta });
    }
    Ok(Witness {
        m,
        theta,
        z,
        distance: (z - 1.0).norm(),
        image_distance: (w - 1.0).norm(),
        verified,
    })
}

/// Number of `psi` steps for `theta` to come within `tol` of `2 pi`.
pub fn psi_steps_to_full_turn(theta: f64, tol: f64, max_steps: usize) -> Option<usize> {
    let mut t = theta;
    for n in 0..=max_steps {
        if TAU - t < tol {
            return Some(n);
        }
        t = psi(t);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basin::orbit::{orbit, OrbitOptions};
    use crate::linalg::c;
    use crate::sampling::{disc_point, sample_rng};

    #[test]
    fn sphere_examples() {
        assert!((sphere_map(3, re(0.5)).unwrap() - re(0.2)).norm() < 1e-16);
        assert_eq!(sphere_map(7, re(0.0)).unwrap(), re(0.0));
        assert!(matches!(sphere_map(4, re(-0.25)), Err(Error::PoleHit { .. })));
        assert!(matches!(sphere_map_iterate_check(re(-0.25), 4), Err(Error::PoleHit { step: 4 })));
        assert!(sphere_map_iterate_check(c(0.3, -0.7), 10_000).unwrap() < 1e-12);
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(TAU), TAU);
        assert!((psi(PI) - 1.5 * PI).abs() < 1e-15);
        let n = psi_steps_to_full_turn(0.1, 1e-6, 100).unwrap();
        assert!(n > 3 && n < 20);
    }

    #[test]
    fn planar_homeo_is_continuous_across_unit_circle() {
        for k in 0..200 {
            let t = 0.01 + TAU * k as f64 / 200.0;
            let inner = planar_homeo(C64::from_polar(1.0 - 1e-9, t));
            let outer = planar_homeo(C64::from_polar(1.0 + 1e-9, t));
            assert!((inner - outer).norm() < 1e-6, "t = {t}");
        }
        assert_eq!(planar_homeo(re(1.0)), re(1.0));
    }

    #[test]
    fn planar_orbits_converge_to_one() {
        for i in 0..100 {
            let z = disc_point(&mut sample_rng(5, i), 3.0);
            let p = Point2::new(z - 1.0, re(0.0));
            let r = orbit(&PlanarDemo, p, OrbitOptions { max_iter: 10_000, target: Point2::ZERO, conv_tol: 1e-3 });
            assert!(r.verdict.converged(), "z = {z}");
        }
    }

    #[test]
    fn witnesses_up_to_30() {
        for m in 1..=30 {
            let w = nonuniformity_witness(m).unwrap();
            assert!(w.verified && w.image_distance > 1.0);
            if m >= 5 {
                assert!(w.distance < 0.1, "m = {m}: {}", w.distance);
            }
        }
        assert!(nonuniformity_witness(20).unwrap().theta < 1e-4);
    }
}
