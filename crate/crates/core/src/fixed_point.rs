//! Newton search for fixed points and their eigenvalue classification.

use serde::Serialize;

use crate::chain::Differentiable;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Point2, C64};

/// Eigenvalue moduli within this band of 1 count as neutral.
pub const NEUTRAL_BAND: f64 = 1e-9;
/// Differentials within this distance of the identity are tangent to it.
pub const TANGENT_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Attracting,
    Repelling,
    Saddle,
    TangentToIdentity,
    NeutralOther,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointInfo {
    pub location: Point2,
    pub differential: Mat2,
    /// Ordered by increasing modulus.
    pub eigenvalues: [C64; 2],
    pub classification: Classification,
    pub stable_dim: usize,
    pub stable_direction: Option<Point2>,
    pub unstable_direction: Option<Point2>,
    /// `df - Id` is numerically singular: the fixed point is not isolated
    /// or not simple.
    pub degenerate: bool,
    pub residual: f64,
    pub iterations: usize,
}

impl FixedPointInfo {
    /// Classifies a fixed point from its differential.
    pub fn from_differential(location: Point2, differential: Mat2, residual: f64) -> Self {
        let eigenvalues = differential.eigenvalues();
        let mods = eigenvalues.map(|l| l.norm());
        let tangent = differential.sub(&Mat2::identity()).max_abs() < TANGENT_BAND;
        let neutral = mods.iter().any(|m| (m - 1.0).abs() <= NEUTRAL_BAND);
        let stable_dim = mods.iter().filter(|&&m| m < 1.0 - NEUTRAL_BAND).count();
        let classification = if tangent {
            Classification::TangentToIdentity
        } else if neutral {
            Classification::NeutralOther
        } else {
            match stable_dim {
                2 => Classification::Attracting,
                0 => Classification::Repelling,
                _ => Classification::Saddle,
            }
        };
        let (stable_direction, unstable_direction) = if classification == Classification::Saddle {
            (
                Some(differential.eigenvector(eigenvalues[0])),
                Some(differential.eigenvector(eigenvalues[1])),
            )
        } else {
            (None, None)
        };
        let newton = differential.sub(&Mat2::identity());
        let degenerate = newton.condition() > 1e12;
        Self {
            location,
            differential,
            eigenvalues,
            classification,
            stable_dim,
            stable_direction,
            unstable_direction,
            degenerate,
            residual,
            iterations: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

fn residual<M: Differentiable + ?Sized>(map: &M, z: Point2) -> Option<(Point2, f64)> {
    let fz = map.apply(z).ok()?;
    let g = fz - z;
    Some((g, g.norm()))
}

/// Damped Newton iteration on `g(z) = f(z) - z`.
pub fn find_fixed_point<M: Differentiable + ?Sized>(
    map: &M,
    seed: Point2,
    opts: NewtonOptions,
) -> Result<FixedPointInfo> {
    if !seed.is_finite() {
        return Err(Error::InvalidParams("seed must be finite".into()));
    }
    if opts.tol <= 0.0 {
        return Err(Error::InvalidParams("tol must be positive".into()));
    }
    let mut z = seed;
    let (mut g, mut res) = residual(map, z).ok_or(Error::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    })?;
    for it in 0..=opts.max_iter {
        if res < opts.tol {
            let mut info = FixedPointInfo::from_differential(z, map.differential(z), res);
            info.iterations = it;
            return Ok(info);
        }
        if it == opts.max_iter {
            break;
        }
        let jac = map.differential(z).sub(&Mat2::identity());
        let condition = jac.condition();
        let inv = match jac.inverse() {
            Some(inv) if condition < 1e14 => inv,
            _ => {
                return Err(Error::SingularDifferential {
                    det: jac.det().norm(),
                    condition,
                })
            }
        };
        let step = inv.apply(g);
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = z - step.scale(C64::new(scale, 0.0));
            if let Some((gc, rc)) = residual(map, cand) {
                if rc <= res || scale < 1e-9 {
                    accepted = Some((cand, gc, rc));
                    break;
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((cand, gc, rc)) => {
                z = cand;
                g = gc;
                res = rc;
            }
            None => break,
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: res,
    })
}
