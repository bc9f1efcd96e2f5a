use nalgebra::{DMatrix, Schur};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{re, Mat2, Point2, C64};
use crate::parabolic::quadratic::HomogeneousQuadratic;

/// Relative size below which a coefficient counts as zero.
const COEFF_TOL: f64 = 1e-12;
/// Roots closer than this are merged into one direction.
const MERGE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `y = u x`
    YeqUx,
    /// `x = w y`, used only for the direction `(0, 1)`
    XeqWy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicDirection {
    /// Unit vector `v` with `P2(v) = lambda v`.
    pub direction: Point2,
    pub lambda: C64,
    pub degenerate: bool,
    pub chart: Chart,
    /// Chart coordinate `u` of `(1, u)`; `None` for `(0, 1)`.
    pub u: Option<C64>,
    /// `p(1, u)`, or `q(0, 1)` for `(0, 1)`.
    pub chart_lambda: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DirectionSet {
    /// Every direction is characteristic (zero or radial quadratic part).
    AllDirections,
    Directions(Vec<CharacteristicDirection>),
}

impl DirectionSet {
    pub fn directions(&self) -> &[CharacteristicDirection] {
        match self {
            DirectionSet::AllDirections => &[],
            DirectionSet::Directions(d) => d,
        }
    }
}

/// `|P2(v) - lambda v|`
pub fn characteristic_residual(p2: &HomogeneousQuadratic, v: Point2, lambda: C64) -> f64 {
    (p2.eval(v) - v.scale(lambda)).norm()
}

/// Best `lambda` for `P2(v) ~ lambda v` and its residual.
pub fn rayleigh(p2: &HomogeneousQuadratic, v: Point2) -> (C64, f64) {
    let w = p2.eval(v);
    let lambda = v.dot(w) / v.dot(v);
    (lambda, characteristic_residual(p2, v, lambda))
}

fn poly_eval(coeffs: &[C64], u: C64) -> (C64, C64) {
    let mut v = re(0.0);
    let mut dv = re(0.0);
    for &a in coeffs.iter().rev() {
        dv = dv * u + v;
        v = v * u + a;
    }
    (v, dv)
}

/// Roots of a polynomial given degree-ascending, via companion-matrix
/// eigenvalues and one Newton polish each. Roots at zero are split off
/// exactly first.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let scale = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1].norm() <= COEFF_TOL * scale {
        deg -= 1;
    }
    if deg <= 1 {
        return Vec::new();
    }
    let zeros = coeffs[..deg].iter().take_while(|a| a.norm() <= COEFF_TOL * scale).count();
    let reduced = &coeffs[zeros..deg];
    let mut roots = vec![re(0.0); zeros];
    let n = reduced.len() - 1;
    if n > 0 {
        let lead = reduced[n];
        let mut m = DMatrix::<C64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = re(1.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -reduced[i] / lead;
        }
        let eig = Schur::try_new(m, f64::EPSILON, 10_000)
            .and_then(|s| s.eigenvalues())
            .map(|v| v.iter().copied().collect())
            .unwrap_or_else(|| durand_kerner(reduced));
        roots.extend(eig.into_iter().map(|z: C64| {
            let (v, dv) = poly_eval(reduced, z);
            if dv.norm() > 0.0 {
                let polished = z - v / dv;
                if polished.is_finite() && poly_eval(reduced, polished).0.norm() <= v.norm() {
                    return polished;
                }
            }
            z
        }));
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap_or(std::cmp::Ordering::Equal));
    roots
}

fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let monic: Vec<C64> = coeffs.iter().map(|a| a / coeffs[n]).collect();
    let seed = crate::linalg::c(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        for i in 0..n {
            let denom: C64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let step = poly_eval(&monic, z[i]).0 / denom;
            z[i] -= step;
        }
    }
    z
}

/// Characteristic directions of `P2`.
///
/// In the chart `y = u x` a direction `(1, u)` is characteristic iff
/// `q(1, u) - u p(1, u) = 0`; the direction `(0, 1)` is characteristic iff
/// `p(0, 1) = 0`.
pub fn characteristic_directions(p2: &HomogeneousQuadratic) -> DirectionSet {
    let (p, q) = p2.chart_y_eq_ux();
    let r = [q[0], q[1] - p[0], q[2] - p[1], -p[2]];
    let scale = p2.norm();
    if scale == 0.0 || r.iter().all(|a| a.norm() <= COEFF_TOL * scale) {
        return DirectionSet::AllDirections;
    }
    let degenerate_tol = 1e-10 * scale.max(1.0);
    let mut out: Vec<CharacteristicDirection> = Vec::new();
    for u in poly_roots(&r) {
        if let Some(existing) = out.iter_mut().find(|d| d.u.is_some_and(|w| (w - u).norm() < MERGE_TOL)) {
            existing.multiplicity += 1;
            continue;
        }
        let v = Point2::new(re(1.0), u).normalized();
        let chart_lambda = poly_eval(&p, u).0;
        let (lambda, residual) = rayleigh(p2, v);
        out.push(CharacteristicDirection {
            direction: v,
            lambda,
            degenerate: lambda.norm() <= degenerate_tol,
            chart: Chart::YeqUx,
            u: Some(u),
            chart_lambda,
            multiplicity: 1,
            residual,
        });
    }
    if p[2].norm() <= COEFF_TOL * scale {
        let v = Point2::new(re(0.0), re(1.0));
        let (lambda, residual) = rayleigh(p2, v);
        out.push(CharacteristicDirection {
            direction: v,
            lambda,
            degenerate: lambda.norm() <= degenerate_tol,
            chart: Chart::XeqWy,
            u: None,
            chart_lambda: q[2],
            multiplicity: 1 + (r[2].norm() <= COEFF_TOL * scale) as usize,
            residual,
        });
    }
    DirectionSet::Directions(out)
}

/// Distance between two directions in projective space, `sqrt(1 - |<v, w>|^2)`.
pub fn direction_distance(v: Point2, w: Point2) -> f64 {
    let c = v.dot(w).norm() / (v.norm() * w.norm());
    (1.0 - c * c).max(0.0).sqrt()
}

/// Adds the divergence-free term `(eps x^2, -2 eps xy)`, which turns the
/// degenerate characteristic direction `(1, 0)` into a non-degenerate one.
pub fn make_nondegenerate(p2: &HomogeneousQuadratic, v: Point2, eps: f64) -> Result<HomogeneousQuadratic> {
    if (v.x - re(1.0)).norm() > 1e-12 || v.y.norm() > 1e-12 {
        return Err(Error::VNotNormalized);
    }
    let residual = p2.q[0].norm();
    if residual > 1e-10 * p2.norm().max(1.0) {
        return Err(Error::NotCharacteristic { residual });
    }
    let z = re(0.0);
    let term = HomogeneousQuadratic::new([re(eps), z, z], [z, re(-2.0 * eps), z]);
    Ok(p2.add(&term))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalForm {
    /// Conjugated quadratic part `M^{-1} P2(M z)`.
    pub quadratic: HomogeneousQuadratic,
    /// `b` before the final rescaling.
    pub b: C64,
    pub c: C64,
    /// True when `b = 0` and the rescaling was skipped.
    pub b_zero: bool,
    /// The linear conjugation `M`; normal-form coordinates `w` correspond to
    /// original coordinates `M w`.
    pub conjugation: Mat2,
}

impl NormalForm {
    pub fn to_original(&self, w: Point2) -> Point2 {
        self.conjugation.apply(w)
    }

    pub fn to_normal(&self, z: Point2) -> Point2 {
        self.conjugation
            .inverse()
            .expect("conjugations are invertible")
            .apply(z)
    }
}

/// Conjugates a divergence-free `P2` so that `v` becomes `(1, 0)` with
/// `P2(1, 0) = (1, 0)`, then rescales `y` so that `b = 1`.
pub fn normalize(p2: &HomogeneousQuadratic, v: &CharacteristicDirection) -> Result<NormalForm> {
    let scale = p2.norm().max(1.0);
    let defect = p2.divergence_defect();
    if defect > 1e-10 * scale {
        return Err(Error::NotDivergenceFree { defect });
    }
    let d = v.direction.scale(re(1.0 / v.direction.norm()));
    let (lambda, residual) = rayleigh(p2, d);
    if residual > 1e-8 * scale {
        return Err(Error::NotCharacteristic { residual });
    }
    if lambda.norm() <= 1e-10 * scale {
        return Err(Error::DegenerateDirection);
    }
    let complement = Point2::new(-d.y.conj(), d.x.conj());
    let a = Mat2::from_columns(d, complement);
    let m1 = Mat2::new(a.m[0][0] / lambda, a.m[0][1] / lambda, a.m[1][0] / lambda, a.m[1][1] / lambda);
    let eq1 = p2.conjugate(&m1)?;
    let b = eq1.p[1] / 2.0;
    if b.norm() <= 1e-12 * scale {
        return Ok(NormalForm {
            quadratic: eq1,
            b,
            c: eq1.p[2],
            b_zero: true,
            conjugation: m1,
        });
    }
    let m2 = Mat2::diag(re(1.0), re(1.0) / b);
    let m = m1 * m2;
    let eq2 = p2.conjugate(&m)?;
    Ok(NormalForm {
        quadratic: eq2,
        b,
        c: eq2.p[2],
        b_zero: false,
        conjugation: m,
    })
}
