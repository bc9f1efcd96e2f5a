use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{re, Mat2, Point2, C64};
use crate::poly::{Bivariate, PolyMap};

/// Homogeneous quadratic vector field `P2 = (p, q)`.
///
/// `p = p[0] x^2 + p[1] xy + p[2] y^2` and likewise for `q`. In the
/// `(x^2 + 2b xy + c y^2, ...)` notation, `p[1]` is the `2b` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomogeneousQuadratic {
    pub p: [C64; 3],
    pub q: [C64; 3],
}

impl HomogeneousQuadratic {
    pub fn new(p: [C64; 3], q: [C64; 3]) -> Self {
        Self { p, q }
    }

    pub fn zero() -> Self {
        let z = re(0.0);
        Self::new([z; 3], [z; 3])
    }

    /// `(x^2 + 2b xy + c y^2, -2xy - b y^2)`
    pub fn volume_preserving_form(b: C64, c: C64) -> Self {
        Self::new([re(1.0), b * 2.0, c], [re(0.0), re(-2.0), -b])
    }

    /// `(x^2 + 2xy + c y^2, -2xy - y^2)`
    pub fn normal_form(c: C64) -> Self {
        Self::volume_preserving_form(re(1.0), c)
    }

    pub fn eval(&self, z: Point2) -> Point2 {
        let (x, y) = (z.x, z.y);
        let mono = [x * x, x * y, y * y];
        Point2::new(dot3(&self.p, &mono), dot3(&self.q, &mono))
    }

    pub fn jacobian(&self, z: Point2) -> Mat2 {
        let (x, y) = (z.x, z.y);
        let dx = |a: &[C64; 3]| a[0] * x * 2.0 + a[1] * y;
        let dy = |a: &[C64; 3]| a[1] * x + a[2] * y * 2.0;
        Mat2::new(dx(&self.p), dy(&self.p), dx(&self.q), dy(&self.q))
    }

    /// `p(1, u)` and `q(1, u)` as coefficient arrays in `u`.
    pub fn chart_y_eq_ux(&self) -> ([C64; 3], [C64; 3]) {
        (self.p, self.q)
    }

    pub fn to_bivariate(&self) -> (Bivariate, Bivariate) {
        let build = |a: &[C64; 3]| {
            let mut b = Bivariate::zero();
            b.add_term(2, 0, a[0]);
            b.add_term(1, 1, a[1]);
            b.add_term(0, 2, a[2]);
            b
        };
        (build(&self.p), build(&self.q))
    }

    /// Coefficient norm.
    pub fn norm(&self) -> f64 {
        self.p
            .iter()
            .chain(self.q.iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }

    /// Size of `p_x + q_y` as a linear form: `|e + 2a| + |2f + 2b|`.
    pub fn divergence_defect(&self) -> f64 {
        (self.q[1] + self.p[0] * 2.0).norm() + (self.q[2] * 2.0 + self.p[1]).norm()
    }

    pub fn add(&self, o: &HomogeneousQuadratic) -> HomogeneousQuadratic {
        let mut out = *self;
        for k in 0..3 {
            out.p[k] += o.p[k];
            out.q[k] += o.q[k];
        }
        out
    }

    /// Linear conjugate `z -> M^{-1} P2(M z)`.
    pub fn conjugate(&self, m: &Mat2) -> Result<HomogeneousQuadratic> {
        let inv = m
            .inverse()
            .ok_or(Error::SingularLinear { det: m.det().norm() })?;
        let [[a, b], [c, d]] = m.m;
        // coefficients (x^2, xy, y^2) of x'^2, x'y', y'^2 with x' = ax + by, y' = cx + dy
        let xx = [a * a, a * b * 2.0, b * b];
        let xy = [a * c, a * d + b * c, b * d];
        let yy = [c * c, c * d * 2.0, d * d];
        let expand = |f: &[C64; 3]| -> [C64; 3] {
            let mut out = [re(0.0); 3];
            for k in 0..3 {
                out[k] = f[0] * xx[k] + f[1] * xy[k] + f[2] * yy[k];
            }
            out
        };
        let pm = expand(&self.p);
        let qm = expand(&self.q);
        let [[i00, i01], [i10, i11]] = inv.m;
        let mut out = HomogeneousQuadratic::zero();
        for k in 0..3 {
            out.p[k] = i00 * pm[k] + i01 * qm[k];
            out.q[k] = i10 * pm[k] + i11 * qm[k];
        }
        Ok(out)
    }

    pub fn max_coeff_diff(&self, o: &HomogeneousQuadratic) -> f64 {
        (0..3)
            .map(|k| (self.p[k] - o.p[k]).norm().max((self.q[k] - o.q[k]).norm()))
            .fold(0.0, f64::max)
    }
}

fn dot3(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Exact degree-2 part of a polynomial map tangent to the identity at 0.
pub fn quadratic_part(map: &PolyMap) -> Result<HomogeneousQuadratic> {
    let one = re(1.0);
    let zero = re(0.0);
    let deviation = [
        map.fx.coeff(0, 0) - zero,
        map.fy.coeff(0, 0) - zero,
        map.fx.coeff(1, 0) - one,
        map.fx.coeff(0, 1) - zero,
        map.fy.coeff(1, 0) - zero,
        map.fy.coeff(0, 1) - one,
    ]
    .iter()
    .map(|v| v.norm())
    .fold(0.0, f64::max);
    if deviation > 1e-12 {
        return Err(Error::NotTangentToIdentity { deviation });
    }
    Ok(HomogeneousQuadratic::new(
        [map.fx.coeff(2, 0), map.fx.coeff(1, 1), map.fx.coeff(0, 2)],
        [map.fy.coeff(2, 0), map.fy.coeff(1, 1), map.fy.coeff(0, 2)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{AutoChain, ElementaryMap, EndoChain};
    use crate::linalg::c;
    use crate::poly::Poly1;

    #[test]
    fn identity_has_zero_quadratic_part() {
        let q = quadratic_part(&PolyMap::identity()).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn normal_form_jet_is_recovered() {
        let target = HomogeneousQuadratic::normal_form(re(3.0));
        let q = quadratic_part(&EndoChain::jet(target).to_polymap()).unwrap();
        assert_eq!(q.p, [re(1.0), re(2.0), re(3.0)]);
        assert_eq!(q.q, [re(0.0), re(-2.0), re(-1.0)]);
        assert_eq!(q.divergence_defect(), 0.0);
    }

    #[test]
    fn shear_composition_matches_hand_expansion() {
        // (x, y) -> (x + y^2, y) -> (x + y^2, y + (x + y^2)^2): quadratic part (y^2, x^2)
        let ch = AutoChain::new(
            vec![
                ElementaryMap::ShearX(Poly1::real(&[0.0, 0.0, 1.0])),
                ElementaryMap::ShearY(Poly1::real(&[0.0, 0.0, 1.0])),
            ],
            true,
        )
        .unwrap();
        let q = quadratic_part(&ch.to_polymap()).unwrap();
        assert_eq!(q.p, [re(0.0), re(0.0), re(1.0)]);
        assert_eq!(q.q, [re(1.0), re(0.0), re(0.0)]);

        // The normal-form automorphism realizes the normal form quadratic part.
        let cc = c(0.7, -0.4);
        let q = quadratic_part(&AutoChain::parabolic_normal_form(cc).to_polymap()).unwrap();
        assert!(q.max_coeff_diff(&HomogeneousQuadratic::normal_form(cc)) < 1e-15);
    }

    #[test]
    fn non_tangent_map_is_rejected() {
        let err = quadratic_part(&AutoChain::henon(0.75).to_polymap()).unwrap_err();
        assert!(matches!(err, Error::NotTangentToIdentity { .. }));
    }

    #[test]
    fn conjugation_agrees_with_pointwise_formula() {
        let p = HomogeneousQuadratic::new(
            [c(1.0, 0.5), c(-2.0, 0.0), c(0.3, 0.1)],
            [c(0.2, 0.0), c(0.0, 1.0), c(-1.0, 0.0)],
        );
        let m = Mat2::new(c(1.0, 0.2), c(0.5, 0.0), c(-0.3, 0.0), c(2.0, -1.0));
        let pc = p.conjugate(&m).unwrap();
        let inv = m.inverse().unwrap();
        for &(x, y) in &[(0.3, -0.7), (1.1, 0.4), (-0.2, 0.05)] {
            let z = Point2::new(c(x, 0.2), c(y, -0.1));
            let direct = inv.apply(p.eval(m.apply(z)));
            assert!((pc.eval(z) - direct).norm() < 1e-13);
        }
    }
}
