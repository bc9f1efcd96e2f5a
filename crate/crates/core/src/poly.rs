//! Univariate and bivariate complex polynomials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Mat2, Point2, C64};

/// Univariate polynomial, coefficient of degree `d` at index `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly1 {
    coeffs: Vec<C64>,
}

impl Poly1 {
    /// Builds a polynomial, trimming zero leading coefficients.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == C64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    pub fn eval(&self, t: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc * t + a)
    }

    pub fn eval_derivative(&self, t: C64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, (k, &a)| acc * t + a * k as f64)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Sparse bivariate polynomial: `(i, j) -> coefficient of x^i y^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Bivariate {
    terms: BTreeMap<(u32, u32), C64>,
}

impl Bivariate {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: C64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, v);
        p
    }

    pub fn x() -> Self {
        let mut p = Self::zero();
        p.add_term(1, 0, C64::new(1.0, 0.0));
        p
    }

    pub fn y() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 1, C64::new(1.0, 0.0));
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, v: C64) {
        if v == C64::new(0.0, 0.0) {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert(C64::new(0.0, 0.0));
        *e += v;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> C64 {
        self.terms.get(&(i, j)).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C64)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Bivariate) -> Bivariate {
        let mut out = self.clone();
        for (&(i, j), &v) in &o.terms {
            out.add_term(i, j, v);
        }
        out
    }

    pub fn scale(&self, k: C64) -> Bivariate {
        let mut out = Bivariate::zero();
        for (&(i, j), &v) in &self.terms {
            out.add_term(i, j, v * k);
        }
        out
    }

    pub fn mul(&self, o: &Bivariate) -> Bivariate {
        let mut out = Bivariate::zero();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &o.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    /// `p(self)` for a univariate `p`, by Horner's scheme.
    pub fn substitute_into(&self, p: &Poly1) -> Bivariate {
        let mut acc = Bivariate::zero();
        for &a in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Bivariate::constant(a));
        }
        acc
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        self.terms
            .iter()
            .map(|(&(i, j), &v)| v * x.powu(i) * y.powu(j))
            .sum()
    }

    pub fn eval_dx(&self, x: C64, y: C64) -> C64 {
        self.terms
            .iter()
            .filter(|((i, _), _)| *i > 0)
            .map(|(&(i, j), &v)| v * i as f64 * x.powu(i - 1) * y.powu(j))
            .sum()
    }

    pub fn eval_dy(&self, x: C64, y: C64) -> C64 {
        self.terms
            .iter()
            .filter(|((_, j), _)| *j > 0)
            .map(|(&(i, j), &v)| v * j as f64 * x.powu(i) * y.powu(j - 1))
            .sum()
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Bivariate {
        Bivariate {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }
}

/// Forward-only polynomial self map of C^2, `(x, y) -> (fx(x,y), fy(x,y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    pub fx: Bivariate,
    pub fy: Bivariate,
}

impl PolyMap {
    pub fn identity() -> Self {
        Self {
            fx: Bivariate::x(),
            fy: Bivariate::y(),
        }
    }

    pub fn eval(&self, z: Point2) -> Point2 {
        Point2::new(self.fx.eval(z.x, z.y), self.fy.eval(z.x, z.y))
    }

    pub fn jacobian(&self, z: Point2) -> Mat2 {
        Mat2::new(
            self.fx.eval_dx(z.x, z.y),
            self.fx.eval_dy(z.x, z.y),
            self.fy.eval_dx(z.x, z.y),
            self.fy.eval_dy(z.x, z.y),
        )
    }

    /// `self` followed by the linear map `m`.
    pub fn then_linear(&self, m: &Mat2) -> PolyMap {
        let [[a, b], [c, d]] = m.m;
        PolyMap {
            fx: self.fx.scale(a).add(&self.fy.scale(b)),
            fy: self.fx.scale(c).add(&self.fy.scale(d)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn poly1_trims_and_evaluates() {
        let p = Poly1::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(c(2.0, 0.0)), c(9.0, 0.0));
        assert_eq!(p.eval_derivative(c(2.0, 0.0)), c(8.0, 0.0));
        assert!(Poly1::new(vec![]).is_zero());
    }

    #[test]
    fn bivariate_product_and_derivatives() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = Bivariate::x().add(&Bivariate::y());
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(1, 1), c(2.0, 0.0));
        assert_eq!(sq.total_degree(), 2);
        let (x, y) = (c(0.3, 0.1), c(-0.2, 0.5));
        assert!((sq.eval(x, y) - (x + y) * (x + y)).norm() < 1e-15);
        assert!((sq.eval_dx(x, y) - (x + y) * 2.0).norm() < 1e-15);
        let cubic = s.substitute_into(&Poly1::real(&[0.0, 0.0, 0.0, 1.0]));
        assert_eq!(cubic.coeff(2, 1), c(3.0, 0.0));
        assert_eq!(cubic.homogeneous_part(3), cubic);
    }
}
