//! Complex scalars, points of C^2 and 2x2 complex matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A point `(x, y)` of C^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: C64,
    pub y: C64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 {
        x: C64::new(0.0, 0.0),
        y: C64::new(0.0, 0.0),
    };

    pub fn new(x: C64, y: C64) -> Self {
        Self { x, y }
    }

    pub fn real(x: f64, y: f64) -> Self {
        Self::new(re(x), re(y))
    }

    /// Builds a point from its four real coordinates `(re x, im x, re y, im y)`.
    pub fn from_reals(v: [f64; 4]) -> Self {
        Self::new(c(v[0], v[1]), c(v[2], v[3]))
    }

    pub fn to_reals(self) -> [f64; 4] {
        [self.x.re, self.x.im, self.y.re, self.y.im]
    }

    /// Euclidean norm on C^2.
    pub fn norm(self) -> f64 {
        self.x.norm().hypot(self.y.norm())
    }

    pub fn max_abs(self) -> f64 {
        self.x.norm().max(self.y.norm())
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn scale(self, k: C64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    /// Hermitian inner product `<self, other>` (conjugate-linear in `self`).
    pub fn dot(self, other: Point2) -> C64 {
        self.x.conj() * other.x + self.y.conj() * other.y
    }

    /// Unit vector with the phase fixed so that the dominant leading
    /// component is real and positive.
    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        if n == 0.0 {
            return self;
        }
        let v = self.scale(re(1.0 / n));
        let pivot = if v.x.norm() > 1e-3 { v.x } else { v.y };
        let phase = pivot.conj() / pivot.norm();
        v.scale(phase)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<C64> for Point2 {
    type Output = Point2;
    fn mul(self, k: C64) -> Point2 {
        self.scale(k)
    }
}

/// 2x2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m: [[C64; 2]; 2],
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(re(a), re(b), re(c), re(d))
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Self::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), d)
    }

    /// Matrix whose columns are `u` and `v`.
    pub fn from_columns(u: Point2, v: Point2) -> Self {
        Self::new(u.x, v.x, u.y, v.y)
    }

    pub fn column(&self, j: usize) -> Point2 {
        Point2::new(self.m[0][j], self.m[1][j])
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let inv = d.inv();
        Some(Mat2::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    /// Ratio of the largest to the smallest singular value.
    pub fn condition(&self) -> f64 {
        let f2 = self.norm().powi(2);
        let d = self.det().norm();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        let smax = ((f2 + disc) / 2.0).sqrt();
        let smin_sq = (f2 - disc) / 2.0;
        if smin_sq <= 0.0 {
            // fall back to d / smax when cancellation wipes out the small root
            let smin = d / smax.max(f64::MIN_POSITIVE);
            if smin == 0.0 {
                return f64::INFINITY;
            }
            return smax / smin;
        }
        smax / smin_sq.sqrt()
    }

    /// Eigenvalues ordered by increasing modulus.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let half_tr = self.trace() * 0.5;
        let det = self.det();
        let disc = (half_tr * half_tr - det).sqrt();
        let big = if (half_tr + disc).norm() >= (half_tr - disc).norm() {
            half_tr + disc
        } else {
            half_tr - disc
        };
        let small = if big.norm() > 0.0 { det / big } else { big };
        if small.norm() <= big.norm() {
            [small, big]
        } else {
            [big, small]
        }
    }

    /// Unit eigenvector for the eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: C64) -> Point2 {
        let [[a, b], [c, d]] = self.m;
        let r1 = Point2::new(b, lambda - a);
        let r2 = Point2::new(lambda - d, c);
        let v = if r1.norm() >= r2.norm() { r1 } else { r2 };
        if v.norm() == 0.0 {
            return Point2::real(1.0, 0.0);
        }
        v.normalized()
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] -= o.m[i][j];
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let mut out = Mat2::real(0.0, 0.0, 0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_henon_differential() {
        let m = Mat2::real(3.0, -1.0, 1.0, 0.0);
        let [s, u] = m.eigenvalues();
        let r5 = 5f64.sqrt();
        assert!((s - re((3.0 - r5) / 2.0)).norm() < 1e-14);
        assert!((u - re((3.0 + r5) / 2.0)).norm() < 1e-14);
        let v = m.eigenvector(u);
        assert!((m.apply(v) - v.scale(u)).norm() < 1e-13);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_and_condition() {
        let m = Mat2::real(2.0, 0.0, 0.0, 0.5);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Mat2::real(0.5, 0.0, 0.0, 2.0));
        assert!((m.condition() - 4.0).abs() < 1e-12);
        assert!(Mat2::real(1.0, 2.0, 2.0, 4.0).inverse().is_none());
    }

    #[test]
    fn normalized_phase_convention() {
        let v = Point2::new(c(0.0, 2.0), c(0.0, 2.0)).normalized();
        assert!(v.x.im.abs() < 1e-15 && v.x.re > 0.0);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }
}
