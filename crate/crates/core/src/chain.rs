//! Polynomial automorphisms of C^2 stored as compositions of elementary maps.
//!
//! Every [`ElementaryMap`] has a closed-form inverse of the same kind, so an
//! [`AutoChain`] can be inverted exactly. Maps that are only needed in the
//! forward direction (quadratic jets for local parabolic experiments) live in
//! [`EndoChain`].

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{c, re, Mat2, Point2, C64};
use crate::parabolic::HomogeneousQuadratic;
use crate::poly::{Bivariate, Poly1, PolyMap};

pub const DEFAULT_CAP: f64 = 1e12;

/// Forward evaluation of a self map of C^2.
pub trait Map2: Send + Sync {
    fn apply(&self, z: Point2) -> Result<Point2>;
}

/// Maps with an exact (symbolic) differential.
pub trait Differentiable: Map2 {
    fn differential(&self, z: Point2) -> Mat2;
}

impl<M: Map2 + ?Sized> Map2 for &M {
    fn apply(&self, z: Point2) -> Result<Point2> {
        (**self).apply(z)
    }
}

impl<M: Map2 + ?Sized> Map2 for Box<M> {
    fn apply(&self, z: Point2) -> Result<Point2> {
        (**self).apply(z)
    }
}

impl<M: Differentiable + ?Sized> Differentiable for &M {
    fn differential(&self, z: Point2) -> Mat2 {
        (**self).differential(z)
    }
}

impl Map2 for PolyMap {
    fn apply(&self, z: Point2) -> Result<Point2> {
        let w = self.eval(z);
        check_cap(w, 0, DEFAULT_CAP)?;
        Ok(w)
    }
}

impl Differentiable for PolyMap {
    fn differential(&self, z: Point2) -> Mat2 {
        self.jacobian(z)
    }
}

#[inline]
fn check_cap(z: Point2, step: usize, cap: f64) -> Result<()> {
    if z.is_finite() && z.max_abs() <= cap {
        Ok(())
    } else {
        Err(Error::Overflow { step, cap })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryMap {
    /// `(x, y) -> (x + p(y), y)`
    ShearX(Poly1),
    /// `(x, y) -> (x, y + q(x))`
    ShearY(Poly1),
    Linear(Mat2),
    Translation(Point2),
}

impl ElementaryMap {
    pub fn apply(&self, z: Point2) -> Point2 {
        match self {
            ElementaryMap::ShearX(p) => Point2::new(z.x + p.eval(z.y), z.y),
            ElementaryMap::ShearY(q) => Point2::new(z.x, z.y + q.eval(z.x)),
            ElementaryMap::Linear(m) => m.apply(z),
            ElementaryMap::Translation(t) => z + *t,
        }
    }

    pub fn inverse(&self) -> ElementaryMap {
        match self {
            ElementaryMap::ShearX(p) => ElementaryMap::ShearX(negate(p)),
            ElementaryMap::ShearY(q) => ElementaryMap::ShearY(negate(q)),
            ElementaryMap::Linear(m) => {
                ElementaryMap::Linear(m.inverse().expect("linear steps are validated invertible"))
            }
            ElementaryMap::Translation(t) => ElementaryMap::Translation(-*t),
        }
    }

    pub fn differential(&self, z: Point2) -> Mat2 {
        let zero = re(0.0);
        let one = re(1.0);
        match self {
            ElementaryMap::ShearX(p) => Mat2::new(one, p.eval_derivative(z.y), zero, one),
            ElementaryMap::ShearY(q) => Mat2::new(one, zero, q.eval_derivative(z.x), one),
            ElementaryMap::Linear(m) => *m,
            ElementaryMap::Translation(_) => Mat2::identity(),
        }
    }

    pub fn jacobian_det(&self) -> C64 {
        match self {
            ElementaryMap::Linear(m) => m.det(),
            _ => re(1.0),
        }
    }

    fn compose_symbolic(&self, f: &PolyMap) -> PolyMap {
        match self {
            ElementaryMap::ShearX(p) => PolyMap {
                fx: f.fx.add(&f.fy.substitute_into(p)),
                fy: f.fy.clone(),
            },
            ElementaryMap::ShearY(q) => PolyMap {
                fx: f.fx.clone(),
                fy: f.fy.add(&f.fx.substitute_into(q)),
            },
            ElementaryMap::Linear(m) => f.then_linear(m),
            ElementaryMap::Translation(t) => PolyMap {
                fx: f.fx.add(&Bivariate::constant(t.x)),
                fy: f.fy.add(&Bivariate::constant(t.y)),
            },
        }
    }
}

fn negate(p: &Poly1) -> Poly1 {
    Poly1::new(p.coeffs().iter().map(|a| -a).collect())
}

/// An automorphism of C^2: `steps[0]` is applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoChain {
    steps: Vec<ElementaryMap>,
    volume_preserving: bool,
    cap: f64,
}

impl AutoChain {
    pub fn new(steps: Vec<ElementaryMap>, volume_preserving: bool) -> Result<Self> {
        for s in &steps {
            match s {
                ElementaryMap::Linear(m) => {
                    let det = m.det();
                    if !det.is_finite() || det.norm() < 1e-300 || m.inverse().is_none() {
                        return Err(Error::SingularLinear { det: det.norm() });
                    }
                    if volume_preserving && (det - re(1.0)).norm() > 1e-12 {
                        return Err(Error::NotVolumePreserving {
                            det: format!("{det}"),
                        });
                    }
                }
                ElementaryMap::ShearX(p) | ElementaryMap::ShearY(p) => {
                    if !p.is_finite() {
                        return Err(Error::MapFormat("non-finite shear coefficient".into()));
                    }
                }
                ElementaryMap::Translation(t) => {
                    if !t.is_finite() {
                        return Err(Error::MapFormat("non-finite translation".into()));
                    }
                }
            }
        }
        Ok(Self {
            steps,
            volume_preserving,
            cap: DEFAULT_CAP,
        })
    }

    pub fn identity() -> Self {
        Self {
            steps: Vec::new(),
            volume_preserving: true,
            cap: DEFAULT_CAP,
        }
    }

    /// `(x, y) -> (x^2 + c - y, x)`, realized as a rotation followed by a shear.
    pub fn henon(c: f64) -> Self {
        Self::new(
            vec![
                ElementaryMap::Linear(Mat2::real(0.0, -1.0, 1.0, 0.0)),
                ElementaryMap::ShearX(Poly1::real(&[c, 0.0, 1.0])),
            ],
            true,
        )
        .expect("rotation has det 1")
    }

    pub fn linear(m: Mat2) -> Result<Self> {
        let vp = (m.det() - re(1.0)).norm() <= 1e-12;
        Self::new(vec![ElementaryMap::Linear(m)], vp)
    }

    /// Volume preserving automorphism tangent to the identity at 0 whose
    /// quadratic part is `(x^2 + 2xy + c y^2, -2xy - y^2)`.
    ///
    /// Built from three shears: `x += (c-1) y^2`, `y += x^2`, and the shear
    /// `z += (x+y)^2 (1,-1)` conjugated into place by a unimodular matrix.
    pub fn parabolic_normal_form(c: C64) -> Self {
        let to_adapted = Mat2::real(1.0, 0.0, 1.0, 1.0);
        let from_adapted = Mat2::real(1.0, 0.0, -1.0, 1.0);
        Self::new(
            vec![
                ElementaryMap::ShearX(Poly1::new(vec![re(0.0), re(0.0), c - re(1.0)])),
                ElementaryMap::ShearY(Poly1::real(&[0.0, 0.0, 1.0])),
                ElementaryMap::Linear(to_adapted),
                ElementaryMap::ShearX(Poly1::real(&[0.0, 0.0, 1.0])),
                ElementaryMap::Linear(from_adapted),
            ],
            true,
        )
        .expect("unimodular steps")
    }

    pub fn steps(&self) -> &[ElementaryMap] {
        &self.steps
    }

    pub fn volume_preserving(&self) -> bool {
        self.volume_preserving
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &AutoChain) -> AutoChain {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        AutoChain {
            steps,
            volume_preserving: self.volume_preserving && other.volume_preserving,
            cap: self.cap.min(other.cap),
        }
    }

    pub fn then_step(&self, step: ElementaryMap) -> Result<AutoChain> {
        let mut steps = self.steps.clone();
        let vp = self.volume_preserving && (step.jacobian_det() - re(1.0)).norm() <= 1e-12;
        steps.push(step);
        Ok(AutoChain::new(steps, vp)?.with_cap(self.cap))
    }

    /// `z -> self(z + p) - p`, which moves a fixed point `p` to the origin.
    pub fn conjugated_by_translation(&self, p: Point2) -> AutoChain {
        let mut steps = vec![ElementaryMap::Translation(p)];
        steps.extend(self.steps.iter().cloned());
        steps.push(ElementaryMap::Translation(-p));
        AutoChain {
            steps,
            volume_preserving: self.volume_preserving,
            cap: self.cap,
        }
    }

    pub fn inverse(&self) -> AutoChain {
        AutoChain {
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
            volume_preserving: self.volume_preserving,
            cap: self.cap,
        }
    }

    pub fn evaluate(&self, z: Point2) -> Result<Point2> {
        let mut w = z;
        for (i, s) in self.steps.iter().enumerate() {
            w = s.apply(w);
            check_cap(w, i, self.cap)?;
        }
        Ok(w)
    }

    pub fn inverse_evaluate(&self, z: Point2) -> Result<Point2> {
        let mut w = z;
        for (i, s) in self.steps.iter().enumerate().rev() {
            w = s.inverse().apply(w);
            check_cap(w, i, self.cap)?;
        }
        Ok(w)
    }

    /// Chain-rule product of the per-step differentials.
    pub fn differential(&self, z: Point2) -> Mat2 {
        let mut w = z;
        let mut d = Mat2::identity();
        for s in &self.steps {
            d = s.differential(w) * d;
            w = s.apply(w);
        }
        d
    }

    /// Symbolic expansion of the composition into a polynomial map.
    pub fn to_polymap(&self) -> PolyMap {
        self.steps
            .iter()
            .fold(PolyMap::identity(), |f, s| s.compose_symbolic(&f))
    }
}

impl Map2 for AutoChain {
    fn apply(&self, z: Point2) -> Result<Point2> {
        self.evaluate(z)
    }
}

impl Differentiable for AutoChain {
    fn differential(&self, z: Point2) -> Mat2 {
        AutoChain::differential(self, z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EndoStep {
    Elementary(ElementaryMap),
    /// `z -> z + P2(z)`
    QuadraticJet(HomogeneousQuadratic),
}

/// Forward-only composition that may contain quadratic jets.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoChain {
    pub steps: Vec<EndoStep>,
    pub cap: f64,
}

impl EndoChain {
    /// `z -> z + P2(z)`
    pub fn jet(q: HomogeneousQuadratic) -> Self {
        Self {
            steps: vec![EndoStep::QuadraticJet(q)],
            cap: DEFAULT_CAP,
        }
    }

    pub fn to_polymap(&self) -> PolyMap {
        self.steps.iter().fold(PolyMap::identity(), |f, s| match s {
            EndoStep::Elementary(e) => e.compose_symbolic(&f),
            EndoStep::QuadraticJet(q) => {
                let (p2, q2) = q.to_bivariate();
                let x = f.fx.clone();
                let y = f.fy.clone();
                let subst = |b: &Bivariate| {
                    b.terms().fold(Bivariate::zero(), |acc, (&(i, j), &v)| {
                        let mut t = Bivariate::constant(v);
                        for _ in 0..i {
                            t = t.mul(&x);
                        }
                        for _ in 0..j {
                            t = t.mul(&y);
                        }
                        acc.add(&t)
                    })
                };
                PolyMap {
                    fx: x.add(&subst(&p2)),
                    fy: y.add(&subst(&q2)),
                }
            }
        })
    }
}

impl Map2 for EndoChain {
    fn apply(&self, z: Point2) -> Result<Point2> {
        let mut w = z;
        for (i, s) in self.steps.iter().enumerate() {
            w = match s {
                EndoStep::Elementary(e) => e.apply(w),
                EndoStep::QuadraticJet(q) => w + q.eval(w),
            };
            check_cap(w, i, self.cap)?;
        }
        Ok(w)
    }
}

impl Differentiable for EndoChain {
    fn differential(&self, z: Point2) -> Mat2 {
        let mut w = z;
        let mut d = Mat2::identity();
        for s in &self.steps {
            let (ds, next) = match s {
                EndoStep::Elementary(e) => (e.differential(w), e.apply(w)),
                EndoStep::QuadraticJet(q) => {
                    let j = q.jacobian(w);
                    let mut id = Mat2::identity();
                    for r in 0..2 {
                        for k in 0..2 {
                            id.m[r][k] += j.m[r][k];
                        }
                    }
                    (id, w + q.eval(w))
                }
            };
            d = ds * d;
            w = next;
        }
        d
    }
}

/// A map loaded from a map-definition file.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Automorphism(AutoChain),
    Endomorphism(EndoChain),
}

impl MapSpec {
    pub fn as_automorphism(&self) -> Result<&AutoChain> {
        match self {
            MapSpec::Automorphism(a) => Ok(a),
            MapSpec::Endomorphism(_) => Err(Error::NotInvertible),
        }
    }

    pub fn to_polymap(&self) -> PolyMap {
        match self {
            MapSpec::Automorphism(a) => a.to_polymap(),
            MapSpec::Endomorphism(e) => e.to_polymap(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::MapFormat(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let vp = v
            .get("volume_preserving")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::MapFormat("missing \"steps\" array".into()))?;
        let mut elementary = Vec::new();
        let mut endo = Vec::new();
        let mut forward_only = false;
        for s in steps {
            let kind = s
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::MapFormat("step without \"kind\"".into()))?;
            let step = match kind {
                "shear_x" => EndoStep::Elementary(ElementaryMap::ShearX(parse_poly(s)?)),
                "shear_y" => EndoStep::Elementary(ElementaryMap::ShearY(parse_poly(s)?)),
                "linear" => EndoStep::Elementary(ElementaryMap::Linear(parse_matrix(
                    s.get("matrix")
                        .ok_or_else(|| Error::MapFormat("linear step without matrix".into()))?,
                )?)),
                "translate" => {
                    let by = s
                        .get("by")
                        .and_then(Value::as_array)
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| Error::MapFormat("translate needs \"by\": [x, y]".into()))?;
                    EndoStep::Elementary(ElementaryMap::Translation(Point2::new(
                        parse_complex(&by[0])?,
                        parse_complex(&by[1])?,
                    )))
                }
                "quadratic_jet" => {
                    forward_only = true;
                    let p = parse_triple(s.get("p"))?;
                    let q = parse_triple(s.get("q"))?;
                    EndoStep::QuadraticJet(HomogeneousQuadratic::new(p, q))
                }
                other => return Err(Error::MapFormat(format!("unknown step kind {other:?}"))),
            };
            if let EndoStep::Elementary(e) = &step {
                elementary.push(e.clone());
            }
            endo.push(step);
        }
        if forward_only {
            if let Some(m) = elementary.iter().find_map(|e| match e {
                ElementaryMap::Linear(m) if m.inverse().is_none() => Some(m),
                _ => None,
            }) {
                return Err(Error::SingularLinear { det: m.det().norm() });
            }
            Ok(MapSpec::Endomorphism(EndoChain {
                steps: endo,
                cap: DEFAULT_CAP,
            }))
        } else {
            Ok(MapSpec::Automorphism(AutoChain::new(elementary, vp)?))
        }
    }

    pub fn to_json(&self) -> Value {
        let (vp, steps): (bool, Vec<EndoStep>) = match self {
            MapSpec::Automorphism(a) => (
                a.volume_preserving,
                a.steps.iter().cloned().map(EndoStep::Elementary).collect(),
            ),
            MapSpec::Endomorphism(e) => (false, e.steps.clone()),
        };
        let steps: Vec<Value> = steps.iter().map(step_json).collect();
        json!({ "volume_preserving": vp, "steps": steps })
    }
}

impl Map2 for MapSpec {
    fn apply(&self, z: Point2) -> Result<Point2> {
        match self {
            MapSpec::Automorphism(a) => a.apply(z),
            MapSpec::Endomorphism(e) => e.apply(z),
        }
    }
}

impl Differentiable for MapSpec {
    fn differential(&self, z: Point2) -> Mat2 {
        match self {
            MapSpec::Automorphism(a) => a.differential(z),
            MapSpec::Endomorphism(e) => e.differential(z),
        }
    }
}

fn cjson(v: C64) -> Value {
    json!([v.re, v.im])
}

fn step_json(s: &EndoStep) -> Value {
    match s {
        EndoStep::Elementary(ElementaryMap::ShearX(p)) => {
            json!({"kind": "shear_x", "coeffs": p.coeffs().iter().map(|&v| cjson(v)).collect::<Vec<_>>()})
        }
        EndoStep::Elementary(ElementaryMap::ShearY(p)) => {
            json!({"kind": "shear_y", "coeffs": p.coeffs().iter().map(|&v| cjson(v)).collect::<Vec<_>>()})
        }
        EndoStep::Elementary(ElementaryMap::Linear(m)) => json!({
            "kind": "linear",
            "matrix": [[cjson(m.m[0][0]), cjson(m.m[0][1])], [cjson(m.m[1][0]), cjson(m.m[1][1])]]
        }),
        EndoStep::Elementary(ElementaryMap::Translation(t)) => {
            json!({"kind": "translate", "by": [cjson(t.x), cjson(t.y)]})
        }
        EndoStep::QuadraticJet(q) => json!({
            "kind": "quadratic_jet",
            "p": q.p.iter().map(|&v| cjson(v)).collect::<Vec<_>>(),
            "q": q.q.iter().map(|&v| cjson(v)).collect::<Vec<_>>(),
        }),
    }
}

/// A complex literal: a bare number or `[re, im]`.
pub fn parse_complex(v: &Value) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(re(x));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => match (a.as_f64(), b.as_f64()) {
            (Some(x), Some(y)) => Ok(c(x, y)),
            _ => Err(Error::MapFormat(format!("bad complex literal {v}"))),
        },
        _ => Err(Error::MapFormat(format!("bad complex literal {v}"))),
    }
}

fn parse_poly(s: &Value) -> Result<Poly1> {
    let coeffs = s
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MapFormat("shear step without \"coeffs\"".into()))?;
    Ok(Poly1::new(
        coeffs.iter().map(parse_complex).collect::<Result<Vec<_>>>()?,
    ))
}

fn parse_matrix(v: &Value) -> Result<Mat2> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| Error::MapFormat("matrix must have two rows".into()))?;
    let mut m = Mat2::identity();
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::MapFormat("matrix rows must have two entries".into()))?;
        for (j, e) in row.iter().enumerate() {
            m.m[i][j] = parse_complex(e)?;
        }
    }
    Ok(m)
}

fn parse_triple(v: Option<&Value>) -> Result<[C64; 3]> {
    let a = v
        .and_then(Value::as_array)
        .filter(|a| a.len() == 3)
        .ok_or_else(|| Error::MapFormat("quadratic_jet needs three coefficients".into()))?;
    Ok([
        parse_complex(&a[0])?,
        parse_complex(&a[1])?,
        parse_complex(&a[2])?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn henon_evaluate_and_inverse() {
        let h = AutoChain::henon(0.75);
        let z = h.evaluate(Point2::real(1.5, 1.5)).unwrap();
        assert!((z - Point2::real(1.5, 1.5)).norm() < 1e-15);
        // inverse is (x, y) -> (y, y^2 + c - x)
        let w = h.inverse_evaluate(Point2::ZERO).unwrap();
        assert!((w - Point2::real(0.0, 0.75)).norm() < 1e-15);
        let d = h.differential(Point2::real(1.5, 1.5));
        assert!(d.sub(&Mat2::real(3.0, -1.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_steps() {
        let s = AutoChain::new(vec![ElementaryMap::ShearX(Poly1::real(&[0.0, 0.0, 1.0]))], true)
            .unwrap();
        assert_eq!(s.evaluate(Point2::real(0.0, 2.0)).unwrap(), Point2::real(4.0, 2.0));
        let l = AutoChain::linear(Mat2::real(2.0, 0.0, 0.0, 0.5)).unwrap();
        assert!(l.volume_preserving());
        assert_eq!(l.inverse_evaluate(Point2::real(2.0, 1.0)).unwrap(), Point2::real(1.0, 2.0));
        let id = AutoChain::identity();
        let z = Point2::new(c(1.0, 0.0), c(0.0, 2.0));
        assert_eq!(id.evaluate(z).unwrap(), z);
    }

    #[test]
    fn overflow_is_reported() {
        let h = AutoChain::henon(0.75).with_cap(1e6);
        let mut z = Point2::real(10.0, 10.0);
        let mut escaped = false;
        for _ in 0..10 {
            match h.evaluate(z) {
                Ok(w) => z = w,
                Err(Error::Overflow { cap, .. }) => {
                    assert_eq!(cap, 1e6);
                    escaped = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(escaped);
    }

    #[test]
    fn rejects_bad_linear_steps() {
        let sing = AutoChain::new(vec![ElementaryMap::Linear(Mat2::real(1.0, 2.0, 2.0, 4.0))], false);
        assert!(matches!(sing, Err(Error::SingularLinear { .. })));
        let not_vp = AutoChain::new(vec![ElementaryMap::Linear(Mat2::real(2.0, 0.0, 0.0, 2.0))], true);
        assert!(matches!(not_vp, Err(Error::NotVolumePreserving { .. })));
    }

    #[test]
    fn symbolic_expansion_matches_evaluation() {
        let h = AutoChain::henon(0.75).then(&AutoChain::parabolic_normal_form(c(0.3, 0.2)));
        let pm = h.to_polymap();
        for &(x, y) in &[(0.1, -0.3), (0.7, 0.2), (-0.4, 0.9)] {
            let z = Point2::new(c(x, 0.1), c(y, -0.2));
            assert!((pm.eval(z) - h.evaluate(z).unwrap()).norm() < 1e-12);
            assert!(pm.jacobian(z).sub(&h.differential(z)).norm() < 1e-11);
        }
    }

    #[test]
    fn json_round_trip_and_jets() {
        let text = r#"{"volume_preserving": true, "steps": [
            {"kind": "linear", "matrix": [[0, -1], [1, 0]]},
            {"kind": "shear_x", "coeffs": [[0.75, 0], 0, [1, 0]]}
        ]}"#;
        let m = MapSpec::from_json_str(text).unwrap();
        assert_eq!(m, MapSpec::Automorphism(AutoChain::henon(0.75)));
        let back = MapSpec::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);

        let jet = r#"{"steps": [{"kind": "quadratic_jet", "p": [1, 2, 3], "q": [0, -2, -1]}]}"#;
        let e = MapSpec::from_json_str(jet).unwrap();
        assert!(matches!(e, MapSpec::Endomorphism(_)));
        assert!(matches!(e.as_automorphism(), Err(Error::NotInvertible)));
        let z = Point2::real(-0.1, 0.0);
        let w = e.apply(z).unwrap();
        assert!((w - Point2::real(-0.09, 0.0)).norm() < 1e-15);

        assert!(MapSpec::from_json_str(r#"{"steps": [{"kind": "warp"}]}"#).is_err());
    }
}
