use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::basin::gallery::PlanarDemo;
use crate::basin::orbit::CONSECUTIVE;
use crate::chain::{AutoChain, Differentiable, ElementaryMap, Map2, MapSpec};
use crate::error::{Error, Result};
use crate::grid::{Grid4, Occupancy};
use crate::linalg::{re, Mat2, Point2};
use crate::poly::Poly1;

/// Largest allowed `|df(0) - I|` (and `|f(0)|`) for tangent-to-identity sequences.
pub const TANGENCY_TOL: f64 = 1e-9;

/// One map of a sequence.
#[derive(Debug, Clone)]
pub enum SeqMap {
    Spec(MapSpec),
    Planar(PlanarDemo),
}

impl SeqMap {
    /// `(|f(0)|, |df(0) - I|)`, or `None` when the map has no differential.
    fn tangency_deviation(&self) -> Option<f64> {
        match self {
            SeqMap::Spec(m) => {
                let f0 = m.apply(Point2::ZERO).map(|w| w.norm()).unwrap_or(f64::INFINITY);
                let d = m.differential(Point2::ZERO).sub(&Mat2::identity()).max_abs();
                Some(f0.max(d))
            }
            SeqMap::Planar(_) => None,
        }
    }
}

impl Map2 for SeqMap {
    fn apply(&self, z: Point2) -> Result<Point2> {
        match self {
            SeqMap::Spec(m) => m.apply(z),
            SeqMap::Planar(p) => p.apply(z),
        }
    }
}

impl From<AutoChain> for SeqMap {
    fn from(c: AutoChain) -> Self {
        SeqMap::Spec(MapSpec::Automorphism(c))
    }
}

/// Rule producing the `j`-th map (`j >= 1`).
#[derive(Clone)]
pub enum Generator {
    /// Cycled modulo its length.
    List(Vec<SeqMap>),
    Family {
        name: String,
        params: Value,
        rule: Arc<dyn Fn(usize) -> Result<SeqMap> + Send + Sync>,
    },
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::List(l) => write!(f, "List({} maps)", l.len()),
            Generator::Family { name, params, .. } => write!(f, "Family({name}, {params})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MapSequence {
    pub generator: Generator,
    pub tangency_required: bool,
}

fn param(params: &Value, key: &str, default: f64) -> f64 {
    params.get(key).and_then(Value::as_f64).unwrap_or(default)
}

impl MapSequence {
    pub fn list(maps: Vec<SeqMap>, tangency_required: bool) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidParams("a map list needs at least one map".into()));
        }
        Ok(Self {
            generator: Generator::List(maps),
            tangency_required,
        })
    }

    pub fn constant(map: SeqMap) -> Self {
        Self {
            generator: Generator::List(vec![map]),
            tangency_required: false,
        }
    }

    /// Built-in families:
    /// - `identity`
    /// - `contraction` (`a`): `diag(a, a)`
    /// - `henon_at_saddle` (`c`): the Hénon map translated so its saddle is at 0
    /// - `shear_pair` (`k`): `(x + k y^2, y)` alternating with its inverse
    /// - `decaying_shear` (`k`): `x + (k / j) y^2`, tangent to the identity
    /// - `planar_demo`: `(z, w) -> (f(z + 1) - 1, w / 2)` with the planar homeomorphism `f`
    pub fn family(name: &str, params: Value) -> Result<Self> {
        let rule: Arc<dyn Fn(usize) -> Result<SeqMap> + Send + Sync> = match name {
            "identity" => Arc::new(|_| Ok(AutoChain::identity().into())),
            "contraction" => {
                let a = param(&params, "a", 0.5);
                let m = AutoChain::linear(Mat2::real(a, 0.0, 0.0, a))?;
                Arc::new(move |_| Ok(m.clone().into()))
            }
            "henon_at_saddle" => {
                let c = param(&params, "c", 0.75);
                let disc = 1.0 - c;
                if disc < 0.0 {
                    return Err(Error::InvalidParams("henon_at_saddle needs c <= 1".into()));
                }
                let x = 1.0 + disc.sqrt();
                let h = AutoChain::henon(c).conjugated_by_translation(Point2::real(x, x));
                Arc::new(move |_| Ok(h.clone().into()))
            }
            "shear_pair" => {
                let k = param(&params, "k", 1.0);
                let s = AutoChain::new(vec![ElementaryMap::ShearX(Poly1::real(&[0.0, 0.0, k]))], true)?;
                let inv = s.inverse();
                Arc::new(move |j| Ok(if j % 2 == 1 { s.clone() } else { inv.clone() }.into()))
            }
            "decaying_shear" => {
                let k = param(&params, "k", 1.0);
                Arc::new(move |j| {
                    let a = k / j as f64;
                    Ok(AutoChain::new(vec![ElementaryMap::ShearX(Poly1::real(&[0.0, 0.0, a]))], true)?.into())
                })
            }
            "planar_demo" => Arc::new(|_| Ok(SeqMap::Planar(PlanarDemo))),
            other => return Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        };
        let tangency_required = params
            .get("tangency_required")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        Ok(Self {
            generator: Generator::Family {
                name: name.to_string(),
                params,
                rule,
            },
            tangency_required,
        })
    }

    /// Parses `{"kind":"list","maps":[...]}` or `{"kind":"family","name":...,"params":{...}}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let tangency = v.get("tangency_required").and_then(Value::as_bool).unwrap_or(false);
        match v.get("kind").and_then(Value::as_str) {
            Some("list") => {
                let maps = v
                    .get("maps")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::MapFormat("list sequence needs \"maps\"".into()))?
                    .iter()
                    .map(|m| MapSpec::from_json(m).map(SeqMap::Spec))
                    .collect::<Result<Vec<_>>>()?;
                Self::list(maps, tangency)
            }
            Some("family") => {
                let name = v
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::MapFormat("family sequence needs \"name\"".into()))?;
                let mut params = v.get("params").cloned().unwrap_or(Value::Object(Default::default()));
                if tangency {
                    if let Value::Object(m) = &mut params {
                        m.insert("tangency_required".into(), Value::Bool(true));
                    }
                }
                Self::family(name, params)
            }
            _ => Err(Error::MapFormat("sequence kind must be \"list\" or \"family\"".into())),
        }
    }

    pub fn with_tangency(mut self, required: bool) -> Self {
        self.tangency_required = required;
        self
    }

    /// The `j`-th map, `j >= 1`, checked against the tangency gate.
    pub fn map(&self, j: usize) -> Result<SeqMap> {
        let j = j.max(1);
        let m = match &self.generator {
            Generator::List(l) => l[(j - 1) % l.len()].clone(),
            Generator::Family { rule, .. } => rule(j)?,
        };
        if self.tangency_required {
            match m.tangency_deviation() {
                Some(d) if d <= TANGENCY_TOL => {}
                Some(d) => return Err(Error::NotTangentSequence { index: j, deviation: d }),
                None => {
                    return Err(Error::NotTangentSequence {
                        index: j,
                        deviation: f64::INFINITY,
                    })
                }
            }
        }
        Ok(m)
    }

    /// Maps `1..=n`.
    pub fn prefix(&self, n: usize) -> Result<Vec<SeqMap>> {
        (1..=n).map(|j| self.map(j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonautoOrbit {
    /// `z, f1 z, f2 f1 z, ...`
    pub states: Vec<Point2>,
    /// Step at which the magnitude cap was exceeded.
    pub overflow: Option<usize>,
}

/// The composition orbit for `n` steps.
pub fn nonauto_orbit(seq: &MapSequence, z: Point2, n: usize) -> Result<NonautoOrbit> {
    let maps = seq.prefix(n)?;
    Ok(orbit_with(&maps, z))
}

fn orbit_with(maps: &[SeqMap], z: Point2) -> NonautoOrbit {
    let mut states = vec![z];
    let mut w = z;
    for (k, m) in maps.iter().enumerate() {
        match m.apply(w) {
            Ok(next) if next.is_finite() => {
                w = next;
                states.push(w);
            }
            _ => {
                return NonautoOrbit {
                    states,
                    overflow: Some(k + 1),
                }
            }
        }
    }
    NonautoOrbit { states, overflow: None }
}

/// Marks cells whose center composition orbit is within `conv_tol` of 0 at
/// step `n_max` and the 20 steps before it.
pub fn nonauto_attracting_probe(seq: &MapSequence, grid: &Grid4, n_max: usize, conv_tol: f64) -> Result<Occupancy> {
    let maps = seq.prefix(n_max)?;
    let first = n_max.saturating_sub(CONSECUTIVE);
    let marked = (0..grid.total())
        .into_par_iter()
        .map(|i| {
            let o = orbit_with(&maps, grid.center(i));
            o.overflow.is_none() && o.states[first..].iter().all(|w| w.norm() < conv_tol)
        })
        .collect();
    Ok(Occupancy { grid: *grid, marked })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityRow {
    pub n: usize,
    /// Sup of `|F_n(z)|` over the grid points.
    pub sup_grid: f64,
    /// Sup over the grid points and the extra witness points.
    pub sup_all: f64,
    /// Fraction of grid points with `|F_n(z)| < conv_tol`.
    pub converged_fraction: f64,
}

/// Sup norm and converged fraction of `F_n = f_n o ... o f_1` over the grid
/// (and extra witness points) for `n = 0..=n_max`.
pub fn pointwise_vs_uniform_report(
    seq: &MapSequence,
    grid: &Grid4,
    extra: &[Point2],
    n_max: usize,
    conv_tol: f64,
) -> Result<Vec<UniformityRow>> {
    let maps = seq.prefix(n_max)?;
    let run = |z: Point2| -> Vec<f64> {
        let o = orbit_with(&maps, z);
        let mut norms: Vec<f64> = o.states.iter().map(|w| w.norm()).collect();
        norms.resize(n_max + 1, f64::INFINITY);
        norms
    };
    let grid_norms: Vec<Vec<f64>> = (0..grid.total()).into_par_iter().map(|i| run(grid.center(i))).collect();
    let extra_norms: Vec<Vec<f64>> = extra.par_iter().map(|&z| run(z)).collect();
    let total = grid_norms.len().max(1) as f64;
    Ok((0..=n_max)
        .map(|n| {
            let sup_grid = grid_norms.iter().map(|v| v[n]).fold(0.0, f64::max);
            let sup_extra = extra_norms.iter().map(|v| v[n]).fold(0.0, f64::max);
            UniformityRow {
                n,
                sup_grid,
                sup_all: sup_grid.max(sup_extra),
                converged_fraction: grid_norms.iter().filter(|v| v[n] < conv_tol).count() as f64 / total,
            }
        })
        .collect())
}

/// Witness points `(e^{i theta} - 1, 0)` for the planar demonstrator, one per `m`.
pub fn planar_witness_points(m_max: usize) -> Result<Vec<Point2>> {
    (1..=m_max)
        .map(|m| crate::basin::gallery::nonuniformity_witness(m).map(|w| Point2::new(w.z - 1.0, re(0.0))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basin::orbit::{orbit, OrbitOptions};
    use crate::grid::Box4;
    use serde_json::json;

    #[test]
    fn identity_and_constant_sequences() {
        let id = MapSequence::family("identity", json!({})).unwrap();
        let z = Point2::real(0.3, -0.2);
        let o = nonauto_orbit(&id, z, 5).unwrap();
        assert!(o.states.iter().all(|&w| w == z));

        let h = AutoChain::henon(0.75);
        let seq = MapSequence::constant(h.clone().into());
        let o = nonauto_orbit(&seq, Point2::real(0.4, 0.1), 30).unwrap();
        let auto = orbit(&h, Point2::real(0.4, 0.1), OrbitOptions { max_iter: 30, ..OrbitOptions::new(Point2::ZERO) });
        assert_eq!(o.states, auto.states);
    }

    #[test]
    fn shear_pair_returns_every_second_step() {
        let seq = MapSequence::family("shear_pair", json!({"k": 0.7})).unwrap();
        let z = Point2::new(crate::linalg::c(0.2, 0.1), re(-0.4));
        let o = nonauto_orbit(&seq, z, 10).unwrap();
        for k in (0..=10).step_by(2) {
            assert!(o.states[k].dist(z) < 1e-14);
        }
    }

    #[test]
    fn tangency_gate() {
        let ok = MapSequence::family("decaying_shear", json!({"tangency_required": true})).unwrap();
        assert!(ok.prefix(10).is_ok());
        let bad = MapSequence::family("contraction", json!({"tangency_required": true})).unwrap();
        assert!(matches!(bad.map(1), Err(Error::NotTangentSequence { index: 1, .. })));
        let planar = MapSequence::family("planar_demo", json!({})).unwrap().with_tangency(true);
        assert!(planar.map(3).is_err());
    }

    #[test]
    fn attracting_probe_cases() {
        let grid = Grid4::uniform(Box4::cube(1.0).unwrap(), 3).unwrap();
        let c = MapSequence::family("contraction", json!({})).unwrap();
        assert_eq!(nonauto_attracting_probe(&c, &grid, 60, 1e-3).unwrap().count(), grid.total());
        let h = MapSequence::family("henon_at_saddle", json!({})).unwrap();
        let occ = nonauto_attracting_probe(&h, &grid, 60, 1e-3).unwrap();
        assert!(occ.count() <= 1);
    }

    #[test]
    fn report_for_contraction_and_demo() {
        let grid = Grid4::uniform(Box4::cube(1.0).unwrap(), 3).unwrap();
        let c = MapSequence::family("contraction", json!({})).unwrap();
        let rows = pointwise_vs_uniform_report(&c, &grid, &[], 10, 1e-3).unwrap();
        for w in rows.windows(2) {
            assert!((w[1].sup_grid - 0.5 * w[0].sup_grid).abs() < 1e-12);
            assert!(w[1].converged_fraction >= w[0].converged_fraction);
        }
        let rows0 = pointwise_vs_uniform_report(&c, &grid, &[], 0, 1e-3).unwrap();
        assert_eq!(rows0.len(), 1);

        let demo = MapSequence::family("planar_demo", json!({})).unwrap();
        let extra = planar_witness_points(30).unwrap();
        let rows = pointwise_vs_uniform_report(&demo, &grid, &extra, 30, 1e-3).unwrap();
        assert!(rows.iter().all(|r| r.sup_all >= 1.0));
        assert!(rows[30].converged_fraction > 0.9, "{:?}", rows[30]);
    }
}
