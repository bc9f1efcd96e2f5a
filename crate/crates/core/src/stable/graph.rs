use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::Differentiable;
use crate::error::{Error, Result};
use crate::fixed_point::{Classification, FixedPointInfo};
use crate::linalg::{c, re, Mat2, Point2, C64};

/// Parameters of the graph-transform iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphOptions {
    /// Radius of the base disc in the stable coordinate.
    pub delta: f64,
    pub n_r: usize,
    pub n_theta: usize,
    /// Target invariance residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Graph property: `|t| <= delta * slope_cap`.
    pub slope_cap: f64,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            delta: 0.1,
            n_r: 8,
            n_theta: 16,
            tol: 1e-10,
            max_iter: 60,
            slope_cap: 1.0,
        }
    }
}

/// Local stable manifold of a saddle as a graph `t = gamma(s)` over the
/// disc `|s| <= delta`, in the frame `base + s * stable + t * unstable`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalGraph {
    pub base_point: Point2,
    pub stable_direction: Point2,
    pub unstable_direction: Point2,
    pub delta: f64,
    /// Radius of the bidisc in which the graph represents the local stable set.
    pub epsilon: f64,
    pub n_r: usize,
    pub n_theta: usize,
    /// Samples `(s, t)`: the center first, then ring by ring.
    pub grid: Vec<(C64, C64)>,
    /// Least-squares coefficients of `gamma` in the scaled variable `s / delta`.
    pub fit: Vec<C64>,
    pub iterations: usize,
    /// Sup-norm change of each graph-transform iteration.
    pub changes: Vec<f64>,
    #[serde(skip)]
    to_frame: Mat2,
}

/// Polar mesh of the disc: the center, then `n_r` rings of `n_theta` points.
pub fn polar_mesh(delta: f64, n_r: usize, n_theta: usize) -> Vec<C64> {
    let mut s = Vec::with_capacity(1 + n_r * n_theta);
    s.push(re(0.0));
    for i in 1..=n_r {
        let r = delta * i as f64 / n_r as f64;
        for j in 0..n_theta {
            let a = TAU * j as f64 / n_theta as f64;
            s.push(c(r * a.cos(), r * a.sin()));
        }
    }
    s
}

/// Index of ring `i` (1-based), angle `j` in [`polar_mesh`] order.
pub fn mesh_index(n_theta: usize, i: usize, j: usize) -> usize {
    if i == 0 {
        0
    } else {
        1 + (i - 1) * n_theta + j
    }
}

fn fit_degree(n_r: usize) -> usize {
    6.min(n_r.saturating_sub(1)).max(1)
}

/// Pseudo-inverse of the scaled Vandermonde matrix of the mesh.
fn fit_operator(samples: &[C64], delta: f64, degree: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(samples.len(), degree + 1, |k, d| (samples[k] / delta).powu(d as u32));
    a.pseudo_inverse(1e-13).expect("well-posed least squares")
}

fn apply_fit(op: &DMatrix<C64>, t: &[C64]) -> Vec<C64> {
    (0..op.nrows())
        .map(|d| (0..op.ncols()).map(|k| op[(d, k)] * t[k]).sum())
        .collect()
}

fn eval_fit(fit: &[C64], delta: f64, s: C64) -> (C64, C64) {
    let sigma = s / delta;
    let mut v = re(0.0);
    let mut dv = re(0.0);
    for &a in fit.iter().rev() {
        dv = dv * sigma + v;
        v = v * sigma + a;
    }
    (v, dv / delta)
}

impl LocalGraph {
    fn frame(stable: Point2, unstable: Point2) -> Mat2 {
        Mat2::from_columns(stable, unstable)
            .inverse()
            .expect("eigendirections of a saddle are independent")
    }

    /// `gamma(s)`
    pub fn eval(&self, s: C64) -> C64 {
        eval_fit(&self.fit, self.delta, s).0
    }

    /// `gamma'(s)`
    pub fn eval_derivative(&self, s: C64) -> C64 {
        eval_fit(&self.fit, self.delta, s).1
    }

    /// Frame coordinates `(s, t)` of an ambient point.
    pub fn to_frame(&self, z: Point2) -> (C64, C64) {
        let w = self.to_frame.apply(z - self.base_point);
        (w.x, w.y)
    }

    pub fn from_frame(&self, s: C64, t: C64) -> Point2 {
        self.base_point + self.stable_direction.scale(s) + self.unstable_direction.scale(t)
    }

    /// Ambient points of the graph samples, in mesh order.
    pub fn points(&self) -> Vec<Point2> {
        self.grid.iter().map(|&(s, t)| self.from_frame(s, t)).collect()
    }

    /// Vertical distance `|t - gamma(s)|` when `z` lies in the closed
    /// `epsilon`-bidisc of the frame.
    pub fn distance_to_graph(&self, z: Point2) -> Option<f64> {
        let (s, t) = self.to_frame(z);
        if s.norm() <= self.epsilon && t.norm() <= self.epsilon {
            Some((t - self.eval(s)).norm())
        } else {
            None
        }
    }

    /// Slope `dy/dx` of the graph's tangent line at the base point.
    pub fn ambient_slope(&self) -> C64 {
        let g1 = self.eval_derivative(re(0.0));
        let v = self.stable_direction + self.unstable_direction.scale(g1);
        v.y / v.x
    }

    /// Rebuilds a graph from new `t` samples on the same mesh.
    pub fn with_samples(&self, t: &[C64]) -> LocalGraph {
        let s: Vec<C64> = self.grid.iter().map(|g| g.0).collect();
        let op = fit_operator(&s, self.delta, fit_degree(self.n_r));
        let mut g = self.clone();
        g.grid = s.iter().zip(t).map(|(&s, &t)| (s, t)).collect();
        g.fit = apply_fit(&op, t);
        g
    }

    pub fn same_mesh(&self, other: &LocalGraph) -> bool {
        self.n_r == other.n_r
            && self.n_theta == other.n_theta
            && (self.delta - other.delta).abs() <= 1e-15 * self.delta.abs()
            && self.grid.len() == other.grid.len()
    }
}

/// Solves for `t` on the fiber over `s` whose image lies on the graph of `gamma`.
fn fiber_solve<M: Differentiable + ?Sized>(
    map: &M,
    g: &LocalGraph,
    s: C64,
    t0: C64,
) -> Result<C64> {
    let mut t = t0;
    for _ in 0..50 {
        let p = g.from_frame(s, t);
        let w = map.apply(p)?;
        let (s1, t1) = g.to_frame(w);
        let (gam, dgam) = eval_fit(&g.fit, g.delta, s1);
        let h = t1 - gam;
        let dir = g.to_frame.apply(map.differential(p).apply(g.unstable_direction));
        let dh = dir.y - dgam * dir.x;
        if dh.norm() == 0.0 {
            break;
        }
        let step = h / dh;
        t -= step;
        if step.norm() <= 1e-16 * (1.0 + t.norm()) {
            break;
        }
    }
    Ok(t)
}

/// Local stable manifold of a saddle by graph transform.
///
/// Starting from the linear stable subspace, each iteration replaces
/// `gamma_k` by the graph of points on the vertical fibers whose images lie
/// on `graph(gamma_k)`.
pub fn local_stable_graph<M: Differentiable + ?Sized>(
    map: &M,
    fp: &FixedPointInfo,
    opts: GraphOptions,
) -> Result<LocalGraph> {
    if fp.classification != Classification::Saddle {
        return Err(Error::NotASaddle {
            found: fp.classification.to_string(),
        });
    }
    if !(opts.delta > 0.0) || opts.n_r == 0 || opts.n_theta == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidParams("graph options must be positive".into()));
    }
    let stable = fp.stable_direction.expect("saddles carry directions");
    let unstable = fp.unstable_direction.expect("saddles carry directions");
    let samples = polar_mesh(opts.delta, opts.n_r, opts.n_theta);
    let op = fit_operator(&samples, opts.delta, fit_degree(opts.n_r));
    let mut graph = LocalGraph {
        base_point: fp.location,
        stable_direction: stable,
        unstable_direction: unstable,
        delta: opts.delta,
        epsilon: opts.delta,
        n_r: opts.n_r,
        n_theta: opts.n_theta,
        grid: samples.iter().map(|&s| (s, re(0.0))).collect(),
        fit: vec![re(0.0); fit_degree(opts.n_r) + 1],
        iterations: 0,
        changes: Vec::new(),
        to_frame: LocalGraph::frame(stable, unstable),
    };
    for iter in 1..=opts.max_iter {
        let t_new: Vec<C64> = graph
            .grid
            .par_iter()
            .map(|&(s, t)| fiber_solve(map, &graph, s, t))
            .collect::<Result<_>>()?;
        let change = graph
            .grid
            .iter()
            .zip(&t_new)
            .map(|(&(_, t), &tn)| (tn - t).norm())
            .fold(0.0, f64::max);
        if t_new.iter().any(|t| !t.is_finite() || t.norm() > opts.delta * opts.slope_cap) {
            return Err(Error::DeltaTooLarge {
                ratio: f64::INFINITY,
            });
        }
        if iter >= 3 {
            if let Some(&prev) = graph.changes.last() {
                if prev > 0.0 && change / prev > 0.95 && change > opts.tol {
                    return Err(Error::DeltaTooLarge { ratio: change / prev });
                }
            }
        }
        graph.changes.push(change);
        graph.iterations = iter;
        for (g, &tn) in graph.grid.iter_mut().zip(&t_new) {
            g.1 = tn;
        }
        graph.fit = apply_fit(&op, &t_new);
        if change < opts.tol && graph_residual(map, &graph) < opts.tol {
            return Ok(graph);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: graph_residual(map, &graph),
    })
}

/// Retries [`local_stable_graph`] with `delta` halved on `DeltaTooLarge`.
pub fn local_stable_graph_auto<M: Differentiable + ?Sized>(
    map: &M,
    fp: &FixedPointInfo,
    mut opts: GraphOptions,
    max_halvings: usize,
) -> Result<LocalGraph> {
    let mut last = None;
    for _ in 0..=max_halvings {
        match local_stable_graph(map, fp, opts) {
            Err(e @ Error::DeltaTooLarge { .. }) => {
                last = Some(e);
                opts.delta *= 0.5;
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Max over samples whose image stays in the `delta`-bidisc of the vertical
/// distance from the image to the graph.
pub fn graph_residual<M: Differentiable + ?Sized>(map: &M, graph: &LocalGraph) -> f64 {
    graph
        .grid
        .par_iter()
        .map(|&(s, t)| match map.apply(graph.from_frame(s, t)) {
            Ok(w) => {
                let (s1, t1) = graph.to_frame(w);
                if s1.norm() <= graph.delta && t1.norm() <= graph.delta {
                    (t1 - graph.eval(s1)).norm()
                } else {
                    0.0
                }
            }
            Err(_) => 0.0,
        })
        .reduce(|| 0.0, f64::max)
}

/// Sup over paired samples of the ambient distance between graph points.
///
/// When both graphs share base point and frame this is `sup |t1 - t2|`; in
/// general it bounds the Hausdorff distance of the sampled graphs.
pub fn graph_distance(g1: &LocalGraph, g2: &LocalGraph) -> Result<f64> {
    if !g1.same_mesh(g2) {
        return Err(Error::MeshMismatch);
    }
    Ok(g1
        .points()
        .iter()
        .zip(g2.points())
        .map(|(a, b)| a.dist(b))
        .fold(0.0, f64::max))
}
