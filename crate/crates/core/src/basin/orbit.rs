use serde::Serialize;

use crate::chain::Map2;
use crate::linalg::Point2;

/// Consecutive in-tolerance steps required before an orbit counts as converged.
pub const CONSECUTIVE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Verdict {
    /// Within tolerance of the target for [`CONSECUTIVE`] steps ending at `step`.
    ConvergedTo { point: Point2, step: usize },
    /// The magnitude cap was exceeded at `step`.
    Escaped { step: usize },
    BoundedUndecided,
}

impl Verdict {
    pub fn converged(&self) -> bool {
        matches!(self, Verdict::ConvergedTo { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitOptions {
    pub max_iter: usize,
    pub target: Point2,
    pub conv_tol: f64,
}

impl OrbitOptions {
    pub fn new(target: Point2) -> Self {
        Self {
            max_iter: 500,
            target,
            conv_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub start: Point2,
    /// `states[0] = start`; truncated when the orbit ends early.
    pub states: Vec<Point2>,
    pub verdict: Verdict,
}

fn run<M: Map2 + ?Sized>(map: &M, z: Point2, opts: &OrbitOptions, mut sink: impl FnMut(Point2)) -> Verdict {
    let mut w = z;
    let mut streak = 0;
    for n in 0..=opts.max_iter {
        if n > 0 {
            match map.apply(w) {
                Ok(next) if next.is_finite() => w = next,
                _ => return Verdict::Escaped { step: n },
            }
            sink(w);
        }
        if w.dist(opts.target) < opts.conv_tol {
            streak += 1;
            if streak >= CONSECUTIVE {
                return Verdict::ConvergedTo {
                    point: opts.target,
                    step: n,
                };
            }
        } else {
            streak = 0;
        }
    }
    Verdict::BoundedUndecided
}

/// Forward orbit with its verdict.
pub fn orbit<M: Map2 + ?Sized>(map: &M, z: Point2, opts: OrbitOptions) -> OrbitRecord {
    let mut states = vec![z];
    let verdict = run(map, z, &opts, |w| states.push(w));
    OrbitRecord {
        start: z,
        states,
        verdict,
    }
}

/// Verdict only, without storing states.
pub fn orbit_verdict<M: Map2 + ?Sized>(map: &M, z: Point2, opts: &OrbitOptions) -> Verdict {
    run(map, z, opts, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::AutoChain;
    use crate::linalg::Mat2;

    #[test]
    fn fixed_point_converges_at_once() {
        let h = AutoChain::henon(0.75);
        let fp = Point2::real(1.5, 1.5);
        let r = orbit(&h, fp, OrbitOptions::new(fp));
        assert_eq!(r.verdict, Verdict::ConvergedTo { point: fp, step: CONSECUTIVE - 1 });
        assert_eq!(r.states[0], fp);
    }

    #[test]
    fn henon_escapes_and_contraction_converges() {
        let h = AutoChain::henon(0.75);
        let r = orbit(&h, Point2::real(10.0, 10.0), OrbitOptions::new(Point2::ZERO));
        assert!(matches!(r.verdict, Verdict::Escaped { .. }));
        let l = AutoChain::linear(Mat2::real(0.5, 0.0, 0.0, 0.5)).unwrap();
        let r = orbit(&l, Point2::real(3.0, -2.0), OrbitOptions::new(Point2::ZERO));
        assert!(r.verdict.converged());
    }
}
