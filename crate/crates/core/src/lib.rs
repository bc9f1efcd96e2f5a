//! Numerical laboratory for attracting sets of holomorphic polynomial
//! automorphisms of C^2.
//!
//! The crate is organized around five groups of operations:
//!
//! * [`chain`] and [`fixed_point`]: exact automorphisms built from shears,
//!   linear maps and translations, with Newton fixed-point search.
//! * [`stable`]: local stable manifolds of saddles by graph transform,
//!   global pullbacks, density and perturbation-stability probes.
//! * [`parabolic`]: maps tangent to the identity, characteristic directions,
//!   blow-up dynamics and the attracting sector.
//! * [`basin`]: orbit verdicts, the interior/neighbourhood probes and the
//!   counterexample gallery.
//! * [`nonauto`]: non-autonomous compositions and the five-component set
//!   geometry.

pub mod basin;
pub mod chain;
pub mod cli;
pub mod error;
pub mod fixed_point;
pub mod grid;
pub mod linalg;
pub mod nonauto;
pub mod output;
pub mod parabolic;
pub mod poly;
pub mod sampling;
pub mod stable;

pub use chain::{AutoChain, Differentiable, ElementaryMap, EndoChain, Map2, MapSpec};
pub use error::{Error, Result};
pub use fixed_point::{find_fixed_point, Classification, FixedPointInfo, NewtonOptions};
pub use linalg::{Mat2, Point2, C64};
pub use poly::{Poly1, PolyMap};
