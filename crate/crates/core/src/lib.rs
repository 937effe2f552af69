//! Scattered-data interpolation in the plane with Shepard–Bernoulli
//! operators.
//!
//! An [`Interpolant`] blends one local polynomial per node with compactly
//! supported Shepard weights. In Bernoulli mode each local polynomial is a
//! three-point generalized Taylor polynomial on a well-shaped triangle
//! attached to the node, which raises the degree of exactness by one over
//! the plain Shepard–Taylor blend built from the same derivative data.
//!
//! ```
//! use shepard_bernoulli::{Config, Interpolant, NodeSet, Point};
//!
//! let pts: Vec<Point> = (0..64)
//!     .map(|k| Point::new((k % 8) as f64 / 7.0, (k / 8) as f64 / 7.0))
//!     .collect();
//! let nodes = NodeSet::new(pts).unwrap();
//! let f = |p: Point, dx: usize, dy: usize| match (dx, dy) {
//!     (0, 0) => p.x * p.x + p.y,
//!     (1, 0) => 2.0 * p.x,
//!     (0, 1) => 1.0,
//!     (2, 0) => 2.0,
//!     _ => 0.0,
//! };
//! let interp = Interpolant::from_function(nodes, &f, &Config::bernoulli(3)).unwrap();
//! let v = interp.eval(Point::new(0.3, 0.6)).unwrap();
//! assert!((v - 0.69).abs() < 1e-12);
//! ```

pub mod assoc;
pub mod bench;
pub mod bernoulli;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod gtpoly;
pub mod interp;
pub mod jets;
pub mod shepard;
pub mod spatial;

pub use assoc::{assign_all, select_triangle, TriangleAssignment};
pub use error::{Error, Result};
pub use geometry::{Point, Triangle};
pub use gtpoly::{GtData, GtPoly};
pub use interp::{Config, ErrorStats, Fallback, GridSpec, Interpolant, JetSource, Mode, NodalData};
pub use jets::{Differentiable, Jet};
pub use shepard::{LocalSupport, NodeSet};
