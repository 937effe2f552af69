use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::shepard::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    UniformRandom,
    Grid,
    Clustered,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::UniformRandom => "uniform-random",
            NodeKind::Grid => "grid",
            NodeKind::Clustered => "clustered",
        })
    }
}

impl FromStr for NodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" | "uniform" | "random" => Ok(NodeKind::UniformRandom),
            "grid" => Ok(NodeKind::Grid),
            "clustered" => Ok(NodeKind::Clustered),
            other => Err(Error::arg(format!("unknown node kind '{other}'"))),
        }
    }
}

const CLUSTERS: usize = 5;

/// Deterministic node set in `[0,1]^2`.
///
/// The grid kind lays out `ceil(sqrt(n))` points per side with `x` varying
/// fastest and keeps the first `n`. Random kinds draw from a ChaCha8 stream
/// seeded by `seed` and redraw any duplicate.
pub fn generate_nodes(kind: NodeKind, n: usize, seed: u64) -> Result<NodeSet> {
    if n < 3 {
        return Err(Error::arg(format!("need at least 3 nodes, got {n}")));
    }
    let points = match kind {
        NodeKind::Grid => {
            let side = (n as f64).sqrt().ceil() as usize;
            let side = if side * side < n { side + 1 } else { side };
            let step = 1.0 / (side - 1) as f64;
            (0..n).map(|k| Point::new((k % side) as f64 * step, (k / side) as f64 * step)).collect()
        }
        NodeKind::UniformRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            draw_distinct(n, || Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
        }
        NodeKind::Clustered => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let centers: Vec<(Point, f64)> = (0..CLUSTERS)
                .map(|_| (Point::new(rng.gen_range(0.15..0.85), rng.gen_range(0.15..0.85)), rng.gen_range(0.05..0.15)))
                .collect();
            let unit = Normal::new(0.0, 1.0).expect("unit normal");
            draw_distinct(n, || {
                let (c, sigma) = centers[rng.gen_range(0..CLUSTERS)];
                let x = (c.x + sigma * unit.sample(&mut rng)).clamp(0.0, 1.0);
                let y = (c.y + sigma * unit.sample(&mut rng)).clamp(0.0, 1.0);
                Point::new(x, y)
            })
        }
    };
    NodeSet::new(points)
}

fn draw_distinct(n: usize, mut draw: impl FnMut() -> Point) -> Vec<Point> {
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = draw();
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            out.push(p);
        }
    }
    out
}
