//! Per-node triangle association: every node gets the best-shaped triangle
//! having a vertex at the node and its other two vertices inside the node's
//! disk of influence.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Triangle;
use crate::shepard::{LocalSupport, NodeSet};

/// Relative tolerance under which two qualities count as tied.
pub const QUALITY_TIE_TOL: f64 = 1e-12;

/// How many times the search radius is doubled before a node is given up.
pub const MAX_DOUBLINGS: u32 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleAssignment {
    pub node: usize,
    /// Companion vertices, `others.0 < others.1`.
    pub others: (usize, usize),
    /// Longest side.
    pub r: f64,
    /// Reciprocal of `|det|`.
    pub s: f64,
    /// `r^3 s`.
    pub quality: f64,
    /// Radius the companions were searched in; larger than the node's radius
    /// of influence when the doubling fallback fired.
    pub search_radius: f64,
    pub enlarged: bool,
}

impl TriangleAssignment {
    pub fn triangle(&self, nodes: &NodeSet) -> Triangle {
        Triangle::new(
            nodes.point(self.node),
            nodes.point(self.others.0),
            nodes.point(self.others.1),
        )
    }

    /// Rebuilds an assignment from stored indices.
    pub fn from_indices(nodes: &NodeSet, node: usize, others: (usize, usize), search_radius: f64, enlarged: bool) -> Result<Self> {
        let n = nodes.len();
        let (j, k) = (others.0.min(others.1), others.0.max(others.1));
        if node >= n || j >= n || k >= n || j == k || j == node || k == node {
            return Err(Error::Association {
                node,
                reason: format!("invalid companion indices ({}, {})", others.0, others.1),
            });
        }
        let t = Triangle::new(nodes.point(node), nodes.point(j), nodes.point(k));
        let quality = t.quality();
        if !quality.is_finite() {
            return Err(Error::Association { node, reason: "stored triangle is degenerate".into() });
        }
        Ok(Self {
            node,
            others: (j, k),
            r: t.longest_side(),
            s: 1.0 / t.signed_area().abs(),
            quality,
            search_radius,
            enlarged,
        })
    }
}

/// Minimises the shape functional over all pairs of in-disk neighbours of
/// node `i`. Neighbours are enumerated by increasing distance (ties by
/// index) and pairs lexicographically in that order; the first pair reaching
/// the minimum wins.
pub fn select_triangle(i: usize, nodes: &NodeSet, support: &LocalSupport) -> Result<TriangleAssignment> {
    select_in_radius(i, nodes, support.radii[i], false)
}

fn select_in_radius(i: usize, nodes: &NodeSet, radius: f64, enlarged: bool) -> Result<TriangleAssignment> {
    let near = nodes.neighbors_within(i, radius);
    if near.len() < 2 {
        return Err(Error::Association {
            node: i,
            reason: format!("only {} neighbour(s) inside radius {radius}", near.len()),
        });
    }
    let vi = nodes.point(i);
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..near.len() {
        let pa = nodes.point(near[a].1);
        for b in (a + 1)..near.len() {
            let q = Triangle::new(vi, pa, nodes.point(near[b].1)).quality();
            if !q.is_finite() {
                continue;
            }
            match best {
                Some((bq, _, _)) if q >= bq * (1.0 - QUALITY_TIE_TOL) => {}
                _ => best = Some((q, near[a].1, near[b].1)),
            }
        }
    }
    let Some((_, j, k)) = best else {
        return Err(Error::Association {
            node: i,
            reason: "every candidate triangle is degenerate".into(),
        });
    };
    TriangleAssignment::from_indices(nodes, i, (j, k), radius, enlarged)
}

/// Associates a triangle with every node. A node whose disk holds no usable
/// triangle retries with the radius doubled, up to [`MAX_DOUBLINGS`] times.
pub fn assign_all(nodes: &NodeSet, support: &LocalSupport) -> Result<Vec<TriangleAssignment>> {
    if nodes.len() < 3 {
        return Err(Error::arg(format!("need at least 3 nodes, got {}", nodes.len())));
    }
    (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            let mut radius = support.radii[i];
            let mut last = None;
            for attempt in 0..=MAX_DOUBLINGS {
                match select_in_radius(i, nodes, radius, attempt > 0) {
                    Ok(a) => return Ok(a),
                    Err(e) => last = Some(e),
                }
                radius *= 2.0;
            }
            Err(last.expect("at least one attempt"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::shepard::compute_radii;

    fn support(nodes: &NodeSet, n_w: usize) -> LocalSupport {
        LocalSupport::new(2.0, compute_radii(nodes, n_w).unwrap()).unwrap()
    }

    #[test]
    fn picks_best_pair() {
        let nodes = NodeSet::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(2.0, 0.0),
        ])
        .unwrap();
        let s = LocalSupport::new(2.0, vec![3.0; 4]).unwrap();
        let a = select_triangle(0, &nodes, &s).unwrap();
        assert_eq!(a.others, (1, 2));
        assert!((a.quality - 2f64.sqrt().powi(3)).abs() < 1e-12);
    }

    #[test]
    fn unique_pair_and_collinear_failure() {
        let nodes = NodeSet::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(0.3, 1.0)]).unwrap();
        let s = LocalSupport::new(2.0, vec![5.0; 3]).unwrap();
        assert_eq!(select_triangle(0, &nodes, &s).unwrap().others, (1, 2));
        let all = assign_all(&nodes, &s).unwrap();
        for (i, a) in all.iter().enumerate() {
            let mut tri = vec![a.node, a.others.0, a.others.1];
            tri.sort();
            assert_eq!(tri, vec![0, 1, 2]);
            assert_eq!(a.node, i);
        }

        let line = NodeSet::new((0..4).map(|k| Point::new(k as f64, 0.0)).collect()).unwrap();
        let s = LocalSupport::new(2.0, vec![10.0; 4]).unwrap();
        assert!(matches!(select_triangle(0, &line, &s), Err(Error::Association { node: 0, .. })));
        assert!(matches!(assign_all(&line, &s), Err(Error::Association { .. })));
    }

    #[test]
    fn doubling_fallback_reaches_far_nodes() {
        let nodes = NodeSet::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.1, 0.0),
            Point::new(0.0, 0.1),
            Point::new(5.0, 5.0),
        ])
        .unwrap();
        let s = LocalSupport::new(2.0, vec![0.15, 0.15, 0.15, 2.0]).unwrap();
        let a = assign_all(&nodes, &s).unwrap();
        assert!(!a[0].enlarged);
        assert!(a[3].enlarged);
        assert!(a[3].search_radius >= 8.0);
    }

    #[test]
    fn grid_assignments_beat_right_triangles() {
        let nodes = NodeSet::new((0..9).map(|k| Point::new((k % 3) as f64, (k / 3) as f64)).collect()).unwrap();
        let s = support(&nodes, 8);
        let all = assign_all(&nodes, &s).unwrap();
        for a in &all {
            assert!(a.quality <= 2f64.sqrt().powi(3) + 1e-12, "{a:?}");
        }
        // (0,0),(2,0),(1,2) ties with (0,0),(2,1),(0,2); the nearer first companion wins
        assert_eq!(all[0].others, (2, 7));
        assert!((all[0].quality - 5.0 * 5f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_keeps_choice() {
        let mut rng = 12345u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Point> = (0..150).map(|_| Point::new(next(), next())).collect();
        let nodes = NodeSet::new(pts.clone()).unwrap();
        let base = assign_all(&nodes, &support(&nodes, 9)).unwrap();
        let scaled_nodes = NodeSet::new(pts.iter().map(|p| 8.0 * *p).collect()).unwrap();
        let scaled = assign_all(&scaled_nodes, &support(&scaled_nodes, 9)).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert_eq!(a.others, b.others);
        }
    }
}
