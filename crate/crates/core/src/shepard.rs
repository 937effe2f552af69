//! Shepard weights: the classic global form and the compactly supported
//! Franke-Little localisation with per-node radii of influence.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::spatial::CellGrid;

/// Distances below `CARDINAL_TOL * R` snap to the node itself.
pub const CARDINAL_TOL: f64 = 1e-14;

/// Interpolation nodes with a spatial index. Node identity is the position
/// in the input order.
#[derive(Debug, Clone)]
pub struct NodeSet {
    points: Vec<Point>,
    grid: CellGrid,
}

impl NodeSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::arg("node set is empty"));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::arg(format!("node {i} has non-finite coordinates")));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            // +0.0 and -0.0 compare equal but hash differently
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            if !seen.insert(key) {
                return Err(Error::arg(format!("node {i} duplicates an earlier node at ({}, {})", p.x, p.y)));
            }
        }
        let grid = CellGrid::build(&points);
        Ok(Self { points, grid })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn for_each_within(&self, center: Point, radius: f64, visit: impl FnMut(usize, f64)) {
        self.grid.for_each_within(&self.points, center, radius, visit)
    }

    /// Nearest `k` nodes to `center` sorted by `(distance, index)`.
    pub fn k_nearest(&self, center: Point, k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        self.grid.k_nearest(&self.points, center, k, exclude)
    }

    /// Other nodes strictly inside the open disk about node `i`, sorted by
    /// `(distance, index)`.
    pub fn neighbors_within(&self, i: usize, radius: f64) -> Vec<(f64, usize)> {
        let center = self.points[i];
        let mut out = Vec::new();
        self.for_each_within(center, radius, |k, d| {
            if k != i && d < radius {
                out.push((d, k));
            }
        });
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }
}

/// Exponent and per-node radii of the compactly supported basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSupport {
    pub mu: f64,
    pub radii: Vec<f64>,
    max_radius: f64,
}

impl LocalSupport {
    pub fn new(mu: f64, radii: Vec<f64>) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::arg(format!("exponent mu must be positive, got {mu}")));
        }
        if let Some(i) = radii.iter().position(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::arg(format!("radius of node {i} must be positive, got {}", radii[i])));
        }
        let max_radius = radii.iter().cloned().fold(0.0, f64::max);
        Ok(Self { mu, radii, max_radius })
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }
}

/// Radius per node that just encloses `n` other nodes in the open disk: the
/// distance to the `(n+1)`-th nearest neighbour. With fewer than `n + 1`
/// neighbours available the radius is 1.1 times the farthest distance.
pub fn compute_radii(nodes: &NodeSet, n: usize) -> Result<Vec<f64>> {
    if nodes.len() < 2 {
        return Err(Error::arg(format!("need at least 2 nodes, got {}", nodes.len())));
    }
    if n == 0 {
        return Err(Error::arg("neighbour count must be at least 1"));
    }
    let total = nodes.len();
    Ok((0..total)
        .map(|i| {
            let c = nodes.point(i);
            if total - 1 <= n {
                let far = nodes.points().iter().map(|p| c.dist(*p)).fold(0.0, f64::max);
                1.1 * far
            } else {
                nodes.k_nearest(c, n + 1, Some(i))[n].0
            }
        })
        .collect())
}

/// `((1/d) - (1/R))_+^mu` written as `((R - d)/(R d))_+^mu`.
#[inline]
pub fn raw_weight_at(d: f64, radius: f64, mu: f64) -> f64 {
    if d >= radius {
        return 0.0;
    }
    let w = (radius - d) / (radius * d);
    if mu == 2.0 {
        w * w
    } else {
        w.powf(mu)
    }
}

pub fn raw_weight(p: Point, i: usize, nodes: &NodeSet, support: &LocalSupport) -> f64 {
    raw_weight_at(p.dist(nodes.point(i)), support.radii[i], support.mu)
}

/// Normalised compact-support weights at `p`, sparse over the active set.
/// At a node the basis is the cardinal singleton.
pub fn basis(p: Point, nodes: &NodeSet, support: &LocalSupport) -> Result<Vec<(usize, f64)>> {
    let mut raw: Vec<(usize, f64)> = Vec::new();
    let mut cardinal = None;
    nodes.for_each_within(p, support.max_radius, |k, d| {
        let r = support.radii[k];
        if d < CARDINAL_TOL * r {
            cardinal = Some(cardinal.map_or(k, |c: usize| c.min(k)));
        } else if d < r {
            raw.push((k, raw_weight_at(d, r, support.mu)));
        }
    });
    if let Some(k) = cardinal {
        return Ok(vec![(k, 1.0)]);
    }
    raw.retain(|(_, w)| *w > 0.0);
    if raw.is_empty() {
        return Err(Error::Coverage(p));
    }
    raw.sort_by_key(|(k, _)| *k);
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    for (_, w) in raw.iter_mut() {
        *w /= total;
    }
    Ok(raw)
}

/// Global inverse-distance Shepard interpolant.
pub fn classic_shepard_eval(p: Point, nodes: &NodeSet, values: &[f64], mu: f64) -> Result<f64> {
    if values.len() != nodes.len() {
        return Err(Error::arg(format!("{} values for {} nodes", values.len(), nodes.len())));
    }
    if !(mu > 0.0) {
        return Err(Error::arg(format!("exponent mu must be positive, got {mu}")));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, v) in nodes.points().iter().zip(values) {
        let d = p.dist(*k);
        if d == 0.0 {
            return Ok(*v);
        }
        let w = d.powf(-mu);
        lo = lo.min(*v);
        hi = hi.max(*v);
        num += w * v;
        den += w;
    }
    let value = num / den;
    if value.is_finite() {
        // a convex combination; clamp away the last-bit rounding excursions
        return Ok(value.clamp(lo, hi));
    }
    // weights overflowed: fall back to the nearest node
    let (_, k) = nodes.k_nearest(p, 1, None)[0];
    Ok(values[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_nodes(n: usize, seed: u64) -> NodeSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        NodeSet::new((0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()).unwrap()
    }

    fn unit_grid(n: usize) -> NodeSet {
        NodeSet::new(
            (0..n * n)
                .map(|k| Point::new((k % n) as f64, (k / n) as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_duplicates_and_non_finite() {
        assert!(NodeSet::new(vec![Point::new(0.0, 0.0), Point::new(-0.0, 0.0)]).is_err());
        assert!(NodeSet::new(vec![Point::new(f64::NAN, 0.0)]).is_err());
        assert!(NodeSet::new(vec![]).is_err());
    }

    #[test]
    fn radii_examples() {
        let line = NodeSet::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)]).unwrap();
        let r = compute_radii(&line, 1).unwrap();
        // end node: sorted distances 1, 2
        assert_eq!(r[0], 2.0);
        // middle node: sorted distances 1, 1
        assert_eq!(r[1], 1.0);

        let r = compute_radii(&line, 2).unwrap();
        assert_relative_eq!(r[0], 2.2);
        assert_relative_eq!(r[1], 1.1);

        let grid = unit_grid(5);
        let r = compute_radii(&grid, 4).unwrap();
        assert_relative_eq!(r[12], 2f64.sqrt());

        assert!(compute_radii(&NodeSet::new(vec![Point::default()]).unwrap(), 1).is_err());
        assert!(compute_radii(&grid, 0).is_err());
    }

    #[test]
    fn radii_enclose_exactly_n() {
        let nodes = random_nodes(300, 3);
        let r = compute_radii(&nodes, 9).unwrap();
        for i in 0..nodes.len() {
            let inside = (0..nodes.len())
                .filter(|&k| k != i && nodes.point(k).dist(nodes.point(i)) < r[i])
                .count();
            assert_eq!(inside, 9);
        }
    }

    #[test]
    fn raw_weight_examples() {
        assert_eq!(raw_weight_at(2.0, 2.0, 2.0), 0.0);
        assert_eq!(raw_weight_at(3.0, 2.0, 2.0), 0.0);
        let r: f64 = 0.8;
        assert_relative_eq!(raw_weight_at(r / 2.0, r, 2.0), 1.0 / (r * r), max_relative = 1e-14);
        assert_relative_eq!(raw_weight_at(0.25, 1.0, 1.5), 3f64.powf(1.5), max_relative = 1e-14);
    }

    #[test]
    fn basis_examples() {
        let nodes = NodeSet::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        let s = LocalSupport::new(2.0, vec![2.0, 2.0]).unwrap();
        let b = basis(Point::new(0.5, 0.3), &nodes, &s).unwrap();
        assert_eq!(b.len(), 2);
        assert_relative_eq!(b[0].1, 0.5, max_relative = 1e-15);
        assert_relative_eq!(b[1].1, 0.5, max_relative = 1e-15);
        assert_eq!(basis(Point::new(1.0, 0.0), &nodes, &s).unwrap(), vec![(1, 1.0)]);
        assert!(matches!(basis(Point::new(5.0, 5.0), &nodes, &s), Err(Error::Coverage(_))));
    }

    #[test]
    fn partition_of_unity_and_support() {
        let nodes = random_nodes(200, 4);
        let s = LocalSupport::new(2.0, compute_radii(&nodes, 9).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 1000 {
            let p = Point::new(rng.gen(), rng.gen());
            let Ok(b) = basis(p, &nodes, &s) else { continue };
            let total: f64 = b.iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (k, w) in &b {
                assert!(*w > 0.0);
                assert!(p.dist(nodes.point(*k)) < s.radii[*k]);
            }
            // nodes left out of the sparse map are exactly those outside their disks
            for k in 0..nodes.len() {
                let active = b.iter().any(|(j, _)| *j == k);
                assert_eq!(active, p.dist(nodes.point(k)) < s.radii[k]);
            }
            checked += 1;
        }
    }

    #[test]
    fn flat_at_nodes_for_mu_two() {
        let nodes = random_nodes(60, 6);
        let s = LocalSupport::new(2.0, compute_radii(&nodes, 9).unwrap()).unwrap();
        let weight = |p: Point, i: usize| {
            basis(p, &nodes, &s)
                .unwrap()
                .iter()
                .find(|(k, _)| *k == i)
                .map_or(0.0, |(_, w)| *w)
        };
        let grad = |v: Point, i: usize, h: f64| {
            let gx = (weight(v + Point::new(h, 0.0), i) - weight(v - Point::new(h, 0.0), i)) / (2.0 * h);
            let gy = (weight(v + Point::new(0.0, h), i) - weight(v - Point::new(0.0, h), i)) / (2.0 * h);
            gx.hypot(gy)
        };
        // a vanishing gradient shows up as difference quotients shrinking with the step
        for k in 0..nodes.len() {
            let v = nodes.point(k);
            for i in [k, (k + 1) % nodes.len()] {
                let (g1, g2) = (grad(v, i, 1e-4), grad(v, i, 1e-5));
                assert!(g2 <= 0.2 * g1 + 1e-9, "node {k}, basis {i}: {g1} then {g2}");
            }
        }
    }

    #[test]
    fn continuous_across_support_boundary() {
        let nodes = random_nodes(80, 7);
        let s = LocalSupport::new(2.0, compute_radii(&nodes, 9).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let i = rng.gen_range(0..nodes.len());
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let dir = Point::new(theta.cos(), theta.sin());
            // crossing point of node i's support circle
            let cross = nodes.point(i) + s.radii[i] * dir;
            let w = |t: f64| {
                basis(cross + t * dir, &nodes, &s)
                    .ok()
                    .and_then(|b| b.into_iter().find(|(k, _)| *k == i))
                    .map_or(0.0, |(_, w)| w)
            };
            // one-sided slopes on either side of the circle; their gap closes linearly for a C1 weight
            let gap = |h: f64| ((w(h) - w(0.0)) / h - (w(0.0) - w(-h)) / h).abs();
            let (g1, g2) = (gap(1e-4), gap(1e-5));
            assert!(w(0.0).abs() < 1e-12);
            assert!(g2 <= 0.2 * g1 + 1e-7, "slope gap {g1} then {g2}");
        }
    }

    #[test]
    fn classic_examples() {
        let nodes = random_nodes(30, 9);
        let vals: Vec<f64> = (0..30).map(|k| (k as f64).sin()).collect();
        assert_eq!(classic_shepard_eval(nodes.point(4), &nodes, &vals, 2.0).unwrap(), vals[4]);
        let c = vec![3.5; 30];
        assert_relative_eq!(classic_shepard_eval(Point::new(0.2, 0.9), &nodes, &c, 2.0).unwrap(), 3.5, max_relative = 1e-14);
        let two = NodeSet::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0)]).unwrap();
        assert_relative_eq!(classic_shepard_eval(Point::new(1.0, 1.0), &two, &[0.0, 1.0], 3.0).unwrap(), 0.5);
        assert!(classic_shepard_eval(Point::default(), &two, &[1.0], 2.0).is_err());
    }

    #[test]
    fn classic_is_bounded_by_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let nodes = random_nodes(rng.gen_range(1..40), rng.gen());
            let vals: Vec<f64> = (0..nodes.len()).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for _ in 0..20 {
                let p = Point::new(rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..2.0));
                let v = classic_shepard_eval(p, &nodes, &vals, rng.gen_range(0.5..4.0)).unwrap();
                assert!(lo <= v && v <= hi);
            }
        }
    }
}
