//! Uniform cell grid over a point cloud for disk and nearest-neighbour
//! queries.

use crate::geometry::Point;

#[derive(Debug, Clone)]
pub struct CellGrid {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    // CSR layout: items[starts[c]..starts[c + 1]] are the points in cell c
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl CellGrid {
    /// Cell size is about `diagonal / sqrt(n)`, giving O(1) expected
    /// occupancy for uniform clouds.
    pub fn build(points: &[Point]) -> Self {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let n = points.len().max(1);
        let diag = (hi - lo).norm();
        let mut cell = if diag > 0.0 { diag / (n as f64).sqrt() } else { 1.0 };
        // keep the table bounded for very elongated clouds
        let max_cells = 4 * n + 16;
        let extent = |c: f64| {
            (
                (((hi.x - lo.x) / c).floor() as usize + 1),
                (((hi.y - lo.y) / c).floor() as usize + 1),
            )
        };
        let (mut nx, mut ny) = extent(cell);
        while nx * ny > max_cells {
            cell *= 2.0;
            (nx, ny) = extent(cell);
        }

        let mut counts = vec![0u32; nx * ny + 1];
        let cell_of = |p: &Point| {
            let cx = (((p.x - lo.x) / cell) as usize).min(nx - 1);
            let cy = (((p.y - lo.y) / cell) as usize).min(ny - 1);
            cy * nx + cx
        };
        for p in points {
            counts[cell_of(p) + 1] += 1;
        }
        for c in 1..counts.len() {
            counts[c] += counts[c - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = cell_of(p);
            items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        Self { origin: lo, cell, nx, ny, starts, items }
    }

    fn cell_coords(&self, p: Point) -> (isize, isize) {
        (
            ((p.x - self.origin.x) / self.cell).floor() as isize,
            ((p.y - self.origin.y) / self.cell).floor() as isize,
        )
    }

    fn cell_items(&self, cx: isize, cy: isize) -> &[u32] {
        if cx < 0 || cy < 0 || cx as usize >= self.nx || cy as usize >= self.ny {
            return &[];
        }
        let c = cy as usize * self.nx + cx as usize;
        &self.items[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    /// Calls `visit(index, distance)` for every point with `distance <= radius`.
    pub fn for_each_within(&self, points: &[Point], center: Point, radius: f64, mut visit: impl FnMut(usize, f64)) {
        if !(radius >= 0.0) {
            return;
        }
        let (x0, y0) = self.cell_coords(Point::new(center.x - radius, center.y - radius));
        let (x1, y1) = self.cell_coords(Point::new(center.x + radius, center.y + radius));
        let x0 = x0.max(0);
        let y0 = y0.max(0);
        let x1 = x1.min(self.nx as isize - 1);
        let y1 = y1.min(self.ny as isize - 1);
        for cy in y0..=y1 {
            for cx in x0..=x1 {
                for &i in self.cell_items(cx, cy) {
                    let d = center.dist(points[i as usize]);
                    if d <= radius {
                        visit(i as usize, d);
                    }
                }
            }
        }
    }

    /// The `k` nearest points to `center`, sorted by `(distance, index)`.
    /// `exclude` is skipped.
    pub fn k_nearest(&self, points: &[Point], center: Point, k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        let available = points.len() - usize::from(exclude.is_some_and(|e| e < points.len()));
        let k = k.min(available);
        if k == 0 {
            return Vec::new();
        }
        let (cx, cy) = self.cell_coords(center);
        let mut found: Vec<(f64, usize)> = Vec::new();
        let max_ring = (self.nx.max(self.ny) as isize) + cx.abs().max(cy.abs()) + 1;
        for ring in 0..=max_ring {
            for (ix, iy) in ring_cells(cx, cy, ring) {
                for &i in self.cell_items(ix, iy) {
                    let i = i as usize;
                    if Some(i) != exclude {
                        found.push((center.dist(points[i]), i));
                    }
                }
            }
            if found.len() >= k {
                found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                // anything not yet visited is at least `ring * cell` away
                if found[k - 1].0 < ring as f64 * self.cell {
                    break;
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        found.truncate(k);
        found
    }
}

fn ring_cells(cx: isize, cy: isize, ring: isize) -> Vec<(isize, isize)> {
    if ring == 0 {
        return vec![(cx, cy)];
    }
    let mut out = Vec::with_capacity(8 * ring as usize);
    for dx in -ring..=ring {
        out.push((cx + dx, cy - ring));
        out.push((cx + dx, cy + ring));
    }
    for dy in (-ring + 1)..ring {
        out.push((cx - ring, cy + dy));
        out.push((cx + ring, cy + dy));
    }
    out
}
