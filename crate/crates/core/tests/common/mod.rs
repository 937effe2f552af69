#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shepard_bernoulli::{NodeSet, Point};

pub fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
}

pub fn random_nodes(n: usize, seed: u64) -> NodeSet {
    NodeSet::new(random_points(n, seed)).unwrap()
}

pub fn uniform_grid(side: usize) -> NodeSet {
    let h = 1.0 / (side - 1) as f64;
    NodeSet::new((0..side * side).map(|k| Point::new((k % side) as f64 * h, (k / side) as f64 * h)).collect()).unwrap()
}

/// Distance from node `i` to its `(n+1)`-th nearest other node, by sorting
/// all distances.
pub fn brute_radius(points: &[Point], i: usize, n: usize) -> f64 {
    let mut d: Vec<f64> =
        points.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.dist(points[i])).collect();
    d.sort_by(f64::total_cmp);
    d[n]
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    x
}

/// Weighted least-squares fit at node `i` by assembling the raw normal
/// equations over every node strictly inside `radius`.
pub fn wls_oracle(points: &[Point], values: &[f64], i: usize, degree: usize, radius: f64) -> Vec<f64> {
    let exps: Vec<(i32, i32)> = (1..=degree as i32).flat_map(|k| (0..=k).map(move |s| (k - s, s))).collect();
    let m = exps.len();
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    let c = points[i];
    for (k, p) in points.iter().enumerate() {
        let d = p.dist(c);
        if k == i || d >= radius {
            continue;
        }
        let w = ((radius - d) / (radius * d)).powi(2);
        let row: Vec<f64> = exps.iter().map(|&(r, s)| (p.x - c.x).powi(r) * (p.y - c.y).powi(s)).collect();
        for u in 0..m {
            b[u] += w * row[u] * (values[k] - values[i]);
            for v in 0..m {
                a[u][v] += w * row[u] * row[v];
            }
        }
    }
    gauss_solve(a, b)
}

pub fn oracle_quality(a: Point, b: Point, c: Point) -> f64 {
    let r = a.dist(b).max(b.dist(c)).max(c.dist(a));
    let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    if det.abs() <= 1e-12 * r * r {
        f64::INFINITY
    } else {
        r.powi(3) / det.abs()
    }
}

/// Minimum quality over every pair of nodes strictly inside `radius` of
/// node `i`, and every pair reaching it within the tie tolerance.
pub fn assignment_oracle(points: &[Point], i: usize, radius: f64) -> (f64, Vec<(usize, usize)>) {
    let inside: Vec<usize> = (0..points.len()).filter(|&k| k != i && points[k].dist(points[i]) < radius).collect();
    let mut all = Vec::new();
    for (x, &j) in inside.iter().enumerate() {
        for &k in &inside[x + 1..] {
            all.push((oracle_quality(points[i], points[j], points[k]), j.min(k), j.max(k)));
        }
    }
    let best = all.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
    let ties = all.iter().filter(|t| t.0 <= best * (1.0 + 1e-12)).map(|t| (t.1, t.2)).collect();
    (best, ties)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// `sin(x + 2y)` and its partials.
pub fn wave(p: Point, dx: usize, dy: usize) -> f64 {
    let phase = p.x + 2.0 * p.y + (dx + dy) as f64 * std::f64::consts::FRAC_PI_2;
    2f64.powi(dy as i32) * phase.sin()
}

/// `exp(x) cos(y)` and its partials.
pub fn exp_cos(p: Point, _dx: usize, dy: usize) -> f64 {
    p.x.exp() * (p.y + dy as f64 * std::f64::consts::FRAC_PI_2).cos()
}

/// `exp(x + y)` and its partials.
pub fn exp_sum(p: Point, _dx: usize, _dy: usize) -> f64 {
    (p.x + p.y).exp()
}
