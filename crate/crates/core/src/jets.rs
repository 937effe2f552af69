//! Tables of partial derivatives at a point ("jets") and the derivative
//! algebra along triangle sides built on them.

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Source of partial derivatives `∂^{a+b} f / ∂x^a ∂y^b` at arbitrary points.
pub trait Differentiable {
    fn partial(&self, p: Point, dx: usize, dy: usize) -> Result<f64>;

    fn value(&self, p: Point) -> Result<f64> {
        self.partial(p, 0, 0)
    }
}

impl<F> Differentiable for F
where
    F: Fn(Point, usize, usize) -> f64,
{
    fn partial(&self, p: Point, dx: usize, dy: usize) -> Result<f64> {
        Ok(self(p, dx, dy))
    }
}

/// Partial derivatives of `f` at `center` up to total order `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: Point,
    order: usize,
    // grouped by total degree k, within a group by y-order b: offset k(k+1)/2 + b
    partials: Vec<f64>,
}

#[inline]
fn slot(dx: usize, dy: usize) -> usize {
    let k = dx + dy;
    k * (k + 1) / 2 + dy
}

pub fn jet_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl Jet {
    /// Builds a jet from a closure `(dx, dy) -> partial`.
    pub fn from_fn(center: Point, order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut partials = vec![0.0; jet_len(order)];
        for k in 0..=order {
            for b in 0..=k {
                partials[slot(k - b, b)] = f(k - b, b);
            }
        }
        Self::from_table(center, order, partials)
    }

    /// Builds a jet from a flat table ordered `d00, d10, d01, d20, d11, d02, d30, ...`.
    pub fn from_table(center: Point, order: usize, partials: Vec<f64>) -> Result<Self> {
        if partials.len() != jet_len(order) {
            return Err(Error::arg(format!(
                "jet of order {order} needs {} entries, got {}",
                jet_len(order),
                partials.len()
            )));
        }
        if !center.is_finite() {
            return Err(Error::arg("jet center must be finite"));
        }
        if let Some(bad) = partials.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluator(format!(
                "non-finite partial derivative (entry {bad}) at ({}, {})",
                center.x, center.y
            )));
        }
        Ok(Self { center, order, partials })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.partials[0]
    }

    /// Flat table in the layout accepted by [`Jet::from_table`].
    pub fn table(&self) -> &[f64] {
        &self.partials
    }

    /// `∂^{dx+dy} f / ∂x^dx ∂y^dy` at the center.
    pub fn get(&self, dx: usize, dy: usize) -> Option<f64> {
        (dx + dy <= self.order).then(|| self.partials[slot(dx, dy)])
    }

    pub fn truncated(&self, order: usize) -> Result<Jet> {
        if order > self.order {
            return Err(Error::arg(format!(
                "cannot raise jet order from {} to {order}",
                self.order
            )));
        }
        Ok(Jet {
            center: self.center,
            order,
            partials: self.partials[..jet_len(order)].to_vec(),
        })
    }

    /// `D_u^p D_v^q f(center)`, where `D_w = w · ∇`.
    pub fn directional_derivative(&self, u: Point, v: Point, p: usize, q: usize) -> Result<f64> {
        if p + q > self.order {
            return Err(Error::arg(format!(
                "directional derivative of order {} exceeds jet order {}",
                p + q,
                self.order
            )));
        }
        let bu = binomial_row(p);
        let bv = binomial_row(q);
        let mut sum = 0.0;
        for i in 0..=p {
            let cu = bu[i] * u.x.powi((p - i) as i32) * u.y.powi(i as i32);
            for k in 0..=q {
                let cv = bv[k] * v.x.powi((q - k) as i32) * v.y.powi(k as i32);
                sum += cu * cv * self.partials[slot(p + q - i - k, i + k)];
            }
        }
        Ok(sum)
    }

    /// Taylor polynomial of the jet's order, evaluated at `p`.
    pub fn taylor_eval(&self, p: Point) -> f64 {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        let mut total = 0.0;
        // x-powers / a! for the current degree are rebuilt per degree group
        let mut xs = vec![1.0; self.order + 1];
        let mut ys = vec![1.0; self.order + 1];
        for a in 1..=self.order {
            xs[a] = xs[a - 1] * dx / a as f64;
            ys[a] = ys[a - 1] * dy / a as f64;
        }
        for k in 0..=self.order {
            let base = k * (k + 1) / 2;
            for b in 0..=k {
                total += self.partials[base + b] * xs[k - b] * ys[b];
            }
        }
        total
    }
}

pub(crate) fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

/// Fills a jet from an evaluator of partial derivatives.
pub fn jet_from_callable(f: &dyn Differentiable, center: Point, order: usize) -> Result<Jet> {
    let mut partials = vec![0.0; jet_len(order)];
    for k in 0..=order {
        for b in 0..=k {
            partials[slot(k - b, b)] = f.partial(center, k - b, b)?;
        }
    }
    Jet::from_table(center, order, partials)
}

/// Partial derivatives of a plain function by central differences.
///
/// First derivatives use the step `1e-5 (1 + |center|)`; higher orders use a
/// wider step to keep round-off below truncation error. Meant for tests.
pub struct FiniteDifference<F>(pub F);

impl<F: Fn(Point) -> f64> Differentiable for FiniteDifference<F> {
    fn partial(&self, p: Point, dx: usize, dy: usize) -> Result<f64> {
        let k = dx + dy;
        if k == 0 {
            return Ok((self.0)(p));
        }
        let scale = 1.0 + p.norm();
        let h = if k == 1 { 1e-5 * scale } else { 10f64.powf(-12.0 / (k as f64 + 2.0)) * scale };
        let bx = binomial_row(dx);
        let by = binomial_row(dy);
        let mut sum = 0.0;
        for i in 0..=dx {
            for j in 0..=dy {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let q = Point::new(
                    p.x + (dx as f64 - 2.0 * i as f64) * h,
                    p.y + (dy as f64 - 2.0 * j as f64) * h,
                );
                sum += sign * bx[i] * by[j] * (self.0)(q);
            }
        }
        Ok(sum / (2.0 * h).powi(k as i32))
    }
}
