//! The ten standard scattered-data test functions on the unit square, with
//! exact partial derivatives.
//!
//! Each function is written once over truncated bivariate Taylor series, so
//! the partials up to the requested order come out of the same expression
//! that produces the value.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::jets::{jet_len, Differentiable, Jet};

/// Highest derivative order the test functions provide.
pub const MAX_ORDER: usize = 6;

/// Truncated Taylor series in `(dx, dy)` about a point. Coefficient layout
/// matches [`Jet`]: grouped by total degree, then by the power of `dy`.
#[derive(Debug, Clone)]
struct Series {
    order: usize,
    c: Vec<f64>,
}

#[inline]
fn slot(a: usize, b: usize) -> usize {
    let k = a + b;
    k * (k + 1) / 2 + b
}

impl Series {
    fn constant(order: usize, v: f64) -> Self {
        let mut c = vec![0.0; jet_len(order)];
        c[0] = v;
        Self { order, c }
    }

    fn var_x(order: usize, x: f64) -> Self {
        let mut s = Self::constant(order, x);
        if order > 0 {
            s.c[slot(1, 0)] = 1.0;
        }
        s
    }

    fn var_y(order: usize, y: f64) -> Self {
        let mut s = Self::constant(order, y);
        if order > 0 {
            s.c[slot(0, 1)] = 1.0;
        }
        s
    }

    fn value(&self) -> f64 {
        self.c[0]
    }

    fn add(&self, o: &Series) -> Series {
        Series { order: self.order, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    fn sub(&self, o: &Series) -> Series {
        Series { order: self.order, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    fn scale(&self, k: f64) -> Series {
        Series { order: self.order, c: self.c.iter().map(|a| a * k).collect() }
    }

    fn shift(&self, k: f64) -> Series {
        let mut s = self.clone();
        s.c[0] += k;
        s
    }

    /// `k * self + b`
    fn affine(&self, k: f64, b: f64) -> Series {
        self.scale(k).shift(b)
    }

    fn mul(&self, o: &Series) -> Series {
        let q = self.order;
        let mut c = vec![0.0; self.c.len()];
        for k1 in 0..=q {
            for b1 in 0..=k1 {
                let v1 = self.c[slot(k1 - b1, b1)];
                if v1 == 0.0 {
                    continue;
                }
                for k2 in 0..=(q - k1) {
                    for b2 in 0..=k2 {
                        c[slot(k1 - b1 + k2 - b2, b1 + b2)] += v1 * o.c[slot(k2 - b2, b2)];
                    }
                }
            }
        }
        Series { order: q, c }
    }

    fn square(&self) -> Series {
        self.mul(self)
    }

    /// `g(self)` given `derivs[k] = g^(k)(self.value())`.
    fn compose(&self, derivs: &[f64]) -> Series {
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let mut out = Series::constant(self.order, derivs[0]);
        let mut power = Series::constant(self.order, 1.0);
        let mut factorial = 1.0;
        for (k, d) in derivs.iter().enumerate().take(self.order + 1).skip(1) {
            power = power.mul(&delta);
            factorial *= k as f64;
            out = out.add(&power.scale(d / factorial));
        }
        out
    }

    fn exp(&self) -> Series {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    fn sin(&self) -> Series {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    fn cos(&self) -> Series {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    /// `self^alpha` for real `alpha`; needs a positive base unless `alpha`
    /// is a non-negative integer.
    fn powf(&self, alpha: f64) -> Result<Series> {
        let u = self.value();
        let integral = alpha >= 0.0 && alpha.fract() == 0.0;
        if !integral && (u < 0.0 || (u == 0.0 && self.order > 0)) {
            return Err(Error::Evaluator(format!("power {alpha} of non-positive base {u}")));
        }
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut coef = 1.0;
        for k in 0..=self.order {
            derivs.push(if coef == 0.0 { 0.0 } else { coef * u.powf(alpha - k as f64) });
            coef *= alpha - k as f64;
        }
        Ok(self.compose(&derivs))
    }

    fn recip(&self) -> Result<Series> {
        let u = self.value();
        if u == 0.0 {
            return Err(Error::Evaluator("reciprocal of zero".into()));
        }
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut d = 1.0 / u;
        for k in 0..=self.order {
            derivs.push(d);
            d *= -((k + 1) as f64) / u;
        }
        Ok(self.compose(&derivs))
    }

    fn tanh(&self) -> Result<Series> {
        // 1 - 2 / (exp(2u) + 1)
        Ok(self.scale(2.0).exp().shift(1.0).recip()?.scale(-2.0).shift(1.0))
    }

    fn partial(&self, a: usize, b: usize) -> f64 {
        self.c[slot(a, b)] * factorial(a) * factorial(b)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// One of the ten test functions, identified by `1..=10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestFunction {
    id: usize,
}

impl TestFunction {
    pub fn new(id: usize) -> Result<Self> {
        if !(1..=10).contains(&id) {
            return Err(Error::arg(format!("test function id must be in 1..=10, got {id}")));
        }
        Ok(Self { id })
    }

    pub fn all() -> Vec<TestFunction> {
        (1..=10).map(|id| TestFunction { id }).collect()
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn name(&self) -> &'static str {
        [
            "exponential", "cliff", "saddle", "gentle", "steep", "sphere", "trig", "gaussian", "cloverleaf",
            "cosine-peak",
        ][self.id - 1]
    }

    fn series(&self, p: Point, order: usize) -> Result<Series> {
        let x = Series::var_x(order, p.x);
        let y = Series::var_y(order, p.y);
        let s = match self.id {
            1 => {
                let x9 = x.scale(9.0);
                let y9 = y.scale(9.0);
                let t1 = x9.shift(-2.0).square().add(&y9.shift(-2.0).square()).scale(-0.25).exp().scale(0.75);
                let t2 = x9.shift(1.0).square().scale(-1.0 / 49.0).sub(&y9.shift(1.0).scale(0.1)).exp().scale(0.75);
                let t3 = x9.shift(-7.0).square().add(&y9.shift(-3.0).square()).scale(-0.25).exp().scale(0.5);
                let t4 = x9.shift(-4.0).square().add(&y9.shift(-7.0).square()).scale(-1.0).exp().scale(0.2);
                t1.add(&t2).add(&t3).sub(&t4)
            }
            2 => y.sub(&x).scale(9.0).tanh()?.shift(1.0).scale(1.0 / 9.0),
            3 => {
                let num = y.scale(5.4).cos().shift(1.25);
                let den = x.affine(3.0, -1.0).square().shift(1.0).scale(6.0);
                num.mul(&den.recip()?)
            }
            4 | 5 => {
                let k = if self.id == 4 { -81.0 / 16.0 } else { -81.0 / 4.0 };
                centered_r2(&x, &y).scale(k).exp().scale(1.0 / 3.0)
            }
            6 => centered_r2(&x, &y).affine(-81.0, 64.0).powf(0.5)?.scale(1.0 / 9.0).shift(-0.5),
            7 => {
                let a = x.scale(10.0).cos().mul(&y.scale(10.0).sin()).scale(2.0);
                a.add(&x.mul(&y).scale(10.0).sin())
            }
            8 => {
                let t3 = x.affine(-10.0, 5.0).square().scale(-0.5).exp();
                let t4 = y.affine(-10.0, 5.0).square().scale(-0.5).exp();
                t3.add(&t4.mul(&t3.shift(1.0)).scale(0.75))
            }
            9 => {
                let t1 = x.affine(-20.0 / 3.0, 10.0 / 3.0).exp();
                let t2 = y.affine(-20.0 / 3.0, 10.0 / 3.0).exp();
                let t3 = t1.shift(1.0).recip()?;
                let t4 = t2.shift(1.0).recip()?;
                let k = (20.0f64 / 3.0).powi(3);
                let lead = t1.mul(&t2).scale(k).square();
                let t34 = t3.mul(&t4);
                let t34_5 = t34.square().square().mul(&t34);
                lead.mul(&t34_5).mul(&t1.sub(&t3.scale(2.0))).mul(&t2.sub(&t4.scale(2.0)))
            }
            10 => {
                let r2 = x.affine(80.0, -40.0).square().add(&y.affine(90.0, -45.0).square());
                let r = r2.powf(0.5)?;
                r.scale(-0.04).exp().mul(&r.scale(0.15).cos())
            }
            _ => unreachable!("id validated on construction"),
        };
        Ok(s)
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.series(p, 0).map_or(f64::NAN, |s| s.value())
    }

    /// Jet of partial derivatives up to `order` at `p`.
    pub fn jet(&self, p: Point, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::arg(format!("test functions provide derivatives up to order {MAX_ORDER}")));
        }
        let s = self.series(p, order)?;
        Jet::from_fn(p, order, |a, b| s.partial(a, b))
    }
}

fn centered_r2(x: &Series, y: &Series) -> Series {
    x.shift(-0.5).square().add(&y.shift(-0.5).square())
}

impl Differentiable for TestFunction {
    fn partial(&self, p: Point, dx: usize, dy: usize) -> Result<f64> {
        let order = dx + dy;
        if order > MAX_ORDER {
            return Err(Error::arg(format!("test functions provide derivatives up to order {MAX_ORDER}")));
        }
        Ok(self.series(p, order)?.partial(dx, dy))
    }
}

/// Polynomial `Σ c x^a y^b` with exact partials; handy for exactness checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(f64, usize, usize)>,
}

impl Polynomial {
    pub fn monomial(a: usize, b: usize) -> Self {
        Self { terms: vec![(1.0, a, b)] }
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.terms
            .iter()
            .map(|&(c, a, b)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
            .sum()
    }
}

fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        ((n - k + 1)..=n).map(|v| v as f64).product()
    }
}

impl Differentiable for Polynomial {
    fn partial(&self, p: Point, dx: usize, dy: usize) -> Result<f64> {
        Ok(self
            .terms
            .iter()
            .filter(|&&(_, a, b)| a >= dx && b >= dy)
            .map(|&(c, a, b)| {
                c * falling(a, dx) * falling(b, dy) * p.x.powi((a - dx) as i32) * p.y.powi((b - dy) as i32)
            })
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn franke_peak_value() {
        // f1 at (0.5, 0.5) by direct evaluation of the four exponentials
        let (x, y) = (0.5f64, 0.5f64);
        let want = 0.75 * (-((9.0 * x - 2.0).powi(2) + (9.0 * y - 2.0).powi(2)) / 4.0).exp()
            + 0.75 * (-(9.0 * x + 1.0).powi(2) / 49.0 - (9.0 * y + 1.0) / 10.0).exp()
            + 0.5 * (-((9.0 * x - 7.0).powi(2) + (9.0 * y - 3.0).powi(2)) / 4.0).exp()
            - 0.2 * (-(9.0 * x - 4.0).powi(2) - (9.0 * y - 7.0).powi(2)).exp();
        let f1 = TestFunction::new(1).unwrap();
        assert_relative_eq!(f1.eval(Point::new(x, y)), want, max_relative = 1e-14);
    }

    #[test]
    fn franke_jet_matches_hand_derivatives() {
        // second-order partials of f1 at (0.5, 0.5), differentiated by hand term by term
        let p = Point::new(0.5, 0.5);
        let (x, y) = (p.x, p.y);
        let mut want = [0.0; 6];
        // gaussian terms c * exp(-(a(9x-x0)^2 + b(9y-y0)^2))
        for (c, a, x0, b, y0) in [(0.75, 0.25, 2.0, 0.25, 2.0), (0.5, 0.25, 7.0, 0.25, 3.0), (-0.2, 1.0, 4.0, 1.0, 7.0)] {
            let u = 9.0 * x - x0;
            let v = 9.0 * y - y0;
            let e = c * (-(a * u * u + b * v * v)).exp();
            let gx = -2.0 * a * u * 9.0;
            let gy = -2.0 * b * v * 9.0;
            want[0] += e;
            want[1] += e * gx;
            want[2] += e * gy;
            want[3] += e * (gx * gx - 2.0 * a * 81.0);
            want[4] += e * gx * gy;
            want[5] += e * (gy * gy - 2.0 * b * 81.0);
        }
        let u = 9.0 * x + 1.0;
        let e = 0.75 * (-(u * u) / 49.0 - (9.0 * y + 1.0) / 10.0).exp();
        let gx = -2.0 * u * 9.0 / 49.0;
        let gy = -0.9;
        want[0] += e;
        want[1] += e * gx;
        want[2] += e * gy;
        want[3] += e * (gx * gx - 162.0 / 49.0);
        want[4] += e * gx * gy;
        want[5] += e * gy * gy;

        let jet = TestFunction::new(1).unwrap().jet(p, 2).unwrap();
        for (g, w) in jet.table().iter().zip(want) {
            assert_relative_eq!(*g, w, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn partials_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let steps = [1e-2, 5e-3, 2.5e-3];
        let (mut checked, mut flat) = (0, 0);
        for f in TestFunction::all() {
            for _ in 0..20 {
                let p = Point::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
                let jet = f.jet(p, 5).unwrap();
                // each partial of order k checked against a central difference of an order k-1 partial
                for (a, b) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)] {
                    let (da, db) = if a > 0 { (1, 0) } else { (0, 1) };
                    let lower = |q: Point| f.partial(q, a - da, b - db).unwrap();
                    let exact = jet.get(a, b).unwrap();
                    let errs: Vec<f64> = steps
                        .iter()
                        .map(|&h| {
                            let e = Point::new(da as f64 * h, db as f64 * h);
                            ((lower(p + e) - lower(p - e)) / (2.0 * h) - exact).abs()
                        })
                        .collect();
                    let scale = exact.abs().max(1.0);
                    assert!(errs[2] <= errs[0], "f{} d({a},{b}) at {p:?}: {errs:?}", f.id());
                    // the h^2 term vanishes where the third derivative along the step does
                    let leading = jet.get(a + 2 * da, b + 2 * db).unwrap().abs() * steps[0].powi(2) / 6.0;
                    if errs[0] < 1e-9 * scale || leading < 0.25 * errs[0] {
                        flat += 1;
                        continue;
                    }
                    checked += 1;
                    let slope = (errs[0] / errs[2]).log2() / 2.0;
                    assert!(
                        (1.7..=2.3).contains(&slope),
                        "f{} d({a},{b}) at {p:?}: slope {slope}, errs {errs:?}",
                        f.id()
                    );
                }
            }
        }
        assert!(flat * 20 < checked, "{flat} degenerate cases against {checked} checked");
    }

    #[test]
    fn sphere_singularity_reported() {
        let f10 = TestFunction::new(10).unwrap();
        assert!(f10.jet(Point::new(0.5, 0.5), 1).is_err());
        assert!(f10.jet(Point::new(0.5, 0.5), 0).is_ok());
        assert!(TestFunction::new(0).is_err());
        assert!(TestFunction::new(11).is_err());
    }

    #[test]
    fn polynomial_partials() {
        let p = Polynomial { terms: vec![(2.0, 3, 1), (-1.0, 0, 2)] };
        let q = Point::new(0.5, -2.0);
        assert_relative_eq!(p.partial(q, 0, 0).unwrap(), 2.0 * 0.125 * -2.0 - 4.0);
        assert_relative_eq!(p.partial(q, 2, 1).unwrap(), 2.0 * 6.0 * 0.5);
        assert_relative_eq!(p.partial(q, 0, 2).unwrap(), -2.0);
        assert_eq!(p.partial(q, 4, 0).unwrap(), 0.0);
    }
}
