//! The three-point generalized Taylor polynomial on a triangle, taken with
//! respect to a referring vertex `V1`.
//!
//! With barycentric coordinates `λ` and `s = λ2 + λ3` the polynomial is
//!
//! ```text
//! P(x) = f(V1) + Σ_j c_j S_j(s)/j!
//!      + Σ_{i+j <= m+1} e_ij · s^{i-1} S_i(λ2/s)/i! · S_j(s)/j!
//! ```
//!
//! where `c_j` and `e_ij` are differences of derivatives along the directed
//! sides, fixed once the data are known. [`GtPoly`] precomputes them.
//! `s^{i-1} S_i(λ2/s) S_j(s)` is a polynomial in `(λ2, s)`: the one negative
//! power of `s` cancels against the root of `S_j` at zero, so evaluation
//! never divides by `s`.

use crate::bernoulli::{ScaledShifted, MAX_INDEX};
use crate::error::{Error, Result};
use crate::geometry::{Point, Triangle};
use crate::jets::Jet;

/// Triangle plus jets at its three vertices; `v[0]` is the referring vertex.
#[derive(Debug, Clone)]
pub struct GtData {
    pub triangle: Triangle,
    pub jets: [Jet; 3],
    pub degree: usize,
}

impl GtData {
    pub fn new(triangle: Triangle, jets: [Jet; 3], degree: usize) -> Result<Self> {
        let data = Self { triangle, jets, degree };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::arg("polynomial degree must be at least 1"));
        }
        if self.triangle.is_degenerate() {
            return Err(Error::Geometry(format!(
                "triangle {:?} has (near) zero area",
                self.triangle.v
            )));
        }
        let r = self.triangle.longest_side();
        for (k, jet) in self.jets.iter().enumerate() {
            if jet.order() + 1 < self.degree {
                return Err(Error::arg(format!(
                    "degree {} needs jets of order {}, vertex {} has order {}",
                    self.degree,
                    self.degree - 1,
                    k + 1,
                    jet.order()
                )));
            }
            if jet.center().dist(self.triangle.v[k]) > 1e-12 * r {
                return Err(Error::arg(format!("jet {} is not centered at its vertex", k + 1)));
            }
        }
        Ok(())
    }
}

/// Compiled form of [`GtData`] ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct GtPoly {
    triangle: Triangle,
    area: f64,
    degree: usize,
    f1: f64,
    // c[j-1], j = 1..=m
    side_terms: Vec<f64>,
    // e[i-1][j-1], 1 <= j <= m - i + 1
    cross_terms: Vec<Vec<f64>>,
    shifted: ScaledShifted,
}

impl GtPoly {
    pub fn new(data: &GtData) -> Result<Self> {
        data.validate()?;
        let m = data.degree;
        let [v1, v2, v3] = data.triangle.v;
        let [j1, j2, j3] = &data.jets;

        let d31 = v3 - v1;
        let zero = Point::default();
        let mut side_terms = Vec::with_capacity(m);
        for j in 1..=m {
            let at3 = j3.directional_derivative(zero, d31, 0, j - 1)?;
            let at1 = j1.directional_derivative(zero, d31, 0, j - 1)?;
            side_terms.push(at3 - at1);
        }

        // D_2^(a,b) = D_12^a D_32^b, D_3^(a,b) = D_13^a D_23^b
        let (d12, d32) = (v1 - v2, v3 - v2);
        let (d13, d23) = (v1 - v3, v2 - v3);
        let mut cross_terms = Vec::with_capacity(m);
        for i in 1..=m {
            let mut row = Vec::with_capacity(m - i + 1);
            for j in 1..=(m - i + 1) {
                let (a, b) = (j - 1, i - 1);
                let t2 = j2.directional_derivative(d12, d32, a, b)?
                    - j1.directional_derivative(d12, d32, a, b)?;
                let t3 = j3.directional_derivative(d13, d23, a, b)?
                    - j1.directional_derivative(d13, d23, a, b)?;
                row.push(sign(i + j) * t2 + sign(j) * t3);
            }
            cross_terms.push(row);
        }

        Ok(Self {
            triangle: data.triangle,
            area: data.triangle.signed_area(),
            degree: m,
            f1: j1.value(),
            side_terms,
            cross_terms,
            shifted: ScaledShifted::new(m)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn triangle(&self) -> &Triangle {
        &self.triangle
    }

    /// Evaluates the polynomial at any point of the plane.
    pub fn eval(&self, p: Point) -> f64 {
        let [a, b, c] = self.triangle.v;
        let l2 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / self.area;
        let l3 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / self.area;
        self.eval_bary(l2, l3)
    }

    fn eval_bary(&self, l2: f64, l3: f64) -> f64 {
        let m = self.degree;
        let s = l2 + l3;
        let tab = &self.shifted;

        // S_j(s)/j! and S_j(s)/(j! s)
        let mut sj = [0.0; MAX_INDEX];
        let mut sj_over = [0.0; MAX_INDEX];
        for j in 1..=m {
            sj_over[j - 1] = tab.eval_over_t(j, s);
            sj[j - 1] = sj_over[j - 1] * s;
        }

        let mut value = self.f1;
        for j in 1..=m {
            value += self.side_terms[j - 1] * sj[j - 1];
        }
        for i in 1..=m {
            // s^{i-1} S_i(λ2/s)/i! = Σ_{k<i} a_k λ2^k s^{i-1-k} + a_i λ2^i / s
            let mut regular = 0.0;
            let mut l2_pow = 1.0;
            for k in 1..i {
                l2_pow *= l2;
                regular += tab.coeff(i, k) * l2_pow * s.powi((i - 1 - k) as i32);
            }
            let top = tab.coeff(i, i) * l2_pow * l2;
            for j in 1..=(m - i + 1) {
                let g = regular * sj[j - 1] + top * sj_over[j - 1];
                value += self.cross_terms[i - 1][j - 1] * g;
            }
        }
        value
    }
}

#[inline]
fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One-shot evaluation of the generalized Taylor polynomial.
pub fn gt_eval(data: &GtData, p: Point) -> Result<f64> {
    Ok(GtPoly::new(data)?.eval(p))
}

/// Difference between the generalized Taylor polynomial and the ordinary
/// Taylor polynomial of order `m` at the referring vertex.
pub fn gt_minus_taylor(data: &GtData, full_jet_v1: &Jet, p: Point) -> Result<f64> {
    if full_jet_v1.order() < data.degree {
        return Err(Error::arg(format!(
            "Taylor jet needs order {}, got {}",
            data.degree,
            full_jet_v1.order()
        )));
    }
    let r = data.triangle.longest_side();
    if full_jet_v1.center().dist(data.triangle.v[0]) > 1e-12 * r {
        return Err(Error::arg("Taylor jet is not centered at the referring vertex"));
    }
    let taylor = full_jet_v1.truncated(data.degree)?.taylor_eval(p);
    Ok(gt_eval(data, p)? - taylor)
}

/// The symmetric quadratic element: Lagrange interpolant plus one
/// `λ_a λ_b` correction per side.
pub fn quadratic_element_eval(data: &GtData, p: Point) -> Result<f64> {
    if data.degree != 2 {
        return Err(Error::arg(format!(
            "quadratic element needs degree 2 data, got degree {}",
            data.degree
        )));
    }
    data.validate()?;
    let [v1, v2, v3] = data.triangle.v;
    let [j1, j2, j3] = &data.jets;
    let [l1, l2, l3] = data.triangle.barycentric(p)?;
    let zero = Point::default();
    let along = |jet: &Jet, dir: Point| jet.directional_derivative(dir, zero, 1, 0);

    let lagrange = l1 * j1.value() + l2 * j2.value() + l3 * j3.value();
    let e12 = 0.5 * l1 * l2 * (along(j2, v1 - v2)? - along(j1, v1 - v2)?);
    let e13 = 0.5 * l1 * l3 * (along(j1, v3 - v1)? - along(j3, v3 - v1)?);
    let e23 = 0.5 * l2 * l3 * (along(j3, v2 - v3)? - along(j2, v2 - v3)?);
    Ok(lagrange + e12 + e13 + e23)
}
