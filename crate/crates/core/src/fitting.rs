//! Nodal derivative estimates from function values alone: a weighted
//! least-squares quadratic (or cubic) through each node, fitted to the
//! values at nearby nodes.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::jets::Jet;
use crate::shepard::{compute_radii, NodeSet};

/// Above this estimated condition number of the equilibrated normal matrix
/// the fit is redone by SVD of the weighted design matrix.
pub const NORMAL_COND_LIMIT: f64 = 1e12;

/// Relative singular value threshold for the SVD fallback.
const RANK_TOL: f64 = 1e-13;

/// Monomial exponents `(r, s)` with `1 <= r + s <= degree`, grouped by total
/// degree and within a group by decreasing `r`.
pub fn monomials(degree: usize) -> Vec<(usize, usize)> {
    (1..=degree)
        .flat_map(|k| (0..=k).map(move |s| (k - s, s)))
        .collect()
}

/// Non-constant coefficients of the local polynomial
/// `f(V_i) + Σ c_rs (x - x_i)^r (y - y_i)^s`, in [`monomials`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct WlsCoefficients {
    pub degree: usize,
    pub center: usize,
    pub center_point: Point,
    pub coeffs: Vec<f64>,
}

impl WlsCoefficients {
    pub fn get(&self, r: usize, s: usize) -> Option<f64> {
        monomials(self.degree)
            .iter()
            .position(|&m| m == (r, s))
            .map(|k| self.coeffs[k])
    }
}

/// Radii enclosing `n_q` neighbours per node, as for the Shepard basis.
pub fn compute_rq_radii(nodes: &NodeSet, n_q: usize) -> Result<Vec<f64>> {
    if nodes.len() <= n_q {
        return Err(Error::arg(format!(
            "least-squares neighbourhood of {n_q} nodes needs more than {n_q} nodes, got {}",
            nodes.len()
        )));
    }
    compute_radii(nodes, n_q)
}

/// Weight of a neighbour at distance `d` from the centre for radius `r`:
/// `((r - d)_+ / (r d))^2`.
#[inline]
pub fn wls_weight(d: f64, r: f64) -> f64 {
    if d >= r {
        return 0.0;
    }
    let w = (r - d) / (r * d);
    w * w
}

#[inline]
fn basis_row(degree: usize, dx: f64, dy: f64, out: &mut Vec<f64>) {
    out.clear();
    for k in 1..=degree {
        for s in 0..=k {
            out.push(dx.powi((k - s) as i32) * dy.powi(s as i32));
        }
    }
}

pub fn wls_fit(i: usize, nodes: &NodeSet, values: &[f64], degree: usize, r_q: &[f64]) -> Result<WlsCoefficients> {
    if degree != 2 && degree != 3 {
        return Err(Error::arg(format!("fit degree must be 2 or 3, got {degree}")));
    }
    if values.len() != nodes.len() || r_q.len() != nodes.len() {
        return Err(Error::arg(format!(
            "{} values and {} radii for {} nodes",
            values.len(),
            r_q.len(),
            nodes.len()
        )));
    }
    let unknowns = monomials(degree).len();
    let center = nodes.point(i);
    let radius = r_q[i];
    let near = nodes.neighbors_within(i, radius);
    if near.len() < unknowns {
        return Err(Error::Fit {
            node: i,
            reason: format!("{} neighbours for {unknowns} coefficients", near.len()),
        });
    }

    let mut normal = DMatrix::<f64>::zeros(unknowns, unknowns);
    let mut rhs = DVector::<f64>::zeros(unknowns);
    let mut rows = Vec::with_capacity(near.len());
    let mut row = Vec::with_capacity(unknowns);
    for &(d, k) in &near {
        let p = nodes.point(k);
        basis_row(degree, p.x - center.x, p.y - center.y, &mut row);
        let w = wls_weight(d, radius);
        let target = values[k] - values[i];
        for a in 0..unknowns {
            rhs[a] += w * row[a] * target;
            for b in 0..=a {
                normal[(a, b)] += w * row[a] * row[b];
            }
        }
        rows.push((w, row.clone(), target));
    }
    for a in 0..unknowns {
        for b in 0..a {
            normal[(b, a)] = normal[(a, b)];
        }
    }

    // column equilibration
    let scale: Vec<f64> = (0..unknowns)
        .map(|a| {
            let d = normal[(a, a)];
            if d > 0.0 { 1.0 / d.sqrt() } else { 1.0 }
        })
        .collect();
    let mut scaled = normal.clone();
    for a in 0..unknowns {
        for b in 0..unknowns {
            scaled[(a, b)] *= scale[a] * scale[b];
        }
    }
    let scaled_rhs = DVector::from_iterator(unknowns, (0..unknowns).map(|a| rhs[a] * scale[a]));

    let eig = scaled.clone().symmetric_eigenvalues();
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v.abs())));
    let well_conditioned = lo > 0.0 && hi / lo <= NORMAL_COND_LIMIT;

    let solution = match (well_conditioned, scaled.clone().cholesky()) {
        (true, Some(chol)) => chol.solve(&scaled_rhs),
        _ => svd_solve(i, &rows, &scale, unknowns)?,
    };
    let coeffs: Vec<f64> = (0..unknowns).map(|a| solution[a] * scale[a]).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Fit { node: i, reason: "non-finite coefficients".into() });
    }
    Ok(WlsCoefficients { degree, center: i, center_point: center, coeffs })
}

fn svd_solve(node: usize, rows: &[(f64, Vec<f64>, f64)], scale: &[f64], unknowns: usize) -> Result<DVector<f64>> {
    let mut design = DMatrix::<f64>::zeros(rows.len(), unknowns);
    let mut target = DVector::<f64>::zeros(rows.len());
    for (r, (w, row, t)) in rows.iter().enumerate() {
        let sw = w.sqrt();
        for a in 0..unknowns {
            design[(r, a)] = sw * row[a] * scale[a];
        }
        target[r] = sw * t;
    }
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > RANK_TOL * smax) {
        return Err(Error::Fit {
            node,
            reason: format!("rank-deficient neighbourhood (singular values {smin:e} / {smax:e})"),
        });
    }
    svd.solve(&target, 0.0)
        .map_err(|e| Error::Fit { node, reason: e.to_string() })
}

/// Fits every node in parallel; results are in node order.
pub fn wls_fit_all(nodes: &NodeSet, values: &[f64], degree: usize, n_q: usize) -> Result<Vec<WlsCoefficients>> {
    let r_q = compute_rq_radii(nodes, n_q)?;
    (0..nodes.len())
        .into_par_iter()
        .map(|i| wls_fit(i, nodes, values, degree, &r_q))
        .collect()
}

/// Order-2 jet from fitted coefficients: first derivatives are the linear
/// coefficients, pure second derivatives twice the squared-term coefficients.
/// Cubic coefficients do not enter the jet.
pub fn coefficients_to_jet(c: &WlsCoefficients, f_value: f64) -> Result<Jet> {
    let get = |r, s| c.get(r, s).unwrap_or(0.0);
    Jet::from_table(
        c.center_point,
        2,
        vec![f_value, get(1, 0), get(0, 1), 2.0 * get(2, 0), get(1, 1), 2.0 * get(0, 2)],
    )
}
