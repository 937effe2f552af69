//! Bernoulli numbers and polynomials, the shifted polynomials
//! `S_n(t) = B_n(t) - B_n(0)`, and the univariate generalized Taylor
//! polynomial built on them.
//!
//! The polynomial table is generated once from the defining recurrence
//! `B_0 = 1`, `B_n' = n B_{n-1}`, `∫_0^1 B_n = 0` in exact rational
//! arithmetic and then rounded to `f64`.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest supported polynomial index.
pub const MAX_INDEX: usize = 30;

type Rational = Ratio<i128>;

/// Dense polynomial coefficients, `coeffs[k]` multiplies `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs(pub Vec<f64>);

impl PolyCoeffs {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Coefficient-wise derivative.
    pub fn derivative(&self) -> PolyCoeffs {
        if self.0.len() <= 1 {
            return PolyCoeffs(vec![0.0]);
        }
        PolyCoeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }
}

fn exact_table() -> &'static [Vec<Rational>] {
    static TABLE: OnceLock<Vec<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<Rational>> = Vec::with_capacity(MAX_INDEX + 1);
        table.push(vec![Rational::from_integer(1)]);
        for n in 1..=MAX_INDEX {
            let prev = &table[n - 1];
            let nr = Rational::from_integer(n as i128);
            // n * antiderivative of B_{n-1}, zero constant term for now
            let mut poly = vec![Rational::from_integer(0); n + 1];
            for (k, c) in prev.iter().enumerate() {
                poly[k + 1] = nr * *c / Rational::from_integer(k as i128 + 1);
            }
            // pick the constant so the mean over [0, 1] vanishes
            let mean: Rational = poly
                .iter()
                .enumerate()
                .map(|(k, c)| *c / Rational::from_integer(k as i128 + 1))
                .sum();
            poly[0] = -mean;
            table.push(poly);
        }
        table
    })
}

fn float_table() -> &'static [PolyCoeffs] {
    static TABLE: OnceLock<Vec<PolyCoeffs>> = OnceLock::new();
    TABLE.get_or_init(|| {
        exact_table()
            .iter()
            .map(|p| PolyCoeffs(p.iter().map(ratio_to_f64).collect()))
            .collect()
    })
}

fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_index(n: usize) -> Result<()> {
    if n > MAX_INDEX {
        return Err(Error::arg(format!(
            "Bernoulli index {n} exceeds the supported maximum {MAX_INDEX}"
        )));
    }
    Ok(())
}

/// Exact rational coefficients of `B_n(x)` as `(numerator, denominator)` pairs.
pub fn bernoulli_poly_exact(n: usize) -> Result<Vec<(i128, i128)>> {
    check_index(n)?;
    Ok(exact_table()[n]
        .iter()
        .map(|r| (*r.numer(), *r.denom()))
        .collect())
}

/// Bernoulli numbers `B_0, ..., B_{n_max}` with the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(n_max: usize) -> Result<Vec<f64>> {
    check_index(n_max)?;
    Ok(float_table()[..=n_max].iter().map(|p| p.0[0]).collect())
}

/// Coefficients of the Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize) -> Result<PolyCoeffs> {
    check_index(n)?;
    Ok(float_table()[n].clone())
}

/// `S_n(t) = B_n(t) - B_n(0)`; `S_0` is identically zero.
pub fn s_poly_eval(n: usize, t: f64) -> Result<f64> {
    check_index(n)?;
    Ok(shifted_eval(&float_table()[n].0, t))
}

fn shifted_eval(coeffs: &[f64], t: f64) -> f64 {
    // constant term dropped
    coeffs[1..].iter().rev().fold(0.0, |acc, &c| acc * t + c) * t
}

/// Precomputed `S_k(t) / k!` for `k = 1..=max_k`, used by the polynomial
/// evaluators in their inner loops.
#[derive(Debug, Clone)]
pub struct ScaledShifted {
    // scaled[k-1][l] multiplies t^(l+1), i.e. the polynomial divided by t
    scaled: Vec<Vec<f64>>,
}

impl ScaledShifted {
    pub fn new(max_k: usize) -> Result<Self> {
        check_index(max_k)?;
        let mut factorial = 1.0;
        let mut scaled = Vec::with_capacity(max_k);
        for k in 1..=max_k {
            factorial *= k as f64;
            let c = &float_table()[k].0;
            scaled.push(c[1..].iter().map(|v| v / factorial).collect());
        }
        Ok(Self { scaled })
    }

    pub fn max_k(&self) -> usize {
        self.scaled.len()
    }

    /// `S_k(t) / k!`.
    #[inline]
    pub fn eval(&self, k: usize, t: f64) -> f64 {
        self.eval_over_t(k, t) * t
    }

    /// `S_k(t) / (k! t)`, a polynomial because `S_k(0) = 0`.
    #[inline]
    pub fn eval_over_t(&self, k: usize, t: f64) -> f64 {
        self.scaled[k - 1]
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * t + c)
    }

    /// Coefficient of `t^l` in `S_k(t) / k!`, `1 <= l <= k`.
    #[inline]
    pub fn coeff(&self, k: usize, l: usize) -> f64 {
        self.scaled[k - 1][l - 1]
    }
}

/// Univariate generalized Taylor polynomial on `[a, b]` of degree `m`.
///
/// `derivs_a[k]` and `derivs_b[k]` hold `f^(k)` at the two end points for
/// `k = 0..m`. The polynomial is defined for any real `x`.
pub fn univariate_gt_eval(
    derivs_a: &[f64],
    derivs_b: &[f64],
    a: f64,
    b: f64,
    m: usize,
    x: f64,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::arg(format!("interval end points must satisfy a < b, got [{a}, {b}]")));
    }
    if m == 0 {
        return Err(Error::arg("degree must be at least 1"));
    }
    if derivs_a.len() != m || derivs_b.len() != m {
        return Err(Error::arg(format!(
            "expected {m} derivative values per end point, got {} and {}",
            derivs_a.len(),
            derivs_b.len()
        )));
    }
    let table = ScaledShifted::new(m)?;
    let h = b - a;
    let t = (x - a) / h;
    let mut value = derivs_a[0];
    let mut h_pow = 1.0;
    for k in 1..=m {
        value += table.eval(k, t) * h_pow * (derivs_b[k - 1] - derivs_a[k - 1]);
        h_pow *= h;
    }
    Ok(value)
}
