//! Combined Shepard operators: a compactly supported Shepard blend of local
//! polynomials, one per node.
//!
//! In Bernoulli mode the local polynomial of node `i` is the generalized
//! Taylor polynomial on the node's associated triangle; in Taylor mode it
//! is the ordinary Taylor polynomial at the node.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::assoc::{assign_all, TriangleAssignment};
use crate::error::{Error, Result};
use crate::fitting::{coefficients_to_jet, wls_fit_all};
use crate::geometry::{Point, Triangle};
use crate::gtpoly::{GtData, GtPoly};
use crate::jets::{jet_from_callable, Differentiable, Jet};
use crate::shepard::{basis, compute_radii, LocalSupport, NodeSet};

/// Largest operator degree accepted by [`Config::validate`].
pub const MAX_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bernoulli,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSource {
    /// Derivatives supplied with the data.
    Analytic,
    /// Weighted least-squares quadratic through each node.
    WlsQuadratic,
    /// Weighted least-squares cubic through each node.
    WlsCubic,
}

/// What to do at points no support disk covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    Error,
    Nearest,
}

macro_rules! text_enum {
    ($ty:ty { $($variant:path => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($variant),)+
                    other => Err(Error::arg(format!(
                        "unknown {} '{other}'", stringify!($ty).to_lowercase()
                    ))),
                }
            }
        }
    };
}

text_enum!(Mode { Mode::Bernoulli => "bernoulli", Mode::Taylor => "taylor" });
text_enum!(JetSource {
    JetSource::Analytic => "analytic",
    JetSource::WlsQuadratic => "wls-quadratic",
    JetSource::WlsCubic => "wls-cubic",
});
text_enum!(Fallback { Fallback::Error => "error", Fallback::Nearest => "nearest" });

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub degree: usize,
    pub mu: f64,
    pub n_w: usize,
    /// Least-squares neighbourhood size; `None` picks 13 for quadratic and
    /// 17 for cubic fits.
    pub n_q: Option<usize>,
    pub mode: Mode,
    pub jet_source: JetSource,
    pub fallback: Fallback,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            degree: 3,
            mu: 2.0,
            n_w: 9,
            n_q: None,
            mode: Mode::Bernoulli,
            jet_source: JetSource::Analytic,
            fallback: Fallback::Error,
        }
    }
}

impl Config {
    pub fn bernoulli(degree: usize) -> Self {
        Self { degree, ..Self::default() }
    }

    pub fn taylor(degree: usize) -> Self {
        Self { degree, mode: Mode::Taylor, ..Self::default() }
    }

    pub fn with_jet_source(mut self, source: JetSource) -> Self {
        self.jet_source = source;
        self
    }

    pub fn with_fallback(mut self, fallback: Fallback) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn with_n_w(mut self, n_w: usize) -> Self {
        self.n_w = n_w;
        self
    }

    pub fn with_n_q(mut self, n_q: usize) -> Self {
        self.n_q = Some(n_q);
        self
    }

    /// Jet order each node must carry.
    pub fn jet_order(&self) -> usize {
        match self.mode {
            Mode::Bernoulli => self.degree - 1,
            Mode::Taylor => self.degree,
        }
    }

    pub fn effective_n_q(&self) -> usize {
        self.n_q.unwrap_or(match self.jet_source {
            JetSource::WlsCubic => 17,
            _ => 13,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.degree > MAX_DEGREE {
            return Err(Error::arg(format!("degree must be in 1..={MAX_DEGREE}, got {}", self.degree)));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::arg(format!("exponent mu must be positive, got {}", self.mu)));
        }
        if self.n_w == 0 {
            return Err(Error::arg("n_w must be at least 1"));
        }
        if self.jet_source != JetSource::Analytic && self.jet_order() > 2 {
            return Err(Error::arg(format!(
                "{} mode of degree {} needs order-{} derivatives, least-squares fits supply order 2",
                self.mode,
                self.degree,
                self.jet_order()
            )));
        }
        Ok(())
    }
}

/// Data attached to the nodes.
#[derive(Debug, Clone)]
pub enum NodalData {
    /// Function values only; derivatives are fitted.
    Values(Vec<f64>),
    /// Values and partial derivatives.
    Jets(Vec<Jet>),
}

#[derive(Debug, Clone)]
enum LocalPoly {
    Gt(GtPoly),
    Taylor(Jet),
}

impl LocalPoly {
    #[inline]
    fn eval(&self, p: Point) -> f64 {
        match self {
            LocalPoly::Gt(g) => g.eval(p),
            LocalPoly::Taylor(j) => j.taylor_eval(p),
        }
    }
}

/// Fitted, immutable interpolant.
#[derive(Debug, Clone)]
pub struct Interpolant {
    nodes: NodeSet,
    support: LocalSupport,
    config: Config,
    jets: Vec<Jet>,
    assignments: Option<Vec<TriangleAssignment>>,
    local: Vec<LocalPoly>,
}

impl Interpolant {
    pub fn build(nodes: NodeSet, data: NodalData, config: &Config) -> Result<Self> {
        config.validate()?;
        if nodes.len() < 3 {
            return Err(Error::arg(format!("need at least 3 nodes, got {}", nodes.len())));
        }
        let jets = match (data, config.jet_source) {
            (NodalData::Jets(jets), JetSource::Analytic) => {
                if jets.len() != nodes.len() {
                    return Err(Error::arg(format!("{} jets for {} nodes", jets.len(), nodes.len())));
                }
                jets
            }
            (NodalData::Values(values), JetSource::WlsQuadratic | JetSource::WlsCubic) => {
                if values.len() != nodes.len() {
                    return Err(Error::arg(format!("{} values for {} nodes", values.len(), nodes.len())));
                }
                let degree = if config.jet_source == JetSource::WlsCubic { 3 } else { 2 };
                let fits = wls_fit_all(&nodes, &values, degree, config.effective_n_q())?;
                fits.iter()
                    .zip(&values)
                    .map(|(c, v)| coefficients_to_jet(c, *v))
                    .collect::<Result<_>>()?
            }
            (NodalData::Values(_), JetSource::Analytic) => {
                return Err(Error::arg("analytic jet source needs derivative data"));
            }
            (NodalData::Jets(_), _) => {
                return Err(Error::arg("least-squares jet sources take function values, not jets"));
            }
        };
        let support = LocalSupport::new(config.mu, compute_radii(&nodes, config.n_w)?)?;
        let assignments = match config.mode {
            Mode::Bernoulli => Some(assign_all(&nodes, &support)?),
            Mode::Taylor => None,
        };
        Self::from_parts(nodes, support, config.clone(), jets, assignments)
    }

    /// Samples `f` at the nodes: full jets for the analytic source, values
    /// otherwise.
    pub fn from_function(nodes: NodeSet, f: &dyn Differentiable, config: &Config) -> Result<Self> {
        config.validate()?;
        let data = match config.jet_source {
            JetSource::Analytic => NodalData::Jets(
                nodes
                    .points()
                    .iter()
                    .map(|p| jet_from_callable(f, *p, config.jet_order()))
                    .collect::<Result<_>>()?,
            ),
            _ => NodalData::Values(nodes.points().iter().map(|p| f.value(*p)).collect::<Result<_>>()?),
        };
        Self::build(nodes, data, config)
    }

    /// Assembles an interpolant from precomputed components, e.g. a stored
    /// model. Jets are truncated to the order the configuration needs.
    pub fn from_parts(
        nodes: NodeSet,
        support: LocalSupport,
        config: Config,
        jets: Vec<Jet>,
        assignments: Option<Vec<TriangleAssignment>>,
    ) -> Result<Self> {
        config.validate()?;
        let n = nodes.len();
        if jets.len() != n || support.radii.len() != n {
            return Err(Error::arg(format!(
                "{} jets and {} radii for {n} nodes",
                jets.len(),
                support.radii.len()
            )));
        }
        let order = config.jet_order();
        let jets: Vec<Jet> = jets
            .iter()
            .enumerate()
            .map(|(i, j)| {
                if j.center() != nodes.point(i) {
                    return Err(Error::arg(format!("jet {i} is not centered at its node")));
                }
                j.truncated(order)
            })
            .collect::<Result<_>>()?;

        let local = match (config.mode, &assignments) {
            (Mode::Bernoulli, Some(assign)) => {
                if assign.len() != n {
                    return Err(Error::arg(format!("{} assignments for {n} nodes", assign.len())));
                }
                assign
                    .par_iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if a.node != i {
                            return Err(Error::Association { node: i, reason: "assignment out of order".into() });
                        }
                        let (j, k) = a.others;
                        let tri = Triangle::new(nodes.point(i), nodes.point(j), nodes.point(k));
                        let data = GtData::new(tri, [jets[i].clone(), jets[j].clone(), jets[k].clone()], config.degree)?;
                        Ok(LocalPoly::Gt(GtPoly::new(&data)?))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            (Mode::Taylor, None) => jets.iter().cloned().map(LocalPoly::Taylor).collect(),
            (Mode::Bernoulli, None) => return Err(Error::arg("Bernoulli mode needs triangle assignments")),
            (Mode::Taylor, Some(_)) => return Err(Error::arg("Taylor mode takes no triangle assignments")),
        };
        Ok(Self { nodes, support, config, jets, assignments, local })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn support(&self) -> &LocalSupport {
        &self.support
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn jets(&self) -> &[Jet] {
        &self.jets
    }

    pub fn assignments(&self) -> Option<&[TriangleAssignment]> {
        self.assignments.as_deref()
    }

    /// Value of node `i`'s local polynomial at `p`.
    pub fn local_eval(&self, i: usize, p: Point) -> f64 {
        self.local[i].eval(p)
    }

    pub fn eval(&self, p: Point) -> Result<f64> {
        match basis(p, &self.nodes, &self.support) {
            Ok(weights) => Ok(weights.iter().map(|&(k, w)| w * self.local[k].eval(p)).sum()),
            Err(Error::Coverage(_)) if self.config.fallback == Fallback::Nearest => {
                let (_, k) = self.nodes.k_nearest(p, 1, None)[0];
                Ok(self.local[k].eval(p))
            }
            Err(e) => Err(e),
        }
    }

    /// Row-major table, `out[row * nx + col]` at `grid.point(col, row)`.
    pub fn eval_grid(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        grid.validate()?;
        let rows: Vec<Vec<f64>> = (0..grid.ny)
            .into_par_iter()
            .map(|row| (0..grid.nx).map(|col| self.eval(grid.point(col, row))).collect())
            .collect::<Result<_>>()?;
        Ok(rows.concat())
    }

    pub fn max_error(&self, truth: &dyn Fn(Point) -> f64, grid: &GridSpec) -> Result<ErrorStats> {
        let values = self.eval_grid(grid)?;
        let mut stats = ErrorStats { max_abs: 0.0, arg: grid.point(0, 0), rms: 0.0 };
        let mut sum_sq = 0.0;
        for row in 0..grid.ny {
            for col in 0..grid.nx {
                let p = grid.point(col, row);
                let err = (values[row * grid.nx + col] - truth(p)).abs();
                sum_sq += err * err;
                if err > stats.max_abs || err.is_nan() {
                    stats.max_abs = err;
                    stats.arg = p;
                }
            }
        }
        stats.rms = (sum_sq / values.len() as f64).sqrt();
        Ok(stats)
    }
}

/// Rectangular evaluation grid including both end points in each direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn unit_square(nx: usize, ny: usize) -> Self {
        Self { x_range: (0.0, 1.0), y_range: (0.0, 1.0), nx, ny }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::arg(format!("grid needs at least 2x2 points, got {}x{}", self.nx, self.ny)));
        }
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.x_range) || !ok(self.y_range) {
            return Err(Error::arg(format!("invalid grid ranges {:?} x {:?}", self.x_range, self.y_range)));
        }
        Ok(())
    }

    pub fn point(&self, col: usize, row: usize) -> Point {
        let t = |(a, b): (f64, f64), k: usize, n: usize| a + (b - a) * k as f64 / (n - 1) as f64;
        Point::new(t(self.x_range, col, self.nx), t(self.y_range, row, self.ny))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub max_abs: f64,
    pub arg: Point,
    pub rms: f64,
}
