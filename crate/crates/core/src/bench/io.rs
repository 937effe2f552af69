//! CSV formats: node files, benchmark reports, plot tables and stored models.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value read back is bit-identical to the one written.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::runner::ErrorReport;
use crate::assoc::TriangleAssignment;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::interp::{Config, Interpolant, Mode};
use crate::jets::{jet_len, Jet};
use crate::shepard::{LocalSupport, NodeSet};

const DERIV_COLUMNS: [&str; 5] = ["fx", "fy", "fxx", "fxy", "fyy"];

/// Contents of a node file: coordinates, optionally values, optionally the
/// first and second partials `fx, fy, fxx, fxy, fyy`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeFile {
    pub points: Vec<Point>,
    pub values: Option<Vec<f64>>,
    pub derivs: Option<Vec<[f64; 5]>>,
}

impl NodeFile {
    /// Order-2 jets from the value and derivative columns.
    pub fn jets(&self) -> Result<Vec<Jet>> {
        let (Some(values), Some(derivs)) = (&self.values, &self.derivs) else {
            return Err(Error::arg("node file carries no derivative columns"));
        };
        self.points
            .iter()
            .zip(values.iter().zip(derivs))
            .map(|(p, (f, d))| Jet::from_table(*p, 2, vec![*f, d[0], d[1], d[2], d[3], d[4]]))
            .collect()
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let n = self.points.len();
        if self.values.as_ref().is_some_and(|v| v.len() != n) || self.derivs.as_ref().is_some_and(|d| d.len() != n) {
            return Err(Error::arg("node file columns have different lengths"));
        }
        if self.derivs.is_some() && self.values.is_none() {
            return Err(Error::arg("derivative columns need a value column"));
        }
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["x", "y"];
        if self.values.is_some() {
            header.push("f");
        }
        if self.derivs.is_some() {
            header.extend(DERIV_COLUMNS);
        }
        out.write_record(&header)?;
        for (i, p) in self.points.iter().enumerate() {
            let mut row = vec![p.x.to_string(), p.y.to_string()];
            if let Some(v) = &self.values {
                row.push(v[i].to_string());
            }
            if let Some(d) = &self.derivs {
                row.extend(d[i].iter().map(f64::to_string));
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut input = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
        let header: Vec<String> = input.headers()?.iter().map(str::to_string).collect();
        let width = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["x", "y"] => 2,
            ["x", "y", "f"] => 3,
            ["x", "y", "f", "fx", "fy", "fxx", "fxy", "fyy"] => 8,
            _ => {
                return Err(Error::Parse(format!(
                    "node file header must be x,y[,f[,fx,fy,fxx,fxy,fyy]], got {}",
                    header.join(",")
                )))
            }
        };
        let mut file = NodeFile {
            values: (width >= 3).then(Vec::new),
            derivs: (width == 8).then(Vec::new),
            ..Default::default()
        };
        for (line, record) in input.records().enumerate() {
            let record = record?;
            let row = parse_floats(&record, line + 2)?;
            if row.len() != width {
                return Err(Error::Parse(format!("line {}: expected {width} fields, got {}", line + 2, row.len())));
            }
            file.points.push(Point::new(row[0], row[1]));
            if let Some(v) = &mut file.values {
                v.push(row[2]);
            }
            if let Some(d) = &mut file.derivs {
                d.push([row[3], row[4], row[5], row[6], row[7]]);
            }
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write(fs::File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read(fs::File::open(path)?)
    }
}

fn parse_floats(record: &csv::StringRecord, line: usize) -> Result<Vec<f64>> {
    record
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("line {line}: '{s}' is not a number"))))
        .collect()
}

fn opt_to_string<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub const REPORT_HEADER: [&str; 11] =
    ["operator", "function", "kind", "n", "n_w", "n_q", "seed", "max_abs", "rms", "runtime", "error"];

pub fn write_report<W: Write>(w: W, rows: &[ErrorReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_HEADER)?;
    for r in rows {
        out.write_record([
            r.operator.clone(),
            r.function.to_string(),
            r.kind.to_string(),
            r.n.to_string(),
            r.n_w.to_string(),
            opt_to_string(&r.n_q),
            r.seed.to_string(),
            r.max_abs.to_string(),
            r.rms.to_string(),
            r.runtime.to_string(),
            opt_to_string(&r.error),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_report<R: Read>(r: R) -> Result<Vec<ErrorReport>> {
    let mut input = csv::Reader::from_reader(r);
    if input.headers()?.iter().collect::<Vec<_>>() != REPORT_HEADER {
        return Err(Error::Parse("unexpected report header".into()));
    }
    let parse_err = |what: &str, s: &str| Error::Parse(format!("bad {what} '{s}' in report"));
    input
        .records()
        .map(|rec| {
            let rec = rec?;
            let field = |k: usize| rec.get(k).unwrap_or("");
            let num = |k: usize| field(k).parse::<f64>().map_err(|_| parse_err(REPORT_HEADER[k], field(k)));
            let int = |k: usize| field(k).parse::<usize>().map_err(|_| parse_err(REPORT_HEADER[k], field(k)));
            Ok(ErrorReport {
                operator: field(0).to_string(),
                function: int(1)?,
                kind: field(2).parse()?,
                n: int(3)?,
                n_w: int(4)?,
                n_q: if field(5).is_empty() { None } else { Some(int(5)?) },
                seed: field(6).parse().map_err(|_| parse_err("seed", field(6)))?,
                max_abs: num(7)?,
                rms: num(8)?,
                runtime: num(9)?,
                error: (!field(10).is_empty()).then(|| field(10).to_string()),
            })
        })
        .collect()
}

/// One line per row: `function, n, operator, max_abs`, ready for plotting
/// error against node count per operator.
pub fn write_plot<W: Write>(w: W, rows: &[ErrorReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["function", "n", "operator", "max_abs"])?;
    for r in rows {
        out.write_record([r.function.to_string(), r.n.to_string(), r.operator.clone(), r.max_abs.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

const MODEL_FORMAT: &str = "shepbern-model";
const MODEL_VERSION: &str = "1";

fn jet_columns(order: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(jet_len(order));
    for k in 0..=order {
        for b in 0..=k {
            cols.push(format!("d{}{}", k - b, b));
        }
    }
    cols
}

/// Stores an interpolant as a directory holding `model.csv` (key,value
/// settings) and `nodes.csv` (one row per node with radius, triangle and
/// jet). Loading rebuilds an interpolant that evaluates bit-identically.
pub fn save_model(dir: &Path, interp: &Interpolant) -> Result<()> {
    fs::create_dir_all(dir)?;
    let c = interp.config();
    let order = c.jet_order();
    let mut meta = csv::Writer::from_path(dir.join("model.csv"))?;
    meta.write_record(["key", "value"])?;
    for (k, v) in [
        ("format", MODEL_FORMAT.to_string()),
        ("version", MODEL_VERSION.to_string()),
        ("degree", c.degree.to_string()),
        ("mu", c.mu.to_string()),
        ("n_w", c.n_w.to_string()),
        ("n_q", opt_to_string(&c.n_q)),
        ("mode", c.mode.to_string()),
        ("jet_source", c.jet_source.to_string()),
        ("fallback", c.fallback.to_string()),
        ("jet_order", order.to_string()),
        ("nodes", interp.nodes().len().to_string()),
    ] {
        meta.write_record([k, v.as_str()])?;
    }
    meta.flush()?;

    let mut out = csv::Writer::from_path(dir.join("nodes.csv"))?;
    let mut header: Vec<String> =
        ["x", "y", "radius", "tri_j", "tri_k", "search_radius", "enlarged"].iter().map(|s| s.to_string()).collect();
    header.extend(jet_columns(order));
    out.write_record(&header)?;
    let assignments = interp.assignments();
    for (i, p) in interp.nodes().points().iter().enumerate() {
        let mut row = vec![p.x.to_string(), p.y.to_string(), interp.support().radii[i].to_string()];
        match assignments.map(|a| &a[i]) {
            Some(a) => row.extend([
                a.others.0.to_string(),
                a.others.1.to_string(),
                a.search_radius.to_string(),
                u8::from(a.enlarged).to_string(),
            ]),
            None => row.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        row.extend(interp.jets()[i].table().iter().map(f64::to_string));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_model(dir: &Path) -> Result<Interpolant> {
    let mut meta = csv::Reader::from_path(dir.join("model.csv"))?;
    let mut settings = std::collections::HashMap::new();
    for rec in meta.records() {
        let rec = rec?;
        settings.insert(rec.get(0).unwrap_or("").to_string(), rec.get(1).unwrap_or("").to_string());
    }
    let get = |k: &str| settings.get(k).map(String::as_str).ok_or_else(|| Error::Parse(format!("model lacks '{k}'")));
    let bad = |k: &str| Error::Parse(format!("model has malformed '{k}'"));
    if get("format")? != MODEL_FORMAT || get("version")? != MODEL_VERSION {
        return Err(Error::Parse("not a supported model bundle".into()));
    }
    let n_q = get("n_q")?;
    let config = Config {
        degree: get("degree")?.parse().map_err(|_| bad("degree"))?,
        mu: get("mu")?.parse().map_err(|_| bad("mu"))?,
        n_w: get("n_w")?.parse().map_err(|_| bad("n_w"))?,
        n_q: if n_q.is_empty() { None } else { Some(n_q.parse().map_err(|_| bad("n_q"))?) },
        mode: get("mode")?.parse()?,
        jet_source: get("jet_source")?.parse()?,
        fallback: get("fallback")?.parse()?,
    };
    config.validate()?;
    let order: usize = get("jet_order")?.parse().map_err(|_| bad("jet_order"))?;
    let count: usize = get("nodes")?.parse().map_err(|_| bad("nodes"))?;

    let mut input = csv::Reader::from_path(dir.join("nodes.csv"))?;
    let width = 7 + jet_len(order);
    let mut points = Vec::with_capacity(count);
    let mut radii = Vec::with_capacity(count);
    let mut tables = Vec::with_capacity(count);
    let mut triangles = Vec::with_capacity(count);
    for (line, rec) in input.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(Error::Parse(format!("nodes.csv line {}: expected {width} fields", line + 2)));
        }
        let num = |k: usize| rec[k].parse::<f64>().map_err(|_| Error::Parse(format!("nodes.csv line {}: '{}'", line + 2, &rec[k])));
        points.push(Point::new(num(0)?, num(1)?));
        radii.push(num(2)?);
        triangles.push(if rec[3].is_empty() {
            None
        } else {
            let idx = |k: usize| rec[k].parse::<usize>().map_err(|_| Error::Parse(format!("nodes.csv line {}: bad index", line + 2)));
            Some(((idx(3)?, idx(4)?), num(5)?, &rec[6] == "1"))
        });
        tables.push((7..width).map(num).collect::<Result<Vec<f64>>>()?);
    }
    if points.len() != count {
        return Err(Error::Parse(format!("model declares {count} nodes, nodes.csv has {}", points.len())));
    }
    let nodes = NodeSet::new(points)?;
    let support = LocalSupport::new(config.mu, radii)?;
    let jets = tables
        .into_iter()
        .enumerate()
        .map(|(i, t)| Jet::from_table(nodes.point(i), order, t))
        .collect::<Result<Vec<_>>>()?;
    let assignments = match config.mode {
        Mode::Bernoulli => Some(
            triangles
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let (others, search_radius, enlarged) =
                        t.ok_or_else(|| Error::Parse(format!("node {i} lacks a triangle")))?;
                    TriangleAssignment::from_indices(&nodes, i, others, search_radius, enlarged)
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        Mode::Taylor => None,
    };
    Interpolant::from_parts(nodes, support, config, jets, assignments)
}
