//! CSV serialization of maps and delay-axis tables.
//!
//! Files open with `# key: value` comment lines carrying the axes and
//! parameters, followed by one header row and the data. Numbers are written
//! with 17 significant digits so that parsing reproduces every value exactly.
//!
//! Map layout: the header row is `<rows>/<cols>,c₀,c₁,…` and each data row
//! starts with its row coordinate.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid1D, Grid2D};
use crate::interferogram::Interferogram;
use crate::maps::{MapKind, MapMetadata, SpectralMap};
use crate::scalar::Real;

fn num<T: Real>(x: T) -> String {
    format!("{x:.16e}")
}

fn parse_num<T: Real>(s: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad number '{}'", s.trim())))
}

fn axis_line<T: Real>(g: &Grid1D<T>) -> String {
    format!(
        "{} start={} step={} count={}",
        g.axis.as_str(),
        num(g.start),
        num(g.step),
        g.count
    )
}

fn parse_axis<T: Real>(s: &str) -> Result<Grid1D<T>> {
    let mut parts = s.split_whitespace();
    let axis = Axis::parse(parts.next().ok_or_else(|| Error::Parse("empty axis line".into()))?)?;
    let (mut start, mut step, mut count) = (None, None, None);
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad axis field '{p}'")))?;
        match k {
            "start" => start = Some(parse_num(v)?),
            "step" => step = Some(parse_num(v)?),
            "count" => {
                count = Some(
                    v.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad count '{v}'")))?,
                )
            }
            other => return Err(Error::Parse(format!("unknown axis field '{other}'"))),
        }
    }
    match (start, step, count) {
        (Some(a), Some(d), Some(n)) => Grid1D::new(a, d, n, axis),
        _ => Err(Error::Parse(format!("incomplete axis line '{s}'"))),
    }
}

fn metadata_pairs<T: Real>(m: &MapMetadata<T>) -> Vec<(&'static str, T)> {
    [
        ("sigma_plus", m.sigma_plus),
        ("sigma_minus", m.sigma_minus),
        ("tau0", m.tau0),
        ("phi", m.phi),
        ("tau", m.tau),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.map(|v| (k, v)))
    .collect()
}

type Pairs = Vec<(String, String)>;

/// Splits leading `# key: value` lines from the rest of the text.
fn split_header(text: &str) -> Result<(Pairs, Vec<&str>)> {
    let mut meta = Vec::new();
    let mut body = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            if !body.is_empty() {
                return Err(Error::Parse("comment line after data".into()));
            }
            let (k, v) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad comment line '{line}'")))?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        } else if !line.trim().is_empty() {
            body.push(line);
        }
    }
    Ok((meta, body))
}

fn lookup<'a>(meta: &'a [(String, String)], key: &str) -> Option<&'a str> {
    meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn require<'a>(meta: &'a [(String, String)], key: &str) -> Result<&'a str> {
    lookup(meta, key).ok_or_else(|| Error::Parse(format!("missing '# {key}:' line")))
}

/// Writes a map as CSV.
pub fn map_to_csv<T: Real>(map: &SpectralMap<T>) -> String {
    let g = &map.grid;
    let mut out = String::with_capacity(g.len() * 24 + 256);
    let _ = writeln!(out, "# kind: {}", map.kind.as_str());
    let _ = writeln!(out, "# rows: {}", axis_line(&g.rows));
    let _ = writeln!(out, "# cols: {}", axis_line(&g.cols));
    for (k, v) in metadata_pairs(&map.metadata) {
        let _ = writeln!(out, "# {k}: {}", num(v));
    }
    let _ = write!(out, "{}/{}", g.rows.axis.as_str(), g.cols.axis.as_str());
    for c in 0..g.cols.count {
        let _ = write!(out, ",{}", num(g.cols.at(c)));
    }
    out.push('\n');
    for r in 0..g.rows.count {
        out.push_str(&num(g.rows.at(r)));
        for v in map.row(r) {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

/// Parses CSV written by [`map_to_csv`].
pub fn map_from_csv<T: Real>(text: &str) -> Result<SpectralMap<T>> {
    let (meta, body) = split_header(text)?;
    let kind = MapKind::parse(require(&meta, "kind")?)?;
    let grid = Grid2D::new(parse_axis(require(&meta, "rows")?)?, parse_axis(require(&meta, "cols")?)?)?;
    let opt = |k: &str| lookup(&meta, k).map(parse_num::<T>).transpose();
    let metadata = MapMetadata {
        sigma_plus: opt("sigma_plus")?,
        sigma_minus: opt("sigma_minus")?,
        tau0: opt("tau0")?,
        phi: opt("phi")?,
        tau: opt("tau")?,
    };
    let mut lines = body.into_iter();
    lines
        .next()
        .ok_or_else(|| Error::Parse("missing header row".into()))?;
    let mut values = Vec::with_capacity(grid.len());
    let mut rows = 0;
    for line in lines {
        let mut fields = line.split(',');
        fields.next();
        let before = values.len();
        for f in fields {
            values.push(parse_num(f)?);
        }
        if values.len() - before != grid.cols.count {
            return Err(Error::Parse(format!(
                "row {rows} has {} values, expected {}",
                values.len() - before,
                grid.cols.count
            )));
        }
        rows += 1;
    }
    if rows != grid.rows.count {
        return Err(Error::Parse(format!(
            "{rows} data rows, expected {}",
            grid.rows.count
        )));
    }
    SpectralMap::new(grid, values, kind, metadata)
}

/// Named columns sampled on a shared one-dimensional axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    pub grid: Grid1D<T>,
    pub columns: Vec<(String, Vec<T>)>,
    /// Extra `# key: value` lines.
    pub metadata: Vec<(String, String)>,
}

impl<T: Real> Table<T> {
    pub fn new(grid: Grid1D<T>) -> Self {
        Self {
            grid,
            columns: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<T>) -> Result<()> {
        if values.len() != self.grid.count {
            return Err(Error::InvalidInput(format!(
                "column of {} values for {} nodes",
                values.len(),
                self.grid.count
            )));
        }
        self.columns.push((name.into(), values));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[T]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# axis: {}", axis_line(&self.grid));
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(self.grid.axis.as_str());
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for k in 0..self.grid.count {
            out.push_str(&num(self.grid.at(k)));
            for (_, v) in &self.columns {
                out.push(',');
                out.push_str(&num(v[k]));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (meta, body) = split_header(text)?;
        let grid = parse_axis(require(&meta, "axis")?)?;
        let mut lines = body.into_iter();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header row".into()))?;
        let names: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        let mut cols: Vec<Vec<T>> = vec![Vec::with_capacity(grid.count); names.len()];
        let mut rows = 0;
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() + 1 {
                return Err(Error::Parse(format!("row {rows} has {} fields", fields.len())));
            }
            for (c, f) in fields[1..].iter().enumerate() {
                cols[c].push(parse_num(f)?);
            }
            rows += 1;
        }
        if rows != grid.count {
            return Err(Error::Parse(format!("{rows} data rows, expected {}", grid.count)));
        }
        Ok(Self {
            grid,
            columns: names.into_iter().zip(cols).collect(),
            metadata: meta.into_iter().filter(|(k, _)| k != "axis").collect(),
        })
    }
}

/// Table holding one interferogram as column `rate`, with its parameters and
/// baseline in the metadata.
pub fn interferogram_table<T: Real>(ig: &Interferogram<T>) -> Result<Table<T>> {
    let mut t = Table::new(ig.delays);
    t.push_column("rate", ig.values.clone())?;
    t.metadata = interferogram_metadata(ig);
    Ok(t)
}

/// Parameter lines describing an interferogram.
pub fn interferogram_metadata<T: Real>(ig: &Interferogram<T>) -> Vec<(String, String)> {
    let mut m = vec![(
        "pump".to_string(),
        if ig.model.is_cw() { "cw" } else { "pulsed" }.to_string(),
    )];
    if !ig.model.is_cw() {
        m.push(("sigma_plus".into(), num(ig.model.sigma_plus())));
    }
    m.push(("sigma_minus".into(), num(ig.model.sigma_minus())));
    m.push(("tau0".into(), num(ig.config.tau0.value())));
    m.push(("phi".into(), num(ig.config.phi)));
    m.push(("baseline".into(), num(ig.baseline)));
    m
}
