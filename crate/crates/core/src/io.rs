//! JSON documents for point sets and search results.
//!
//! Coordinates are canonical representatives; extension-field coordinates
//! are coefficient vectors with the constant term first.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::plane::{Convention, Point, PointSet};
use crate::rings::{Elem, Ring, RingSpec};
use crate::search::{Mode, SearchResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Rep(u32),
    Coeffs(Vec<u32>),
}

impl Coord {
    pub fn of(ring: &Ring, x: Elem) -> Coord {
        if ring.degree() > 1 {
            Coord::Coeffs(ring.coeffs(x))
        } else {
            Coord::Rep(x.rep())
        }
    }

    pub fn to_elem(&self, ring: &Ring) -> Result<Elem> {
        match self {
            Coord::Rep(v) => ring.elem(*v as u64),
            Coord::Coeffs(c) => ring.from_coeffs(c),
        }
    }
}

fn coords(ring: &Ring, pts: &[Point]) -> Vec<[Coord; 2]> {
    pts.iter()
        .map(|p| [Coord::of(ring, p.x), Coord::of(ring, p.y)])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetDocument {
    pub schema_version: u32,
    pub ring: String,
    pub points: Vec<[Coord; 2]>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
    /// Fields this version does not know about, kept for round trips.
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl PointSetDocument {
    pub fn from_pointset(set: &PointSet) -> Self {
        PointSetDocument {
            schema_version: SCHEMA_VERSION,
            ring: set.ring().spec().to_string(),
            points: coords(set.ring(), set.points()),
            metadata: Map::new(),
            extra: Map::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Rebuilds the point set, checking the version, the ring and every
    /// coordinate.
    pub fn to_pointset(&self) -> Result<PointSet> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let spec: RingSpec = self.ring.parse()?;
        let ring = Ring::new(&spec)?;
        let pts = self
            .points
            .iter()
            .map(|[x, y]| Ok(Point::new(x.to_elem(&ring)?, y.to_elem(&ring)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Schema(format!("bad coordinate: {e}")))?;
        PointSet::from_points(ring, pts)
    }
}

pub fn read_pointset<R: Read>(reader: R) -> Result<PointSetDocument> {
    serde_json::from_reader(reader).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_pointset_file(path: &Path) -> Result<PointSetDocument> {
    read_pointset(BufReader::new(File::open(path)?))
}

fn depth(v: &Value) -> usize {
    match v {
        Value::Array(a) => 1 + a.iter().map(depth).max().unwrap_or(0),
        Value::Object(_) => usize::MAX / 2,
        _ => 0,
    }
}

fn pretty_into(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                pretty_into(out, x, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && !(depth(v) <= 1 || (depth(v) == 2 && a.len() == 2)) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                pretty_into(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                pretty_into(out, x, indent);
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Indented JSON with a trailing newline. Scalar arrays and coordinate
/// pairs stay on one line; equal values give equal bytes.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = String::new();
    pretty_into(&mut out, &serde_json::to_value(value)?, 0);
    out.push('\n');
    Ok(out)
}

pub fn write_pointset<W: Write>(mut writer: W, doc: &PointSetDocument) -> Result<()> {
    writer.write_all(to_pretty_json(doc)?.as_bytes())?;
    Ok(())
}

pub fn write_pointset_file(path: &Path, doc: &PointSetDocument) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pointset(&mut w, doc)?;
    w.flush()?;
    Ok(())
}

/// Serialisable view of a [`SearchResult`]. Timing is left out so that
/// repeated runs produce identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub ring: String,
    pub mode: Mode,
    pub convention: Convention,
    pub best_cardinality: usize,
    pub witnesses: Vec<Vec<[Coord; 2]>>,
    pub nodes_expanded: u64,
    pub pruned_by_canon: u64,
    pub complete: bool,
}

impl SearchReport {
    pub fn new(res: &SearchResult) -> Self {
        SearchReport {
            schema_version: SCHEMA_VERSION,
            ring: res.ring.spec().to_string(),
            mode: res.mode,
            convention: res.convention,
            best_cardinality: res.best_cardinality,
            witnesses: res.witnesses.iter().map(|w| coords(&res.ring, w.points())).collect(),
            nodes_expanded: res.nodes_expanded,
            pruned_by_canon: res.pruned_by_canon,
            complete: res.complete,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_pretty_json(self)
    }
}
