//! Exhaustive extremal searches: maximum integral point sets (clique
//! search), maximum arcs and maximum sets in general position.

pub mod clique;
mod field;
mod generic;
mod tables;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::automorph::pair_normalizer;
use crate::error::{Error, Result};
use crate::plane::{classify_with, collinear, d2, delta_with, direction, Convention, Direction, Point, PointSet};
use crate::rings::{Ring, RingSpec};

pub use clique::{clique_search, CLIQUE_VERTEX_BOUND};

/// Largest field order accepted by the arc and general-position searches.
pub const FIELD_SEARCH_BOUND: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Largest integral point set.
    Integral,
    /// Largest integral point set without collinear triples.
    Arc,
    /// Largest integral point set without collinear triples or four
    /// concircular points.
    GeneralPosition,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Integral => "integral",
            Mode::Arc => "arc",
            Mode::GeneralPosition => "general",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integral" | "max_integral" => Ok(Mode::Integral),
            "arc" | "max_arc" => Ok(Mode::Arc),
            "general" | "general_position" | "max_general_position" => Ok(Mode::GeneralPosition),
            _ => Err(Error::BadSpec(format!("unknown search mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub ring: RingSpec,
    pub mode: Mode,
    pub convention: Convention,
    pub isomorph_pruning: bool,
    /// Triples inspected per canonicity check once the set has more than
    /// eight points; smaller sets inspect every new triple.
    pub canon_triple_budget: usize,
    pub parallel_width: usize,
    /// Total node budget, split evenly between workers.
    pub node_limit: Option<u64>,
    pub witness_limit: usize,
    pub clique_vertex_bound: usize,
}

impl SearchConfig {
    pub fn new(ring: RingSpec, mode: Mode) -> Self {
        SearchConfig {
            ring,
            mode,
            convention: Convention::Integral,
            isomorph_pruning: true,
            canon_triple_budget: 200,
            parallel_width: default_parallel_width(),
            node_limit: None,
            witness_limit: 1,
            clique_vertex_bound: CLIQUE_VERTEX_BOUND,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.canon_triple_budget == 0 || self.parallel_width == 0 || self.witness_limit == 0 {
            return Err(Error::BadSpec("search budgets must be positive".into()));
        }
        if self.node_limit == Some(0) {
            return Err(Error::BadSpec("node limit must be positive".into()));
        }
        Ok(())
    }
}

/// `IPSET_THREADS` when set to a positive integer, otherwise 1.
pub fn default_parallel_width() -> usize {
    std::env::var("IPSET_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub ring: Ring,
    pub mode: Mode,
    pub convention: Convention,
    pub best_cardinality: usize,
    /// Sets of `best_cardinality` points, sorted by their sorted point lists.
    pub witnesses: Vec<PointSet>,
    pub nodes_expanded: u64,
    pub pruned_by_canon: u64,
    /// False when the node limit stopped the search early.
    pub complete: bool,
    pub wall_time: Duration,
}

/// Per-worker outcome merged into a [`SearchResult`].
#[derive(Clone, Debug, Default)]
pub(crate) struct Partial {
    pub best: usize,
    pub witnesses: Vec<Vec<Point>>,
    pub nodes: u64,
    pub pruned: u64,
    pub complete: bool,
}

impl Partial {
    pub(crate) fn new() -> Self {
        Partial {
            complete: true,
            ..Default::default()
        }
    }

    /// Records a set of `len` points; `collect_ties` keeps equal-size sets
    /// while fewer than `limit` are stored.
    pub(crate) fn offer(&mut self, pts: &[Point], limit: usize) {
        if pts.len() > self.best {
            self.best = pts.len();
            self.witnesses.clear();
        }
        if pts.len() == self.best && self.witnesses.len() < limit {
            self.witnesses.push(pts.to_vec());
        }
    }
}

pub(crate) fn merge(parts: Vec<Partial>, limit: usize) -> Partial {
    let best = parts.iter().map(|p| p.best).max().unwrap_or(0);
    let mut out = Partial {
        best,
        complete: parts.iter().all(|p| p.complete),
        nodes: parts.iter().map(|p| p.nodes).sum(),
        pruned: parts.iter().map(|p| p.pruned).sum(),
        witnesses: Vec::new(),
    };
    let mut ws: Vec<Vec<Point>> = parts
        .into_iter()
        .filter(|p| p.best == best)
        .flat_map(|p| p.witnesses)
        .map(|mut w| {
            w.sort();
            w
        })
        .collect();
    ws.sort();
    ws.dedup();
    ws.truncate(limit);
    out.witnesses = ws;
    out
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let ring = Ring::new(&cfg.ring)?;
    let start = Instant::now();
    let partial = match cfg.mode {
        Mode::Integral => clique::clique_partial(&ring, cfg)?,
        Mode::Arc | Mode::GeneralPosition => {
            if ring.is_field() {
                if ring.order() > FIELD_SEARCH_BOUND {
                    return Err(Error::BoundExceeded {
                        what: "field order for arc/general search",
                        value: ring.order() as u64,
                        limit: FIELD_SEARCH_BOUND as u64,
                    });
                }
                field::search(&ring, cfg)?
            } else {
                if cfg.isomorph_pruning {
                    return Err(Error::Unsupported(format!(
                        "isomorph pruning needs a field; {} requires pruning to be disabled",
                        ring
                    )));
                }
                generic::search(&ring, cfg)?
            }
        }
    };
    let witnesses = partial
        .witnesses
        .into_iter()
        .map(|w| PointSet::from_points(ring.clone(), w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchResult {
        ring,
        mode: cfg.mode,
        convention: cfg.convention,
        best_cardinality: partial.best,
        witnesses,
        nodes_expanded: partial.nodes,
        pruned_by_canon: partial.pruned,
        complete: partial.complete,
        wall_time: start.elapsed(),
    })
}

/// Whether `set` satisfies the predicate of `mode`.
pub fn satisfies_mode(set: &PointSet, mode: Mode, conv: Convention) -> bool {
    let c = classify_with(set, conv);
    match mode {
        Mode::Integral => c.integral,
        Mode::Arc => c.arc,
        Mode::GeneralPosition => c.general_position,
    }
}

/// Total order on points used by the canonicity test: direction from the
/// origin (finite by representative, infinity last), then `(x, y)`. The
/// origin precedes every other point.
pub fn point_order_key(ring: &Ring, p: Point) -> (u64, u32, u32) {
    let origin = Point::new(ring.zero(), ring.zero());
    let d = if p == origin {
        0
    } else {
        match direction(ring, p, origin).expect("distinct points") {
            Direction::Finite(e) => 1 + e.rep() as u64,
            Direction::Infinity => 1 + ring.order() as u64,
            Direction::NonUnit => 2 + ring.order() as u64,
        }
    };
    (d, p.x.rep(), p.y.rep())
}

/// The canonicity test on a point list whose last entry was just added.
///
/// Inspects ordered triples `(u, v, w)` of distinct points with
/// `d^2(u, v) != 0` that involve the newest point, newest point as `w`
/// first, then as `v`, then as `u`; earlier triples were checked when their
/// points were added. Every triple is inspected while the set has at most
/// eight points, afterwards at most `budget`. Returns false when the
/// normalised image of `w`, or its mirror `(-x, y)`, precedes the third
/// point of the list.
pub fn canon_check(set: &PointSet, budget: usize) -> Result<bool> {
    let ring = set.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let pts = set.points();
    if pts.len() < 3 {
        return Ok(true);
    }
    let third = point_order_key(ring, pts[2]);
    let limit = if pts.len() <= 8 { usize::MAX } else { budget };
    for (u, v, w) in new_triples(pts.len()).take(limit) {
        let (u, v, w) = (pts[u], pts[v], pts[w]);
        if d2(ring, u, v) == ring.zero() || !delta_with(ring, u, v, Convention::Integral) {
            continue;
        }
        let alpha = pair_normalizer(ring, u, v)?;
        let z = alpha.apply(ring, w);
        let m = Point::new(ring.neg(z.x), z.y);
        if point_order_key(ring, z) < third || point_order_key(ring, m) < third {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ordered index triples `(u, v, w)` of distinct positions containing the
/// last position `n - 1`, in the order used by [`canon_check`].
pub(crate) fn new_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    let x = n - 1;
    let pairs = move || (0..x).flat_map(move |a| (0..x).filter(move |&b| b != a).map(move |b| (a, b)));
    let as_w = pairs().map(move |(u, v)| (u, v, x));
    let as_v = pairs().map(move |(u, w)| (u, x, w));
    let as_u = pairs().map(move |(v, w)| (x, v, w));
    as_w.chain(as_v).chain(as_u)
}

/// Points of `F_q^2` other than the seed `(0,0), (0,1)`, grouped by their
/// direction from the origin, with the blocked flags of the initial search
/// state.
#[derive(Clone, Debug)]
pub struct DirectionBuckets {
    pub buckets: Vec<Bucket>,
}

#[derive(Clone, Debug)]
pub struct Bucket {
    pub direction: Direction,
    pub points: Vec<Point>,
    /// Not at integral distance to a seed point, or collinear with the seed.
    pub blocked: Vec<bool>,
}

impl DirectionBuckets {
    pub fn new(ring: &Ring, conv: Convention) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::NotAField(ring.to_string()));
        }
        let origin = Point::new(ring.zero(), ring.zero());
        let up = Point::new(ring.zero(), ring.one());
        let mut dirs: Vec<Direction> = ring.elements().map(Direction::Finite).collect();
        dirs.push(Direction::Infinity);
        let mut buckets: Vec<Bucket> = dirs
            .into_iter()
            .map(|direction| Bucket {
                direction,
                points: Vec::new(),
                blocked: Vec::new(),
            })
            .collect();
        for x in ring.elements() {
            for y in ring.elements() {
                let p = Point::new(x, y);
                if p == origin || p == up {
                    continue;
                }
                let idx = match direction(ring, p, origin)? {
                    Direction::Finite(e) => e.rep() as usize,
                    _ => ring.order() as usize,
                };
                let blocked = !delta_with(ring, origin, p, conv)
                    || !delta_with(ring, up, p, conv)
                    || collinear(ring, origin, up, p);
                buckets[idx].points.push(p);
                buckets[idx].blocked.push(blocked);
            }
        }
        Ok(DirectionBuckets { buckets })
    }

    /// Number of directions that still hold an unblocked point.
    pub fn open_directions(&self) -> usize {
        self.buckets.iter().filter(|b| b.blocked.iter().any(|&x| !x)).count()
    }
}

/// Recomputes the general-position maximum over `F_p` for every prime
/// `p <= max_p`.
pub fn recompute_table(max_p: u32, parallel_width: usize) -> Result<Vec<(u32, SearchResult)>> {
    let mut out = Vec::new();
    for p in (2..=max_p).filter(|&p| crate::rings::is_prime(p as u64)) {
        let mut cfg = SearchConfig::new(RingSpec::PrimeField(p), Mode::GeneralPosition);
        cfg.parallel_width = parallel_width;
        let res = run_search(&cfg)?;
        log::info!(
            "p = {p}: {} ({} nodes, {:.2?})",
            res.best_cardinality,
            res.nodes_expanded,
            res.wall_time
        );
        out.push((p, res));
    }
    Ok(out)
}
