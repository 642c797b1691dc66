//! Maximum integral point sets as maximum cliques of the graph on `R^2`
//! whose edges join points at integral distance.
//!
//! Translations are automorphisms of the graph, so every maximum clique
//! has a translate through the origin and the search only looks at
//! neighbours of the origin. Branch and bound with a greedy colouring
//! bound over bitsets.

use super::{Mode, Partial, SearchConfig, SearchResult};
use crate::error::{Error, Result};
use crate::plane::{delta_with, Point};
use crate::rings::Ring;

/// Largest number of vertices (`|R|^2`) the clique search accepts.
pub const CLIQUE_VERTEX_BOUND: usize = 2500;

/// Maximum integral point set of `ring` with default settings.
pub fn clique_search(ring: &Ring) -> Result<SearchResult> {
    let mut cfg = SearchConfig::new(ring.spec().clone(), Mode::Integral);
    cfg.parallel_width = 1;
    super::run_search(&cfg)
}

type Bits = Vec<u64>;

fn set_bit(b: &mut [u64], i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

fn ones(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let t = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + t)
        })
    })
}

fn count(b: &[u64]) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

struct Solver<'a> {
    cfg: &'a SearchConfig,
    /// Neighbours of the origin, in canonical order.
    verts: Vec<Point>,
    adj: Vec<Bits>,
    clique: Vec<usize>,
    part: Partial,
    budget: u64,
    origin: Point,
}

impl Solver<'_> {
    fn ties(&self) -> bool {
        self.cfg.witness_limit > 1 && self.part.witnesses.len() < self.cfg.witness_limit
    }

    fn record(&mut self) {
        let mut pts = Vec::with_capacity(self.clique.len() + 1);
        pts.push(self.origin);
        pts.extend(self.clique.iter().map(|&i| self.verts[i]));
        self.part.offer(&pts, self.cfg.witness_limit);
    }

    /// Greedy colouring of `cand`: vertices in colour order with the
    /// colour count reached so far.
    fn colour(&self, cand: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(count(cand));
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut left = cand.clone();
        let mut k = 0;
        while left.iter().any(|&w| w != 0) {
            k += 1;
            let mut q = left.clone();
            loop {
                let Some(v) = ones(&q).next() else { break };
                q[v >> 6] &= !(1 << (v & 63));
                left[v >> 6] &= !(1 << (v & 63));
                for (a, b) in q.iter_mut().zip(&self.adj[v]) {
                    *a &= !b;
                }
                order.push(v);
                bounds.push(k);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, mut cand: Bits) {
        if self.part.nodes >= self.budget {
            self.part.complete = false;
            return;
        }
        self.part.nodes += 1;
        // The clique plus the origin.
        let size = self.clique.len() + 1;
        if cand.iter().all(|&w| w == 0) {
            self.record();
            return;
        }
        if size > self.part.best || (size == self.part.best && self.ties()) {
            self.record();
        }
        let (order, bounds) = self.colour(&cand);
        for idx in (0..order.len()).rev() {
            let reach = size + bounds[idx];
            let ties = self.ties();
            if reach < self.part.best || (reach == self.part.best && !ties) {
                return;
            }
            let v = order[idx];
            let child: Bits = cand.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            self.clique.push(v);
            self.expand(child);
            self.clique.pop();
            if !self.part.complete {
                return;
            }
            cand[v >> 6] &= !(1 << (v & 63));
        }
    }
}

pub(crate) fn clique_partial(ring: &Ring, cfg: &SearchConfig) -> Result<Partial> {
    let n = ring.order() as usize;
    let vertices = n.saturating_mul(n);
    if vertices > cfg.clique_vertex_bound {
        return Err(Error::BoundExceeded {
            what: "vertices of the integral-distance graph",
            value: vertices as u64,
            limit: cfg.clique_vertex_bound as u64,
        });
    }
    let origin = Point::new(ring.zero(), ring.zero());
    let verts: Vec<Point> = ring
        .elements()
        .flat_map(|x| ring.elements().map(move |y| Point::new(x, y)))
        .filter(|&p| p != origin && delta_with(ring, origin, p, cfg.convention))
        .collect();
    let words = verts.len().div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; verts.len()];
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if delta_with(ring, verts[i], verts[j], cfg.convention) {
                set_bit(&mut adj[i], j);
                set_bit(&mut adj[j], i);
            }
        }
    }
    let mut all = vec![0u64; words];
    for i in 0..verts.len() {
        set_bit(&mut all, i);
    }
    let mut s = Solver {
        cfg,
        verts,
        adj,
        clique: Vec::new(),
        part: Partial::new(),
        budget: cfg.node_limit.unwrap_or(u64::MAX),
        origin,
    };
    s.expand(all);
    Ok(super::merge(vec![s.part], cfg.witness_limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{Convention, PointSet};

    fn best(spec: &str) -> usize {
        let ring = Ring::new(&spec.parse().unwrap()).unwrap();
        clique_search(&ring).unwrap().best_cardinality
    }

    /// Exhaustive maximum over all subsets containing the origin.
    fn brute(ring: &Ring) -> usize {
        let origin = Point::new(ring.zero(), ring.zero());
        let verts: Vec<Point> = ring
            .elements()
            .flat_map(|x| ring.elements().map(move |y| Point::new(x, y)))
            .filter(|&p| p != origin && delta_with(ring, origin, p, Convention::Integral))
            .collect();
        assert!(verts.len() <= 20);
        let mut best = 1;
        for mask in 0u32..1 << verts.len() {
            let s: Vec<Point> = (0..verts.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| verts[i])
                .collect();
            if s.len() + 1 > best
                && s.iter()
                    .enumerate()
                    .all(|(i, &a)| s[i + 1..].iter().all(|&b| delta_with(ring, a, b, Convention::Integral)))
            {
                best = s.len() + 1;
            }
        }
        best
    }

    #[test]
    fn known_maxima() {
        assert_eq!(best("Fq:9"), 9);
        assert_eq!(best("Zn:9"), 27);
        assert_eq!(best("Zn:15"), 15);
        assert_eq!(best("Fp:13"), 13);
    }

    #[test]
    fn agrees_with_brute_force_on_tiny_rings() {
        for spec in ["Fp:2", "Fp:3", "Zn:4", "Fp:5"] {
            let ring = Ring::new(&spec.parse().unwrap()).unwrap();
            if ring.order() * ring.order() > 25 {
                continue;
            }
            assert_eq!(clique_search(&ring).unwrap().best_cardinality, brute(&ring), "{spec}");
        }
    }

    #[test]
    fn witness_is_integral() {
        let ring = Ring::prime_field(11).unwrap();
        let r = clique_search(&ring).unwrap();
        let w: &PointSet = &r.witnesses[0];
        assert_eq!(w.len(), r.best_cardinality);
        assert!(crate::plane::classify(w).integral);
    }

    #[test]
    fn vertex_bound_is_enforced() {
        let ring = Ring::prime_field(53).unwrap();
        assert!(matches!(clique_search(&ring), Err(Error::BoundExceeded { .. })));
    }
}
