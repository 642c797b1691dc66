//! Orderly search for arcs and sets in general position over `F_q`.
//!
//! Every set of at least three points has a pair at nonzero squared
//! distance, which an automorphism moves to `(0,0), (0,1)`, so the search
//! only enumerates sets containing that seed. The other points then have
//! pairwise distinct finite directions from the origin and are added in
//! increasing direction order, so each seeded set is generated exactly once.
//!
//! Points are indexed by the order used in the canonicity test (origin
//! first, then by direction, then by coordinates), which makes every
//! direction class a contiguous range of bit positions.

use std::thread;

use super::tables::{Tables, NONE};
use super::{merge, new_triples, Mode, Partial, SearchConfig};
use crate::error::Result;
use crate::plane::Point;
use crate::rings::{Elem, Ring};

struct Geometry {
    t: Tables,
    q: usize,
    /// Bit position -> point id `x * q + y`.
    order: Vec<u32>,
    /// Point id -> bit position.
    rank: Vec<u32>,
    /// Direction class `k` occupies positions `bucket_start[k]..bucket_start[k + 1]`;
    /// class `q` is the vertical direction.
    bucket_start: Vec<usize>,
    words: usize,
    circles: bool,
    canon: bool,
    budget: usize,
}

impl Geometry {
    fn new(ring: &Ring, cfg: &SearchConfig) -> Self {
        let t = Tables::new(ring, cfg.convention);
        let q = t.n;
        let slope = |pid: usize| -> usize {
            let (x, y) = (pid / q, pid % q);
            if x == 0 {
                q
            } else {
                t.mul(y as u16, t.inv[x]) as usize
            }
        };
        let mut order: Vec<u32> = (1..q * q).map(|p| p as u32).collect();
        order.sort_by_key(|&p| (slope(p as usize), p));
        order.insert(0, 0);
        let mut rank = vec![0u32; q * q];
        for (i, &p) in order.iter().enumerate() {
            rank[p as usize] = i as u32;
        }
        let mut bucket_start = vec![0usize; q + 2];
        for (k, start) in bucket_start.iter_mut().enumerate().take(q + 1) {
            *start = 1 + order[1..].iter().take_while(|&&p| slope(p as usize) < k).count();
        }
        bucket_start[q + 1] = q * q;
        let odd = ring.characteristic() != 2;
        Geometry {
            q,
            order,
            rank,
            bucket_start,
            words: (q * q).div_ceil(64),
            circles: cfg.mode == Mode::GeneralPosition && odd,
            canon: cfg.isomorph_pruning && odd,
            budget: cfg.canon_triple_budget,
            t,
        }
    }

    #[inline(always)]
    fn xy(&self, pid: u32) -> (u16, u16) {
        ((pid as usize / self.q) as u16, (pid as usize % self.q) as u16)
    }

    #[inline(always)]
    fn pid(&self, x: u16, y: u16) -> u32 {
        (x as usize * self.q + y as usize) as u32
    }

    fn bucket_of(&self, pos: usize) -> usize {
        self.bucket_start.partition_point(|&s| s <= pos) - 1
    }

    /// Candidates for the third point: integral to both seed points and
    /// off the vertical line through them.
    fn root_candidates(&self) -> Vec<u64> {
        let t = &self.t;
        let mut bits = vec![0u64; self.words];
        for pos in 1..self.bucket_start[self.q] {
            let (x, y) = self.xy(self.order[pos]);
            let d0 = t.norm(x, y);
            let d1 = t.norm(x, t.sub(y, 1));
            if t.integral[d0 as usize] && t.integral[d1 as usize] {
                bits[pos / 64] |= 1 << (pos % 64);
            }
        }
        bits
    }

    /// Whether the list, whose last point was just added, survives the
    /// canonicity test.
    fn canon_ok(&self, set: &[u32]) -> bool {
        let t = &self.t;
        let n = set.len();
        let third = self.rank[set[2] as usize];
        let limit = if n <= 8 { usize::MAX } else { self.budget };
        for (iu, iv, iw) in new_triples(n).take(limit) {
            let (ux, uy) = self.xy(set[iu]);
            let (vx, vy) = self.xy(set[iv]);
            let (wx, wy) = self.xy(set[iw]);
            let (a, b) = (t.sub(vx, ux), t.sub(vy, uy));
            let nrm = t.norm(a, b);
            if nrm == 0 {
                continue;
            }
            // c = i (v - u)^-1 = (b + a i) / |v - u|^2
            let ni = t.inv[nrm as usize];
            let (cr, ci) = (t.mul(b, ni), t.mul(a, ni));
            let (dx, dy) = (t.sub(wx, ux), t.sub(wy, uy));
            let zx = t.sub(t.mul(cr, dx), t.mul(ci, dy));
            let zy = t.add(t.mul(cr, dy), t.mul(ci, dx));
            if self.rank[self.pid(zx, zy) as usize] < third
                || self.rank[self.pid(t.neg[zx as usize], zy) as usize] < third
            {
                return false;
            }
        }
        true
    }
}

struct Worker<'a> {
    g: &'a Geometry,
    set: Vec<u32>,
    stack: Vec<Vec<u64>>,
    slope_mark: Vec<u32>,
    stamp: u32,
    circles: Vec<(u16, u16, u16)>,
    part: Partial,
    node_budget: u64,
    witness_limit: usize,
    /// `(worker index, width)`: which root children this worker expands.
    share: (usize, usize),
}

impl<'a> Worker<'a> {
    fn new(g: &'a Geometry, cfg: &SearchConfig, share: (usize, usize)) -> Self {
        let budget = cfg.node_limit.map_or(u64::MAX, |n| n.div_ceil(share.1 as u64));
        Worker {
            g,
            set: vec![0, g.pid(0, 1)],
            stack: vec![g.root_candidates()],
            slope_mark: vec![0; g.q + 1],
            stamp: 0,
            circles: Vec::new(),
            part: Partial::new(),
            node_budget: budget,
            witness_limit: cfg.witness_limit,
            share,
        }
    }

    fn points(&self) -> Vec<Point> {
        self.set
            .iter()
            .map(|&p| {
                let (x, y) = self.g.xy(p);
                Point::new(Elem::from_rep(x as u32), Elem::from_rep(y as u32))
            })
            .collect()
    }

    fn record(&mut self) {
        let n = self.set.len();
        if n > self.part.best || (n == self.part.best && self.part.witnesses.len() < self.witness_limit) {
            let pts = self.points();
            self.part.offer(&pts, self.witness_limit);
        }
    }

    fn collecting_ties(&self) -> bool {
        self.witness_limit > 1 && self.part.witnesses.len() < self.witness_limit
    }

    fn extend(&mut self, depth: usize) {
        if self.part.nodes >= self.node_budget {
            self.part.complete = false;
            return;
        }
        self.part.nodes += 1;
        if depth > 0 || self.share.0 == 0 {
            self.record();
        }
        if self.stack.len() <= depth + 1 {
            self.stack.push(vec![0; self.g.words]);
        }
        let buckets = self.open_buckets(depth);
        let size = self.set.len();
        let mut root_child = 0usize;
        for (bi, &b) in buckets.iter().enumerate() {
            let reach = size + buckets.len() - bi;
            if reach < self.part.best || (reach == self.part.best && !self.collecting_ties()) {
                break;
            }
            let (lo, hi) = (self.g.bucket_start[b], self.g.bucket_start[b + 1]);
            let mut pos = lo;
            while let Some(p) = next_set(&self.stack[depth], pos, hi) {
                pos = p + 1;
                if depth == 0 {
                    let mine = root_child % self.share.1 == self.share.0;
                    root_child += 1;
                    if !mine {
                        continue;
                    }
                }
                let pid = self.g.order[p];
                self.set.push(pid);
                if self.g.canon && !self.g.canon_ok(&self.set) {
                    self.part.pruned += 1;
                    self.set.pop();
                    continue;
                }
                self.build_child(depth, self.g.bucket_start[b + 1]);
                self.extend(depth + 1);
                self.set.pop();
                if !self.part.complete {
                    return;
                }
            }
        }
    }

    fn open_buckets(&self, depth: usize) -> Vec<usize> {
        let bits = &self.stack[depth];
        let mut out = Vec::new();
        let mut pos = 0;
        let end = self.g.bucket_start[self.g.q];
        while let Some(p) = next_set(bits, pos, end) {
            let b = self.g.bucket_of(p);
            out.push(b);
            pos = self.g.bucket_start[b + 1];
        }
        out
    }

    /// Child candidates after appending the last point of `set`: parent
    /// candidates in later direction classes that are integral to the new
    /// point, not collinear with it and an earlier point, and (in general
    /// position mode) not on a circle through it and two earlier points.
    fn build_child(&mut self, depth: usize, from: usize) {
        let g = self.g;
        let t = &g.t;
        let (parent, rest) = self.stack.split_at_mut(depth + 1);
        let parent = &parent[depth];
        let child = &mut rest[0];
        let w0 = from / 64;
        child[..w0].fill(0);
        child[w0..].copy_from_slice(&parent[w0..]);
        child[w0] &= !0u64 << (from % 64);

        let n = self.set.len();
        let (xx, xy) = g.xy(self.set[n - 1]);
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.slope_mark.fill(0);
            self.stamp = 1;
        }
        let slope = |dx: u16, dy: u16| -> usize {
            if dx == 0 {
                g.q
            } else {
                t.mul(dy, t.inv[dx as usize]) as usize
            }
        };
        for &p in &self.set[..n - 1] {
            let (px, py) = g.xy(p);
            self.slope_mark[slope(t.sub(px, xx), t.sub(py, xy))] = self.stamp;
        }
        self.circles.clear();
        if g.circles {
            let half = t.inv[2];
            let nx = t.norm(xx, xy);
            for i in 0..n - 1 {
                let (p1x, p1y) = g.xy(self.set[i]);
                let n1 = t.norm(p1x, p1y);
                let (a2, b2) = (t.sub(xx, p1x), t.sub(xy, p1y));
                let e2 = t.mul(t.sub(nx, n1), half);
                for j in i + 1..n - 1 {
                    let (p2x, p2y) = g.xy(self.set[j]);
                    let (a1, b1) = (t.sub(p2x, p1x), t.sub(p2y, p1y));
                    let e1 = t.mul(t.sub(t.norm(p2x, p2y), n1), half);
                    let det = t.sub(t.mul(a1, b2), t.mul(a2, b1));
                    let di = t.inv[det as usize];
                    debug_assert_ne!(di, NONE, "collinear triple in the current set");
                    let cx = t.mul(t.sub(t.mul(e1, b2), t.mul(e2, b1)), di);
                    let cy = t.mul(t.sub(t.mul(a1, e2), t.mul(a2, e1)), di);
                    let r = t.norm(t.sub(p1x, cx), t.sub(p1y, cy));
                    self.circles.push((cx, cy, r));
                }
            }
        }
        for (w, slot) in child.iter_mut().enumerate().skip(w0) {
            let mut word = *slot;
            let mut keep = word;
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let (yx, yy) = g.xy(g.order[w * 64 + bit]);
                let (dx, dy) = (t.sub(yx, xx), t.sub(yy, xy));
                let ok = t.integral[t.norm(dx, dy) as usize]
                    && self.slope_mark[slope(dx, dy)] != self.stamp
                    && !self
                        .circles
                        .iter()
                        .any(|&(cx, cy, r)| t.norm(t.sub(yx, cx), t.sub(yy, cy)) == r);
                if !ok {
                    keep &= !(1u64 << bit);
                }
            }
            *slot = keep;
        }
    }
}

/// First set bit in `lo..hi`.
#[inline]
fn next_set(bits: &[u64], lo: usize, hi: usize) -> Option<usize> {
    if lo >= hi {
        return None;
    }
    let mut w = lo / 64;
    let mut word = bits[w] & (!0u64 << (lo % 64));
    loop {
        if word != 0 {
            let p = w * 64 + word.trailing_zeros() as usize;
            return (p < hi).then_some(p);
        }
        w += 1;
        if w * 64 >= hi {
            return None;
        }
        word = bits[w];
    }
}

pub(crate) fn search(ring: &Ring, cfg: &SearchConfig) -> Result<Partial> {
    let g = Geometry::new(ring, cfg);
    let width = cfg.parallel_width.max(1);
    if width == 1 {
        let mut w = Worker::new(&g, cfg, (0, 1));
        w.extend(0);
        return Ok(merge(vec![w.part], cfg.witness_limit));
    }
    let parts = thread::scope(|s| {
        let handles: Vec<_> = (0..width)
            .map(|i| {
                let g = &g;
                s.spawn(move || {
                    let mut w = Worker::new(g, cfg, (i, width));
                    w.extend(0);
                    w.part
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect::<Vec<_>>()
    });
    Ok(merge(parts, cfg.witness_limit))
}

/// Compares the table-driven canonicity test with the reference
/// implementation on pseudo-random integral lists over `ring`.
#[cfg(test)]
pub(crate) fn canon_agrees_with_reference(ring: &Ring, trials: usize) -> bool {
    use crate::plane::{delta, PointSet};
    let mut cfg = SearchConfig::new(ring.spec().clone(), Mode::GeneralPosition);
    cfg.convention = crate::plane::Convention::Integral;
    let g = Geometry::new(ring, &cfg);
    let q = ring.order();
    let mut state = 0x9e37_79b9_u64;
    let mut rnd = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut checked = 0;
    while checked < trials {
        let mut pts = vec![Point::from_reps(0, 0), Point::from_reps(0, 1)];
        let want = 3 + (rnd() % 4) as usize;
        let mut attempts = 0;
        while pts.len() < want && attempts < 500 {
            attempts += 1;
            let p = Point::from_reps((rnd() % q as u64) as u32, (rnd() % q as u64) as u32);
            if !pts.contains(&p) && pts.iter().all(|&u| delta(ring, u, p)) {
                pts.push(p);
            }
        }
        if pts.len() < 3 {
            continue;
        }
        checked += 1;
        let set = PointSet::from_points(ring.clone(), pts.clone()).unwrap();
        let pids: Vec<u32> = pts.iter().map(|p| g.pid(p.x.rep() as u16, p.y.rep() as u16)).collect();
        if super::canon_check(&set, cfg.canon_triple_budget).unwrap() != g.canon_ok(&pids) {
            return false;
        }
    }
    true
}
