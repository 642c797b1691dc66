//! Plain backtracking for arcs and general position over rings that are
//! not fields. Translations act on every ring, so the search is rooted at
//! the origin; nothing else is assumed about the automorphism group.

use super::{Mode, Partial, SearchConfig};
use crate::error::Result;
use crate::plane::{collinear, concircular, delta_with, Point};
use crate::rings::Ring;

struct State<'a> {
    ring: &'a Ring,
    cfg: &'a SearchConfig,
    pts: Vec<Point>,
    set: Vec<Point>,
    part: Partial,
    budget: u64,
}

impl State<'_> {
    fn fits(&self, c: Point) -> bool {
        let r = self.ring;
        let n = self.set.len();
        for i in 0..n {
            if !delta_with(r, self.set[i], c, self.cfg.convention) {
                return false;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if collinear(r, self.set[i], self.set[j], c) {
                    return false;
                }
                if self.cfg.mode == Mode::GeneralPosition {
                    for k in j + 1..n {
                        if concircular(r, [self.set[i], self.set[j], self.set[k], c]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self, cand: Vec<usize>) {
        if self.part.nodes >= self.budget {
            self.part.complete = false;
            return;
        }
        self.part.nodes += 1;
        self.part.offer(&self.set, self.cfg.witness_limit);
        let ties = self.cfg.witness_limit > 1 && self.part.witnesses.len() < self.cfg.witness_limit;
        for (k, &c) in cand.iter().enumerate() {
            let reach = self.set.len() + cand.len() - k;
            if reach < self.part.best || (reach == self.part.best && !ties) {
                break;
            }
            let p = self.pts[c];
            if !self.fits(p) {
                continue;
            }
            self.set.push(p);
            let child: Vec<usize> = cand[k + 1..]
                .iter()
                .copied()
                .filter(|&i| delta_with(self.ring, p, self.pts[i], self.cfg.convention))
                .collect();
            self.extend(child);
            self.set.pop();
            if !self.part.complete {
                return;
            }
        }
    }
}

pub(crate) fn search(ring: &Ring, cfg: &SearchConfig) -> Result<Partial> {
    let pts: Vec<Point> = ring
        .elements()
        .flat_map(|x| ring.elements().map(move |y| Point::new(x, y)))
        .collect();
    let origin = pts[0];
    let cand: Vec<usize> = (1..pts.len())
        .filter(|&i| delta_with(ring, origin, pts[i], cfg.convention))
        .collect();
    let mut st = State {
        ring,
        cfg,
        pts,
        set: vec![origin],
        part: Partial::new(),
        budget: cfg.node_limit.unwrap_or(u64::MAX),
    };
    st.extend(cand);
    Ok(super::merge(vec![st.part], cfg.witness_limit))
}
