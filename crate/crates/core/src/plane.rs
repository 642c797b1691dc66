//! Geometry on `R^2`: squared distance, the integral-distance predicate,
//! directions, collinearity, concircularity and point-set classification.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rings::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Elem,
    pub y: Elem,
}

impl Point {
    pub const fn new(x: Elem, y: Elem) -> Self {
        Point { x, y }
    }

    pub const fn from_reps(x: u32, y: u32) -> Self {
        Point::new(Elem::from_rep(x), Elem::from_rep(y))
    }

    pub fn reps(self) -> (u32, u32) {
        (self.x.rep(), self.y.rep())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.rep(), self.y.rep())
    }
}

/// Which squared distances count as integral.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `d^2` is any square, zero included.
    #[default]
    Integral,
    /// `d^2` must be a nonzero square.
    Quadrance,
}

/// An ordered, duplicate-free list of points of `R^2`.
#[derive(Clone, Debug)]
pub struct PointSet {
    ring: Ring,
    points: Vec<Point>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.points == other.points
    }
}

impl PointSet {
    pub fn empty(ring: Ring) -> Self {
        PointSet {
            ring,
            points: Vec::new(),
        }
    }

    pub fn from_points(ring: Ring, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut set = PointSet::empty(ring);
        let mut seen = HashSet::new();
        for p in points {
            set.check_point(p)?;
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p.x.rep(), p.y.rep()));
            }
            set.points.push(p);
        }
        Ok(set)
    }

    /// Builds a set from a generator that may repeat points; the first
    /// occurrence wins.
    pub fn from_points_dedup(ring: Ring, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut seen = HashSet::new();
        let unique: Vec<Point> = points.into_iter().filter(|p| seen.insert(*p)).collect();
        PointSet::from_points(ring, unique)
    }

    pub fn from_reps(ring: Ring, reps: &[(u32, u32)]) -> Result<Self> {
        PointSet::from_points(ring, reps.iter().map(|&(x, y)| Point::from_reps(x, y)))
    }

    fn check_point(&self, p: Point) -> Result<()> {
        for e in [p.x, p.y] {
            if !self.ring.contains(e) {
                return Err(Error::ElementOutOfRange {
                    rep: e.rep() as u64,
                    ring: self.ring.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        self.check_point(p)?;
        if self.points.contains(&p) {
            return Err(Error::DuplicatePoint(p.x.rep(), p.y.rep()));
        }
        self.points.push(p);
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    pub fn sorted_points(&self) -> Vec<Point> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    /// Equality as sets, ignoring insertion order.
    pub fn same_set(&self, other: &PointSet) -> bool {
        self.ring == other.ring && self.sorted_points() == other.sorted_points()
    }

    pub fn ensure_same_ring(&self, other: &PointSet) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings(self.ring.to_string(), other.ring.to_string()))
        }
    }
}

/// Slope class of a point pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Finite(Elem),
    Infinity,
    /// The x-difference is a nonzero zero divisor (only in non-fields).
    NonUnit,
}

impl Direction {
    /// Position in the search order: finite directions by representative,
    /// then infinity. `None` for [`Direction::NonUnit`].
    pub fn order_key(self) -> Option<u32> {
        match self {
            Direction::Finite(e) => Some(e.rep()),
            Direction::Infinity => Some(u32::MAX),
            Direction::NonUnit => None,
        }
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.order_key()?.cmp(&other.order_key()?))
    }
}

pub fn d2(ring: &Ring, u: Point, v: Point) -> Elem {
    let dx = ring.sub(u.x, v.x);
    let dy = ring.sub(u.y, v.y);
    ring.add(ring.square(dx), ring.square(dy))
}

/// Squared distance in `R^m`.
pub fn d2_general(ring: &Ring, u: &[Elem], v: &[Elem]) -> Result<Elem> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(u.iter()
        .zip(v)
        .fold(ring.zero(), |acc, (&a, &b)| ring.add(acc, ring.square(ring.sub(a, b)))))
}

pub fn delta_general(ring: &Ring, u: &[Elem], v: &[Elem]) -> Result<bool> {
    Ok(ring.is_square(d2_general(ring, u, v)?))
}

#[inline]
pub fn is_integral_value(ring: &Ring, d: Elem, conv: Convention) -> bool {
    match conv {
        Convention::Integral => ring.is_square(d),
        Convention::Quadrance => d != Elem::ZERO && ring.is_square(d),
    }
}

/// Integral-distance predicate; zero counts as a square.
pub fn delta(ring: &Ring, u: Point, v: Point) -> bool {
    ring.is_square(d2(ring, u, v))
}

pub fn delta_with(ring: &Ring, u: Point, v: Point, conv: Convention) -> bool {
    is_integral_value(ring, d2(ring, u, v), conv)
}

pub fn direction(ring: &Ring, u: Point, v: Point) -> Result<Direction> {
    if u == v {
        return Err(Error::IdenticalPoints);
    }
    Ok(direction_of_difference(ring, ring.sub(u.x, v.x), ring.sub(u.y, v.y)))
}

pub(crate) fn direction_of_difference(ring: &Ring, dx: Elem, dy: Elem) -> Direction {
    if dx == Elem::ZERO {
        Direction::Infinity
    } else if let Some(inv) = ring.inv(dx) {
        Direction::Finite(ring.mul(dy, inv))
    } else {
        Direction::NonUnit
    }
}

/// Directions `d` such that two points in direction `d` are at integral
/// distance: finite `d` with `1 + d^2` integral, plus infinity.
pub fn integral_directions(ring: &Ring) -> Result<Vec<Direction>> {
    integral_directions_with(ring, Convention::Integral)
}

pub fn integral_directions_with(ring: &Ring, conv: Convention) -> Result<Vec<Direction>> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let one = ring.one();
    let mut out: Vec<Direction> = ring
        .elements()
        .filter(|&d| is_integral_value(ring, ring.add(one, ring.square(d)), conv))
        .map(Direction::Finite)
        .collect();
    out.push(Direction::Infinity);
    Ok(out)
}

/// Determinant test `det [[u1, v1, 1], [u2, v2, 1], [u3, v3, 1]] = 0`.
/// Exact over fields; a necessary condition over other rings.
pub fn collinear(ring: &Ring, a: Point, b: Point, c: Point) -> bool {
    let (bx, by) = (ring.sub(b.x, a.x), ring.sub(b.y, a.y));
    let (cx, cy) = (ring.sub(c.x, a.x), ring.sub(c.y, a.y));
    ring.mul(bx, cy) == ring.mul(cx, by)
}

/// Concircularity of four points.
///
/// Uses the determinant `det [[x, y, x^2 + y^2, 1]] = 0`, which over
/// fields of odd characteristic is equivalent to lying on a common circle
/// when no three of the points are collinear. Over fields of
/// characteristic 2 every circle `(x-a)^2 + (y-b)^2 = r` is the line
/// `x + y = const`, so the points are tested against that directly.
pub fn concircular(ring: &Ring, p: [Point; 4]) -> bool {
    if ring.is_field() && ring.characteristic() == 2 {
        let s = ring.add(p[0].x, p[0].y);
        return p[1..].iter().all(|q| ring.add(q.x, q.y) == s);
    }
    concircular_determinant(ring, p)
}

pub fn concircular_determinant(ring: &Ring, p: [Point; 4]) -> bool {
    let n = |q: Point| ring.add(ring.square(q.x), ring.square(q.y));
    let n0 = n(p[0]);
    let rows: Vec<[Elem; 3]> = p[1..]
        .iter()
        .map(|&q| [ring.sub(q.x, p[0].x), ring.sub(q.y, p[0].y), ring.sub(n(q), n0)])
        .collect();
    det3(ring, &rows) == Elem::ZERO
}

fn det3(ring: &Ring, m: &[[Elem; 3]]) -> Elem {
    let minor = |a: Elem, b: Elem, c: Elem, d: Elem| ring.sub(ring.mul(a, d), ring.mul(b, c));
    let t0 = ring.mul(m[0][0], minor(m[1][1], m[1][2], m[2][1], m[2][2]));
    let t1 = ring.mul(m[0][1], minor(m[1][0], m[1][2], m[2][0], m[2][2]));
    let t2 = ring.mul(m[0][2], minor(m[1][0], m[1][1], m[2][0], m[2][1]));
    ring.add(ring.sub(t0, t1), t2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub integral: bool,
    /// Integral with no collinear triple.
    pub arc: bool,
    /// Arc with no four concircular points.
    pub general_position: bool,
    pub max_line_multiplicity: usize,
    /// Set when collinearity and concircularity were decided by
    /// determinants only (rings that are not fields).
    pub determinant_based: bool,
}

pub fn classify(set: &PointSet) -> Classification {
    classify_with(set, Convention::Integral)
}

pub fn classify_with(set: &PointSet, conv: Convention) -> Classification {
    let ring = set.ring();
    let pts = set.points();
    let n = pts.len();
    let integral = (0..n).all(|i| (i + 1..n).all(|j| delta_with(ring, pts[i], pts[j], conv)));
    let no_collinear = !any_triple(pts, |a, b, c| collinear(ring, a, b, c));
    let arc = integral && no_collinear;
    let general_position = arc && !any_quadruple(pts, |q| concircular(ring, q));
    Classification {
        integral,
        arc,
        general_position,
        max_line_multiplicity: max_line_multiplicity(ring, pts),
        determinant_based: !ring.is_field(),
    }
}

fn any_triple(pts: &[Point], mut f: impl FnMut(Point, Point, Point) -> bool) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if f(pts[i], pts[j], pts[k]) {
                    return true;
                }
            }
        }
    }
    false
}

fn any_quadruple(pts: &[Point], mut f: impl FnMut([Point; 4]) -> bool) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if f([pts[i], pts[j], pts[k], pts[l]]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Largest number of points on a common line. Over fields lines are
/// counted by hashing `(anchor, direction)`; elsewhere the determinant test
/// against each pair is used.
pub fn max_line_multiplicity(ring: &Ring, pts: &[Point]) -> usize {
    let n = pts.len();
    if n <= 2 {
        return n;
    }
    let mut best = 2;
    if ring.is_field() {
        let mut counts: HashMap<Direction, usize> = HashMap::new();
        for i in 0..n {
            counts.clear();
            for j in i + 1..n {
                let d = direction_of_difference(ring, ring.sub(pts[j].x, pts[i].x), ring.sub(pts[j].y, pts[i].y));
                *counts.entry(d).or_default() += 1;
            }
            if let Some(&m) = counts.values().max() {
                best = best.max(m + 1);
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                let m = (0..n)
                    .filter(|&k| k != i && k != j && collinear(ring, pts[i], pts[j], pts[k]))
                    .count();
                best = best.max(m + 2);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn pt(x: u32, y: u32) -> Point {
        Point::from_reps(x, y)
    }

    pub(crate) fn seven_point_witness() -> Vec<(u32, u32)> {
        vec![(0, 0), (0, 1), (2, 0), (9, 18), (1, 9), (17, 1), (17, 6)]
    }

    #[test]
    fn d2_and_delta_examples() {
        let r13 = fp(13);
        assert_eq!(d2(&r13, pt(0, 0), pt(2, 3)), Elem::ZERO);
        assert!(delta(&r13, pt(0, 0), pt(2, 3)));
        assert!(!delta_with(&r13, pt(0, 0), pt(2, 3), Convention::Quadrance));
        assert_eq!(d2(&r13, pt(4, 5), pt(4, 5)), Elem::ZERO);
        let r7 = fp(7);
        assert_eq!(d2(&r7, pt(0, 0), pt(1, 1)), Elem::from_rep(2));
        assert!(!delta(&r7, pt(0, 0), pt(1, 2)));
        for r in [fp(7), Ring::modular(25).unwrap(), Ring::extension_field(3, 2).unwrap()] {
            assert!(delta(&r, pt(0, 0), pt(0, 1)));
        }
    }

    #[test]
    fn d2_general_checks_dimension() {
        let r = fp(7);
        let u = [Elem::from_rep(1), Elem::from_rep(2), Elem::from_rep(3)];
        let v = [Elem::from_rep(0); 3];
        assert_eq!(d2_general(&r, &u, &v).unwrap(), Elem::from_rep(0));
        assert!(matches!(
            d2_general(&r, &u, &v[..2]),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn direction_examples() {
        assert_eq!(direction(&fp(13), pt(0, 0), pt(0, 5)).unwrap(), Direction::Infinity);
        assert_eq!(
            direction(&fp(7), pt(0, 0), pt(1, 6)).unwrap(),
            Direction::Finite(Elem::from_rep(6))
        );
        let z25 = Ring::modular(25).unwrap();
        assert_eq!(direction(&z25, pt(0, 0), pt(5, 3)).unwrap(), Direction::NonUnit);
        assert!(matches!(
            direction(&fp(7), pt(1, 1), pt(1, 1)),
            Err(Error::IdenticalPoints)
        ));
        assert!(Direction::Finite(Elem::from_rep(6)) < Direction::Infinity);
        assert!(Direction::Finite(Elem::ZERO) < Direction::Finite(Elem::from_rep(1)));
        assert_eq!(Direction::NonUnit.partial_cmp(&Direction::Infinity), None);
    }

    #[test]
    fn integral_direction_examples() {
        let f = |d: u32| Direction::Finite(Elem::from_rep(d));
        assert_eq!(
            integral_directions(&fp(7)).unwrap(),
            vec![f(0), f(1), f(6), Direction::Infinity]
        );
        assert_eq!(integral_directions(&fp(13)).unwrap().len(), 8);
        assert_eq!(integral_directions(&fp(3)).unwrap(), vec![f(0), Direction::Infinity]);
        assert_eq!(
            integral_directions_with(&fp(13), Convention::Quadrance).unwrap().len(),
            6
        );
        assert!(integral_directions(&Ring::modular(9).unwrap()).is_err());
    }

    #[test]
    fn collinear_examples() {
        let r = fp(29);
        assert!(collinear(&r, pt(0, 0), pt(1, 1), pt(2, 2)));
        assert!(!collinear(&r, pt(0, 0), pt(1, 0), pt(0, 1)));
        assert!(collinear(&r, pt(0, 0), pt(1, 12), pt(2, 24)));
    }

    #[test]
    fn concircular_examples() {
        let r = fp(29);
        let m = 28;
        assert!(concircular(&r, [pt(1, 0), pt(0, 1), pt(m, 0), pt(0, m)]));
        assert!(concircular(&r, [pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)]));
        assert!(!concircular(&r, [pt(0, 0), pt(0, 1), pt(2, 0), pt(9, 18)]));
    }

    #[test]
    fn classify_examples() {
        let r = fp(29);
        let witness7 = PointSet::from_reps(r.clone(), &seven_point_witness()).unwrap();
        let c = classify(&witness7);
        assert!(c.integral && c.arc && c.general_position);
        assert_eq!(c.max_line_multiplicity, 2);

        let line = PointSet::from_points(fp(7), (0..7).map(|x| pt(x, 0))).unwrap();
        let c = classify(&line);
        assert!(c.integral && !c.arc);
        assert_eq!(c.max_line_multiplicity, 7);
    }

    #[test]
    fn point_set_rejects_duplicates_and_foreign_points() {
        let r = fp(5);
        assert!(matches!(
            PointSet::from_reps(r.clone(), &[(1, 1), (1, 1)]),
            Err(Error::DuplicatePoint(1, 1))
        ));
        assert!(PointSet::from_reps(r.clone(), &[(5, 1)]).is_err());
        let a = PointSet::from_reps(r.clone(), &[(1, 1), (2, 2)]).unwrap();
        let b = PointSet::from_reps(r, &[(2, 2), (1, 1)]).unwrap();
        assert!(a.same_set(&b));
        assert_ne!(a, b);
        let c = PointSet::from_reps(fp(7), &[(1, 1)]).unwrap();
        assert!(a.ensure_same_ring(&c).is_err());
    }

    #[test]
    fn characteristic_two_makes_every_pair_integral() {
        for m in 1..=4usize {
            let r = Ring::modular(2).unwrap();
            let all: Vec<Vec<Elem>> = (0..1u32 << m)
                .map(|bits| (0..m).map(|i| Elem::from_rep((bits >> i) & 1)).collect())
                .collect();
            for u in &all {
                for v in &all {
                    assert!(delta_general(&r, u, v).unwrap());
                }
            }
        }
        for r in [
            Ring::extension_field(2, 2).unwrap(),
            Ring::extension_field(2, 3).unwrap(),
        ] {
            for a in r.elements() {
                for b in r.elements() {
                    assert!(delta(&r, pt(0, 0), Point::new(a, b)));
                }
            }
        }
    }

    #[test]
    fn integral_direction_counts() {
        for q in crate::gauss::tests::odd_prime_powers(121) {
            let r = Ring::new(&format!("Fq:{q}").parse().unwrap()).unwrap();
            let expected = if r.sqrt_of_minus_one().is_some() {
                (q + 3) / 2
            } else {
                q.div_ceil(2)
            };
            assert_eq!(integral_directions(&r).unwrap().len() as u32, expected, "q = {q}");
        }
    }

    /// Parametric collinearity: `a + w t1 = u`, `b + w t2 = v` for some
    /// `a, b, t1, t2` and per-point `w`.
    fn parametric_collinear(r: &Ring, pts: [Point; 3]) -> bool {
        for a in r.elements() {
            for b in r.elements() {
                for t1 in r.elements() {
                    for t2 in r.elements() {
                        let ok = pts.iter().all(|p| {
                            r.elements()
                                .any(|w| r.add(a, r.mul(w, t1)) == p.x && r.add(b, r.mul(w, t2)) == p.y)
                        });
                        if ok {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn collinear_determinant_matches_parametric_definition_small() {
        // The full-size sweep runs in the acceptance suite; here a small field
        // and a fixed first point keep it fast.
        for q in [3u32, 4, 5] {
            let r = Ring::new(&format!("Fq:{q}").parse().unwrap()).unwrap();
            let all: Vec<Point> = r
                .elements()
                .flat_map(|a| r.elements().map(move |b| Point::new(a, b)))
                .collect();
            let p0 = all[0];
            for &p1 in &all {
                for &p2 in &all {
                    assert_eq!(
                        collinear(&r, p0, p1, p2),
                        parametric_collinear(&r, [p0, p1, p2]),
                        "q = {q}: {p0} {p1} {p2}"
                    );
                }
            }
        }
    }
}
