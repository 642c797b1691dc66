//! Affine maps of `R^2` that respect the integral-distance predicate.
//!
//! Matrices act on column vectors: `[[a, b], [c, d]]` sends `(x, y)` to
//! `(a x + b y, c x + d y)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::gauss::{g_inv, g_mul, Gauss};
use crate::plane::{d2, delta, Point, PointSet};
use crate::rings::{Elem, Ring};

/// Default largest `q` accepted by [`generated_group`].
pub const GENERATED_GROUP_BOUND: u32 = 49;
/// Largest `q` for which [`full_delta_group`] enumerates `GL(2, q)`.
pub const FULL_GROUP_BOUND: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Mat2 {
    pub const fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(ring: &Ring) -> Self {
        Mat2::new(ring.one(), ring.zero(), ring.zero(), ring.one())
    }

    pub fn swap(ring: &Ring) -> Self {
        Mat2::new(ring.zero(), ring.one(), ring.one(), ring.zero())
    }

    /// `[[a, b], [-b, a]]`
    pub fn rotation(ring: &Ring, a: Elem, b: Elem) -> Self {
        Mat2::new(a, b, ring.neg(b), a)
    }

    /// Multiplication by `y` in `R'`.
    pub fn gauss_mul(ring: &Ring, y: Gauss) -> Self {
        Mat2::new(y.re, ring.neg(y.im), y.im, y.re)
    }

    pub fn mul(&self, ring: &Ring, o: &Mat2) -> Mat2 {
        let dot = |p, q, r, s| ring.add(ring.mul(p, q), ring.mul(r, s));
        Mat2::new(
            dot(self.a, o.a, self.b, o.c),
            dot(self.a, o.b, self.b, o.d),
            dot(self.c, o.a, self.d, o.c),
            dot(self.c, o.b, self.d, o.d),
        )
    }

    pub fn det(&self, ring: &Ring) -> Elem {
        ring.sub(ring.mul(self.a, self.d), ring.mul(self.b, self.c))
    }

    pub fn apply(&self, ring: &Ring, p: Point) -> Point {
        Point::new(
            ring.add(ring.mul(self.a, p.x), ring.mul(self.b, p.y)),
            ring.add(ring.mul(self.c, p.x), ring.mul(self.d, p.y)),
        )
    }

    pub fn reps(&self) -> [u32; 4] {
        [self.a.rep(), self.b.rep(), self.c.rep(), self.d.rep()]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a.rep(),
            self.b.rep(),
            self.c.rep(),
            self.d.rep()
        )
    }
}

/// `p -> M (swap(p^(char^j))) + t`: Frobenius first, then the optional
/// coordinate swap, then the matrix, then the translation.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    pub translation: Point,
    pub matrix: Mat2,
    pub swap: bool,
    pub frob_power: u32,
}

impl AffineMap {
    pub fn identity(ring: &Ring) -> Self {
        AffineMap {
            translation: Point::new(ring.zero(), ring.zero()),
            matrix: Mat2::identity(ring),
            swap: false,
            frob_power: 0,
        }
    }

    pub fn translation(ring: &Ring, t: Point) -> Self {
        AffineMap {
            translation: t,
            ..AffineMap::identity(ring)
        }
    }

    pub fn linear(ring: &Ring, m: Mat2) -> Self {
        AffineMap {
            matrix: m,
            ..AffineMap::identity(ring)
        }
    }

    /// Checks that the map is a bijection respecting the integral-distance
    /// predicate. The matrix part is tested against every vector of `R^2`.
    pub fn validate(&self, ring: &Ring) -> Result<()> {
        for e in [
            self.translation.x,
            self.translation.y,
            self.matrix.a,
            self.matrix.b,
            self.matrix.c,
            self.matrix.d,
        ] {
            if !ring.contains(e) {
                return Err(Error::InvalidMap(format!("entry {} outside {ring}", e.rep())));
            }
        }
        if !self.frob_power.is_multiple_of(ring.degree().max(1)) && !ring.is_field() {
            return Err(Error::InvalidMap("Frobenius needs a field".into()));
        }
        if !ring.is_unit(self.matrix.det(ring)) {
            return Err(Error::InvalidMap(format!("matrix {} is singular", self.matrix)));
        }
        if !preserves_delta(ring, &self.matrix) {
            return Err(Error::InvalidMap(format!(
                "matrix {} does not preserve integral distances",
                self.matrix
            )));
        }
        Ok(())
    }

    pub fn apply(&self, ring: &Ring, p: Point) -> Point {
        let mut q = p;
        if !self.frob_power.is_multiple_of(ring.degree().max(1)) {
            q = Point::new(
                ring.frobenius(q.x, self.frob_power).expect("validated"),
                ring.frobenius(q.y, self.frob_power).expect("validated"),
            );
        }
        if self.swap {
            q = Point::new(q.y, q.x);
        }
        let q = self.matrix.apply(ring, q);
        Point::new(ring.add(q.x, self.translation.x), ring.add(q.y, self.translation.y))
    }

    pub fn apply_set(&self, set: &PointSet) -> Result<PointSet> {
        let ring = set.ring();
        self.validate(ring)?;
        PointSet::from_points(ring.clone(), set.points().iter().map(|&p| self.apply(ring, p)))
    }

    /// Pointwise equality on the spanning triple `(0,0), (1,0), (0,1)`, plus
    /// a primitive element when Frobenius powers are involved.
    pub fn same_map(&self, other: &AffineMap, ring: &Ring) -> bool {
        let (z, o) = (ring.zero(), ring.one());
        let mut probes = vec![Point::new(z, z), Point::new(o, z), Point::new(z, o)];
        if ring.degree() > 1 {
            let g = ring
                .elements()
                .find(|&x| x != z && multiplicative_order(ring, x) == ring.order() - 1);
            if let Some(g) = g {
                probes.push(Point::new(g, z));
                probes.push(Point::new(z, g));
            }
        }
        probes.iter().all(|&p| self.apply(ring, p) == other.apply(ring, p))
    }
}

fn multiplicative_order(ring: &Ring, x: Elem) -> u32 {
    let mut acc = x;
    let mut k = 1;
    while acc != ring.one() {
        acc = ring.mul(acc, x);
        k += 1;
        if k > ring.order() {
            return 0;
        }
    }
    k
}

/// Integral-distance indicator of `(0,0)` and `v`, indexed by
/// `x * |R| + y`.
fn origin_delta_table(ring: &Ring) -> Vec<bool> {
    let n = ring.order() as usize;
    let origin = Point::new(ring.zero(), ring.zero());
    let mut t = vec![false; n * n];
    for x in ring.elements() {
        for y in ring.elements() {
            t[x.rep() as usize * n + y.rep() as usize] = delta(ring, origin, Point::new(x, y));
        }
    }
    t
}

fn preserves_delta_with(ring: &Ring, m: &Mat2, table: &[bool]) -> bool {
    let n = ring.order() as usize;
    ring.elements().all(|x| {
        ring.elements().all(|y| {
            let w = m.apply(ring, Point::new(x, y));
            table[x.rep() as usize * n + y.rep() as usize] == table[w.x.rep() as usize * n + w.y.rep() as usize]
        })
    })
}

/// Whether `v -> M v` preserves the integral-distance predicate. Since
/// `M u - M v = M (u - v)` it suffices to compare against the origin.
pub fn preserves_delta(ring: &Ring, m: &Mat2) -> bool {
    preserves_delta_with(ring, m, &origin_delta_table(ring))
}

/// The matrix part of an automorphism group.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub ring: Ring,
    /// Sorted by entry representatives.
    pub matrices: Vec<Mat2>,
    pub order: usize,
}

impl AutomorphismGroup {
    fn from_matrices(ring: &Ring, mut matrices: Vec<Mat2>) -> Self {
        matrices.sort();
        matrices.dedup();
        AutomorphismGroup {
            ring: ring.clone(),
            order: matrices.len(),
            matrices,
        }
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.matrices.binary_search(m).is_ok()
    }

    pub fn same_matrices(&self, other: &AutomorphismGroup) -> bool {
        self.matrices == other.matrices
    }

    /// Closed under products and contains the identity.
    pub fn is_closed(&self) -> bool {
        let ring = &self.ring;
        self.contains(&Mat2::identity(ring))
            && self
                .matrices
                .iter()
                .all(|m| self.matrices.iter().all(|n| self.contains(&m.mul(ring, n))))
    }
}

fn closure(ring: &Ring, gens: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2::identity(ring);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = m.mul(ring, g);
            if seen.insert(p) {
                queue.push_back(p);
            }
        }
    }
    seen.into_iter().collect()
}

/// Rotation-type generators `[[a, b], [-b, a]]` with `a^2 + b^2` a square
/// unit, together with the coordinate swap.
fn rotation_generators(ring: &Ring) -> Vec<Mat2> {
    let mut gens = vec![Mat2::swap(ring)];
    for a in ring.elements() {
        for b in ring.elements() {
            let n = ring.add(ring.square(a), ring.square(b));
            if ring.is_unit(n) && ring.is_square(n) {
                gens.push(Mat2::rotation(ring, a, b));
            }
        }
    }
    gens
}

/// `[[a, b], [+-b, +-a]]` with independent signs, `a^2 + b^2` a square and
/// nonzero determinant. These exist beyond the rotations only for `q = 5, 9`.
fn signed_generators(ring: &Ring) -> Vec<Mat2> {
    let mut gens = Vec::new();
    for a in ring.elements() {
        for b in ring.elements() {
            if !ring.is_square(ring.add(ring.square(a), ring.square(b))) {
                continue;
            }
            for c in [b, ring.neg(b)] {
                for d in [a, ring.neg(a)] {
                    let m = Mat2::new(a, b, c, d);
                    if m.det(ring) != ring.zero() {
                        gens.push(m);
                    }
                }
            }
        }
    }
    gens
}

/// Closure of the standard generators over an odd-characteristic field with
/// `q <= GENERATED_GROUP_BOUND`. For `q = 5` and `q = 9` the additional
/// automorphisms of those two fields are included.
pub fn generated_group(ring: &Ring) -> Result<AutomorphismGroup> {
    generated_group_bounded(ring, GENERATED_GROUP_BOUND)
}

pub fn generated_group_bounded(ring: &Ring, bound: u32) -> Result<AutomorphismGroup> {
    require_odd_field(ring)?;
    let q = ring.order();
    if q > bound {
        return Err(Error::BoundExceeded {
            what: "generated group field order",
            value: q as u64,
            limit: bound as u64,
        });
    }
    let mut gens = rotation_generators(ring);
    if q == 5 || q == 9 {
        gens.extend(signed_generators(ring));
    }
    if q == 9 {
        let y = ring
            .elements()
            .find(|&x| x != ring.zero() && multiplicative_order(ring, x) == q - 1)
            .expect("cyclic multiplicative group");
        gens.push(Mat2::new(ring.one(), ring.zero(), ring.zero(), ring.square(y)));
    }
    Ok(AutomorphismGroup::from_matrices(ring, closure(ring, &gens)))
}

/// The automorphisms known for an arbitrary ring: multiplication by
/// `y in R'` with `y conj(y)` a square unit, and the coordinate swap.
/// Over `Z_n` nothing more is known, so isomorphism tests there are only
/// up to this subgroup.
pub fn known_group(ring: &Ring) -> Result<AutomorphismGroup> {
    let n = ring.order() as u64;
    if n * n > 1 << 20 {
        return Err(Error::BoundExceeded {
            what: "known group ring order squared",
            value: n * n,
            limit: 1 << 20,
        });
    }
    let rotations: Vec<Mat2> = rotation_generators(ring).into_iter().skip(1).collect();
    let swap = Mat2::swap(ring);
    let mut all = rotations.clone();
    all.extend(rotations.iter().map(|m| m.mul(ring, &swap)));
    Ok(AutomorphismGroup::from_matrices(ring, all))
}

/// Every `M in GL(2, q)` preserving the integral-distance predicate, by
/// enumeration. Requires an odd-characteristic field with
/// `q <= FULL_GROUP_BOUND`.
pub fn full_delta_group(ring: &Ring) -> Result<AutomorphismGroup> {
    require_odd_field(ring)?;
    let q = ring.order();
    if q > FULL_GROUP_BOUND {
        return Err(Error::BoundExceeded {
            what: "full group field order",
            value: q as u64,
            limit: FULL_GROUP_BOUND as u64,
        });
    }
    let table = origin_delta_table(ring);
    let n = q as usize;
    let is_int = |x: Elem, y: Elem| table[x.rep() as usize * n + y.rep() as usize];
    let mut out = Vec::new();
    for a in ring.elements() {
        for c in ring.elements() {
            // Image of (1, 0) must be at integral distance from the origin.
            if !is_int(a, c) {
                continue;
            }
            for b in ring.elements() {
                for d in ring.elements() {
                    let m = Mat2::new(a, b, c, d);
                    if m.det(ring) != ring.zero() && preserves_delta_with(ring, &m, &table) {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(AutomorphismGroup::from_matrices(ring, out))
}

fn require_odd_field(ring: &Ring) -> Result<()> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    if ring.characteristic() == 2 {
        return Err(Error::Unsupported(
            "every map preserves integral distances in characteristic 2".into(),
        ));
    }
    Ok(())
}

/// An automorphism sending `u` to `(0,0)` and `v` to `(0,1)` when
/// `d^2(u, v)` is a nonzero square, or `v` to `(1, w)` with `w` the
/// canonical square root of -1 when `d^2(u, v) = 0`.
pub fn pair_normalizer(ring: &Ring, u: Point, v: Point) -> Result<AffineMap> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    if u == v {
        return Err(Error::IdenticalPoints);
    }
    if !delta(ring, u, v) {
        return Err(Error::NotIntegral);
    }
    let w = Gauss::new(ring.sub(v.x, u.x), ring.sub(v.y, u.y));
    let m = match g_inv(ring, w) {
        Some(wi) => Mat2::gauss_mul(ring, g_mul(ring, Gauss::i(ring), wi)),
        None => {
            let omega = ring.sqrt_of_minus_one().expect("isotropic vector");
            let s = ring.inv(w.re).expect("both coordinates nonzero");
            let sy = if ring.mul(s, w.im) == omega { s } else { ring.neg(s) };
            Mat2::new(s, ring.zero(), ring.zero(), sy)
        }
    };
    let mu = m.apply(ring, u);
    Ok(AffineMap {
        translation: Point::new(ring.neg(mu.x), ring.neg(mu.y)),
        matrix: m,
        swap: false,
        frob_power: 0,
    })
}

/// Isomorphism up to translations, the matrix group and Frobenius powers.
/// Fields with `q <= 13` use the full enumerated group; larger fields use
/// the generated group, which is the whole group there except for `q = 5, 9`.
/// Other rings use [`known_group`], so `false` only means "not isomorphic
/// under known automorphisms".
pub fn are_isomorphic(p1: &PointSet, p2: &PointSet) -> Result<bool> {
    p1.ensure_same_ring(p2)?;
    let ring = p1.ring();
    let group = if ring.is_field() && ring.characteristic() != 2 {
        if ring.order() <= FULL_GROUP_BOUND {
            full_delta_group(ring)?
        } else {
            generated_group(ring)?
        }
    } else if ring.characteristic() == 2 && ring.is_field() {
        return Err(Error::Unsupported(
            "isomorphism in characteristic 2 is plain affine equivalence".into(),
        ));
    } else {
        known_group(ring)?
    };
    Ok(find_isomorphism(p1, p2, &group).is_some())
}

/// An affine map from the group sending `p1` onto `p2` as a set.
pub fn find_isomorphism(p1: &PointSet, p2: &PointSet, group: &AutomorphismGroup) -> Option<AffineMap> {
    let ring = p1.ring();
    if p1.len() != p2.len() {
        return None;
    }
    if p1.is_empty() {
        return Some(AffineMap::identity(ring));
    }
    let target: HashSet<Point> = p2.points().iter().copied().collect();
    let frob_powers = if ring.is_field() { ring.degree() } else { 1 };
    let mut images = Vec::with_capacity(p1.len());
    for j in 0..frob_powers {
        for m in &group.matrices {
            let f = AffineMap {
                translation: Point::new(ring.zero(), ring.zero()),
                matrix: *m,
                swap: false,
                frob_power: j,
            };
            images.clear();
            images.extend(p1.points().iter().map(|&p| f.apply(ring, p)));
            let a0 = images[0];
            for &b in p2.points() {
                let t = Point::new(ring.sub(b.x, a0.x), ring.sub(b.y, a0.y));
                let hit = images
                    .iter()
                    .all(|&p| target.contains(&Point::new(ring.add(p.x, t.x), ring.add(p.y, t.y))));
                if hit {
                    return Some(AffineMap { translation: t, ..f });
                }
            }
        }
    }
    None
}

/// Counts of matrices by determinant class, for reporting.
pub fn determinant_profile(group: &AutomorphismGroup) -> HashMap<bool, usize> {
    let ring = &group.ring;
    let mut out = HashMap::new();
    for m in &group.matrices {
        *out.entry(ring.is_square(m.det(ring))).or_insert(0) += 1;
    }
    out
}

/// Squared distance is scaled by `det` for rotation-type matrices; used by
/// the tests as an oracle.
pub fn scales_distances(ring: &Ring, m: &Mat2, u: Point, v: Point) -> bool {
    let before = d2(ring, u, v);
    let after = d2(ring, m.apply(ring, u), m.apply(ring, v));
    after == ring.mul(before, m.det(ring))
}
