//! Explicit families of large integral point sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::gauss::{g_mul, rho_extract, unit_circle, Gauss};
use crate::plane::{delta_with, Convention, Point, PointSet};
use crate::rings::{is_prime, mod_inverse, Elem, Ring, RingSpec};

/// `{(r, 0) : r in R}`.
pub fn line_set(ring: &Ring) -> PointSet {
    let pts = ring.elements().map(|r| Point::new(r, ring.zero()));
    PointSet::from_points(ring.clone(), pts).expect("distinct points")
}

/// The cross `(1 +- w i) * squares`, i.e. `(s, w s)` and `(s, -w s)` for
/// every square `s`, where `w` is the canonical square root of -1.
pub fn cross_set(ring: &Ring) -> Result<PointSet> {
    let w = ring
        .sqrt_of_minus_one()
        .ok_or_else(|| Error::NoSqrtMinusOne(ring.to_string()))?;
    let mut pts = Vec::new();
    for r in ring.elements() {
        let s = ring.square(r);
        let ws = ring.mul(w, s);
        pts.push(Point::new(s, ws));
        pts.push(Point::new(s, ring.neg(ws)));
    }
    PointSet::from_points_dedup(ring.clone(), pts)
}

/// Elements of the subfield `F_{sqrt q}` of `F_q`, in canonical order.
pub fn half_subfield(ring: &Ring) -> Result<Vec<Elem>> {
    let r = ring.degree();
    if !ring.is_field() || r % 2 == 1 {
        return Err(Error::Unsupported(format!("{ring} has no subfield of index 2")));
    }
    let root = (ring.characteristic() as u64).pow(r / 2);
    Ok(ring.elements().filter(|&x| ring.pow(x, root) == x).collect())
}

/// `{(a, b) : a, b in F_{sqrt q}}`; with `twisted` the second coordinate is
/// multiplied by the canonical square root of -1 (requires
/// `sqrt q = 1 mod 4`).
pub fn subfield_grid(ring: &Ring, twisted: bool) -> Result<PointSet> {
    let sub = half_subfield(ring)?;
    let scale = if twisted {
        let root = sub.len() as u32;
        if root % 4 != 1 {
            return Err(Error::Unsupported(format!(
                "twisted grid needs sqrt(q) = 1 mod 4, got {root}"
            )));
        }
        ring.sqrt_of_minus_one().expect("q = 1 mod 4")
    } else {
        ring.one()
    };
    let pts = sub
        .iter()
        .flat_map(|&a| sub.iter().map(move |&b| (a, b)))
        .map(|(a, b)| Point::new(a, ring.mul(scale, b)));
    PointSet::from_points(ring.clone(), pts)
}

/// Powers `z^(2i)` (or `z^(2i+1)` with `odd`) of the canonical generator
/// of the norm-one group.
pub fn circle_set(ring: &Ring, odd: bool) -> Result<PointSet> {
    let group = unit_circle(ring);
    let g = group
        .generator
        .ok_or_else(|| Error::Unsupported(format!("unit circle of {ring} is not cyclic")))?;
    let n = group.len();
    let g2 = g_mul(ring, g, g);
    let mut z = if odd { g } else { Gauss::one(ring) };
    let mut pts = Vec::with_capacity(n / 2 + 1);
    for _ in 0..n.div_ceil(2) {
        pts.push(rho_extract(z));
        z = g_mul(ring, z, g2);
    }
    PointSet::from_points_dedup(ring.clone(), pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZnFamily {
    /// `{(i, j p^ceil(r/2))}`
    Lattice,
    /// `{(i, i w + j p^ceil(r/2))}`
    Sheared,
    /// The cross over `Z_p` plus the sublattice `{(p a, p b)}` (`r = 2`).
    CrossCosets,
}

impl fmt::Display for ZnFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZnFamily::Lattice => "i",
            ZnFamily::Sheared => "ii",
            ZnFamily::CrossCosets => "iii",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ZnFamilies {
    pub sets: Vec<(ZnFamily, PointSet)>,
    /// Families that do not exist for these parameters, with the reason.
    pub skipped: Vec<(ZnFamily, String)>,
}

impl ZnFamilies {
    pub fn get(&self, family: ZnFamily) -> Option<&PointSet> {
        self.sets.iter().find(|(f, _)| *f == family).map(|(_, s)| s)
    }
}

/// The three large families over `Z_{p^r}`, each of cardinality
/// `p^r * p^floor(r/2)`.
pub fn zn_families(p: u32, r: u32) -> Result<ZnFamilies> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p == 2 {
        return Err(Error::Unsupported("families need an odd prime".into()));
    }
    if r < 2 {
        return Err(Error::InvalidDegree(r));
    }
    let n = p.checked_pow(r).ok_or(Error::RingTooLarge(u64::MAX))?;
    let ring = Ring::modular(n)?;
    let step = p.pow(r.div_ceil(2));
    let multiples = p.pow(r / 2);
    let mut out = ZnFamilies {
        sets: Vec::new(),
        skipped: Vec::new(),
    };

    let lattice = (0..n).flat_map(|i| (0..multiples).map(move |j| Point::from_reps(i, j * step)));
    out.sets
        .push((ZnFamily::Lattice, PointSet::from_points(ring.clone(), lattice)?));

    match ring.sqrt_of_minus_one() {
        Some(w) => {
            let pts = (0..n).flat_map(|i| {
                let ring = &ring;
                (0..multiples).map(move |j| {
                    let y = ring.add(ring.mul(Elem::from_rep(i), w), Elem::from_rep(j * step));
                    Point::new(Elem::from_rep(i), y)
                })
            });
            out.sets.push((
                ZnFamily::Sheared,
                PointSet::from_points(ring.clone(), pts.collect::<Vec<_>>())?,
            ));
        }
        None => out
            .skipped
            .push((ZnFamily::Sheared, format!("-1 is not a square in {ring}"))),
    }

    if r != 2 {
        out.skipped
            .push((ZnFamily::CrossCosets, "only defined for r = 2".into()));
    } else {
        match cross_set(&Ring::modular(p)?) {
            Ok(base) => {
                let mut pts = Vec::new();
                for q in base.points() {
                    for a in 0..p {
                        for b in 0..p {
                            pts.push(Point::from_reps(q.x.rep() + p * a, q.y.rep() + p * b));
                        }
                    }
                }
                out.sets
                    .push((ZnFamily::CrossCosets, PointSet::from_points(ring.clone(), pts)?));
            }
            Err(_) => out
                .skipped
                .push((ZnFamily::CrossCosets, format!("-1 is not a square in Z_{p}"))),
        }
    }
    Ok(out)
}

/// `P1 x P2` over the product ring `R1 x R2`.
pub fn product_set(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    let ring = Ring::product(a.ring(), b.ring())?;
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for p in a.points() {
        for q in b.points() {
            let x = ring.join(p.x, q.x).expect("product ring");
            let y = ring.join(p.y, q.y).expect("product ring");
            pts.push(Point::new(x, y));
        }
    }
    PointSet::from_points(ring, pts)
}

/// Re-encodes a point set over `Z_a x Z_b` with `gcd(a, b) = 1` in
/// `Z_{ab}` via the Chinese remainder theorem.
pub fn crt_flatten(set: &PointSet) -> Result<PointSet> {
    let ring = set.ring();
    let (ra, rb) = ring
        .factors()
        .ok_or_else(|| Error::Unsupported(format!("{ring} is not a product ring")))?;
    let (a, b) = match (ra.spec(), rb.spec()) {
        (RingSpec::ModularRing(a) | RingSpec::PrimeField(a), RingSpec::ModularRing(b) | RingSpec::PrimeField(b)) => {
            (*a as u64, *b as u64)
        }
        _ => return Err(Error::Unsupported("CRT needs two residue-class rings".into())),
    };
    let inv_a =
        mod_inverse(a % b, b).ok_or_else(|| Error::Unsupported(format!("moduli {a} and {b} are not coprime")))?;
    let n = a * b;
    let target = Ring::modular(n as u32)?;
    // x = u + a * ((v - u) * a^-1 mod b)
    let crt = |e: Elem| {
        let (u, v) = ring.split(e).expect("product ring");
        let (u, v) = (u.rep() as u64, v.rep() as u64);
        let k = ((v + b - u % b) % b) * inv_a % b;
        Elem::from_rep(((u + a * k) % n) as u32)
    };
    let pts = set.points().iter().map(|p| Point::new(crt(p.x), crt(p.y)));
    PointSet::from_points(target, pts)
}

/// True iff no point outside the set is at integral distance to every
/// member.
pub fn is_maximal(set: &PointSet) -> bool {
    is_maximal_with(set, Convention::Integral)
}

pub fn is_maximal_with(set: &PointSet, conv: Convention) -> bool {
    extension_point(set, conv).is_none()
}

/// Some point that extends the set, if one exists.
pub fn extension_point(set: &PointSet, conv: Convention) -> Option<Point> {
    let ring = set.ring();
    let members: std::collections::HashSet<Point> = set.points().iter().copied().collect();
    for x in ring.elements() {
        for y in ring.elements() {
            let c = Point::new(x, y);
            if members.contains(&c) {
                continue;
            }
            if set.points().iter().all(|&p| delta_with(ring, c, p, conv)) {
                return Some(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorph::AffineMap;
    use crate::plane::classify;

    fn fp(p: u32) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    #[test]
    fn line_examples() {
        let l = line_set(&fp(7));
        assert_eq!(l.len(), 7);
        assert!(classify(&l).integral);
        assert_eq!(line_set(&Ring::modular(4).unwrap()).len(), 4);
        assert!(!classify(&line_set(&fp(13))).arc);
    }

    #[test]
    fn cross_examples() {
        let c = cross_set(&fp(29)).unwrap();
        assert_eq!(c.len(), 29);
        for p in [(0, 0), (1, 12), (1, 17)] {
            assert!(c.contains(Point::from_reps(p.0, p.1)));
        }
        assert!(classify(&c).integral);
        assert_eq!(cross_set(&Ring::modular(25).unwrap()).unwrap().len(), 21);
        assert!(matches!(cross_set(&fp(7)), Err(Error::NoSqrtMinusOne(_))));
    }

    #[test]
    fn cross_set_matches_reference_plot() {
        let fig1 = [
            (0, 0),
            (1, 12),
            (4, 19),
            (5, 2),
            (6, 14),
            (7, 26),
            (9, 21),
            (13, 11),
            (16, 18),
            (20, 8),
            (22, 3),
            (23, 15),
            (24, 27),
            (25, 10),
            (28, 17),
            (1, 17),
            (4, 10),
            (5, 27),
            (7, 3),
            (9, 8),
            (13, 18),
            (16, 11),
            (20, 21),
            (22, 26),
            (23, 14),
            (24, 2),
            (25, 19),
            (28, 12),
        ];
        let c = cross_set(&fp(29)).unwrap();
        for p in fig1 {
            assert!(c.contains(Point::from_reps(p.0, p.1)), "{p:?}");
        }
        // The reference listing repeats (6, 14); its partner on the other line is (6, 15).
        assert!(c.contains(Point::from_reps(6, 15)));
    }

    #[test]
    fn subfield_grid_examples() {
        let f9 = Ring::extension_field(3, 2).unwrap();
        let g = subfield_grid(&f9, false).unwrap();
        assert_eq!(g.len(), 9);
        assert!(classify(&g).integral);
        let f25 = Ring::extension_field(5, 2).unwrap();
        assert_eq!(subfield_grid(&f25, false).unwrap().len(), 25);
        let t = subfield_grid(&f25, true).unwrap();
        assert_eq!(t.len(), 25);
        assert!(classify(&t).integral);
        assert!(subfield_grid(&fp(7), false).is_err());
        assert!(subfield_grid(&f9, true).is_err());
    }

    #[test]
    fn circle_examples() {
        let fig2 = [
            (2, 8),
            (2, 22),
            (8, 2),
            (8, 28),
            (11, 11),
            (11, 19),
            (14, 15),
            (15, 14),
            (15, 16),
            (16, 15),
            (19, 11),
            (19, 19),
            (22, 2),
            (22, 28),
            (28, 8),
            (28, 22),
        ];
        // The reference plot is centred on (15, 15).
        let r = fp(31);
        let c = circle_set(&r, false).unwrap();
        let shifted = AffineMap::translation(&r, Point::from_reps(15, 15))
            .apply_set(&c)
            .unwrap();
        let expected = PointSet::from_reps(r.clone(), &fig2).unwrap();
        assert!(shifted.same_set(&expected));
        assert_eq!(circle_set(&fp(13), false).unwrap().len(), 6);
        let c19 = circle_set(&fp(19), false).unwrap();
        let k = classify(&c19);
        assert!(k.integral && k.arc);
        assert_eq!(c19.len(), 10);
    }

    #[test]
    fn zn_family_examples() {
        let fam = zn_families(5, 2).unwrap();
        assert_eq!(fam.sets.len(), 3);
        for (_, s) in &fam.sets {
            assert_eq!(s.len(), 125);
        }
        assert!(classify(fam.get(ZnFamily::Lattice).unwrap()).integral);
        let fam3 = zn_families(3, 2).unwrap();
        let lat = fam3.get(ZnFamily::Lattice).unwrap();
        assert_eq!(lat.len(), 27);
        assert!(lat.contains(Point::from_reps(4, 3)));
        assert!(classify(lat).integral);
        assert_eq!(fam3.skipped.len(), 2);
        let fam33 = zn_families(3, 3).unwrap();
        assert_eq!(fam33.get(ZnFamily::Lattice).unwrap().len(), 81);
        assert!(zn_families(2, 2).is_err());
    }

    #[test]
    fn sheared_and_coset_families_are_not_integral_over_z25() {
        // Both contain (0, 0) and (1, 2), and d^2 = 5 is not a square mod 25.
        let r = Ring::modular(25).unwrap();
        let (o, a) = (Point::from_reps(0, 0), Point::from_reps(1, 2));
        assert_eq!(crate::plane::d2(&r, o, a), Elem::from_rep(5));
        assert!(!r.is_square(Elem::from_rep(5)));
        let fam = zn_families(5, 2).unwrap();
        for f in [ZnFamily::Sheared, ZnFamily::CrossCosets] {
            let s = fam.get(f).unwrap();
            assert!(s.contains(o) && s.contains(a));
            assert!(!classify(s).integral);
        }
    }

    #[test]
    fn sheared_family_matches_reference_plot() {
        let fam = zn_families(5, 2).unwrap();
        let s = fam.get(ZnFamily::Sheared).unwrap();
        for x in 0..25 {
            let y0 = [0, 2, 4, 1, 3][x as usize % 5];
            for k in 0..5 {
                assert!(s.contains(Point::from_reps(x, y0 + 5 * k)));
            }
        }
    }

    #[test]
    fn cross_coset_family_matches_reference_plot() {
        let fam = zn_families(5, 2).unwrap();
        let s = fam.get(ZnFamily::CrossCosets).unwrap();
        for (x, y) in [(0, 0), (1, 2), (1, 3), (4, 2), (4, 3)] {
            for a in 0..5 {
                for b in 0..5 {
                    assert!(s.contains(Point::from_reps(x + 5 * a, y + 5 * b)));
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let z3 = Ring::modular(3).unwrap();
        let z5 = Ring::modular(5).unwrap();
        let p = product_set(&line_set(&z3), &line_set(&z5)).unwrap();
        assert_eq!(p.len(), 15);
        assert!(classify(&p).integral);
        let flat = crt_flatten(&p).unwrap();
        assert_eq!(flat.ring().order(), 15);
        assert!(classify(&flat).integral);
        assert!(flat.same_set(&line_set(&Ring::modular(15).unwrap())));

        let z2 = Ring::modular(2).unwrap();
        let all = PointSet::from_reps(z2.clone(), &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let p = product_set(&all, &all).unwrap();
        assert_eq!(p.len(), 16);
        assert!(classify(&p).integral);
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&line_set(&fp(7))));
        assert!(is_maximal(&cross_set(&fp(13)).unwrap()));
        let two = PointSet::from_reps(fp(7), &[(0, 0), (0, 1)]).unwrap();
        assert!(!is_maximal(&two));
    }
}
