//! The ring `R' = R[x]/(x^2 + 1)`, written `a + b i`.
//!
//! `R'` is kept as a pair type over `R` rather than a ring of its own: when
//! `-1` is a square in `R` the polynomial `x^2 + 1` splits and `R'` has zero
//! divisors, which the pair representation handles without special cases.

use crate::plane::Point;
use crate::rings::{Elem, Ring};

/// `re + im * i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gauss {
    pub re: Elem,
    pub im: Elem,
}

impl Gauss {
    pub const fn new(re: Elem, im: Elem) -> Self {
        Gauss { re, im }
    }

    pub fn one(ring: &Ring) -> Self {
        Gauss::new(ring.one(), ring.zero())
    }

    pub fn i(ring: &Ring) -> Self {
        Gauss::new(ring.zero(), ring.one())
    }
}

pub fn g_add(ring: &Ring, u: Gauss, v: Gauss) -> Gauss {
    Gauss::new(ring.add(u.re, v.re), ring.add(u.im, v.im))
}

pub fn g_sub(ring: &Ring, u: Gauss, v: Gauss) -> Gauss {
    Gauss::new(ring.sub(u.re, v.re), ring.sub(u.im, v.im))
}

/// `(a + bi)(c + di) = (ac - bd) + (ad + bc) i`
pub fn g_mul(ring: &Ring, u: Gauss, v: Gauss) -> Gauss {
    let re = ring.sub(ring.mul(u.re, v.re), ring.mul(u.im, v.im));
    let im = ring.add(ring.mul(u.re, v.im), ring.mul(u.im, v.re));
    Gauss::new(re, im)
}

pub fn g_conj(ring: &Ring, u: Gauss) -> Gauss {
    Gauss::new(u.re, ring.neg(u.im))
}

/// `u * conj(u) = a^2 + b^2`.
pub fn g_norm(ring: &Ring, u: Gauss) -> Elem {
    ring.add(ring.square(u.re), ring.square(u.im))
}

/// Inverse in `R'`, which exists iff the norm is a unit of `R`.
pub fn g_inv(ring: &Ring, u: Gauss) -> Option<Gauss> {
    let n = ring.inv(g_norm(ring, u))?;
    let c = g_conj(ring, u);
    Some(Gauss::new(ring.mul(c.re, n), ring.mul(c.im, n)))
}

pub fn g_pow(ring: &Ring, u: Gauss, mut e: u64) -> Gauss {
    let mut base = u;
    let mut acc = Gauss::one(ring);
    while e > 0 {
        if e & 1 == 1 {
            acc = g_mul(ring, acc, base);
        }
        base = g_mul(ring, base, base);
        e >>= 1;
    }
    acc
}

pub fn rho_embed(p: Point) -> Gauss {
    Gauss::new(p.x, p.y)
}

pub fn rho_extract(u: Gauss) -> Point {
    Point::new(u.re, u.im)
}

/// The norm-one group `{z : z conj(z) = 1}`.
#[derive(Clone, Debug)]
pub struct UnitCircleGroup {
    /// Sorted by `(re, im)` representative.
    pub elements: Vec<Gauss>,
    /// A generator when the group is cyclic; always present over odd
    /// characteristic fields.
    pub generator: Option<Gauss>,
}

impl UnitCircleGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, z: Gauss) -> bool {
        self.elements.binary_search(&z).is_ok()
    }
}

/// Multiplicative order of a norm-one element, bounded by `limit`.
fn element_order(ring: &Ring, z: Gauss, limit: usize) -> Option<usize> {
    let one = Gauss::one(ring);
    let mut acc = z;
    for k in 1..=limit {
        if acc == one {
            return Some(k);
        }
        acc = g_mul(ring, acc, z);
    }
    None
}

/// Enumerates the unit circle. Odd-characteristic fields use the rational
/// parametrisation of `a^2 + b^2 = 1`; other rings are brute forced.
pub fn unit_circle(ring: &Ring) -> UnitCircleGroup {
    let mut elements = if ring.is_field() && ring.characteristic() != 2 {
        parametrized_circle(ring)
    } else {
        brute_force_circle(ring)
    };
    elements.sort();
    elements.dedup();
    let n = elements.len();
    let generator = elements.iter().copied().find(|&z| element_order(ring, z, n) == Some(n));
    UnitCircleGroup { elements, generator }
}

pub(crate) fn brute_force_circle(ring: &Ring) -> Vec<Gauss> {
    let one = ring.one();
    let mut out = Vec::new();
    for a in ring.elements() {
        for b in ring.elements() {
            let z = Gauss::new(a, b);
            if g_norm(ring, z) == one {
                out.push(z);
            }
        }
    }
    out
}

/// Solutions of `a^2 + b^2 = 1` over an odd-characteristic field.
///
/// With `b = 0` the solutions are `a = +-1`. Otherwise put
/// `t = (a + 1)/b`, giving `b = 2/(t + 1/t)` and
/// `a = (t - 1/t)/(t + 1/t)` for every `t != 0` with `t^2 != -1`.
fn parametrized_circle(ring: &Ring) -> Vec<Gauss> {
    let one = ring.one();
    let two = ring.add(one, one);
    let mut out = vec![Gauss::new(one, ring.zero()), Gauss::new(ring.neg(one), ring.zero())];
    for t in ring.elements().skip(1) {
        let ti = ring.inv(t).expect("field");
        let s = ring.add(t, ti);
        let Some(si) = ring.inv(s) else { continue };
        let b = ring.mul(two, si);
        let a = ring.mul(ring.sub(t, ti), si);
        out.push(Gauss::new(a, b));
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::plane::d2;

    fn fp(p: u32) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    #[test]
    fn norm_and_conjugation_examples() {
        let r = fp(13);
        let z = Gauss::new(Elem::from_rep(2), Elem::from_rep(3));
        assert_eq!(g_norm(&r, z), Elem::ZERO);
        assert_eq!(g_conj(&r, g_conj(&r, z)), z);
        let i = Gauss::i(&r);
        assert_eq!(g_mul(&r, i, i), Gauss::new(r.neg(r.one()), r.zero()));
        assert_eq!(g_inv(&r, z), None);
    }

    #[test]
    fn unit_circle_sizes() {
        assert_eq!(unit_circle(&fp(7)).len(), 8);
        assert_eq!(unit_circle(&fp(13)).len(), 12);
        let c3 = unit_circle(&fp(3));
        let r = fp(3);
        let (o, z, m) = (r.one(), r.zero(), r.neg(r.one()));
        assert_eq!(c3.elements, {
            let mut v = vec![Gauss::new(o, z), Gauss::new(m, z), Gauss::new(z, o), Gauss::new(z, m)];
            v.sort();
            v
        });
        assert!(c3.generator.is_some());
    }

    #[test]
    fn parametrisation_matches_brute_force() {
        for q in [3, 5, 7, 9, 11, 13, 25, 27] {
            let r = Ring::new(&format!("Fq:{q}").parse().unwrap()).unwrap();
            let mut a = parametrized_circle(&r);
            a.sort();
            a.dedup();
            let mut b = brute_force_circle(&r);
            b.sort();
            assert_eq!(a, b, "q = {q}");
        }
    }

    #[test]
    fn rho_round_trip() {
        let r = fp(7);
        let p = Point::new(Elem::from_rep(2), Elem::from_rep(3));
        assert_eq!(rho_embed(p), Gauss::new(Elem::from_rep(2), Elem::from_rep(3)));
        assert_eq!(rho_extract(rho_embed(p)), p);
        for a in r.elements() {
            for b in r.elements() {
                let p = Point::new(a, b);
                assert_eq!(rho_extract(rho_embed(p)), p);
            }
        }
    }

    fn small_rings() -> Vec<Ring> {
        [
            "Fp:2", "Fp:3", "Fp:5", "Fp:7", "Fq:2^2", "Fq:3^2", "Zn:4", "Zn:6", "Zn:9", "Zn:25", "Fq:7^2", "Zn:49",
        ]
        .iter()
        .map(|s| Ring::new(&s.parse().unwrap()).unwrap())
        .collect()
    }

    #[test]
    fn norm_is_multiplicative_and_conjugation_is_a_homomorphism() {
        for r in small_rings() {
            let all: Vec<Gauss> = r
                .elements()
                .flat_map(|a| r.elements().map(move |b| Gauss::new(a, b)))
                .collect();
            // Exhaustive over pairs is |R|^4; stride through the second operand
            // for the two largest rings to keep the suite quick.
            let stride = if r.order() > 25 { 7 } else { 1 };
            for &u in &all {
                for &v in all.iter().step_by(stride) {
                    let uv = g_mul(&r, u, v);
                    assert_eq!(g_norm(&r, uv), r.mul(g_norm(&r, u), g_norm(&r, v)));
                    assert_eq!(g_conj(&r, g_add(&r, u, v)), g_add(&r, g_conj(&r, u), g_conj(&r, v)));
                    assert_eq!(g_conj(&r, uv), g_mul(&r, g_conj(&r, u), g_conj(&r, v)));
                }
            }
        }
    }

    #[test]
    fn squared_distance_is_norm_of_difference() {
        for r in small_rings().into_iter().filter(|r| r.order() <= 25) {
            for a in r.elements() {
                for b in r.elements() {
                    for c in r.elements() {
                        for d in r.elements() {
                            let u = Point::new(a, b);
                            let v = Point::new(c, d);
                            let n = g_norm(&r, g_sub(&r, rho_embed(u), rho_embed(v)));
                            assert_eq!(d2(&r, u, v), n);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_circle_cardinality_and_cyclicity() {
        for q in odd_prime_powers(121) {
            let r = Ring::new(&format!("Fq:{q}").parse().unwrap()).unwrap();
            let c = unit_circle(&r);
            let expected = if r.sqrt_of_minus_one().is_some() { q - 1 } else { q + 1 };
            assert_eq!(c.len() as u32, expected, "q = {q}");
            let g = c.generator.expect("cyclic");
            assert_eq!(element_order(&r, g, c.len()), Some(c.len()));
        }
    }

    pub(crate) fn odd_prime_powers(max: u32) -> Vec<u32> {
        (3..=max)
            .filter(|&q| matches!(crate::rings::prime_power(q as u64), Some((p, _)) if p != 2))
            .collect()
    }
}
