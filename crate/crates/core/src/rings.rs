//! Finite commutative rings with 1.
//!
//! Three families are supported: prime fields `F_p`, extension fields
//! `F_{p^r}` (dense coefficient vectors modulo a monic irreducible
//! polynomial) and residue rings `Z_n`. Direct products of these are also
//! available so point sets can be combined componentwise.
//!
//! Every element is stored as a [`Elem`], a canonical integer
//! representative in `[0, |R|)`. For `F_{p^r}` the representative of
//! `c_0 + c_1 x + ... + c_{r-1} x^{r-1}` is `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`.
//! The canonical order of elements is the order of these integers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest ring order accepted by [`Ring::new`].
pub const MAX_ORDER: u64 = 1 << 20;

/// Rings up to this order get dense addition and multiplication tables.
const TABLE_ORDER: u32 = 256;

const NO_INVERSE: u32 = u32::MAX;

/// Canonical representative of a ring element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    /// Wraps a representative without range checking. Use [`Ring::elem`]
    /// for untrusted input.
    pub const fn from_rep(rep: u32) -> Self {
        Elem(rep)
    }

    pub const fn rep(self) -> u32 {
        self.0
    }
}

/// Parameters identifying a ring. Two rings built from equal specs are
/// identical, element encodings included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    PrimeField(u32),
    ExtensionField { p: u32, r: u32 },
    ModularRing(u32),
    Product(Box<RingSpec>, Box<RingSpec>),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::PrimeField(p) => write!(f, "Fp:{p}"),
            RingSpec::ExtensionField { p, r } => write!(f, "Fq:{p}^{r}"),
            RingSpec::ModularRing(n) => write!(f, "Zn:{n}"),
            RingSpec::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Grammar: `Fp:<p>`, `Fq:<p>^<r>` (or `Fq:<q>` for a prime power
    /// `q`), `Zn:<n>`, and `<spec>*<spec>` for direct products.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(s.to_string());
        let s = s.trim();
        if let Some((left, right)) = s.rsplit_once('*') {
            let a: RingSpec = left.parse()?;
            let b: RingSpec = right.parse()?;
            return Ok(RingSpec::Product(Box::new(a), Box::new(b)));
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "Fp" => Ok(RingSpec::PrimeField(arg.trim().parse().map_err(|_| bad())?)),
            "Zn" => Ok(RingSpec::ModularRing(arg.trim().parse().map_err(|_| bad())?)),
            "Fq" => {
                if let Some((p, r)) = arg.split_once('^') {
                    let p = p.trim().parse().map_err(|_| bad())?;
                    let r = r.trim().parse().map_err(|_| bad())?;
                    Ok(RingSpec::ExtensionField { p, r })
                } else {
                    let q: u32 = arg.trim().parse().map_err(|_| bad())?;
                    let (p, r) = prime_power(q as u64).ok_or(Error::NotPrime(q as u64))?;
                    if r == 1 {
                        Ok(RingSpec::PrimeField(p as u32))
                    } else {
                        Ok(RingSpec::ExtensionField { p: p as u32, r })
                    }
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug)]
enum Kind {
    Modular { n: u32 },
    Extension { p: u32, r: u32, modulus: Vec<u32> },
    Product(Ring, Ring),
}

struct RingData {
    spec: RingSpec,
    kind: Kind,
    order: u32,
    characteristic: u32,
    field: bool,
    neg: Vec<u32>,
    inv: Vec<u32>,
    square: Vec<bool>,
    squares: Vec<Elem>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
}

/// A finite commutative ring with 1. Cheap to clone; immutable after
/// construction and safe to share across threads.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.spec.fmt(f)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

/// The set of squares `{x * x : x in R}` of a ring, zero included.
#[derive(Clone, Copy)]
pub struct SquareSet<'a> {
    ring: &'a Ring,
}

impl<'a> SquareSet<'a> {
    pub fn members(&self) -> &'a [Elem] {
        &self.ring.0.squares
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.ring.0.square[x.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.ring.0.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.0.squares.is_empty()
    }

    /// Membership indicator indexed by representative.
    pub fn indicator(&self) -> &'a [bool] {
        &self.ring.0.square
    }
}

impl Ring {
    pub fn new(spec: &RingSpec) -> Result<Ring> {
        let (spec, kind) = match spec {
            RingSpec::PrimeField(p) => {
                if !is_prime(*p as u64) {
                    return Err(Error::NotPrime(*p as u64));
                }
                (spec.clone(), Kind::Modular { n: *p })
            }
            RingSpec::ExtensionField { p, r } => {
                if !is_prime(*p as u64) {
                    return Err(Error::NotPrime(*p as u64));
                }
                match *r {
                    0 => return Err(Error::InvalidDegree(0)),
                    1 => (RingSpec::PrimeField(*p), Kind::Modular { n: *p }),
                    r => {
                        check_order((*p as u64).checked_pow(r).unwrap_or(u64::MAX))?;
                        let modulus = smallest_irreducible(*p, r);
                        (spec.clone(), Kind::Extension { p: *p, r, modulus })
                    }
                }
            }
            RingSpec::ModularRing(n) => {
                if *n < 2 {
                    return Err(Error::ModulusTooSmall(*n as u64));
                }
                (spec.clone(), Kind::Modular { n: *n })
            }
            RingSpec::Product(a, b) => {
                let a = Ring::new(a)?;
                let b = Ring::new(b)?;
                check_order(a.order() as u64 * b.order() as u64)?;
                (spec.clone(), Kind::Product(a, b))
            }
        };
        Ok(Ring(Arc::new(RingData::build(spec, kind)?)))
    }

    pub fn prime_field(p: u32) -> Result<Ring> {
        Ring::new(&RingSpec::PrimeField(p))
    }

    pub fn extension_field(p: u32, r: u32) -> Result<Ring> {
        Ring::new(&RingSpec::ExtensionField { p, r })
    }

    pub fn modular(n: u32) -> Result<Ring> {
        Ring::new(&RingSpec::ModularRing(n))
    }

    pub fn product(a: &Ring, b: &Ring) -> Result<Ring> {
        Ring::new(&RingSpec::Product(
            Box::new(a.spec().clone()),
            Box::new(b.spec().clone()),
        ))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> u32 {
        self.0.characteristic
    }

    pub fn is_field(&self) -> bool {
        self.0.field
    }

    /// Underlying prime of a field (or of `Z_{p^k}`), `None` otherwise.
    pub fn prime(&self) -> Option<u32> {
        match &self.0.kind {
            Kind::Extension { p, .. } => Some(*p),
            Kind::Modular { n } => prime_power(*n as u64).map(|(p, _)| p as u32),
            Kind::Product(..) => None,
        }
    }

    /// Extension degree over the prime field (1 for `F_p` and `Z_n`).
    pub fn degree(&self) -> u32 {
        match &self.0.kind {
            Kind::Extension { r, .. } => *r,
            _ => 1,
        }
    }

    /// Lower coefficients `c_0..c_{r-1}` of the monic modulus polynomial of
    /// an extension field.
    pub fn modulus_poly(&self) -> Option<&[u32]> {
        match &self.0.kind {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<(&Ring, &Ring)> {
        match &self.0.kind {
            Kind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn elem(&self, rep: u64) -> Result<Elem> {
        if rep < self.0.order as u64 {
            Ok(Elem(rep as u32))
        } else {
            Err(Error::ElementOutOfRange {
                rep,
                ring: self.to_string(),
            })
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.0.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.order).map(Elem)
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        self.0.one()
    }

    /// Image of an integer under `Z -> R`.
    pub fn from_int(&self, v: i64) -> Elem {
        let c = self.0.characteristic as i64;
        let k = v.rem_euclid(c) as u64;
        let mut acc = self.zero();
        let mut base = self.one();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let d = &self.0;
        if let Some(t) = &d.add_table {
            return Elem(t[(a.0 * d.order + b.0) as usize]);
        }
        Elem(d.raw_add(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let d = &self.0;
        if let Some(t) = &d.mul_table {
            return Elem(t[(a.0 * d.order + b.0) as usize]);
        }
        Elem(d.raw_mul(a.0, b.0))
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        match self.0.inv[a.0 as usize] {
            NO_INVERSE => None,
            i => Some(Elem(i)),
        }
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.0.inv[a.0 as usize] != NO_INVERSE
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn squares(&self) -> SquareSet<'_> {
        SquareSet { ring: self }
    }

    #[inline]
    pub fn is_square(&self, x: Elem) -> bool {
        self.0.square[x.0 as usize]
    }

    /// The square root of -1 with the smallest representative, if any.
    pub fn sqrt_of_minus_one(&self) -> Option<Elem> {
        let m1 = self.neg(self.one());
        self.elements().find(|&x| self.mul(x, x) == m1)
    }

    /// `x^(p^j)`. Only defined on fields.
    pub fn frobenius(&self, x: Elem, j: u32) -> Result<Elem> {
        if !self.0.field {
            return Err(Error::NotAField(self.to_string()));
        }
        let p = self.0.characteristic as u64;
        let j = j % self.degree();
        Ok(self.pow(x, p.pow(j)))
    }

    /// Coefficient vector, constant term first. Prime fields and `Z_n`
    /// yield a single entry.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        match &self.0.kind {
            Kind::Extension { p, r, .. } => digits(x.0, *p, *r),
            _ => vec![x.0],
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        let bad = || Error::ElementOutOfRange {
            rep: coeffs.first().copied().unwrap_or(0) as u64,
            ring: self.to_string(),
        };
        match &self.0.kind {
            Kind::Extension { p, r, .. } => {
                if coeffs.len() != *r as usize || coeffs.iter().any(|&c| c >= *p) {
                    return Err(bad());
                }
                Ok(Elem(undigits(coeffs, *p)))
            }
            _ => match coeffs {
                [v] => self.elem(*v as u64),
                _ => Err(bad()),
            },
        }
    }

    /// Splits an element of a product ring into its components.
    pub fn split(&self, x: Elem) -> Option<(Elem, Elem)> {
        match &self.0.kind {
            Kind::Product(_, b) => Some((Elem(x.0 / b.order()), Elem(x.0 % b.order()))),
            _ => None,
        }
    }

    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        match &self.0.kind {
            Kind::Product(_, rb) => Some(Elem(a.0 * rb.order() + b.0)),
            _ => None,
        }
    }

    /// Human-readable form of an element.
    pub fn fmt_elem(&self, x: Elem) -> String {
        match &self.0.kind {
            Kind::Extension { .. } => format!("{:?}", self.coeffs(x)),
            Kind::Product(a, b) => {
                let (u, v) = self.split(x).expect("product ring");
                format!("({}, {})", a.fmt_elem(u), b.fmt_elem(v))
            }
            Kind::Modular { .. } => x.0.to_string(),
        }
    }
}

impl RingData {
    fn build(spec: RingSpec, kind: Kind) -> Result<Self> {
        let (order, characteristic, field) = match &kind {
            Kind::Modular { n } => (*n, *n, is_prime(*n as u64)),
            Kind::Extension { p, r, .. } => (p.pow(*r), *p, true),
            Kind::Product(a, b) => (
                a.order() * b.order(),
                lcm(a.characteristic(), b.characteristic()),
                false,
            ),
        };
        check_order(order as u64)?;
        let mut data = RingData {
            spec,
            kind,
            order,
            characteristic,
            field,
            neg: Vec::new(),
            inv: Vec::new(),
            square: Vec::new(),
            squares: Vec::new(),
            add_table: None,
            mul_table: None,
        };
        data.neg = (0..order).map(|a| data.raw_neg(a)).collect();
        if order <= TABLE_ORDER {
            let mut add = Vec::with_capacity((order * order) as usize);
            let mut mul = Vec::with_capacity((order * order) as usize);
            for a in 0..order {
                for b in 0..order {
                    add.push(data.raw_add(a, b));
                    mul.push(data.raw_mul(a, b));
                }
            }
            data.add_table = Some(add);
            data.mul_table = Some(mul);
        }
        data.inv = (0..order).map(|a| data.raw_inv(a)).collect();
        let mut square = vec![false; order as usize];
        for x in 0..order {
            square[data.raw_mul(x, x) as usize] = true;
        }
        data.squares = (0..order).filter(|&x| square[x as usize]).map(Elem).collect();
        data.square = square;
        Ok(data)
    }

    fn one(&self) -> Elem {
        match &self.kind {
            Kind::Product(a, b) => Elem(a.one().0 * b.order() + b.one().0),
            _ => Elem(1),
        }
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            Kind::Modular { n } => ((a as u64 + b as u64) % *n as u64) as u32,
            Kind::Extension { p, r, .. } => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut scale = 1;
                for _ in 0..*r {
                    out += ((a % p + b % p) % p) * scale;
                    a /= p;
                    b /= p;
                    scale *= p;
                }
                out
            }
            Kind::Product(ra, rb) => {
                let o = rb.order();
                ra.add(Elem(a / o), Elem(b / o)).0 * o + rb.add(Elem(a % o), Elem(b % o)).0
            }
        }
    }

    fn raw_neg(&self, a: u32) -> u32 {
        match &self.kind {
            Kind::Modular { n } => (*n - a) % *n,
            Kind::Extension { p, r, .. } => {
                let c: Vec<u32> = digits(a, *p, *r).iter().map(|&c| (p - c) % p).collect();
                undigits(&c, *p)
            }
            Kind::Product(ra, rb) => {
                let o = rb.order();
                ra.neg(Elem(a / o)).0 * o + rb.neg(Elem(a % o)).0
            }
        }
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            Kind::Modular { n } => ((a as u64 * b as u64) % *n as u64) as u32,
            Kind::Extension { p, r, modulus } => {
                let (p, r) = (*p as u64, *r as usize);
                let ca = digits(a, p as u32, r as u32);
                let cb = digits(b, p as u32, r as u32);
                let mut prod = vec![0u64; 2 * r - 1];
                for (i, &x) in ca.iter().enumerate() {
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
                    }
                }
                // x^r = -(m_0 + m_1 x + ... + m_{r-1} x^{r-1})
                for k in (r..2 * r - 1).rev() {
                    let t = prod[k];
                    if t == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (j, &m) in modulus.iter().enumerate() {
                        let idx = k - r + j;
                        prod[idx] = (prod[idx] + (p - t) * m as u64) % p;
                    }
                }
                let lower: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
                undigits(&lower, p as u32)
            }
            Kind::Product(ra, rb) => {
                let o = rb.order();
                ra.mul(Elem(a / o), Elem(b / o)).0 * o + rb.mul(Elem(a % o), Elem(b % o)).0
            }
        }
    }

    fn raw_inv(&self, a: u32) -> u32 {
        match &self.kind {
            Kind::Modular { n } => mod_inverse(a as u64, *n as u64).map(|v| v as u32).unwrap_or(NO_INVERSE),
            Kind::Extension { p, r, .. } => {
                if a == 0 {
                    return NO_INVERSE;
                }
                // a^(q-2)
                let q = (*p as u64).pow(*r);
                let mut e = q - 2;
                let mut base = a;
                let mut acc = 1u32;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.raw_mul(acc, base);
                    }
                    base = self.raw_mul(base, base);
                    e >>= 1;
                }
                acc
            }
            Kind::Product(ra, rb) => {
                let o = rb.order();
                match (ra.inv(Elem(a / o)), rb.inv(Elem(a % o))) {
                    (Some(x), Some(y)) => x.0 * o + y.0,
                    _ => NO_INVERSE,
                }
            }
        }
    }
}

fn check_order(order: u64) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::RingTooLarge(order))
    } else {
        Ok(())
    }
}

fn digits(mut x: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let c = x % p;
            x /= p;
            c
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, r)` with `n = p^r` and `p` prime, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Prime factorisation as `(p, exponent)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    (a as u64 / gcd(a as u64, b as u64) * b as u64) as u32
}

pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i64 % n as i64, n as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i64) as u64)
}

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`; both
/// are coefficient vectors with the constant term first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = rem.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = rem.len() - dd;
        for (j, &c) in den[..dd].iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + (p - lead) * c as u64 % p) % p;
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility of a monic polynomial over `F_p` by trial division with
/// every monic polynomial of degree at most half its degree.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = digits(idx as u32, p, d as u32);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`
/// over `F_p`, comparing `(c_0, c_1, ..., c_{r-1})`. Returns the lower
/// coefficients.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for idx in 0..count {
        // c_0 is the most significant digit so that idx order is lex order.
        let mut lower = digits(idx as u32, p, r);
        lower.reverse();
        let mut poly = lower.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return lower;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
