//! Dense operation tables for the inner search loops.

use crate::plane::{is_integral_value, Convention};
use crate::rings::{Elem, Ring};

pub(crate) const NONE: u16 = u16::MAX;

/// Tables over a ring of order `n <= 1024`, indexed by representatives.
pub(crate) struct Tables {
    pub n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    pub neg: Vec<u16>,
    /// `NONE` for non-units.
    pub inv: Vec<u16>,
    pub sq: Vec<u16>,
    /// Whether a squared distance counts as integral.
    pub integral: Vec<bool>,
}

impl Tables {
    pub fn new(ring: &Ring, conv: Convention) -> Self {
        let n = ring.order() as usize;
        assert!(n <= 1024, "tables are limited to order 1024");
        let e = |i: usize| Elem::from_rep(i as u32);
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                let s = ring.add(e(a), e(b)).rep() as u16;
                let m = ring.mul(e(a), e(b)).rep() as u16;
                add[a * n + b] = s;
                add[b * n + a] = s;
                mul[a * n + b] = m;
                mul[b * n + a] = m;
            }
        }
        let neg = (0..n).map(|a| ring.neg(e(a)).rep() as u16).collect();
        let inv = (0..n)
            .map(|a| ring.inv(e(a)).map_or(NONE, |x| x.rep() as u16))
            .collect();
        let sq: Vec<u16> = (0..n).map(|a| mul[a * n + a]).collect();
        let integral = (0..n).map(|a| is_integral_value(ring, e(a), conv)).collect();
        Tables {
            n,
            add,
            mul,
            neg,
            inv,
            sq,
            integral,
        }
    }

    #[inline(always)]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline(always)]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline(always)]
    pub fn norm(&self, a: u16, b: u16) -> u16 {
        self.add(self.sq[a as usize], self.sq[b as usize])
    }
}
