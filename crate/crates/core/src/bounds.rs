//! Closed-form values and bounds for the three extremal quantities in the
//! plane, used as oracles for the searches.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rings::{factorize, is_prime, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Largest integral point set.
    I,
    /// Largest integral point set with no three collinear points.
    #[serde(rename = "I_bar")]
    IBar,
    /// Largest integral point set in general position.
    #[serde(rename = "I_dot")]
    IDot,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::I => "I",
            Quantity::IBar => "I_bar",
            Quantity::IDot => "I_dot",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Quantity::I),
            "Ibar" | "I_bar" => Ok(Quantity::IBar),
            "Idot" | "I_dot" => Ok(Quantity::IDot),
            _ => Err(Error::BadSpec(format!("unknown quantity `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Exact { value: u64 },
    Interval { lo: u64, hi: u64 },
    Table { value: u64 },
    Unknown,
}

impl Value {
    /// Whether a computed maximum agrees with the prediction.
    pub fn admits(&self, v: u64) -> bool {
        match *self {
            Value::Exact { value } | Value::Table { value } => v == value,
            Value::Interval { lo, hi } => (lo..=hi).contains(&v),
            Value::Unknown => true,
        }
    }

    fn times(self, other: Value) -> Value {
        match (self.range(), other.range()) {
            (Some((a, b)), Some((c, d))) if a == b && c == d => Value::Exact { value: a * c },
            (Some((a, b)), Some((c, d))) => Value::Interval { lo: a * c, hi: b * d },
            _ => Value::Unknown,
        }
    }

    fn range(&self) -> Option<(u64, u64)> {
        match *self {
            Value::Exact { value } | Value::Table { value } => Some((value, value)),
            Value::Interval { lo, hi } => Some((lo, hi)),
            Value::Unknown => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact { value } => write!(f, "exact {value}"),
            Value::Interval { lo, hi } => write!(f, "interval [{lo}, {hi}]"),
            Value::Table { value } => write!(f, "table {value}"),
            Value::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub quantity: Quantity,
    pub ring: String,
    pub value: Value,
    /// Short tag naming the result the value rests on.
    pub source: String,
    /// Conjectured exact value, kept apart from proven statements.
    pub conjecture: Option<u64>,
}

const TABLE1: [(u32, u64); 30] = [
    (2, 4),
    (3, 2),
    (5, 4),
    (7, 3),
    (11, 4),
    (13, 5),
    (17, 5),
    (19, 5),
    (23, 5),
    (29, 7),
    (31, 6),
    (37, 7),
    (41, 9),
    (43, 8),
    (47, 7),
    (53, 9),
    (59, 9),
    (61, 10),
    (67, 9),
    (71, 11),
    (73, 10),
    (79, 11),
    (83, 11),
    (89, 11),
    (97, 11),
    (101, 13),
    (103, 11),
    (107, 11),
    (109, 12),
    (113, 12),
];

/// Published maxima of sets in general position over `F_p`.
pub fn table1() -> BTreeMap<u32, u64> {
    TABLE1.iter().copied().collect()
}

/// `(order, characteristic, is_field)` of a valid spec.
fn shape(spec: &RingSpec) -> Result<(u64, u64, bool)> {
    match spec {
        RingSpec::PrimeField(p) => {
            if !is_prime(*p as u64) {
                return Err(Error::NotPrime(*p as u64));
            }
            Ok((*p as u64, *p as u64, true))
        }
        RingSpec::ExtensionField { p, r } => {
            if !is_prime(*p as u64) {
                return Err(Error::NotPrime(*p as u64));
            }
            if *r == 0 {
                return Err(Error::InvalidDegree(*r));
            }
            let q = (*p as u64).checked_pow(*r).ok_or(Error::RingTooLarge(u64::MAX))?;
            Ok((q, *p as u64, true))
        }
        RingSpec::ModularRing(n) => {
            if *n < 2 {
                return Err(Error::ModulusTooSmall(*n as u64));
            }
            Ok((*n as u64, *n as u64, is_prime(*n as u64)))
        }
        RingSpec::Product(a, b) => {
            let (oa, ca, _) = shape(a)?;
            let (ob, cb, _) = shape(b)?;
            let g = crate::rings::gcd(ca, cb);
            Ok((oa * ob, ca / g * cb, false))
        }
    }
}

fn integral_max(spec: &RingSpec) -> Result<(Value, String)> {
    let (order, ch, field) = shape(spec)?;
    if ch == 2 {
        return Ok((Value::Exact { value: order * order }, "characteristic two".into()));
    }
    if field {
        return Ok((Value::Exact { value: order }, "odd field".into()));
    }
    match spec {
        RingSpec::ModularRing(n) => {
            let mut v = Value::Exact { value: 1 };
            let parts = factorize(*n as u64);
            for &(p, r) in &parts {
                let pr = p.pow(r);
                let part = match (p, r) {
                    (2, 1) => Value::Exact { value: 4 },
                    (_, 1) => Value::Exact { value: p },
                    (_, 2) if p > 2 => Value::Exact { value: p * p * p },
                    _ => Value::Interval {
                        lo: pr * p.pow(r / 2),
                        hi: pr * pr,
                    },
                };
                v = v.times(part);
            }
            let source = if parts.len() > 1 {
                "coprime moduli"
            } else if parts[0].1 == 2 {
                "prime squared modulus"
            } else {
                "square-zero subgroup lower bound"
            };
            Ok((v, source.into()))
        }
        RingSpec::Product(a, b) => {
            let (va, _) = integral_max(a)?;
            let (vb, _) = integral_max(b)?;
            Ok((va.times(vb), "direct product".into()))
        }
        _ => Ok((
            Value::Interval {
                lo: order,
                hi: order * order,
            },
            "trivial bounds".into(),
        )),
    }
}

/// Known value or bound of `quantity` for the plane over `spec`.
pub fn predict(quantity: Quantity, spec: &RingSpec) -> Result<BoundsReport> {
    let (order, ch, field) = shape(spec)?;
    let mut conjecture = None;
    let (value, source) = match quantity {
        Quantity::I => integral_max(spec)?,
        Quantity::IBar if field && ch != 2 => {
            let q = order;
            if q % 4 == 3 {
                (Value::Exact { value: q.div_ceil(2) }, "circle construction".into())
            } else {
                conjecture = Some((q - 1) / 2);
                (
                    Value::Interval {
                        lo: (q - 1) / 2,
                        hi: (q + 3) / 2,
                    },
                    "circle construction and arc upper bound".into(),
                )
            }
        }
        Quantity::IBar => (Value::Interval { lo: 1, hi: 2 * order }, "arc upper bound".into()),
        Quantity::IDot => {
            let p = match spec {
                RingSpec::PrimeField(p) => Some(*p),
                RingSpec::ModularRing(n) if field => Some(*n),
                _ => None,
            };
            match p.and_then(|p| table1().get(&p).copied()) {
                Some(v) => (Value::Table { value: v }, "exhaustive search table".into()),
                None => (Value::Unknown, "none".into()),
            }
        }
    };
    Ok(BoundsReport {
        quantity,
        ring: spec.to_string(),
        value,
        source,
        conjecture,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: Quantity, s: &str) -> BoundsReport {
        predict(q, &s.parse().unwrap()).unwrap()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(p(Quantity::I, "Fq:27").value, Value::Exact { value: 27 });
        assert_eq!(p(Quantity::IBar, "Fp:31").value, Value::Exact { value: 16 });
        assert_eq!(p(Quantity::IDot, "Fp:101").value, Value::Table { value: 13 });
        let t = table1();
        assert_eq!(t[&29], 7);
        assert_eq!(t[&61], 10);
        assert!(!t.contains_key(&4));
        assert_eq!(t.len(), 30);
    }

    #[test]
    fn integral_values_over_residue_rings() {
        assert_eq!(p(Quantity::I, "Zn:15").value, Value::Exact { value: 15 });
        let i3 = p(Quantity::I, "Zn:3").value.range().unwrap().0;
        let i5 = p(Quantity::I, "Zn:5").value.range().unwrap().0;
        assert_eq!(i3 * i5, 15);
        assert_eq!(p(Quantity::I, "Zn:9").value, Value::Exact { value: 27 });
        assert_eq!(p(Quantity::I, "Zn:25").value, Value::Exact { value: 125 });
        assert_eq!(p(Quantity::I, "Zn:2").value, Value::Exact { value: 4 });
        assert_eq!(p(Quantity::I, "Zn:18").value, Value::Exact { value: 108 });
        assert_eq!(p(Quantity::I, "Zn:27").value, Value::Interval { lo: 81, hi: 729 });
        assert_eq!(p(Quantity::I, "Fq:2^3").value, Value::Exact { value: 64 });
        assert_eq!(p(Quantity::I, "Zn:3*Zn:5").value, Value::Exact { value: 15 });
    }

    #[test]
    fn arc_values_split_by_residue_mod_four() {
        let r = p(Quantity::IBar, "Fp:13");
        assert_eq!(r.value, Value::Interval { lo: 6, hi: 8 });
        assert_eq!(r.conjecture, Some(6));
        let r = p(Quantity::IBar, "Fq:9");
        assert_eq!(r.value, Value::Interval { lo: 4, hi: 6 });
        assert_eq!(p(Quantity::IBar, "Fp:7").conjecture, None);
        assert_eq!(p(Quantity::IBar, "Zn:9").value, Value::Interval { lo: 1, hi: 18 });
    }

    #[test]
    fn unknowns_stay_unknown() {
        assert_eq!(p(Quantity::IDot, "Fp:127").value, Value::Unknown);
        assert_eq!(p(Quantity::IDot, "Fq:9").value, Value::Unknown);
        assert_eq!(p(Quantity::IDot, "Zn:13").value, Value::Table { value: 5 });
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(predict(Quantity::I, &RingSpec::PrimeField(4)).is_err());
        assert!(predict(Quantity::I, &RingSpec::ModularRing(1)).is_err());
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in [Quantity::I, Quantity::IBar, Quantity::IDot] {
            assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
        }
        assert_eq!("Ibar".parse::<Quantity>().unwrap(), Quantity::IBar);
        let json = serde_json::to_string(&p(Quantity::IBar, "Fp:13")).unwrap();
        assert!(json.contains("\"quantity\":\"I_bar\""));
        assert!(json.contains("\"kind\":\"interval\""));
    }
}
