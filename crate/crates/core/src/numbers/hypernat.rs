use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{Poly, Rational};
use super::quasi::{QuasiPoly, Relation};
use crate::error::{Error, Result};
use crate::filter::{first_at_least, FilterOracle, IndexSet};

/// Hypernatural number represented by an eventually quasi-polynomial,
/// pointwise nonnegative integer sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HyperNat(QuasiPoly);

/// Arithmetic operations that keep values natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NatOp {
    Add,
    Mul,
    Monus,
}

impl HyperNat {
    pub fn new(prefix: Vec<i128>, polys: Vec<Poly>) -> Result<HyperNat> {
        HyperNat::try_from(QuasiPoly::new(prefix, polys)?)
    }

    pub fn constant(c: u64) -> HyperNat {
        HyperNat(QuasiPoly::constant(c as i128))
    }

    pub fn zero() -> HyperNat {
        HyperNat::constant(0)
    }

    /// The hypernatural `[n]`.
    pub fn identity() -> HyperNat {
        HyperNat(QuasiPoly::identity())
    }

    pub fn as_quasi(&self) -> &QuasiPoly {
        &self.0
    }

    pub fn into_quasi(self) -> QuasiPoly {
        self.0
    }

    pub fn eval(&self, n: u64) -> u128 {
        self.0.eval(n) as u128
    }

    pub fn add(&self, other: &HyperNat) -> HyperNat {
        HyperNat(self.0.add(&other.0))
    }

    pub fn mul(&self, other: &HyperNat) -> HyperNat {
        HyperNat(self.0.mul(&other.0))
    }

    pub fn monus(&self, other: &HyperNat) -> HyperNat {
        HyperNat(self.0.monus(&other.0))
    }

    pub fn apply(op: NatOp, x: &HyperNat, y: &HyperNat) -> HyperNat {
        match op {
            NatOp::Add => x.add(y),
            NatOp::Mul => x.mul(y),
            NatOp::Monus => x.monus(y),
        }
    }

    pub fn add_const(&self, c: u64) -> HyperNat {
        self.add(&HyperNat::constant(c))
    }

    pub fn monus_const(&self, c: u64) -> HyperNat {
        self.monus(&HyperNat::constant(c))
    }

    /// `{n : self(n) rel other(n)}`.
    pub fn compare(&self, rel: Relation, other: &HyperNat) -> IndexSet {
        self.0.compare(rel, &other.0)
    }

    /// The least standard `k` with `{n : self(n) <= k} ∈ ℱ`, if one exists.
    ///
    /// Only the tail polynomial on the oracle's residue class matters: a
    /// constant tail is the limit, anything of positive degree grows without
    /// bound along that class.
    pub fn limit(&self, oracle: &FilterOracle) -> Option<u64> {
        let r = oracle.residue(self.0.period());
        let poly = self.0.class_poly(r);
        poly.is_constant().then(|| poly.eval(0).to_integer() as u64)
    }

    /// Unlimited hypernaturals lie in *ℕ ∖ ℕ.
    pub fn is_unlimited(&self, oracle: &FilterOracle) -> bool {
        self.limit(oracle).is_none()
    }
}

impl TryFrom<QuasiPoly> for HyperNat {
    type Error = Error;

    /// Checks pointwise nonnegativity: prefix values, then each residue class
    /// up to the point where its sign is fixed by the leading coefficient.
    fn try_from(q: QuasiPoly) -> Result<HyperNat> {
        if let Some(at) = q.prefix().iter().position(|&v| v < 0) {
            return Err(Error::NegativeTail { at: at as u64 });
        }
        let p = q.period() as u64;
        for (r, poly) in q.polys().iter().enumerate() {
            let start = first_at_least(q.threshold(), r as u64, p);
            let bound = poly.sign_stable_beyond();
            let mut n = start;
            loop {
                if poly.eval(n as i128) < Rational::zero() {
                    return Err(Error::NegativeTail { at: n });
                }
                if n > bound {
                    break;
                }
                n += p;
            }
        }
        Ok(HyperNat(q))
    }
}

impl From<HyperNat> for QuasiPoly {
    fn from(h: HyperNat) -> QuasiPoly {
        h.0
    }
}

impl fmt::Debug for HyperNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperNat({})", self.0)
    }
}

impl fmt::Display for HyperNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A rational coefficient as written in JSON: an integer or `[num, den]`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffLiteral {
    Int(i64),
    Frac([i64; 2]),
}

impl CoeffLiteral {
    fn to_rational(&self) -> Result<Rational> {
        match *self {
            CoeffLiteral::Int(v) => Ok(Rational::from_integer(v as i128)),
            CoeffLiteral::Frac([_, 0]) => Err(Error::Parse("zero denominator".into())),
            CoeffLiteral::Frac([n, d]) => Ok(Rational::new(n as i128, d as i128)),
        }
    }

    fn from_rational(c: &Rational) -> CoeffLiteral {
        let narrow = |v: i128| i64::try_from(v).expect("coefficient exceeds the 64-bit JSON range");
        if c.is_integer() {
            CoeffLiteral::Int(narrow(c.to_integer()))
        } else {
            CoeffLiteral::Frac([narrow(*c.numer()), narrow(*c.denom())])
        }
    }
}

/// JSON literal shared by hypernaturals and quasi-polynomial selectors:
/// `{"prefix": [..], "period": p, "polys": [[c0, c1, ..], ..]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct QuasiLiteral {
    #[serde(default)]
    prefix: Vec<i128>,
    period: usize,
    polys: Vec<Vec<CoeffLiteral>>,
}

impl QuasiLiteral {
    pub(crate) fn into_quasi(self) -> Result<QuasiPoly> {
        if self.period == 0 {
            return Err(Error::ZeroPeriod);
        }
        if self.polys.len() != self.period {
            return Err(Error::PolyCount { period: self.period, found: self.polys.len() });
        }
        let polys = self
            .polys
            .iter()
            .map(|cs| cs.iter().map(CoeffLiteral::to_rational).collect::<Result<Vec<_>>>().map(Poly::new))
            .collect::<Result<Vec<_>>>()?;
        QuasiPoly::new(self.prefix, polys)
    }

    pub(crate) fn from_quasi(q: &QuasiPoly) -> QuasiLiteral {
        QuasiLiteral {
            prefix: q.prefix().to_vec(),
            period: q.period(),
            polys: q
                .polys()
                .iter()
                .map(|p| {
                    if p.is_zero() {
                        vec![CoeffLiteral::Int(0)]
                    } else {
                        p.coeffs().iter().map(CoeffLiteral::from_rational).collect()
                    }
                })
                .collect(),
        }
    }
}

impl Serialize for QuasiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuasiLiteral::from_quasi(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        QuasiLiteral::deserialize(deserializer)?.into_quasi().map_err(serde::de::Error::custom)
    }
}

impl Serialize for HyperNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HyperNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let q = QuasiPoly::deserialize(deserializer)?;
        HyperNat::try_from(q).map_err(serde::de::Error::custom)
    }
}
