use std::fmt;

use num_integer::Integer;

use super::poly::{Poly, Rational};
use crate::error::{Error, Result};
use crate::filter::{first_at_least, IndexSet};

/// Comparison relations between two sequences, decided pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, a: i128, b: i128) -> bool {
        match self {
            Relation::Le => a <= b,
            Relation::Lt => a < b,
            Relation::Eq => a == b,
            Relation::Ne => a != b,
            Relation::Ge => a >= b,
            Relation::Gt => a > b,
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s {
            "<=" | "le" => Some(Relation::Le),
            "<" | "lt" => Some(Relation::Lt),
            "=" | "==" | "eq" => Some(Relation::Eq),
            "!=" | "ne" => Some(Relation::Ne),
            ">=" | "ge" => Some(Relation::Ge),
            ">" | "gt" => Some(Relation::Gt),
            _ => None,
        }
    }
}

/// An integer sequence that is quasi-polynomial from some threshold on.
///
/// For `n < threshold` the value is `prefix[n]`; for `n >= threshold` it is
/// `polys[n mod period](n)`, each polynomial being integer-valued on its
/// residue class. The form is canonical: minimal period first, then minimal
/// threshold. Values may be negative; [`super::HyperNat`] adds the
/// nonnegativity invariant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuasiPoly {
    prefix: Vec<i128>,
    polys: Vec<Poly>,
}

impl QuasiPoly {
    /// Validating constructor: every tail polynomial must be integer-valued
    /// on its residue class beyond the prefix.
    pub fn new(prefix: Vec<i128>, polys: Vec<Poly>) -> Result<QuasiPoly> {
        if polys.is_empty() {
            return Err(Error::ZeroPeriod);
        }
        let p = polys.len() as u64;
        let threshold = prefix.len() as u64;
        for (r, poly) in polys.iter().enumerate() {
            let start = first_at_least(threshold, r as u64, p);
            let points = poly.degree().unwrap_or(0) as u64 + 1;
            // deg+1 consecutive integer values along the progression force
            // integrality on the whole progression
            for k in 0..points {
                let n = start + k * p;
                if poly.eval_int(n as i128).is_none() {
                    return Err(Error::NonIntegralTail { at: n });
                }
            }
        }
        Ok(QuasiPoly::from_parts(prefix, polys))
    }

    /// Canonicalizing constructor; integrality is the caller's obligation.
    pub(crate) fn from_parts(mut prefix: Vec<i128>, mut polys: Vec<Poly>) -> QuasiPoly {
        let p = polys.len();
        if let Some(d) = (1..=p).filter(|d| p.is_multiple_of(*d)).find(|&d| (0..p).all(|r| polys[r] == polys[r % d])) {
            polys.truncate(d);
        }
        let p = polys.len();
        while let Some(&last) = prefix.last() {
            let n = prefix.len() - 1;
            if polys[n % p].eval(n as i128) == Rational::from_integer(last) {
                prefix.pop();
            } else {
                break;
            }
        }
        QuasiPoly { prefix, polys }
    }

    pub fn constant(c: i128) -> QuasiPoly {
        QuasiPoly { prefix: Vec::new(), polys: vec![Poly::constant(c)] }
    }

    pub fn zero() -> QuasiPoly {
        QuasiPoly::constant(0)
    }

    /// The sequence `n`.
    pub fn identity() -> QuasiPoly {
        QuasiPoly { prefix: Vec::new(), polys: vec![Poly::identity()] }
    }

    /// The sequence `a·n + b`.
    pub fn affine(a: i128, b: i128) -> QuasiPoly {
        QuasiPoly::from_parts(Vec::new(), vec![Poly::from_ints(&[b, a])])
    }

    /// The sequence `max(n, floor)`.
    pub fn identity_at_least(floor: u64) -> QuasiPoly {
        QuasiPoly::from_parts((0..floor).map(|_| floor as i128).collect(), vec![Poly::identity()])
    }

    /// A single polynomial, integer-valued on ℕ.
    pub fn polynomial(poly: Poly) -> Result<QuasiPoly> {
        QuasiPoly::new(Vec::new(), vec![poly])
    }

    pub fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period(&self) -> usize {
        self.polys.len()
    }

    pub fn prefix(&self) -> &[i128] {
        &self.prefix
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Tail polynomial governing residue `r` (taken modulo the period).
    pub fn class_poly(&self, r: usize) -> &Poly {
        &self.polys[r % self.polys.len()]
    }

    pub fn eval(&self, n: u64) -> i128 {
        match self.prefix.get(n as usize) {
            Some(&v) => v,
            None => {
                let v = self.polys[(n % self.polys.len() as u64) as usize].eval(n as i128);
                debug_assert!(v.is_integer(), "quasi-polynomial not integral at {n}");
                v.to_integer()
            }
        }
    }

    /// Eventually constant: a single constant tail polynomial.
    pub fn eventually_constant(&self) -> Option<i128> {
        (self.polys.len() == 1 && self.polys[0].is_constant()).then(|| self.polys[0].eval(0).to_integer())
    }

    /// Every tail polynomial is constant (the sequence is eventually periodic).
    pub fn is_eventually_periodic(&self) -> bool {
        self.polys.iter().all(Poly::is_constant)
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    fn align(parts: &[&QuasiPoly]) -> (u64, usize) {
        let threshold = parts.iter().map(|q| q.threshold()).max().unwrap_or(0);
        let period = parts.iter().fold(1usize, |acc, q| acc.lcm(&q.period()));
        (threshold, period)
    }

    fn zip_with(&self, other: &QuasiPoly, value: impl Fn(i128, i128) -> i128, poly: impl Fn(&Poly, &Poly) -> Poly) -> QuasiPoly {
        let (threshold, period) = QuasiPoly::align(&[self, other]);
        let prefix = (0..threshold).map(|n| value(self.eval(n), other.eval(n))).collect();
        let polys = (0..period).map(|r| poly(self.class_poly(r), other.class_poly(r))).collect();
        QuasiPoly::from_parts(prefix, polys)
    }

    pub fn add(&self, other: &QuasiPoly) -> QuasiPoly {
        self.zip_with(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &QuasiPoly) -> QuasiPoly {
        self.zip_with(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &QuasiPoly) -> QuasiPoly {
        self.zip_with(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn neg(&self) -> QuasiPoly {
        QuasiPoly::from_parts(self.prefix.iter().map(|v| -v).collect(), self.polys.iter().map(|p| -p).collect())
    }

    pub fn add_const(&self, c: i128) -> QuasiPoly {
        self.add(&QuasiPoly::constant(c))
    }

    /// Threshold beyond which the sign of `self` is constant on every class.
    fn sign_threshold(&self) -> u64 {
        let bound = self.polys.iter().map(|p| p.sign_stable_beyond() + 1).max().unwrap_or(0);
        self.threshold().max(bound)
    }

    /// `{n : self(n) rel other(n)}`, always ultimately periodic.
    pub fn compare(&self, rel: Relation, other: &QuasiPoly) -> IndexSet {
        let diff = self.sub(other);
        let threshold = diff.sign_threshold();
        IndexSet::tabulate(threshold, diff.period(), |n| rel.holds(diff.eval(n), 0))
    }

    /// `{n : self(n) rel c}`.
    pub fn compare_const(&self, rel: Relation, c: i128) -> IndexSet {
        self.compare(rel, &QuasiPoly::constant(c))
    }

    /// Pointwise `if n ∈ set { then } else { otherwise }`.
    pub fn select(set: &IndexSet, then: &QuasiPoly, otherwise: &QuasiPoly) -> QuasiPoly {
        let (threshold, period) = QuasiPoly::align(&[then, otherwise]);
        let threshold = threshold.max(set.threshold());
        let period = period.lcm(&set.period());
        let prefix = (0..threshold)
            .map(|n| if set.contains(n) { then.eval(n) } else { otherwise.eval(n) })
            .collect();
        let polys = (0..period)
            .map(|r| if set.pattern_at(r) { then.class_poly(r).clone() } else { otherwise.class_poly(r).clone() })
            .collect();
        QuasiPoly::from_parts(prefix, polys)
    }

    pub fn abs(&self) -> QuasiPoly {
        let nonneg = self.compare_const(Relation::Ge, 0);
        QuasiPoly::select(&nonneg, self, &self.neg())
    }

    pub fn min(&self, other: &QuasiPoly) -> QuasiPoly {
        QuasiPoly::select(&self.compare(Relation::Le, other), self, other)
    }

    pub fn max(&self, other: &QuasiPoly) -> QuasiPoly {
        QuasiPoly::select(&self.compare(Relation::Ge, other), self, other)
    }

    /// Truncated subtraction `max(self − other, 0)`.
    pub fn monus(&self, other: &QuasiPoly) -> QuasiPoly {
        self.sub(other).max(&QuasiPoly::zero())
    }

    /// Pointwise `floor(self(n) / k)` for a positive integer `k`.
    pub fn floor_div(&self, k: i128) -> QuasiPoly {
        assert!(k > 0, "floor_div needs a positive divisor");
        let den = self.polys.iter().fold(1i128, |acc, p| acc.lcm(&p.denominator_lcm()));
        let period = self.period().lcm(&((k * den) as usize));
        let threshold = self.threshold();
        let prefix = (0..threshold).map(|n| Integer::div_floor(&self.eval(n), &k)).collect();
        let kr = Rational::from_integer(k);
        let polys = (0..period)
            .map(|r| {
                let n0 = first_at_least(threshold, r as u64, period as u64);
                let offset = self.eval(n0).mod_floor(&k);
                let shifted = self.class_poly(r) - &Poly::constant(offset);
                shifted.scale(kr.recip())
            })
            .collect();
        QuasiPoly::from_parts(prefix, polys)
    }

    /// Replaces the values at `0..values.len()`.
    pub fn patch_prefix(&self, values: &[i128]) -> QuasiPoly {
        let threshold = self.threshold().max(values.len() as u64);
        let prefix = (0..threshold)
            .map(|n| values.get(n as usize).copied().unwrap_or_else(|| self.eval(n)))
            .collect();
        QuasiPoly::from_parts(prefix, self.polys.clone())
    }

    /// Tabulates a sequence known to be periodic (constant on each residue
    /// class modulo `period`) from `threshold` on.
    pub fn tabulate_periodic(threshold: u64, period: usize, mut value: impl FnMut(u64) -> i128) -> QuasiPoly {
        let prefix = (0..threshold).map(&mut value).collect();
        let polys = (0..period as u64)
            .map(|r| Poly::constant(value(first_at_least(threshold, r, period as u64))))
            .collect();
        QuasiPoly::from_parts(prefix, polys)
    }

    pub fn is_zero_tail(&self) -> bool {
        self.polys.iter().all(Poly::is_zero)
    }
}

impl fmt::Debug for QuasiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuasiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{:?} then ", self.prefix)?;
        }
        if self.polys.len() == 1 {
            write!(f, "{}", self.polys[0])
        } else {
            write!(f, "[")?;
            for (r, p) in self.polys.iter().enumerate() {
                if r > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{r}: {p}")?;
            }
            write!(f, "] mod {}", self.polys.len())
        }
    }
}
