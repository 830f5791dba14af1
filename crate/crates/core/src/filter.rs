//! Ultimately periodic index sets and the residue-tower ultrafilter oracle.
//!
//! Every "for almost all n" statement in the workbench is reduced to a
//! membership question `S ∈ ℱ` for an [`IndexSet`] `S`. Index sets are
//! ultimately periodic subsets of ℕ, which form a Boolean algebra that is
//! closed under every operation the ultrapower needs, and on which a fixed
//! nonprincipal ultrafilter can be decided exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ultimately periodic subset of ℕ in canonical form.
///
/// Membership of `n < threshold` is read from an explicit prefix; membership
/// of `n >= threshold` is `pattern[n mod period]`. Canonical form has the
/// minimal period and then the minimal threshold, so structural equality is
/// set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    prefix: Vec<bool>,
    pattern: Vec<bool>,
}

/// Finite/cofinite classification of an index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Finite,
    Cofinite,
    Mixed,
}

/// Boolean algebra operations on index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetOp {
    Union,
    Intersect,
    Complement,
    Difference,
}

impl SetOp {
    pub fn parse(s: &str) -> Option<SetOp> {
        match s {
            "union" => Some(SetOp::Union),
            "intersect" | "intersection" => Some(SetOp::Intersect),
            "complement" => Some(SetOp::Complement),
            "difference" | "minus" => Some(SetOp::Difference),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            SetOp::Complement => 1,
            _ => 2,
        }
    }
}

impl IndexSet {
    /// Builds a canonical index set from a prefix, a period and the residues
    /// that are members beyond the prefix.
    pub fn new(prefix: Vec<bool>, period: usize, residues: &[usize]) -> Result<IndexSet> {
        if period == 0 {
            return Err(Error::ZeroPeriod);
        }
        let mut pattern = vec![false; period];
        for &r in residues {
            if r >= period {
                return Err(Error::BadResidue { residue: r, period });
            }
            pattern[r] = true;
        }
        Ok(IndexSet::from_parts(prefix, pattern))
    }

    /// Canonicalizing constructor from raw parts. `pattern` must be nonempty.
    pub(crate) fn from_parts(mut prefix: Vec<bool>, mut pattern: Vec<bool>) -> IndexSet {
        assert!(!pattern.is_empty(), "index set pattern must be nonempty");
        let p = pattern.len();
        if let Some(d) = divisors(p).into_iter().find(|&d| (0..p).all(|r| pattern[r] == pattern[r % d])) {
            pattern.truncate(d);
        }
        let p = pattern.len();
        while let Some(&last) = prefix.last() {
            if last == pattern[(prefix.len() - 1) % p] {
                prefix.pop();
            } else {
                break;
            }
        }
        IndexSet { prefix, pattern }
    }

    pub fn empty() -> IndexSet {
        IndexSet { prefix: Vec::new(), pattern: vec![false] }
    }

    pub fn all() -> IndexSet {
        IndexSet { prefix: Vec::new(), pattern: vec![true] }
    }

    /// The finite set with the given members.
    pub fn finite(members: &[u64]) -> IndexSet {
        let len = members.iter().map(|&m| m as usize + 1).max().unwrap_or(0);
        let mut prefix = vec![false; len];
        for &m in members {
            prefix[m as usize] = true;
        }
        IndexSet::from_parts(prefix, vec![false])
    }

    /// `{n : n ≡ residue (mod modulus)}`.
    pub fn residue_class(residue: usize, modulus: usize) -> IndexSet {
        assert!(modulus > 0);
        let mut pattern = vec![false; modulus];
        pattern[residue % modulus] = true;
        IndexSet::from_parts(Vec::new(), pattern)
    }

    /// `{n : n >= start}`.
    pub fn from_index(start: u64) -> IndexSet {
        IndexSet::from_parts(vec![false; start as usize], vec![true])
    }

    /// Tabulates a predicate that is known to be periodic with `period` from
    /// `threshold` on.
    pub fn tabulate(threshold: u64, period: usize, mut member: impl FnMut(u64) -> bool) -> IndexSet {
        let prefix = (0..threshold).map(&mut member).collect();
        let pattern = (0..period as u64)
            .map(|r| member(first_at_least(threshold, r, period as u64)))
            .collect();
        IndexSet::from_parts(prefix, pattern)
    }

    pub fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn residues(&self) -> Vec<usize> {
        self.pattern.iter().enumerate().filter(|(_, &b)| b).map(|(r, _)| r).collect()
    }

    pub fn prefix_bits(&self) -> &[bool] {
        &self.prefix
    }

    /// Eventual membership of residue `r` modulo the canonical period.
    pub fn pattern_at(&self, r: usize) -> bool {
        self.pattern[r % self.pattern.len()]
    }

    pub fn contains(&self, n: u64) -> bool {
        match self.prefix.get(n as usize) {
            Some(&b) => b,
            None => self.pattern[(n % self.pattern.len() as u64) as usize],
        }
    }

    pub fn is_empty(&self) -> bool {
        self == &IndexSet::empty()
    }

    pub fn is_all(&self) -> bool {
        self == &IndexSet::all()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn classify(&self) -> Finiteness {
        if self.pattern.iter().all(|&b| !b) {
            Finiteness::Finite
        } else if self.pattern.iter().all(|&b| b) {
            Finiteness::Cofinite
        } else {
            Finiteness::Mixed
        }
    }

    pub fn is_finite(&self) -> bool {
        self.classify() == Finiteness::Finite
    }

    pub fn is_cofinite(&self) -> bool {
        self.classify() == Finiteness::Cofinite
    }

    /// Elements below `bound`, in increasing order.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    fn zip_with(&self, other: &IndexSet, f: impl Fn(bool, bool) -> bool) -> IndexSet {
        let period = self.period().lcm(&other.period());
        let threshold = self.threshold().max(other.threshold());
        let prefix = (0..threshold).map(|n| f(self.contains(n), other.contains(n))).collect();
        let pattern = (0..period).map(|r| f(self.pattern_at(r), other.pattern_at(r))).collect();
        IndexSet::from_parts(prefix, pattern)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            pattern: self.pattern.iter().map(|b| !b).collect(),
        }
    }

    /// Applies a Boolean algebra operation; `other` is ignored for
    /// complement and required otherwise.
    pub fn apply(op: SetOp, s: &IndexSet, other: Option<&IndexSet>) -> Result<IndexSet> {
        let rhs = || other.ok_or_else(|| Error::Parse(format!("{op:?} needs two operands")));
        Ok(match op {
            SetOp::Union => s.union(rhs()?),
            SetOp::Intersect => s.intersect(rhs()?),
            SetOp::Difference => s.difference(rhs()?),
            SetOp::Complement => s.complement(),
        })
    }

    /// Replaces membership of `0..values.len()` with `values`.
    pub fn patch_prefix(&self, values: &[bool]) -> IndexSet {
        let threshold = self.threshold().max(values.len() as u64);
        let prefix = (0..threshold)
            .map(|n| values.get(n as usize).copied().unwrap_or_else(|| self.contains(n)))
            .collect();
        IndexSet::from_parts(prefix, self.pattern.clone())
    }

    /// Renders the prefix as the 0/1 string used by the JSON literal.
    pub fn prefix_string(&self) -> String {
        self.prefix.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Smallest `n >= start` with `n ≡ r (mod period)`.
pub(crate) fn first_at_least(start: u64, r: u64, period: u64) -> u64 {
    let offset = (r + period - start % period) % period;
    start + offset
}

fn divisors(p: usize) -> Vec<usize> {
    (1..=p).filter(|d| p.is_multiple_of(*d)).collect()
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet(prefix={:?}, period={}, residues={:?})", self.prefix_string(), self.period(), self.residues())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = self.prefix_string();
        if prefix.is_empty() {
            write!(f, "{{n mod {} in {:?}}}", self.period(), self.residues())
        } else {
            write!(f, "{{prefix {} then n mod {} in {:?}}}", prefix, self.period(), self.residues())
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexSetLiteral {
    #[serde(default)]
    prefix: String,
    period: usize,
    residues: BTreeSet<usize>,
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IndexSetLiteral {
            prefix: self.prefix_string(),
            period: self.period(),
            residues: self.residues().into_iter().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lit = IndexSetLiteral::deserialize(deserializer)?;
        let prefix = lit
            .prefix
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(serde::de::Error::custom(format!("prefix character `{other}` is not 0 or 1"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let residues: Vec<usize> = lit.residues.into_iter().collect();
        IndexSet::new(prefix, lit.period, &residues).map_err(serde::de::Error::custom)
    }
}

/// Decides membership in the fixed nonprincipal ultrafilter ℱ.
///
/// `S ∈ ℱ` iff the tower constant's residue modulo the period of `S` lies in
/// the eventual residue set of `S`. This is the trace, on ultimately periodic
/// sets, of any ultrafilter containing every tail of every progression
/// `{n : n ≡ c (mod m)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FilterOracle {
    pub tower: u64,
}

impl FilterOracle {
    pub fn new(tower: u64) -> FilterOracle {
        FilterOracle { tower }
    }

    pub fn decide(&self, s: &IndexSet) -> bool {
        s.pattern_at((self.tower % s.period() as u64) as usize)
    }

    /// The residue class modulo `period` that the oracle singles out.
    pub fn residue(&self, period: usize) -> usize {
        (self.tower % period as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> IndexSet {
        IndexSet::new(vec![], 2, &[0]).unwrap()
    }

    #[test]
    fn constructs_evens_and_finite_sets() {
        let e = evens();
        assert!(e.contains(0) && !e.contains(1) && e.contains(10));
        let f = IndexSet::new(vec![true, true, true], 1, &[]).unwrap();
        assert_eq!(f, IndexSet::finite(&[0, 1, 2]));
        assert_eq!(f.members_below(10), vec![0, 1, 2]);
    }

    #[test]
    fn canonicalizes_period_and_prefix() {
        let s = IndexSet::new(vec![false], 2, &[0, 1]).unwrap();
        assert_eq!(s.threshold(), 1);
        assert_eq!(s.period(), 1);
        assert_eq!(s.residues(), vec![0]);
        // prefix bits agreeing with the rule are absorbed
        let t = IndexSet::new(vec![true, false, true], 2, &[0]).unwrap();
        assert_eq!(t, evens());
    }

    #[test]
    fn rejects_bad_residue() {
        assert_eq!(IndexSet::new(vec![], 3, &[3]), Err(Error::BadResidue { residue: 3, period: 3 }));
        assert_eq!(IndexSet::new(vec![], 0, &[]), Err(Error::ZeroPeriod));
    }

    #[test]
    fn algebra_examples() {
        let odds = IndexSet::new(vec![], 2, &[1]).unwrap();
        assert_eq!(evens().complement(), odds);
        let div3 = IndexSet::new(vec![], 3, &[0]).unwrap();
        assert_eq!(evens().intersect(&div3), IndexSet::new(vec![], 6, &[0]).unwrap());
        let u = IndexSet::finite(&[0, 1, 2]).union(&evens());
        for n in 0..=24 {
            assert_eq!(u.contains(n), n <= 2 || n % 2 == 0, "n = {n}");
        }
        assert_eq!(u.threshold(), 2);
    }

    #[test]
    fn classification() {
        assert_eq!(IndexSet::finite(&[0, 1, 2]).classify(), Finiteness::Finite);
        assert_eq!(IndexSet::finite(&[5]).complement().classify(), Finiteness::Cofinite);
        assert_eq!(evens().classify(), Finiteness::Mixed);
    }

    #[test]
    fn tower_decisions() {
        let c0 = FilterOracle::new(0);
        let c1 = FilterOracle::new(1);
        assert!(c0.decide(&evens()));
        assert!(!c0.decide(&evens().complement()));
        assert!(!c1.decide(&evens()));
        assert!(!c0.decide(&IndexSet::finite(&[0, 1, 2, 3])));
        let mult6 = IndexSet::new(vec![], 6, &[0]).unwrap();
        assert!(c0.decide(&mult6));
        assert!(!FilterOracle::new(3).decide(&mult6));
    }

    #[test]
    fn json_literal_round_trip() {
        let s: IndexSet = serde_json::from_str(r#"{"prefix": "1101", "period": 2, "residues": [0]}"#).unwrap();
        assert!(s.contains(0) && s.contains(1) && !s.contains(2) && s.contains(3) && s.contains(4) && !s.contains(5));
        let text = serde_json::to_string(&s).unwrap();
        let back: IndexSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let no_prefix: IndexSet = serde_json::from_str(r#"{"period":2,"residues":[0]}"#).unwrap();
        assert_eq!(no_prefix, evens());
        assert!(serde_json::from_str::<IndexSet>(r#"{"prefix":"12","period":1,"residues":[]}"#).is_err());
    }

    #[test]
    fn patching_prefix() {
        let s = IndexSet::all().patch_prefix(&[false, true, false]);
        assert_eq!(s.members_below(5), vec![1, 3, 4]);
    }
}
