//! Digraph families `⟨D_n⟩` and their exact per-index adapters.
//!
//! Every adapter answers one question for all `n` at once, returned as an
//! [`IndexSet`] or a [`QuasiPoly`]. Builtin families answer in closed form;
//! families whose tail is a fixed finite digraph are evaluated index by index
//! up to the point where the answer becomes periodic. Explicit prefix
//! digraphs are patched in last.
//!
//! Values at indices where a selector names no element are `false` or `0`.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::connectivity::{classify_digraph, directed_distance, standard_distance, Classification};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::filter::IndexSet;
use crate::numbers::{Poly, QuasiPoly, Rational, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Vertices `0..=m`, arcs `i → i+1`, `m = max(n, 1)`.
    Dipath,
    /// Vertices `0..L`, arcs `i → i+1 mod L`, `L = max(n, 2)`.
    Dicycle,
    /// `P = max(n, 2)` vertices, one arc per ordered pair of distinct vertices.
    CompleteSymmetric,
    /// Sink `0`, sources `1..=K`, arcs `i+1 → 0`, `K = max(n, 2)`.
    InStar,
    /// Two disjoint dicycles of length `L = max(n, 2)` on `0..L` and `L..2L`.
    DisconnectedDicycles,
    /// The infinite digraph on ℕ with arcs `i → i+1`.
    OneWayDipathEnlargement,
    /// The infinite digraph on ℤ with arcs `i → i+1`.
    TwoWayDipathEnlargement,
}

pub const BUILTINS: [Builtin; 7] = [
    Builtin::Dipath,
    Builtin::Dicycle,
    Builtin::CompleteSymmetric,
    Builtin::InStar,
    Builtin::DisconnectedDicycles,
    Builtin::OneWayDipathEnlargement,
    Builtin::TwoWayDipathEnlargement,
];

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Dipath => "dipath",
            Builtin::Dicycle => "dicycle",
            Builtin::CompleteSymmetric => "complete_symmetric",
            Builtin::InStar => "in_star",
            Builtin::DisconnectedDicycles => "disconnected_dicycles",
            Builtin::OneWayDipathEnlargement => "one_way_dipath_enlargement",
            Builtin::TwoWayDipathEnlargement => "two_way_dipath_enlargement",
        }
    }

    pub fn from_name(name: &str) -> Result<Builtin> {
        BUILTINS
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement)
    }

    /// Size parameter at index `n`.
    fn size(self, n: u64) -> i128 {
        let n = n as i128;
        match self {
            Builtin::Dipath => n.max(1),
            _ => n.max(2),
        }
    }

    /// The size parameter as a sequence.
    fn size_seq(self) -> QuasiPoly {
        match self {
            Builtin::Dipath => QuasiPoly::identity_at_least(1),
            _ => QuasiPoly::identity_at_least(2),
        }
    }

    /// `D_n` for the finite builtins, vertex ids equal to labels.
    pub fn digraph(self, n: u64) -> Option<Digraph> {
        let s = self.size(n) as usize;
        let (vertices, arcs): (usize, Vec<(usize, usize)>) = match self {
            Builtin::Dipath => (s + 1, (0..s).map(|i| (i, i + 1)).collect()),
            Builtin::Dicycle => (s, (0..s).map(|i| (i, (i + 1) % s)).collect()),
            Builtin::CompleteSymmetric => {
                (s, (0..s * (s - 1)).map(|k| complete_endpoints(s as i128, k as i128).unwrap()).map(|(t, h)| (t as usize, h as usize)).collect())
            }
            Builtin::InStar => (s + 1, (0..s).map(|i| (i + 1, 0)).collect()),
            Builtin::DisconnectedDicycles => (
                2 * s,
                (0..2 * s).map(|a| if a < s { (a, (a + 1) % s) } else { (a, s + (a - s + 1) % s) }).collect(),
            ),
            Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement => return None,
        };
        Some(Digraph::from_vertex_arcs(vertices, &arcs).expect("builtin digraphs are well formed"))
    }

    fn classification(self) -> Classification {
        match self {
            Builtin::Dicycle | Builtin::CompleteSymmetric => Classification::Strong,
            Builtin::Dipath | Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement => {
                Classification::StrictlyUnilateral
            }
            Builtin::InStar => Classification::StrictlyWeak,
            Builtin::DisconnectedDicycles => Classification::Disconnected,
        }
    }
}

/// Endpoints of arc `k` of the complete symmetric digraph on `p` vertices.
fn complete_endpoints(p: i128, k: i128) -> Option<(i128, i128)> {
    if k < 0 || k >= p * (p - 1) {
        return None;
    }
    let (i, jj) = k.div_rem(&(p - 1));
    Some((i, if jj < i { jj } else { jj + 1 }))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyTail {
    /// `D_n = D` from some index on.
    Finite(Digraph),
    Builtin(Builtin),
}

/// A sequence `⟨D_n⟩`: explicit digraphs for `n < prefix.len()`, then the
/// tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigraphFamily {
    prefix: Vec<Digraph>,
    tail: FamilyTail,
}

/// A reachability question answered for every index: where the answer is
/// yes, and the corresponding shortest length (`0` elsewhere).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reach {
    pub set: IndexSet,
    pub length: QuasiPoly,
}

/// The four connectedness grades as index sets; they partition ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeSets {
    pub strong: IndexSet,
    pub strictly_unilateral: IndexSet,
    pub strictly_weak: IndexSet,
    pub disconnected: IndexSet,
}

impl GradeSets {
    pub fn get(&self, grade: Classification) -> &IndexSet {
        match grade {
            Classification::Strong => &self.strong,
            Classification::StrictlyUnilateral => &self.strictly_unilateral,
            Classification::StrictlyWeak => &self.strictly_weak,
            Classification::Disconnected => &self.disconnected,
        }
    }
}

const GRADES: [Classification; 4] = [
    Classification::Strong,
    Classification::StrictlyUnilateral,
    Classification::StrictlyWeak,
    Classification::Disconnected,
];

fn label(x: i128, count: usize) -> Option<usize> {
    (0..count as i128).contains(&x).then_some(x as usize)
}

fn in_range(x: &QuasiPoly, lo: &QuasiPoly, hi: &QuasiPoly) -> IndexSet {
    x.compare(Relation::Ge, lo).intersect(&x.compare(Relation::Lt, hi))
}

fn eq(x: &QuasiPoly, y: &QuasiPoly) -> IndexSet {
    x.compare(Relation::Eq, y)
}

fn constant(c: i128) -> QuasiPoly {
    QuasiPoly::constant(c)
}

impl DigraphFamily {
    pub fn builtin(b: Builtin) -> DigraphFamily {
        DigraphFamily { prefix: Vec::new(), tail: FamilyTail::Builtin(b) }
    }

    /// The enlargement `⟨D, D, …⟩` of a finite digraph.
    pub fn enlargement(d: Digraph) -> DigraphFamily {
        DigraphFamily { prefix: Vec::new(), tail: FamilyTail::Finite(d) }
    }

    pub fn explicit(prefix: Vec<Digraph>, tail: FamilyTail) -> DigraphFamily {
        DigraphFamily { prefix, tail }
    }

    pub fn prefix(&self) -> &[Digraph] {
        &self.prefix
    }

    pub fn tail(&self) -> &FamilyTail {
        &self.tail
    }

    pub fn builtin_tail(&self) -> Option<Builtin> {
        match self.tail {
            FamilyTail::Builtin(b) => Some(b),
            FamilyTail::Finite(_) => None,
        }
    }

    /// The tail digraph when the family is eventually a fixed finite digraph.
    pub fn finite_tail(&self) -> Option<&Digraph> {
        match &self.tail {
            FamilyTail::Finite(d) => Some(d),
            FamilyTail::Builtin(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match (&self.tail, self.prefix.is_empty()) {
            (FamilyTail::Builtin(b), true) => b.name().to_string(),
            (FamilyTail::Builtin(b), false) => format!("explicit({})", b.name()),
            (FamilyTail::Finite(_), _) => "explicit".to_string(),
        }
    }

    /// `D_n`, or `None` when it is infinite.
    pub fn digraph_at(&self, n: u64) -> Option<Digraph> {
        if let Some(d) = self.prefix.get(n as usize) {
            return Some(d.clone());
        }
        match &self.tail {
            FamilyTail::Finite(d) => Some(d.clone()),
            FamilyTail::Builtin(b) => b.digraph(n),
        }
    }

    /// Reads `{"kind":"builtin","name":..}` or
    /// `{"kind":"explicit","prefix":[..],"tail":<digraph or builtin spec>}`.
    pub fn from_json_value(spec: &Value) -> Result<DigraphFamily> {
        let obj = spec.as_object().ok_or_else(|| Error::MalformedSpec("family spec must be an object".into()))?;
        match obj.get("kind").and_then(Value::as_str) {
            Some("builtin") => {
                let name = obj
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::MalformedSpec("builtin family needs a `name`".into()))?;
                Ok(DigraphFamily::builtin(Builtin::from_name(name)?))
            }
            Some("explicit") => {
                let prefix = match obj.get("prefix") {
                    None => Vec::new(),
                    Some(Value::Array(items)) => items
                        .iter()
                        .map(|d| serde_json::from_value::<Digraph>(d.clone()).map_err(|e| Error::MalformedSpec(e.to_string())))
                        .collect::<Result<Vec<_>>>()?,
                    Some(_) => return Err(Error::MalformedSpec("`prefix` must be a list of digraphs".into())),
                };
                let tail = match obj.get("tail") {
                    None | Some(Value::Null) => return Err(Error::NonEventuallyConstantExplicit),
                    Some(t) if t.get("kind").and_then(Value::as_str) == Some("builtin") => {
                        match DigraphFamily::from_json_value(t)?.tail {
                            FamilyTail::Builtin(b) => FamilyTail::Builtin(b),
                            FamilyTail::Finite(_) => unreachable!(),
                        }
                    }
                    Some(t) => FamilyTail::Finite(
                        serde_json::from_value::<Digraph>(t.clone()).map_err(|e| Error::MalformedSpec(e.to_string()))?,
                    ),
                };
                Ok(DigraphFamily { prefix, tail })
            }
            Some(other) => Err(Error::MalformedSpec(format!("unknown family kind `{other}`"))),
            None => Err(Error::MalformedSpec("family spec needs a `kind`".into())),
        }
    }

    pub fn from_json(text: &str) -> Result<DigraphFamily> {
        let v: Value = serde_json::from_str(text)?;
        DigraphFamily::from_json_value(&v)
    }

    pub fn to_json_value(&self) -> Value {
        let tail = match &self.tail {
            FamilyTail::Builtin(b) if self.prefix.is_empty() => return json!({ "kind": "builtin", "name": b.name() }),
            FamilyTail::Builtin(b) => json!({ "kind": "builtin", "name": b.name() }),
            FamilyTail::Finite(d) => serde_json::to_value(d).expect("digraph serializes"),
        };
        let prefix: Vec<Value> = self.prefix.iter().map(|d| serde_json::to_value(d).expect("digraph serializes")).collect();
        json!({ "kind": "explicit", "prefix": prefix, "tail": tail })
    }

    /// Per-index evaluation for finite tails, closed form plus patched prefix
    /// for builtin tails.
    fn observe(
        &self,
        selectors: &[&QuasiPoly],
        closed: impl FnOnce(Builtin) -> Result<QuasiPoly>,
        direct: impl Fn(&Digraph, &[i128], u64) -> i128,
    ) -> Result<QuasiPoly> {
        let values = |n: u64| selectors.iter().map(|s| s.eval(n)).collect::<Vec<_>>();
        match &self.tail {
            FamilyTail::Finite(tail) => {
                let (threshold, period) = self.finite_tabulation(selectors)?;
                Ok(QuasiPoly::tabulate_periodic(threshold, period, |n| {
                    let d = self.prefix.get(n as usize).unwrap_or(tail);
                    direct(d, &values(n), n)
                }))
            }
            FamilyTail::Builtin(b) => {
                let patch: Vec<i128> = (0..self.prefix.len() as u64).map(|n| direct(&self.prefix[n as usize], &values(n), n)).collect();
                Ok(closed(*b)?.patch_prefix(&patch))
            }
        }
    }

    fn observe_set(
        &self,
        selectors: &[&QuasiPoly],
        closed: impl FnOnce(Builtin) -> Result<IndexSet>,
        direct: impl Fn(&Digraph, &[i128], u64) -> bool,
    ) -> Result<IndexSet> {
        let values = |n: u64| selectors.iter().map(|s| s.eval(n)).collect::<Vec<_>>();
        match &self.tail {
            FamilyTail::Finite(tail) => {
                let (threshold, period) = self.finite_tabulation(selectors)?;
                Ok(IndexSet::tabulate(threshold, period, |n| {
                    let d = self.prefix.get(n as usize).unwrap_or(tail);
                    direct(d, &values(n), n)
                }))
            }
            FamilyTail::Builtin(b) => {
                let patch: Vec<bool> = (0..self.prefix.len() as u64).map(|n| direct(&self.prefix[n as usize], &values(n), n)).collect();
                Ok(closed(*b)?.patch_prefix(&patch))
            }
        }
    }

    /// Over a fixed finite tail the answers are periodic once every selector
    /// is; the period also covers the parity of alternating ditips.
    fn finite_tabulation(&self, selectors: &[&QuasiPoly]) -> Result<(u64, usize)> {
        let mut threshold = self.prefix.len() as u64;
        let mut period = 2usize;
        for s in selectors {
            if !s.is_eventually_periodic() {
                return Err(Error::UnsupportedSelector(format!(
                    "`{s}` is unbounded, but the family is eventually a fixed finite digraph"
                )));
            }
            threshold = threshold.max(s.threshold());
            period = period.lcm(&s.period());
        }
        Ok((threshold, period))
    }

    /// `{n : u_n is a vertex of D_n}`; any selector is accepted.
    pub fn vertex_validity(&self, u: &QuasiPoly) -> IndexSet {
        let patch: Vec<bool> = (0..self.prefix.len() as u64)
            .map(|n| label(u.eval(n), self.prefix[n as usize].vertex_count()).is_some())
            .collect();
        let tail = match &self.tail {
            FamilyTail::Finite(d) => in_range(u, &constant(0), &constant(d.vertex_count() as i128)),
            FamilyTail::Builtin(b) => match b.vertex_count() {
                Some(count) => in_range(u, &constant(0), &count),
                None if *b == Builtin::OneWayDipathEnlargement => u.compare_const(Relation::Ge, 0),
                None => IndexSet::all(),
            },
        };
        tail.patch_prefix(&patch)
    }

    /// `{n : a_n is an arc of D_n}`; any selector is accepted.
    pub fn arc_validity(&self, a: &QuasiPoly) -> IndexSet {
        let patch: Vec<bool> = (0..self.prefix.len() as u64)
            .map(|n| label(a.eval(n), self.prefix[n as usize].arc_count()).is_some())
            .collect();
        let tail = match &self.tail {
            FamilyTail::Finite(d) => in_range(a, &constant(0), &constant(d.arc_count() as i128)),
            FamilyTail::Builtin(b) => match b.arc_count() {
                Some(count) => in_range(a, &constant(0), &count),
                None if *b == Builtin::OneWayDipathEnlargement => a.compare_const(Relation::Ge, 0),
                None => IndexSet::all(),
            },
        };
        tail.patch_prefix(&patch)
    }

    /// Label of the vertex holding the intip (`tail = true`) or outtip of `a_n`.
    fn arc_end(&self, a: &QuasiPoly, tail: bool) -> Result<QuasiPoly> {
        let valid = self.arc_validity(a);
        let q = self.observe(
            &[a],
            |b| b.arc_end(a, tail),
            |d, v, _| match label(v[0], d.arc_count()) {
                Some(arc) => (if tail { d.tail(arc) } else { d.head(arc) }) as i128,
                None => 0,
            },
        )?;
        Ok(QuasiPoly::select(&valid, &q, &constant(0)))
    }

    pub fn arc_tail(&self, a: &QuasiPoly) -> Result<QuasiPoly> {
        self.arc_end(a, true)
    }

    pub fn arc_head(&self, a: &QuasiPoly) -> Result<QuasiPoly> {
        self.arc_end(a, false)
    }

    fn both_valid(&self, u: &QuasiPoly, v: &QuasiPoly) -> IndexSet {
        self.vertex_validity(u).intersect(&self.vertex_validity(v))
    }

    fn reach(&self, u: &QuasiPoly, v: &QuasiPoly, directed: bool) -> Result<Reach> {
        let valid = self.both_valid(u, v);
        let dist = |d: &Digraph, x: &[i128]| -> Option<usize> {
            let (a, b) = (label(x[0], d.vertex_count())?, label(x[1], d.vertex_count())?);
            if directed {
                directed_distance(d, a, b).unwrap()
            } else {
                standard_distance(d, a, b).unwrap()
            }
        };
        let set = self.observe_set(
            &[u, v],
            |b| Ok(b.reach(u, v, directed).set),
            |d, x, _| dist(d, x).is_some(),
        )?;
        let length = self.observe(
            &[u, v],
            |b| Ok(b.reach(u, v, directed).length),
            |d, x, _| dist(d, x).unwrap_or(0) as i128,
        )?;
        let set = set.intersect(&valid);
        let length = QuasiPoly::select(&set, &length, &constant(0));
        Ok(Reach { set, length })
    }

    /// Semipath reachability and distance between two vertex selectors.
    pub fn semi(&self, u: &QuasiPoly, v: &QuasiPoly) -> Result<Reach> {
        self.reach(u, v, false)
    }

    /// Dipath reachability and shortest dipath length from `u` to `v`.
    pub fn directed(&self, u: &QuasiPoly, v: &QuasiPoly) -> Result<Reach> {
        self.reach(u, v, true)
    }

    /// `{n : u_n and v_n are adjacent in D_n}`.
    pub fn vertex_adjacency(&self, u: &QuasiPoly, v: &QuasiPoly) -> Result<IndexSet> {
        let valid = self.both_valid(u, v);
        let set = self.observe_set(
            &[u, v],
            // builtins have no self-loops, so adjacency is distance one
            |b| {
                let r = b.reach(u, v, false);
                Ok(r.set.intersect(&r.length.compare_const(Relation::Eq, 1)))
            },
            |d, x, _| match (label(x[0], d.vertex_count()), label(x[1], d.vertex_count())) {
                (Some(a), Some(b)) => d.vertex_adjacency(a, b).unwrap(),
                _ => false,
            },
        )?;
        Ok(set.intersect(&valid))
    }

    /// `{n : a_n ≠ c_n and the two arcs share a vertex}`.
    pub fn arc_adjacency(&self, a: &QuasiPoly, c: &QuasiPoly) -> Result<IndexSet> {
        let valid = self.arc_validity(a).intersect(&self.arc_validity(c));
        let ends_a = [self.arc_tail(a)?, self.arc_head(a)?];
        let ends_c = [self.arc_tail(c)?, self.arc_head(c)?];
        let mut shared = IndexSet::empty();
        for x in &ends_a {
            for y in &ends_c {
                shared = shared.union(&eq(x, y));
            }
        }
        Ok(shared.intersect(&valid).difference(&eq(a, c)))
    }

    /// Vertex and arc counts as sequences, `None` unless every `D_n` from
    /// some index on is finite.
    pub fn counts(&self) -> Option<(QuasiPoly, QuasiPoly)> {
        let direct_p = |d: &Digraph, _: &[i128], _| d.vertex_count() as i128;
        let direct_q = |d: &Digraph, _: &[i128], _| d.arc_count() as i128;
        match &self.tail {
            FamilyTail::Builtin(b) if !b.is_finite() => None,
            _ => {
                let p = self.observe(&[], |b| Ok(b.vertex_count().unwrap()), direct_p).ok()?;
                let q = self.observe(&[], |b| Ok(b.arc_count().unwrap()), direct_q).ok()?;
                Some((p, q))
            }
        }
    }

    /// `{n : D_n is finite}`.
    pub fn finite_set(&self) -> IndexSet {
        let tail_finite = match &self.tail {
            FamilyTail::Finite(_) => true,
            FamilyTail::Builtin(b) => b.is_finite(),
        };
        if tail_finite {
            IndexSet::all()
        } else {
            IndexSet::finite(&(0..self.prefix.len() as u64).collect::<Vec<_>>())
        }
    }

    /// `{n : D_n has neither self-loops nor parallel arcs}`.
    pub fn simple_set(&self) -> IndexSet {
        self.observe_set(&[], |_| Ok(IndexSet::all()), |d, _, _| d.is_simple()).expect("no selectors involved")
    }

    /// Every vertex of every `D_n` holds finitely many ditips. Finite digraphs
    /// and all builtins qualify.
    pub fn is_locally_finite(&self) -> bool {
        true
    }

    /// Connectedness grade of each `D_n`.
    pub fn grade_sets(&self) -> GradeSets {
        let per_grade = |g: Classification| {
            self.observe_set(
                &[],
                |b| Ok(if b.classification() == g { IndexSet::all() } else { IndexSet::empty() }),
                |d, _, _| classify_digraph(d) == g,
            )
            .expect("no selectors involved")
        };
        let [strong, strictly_unilateral, strictly_weak, disconnected] = GRADES.map(per_grade);
        GradeSets { strong, strictly_unilateral, strictly_weak, disconnected }
    }
}

impl Builtin {
    fn vertex_count(self) -> Option<QuasiPoly> {
        let s = self.size_seq();
        match self {
            Builtin::Dipath | Builtin::InStar => Some(s.add_const(1)),
            Builtin::Dicycle | Builtin::CompleteSymmetric => Some(s),
            Builtin::DisconnectedDicycles => Some(s.add(&s)),
            _ => None,
        }
    }

    fn arc_count(self) -> Option<QuasiPoly> {
        let s = self.size_seq();
        match self {
            Builtin::Dipath | Builtin::Dicycle | Builtin::InStar => Some(s),
            Builtin::CompleteSymmetric => Some(s.mul(&s.add_const(-1))),
            Builtin::DisconnectedDicycles => Some(s.add(&s)),
            _ => None,
        }
    }

    fn arc_end(self, a: &QuasiPoly, tail: bool) -> Result<QuasiPoly> {
        let s = self.size_seq();
        let next = a.add_const(1);
        Ok(match self {
            Builtin::Dipath | Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement | Builtin::Dicycle | Builtin::DisconnectedDicycles
                if tail =>
            {
                a.clone()
            }
            Builtin::Dipath | Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement => next,
            Builtin::Dicycle => QuasiPoly::select(&eq(&next, &s), &constant(0), &next),
            Builtin::DisconnectedDicycles => {
                let wrapped = QuasiPoly::select(&eq(&next, &s.add(&s)), &s, &next);
                QuasiPoly::select(&eq(&next, &s), &constant(0), &wrapped)
            }
            Builtin::InStar if tail => next,
            Builtin::InStar => constant(0),
            Builtin::CompleteSymmetric => complete_arc_end(a, tail)?,
        })
    }

    fn reach(self, u: &QuasiPoly, v: &QuasiPoly, directed: bool) -> Reach {
        let s = self.size_seq();
        let same = eq(u, v);
        let gap = v.sub(u);
        let cyclic = |u: &QuasiPoly, v: &QuasiPoly| {
            let gap = v.sub(u);
            if directed {
                QuasiPoly::select(&gap.compare_const(Relation::Ge, 0), &gap, &gap.add(&s))
            } else {
                let g = gap.abs();
                g.min(&s.sub(&g))
            }
        };
        match self {
            Builtin::Dipath | Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement => {
                if directed {
                    let set = gap.compare_const(Relation::Ge, 0);
                    let length = QuasiPoly::select(&set, &gap, &constant(0));
                    Reach { set, length }
                } else {
                    Reach { set: IndexSet::all(), length: gap.abs() }
                }
            }
            Builtin::Dicycle => Reach { set: IndexSet::all(), length: cyclic(u, v) },
            Builtin::CompleteSymmetric => {
                Reach { set: IndexSet::all(), length: QuasiPoly::select(&same, &constant(0), &constant(1)) }
            }
            Builtin::InStar => {
                let to_sink = v.compare_const(Relation::Eq, 0);
                if directed {
                    let set = same.union(&to_sink);
                    let length = QuasiPoly::select(&same, &constant(0), &QuasiPoly::select(&to_sink, &constant(1), &constant(0)));
                    Reach { set, length }
                } else {
                    let touches_sink = to_sink.union(&u.compare_const(Relation::Eq, 0));
                    let length = QuasiPoly::select(&same, &constant(0), &QuasiPoly::select(&touches_sink, &constant(1), &constant(2)));
                    Reach { set: IndexSet::all(), length }
                }
            }
            Builtin::DisconnectedDicycles => {
                let upper_u = u.compare(Relation::Ge, &s);
                let upper_v = v.compare(Relation::Ge, &s);
                let set = upper_u.intersect(&upper_v).union(&upper_u.complement().intersect(&upper_v.complement()));
                let local_u = QuasiPoly::select(&upper_u, &u.sub(&s), u);
                let local_v = QuasiPoly::select(&upper_v, &v.sub(&s), v);
                let length = QuasiPoly::select(&set, &cyclic(&local_u, &local_v), &constant(0));
                Reach { set, length }
            }
        }
    }
}

/// Tail or head label of arc `k_n` in the complete symmetric digraph on
/// `max(n, 2)` vertices.
///
/// With `k = αn + β` on a residue class, the tail `floor(k / (n − 1))` is
/// eventually the constant `floor(α)` (α not an integer) or `α` or `α − 1`
/// (α an integer, by the sign of `α + β`). Indices below the point where
/// that holds are computed directly.
fn complete_arc_end(k: &QuasiPoly, tail: bool) -> Result<QuasiPoly> {
    if k.max_degree() > 1 {
        return Err(Error::UnsupportedSelector(format!(
            "arc selector `{k}` on complete_symmetric must be affine on each residue class"
        )));
    }
    let mut threshold = k.threshold().max(2);
    let mut tails = Vec::with_capacity(k.period());
    for r in 0..k.period() {
        let poly = k.class_poly(r);
        let coeff = |i: usize| poly.coeffs().get(i).copied().unwrap_or_else(Rational::zero);
        let (alpha, beta) = (coeff(1), coeff(0));
        let shift = (alpha + beta).abs();
        let (value, margin) = if alpha.is_integer() {
            let v = alpha.to_integer() - i128::from((alpha + beta).is_negative());
            (v, shift)
        } else {
            let frac = alpha - alpha.floor();
            let delta = frac.min(Rational::from_integer(1) - frac);
            (alpha.floor().to_integer(), shift / delta)
        };
        threshold = threshold.max(margin.ceil().to_integer() as u64 + 3);
        tails.push(Poly::constant(value));
    }
    let tail_q = QuasiPoly::new(Vec::new(), tails)?;
    let n_minus_1 = QuasiPoly::affine(1, -1);
    let jj = k.sub(&tail_q.mul(&n_minus_1));
    let head_q = QuasiPoly::select(&jj.compare(Relation::Lt, &tail_q), &jj, &jj.add_const(1));
    let patch: Vec<i128> = (0..threshold)
        .map(|n| match complete_endpoints((n as i128).max(2), k.eval(n)) {
            Some((t, h)) => if tail { t } else { h },
            None => 0,
        })
        .collect();
    Ok(if tail { tail_q } else { head_q }.patch_prefix(&patch))
}

impl fmt::Display for DigraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
