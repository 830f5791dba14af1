//! Connectedness of nonstandard digraphs, decided through the filter, and
//! the arc-count bounds for hyperfinite ones.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::connectivity::{Classification, ComponentKind};
use crate::error::{Error, Result};
use crate::filter::IndexSet;
use crate::numbers::{HyperNat, Relation};
use crate::ultrapower::{Builtin, Decision, GradeSets, InternalElement, Sort, Ultrapower};

/// Grade of a pair of internal vertices with the index sets it rests on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub grade: Classification,
    /// `{n : a dipath runs from u_n to v_n}`.
    pub reach_forward: IndexSet,
    /// `{n : a dipath runs from v_n to u_n}`.
    pub reach_backward: IndexSet,
    /// `{n : a semipath joins u_n and v_n}`.
    pub semireach: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyClassification {
    pub grade: Classification,
    pub sets: GradeSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsCategory {
    CompleteSymmetric,
    Strong,
    StrictlyUnilateral,
    StrictlyWeak,
    Disconnected,
}

impl BoundsCategory {
    pub fn name(self) -> &'static str {
        match self {
            BoundsCategory::CompleteSymmetric => "complete_symmetric",
            BoundsCategory::Strong => "strong",
            BoundsCategory::StrictlyUnilateral => "strictly_unilateral",
            BoundsCategory::StrictlyWeak => "strictly_weak",
            BoundsCategory::Disconnected => "disconnected",
        }
    }

    pub fn inequality(self) -> &'static str {
        match self {
            BoundsCategory::CompleteSymmetric => "q = p(p-1)",
            BoundsCategory::Strong => "p > 1 implies p <= q <= p(p-1)",
            BoundsCategory::StrictlyUnilateral => "p-1 <= q <= (p-1)^2",
            BoundsCategory::StrictlyWeak => "p-1 <= q <= (p-1)(p-2)",
            BoundsCategory::Disconnected => "0 <= q <= (p-1)(p-2)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    /// Vertex count.
    pub p: HyperNat,
    /// Arc count.
    pub q: HyperNat,
    pub category: BoundsCategory,
    /// `{n : the inequality holds for D_n}`.
    pub bound: Decision,
    /// `{n : p_n ≥ 3}`, checked for strictly weak digraphs only.
    pub at_least_three: Option<Decision>,
    pub holds: bool,
}

impl Ultrapower {
    fn expect_vertex(x: &InternalElement) -> Result<()> {
        if x.sort() == Sort::Vertex {
            Ok(())
        } else {
            Err(Error::SortMismatch { expected: "vertex", found: x.sort().name() })
        }
    }

    fn pair_sets(&self, u: &InternalElement, v: &InternalElement) -> Result<(IndexSet, IndexSet, IndexSet)> {
        Ultrapower::expect_vertex(u)?;
        Ultrapower::expect_vertex(v)?;
        self.equality_set(u, v)?;
        let f = self.family();
        let forward = f.directed(u.labels(), v.labels())?.set;
        let backward = f.directed(v.labels(), u.labels())?.set;
        let semi = f.semi(u.labels(), v.labels())?.set;
        Ok((forward, backward, semi))
    }

    fn grade_of(&self, forward: &IndexSet, backward: &IndexSet, semi: &IndexSet) -> Classification {
        let o = self.oracle();
        if o.decide(&forward.intersect(backward)) {
            Classification::Strong
        } else if o.decide(&forward.union(backward)) {
            Classification::StrictlyUnilateral
        } else if o.decide(semi) {
            Classification::StrictlyWeak
        } else {
            Classification::Disconnected
        }
    }

    pub fn ns_pair_connectedness(&self, u: &InternalElement, v: &InternalElement) -> Result<PairClassification> {
        if self.ns_equal(u, v)?.holds {
            return Err(Error::EqualVertices);
        }
        let (reach_forward, reach_backward, semireach) = self.pair_sets(u, v)?;
        let grade = self.grade_of(&reach_forward, &reach_backward, &semireach);
        Ok(PairClassification { grade, reach_forward, reach_backward, semireach })
    }

    /// Length `[k_n]` of the shortest hyperfinite dipath from `u` to `v`;
    /// indices without a dipath get length 0.
    pub fn ns_dipath_length(&self, u: &InternalElement, v: &InternalElement) -> Result<(HyperNat, IndexSet)> {
        Ultrapower::expect_vertex(u)?;
        Ultrapower::expect_vertex(v)?;
        self.equality_set(u, v)?;
        let reach = self.family().directed(u.labels(), v.labels())?;
        if !self.oracle().decide(&reach.set) {
            return Err(Error::NotReachable);
        }
        Ok((HyperNat::try_from(reach.length)?, reach.set))
    }

    pub fn ns_classify_family(&self) -> FamilyClassification {
        let sets = self.family().grade_sets();
        let grade = [
            Classification::Strong,
            Classification::StrictlyUnilateral,
            Classification::StrictlyWeak,
            Classification::Disconnected,
        ]
        .into_iter()
        .find(|g| self.oracle().decide(sets.get(*g)))
        .expect("grade sets partition ℕ");
        FamilyClassification { grade, sets }
    }

    /// Components over a finite roster of internal vertices, as sorted lists
    /// of roster positions.
    pub fn ns_components(&self, roster: &[InternalElement], kind: ComponentKind) -> Result<Vec<Vec<usize>>> {
        let k = roster.len();
        let mut related = vec![vec![true; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let r = if self.ns_equal(&roster[i], &roster[j])?.holds {
                    true
                } else {
                    let (f, b, s) = self.pair_sets(&roster[i], &roster[j])?;
                    let grade = self.grade_of(&f, &b, &s);
                    match kind {
                        ComponentKind::Strong => grade == Classification::Strong,
                        ComponentKind::Unilateral => matches!(grade, Classification::Strong | Classification::StrictlyUnilateral),
                        ComponentKind::Weak => grade != Classification::Disconnected,
                    }
                };
                related[i][j] = r;
                related[j][i] = r;
            }
        }
        for x in roster {
            Ultrapower::expect_vertex(x)?;
        }
        let mut out = match kind {
            ComponentKind::Strong | ComponentKind::Weak => {
                let mut classes: Vec<Vec<usize>> = Vec::new();
                for i in 0..k {
                    match classes.iter_mut().find(|c| related[c[0]][i]) {
                        Some(c) => c.push(i),
                        None => classes.push(vec![i]),
                    }
                }
                classes
            }
            ComponentKind::Unilateral => maximal_cliques(&related),
        };
        out.sort();
        Ok(out)
    }

    /// Arc-count bounds for a hyperfinite digraph without parallel arcs or
    /// self-loops.
    pub fn check_bounds(&self) -> Result<BoundsReport> {
        if !self.is_hyperfinite().holds {
            return Err(Error::NotHyperfinite);
        }
        if !self.is_simple_ae().holds {
            return Err(Error::NotSimple);
        }
        let (p, q) = self.family().counts().ok_or(Error::NotHyperfinite)?;
        let p = HyperNat::try_from(p)?;
        let q = HyperNat::try_from(q)?;
        let category = if self.family().builtin_tail() == Some(Builtin::CompleteSymmetric) {
            BoundsCategory::CompleteSymmetric
        } else {
            match self.ns_classify_family().grade {
                Classification::Strong => BoundsCategory::Strong,
                Classification::StrictlyUnilateral => BoundsCategory::StrictlyUnilateral,
                Classification::StrictlyWeak => BoundsCategory::StrictlyWeak,
                Classification::Disconnected => BoundsCategory::Disconnected,
            }
        };
        let p1 = p.monus_const(1);
        let p2 = p.monus_const(2);
        let witness = match category {
            BoundsCategory::CompleteSymmetric => q.compare(Relation::Eq, &p.mul(&p1)),
            BoundsCategory::Strong => {
                let bound = p.compare(Relation::Le, &q).intersect(&q.compare(Relation::Le, &p.mul(&p1)));
                p.compare(Relation::Le, &HyperNat::constant(1)).union(&bound)
            }
            BoundsCategory::StrictlyUnilateral => p1.compare(Relation::Le, &q).intersect(&q.compare(Relation::Le, &p1.mul(&p1))),
            BoundsCategory::StrictlyWeak => p1.compare(Relation::Le, &q).intersect(&q.compare(Relation::Le, &p1.mul(&p2))),
            BoundsCategory::Disconnected => q.compare(Relation::Le, &p1.mul(&p2)),
        };
        let bound = self.decide(witness);
        let at_least_three =
            (category == BoundsCategory::StrictlyWeak).then(|| self.decide(p.compare(Relation::Ge, &HyperNat::constant(3))));
        let holds = bound.holds && at_least_three.as_ref().is_none_or(|d| d.holds);
        Ok(BoundsReport { p, q, category, bound, at_least_three, holds })
    }
}

/// All maximal cliques of a symmetric relation (Bron–Kerbosch with pivot),
/// each sorted.
fn maximal_cliques(related: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn expand(r: &mut Vec<usize>, mut p: BTreeSet<usize>, mut x: BTreeSet<usize>, adj: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = *p.iter().chain(x.iter()).max_by_key(|&&u| p.iter().filter(|&&w| adj[u][w]).count()).unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v] || v == pivot).collect();
        for v in candidates {
            let nbrs = |s: &BTreeSet<usize>| s.iter().copied().filter(|&w| w != v && adj[v][w]).collect::<BTreeSet<_>>();
            r.push(v);
            expand(r, nbrs(&p), nbrs(&x), adj, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(&mut Vec::new(), (0..related.len()).collect(), BTreeSet::new(), related, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::FilterOracle;
    use crate::ultrapower::{parse_expression, DigraphFamily};

    fn up(b: Builtin) -> Ultrapower {
        Ultrapower::new(DigraphFamily::builtin(b), FilterOracle::default())
    }

    fn v(u: &Ultrapower, text: &str) -> InternalElement {
        u.vertex(parse_expression(text).unwrap()).unwrap()
    }

    #[test]
    fn pair_grades() {
        let w = up(Builtin::OneWayDipathEnlargement);
        assert_eq!(w.ns_pair_connectedness(&v(&w, "0"), &v(&w, "n")).unwrap().grade, Classification::StrictlyUnilateral);
        let c = up(Builtin::Dicycle);
        assert_eq!(c.ns_pair_connectedness(&v(&c, "0"), &v(&c, "1")).unwrap().grade, Classification::Strong);
        let s = up(Builtin::InStar);
        assert_eq!(s.ns_pair_connectedness(&v(&s, "1"), &v(&s, "2")).unwrap().grade, Classification::StrictlyWeak);
        assert_eq!(w.ns_pair_connectedness(&v(&w, "n"), &v(&w, "n")), Err(Error::EqualVertices));
    }

    #[test]
    fn dipath_lengths() {
        let w = up(Builtin::OneWayDipathEnlargement);
        let (k, _) = w.ns_dipath_length(&v(&w, "0"), &v(&w, "n")).unwrap();
        assert_eq!(k, HyperNat::identity());
        assert!(k.is_unlimited(&w.oracle()));
        let (k, _) = w.ns_dipath_length(&v(&w, "n"), &v(&w, "n+5")).unwrap();
        assert_eq!(k, HyperNat::constant(5));
        assert_eq!(w.ns_dipath_length(&v(&w, "n"), &v(&w, "0")), Err(Error::NotReachable));
    }

    #[test]
    fn family_grades() {
        assert_eq!(up(Builtin::Dicycle).ns_classify_family().grade, Classification::Strong);
        assert_eq!(up(Builtin::Dipath).ns_classify_family().grade, Classification::StrictlyUnilateral);
        assert_eq!(up(Builtin::DisconnectedDicycles).ns_classify_family().grade, Classification::Disconnected);
    }

    #[test]
    fn roster_components() {
        let s = up(Builtin::InStar);
        let roster = [v(&s, "1"), v(&s, "2"), v(&s, "0")];
        assert_eq!(s.ns_components(&roster, ComponentKind::Unilateral).unwrap(), vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(s.ns_components(&roster, ComponentKind::Strong).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let d = up(Builtin::DisconnectedDicycles);
        let roster = [v(&d, "0"), v(&d, "1"), v(&d, "max(n,2)"), v(&d, "max(n,2)+1")];
        assert_eq!(d.ns_components(&roster, ComponentKind::Weak).unwrap(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn bounds_table() {
        for (b, cat) in [
            (Builtin::CompleteSymmetric, BoundsCategory::CompleteSymmetric),
            (Builtin::Dipath, BoundsCategory::StrictlyUnilateral),
            (Builtin::InStar, BoundsCategory::StrictlyWeak),
            (Builtin::DisconnectedDicycles, BoundsCategory::Disconnected),
            (Builtin::Dicycle, BoundsCategory::Strong),
        ] {
            let r = up(b).check_bounds().unwrap();
            assert_eq!(r.category, cat);
            assert!(r.holds, "{b:?}");
            assert!(r.bound.witness.is_cofinite(), "{b:?}");
        }
        assert!(up(Builtin::CompleteSymmetric).check_bounds().unwrap().bound.witness.is_all());
        assert_eq!(up(Builtin::OneWayDipathEnlargement).check_bounds(), Err(Error::NotHyperfinite));
    }

    #[test]
    fn cliques() {
        let rel = vec![vec![true, true, false], vec![true, true, true], vec![false, true, true]];
        assert_eq!(maximal_cliques(&rel), vec![vec![0, 1], vec![1, 2]]);
    }
}
