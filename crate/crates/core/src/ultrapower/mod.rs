//! The ultrapower `*D = {*A, *V}` of a digraph family, explored through
//! internal elements `[x_n]` named by selectors.
//!
//! `*A` and `*V` are never materialized. Every question about internal
//! elements becomes an index set `{n : …}` that the filter oracle decides;
//! the set is returned alongside the answer as its certificate.

mod family;
mod selector;

use std::sync::Arc;

use serde::Serialize;

pub use family::{Builtin, DigraphFamily, FamilyTail, GradeSets, Reach, BUILTINS};
pub use selector::{parse_expression, PolarityRule, Selector, SelectorSpec, Sort};

use crate::digraph::{Ditip, Incidence, Polarity};
use crate::error::{Error, Result};
use crate::filter::{FilterOracle, IndexSet};
use crate::numbers::{QuasiPoly, Relation};

/// A decided "for almost all n" statement and the index set behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub witness: IndexSet,
}

impl Decision {
    pub fn new(oracle: &FilterOracle, witness: IndexSet) -> Decision {
        Decision { holds: oracle.decide(&witness), witness }
    }
}

/// A validated internal arc, ditip or vertex `[x_n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalElement {
    family: Arc<DigraphFamily>,
    selector: Selector,
    validity: IndexSet,
}

impl InternalElement {
    pub fn selector(&self) -> &Selector {
        &self.selector
    }

    pub fn sort(&self) -> Sort {
        self.selector.sort()
    }

    pub fn family(&self) -> &Arc<DigraphFamily> {
        &self.family
    }

    /// `{n : x_n exists in D_n}`; cofinite by construction.
    pub fn validity(&self) -> &IndexSet {
        &self.validity
    }

    /// Vertex or arc labels (for ditips, the arc labels).
    pub fn labels(&self) -> &QuasiPoly {
        self.selector.labels()
    }
}

/// A standard element recovered from an internal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardElement {
    Vertex(usize),
    Arc(usize),
    Ditip(Ditip),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacencyMode {
    Vertices,
    Arcs,
}

/// `*D` for a family, with the oracle fixed.
#[derive(Debug, Clone)]
pub struct Ultrapower {
    family: Arc<DigraphFamily>,
    oracle: FilterOracle,
}

impl Ultrapower {
    pub fn new(family: DigraphFamily, oracle: FilterOracle) -> Ultrapower {
        Ultrapower { family: Arc::new(family), oracle }
    }

    pub fn family(&self) -> &DigraphFamily {
        &self.family
    }

    pub fn oracle(&self) -> FilterOracle {
        self.oracle
    }

    pub fn decide(&self, witness: IndexSet) -> Decision {
        Decision::new(&self.oracle, witness)
    }

    fn same_family(&self, x: &InternalElement) -> Result<()> {
        if Arc::ptr_eq(&self.family, &x.family) || *self.family == *x.family {
            Ok(())
        } else {
            Err(Error::FamilyMismatch)
        }
    }

    fn expect_sort(x: &InternalElement, sort: Sort) -> Result<()> {
        if x.sort() == sort {
            Ok(())
        } else {
            Err(Error::SortMismatch { expected: sort.name(), found: x.sort().name() })
        }
    }

    /// Validates a selector: its element must exist in `D_n` for all `n`
    /// from some index on.
    pub fn element(&self, selector: Selector) -> Result<InternalElement> {
        let f = &self.family;
        let validity = match &selector {
            Selector::Vertex(q) => f.vertex_validity(q),
            Selector::Arc(q) | Selector::Ditip { arc: q, .. } => f.arc_validity(q),
        };
        if !validity.is_cofinite() {
            return Err(Error::InvalidSelector(format!("{} selector `{selector}` is valid only on {validity}", selector.sort().name())));
        }
        // reject selectors whose adapters cannot be formed on this family
        match &selector {
            Selector::Vertex(q) => {
                f.semi(q, q)?;
            }
            Selector::Arc(q) | Selector::Ditip { arc: q, .. } => {
                f.arc_tail(q)?;
            }
        }
        Ok(InternalElement { family: Arc::clone(&self.family), selector, validity })
    }

    pub fn vertex(&self, q: QuasiPoly) -> Result<InternalElement> {
        self.element(Selector::Vertex(q))
    }

    pub fn arc(&self, q: QuasiPoly) -> Result<InternalElement> {
        self.element(Selector::Arc(q))
    }

    pub fn ditip(&self, arc: QuasiPoly, polarity: PolarityRule) -> Result<InternalElement> {
        self.element(Selector::Ditip { arc, polarity })
    }

    /// Parses a selector and fixes its sort.
    pub fn parse_element(&self, text: &str, sort: Sort) -> Result<InternalElement> {
        self.element(SelectorSpec::parse(text)?.into_sort(sort)?)
    }

    /// Label of the vertex holding each ditip.
    fn ditip_owner(&self, arc: &QuasiPoly, polarity: PolarityRule) -> Result<QuasiPoly> {
        let tail = self.family.arc_tail(arc)?;
        let head = self.family.arc_head(arc)?;
        Ok(QuasiPoly::select(&polarity.intip_set(), &tail, &head))
    }

    /// `{n : x_n = y_n}`, for elements of the same sort.
    pub fn equality_set(&self, x: &InternalElement, y: &InternalElement) -> Result<IndexSet> {
        self.same_family(x)?;
        self.same_family(y)?;
        match (&x.selector, &y.selector) {
            (Selector::Vertex(a), Selector::Vertex(b)) | (Selector::Arc(a), Selector::Arc(b)) => Ok(a.compare(Relation::Eq, b)),
            (Selector::Ditip { arc: a, polarity: p }, Selector::Ditip { arc: b, polarity: q }) => {
                let same_kind = p.intip_set().intersect(&q.intip_set()).union(&p.intip_set().complement().intersect(&q.intip_set().complement()));
                Ok(a.compare(Relation::Eq, b).intersect(&same_kind))
            }
            _ => Err(Error::SortMismatch { expected: x.sort().name(), found: y.sort().name() }),
        }
    }

    pub fn ns_equal(&self, x: &InternalElement, y: &InternalElement) -> Result<Decision> {
        Ok(self.decide(self.equality_set(x, y)?))
    }

    /// Intip iff `{n : p_n is an intip} ∈ ℱ`.
    pub fn ditip_kind(&self, p: &InternalElement) -> Result<(Polarity, IndexSet)> {
        self.same_family(p)?;
        let Selector::Ditip { polarity, .. } = p.selector else {
            return Err(Error::SortMismatch { expected: "ditip", found: p.sort().name() });
        };
        let set = polarity.intip_set();
        let kind = if self.oracle.decide(&set) { Polarity::Intip } else { Polarity::Outtip };
        Ok((kind, set))
    }

    /// `{n : p_n ≍ q_n}`: both ditips lie in the same vertex of `D_n`.
    pub fn shorting_set(&self, p: &InternalElement, q: &InternalElement) -> Result<IndexSet> {
        self.same_family(p)?;
        self.same_family(q)?;
        let owner = |x: &InternalElement| match &x.selector {
            Selector::Ditip { arc, polarity } => self.ditip_owner(arc, *polarity),
            _ => Err(Error::SortMismatch { expected: "ditip", found: x.sort().name() }),
        };
        Ok(owner(p)?.compare(Relation::Eq, &owner(q)?).intersect(&p.validity).intersect(&q.validity))
    }

    pub fn ns_shorted(&self, p: &InternalElement, q: &InternalElement) -> Result<Decision> {
        Ok(self.decide(self.shorting_set(p, q)?))
    }

    /// Groups a roster of internal ditips into nonstandard vertices; each
    /// group lists roster positions.
    pub fn ns_vertex_partition(&self, roster: &[InternalElement]) -> Result<Vec<Vec<usize>>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, p) in roster.iter().enumerate() {
            let mut placed = false;
            for g in groups.iter_mut() {
                if self.ns_shorted(&roster[g[0]], p)?.holds {
                    g.push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                self.shorting_set(p, p)?;
                groups.push(vec![i]);
            }
        }
        Ok(groups)
    }

    /// Index sets where `u_n` holds the intip, resp. the outtip, of `a_n`.
    pub fn incidence_sets(&self, u: &InternalElement, a: &InternalElement) -> Result<(IndexSet, IndexSet)> {
        self.same_family(u)?;
        self.same_family(a)?;
        Ultrapower::expect_sort(u, Sort::Vertex)?;
        Ultrapower::expect_sort(a, Sort::Arc)?;
        let valid = u.validity.intersect(&a.validity);
        let tail = self.family.arc_tail(a.labels())?;
        let head = self.family.arc_head(a.labels())?;
        let holds_in = tail.compare(Relation::Eq, u.labels()).intersect(&valid);
        let holds_out = head.compare(Relation::Eq, u.labels()).intersect(&valid);
        Ok((holds_in, holds_out))
    }

    pub fn ns_incident(&self, u: &InternalElement, a: &InternalElement) -> Result<(Incidence, IndexSet)> {
        let (i, o) = self.incidence_sets(u, a)?;
        let cells = [
            (Incidence::Both, i.intersect(&o)),
            (Incidence::Inward, i.difference(&o)),
            (Incidence::Outward, o.difference(&i)),
            (Incidence::None, i.union(&o).complement()),
        ];
        let (kind, set) = cells.into_iter().find(|(_, s)| self.oracle.decide(s)).expect("the four cells partition ℕ");
        Ok((kind, set))
    }

    pub fn adjacency_set(&self, x: &InternalElement, y: &InternalElement, mode: AdjacencyMode) -> Result<IndexSet> {
        self.same_family(x)?;
        self.same_family(y)?;
        let sort = match mode {
            AdjacencyMode::Vertices => Sort::Vertex,
            AdjacencyMode::Arcs => Sort::Arc,
        };
        Ultrapower::expect_sort(x, sort)?;
        Ultrapower::expect_sort(y, sort)?;
        match mode {
            AdjacencyMode::Vertices => self.family.vertex_adjacency(x.labels(), y.labels()),
            AdjacencyMode::Arcs => {
                if self.ns_equal(x, y)?.holds {
                    return Err(Error::SameArc);
                }
                self.family.arc_adjacency(x.labels(), y.labels())
            }
        }
    }

    pub fn ns_adjacent(&self, x: &InternalElement, y: &InternalElement, mode: AdjacencyMode) -> Result<Decision> {
        Ok(self.decide(self.adjacency_set(x, y, mode)?))
    }

    /// The standard element equal to `x` almost everywhere, for enlargements
    /// of finite digraphs. Valid selectors there are eventually periodic;
    /// the value on the oracle's residue class is returned.
    pub fn standardize(&self, x: &InternalElement) -> Result<StandardElement> {
        self.same_family(x)?;
        if self.family.finite_tail().is_none() {
            return Err(Error::NotFiniteEnlargement);
        }
        let q = x.labels();
        let at = |q: &QuasiPoly| q.class_poly(self.oracle.residue(q.period())).eval(0).to_integer() as usize;
        Ok(match &x.selector {
            Selector::Vertex(_) => StandardElement::Vertex(at(q)),
            Selector::Arc(_) => StandardElement::Arc(at(q)),
            Selector::Ditip { polarity, .. } => {
                let arc = at(q);
                let intip = self.oracle.decide(&polarity.intip_set());
                StandardElement::Ditip(if intip { Ditip::intip(arc) } else { Ditip::outtip(arc) })
            }
        })
    }

    /// `{n : D_n is finite} ∈ ℱ`.
    pub fn is_hyperfinite(&self) -> Decision {
        self.decide(self.family.finite_set())
    }

    /// No self-loops and no parallel arcs for almost all `n`.
    pub fn is_simple_ae(&self) -> Decision {
        self.decide(self.family.simple_set())
    }

    /// Weakly connected for almost all `n`.
    pub fn is_weakly_connected_ae(&self) -> Decision {
        self.decide(self.family.grade_sets().disconnected.complement())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

    fn q(text: &str) -> QuasiPoly {
        parse_expression(text).unwrap()
    }

    fn one_way() -> Ultrapower {
        Ultrapower::new(DigraphFamily::builtin(Builtin::OneWayDipathEnlargement), FilterOracle::default())
    }

    fn c3(tower: u64) -> Ultrapower {
        let d = Digraph::from_arc_list(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        Ultrapower::new(DigraphFamily::enlargement(d), FilterOracle::new(tower))
    }

    #[test]
    fn selector_validation() {
        assert!(one_way().vertex(q("n")).is_ok());
        assert!(matches!(c3(0).vertex(q("n")), Err(Error::InvalidSelector(_))));
        let dipath = Ultrapower::new(DigraphFamily::builtin(Builtin::Dipath), FilterOracle::default());
        assert!(dipath.vertex(q("floor(n/2)")).is_ok());
        assert!(matches!(dipath.vertex(q("n+2")), Err(Error::InvalidSelector(_))));
    }

    #[test]
    fn equality() {
        let u = one_way();
        let n = u.vertex(q("n")).unwrap();
        assert!(u.ns_equal(&n, &n).unwrap().holds);
        let two_n = u.vertex(q("2n")).unwrap();
        let d = u.ns_equal(&n, &two_n).unwrap();
        assert!(!d.holds);
        assert_eq!(d.witness, IndexSet::finite(&[0]));
        let a = u.arc(q("n")).unwrap();
        assert!(matches!(u.ns_equal(&n, &a), Err(Error::SortMismatch { .. })));
    }

    #[test]
    fn ditip_kinds() {
        for (tower, kind) in [(0, Polarity::Intip), (1, Polarity::Outtip)] {
            let u = c3(tower);
            let p = u.ditip(q("0"), PolarityRule::Alternating).unwrap();
            assert_eq!(u.ditip_kind(&p).unwrap().0, kind);
        }
        let u = c3(0);
        assert_eq!(u.ditip_kind(&u.ditip(q("0"), PolarityRule::Out).unwrap()).unwrap().0, Polarity::Outtip);
    }

    #[test]
    fn shorting_groups() {
        let u = one_way();
        let roster = [
            u.ditip(q("n"), PolarityRule::Out).unwrap(),
            u.ditip(q("n+1"), PolarityRule::In).unwrap(),
            u.ditip(q("n+2"), PolarityRule::In).unwrap(),
        ];
        assert_eq!(u.ns_vertex_partition(&roster).unwrap(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn incidence_and_adjacency() {
        let u = c3(0);
        let (kind, _) = u.ns_incident(&u.vertex(q("1")).unwrap(), &u.arc(q("0")).unwrap()).unwrap();
        assert_eq!(kind, Incidence::Outward);
        let w = one_way();
        let (n, n1, n2) = (w.vertex(q("n")).unwrap(), w.vertex(q("n+1")).unwrap(), w.vertex(q("n+2")).unwrap());
        assert!(w.ns_adjacent(&n, &n1, AdjacencyMode::Vertices).unwrap().holds);
        assert!(!w.ns_adjacent(&n, &n2, AdjacencyMode::Vertices).unwrap().holds);
        let (a, b) = (w.arc(q("n")).unwrap(), w.arc(q("n+1")).unwrap());
        assert!(w.ns_adjacent(&a, &b, AdjacencyMode::Arcs).unwrap().holds);
        let looped = Ultrapower::new(DigraphFamily::enlargement(Digraph::from_arc_list(&[(0, 0)]).unwrap()), FilterOracle::default());
        let (kind, _) = looped.ns_incident(&looped.vertex(q("0")).unwrap(), &looped.arc(q("0")).unwrap()).unwrap();
        assert_eq!(kind, Incidence::Both);
    }

    #[test]
    fn standardization() {
        let u = c3(0);
        assert_eq!(u.standardize(&u.vertex(q("2")).unwrap()).unwrap(), StandardElement::Vertex(2));
        assert_eq!(u.standardize(&u.arc(q("1")).unwrap()).unwrap(), StandardElement::Arc(1));
        let late = QuasiPoly::new(vec![0; 10], vec![crate::numbers::Poly::constant(2)]).unwrap();
        assert_eq!(u.standardize(&u.vertex(late).unwrap()).unwrap(), StandardElement::Vertex(2));
        assert_eq!(one_way().standardize(&one_way().vertex(q("0")).unwrap()), Err(Error::NotFiniteEnlargement));
    }

    #[test]
    fn hyperfiniteness() {
        let cs = Ultrapower::new(DigraphFamily::builtin(Builtin::CompleteSymmetric), FilterOracle::default());
        assert!(cs.is_hyperfinite().holds);
        assert!(!one_way().is_hyperfinite().holds);
        let mixed = DigraphFamily::explicit(
            vec![Digraph::from_arc_list(&[(0, 1)]).unwrap(); 3],
            FamilyTail::Builtin(Builtin::OneWayDipathEnlargement),
        );
        assert!(!Ultrapower::new(mixed, FilterOracle::default()).is_hyperfinite().holds);
    }
}
