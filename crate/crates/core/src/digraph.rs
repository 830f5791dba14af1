//! Standard digraphs built from ditips.
//!
//! Every arc is an ordered pair `⟨s, t⟩` of ditips: `s` is its intip and `t`
//! its outtip. Vertices are the cells of a partition of the set of all
//! ditips, so a vertex is never empty and self-loops and parallel arcs come
//! for free. The arc is directed from the vertex holding its intip toward the
//! vertex holding its outtip.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "in")]
    Intip,
    #[serde(rename = "out")]
    Outtip,
}

impl Polarity {
    fn index(self) -> usize {
        match self {
            Polarity::Intip => 0,
            Polarity::Outtip => 1,
        }
    }
}

/// A directed tip, identified by its owning arc and its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ditip {
    pub arc: usize,
    pub polarity: Polarity,
}

impl Ditip {
    pub fn intip(arc: usize) -> Ditip {
        Ditip { arc, polarity: Polarity::Intip }
    }

    pub fn outtip(arc: usize) -> Ditip {
        Ditip { arc, polarity: Polarity::Outtip }
    }
}

impl Serialize for Ditip {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.polarity, self.arc).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ditip {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (polarity, arc) = <(Polarity, usize)>::deserialize(deserializer)?;
        Ok(Ditip { arc, polarity })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: usize,
    pub intip: Ditip,
    pub outtip: Ditip,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: usize,
    /// Sorted, nonempty.
    pub ditips: Vec<Ditip>,
}

/// How a vertex and an arc are incident.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    /// The vertex holds the arc's intip.
    Inward,
    /// The vertex holds the arc's outtip.
    Outward,
    /// Self-loop at the vertex.
    Both,
    None,
}

impl Incidence {
    pub fn from_flags(holds_intip: bool, holds_outtip: bool) -> Incidence {
        match (holds_intip, holds_outtip) {
            (true, true) => Incidence::Both,
            (true, false) => Incidence::Inward,
            (false, true) => Incidence::Outward,
            (false, false) => Incidence::None,
        }
    }
}

/// A digraph `{A, V}`: arcs plus a partition of their ditips into vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    arcs: Vec<Arc>,
    vertices: Vec<Vertex>,
    /// `tip_owner[arc][0]` owns the intip, `[1]` the outtip.
    tip_owner: Vec<[usize; 2]>,
}

impl Digraph {
    /// Arc-list form: arc `(u, v)` puts its intip in the vertex labelled `u`
    /// and its outtip in the vertex labelled `v`. Arcs are numbered by input
    /// order and vertices by first appearance of their label.
    pub fn from_arc_list(arcs: &[(i64, i64)]) -> Result<Digraph> {
        if arcs.is_empty() {
            return Err(Error::EmptyDigraph);
        }
        let mut ids: BTreeMap<i64, usize> = BTreeMap::new();
        let mut cells: Vec<Vec<Ditip>> = Vec::new();
        for (a, &(tail, head)) in arcs.iter().enumerate() {
            for (label, tip) in [(tail, Ditip::intip(a)), (head, Ditip::outtip(a))] {
                let next = ids.len();
                let v = *ids.entry(label).or_insert(next);
                if v == cells.len() {
                    cells.push(Vec::new());
                }
                cells[v].push(tip);
            }
        }
        Digraph::from_partition(arcs.len(), cells)
    }

    /// Vertices `0..vertex_count` with ids equal to labels; every vertex must
    /// receive at least one ditip.
    pub fn from_vertex_arcs(vertex_count: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        if arcs.is_empty() {
            return Err(Error::EmptyDigraph);
        }
        let mut cells = vec![Vec::new(); vertex_count];
        for (a, &(tail, head)) in arcs.iter().enumerate() {
            for (v, tip) in [(tail, Ditip::intip(a)), (head, Ditip::outtip(a))] {
                cells
                    .get_mut(v)
                    .ok_or_else(|| Error::Partition(format!("vertex {v} out of range 0..{vertex_count}")))?
                    .push(tip);
            }
        }
        Digraph::from_partition(arcs.len(), cells)
    }

    /// Canonical form: the ditips of arcs `0..arc_count` partitioned into the
    /// given cells, one vertex per cell in order.
    pub fn from_partition(arc_count: usize, cells: Vec<Vec<Ditip>>) -> Result<Digraph> {
        if arc_count == 0 {
            return Err(Error::EmptyDigraph);
        }
        let mut tip_owner = vec![[usize::MAX; 2]; arc_count];
        let mut vertices = Vec::with_capacity(cells.len());
        for (v, cell) in cells.into_iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::Partition(format!("cell {v} is empty")));
            }
            let mut ditips = cell;
            ditips.sort();
            for tip in &ditips {
                let slot = tip_owner
                    .get_mut(tip.arc)
                    .ok_or_else(|| Error::Partition(format!("ditip of unknown arc {}", tip.arc)))?;
                if slot[tip.polarity.index()] != usize::MAX {
                    return Err(Error::Partition(format!("ditip {:?} of arc {} appears twice", tip.polarity, tip.arc)));
                }
                slot[tip.polarity.index()] = v;
            }
            vertices.push(Vertex { id: v, ditips });
        }
        for (a, owners) in tip_owner.iter().enumerate() {
            for (i, &o) in owners.iter().enumerate() {
                if o == usize::MAX {
                    let pol = if i == 0 { "intip" } else { "outtip" };
                    return Err(Error::Partition(format!("{pol} of arc {a} is in no cell")));
                }
            }
        }
        let arcs = (0..arc_count)
            .map(|id| Arc { id, intip: Ditip::intip(id), outtip: Ditip::outtip(id) })
            .collect();
        Ok(Digraph { arcs, vertices, tip_owner })
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn owner(&self, tip: Ditip) -> usize {
        self.tip_owner[tip.arc][tip.polarity.index()]
    }

    /// Vertex holding the arc's intip.
    pub fn tail(&self, arc: usize) -> usize {
        self.tip_owner[arc][0]
    }

    /// Vertex holding the arc's outtip.
    pub fn head(&self, arc: usize) -> usize {
        self.tip_owner[arc][1]
    }

    /// `(tail, head)` for every arc, in arc order.
    pub fn endpoints(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tip_owner.iter().map(|o| (o[0], o[1]))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownId { kind: "vertex", id: v })
        }
    }

    pub fn check_arc(&self, a: usize) -> Result<()> {
        if a < self.arcs.len() {
            Ok(())
        } else {
            Err(Error::UnknownId { kind: "arc", id: a })
        }
    }

    pub fn is_self_loop(&self, a: usize) -> bool {
        self.tail(a) == self.head(a)
    }

    /// No self-loops and no two arcs with the same tail and head.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.endpoints().all(|(t, h)| t != h && seen.insert((t, h)))
    }

    /// `(u ↪ a)`, `(a ↪ u)`, both, or neither.
    pub fn incidence(&self, v: usize, a: usize) -> Result<Incidence> {
        self.check_vertex(v)?;
        self.check_arc(a)?;
        Ok(Incidence::from_flags(self.tail(a) == v, self.head(a) == v))
    }

    /// Two vertices are adjacent when some arc has its intip in one and its
    /// outtip in the other; for `u = v` this means a self-loop at `u`.
    pub fn vertex_adjacency(&self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.endpoints().any(|(t, h)| (t == u && h == v) || (t == v && h == u)))
    }

    /// Two distinct arcs are adjacent when some vertex holds a ditip of each.
    pub fn arc_adjacency(&self, a: usize, c: usize) -> Result<bool> {
        self.check_arc(a)?;
        self.check_arc(c)?;
        if a == c {
            return Err(Error::SameArc);
        }
        let ends_a = [self.tail(a), self.head(a)];
        let ends_c = [self.tail(c), self.head(c)];
        Ok(ends_a.iter().any(|w| ends_c.contains(w)))
    }

    fn selection(&self, arcs: &[usize]) -> Result<BTreeSet<usize>> {
        if arcs.is_empty() {
            return Err(Error::EmptySelection);
        }
        arcs.iter()
            .map(|&a| self.check_arc(a).map(|_| a))
            .collect()
    }

    /// Subdigraph induced by an arc subset: the arcs plus every vertex that
    /// holds at least one of their ditips.
    pub fn induced_subdigraph(&self, arcs: &[usize]) -> Result<Subdigraph> {
        let arcs = self.selection(arcs)?;
        let vertices = arcs.iter().flat_map(|&a| [self.tail(a), self.head(a)]).collect();
        Ok(Subdigraph { arcs, vertices })
    }

    /// Reduced digraph induced by an arc subset: touched vertices keep only
    /// the ditips of selected arcs. Arcs are renumbered in increasing order
    /// of their original ids and vertices keep their relative order.
    pub fn reduced_digraph(&self, arcs: &[usize]) -> Result<Digraph> {
        let arcs = self.selection(arcs)?;
        let new_arc: BTreeMap<usize, usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let cells = self
            .vertices
            .iter()
            .map(|v| {
                v.ditips
                    .iter()
                    .filter_map(|t| new_arc.get(&t.arc).map(|&arc| Ditip { arc, polarity: t.polarity }))
                    .collect::<Vec<_>>()
            })
            .filter(|cell| !cell.is_empty())
            .collect();
        Digraph::from_partition(arcs.len(), cells)
    }

    /// The underlying graph: directions erased, parallel branches kept.
    pub fn underlying_graph(&self) -> UGraph {
        UGraph {
            branches: self.endpoints().map(|(t, h)| [t, h]).collect(),
            nodes: self
                .vertices
                .iter()
                .map(|v| v.ditips.iter().map(|t| Tip { branch: t.arc, end: t.polarity.index() as u8 }).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("digraph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Digraph> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A tip of the underlying graph: the branch it belongs to and which end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tip {
    pub branch: usize,
    pub end: u8,
}

/// Underlying graph `{B, X}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UGraph {
    /// Node ids at the two ends of each branch.
    pub branches: Vec<[usize; 2]>,
    /// Node partition of the tips.
    pub nodes: Vec<Vec<Tip>>,
}

impl UGraph {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Branches joining the two nodes, in either order.
    pub fn branches_between(&self, x: usize, y: usize) -> usize {
        self.branches.iter().filter(|[a, b]| (*a == x && *b == y) || (*a == y && *b == x)).count()
    }
}

/// Arc-induced subdigraph `{A_s, V_s}`; not necessarily a digraph in its own
/// right, since its vertices may hold ditips of arcs outside `A_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdigraph {
    pub arcs: BTreeSet<usize>,
    pub vertices: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DigraphLiteral {
    Arcs {
        arcs: Vec<[i64; 2]>,
    },
    Partition {
        arc_count: usize,
        partition: Vec<Vec<Ditip>>,
    },
}

impl Serialize for Digraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphLiteral::Partition {
            arc_count: self.arcs.len(),
            partition: self.vertices.iter().map(|v| v.ditips.clone()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let built = match DigraphLiteral::deserialize(deserializer)? {
            DigraphLiteral::Arcs { arcs } => {
                let pairs: Vec<(i64, i64)> = arcs.iter().map(|&[t, h]| (t, h)).collect();
                Digraph::from_arc_list(&pairs)
            }
            DigraphLiteral::Partition { arc_count, partition } => Digraph::from_partition(arc_count, partition),
        };
        built.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(arcs: &[(i64, i64)]) -> Digraph {
        Digraph::from_arc_list(arcs).unwrap()
    }

    #[test]
    fn single_arc() {
        let d = g(&[(0, 1)]);
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.vertices()[0].ditips, vec![Ditip::intip(0)]);
        assert_eq!(d.vertices()[1].ditips, vec![Ditip::outtip(0)]);
    }

    #[test]
    fn self_loop_shares_one_vertex() {
        let d = g(&[(0, 0)]);
        assert_eq!(d.vertex_count(), 1);
        assert_eq!(d.vertices()[0].ditips.len(), 2);
        assert!(d.is_self_loop(0));
        assert_eq!(d.incidence(0, 0).unwrap(), Incidence::Both);
    }

    #[test]
    fn explicit_chain_partition() {
        let cells = vec![vec![Ditip::intip(0)], vec![Ditip::outtip(0), Ditip::intip(1)], vec![Ditip::outtip(1)]];
        let d = Digraph::from_partition(2, cells).unwrap();
        assert_eq!(d, g(&[(0, 1), (1, 2)]));
    }

    #[test]
    fn partition_errors() {
        assert_eq!(Digraph::from_arc_list(&[]), Err(Error::EmptyDigraph));
        let overlap = vec![vec![Ditip::intip(0), Ditip::outtip(0)], vec![Ditip::outtip(0)]];
        assert!(matches!(Digraph::from_partition(1, overlap), Err(Error::Partition(_))));
        let missing = vec![vec![Ditip::intip(0)]];
        assert!(matches!(Digraph::from_partition(1, missing), Err(Error::Partition(_))));
        let empty = vec![vec![Ditip::intip(0), Ditip::outtip(0)], vec![]];
        assert!(matches!(Digraph::from_partition(1, empty), Err(Error::Partition(_))));
    }

    #[test]
    fn underlying_graph_keeps_parallel_branches() {
        let ug = g(&[(0, 1)]).underlying_graph();
        assert_eq!((ug.branch_count(), ug.node_count()), (1, 2));
        let ug = g(&[(0, 1), (1, 0)]).underlying_graph();
        assert_eq!((ug.branch_count(), ug.node_count()), (2, 2));
        assert_eq!(ug.branches_between(0, 1), 2);
        let ug = g(&[(0, 0)]).underlying_graph();
        assert_eq!((ug.branch_count(), ug.node_count()), (1, 1));
        assert_eq!(ug.branches[0], [0, 0]);
    }

    #[test]
    fn incidence_on_dipath() {
        let d = g(&[(0, 1), (1, 2)]);
        assert_eq!(d.incidence(1, 0).unwrap(), Incidence::Outward);
        assert_eq!(d.incidence(1, 1).unwrap(), Incidence::Inward);
        assert_eq!(d.incidence(0, 1).unwrap(), Incidence::None);
        assert_eq!(d.incidence(5, 0), Err(Error::UnknownId { kind: "vertex", id: 5 }));
    }

    #[test]
    fn adjacency() {
        assert!(g(&[(0, 1)]).vertex_adjacency(0, 1).unwrap());
        assert!(!g(&[(0, 1), (1, 2)]).vertex_adjacency(0, 2).unwrap());
        let d = g(&[(0, 1), (2, 1)]);
        assert!(!d.vertex_adjacency(0, 2).unwrap());
        assert!(d.vertex_adjacency(2, 1).unwrap());
        assert!(g(&[(0, 1), (1, 2)]).arc_adjacency(0, 1).unwrap());
        assert!(!g(&[(0, 1), (2, 3)]).arc_adjacency(0, 1).unwrap());
        assert!(g(&[(0, 1), (0, 2)]).arc_adjacency(0, 1).unwrap());
        assert_eq!(g(&[(0, 1)]).arc_adjacency(0, 0), Err(Error::SameArc));
    }

    #[test]
    fn induced_subdigraphs() {
        let d = g(&[(0, 1), (1, 2)]);
        assert_eq!(d.induced_subdigraph(&[0]).unwrap().vertices, BTreeSet::from([0, 1]));
        assert_eq!(d.induced_subdigraph(&[0, 1]).unwrap().vertices, BTreeSet::from([0, 1, 2]));
        let star = g(&[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.induced_subdigraph(&[1, 2]).unwrap().vertices, BTreeSet::from([0, 2, 3]));
        assert_eq!(d.induced_subdigraph(&[]), Err(Error::EmptySelection));
        assert!(matches!(d.induced_subdigraph(&[7]), Err(Error::UnknownId { .. })));
    }

    #[test]
    fn reduced_digraphs() {
        let d = g(&[(0, 1), (1, 2)]);
        let r = d.reduced_digraph(&[0]).unwrap();
        assert_eq!(r.arc_count(), 1);
        assert_eq!(r.vertices()[1].ditips, vec![Ditip::outtip(0)]);
        assert_eq!(d.reduced_digraph(&[0, 1]).unwrap(), d);
        let back = g(&[(0, 1), (1, 0)]).reduced_digraph(&[0]).unwrap();
        assert_eq!(back.vertex_count(), 2);
        assert!(back.vertices().iter().all(|v| v.ditips.len() == 1));
    }

    #[test]
    fn json_forms() {
        let d = Digraph::from_json(r#"{"arcs": [[0,1],[1,2]]}"#).unwrap();
        let text = d.to_json();
        assert_eq!(text, r#"{"arc_count":2,"partition":[[["in",0]],[["out",0],["in",1]],[["out",1]]]}"#);
        let back = Digraph::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
        assert!(Digraph::from_json(r#"{"arcs": []}"#).is_err());
    }
}
