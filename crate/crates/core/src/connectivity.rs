//! Dipaths, semipaths, diloops and the connectedness grades of standard
//! digraphs.
//!
//! Every path returned is a shortest one, with ties broken toward the
//! lexicographically smallest vertex sequence and then the smallest arc ids.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Alternating vertex/arc sequence `v_0, a_0, v_1, …, a_{k-1}, v_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub arcs: Vec<usize>,
}

impl Path {
    pub fn length(&self) -> usize {
        self.arcs.len()
    }
}

/// Direction-respecting path (all arcs and vertices distinct).
pub type Dipath = Path;
/// Direction-ignoring path.
pub type Semipath = Path;
/// Closed dipath with `v_k = v_0`.
pub type Diloop = Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairGrade {
    Strong,
    Unilateral,
    Weak,
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Strong,
    StrictlyUnilateral,
    StrictlyWeak,
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Strong,
    Unilateral,
    Weak,
}

impl ComponentKind {
    pub fn parse(s: &str) -> Option<ComponentKind> {
        match s {
            "strong" => Some(ComponentKind::Strong),
            "unilateral" => Some(ComponentKind::Unilateral),
            "weak" => Some(ComponentKind::Weak),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
    Either,
}

/// Adjacency lists sorted by `(neighbour, arc)`.
struct Neighbours {
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
    both: Vec<Vec<(usize, usize)>>,
}

impl Neighbours {
    fn new(d: &Digraph) -> Neighbours {
        let n = d.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut both = vec![Vec::new(); n];
        for (a, (t, h)) in d.endpoints().enumerate() {
            out[t].push((h, a));
            inc[h].push((t, a));
            both[t].push((h, a));
            if t != h {
                both[h].push((t, a));
            }
        }
        for list in out.iter_mut().chain(inc.iter_mut()).chain(both.iter_mut()) {
            list.sort_unstable();
        }
        Neighbours { out, inc, both }
    }

    fn of(&self, dir: Direction) -> &[Vec<(usize, usize)>] {
        match dir {
            Direction::Forward => &self.out,
            Direction::Backward => &self.inc,
            Direction::Either => &self.both,
        }
    }

    /// Breadth-first distances from `source`, skipping one arc if asked.
    fn bfs(&self, source: usize, dir: Direction, skip_arc: Option<usize>) -> Vec<Option<usize>> {
        let adj = self.of(dir);
        let mut dist = vec![None; adj.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &(y, a) in &adj[x] {
                if Some(a) != skip_arc && dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest shortest path `u → v` (`u ≠ v`).
    fn shortest(&self, u: usize, v: usize, dir: Direction, skip_arc: Option<usize>) -> Option<Path> {
        let reverse = match dir {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
            Direction::Either => Direction::Either,
        };
        let to_target = self.bfs(v, reverse, skip_arc);
        let mut remaining = to_target[u]?;
        let mut path = Path { vertices: vec![u], arcs: Vec::new() };
        let mut cur = u;
        while remaining > 0 {
            let &(next, arc) = self.of(dir)[cur]
                .iter()
                .find(|&&(y, a)| Some(a) != skip_arc && to_target[y] == Some(remaining - 1))
                .expect("breadth-first layers are consistent");
            path.vertices.push(next);
            path.arcs.push(arc);
            cur = next;
            remaining -= 1;
        }
        Some(path)
    }
}

fn distinct(d: &Digraph, u: usize, v: usize) -> Result<()> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    if u == v {
        Err(Error::SameVertex)
    } else {
        Ok(())
    }
}

pub fn find_dipath(d: &Digraph, u: usize, v: usize) -> Result<Option<Dipath>> {
    distinct(d, u, v)?;
    Ok(Neighbours::new(d).shortest(u, v, Direction::Forward, None))
}

pub fn find_semipath(d: &Digraph, u: usize, v: usize) -> Result<Option<Semipath>> {
    distinct(d, u, v)?;
    Ok(Neighbours::new(d).shortest(u, v, Direction::Either, None))
}

/// Shortest closed path through `v`: a self-loop if one exists, otherwise an
/// arc `v → w` followed by a shortest path back to `v` not reusing that arc.
fn closed(d: &Digraph, v: usize, dir: Direction) -> Result<Option<Path>> {
    d.check_vertex(v)?;
    let nb = Neighbours::new(d);
    let mut best: Option<Path> = None;
    for &(w, a) in &nb.of(dir)[v] {
        let candidate = if w == v {
            Path { vertices: vec![v, v], arcs: vec![a] }
        } else {
            let Some(back) = nb.shortest(w, v, dir, Some(a)) else { continue };
            let mut vertices = vec![v];
            vertices.extend(back.vertices);
            let mut arcs = vec![a];
            arcs.extend(back.arcs);
            Path { vertices, arcs }
        };
        let better = match &best {
            None => true,
            Some(b) => (candidate.length(), &candidate.vertices, &candidate.arcs) < (b.length(), &b.vertices, &b.arcs),
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best)
}

pub fn find_diloop(d: &Digraph, v: usize) -> Result<Option<Diloop>> {
    closed(d, v, Direction::Forward)
}

/// Closed semipath through `v`: distinct arcs, directions ignored.
pub fn find_semiloop(d: &Digraph, v: usize) -> Result<Option<Semipath>> {
    closed(d, v, Direction::Either)
}

/// Semipath distance, `None` when no semipath joins the vertices.
pub fn standard_distance(d: &Digraph, u: usize, v: usize) -> Result<Option<usize>> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    Ok(Neighbours::new(d).bfs(u, Direction::Either, None)[v])
}

/// Length of a shortest dipath, `Some(0)` for `u = v`.
pub fn directed_distance(d: &Digraph, u: usize, v: usize) -> Result<Option<usize>> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    Ok(Neighbours::new(d).bfs(u, Direction::Forward, None)[v])
}

/// All-pairs semipath distances.
pub fn distance_matrix(d: &Digraph) -> Vec<Vec<Option<usize>>> {
    let nb = Neighbours::new(d);
    (0..d.vertex_count()).map(|u| nb.bfs(u, Direction::Either, None)).collect()
}

/// `reach[u][v]`: a dipath runs from `u` to `v` (reflexive).
pub fn reachability(d: &Digraph) -> Vec<Vec<bool>> {
    let nb = Neighbours::new(d);
    (0..d.vertex_count())
        .map(|u| nb.bfs(u, Direction::Forward, None).iter().map(Option::is_some).collect())
        .collect()
}

pub fn pair_connectedness(d: &Digraph, u: usize, v: usize) -> Result<PairGrade> {
    distinct(d, u, v)?;
    let nb = Neighbours::new(d);
    let forward = nb.bfs(u, Direction::Forward, None)[v].is_some();
    let backward = nb.bfs(v, Direction::Forward, None)[u].is_some();
    Ok(if forward && backward {
        PairGrade::Strong
    } else if forward || backward {
        PairGrade::Unilateral
    } else if nb.bfs(u, Direction::Either, None)[v].is_some() {
        PairGrade::Weak
    } else {
        PairGrade::Disconnected
    })
}

/// Strongly connected components in topological order of the condensation
/// (sources first), plus the component index of every vertex.
fn condensation(d: &Digraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let nb = Neighbours::new(d);
    let n = d.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut sccs: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (x, ref mut next)) = frames.last_mut() {
            if let Some(&(y, _)) = nb.out[x].get(*next) {
                *next += 1;
                if index[y] == usize::MAX {
                    index[y] = counter;
                    low[y] = counter;
                    counter += 1;
                    stack.push(y);
                    on_stack[y] = true;
                    frames.push((y, 0));
                } else if on_stack[y] {
                    low[x] = low[x].min(index[y]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[x]);
            }
            if low[x] == index[x] {
                let mut scc = Vec::new();
                loop {
                    let y = stack.pop().unwrap();
                    on_stack[y] = false;
                    scc.push(y);
                    if y == x {
                        break;
                    }
                }
                scc.sort_unstable();
                sccs.push(scc);
            }
        }
    }
    // Tarjan emits sinks first.
    sccs.reverse();
    let mut comp = vec![0; n];
    for (c, scc) in sccs.iter().enumerate() {
        for &v in scc {
            comp[v] = c;
        }
    }
    (sccs, comp)
}

pub fn strong_components(d: &Digraph) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = condensation(d).0.into_iter().map(|c| c.into_iter().collect()).collect();
    out.sort();
    out
}

pub fn weak_components(d: &Digraph) -> Vec<BTreeSet<usize>> {
    let n = d.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (t, h) in d.endpoints() {
        let (a, b) = (find(&mut parent, t), find(&mut parent, h));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: Vec<BTreeSet<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(BTreeSet::new());
        }
        groups[slot[r]].insert(v);
    }
    groups
}

/// All maximal sets of pairwise unilaterally connected vertices.
///
/// A vertex set is pairwise unilateral exactly when its strong components
/// form a chain under reachability, so the maximal sets are the unions along
/// maximal chains, i.e. source-to-sink paths in the Hasse diagram of the
/// condensation.
pub fn unilateral_components(d: &Digraph) -> Vec<BTreeSet<usize>> {
    let (sccs, _) = condensation(d);
    let k = sccs.len();
    let reach = reachability(d);
    let creach: Vec<Vec<bool>> = (0..k).map(|c| (0..k).map(|e| reach[sccs[c][0]][sccs[e][0]]).collect()).collect();
    let hasse: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            (0..k)
                .filter(|&e| e != c && creach[c][e] && !(0..k).any(|m| m != c && m != e && creach[c][m] && creach[m][e]))
                .collect()
        })
        .collect();
    let has_pred: Vec<bool> = (0..k).map(|e| (0..k).any(|c| hasse[c].contains(&e))).collect();
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut chain = Vec::new();
    fn walk(c: usize, hasse: &[Vec<usize>], sccs: &[Vec<usize>], chain: &mut Vec<usize>, found: &mut BTreeSet<BTreeSet<usize>>) {
        chain.push(c);
        if hasse[c].is_empty() {
            found.insert(chain.iter().flat_map(|&x| sccs[x].iter().copied()).collect());
        }
        for &e in &hasse[c] {
            walk(e, hasse, sccs, chain, found);
        }
        chain.pop();
    }
    for c in (0..k).filter(|&c| !has_pred[c]) {
        walk(c, &hasse, &sccs, &mut chain, &mut found);
    }
    found.into_iter().collect()
}

pub fn components(d: &Digraph, kind: ComponentKind) -> Vec<BTreeSet<usize>> {
    match kind {
        ComponentKind::Strong => strong_components(d),
        ComponentKind::Unilateral => unilateral_components(d),
        ComponentKind::Weak => weak_components(d),
    }
}

pub fn classify_digraph(d: &Digraph) -> Classification {
    let (sccs, comp) = condensation(d);
    if sccs.len() == 1 {
        return Classification::Strong;
    }
    if weak_components(d).len() > 1 {
        return Classification::Disconnected;
    }
    // Unilateral iff the topological order of the condensation is a path.
    let mut linked = vec![false; sccs.len()];
    for (t, h) in d.endpoints() {
        if comp[h] == comp[t] + 1 {
            linked[comp[t]] = true;
        }
    }
    if linked[..sccs.len() - 1].iter().all(|&l| l) {
        Classification::StrictlyUnilateral
    } else {
        Classification::StrictlyWeak
    }
}

/// Every two vertices of the subdigraph induced by `arcs` lie within
/// distance `k` of each other in `d`.
pub fn is_finitely_dispersed(d: &Digraph, arcs: &[usize], k: usize) -> Result<bool> {
    let sub = d.induced_subdigraph(arcs)?;
    let nb = Neighbours::new(d);
    Ok(sub.vertices.iter().all(|&u| {
        let dist = nb.bfs(u, Direction::Either, None);
        sub.vertices.iter().all(|&v| dist[v].is_some_and(|x| x <= k))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(arcs: &[(i64, i64)]) -> Digraph {
        Digraph::from_arc_list(arcs).unwrap()
    }

    fn cycle(n: i64) -> Digraph {
        g(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn sets(groups: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        groups.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn dipaths() {
        let p = g(&[(0, 1), (1, 2)]);
        assert_eq!(find_dipath(&p, 0, 2).unwrap().unwrap().length(), 2);
        assert_eq!(find_dipath(&p, 2, 0).unwrap(), None);
        let c3 = cycle(3);
        let path = find_dipath(&c3, 2, 1).unwrap().unwrap();
        assert_eq!(path.vertices, vec![2, 0, 1]);
        assert_eq!(path.arcs, vec![2, 0]);
        assert_eq!(find_dipath(&c3, 1, 1), Err(Error::SameVertex));
    }

    #[test]
    fn semipaths() {
        assert_eq!(find_semipath(&g(&[(0, 1), (2, 1)]), 0, 2).unwrap().unwrap().length(), 2);
        assert_eq!(find_semipath(&g(&[(0, 1), (2, 3)]), 0, 3).unwrap(), None);
        let path = find_semipath(&cycle(4), 0, 3).unwrap().unwrap();
        assert_eq!((path.length(), path.arcs[0]), (1, 3));
    }

    #[test]
    fn loops() {
        assert_eq!(find_diloop(&g(&[(0, 0)]), 0).unwrap().unwrap().length(), 1);
        assert_eq!(find_diloop(&g(&[(0, 1)]), 0).unwrap(), None);
        let l = find_diloop(&cycle(3), 1).unwrap().unwrap();
        assert_eq!(l.vertices, vec![1, 2, 0, 1]);
        let anti = g(&[(0, 1), (0, 1)]);
        assert_eq!(find_diloop(&anti, 0).unwrap(), None);
        assert_eq!(find_semiloop(&anti, 0).unwrap().unwrap().arcs, vec![0, 1]);
        assert_eq!(find_semiloop(&g(&[(0, 1), (1, 2)]), 1).unwrap(), None);
    }

    #[test]
    fn distances() {
        let p = g(&[(0, 1), (1, 2)]);
        assert_eq!(standard_distance(&p, 1, 1).unwrap(), Some(0));
        assert_eq!(standard_distance(&p, 0, 2).unwrap(), Some(2));
        assert_eq!(standard_distance(&cycle(5), 0, 3).unwrap(), Some(2));
        assert_eq!(standard_distance(&g(&[(0, 1), (2, 3)]), 0, 2).unwrap(), None);
        assert_eq!(directed_distance(&cycle(5), 0, 3).unwrap(), Some(3));
    }

    #[test]
    fn pair_grades() {
        assert_eq!(pair_connectedness(&cycle(3), 0, 2).unwrap(), PairGrade::Strong);
        assert_eq!(pair_connectedness(&g(&[(0, 1), (1, 2)]), 0, 2).unwrap(), PairGrade::Unilateral);
        assert_eq!(pair_connectedness(&g(&[(0, 1), (2, 1)]), 0, 2).unwrap(), PairGrade::Weak);
        assert_eq!(pair_connectedness(&g(&[(0, 1), (2, 3)]), 0, 2).unwrap(), PairGrade::Disconnected);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_digraph(&cycle(3)), Classification::Strong);
        assert_eq!(classify_digraph(&g(&[(0, 1), (1, 2)])), Classification::StrictlyUnilateral);
        assert_eq!(classify_digraph(&g(&[(0, 1), (2, 1)])), Classification::StrictlyWeak);
        assert_eq!(classify_digraph(&g(&[(0, 1), (2, 3)])), Classification::Disconnected);
        assert_eq!(classify_digraph(&g(&[(0, 0)])), Classification::Strong);
    }

    #[test]
    fn component_lists() {
        assert_eq!(components(&cycle(3), ComponentKind::Strong), sets(&[&[0, 1, 2]]));
        assert_eq!(components(&g(&[(0, 1), (2, 1)]), ComponentKind::Unilateral), sets(&[&[0, 1], &[1, 2]]));
        assert_eq!(components(&g(&[(0, 1), (2, 3)]), ComponentKind::Weak), sets(&[&[0, 1], &[2, 3]]));
        // 0 → 1 → 2 plus shortcut 0 → 2: a single chain
        assert_eq!(components(&g(&[(0, 1), (1, 2), (0, 2)]), ComponentKind::Unilateral), sets(&[&[0, 1, 2]]));
    }

    #[test]
    fn dispersion() {
        let p5 = g(&(0..5).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert!(is_finitely_dispersed(&p5, &[2], 1).unwrap());
        assert!(!is_finitely_dispersed(&p5, &[0, 4], 1).unwrap());
        assert!(is_finitely_dispersed(&p5, &[0, 4], 5).unwrap());
        assert_eq!(is_finitely_dispersed(&p5, &[], 5), Err(Error::EmptySelection));
    }
}
