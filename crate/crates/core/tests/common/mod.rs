//! Brute-force oracles and samplers shared by the integration tests. Nothing
//! here calls into the library's algorithms; digraphs are read only through
//! their arc endpoints.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use nsd_core::connectivity::Classification;
use nsd_core::digraph::Digraph;
use nsd_core::IndexSet;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

/// Deterministic draws from proptest strategies.
pub struct Sampler(TestRunner);

impl Sampler {
    pub fn new() -> Sampler {
        Sampler(TestRunner::deterministic())
    }

    pub fn draw<S: Strategy>(&mut self, s: S) -> S::Value {
        s.new_tree(&mut self.0).expect("strategy yields a value").current()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.draw(0..n)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// An index set as raw data: explicit prefix, then `n mod period` pattern.
#[derive(Debug, Clone)]
pub struct RawSet {
    pub prefix: Vec<bool>,
    pub pattern: Vec<bool>,
}

impl RawSet {
    pub fn member(&self, n: u64) -> bool {
        match self.prefix.get(n as usize) {
            Some(&b) => b,
            None => self.pattern[(n % self.pattern.len() as u64) as usize],
        }
    }

    pub fn build(&self) -> IndexSet {
        let residues: Vec<usize> = (0..self.pattern.len()).filter(|&r| self.pattern[r]).collect();
        IndexSet::new(self.prefix.clone(), self.pattern.len(), &residues).unwrap()
    }
}

pub fn raw_set(max_threshold: usize, max_period: usize) -> impl Strategy<Value = RawSet> {
    (0..=max_threshold, 1..=max_period)
        .prop_flat_map(|(t, p)| (prop::collection::vec(any::<bool>(), t), prop::collection::vec(any::<bool>(), p)))
        .prop_map(|(prefix, pattern)| RawSet { prefix, pattern })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn arcs_of(d: &Digraph) -> Vec<(usize, usize)> {
    d.endpoints().collect()
}

/// Reflexive-transitive closure by Warshall's algorithm.
pub fn closure(vertices: usize, arcs: &[(usize, usize)], symmetric: bool) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; vertices]; vertices];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(t, h) in arcs {
        r[t][h] = true;
        if symmetric {
            r[h][t] = true;
        }
    }
    for k in 0..vertices {
        for i in 0..vertices {
            if r[i][k] {
                for j in 0..vertices {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Shortest path length by breadth-first search over arc endpoints.
pub fn bfs(vertices: usize, arcs: &[(usize, usize)], directed: bool, s: usize, t: usize) -> Option<usize> {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in arcs {
        adj[a].push(b);
        if !directed {
            adj[b].push(a);
        }
    }
    let mut dist = vec![usize::MAX; vertices];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    (dist[t] != usize::MAX).then_some(dist[t])
}

pub fn brute_classify(vertices: usize, arcs: &[(usize, usize)]) -> Classification {
    let r = closure(vertices, arcs, false);
    let w = closure(vertices, arcs, true);
    let all = |f: &dyn Fn(usize, usize) -> bool| (0..vertices).all(|i| (0..vertices).all(|j| f(i, j)));
    if all(&|i, j| r[i][j] && r[j][i]) {
        Classification::Strong
    } else if all(&|i, j| r[i][j] || r[j][i]) {
        Classification::StrictlyUnilateral
    } else if all(&|i, j| w[i][j]) {
        Classification::StrictlyWeak
    } else {
        Classification::Disconnected
    }
}

/// Maximal vertex subsets whose induced subdigraph is unilaterally
/// connected, by enumerating every subset.
pub fn brute_unilateral_components(vertices: usize, arcs: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut good: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << vertices) {
        let members: Vec<usize> = (0..vertices).filter(|&v| mask & (1 << v) != 0).collect();
        let index = |v: usize| members.iter().position(|&m| m == v);
        let inner: Vec<(usize, usize)> = arcs
            .iter()
            .filter_map(|&(t, h)| Some((index(t)?, index(h)?)))
            .collect();
        let r = closure(members.len(), &inner, false);
        if (0..members.len()).all(|i| (0..members.len()).all(|j| r[i][j] || r[j][i])) {
            good.push(mask);
        }
    }
    let maximal = good.iter().filter(|&&m| !good.iter().any(|&o| o != m && o & m == m));
    let mut out: Vec<BTreeSet<usize>> = maximal.map(|&m| (0..vertices).filter(|&v| m & (1 << v) != 0).collect()).collect();
    out.sort();
    out
}

/// Equivalence classes of a relation given as a closure matrix.
pub fn classes(vertices: usize, same: impl Fn(usize, usize) -> bool) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for v in 0..vertices {
        if !out.iter().any(|c| c.contains(&v)) {
            out.push((0..vertices).filter(|&u| same(u, v)).collect());
        }
    }
    out.sort();
    out
}

/// The finite builtin families, written out from their definitions:
/// vertex count and arcs, arc `k` listed `k`-th.
pub fn builtin_arcs(name: &str, n: u64) -> (usize, Vec<(usize, usize)>) {
    let n = n as usize;
    match name {
        "dipath" => {
            let m = n.max(1);
            (m + 1, (0..m).map(|i| (i, i + 1)).collect())
        }
        "dicycle" => {
            let l = n.max(2);
            (l, (0..l).map(|i| (i, (i + 1) % l)).collect())
        }
        "complete_symmetric" => {
            let p = n.max(2);
            let mut arcs = Vec::new();
            for i in 0..p {
                for j in 0..p {
                    if i != j {
                        arcs.push((i, j));
                    }
                }
            }
            (p, arcs)
        }
        "in_star" => {
            let k = n.max(2);
            (k + 1, (1..=k).map(|i| (i, 0)).collect())
        }
        "disconnected_dicycles" => {
            let l = n.max(2);
            let mut arcs: Vec<(usize, usize)> = (0..l).map(|i| (i, (i + 1) % l)).collect();
            arcs.extend((0..l).map(|i| (l + i, l + (i + 1) % l)));
            (2 * l, arcs)
        }
        other => panic!("no finite builtin `{other}`"),
    }
}

pub const FINITE_BUILTINS: [&str; 5] = ["dipath", "dicycle", "complete_symmetric", "in_star", "disconnected_dicycles"];

/// Vertex label -> position in a window `lo..=hi` of the dipath on ℤ (or ℕ).
pub fn window_dipath(lo: i128, hi: i128) -> (usize, Vec<(usize, usize)>) {
    let len = (hi - lo + 1) as usize;
    (len, (0..len - 1).map(|i| (i, i + 1)).collect())
}
