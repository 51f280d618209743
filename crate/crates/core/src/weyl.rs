//! Weyl group action on weights, windowed orbits, the cover order on an
//! orbit, and the a-chain search behind the LS chain condition.
//!
//! Edges of the order point downward in weight: `μ → r_β μ` for a positive
//! real root `β` with `μ(β^∨) > 0`. Every edge subtracts a positive multiple
//! of a positive root, so the height of the root-lattice part strictly drops
//! along edges and the graph is acyclic.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::{q, serde_q, Q};
use crate::rootsys::{AffineData, RealRoot, RootWindow};
use crate::weight::Weight;

/// A word in the simple reflections, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn apply(&self, data: &AffineData, w: &Weight) -> Weight {
        self.0.iter().rev().fold(w.clone(), |acc, &j| data.reflect(&acc, j))
    }
}

pub fn reflect(data: &AffineData, w: &Weight, j: usize) -> Weight {
    data.reflect(w, j)
}

/// Finite piece of an orbit `W_J λ`: everything reachable from the seed by
/// simple reflections in `J` without leaving the coordinate window.
#[derive(Debug, Clone)]
pub struct OrbitWindow {
    pub seed: Weight,
    pub indices: Vec<usize>,
    pub bound: i64,
    elements: Vec<Weight>,
    index: HashMap<Weight, usize>,
}

impl OrbitWindow {
    pub fn new(data: &AffineData, seed: &Weight, indices: &[usize], bound: i64) -> Self {
        let limit = q(bound);
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        if seed.max_abs() <= limit {
            seen.insert(seed.clone());
            queue.push_back(seed.clone());
        }
        while let Some(w) = queue.pop_front() {
            for &j in indices {
                let r = data.reflect(&w, j);
                if r.max_abs() <= limit && !seen.contains(&r) {
                    seen.insert(r.clone());
                    queue.push_back(r);
                }
            }
        }
        let mut elements: Vec<Weight> = seen.into_iter().collect();
        elements.sort();
        let index = elements.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        Self { seed: seed.clone(), indices: indices.to_vec(), bound, elements, index }
    }

    pub fn elements(&self) -> &[Weight] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.index.contains_key(w)
    }

    pub fn position(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Full affine orbit window `W ϖ`.
pub fn orbit_window(data: &AffineData, seed: &Weight, bound: i64) -> OrbitWindow {
    OrbitWindow::new(data, seed, &data.all_indices(), bound)
}

/// One step `source → target = r_β source` of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStep {
    pub source: Weight,
    pub target: Weight,
    pub root: Vec<i64>,
    /// `source(β^∨)`.
    #[serde(with = "serde_q")]
    pub pairing: Q,
}

/// Result of an a-chain search; `truncated` is set when the search touched
/// an element whose neighborhood leaves the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSearch {
    pub chain: Option<Vec<CoverStep>>,
    pub truncated: bool,
}

impl ChainSearch {
    pub fn found(&self) -> bool {
        self.chain.is_some()
    }
}

/// The order DAG on an orbit window with longest-path distances.
#[derive(Debug, Clone)]
pub struct CoverGraph {
    window: OrbitWindow,
    roots: Vec<RealRoot>,
    /// edges[u] = (target, root index), sorted.
    edges: Vec<Vec<(usize, usize)>>,
    /// dist[u][v] = longest directed path length, 0 when unreachable (u ≠ v).
    dist: Vec<Vec<u32>>,
    boundary: BTreeSet<usize>,
}

/// Builds the order DAG on `window` from the positive roots of `roots`.
pub fn covers(window: &OrbitWindow, roots: &RootWindow) -> CoverGraph {
    CoverGraph::new(window, roots)
}

impl CoverGraph {
    pub fn new(window: &OrbitWindow, roots: &RootWindow) -> Self {
        let positive: Vec<RealRoot> = roots.positive().cloned().collect();
        let n = window.len();
        let mut edges = vec![Vec::new(); n];
        let mut boundary = BTreeSet::new();
        for (u, mu) in window.elements().iter().enumerate() {
            for (k, beta) in positive.iter().enumerate() {
                let p = beta.pair(mu);
                if p.is_zero() {
                    continue;
                }
                let target = mu - &beta.weight.scaled(p);
                match window.position(&target) {
                    Some(v) if p.is_positive() => edges[u].push((v, k)),
                    Some(_) => {}
                    None => {
                        boundary.insert(u);
                    }
                }
            }
            edges[u].sort();
        }
        let dist = longest_paths(&edges);
        Self { window: window.clone(), roots: positive, edges, dist, boundary }
    }

    pub fn window(&self) -> &OrbitWindow {
        &self.window
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Elements with an order relation that crosses the window boundary.
    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.boundary
    }

    pub fn is_truncated(&self) -> bool {
        !self.boundary.is_empty()
    }

    /// Longest directed path from `a` down to `b`; `None` if `b` is not below `a`.
    pub fn dist(&self, a: &Weight, b: &Weight) -> Option<u32> {
        let (u, v) = (self.window.position(a)?, self.window.position(b)?);
        self.dist_idx(u, v)
    }

    fn dist_idx(&self, u: usize, v: usize) -> Option<u32> {
        if u == v {
            return Some(0);
        }
        match self.dist[u][v] {
            0 => None,
            d => Some(d),
        }
    }

    /// `a ≥ b` in the order (a directed path from `a` to `b`).
    pub fn is_above(&self, a: &Weight, b: &Weight) -> bool {
        self.dist(a, b).is_some()
    }

    /// Cover edges out of `u`: `(target, root index)` with distance one.
    fn cover_edges(&self, u: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges[u].iter().copied().filter(move |&(v, _)| self.dist[u][v] == 1)
    }

    pub fn covers_of(&self, w: &Weight) -> Vec<(Weight, RealRoot)> {
        let Some(u) = self.window.position(w) else { return Vec::new() };
        self.cover_edges(u)
            .map(|(v, k)| (self.window.elements()[v].clone(), self.roots[k].clone()))
            .collect()
    }

    /// Is there an `a`-chain `ν = μ_0 ⋗ μ_1 ⋗ … ⋗ μ_p = μ` of covers with
    /// `a · μ_{k−1}(β_k^∨) ∈ ℤ` at every step?
    pub fn has_a_chain(&self, nu: &Weight, mu: &Weight, a: Q) -> ChainSearch {
        let (Some(start), Some(goal)) = (self.window.position(nu), self.window.position(mu)) else {
            return ChainSearch { chain: None, truncated: true };
        };
        let mut truncated = false;
        let mut dead: HashSet<usize> = HashSet::new();
        let mut path = Vec::new();
        let found = self.chain_dfs(start, goal, a, &mut dead, &mut path, &mut truncated);
        let chain = found.then(|| {
            path.iter()
                .map(|&(u, v, k)| {
                    let beta: &RealRoot = &self.roots[k];
                    CoverStep {
                        source: self.window.elements()[u].clone(),
                        target: self.window.elements()[v].clone(),
                        root: beta.coords.clone(),
                        pairing: beta.pair(&self.window.elements()[u]),
                    }
                })
                .collect()
        });
        ChainSearch { chain, truncated }
    }

    fn chain_dfs(
        &self,
        u: usize,
        goal: usize,
        a: Q,
        dead: &mut HashSet<usize>,
        path: &mut Vec<(usize, usize, usize)>,
        truncated: &mut bool,
    ) -> bool {
        if self.boundary.contains(&u) {
            *truncated = true;
        }
        if u == goal {
            return true;
        }
        if dead.contains(&u) || self.dist_idx(u, goal).is_none() {
            return false;
        }
        let mu = &self.window.elements()[u];
        for (v, k) in self.cover_edges(u) {
            if self.dist_idx(v, goal).is_none() {
                continue;
            }
            if !(a * self.roots[k].pair(mu)).is_integer() {
                continue;
            }
            path.push((u, v, k));
            if self.chain_dfs(v, goal, a, dead, path, truncated) {
                return true;
            }
            path.pop();
        }
        dead.insert(u);
        false
    }

    /// DOT rendering of the cover relation.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph covers {\n");
        for (u, w) in self.window.elements().iter().enumerate() {
            let _ = writeln!(out, "  n{u} [label=\"{w}\"];");
        }
        for u in 0..self.window.len() {
            for (v, k) in self.cover_edges(u) {
                let _ = writeln!(out, "  n{u} -> n{v} [label=\"{:?}\"];", self.roots[k].coords);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Longest-path lengths in a DAG given by adjacency lists.
fn longest_paths(edges: &[Vec<(usize, usize)>]) -> Vec<Vec<u32>> {
    let n = edges.len();
    let order = topological_order(edges);
    let mut dist = vec![vec![0u32; n]; n];
    // Process sinks first so every successor row is final.
    for &u in order.iter().rev() {
        let mut row = vec![0u32; n];
        for &(v, _) in &edges[u] {
            row[v] = row[v].max(1);
            for w in 0..n {
                if dist[v][w] > 0 {
                    row[w] = row[w].max(dist[v][w] + 1);
                }
            }
        }
        dist[u] = row;
    }
    dist
}

fn topological_order(edges: &[Vec<(usize, usize)>]) -> Vec<usize> {
    let n = edges.len();
    let mut indeg = vec![0usize; n];
    for es in edges {
        for &(v, _) in es {
            indeg[v] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(v, _) in &edges[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    assert_eq!(order.len(), n, "order graph on an orbit window must be acyclic");
    order
}

/// Convenience: orbit window of `seed` under `indices` and its cover graph,
/// with a root window wide enough to connect any two window elements.
pub fn orbit_order(data: &AffineData, seed: &Weight, indices: &[usize], bound: i64) -> Result<CoverGraph> {
    let window = OrbitWindow::new(data, seed, indices, bound);
    let root_bound = root_bound_for(data, bound);
    let roots = data.real_roots(indices, root_bound);
    Ok(CoverGraph::new(&window, &roots))
}

/// Root window size that covers every difference of two elements of a
/// weight window of the given bound.
pub fn root_bound_for(data: &AffineData, bound: i64) -> i64 {
    let entry = data.cartan().rows().iter().flatten().map(|x| x.abs()).max().unwrap_or(2);
    2 * bound * entry.max(2) + 2
}
