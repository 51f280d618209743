//! Bounded exploration of path crystals as colored graphs.
//!
//! Node ids are assigned after exploration by sorting the canonical paths,
//! so the final graph does not depend on discovery order or on how the
//! worker pool scheduled the expansion.
//!
//! Every graph carries its frontier: nodes with an `e_j` or `f_j` neighbor
//! (for an explored color) that is missing from the node set. Downstream
//! queries refuse to make claims that depend on frontier nodes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{OpLetter, OpWord, RootOperators};
use crate::path::{is_dominant_s, Path};
use crate::rational::Q;
use crate::weight::Weight;

pub const DEFAULT_NODE_CAP: usize = 100_000;
pub const DEFAULT_DEPTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreLimits {
    pub depth: usize,
    pub node_cap: usize,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        Self { depth: DEFAULT_DEPTH, node_cap: DEFAULT_NODE_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub color: usize,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct CrystalGraph {
    nodes: Vec<Path>,
    weights: Vec<Weight>,
    index: HashMap<Path, usize>,
    colors: Vec<usize>,
    /// `f_out[u][k]` is the `f_{colors[k]}`-target of `u` when known.
    f_out: Vec<Vec<Option<usize>>>,
    e_out: Vec<Vec<Option<usize>>>,
    edges: Vec<Edge>,
    root: usize,
    /// Radius around the root inside which every neighborhood is complete;
    /// `None` when the graph is closed.
    depth: Option<usize>,
    frontier: BTreeSet<usize>,
    dist: Vec<usize>,
    words: Vec<OpWord>,
}

/// Neighbors of one path under `e_j` and `f_j` for each color.
type Neighborhood = Vec<(Option<Path>, Option<Path>)>;

fn neighborhood(ops: &RootOperators<'_>, p: &Path, colors: &[usize]) -> Result<Neighborhood> {
    colors.iter().map(|&j| Ok((ops.e(p, j)?, ops.f(p, j)?))).collect()
}

/// All nodes reachable from `start` by at most `depth` applications of
/// `e_j`, `f_j` with `j ∈ colors`.
pub fn bfs(ops: &RootOperators<'_>, start: &Path, colors: &[usize], limits: ExploreLimits) -> Result<CrystalGraph> {
    explore(ops, start, colors, Some(limits.depth), limits.node_cap)
}

/// The full connected component of `start` under the given colors.
pub fn closure(ops: &RootOperators<'_>, start: &Path, colors: &[usize], node_cap: usize) -> Result<CrystalGraph> {
    explore(ops, start, colors, None, node_cap)
}

fn explore(
    ops: &RootOperators<'_>,
    start: &Path,
    colors: &[usize],
    depth: Option<usize>,
    node_cap: usize,
) -> Result<CrystalGraph> {
    let mut colors = colors.to_vec();
    colors.sort_unstable();
    colors.dedup();
    let mut known: HashMap<Path, Option<Neighborhood>> = HashMap::from([(start.clone(), None)]);
    let mut level = vec![start.clone()];
    let mut radius = 0usize;
    while !level.is_empty() {
        let hoods: Vec<Neighborhood> =
            level.par_iter().map(|p| neighborhood(ops, p, &colors)).collect::<Result<_>>()?;
        let expand = depth.is_none_or(|d| radius < d);
        let mut next = Vec::new();
        for (p, hood) in level.iter().zip(hoods) {
            if expand {
                for q in hood.iter().flat_map(|(e, f)| [e, f]).flatten() {
                    if !known.contains_key(q) {
                        known.insert(q.clone(), None);
                        next.push(q.clone());
                        if known.len() > node_cap {
                            return Err(Error::CapExceeded(node_cap));
                        }
                    }
                }
            }
            known.insert(p.clone(), Some(hood));
        }
        next.sort();
        level = next;
        radius += 1;
    }
    Ok(assemble(start, colors, known))
}

fn assemble(start: &Path, colors: Vec<usize>, known: HashMap<Path, Option<Neighborhood>>) -> CrystalGraph {
    let mut nodes: Vec<Path> = known.keys().cloned().collect();
    nodes.sort();
    let index: HashMap<Path, usize> = nodes.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    let n = nodes.len();
    let mut f_out = vec![vec![None; colors.len()]; n];
    let mut e_out = vec![vec![None; colors.len()]; n];
    let mut frontier = BTreeSet::new();
    for (u, p) in nodes.iter().enumerate() {
        let hood = known[p].as_ref().expect("every node is expanded once");
        for (k, (e, f)) in hood.iter().enumerate() {
            for (slot, target) in [(&mut e_out[u][k], e), (&mut f_out[u][k], f)] {
                if let Some(t) = target {
                    match index.get(t) {
                        Some(&v) => *slot = Some(v),
                        None => {
                            frontier.insert(u);
                        }
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for (k, &c) in colors.iter().enumerate() {
            if let Some(v) = f_out[u][k] {
                edges.push(Edge { source: u, color: c, target: v });
            }
        }
    }
    let weights = nodes.iter().map(Path::weight).collect();
    let mut g = CrystalGraph {
        nodes,
        weights,
        index,
        colors,
        f_out,
        e_out,
        edges,
        root: 0,
        depth: None,
        frontier,
        dist: Vec::new(),
        words: Vec::new(),
    };
    g.set_root(g.index[start]);
    g
}

impl CrystalGraph {
    /// Recomputes root distances, witness words and the complete radius.
    fn set_root(&mut self, root: usize) {
        let n = self.nodes.len();
        let mut dist = vec![usize::MAX; n];
        let mut words = vec![OpWord::default(); n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (k, &c) in self.colors.iter().enumerate() {
                for (target, letter) in [(self.f_out[u][k], OpLetter::f(c)), (self.e_out[u][k], OpLetter::e(c))] {
                    if let Some(v) = target {
                        if dist[v] == usize::MAX {
                            dist[v] = dist[u] + 1;
                            words[v] = words[u].then(letter);
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        self.root = root;
        self.depth = self.frontier.iter().map(|&u| dist[u]).min();
        self.dist = dist;
        self.words = words;
    }

    /// The same graph rooted at another node.
    pub fn with_root(&self, path: &Path) -> Option<CrystalGraph> {
        let r = *self.index.get(path)?;
        let mut g = self.clone();
        g.set_root(r);
        Some(g)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Path] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Path {
        &self.nodes[id]
    }

    pub fn weight(&self, id: usize) -> &Weight {
        &self.weights[id]
    }

    pub fn id(&self, path: &Path) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn contains(&self, path: &Path) -> bool {
        self.index.contains_key(path)
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_path(&self) -> &Path {
        &self.nodes[self.root]
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn is_closed(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn frontier(&self) -> &BTreeSet<usize> {
        &self.frontier
    }

    /// Graph distance from the root (`usize::MAX` if unreachable).
    pub fn distance(&self, id: usize) -> usize {
        self.dist[id]
    }

    /// A word `w` with `w(root) = node`, letters applied right to left.
    pub fn word_to(&self, id: usize) -> &OpWord {
        &self.words[id]
    }

    fn color_slot(&self, color: usize) -> Option<usize> {
        self.colors.iter().position(|&c| c == color)
    }

    /// `f_color(node)` within the graph. `None` means either null or (for a
    /// frontier node) outside the node set.
    pub fn f_target(&self, id: usize, color: usize) -> Option<usize> {
        self.color_slot(color).and_then(|k| self.f_out[id][k])
    }

    pub fn e_target(&self, id: usize, color: usize) -> Option<usize> {
        self.color_slot(color).and_then(|k| self.e_out[id][k])
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph crystal {\n");
        for (u, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "  n{u} [label=\"{w}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.source, e.target, e.color);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphDump {
        GraphDump {
            root: self.root,
            depth: self.depth,
            colors: self.colors.clone(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(u, p)| NodeDump {
                    id: u,
                    weight: self.weights[u].clone(),
                    path: p.clone(),
                    frontier: self.frontier.contains(&u),
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeDump {
    pub id: usize,
    pub weight: Weight,
    pub path: Path,
    pub frontier: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphDump {
    pub root: usize,
    pub depth: Option<usize>,
    pub colors: Vec<usize>,
    pub nodes: Vec<NodeDump>,
    pub edges: Vec<Edge>,
}

/// Splits the nodes of `graph` by `S`-colored connectivity and closes every
/// part under the `S`-operators. Components are returned sorted by their
/// smallest node, each rooted there.
pub fn s_components(ops: &RootOperators<'_>, graph: &CrystalGraph, s: &[usize], node_cap: usize) -> Result<Vec<CrystalGraph>> {
    let mut seen: BTreeSet<Path> = BTreeSet::new();
    let mut seeds = Vec::new();
    for p in graph.nodes() {
        if seen.contains(p) {
            continue;
        }
        let comp = closure(ops, p, s, node_cap)?;
        seen.extend(comp.nodes().iter().cloned());
        seeds.push(comp);
    }
    for c in seeds.iter_mut() {
        let smallest = c.nodes()[0].clone();
        *c = c.with_root(&smallest).expect("node of its own component");
    }
    seeds.sort_by(|a, b| a.nodes()[0].cmp(&b.nodes()[0]));
    Ok(seeds)
}

/// The unique node of a closed component killed by every `e_j`, `j ∈ S`,
/// and `g_S`-dominant.
pub fn find_dominant_extremal(ops: &RootOperators<'_>, component: &CrystalGraph, s: &[usize]) -> Result<Path> {
    if !component.is_closed() {
        return Err(Error::IncompleteWindow);
    }
    let mut found = Vec::new();
    for p in component.nodes() {
        if ops.is_highest(p, s)? && is_dominant_s(p, s) {
            found.push(p.clone());
        }
    }
    match found.len() {
        0 => Err(Error::NotFound),
        1 => Ok(found.pop().expect("one element")),
        n => Err(Error::NotUnique(n)),
    }
}

/// Where two rooted graphs first disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// Word from the roots to the pair of nodes being compared.
    pub word: OpWord,
    pub letter: OpLetter,
    pub reason: String,
}

/// Compares the colored graphs around the two roots out to `depth` by a
/// synchronized traversal. Edges are functional per color, so the only
/// candidate isomorphism is the one that follows equal letters; it must also
/// preserve weight offsets from the roots.
pub fn rooted_colored_isomorphic(g1: &CrystalGraph, g2: &CrystalGraph, depth: usize) -> Result<Option<Mismatch>> {
    for g in [g1, g2] {
        if let Some(have) = g.depth() {
            if have < depth {
                return Err(Error::DepthMismatch { have, need: depth });
            }
        }
    }
    let mismatch = |word: &OpWord, letter, reason: String| Ok(Some(Mismatch { word: word.clone(), letter, reason }));
    if g1.colors() != g2.colors() {
        return mismatch(&OpWord::default(), OpLetter::f(0), "different color sets".into());
    }
    let (r1, r2) = (g1.root(), g2.root());
    let mut map: HashMap<usize, usize> = HashMap::from([(r1, r2)]);
    let mut back: HashMap<usize, usize> = HashMap::from([(r2, r1)]);
    let mut queue = VecDeque::from([(r1, r2, 0usize, OpWord::default())]);
    while let Some((u, v, d, word)) = queue.pop_front() {
        if d >= depth {
            continue;
        }
        for &c in g1.colors() {
            for letter in [OpLetter::f(c), OpLetter::e(c)] {
                let step = |g: &CrystalGraph, x| match letter.kind {
                    crate::operators::OpKind::Lower => g.f_target(x, c),
                    crate::operators::OpKind::Raise => g.e_target(x, c),
                };
                match (step(g1, u), step(g2, v)) {
                    (None, None) => {}
                    (Some(_), None) | (None, Some(_)) => return mismatch(&word, letter, "operator defined on one side only".into()),
                    (Some(u2), Some(v2)) => {
                        let off1 = g1.weight(u2) - g1.weight(r1);
                        let off2 = g2.weight(v2) - g2.weight(r2);
                        if off1 != off2 {
                            return mismatch(&word, letter, format!("weight offsets {off1} and {off2} differ"));
                        }
                        match (map.get(&u2), back.get(&v2)) {
                            (None, None) => {
                                map.insert(u2, v2);
                                back.insert(v2, u2);
                                queue.push_back((u2, v2, d + 1, word.then(letter)));
                            }
                            (Some(&x), Some(&y)) if x == v2 && y == u2 => {}
                            _ => return mismatch(&word, letter, "traversal closes up differently".into()),
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Which weights a character records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightWindow {
    Empty,
    /// Weights with δ-coefficient in `[min, max]`.
    DeltaRange {
        #[serde(with = "crate::rational::serde_q")]
        min: Q,
        #[serde(with = "crate::rational::serde_q")]
        max: Q,
    },
    All,
}

impl WeightWindow {
    pub fn contains(&self, w: &Weight) -> bool {
        match self {
            WeightWindow::Empty => false,
            WeightWindow::DeltaRange { min, max } => *min <= w.delta && w.delta <= *max,
            WeightWindow::All => true,
        }
    }
}

/// Weight multiplicities inside a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Character {
    pub window: WeightWindow,
    #[serde(serialize_with = "counts_as_list")]
    pub counts: BTreeMap<Weight, u64>,
}

fn counts_as_list<S: serde::Serializer>(counts: &BTreeMap<Weight, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        weight: &'a Weight,
        count: u64,
    }
    s.collect_seq(counts.iter().map(|(weight, &count)| Entry { weight, count }))
}

impl Character {
    pub fn empty(window: WeightWindow) -> Self {
        Self { window, counts: BTreeMap::new() }
    }

    pub fn from_paths<'a>(window: WeightWindow, paths: impl IntoIterator<Item = &'a Path>) -> Self {
        let mut c = Self::empty(window);
        for p in paths {
            c.add(&p.weight(), 1);
        }
        c
    }

    pub fn add(&mut self, w: &Weight, n: u64) {
        if self.window.contains(w) {
            *self.counts.entry(w.clone()).or_insert(0) += n;
        }
    }

    pub fn merge(&mut self, other: &Character) {
        for (w, &n) in &other.counts {
            self.add(w, n);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Counts node weights inside `window`; fails if a frontier node lies inside
/// the window.
pub fn character_window(graph: &CrystalGraph, window: &WeightWindow) -> Result<Character> {
    if graph.frontier().iter().any(|&u| window.contains(graph.weight(u))) {
        return Err(Error::IncompleteWindow);
    }
    Ok(Character::from_paths(window.clone(), graph.nodes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::rootsys::fixtures::*;
    use crate::rootsys::AffineData;

    fn a1() -> AffineData {
        algebra(a1_affine())
    }

    fn limits(depth: usize) -> ExploreLimits {
        ExploreLimits { depth, node_cap: DEFAULT_NODE_CAP }
    }

    #[test]
    fn a1_depth_two_has_five_nodes() {
        let d = a1();
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let g = bfs(&ops, &Path::straight(v.clone()), &[0, 1], limits(2)).unwrap();
        let delta = d.delta();
        let expect: BTreeSet<Path> = [v.clone(), -&v, &(-&v) + delta, &v - delta, &v + delta]
            .into_iter()
            .map(Path::straight)
            .collect();
        assert_eq!(g.nodes().iter().cloned().collect::<BTreeSet<_>>(), expect);
        assert_eq!(g.depth(), Some(2));
        assert_eq!(g.frontier().len(), 2);
        assert_eq!(g.edges().len(), 4);
        let single = bfs(&ops, &Path::straight(v), &[0, 1], limits(0)).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn edges_subtract_simple_roots_and_words_replay() {
        let d = algebra(a_affine(2));
        let ops = RootOperators::new(&d);
        let start = Path::straight(d.fundamental_level_zero(1).unwrap());
        let g = bfs(&ops, &start, &[0, 1, 2], limits(5)).unwrap();
        for e in g.edges() {
            assert_eq!(g.weight(e.target), &(g.weight(e.source) - d.simple_root(e.color)));
            assert_eq!(g.e_target(e.target, e.color), Some(e.source));
        }
        for u in 0..g.len() {
            let replay = ops.apply_word(g.word_to(u), &start).unwrap().unwrap();
            assert_eq!(&replay, g.node(u));
        }
    }

    #[test]
    fn levi_components_of_a1() {
        let d = a1();
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let g = bfs(&ops, &Path::straight(v.clone()), &[0, 1], limits(4)).unwrap();
        let comps = s_components(&ops, &g, &[1], 100).unwrap();
        assert!(comps.iter().all(|c| c.len() == 2 && c.is_closed()));
        for c in &comps {
            let top = find_dominant_extremal(&ops, c, &[1]).unwrap();
            assert_eq!(top.weight().pairing(1), q(1));
        }
        let singles = s_components(&ops, &g, &[], 100).unwrap();
        assert_eq!(singles.len(), g.len());
    }

    #[test]
    fn isomorphism_checks() {
        let d = a1();
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let g = bfs(&ops, &Path::straight(v.clone()), &[0, 1], limits(4)).unwrap();
        assert_eq!(rooted_colored_isomorphic(&g, &g, 4).unwrap(), None);
        assert_eq!(
            rooted_colored_isomorphic(&g, &g, 5),
            Err(Error::DepthMismatch { have: 4, need: 5 })
        );
        let h = bfs(&ops, &Path::straight(-&v), &[0, 1], limits(4)).unwrap();
        assert!(rooted_colored_isomorphic(&g, &h, 1).unwrap().is_some());
    }

    #[test]
    fn characters_respect_the_frontier() {
        let d = a1();
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let g = bfs(&ops, &Path::straight(v), &[0, 1], limits(6)).unwrap();
        let w = WeightWindow::DeltaRange { min: q(-1), max: q(1) };
        let c = character_window(&g, &w).unwrap();
        assert_eq!(c.counts.len(), 6);
        assert!(c.counts.values().all(|&n| n == 1));
        assert!(character_window(&g, &WeightWindow::Empty).unwrap().counts.is_empty());
        assert_eq!(character_window(&g, &WeightWindow::All), Err(Error::IncompleteWindow));
    }

    #[test]
    fn dumps_are_deterministic() {
        let d = a1();
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let a = bfs(&ops, &Path::straight(v.clone()), &[0, 1], limits(3)).unwrap();
        let b = bfs(&ops, &Path::straight(v), &[0, 1], limits(3)).unwrap();
        assert_eq!(a.to_dot(), b.to_dot());
        assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
    }
}
