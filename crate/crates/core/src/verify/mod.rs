//! Windowed verification of the structural claims about level-zero path
//! crystals. Every check explores a bounded region, records what it saw in a
//! [`Report`], and never claims more than the region supports: contact with
//! an exploration cap downgrades the verdict to inconclusive.
//!
//! Counterexample certificates carry a start path and an operator word, so a
//! failure can be replayed with [`RootOperators::apply_word`] alone.

pub mod campaign;

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::{
    bfs, character_window, closure, find_dominant_extremal, rooted_colored_isomorphic, Character, CrystalGraph,
    ExploreLimits, WeightWindow,
};
use crate::ls::{enumerate_ls, generate_bs, validate_ls, LsPath};
use crate::operators::{OpLetter, OpWord, RootOperators};
use crate::path::Path;
use crate::rational::{format_q, q, Q};
use crate::rootsys::AffineData;
use crate::weight::Weight;
use crate::weyl::{orbit_order, CoverGraph, OrbitWindow};

/// At most this many failure certificates are stored per report; the total
/// count is always recorded.
const MAX_FAILURES: usize = 16;

/// Steps allowed for a raising walk before it is treated as runaway.
const RAISING_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedOnWindow,
    InconclusiveTruncation,
    Counterexample,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::VerifiedOnWindow => 0,
            Verdict::Counterexample => 2,
            Verdict::InconclusiveTruncation => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    /// Object with sorted keys: the algebra, the fault hook if any, and the
    /// check's own parameters.
    pub parameters: Value,
    pub verdict: Verdict,
    pub certificates: Vec<Value>,
    /// Wall time in milliseconds; kept out of the payload so reports compare
    /// byte for byte.
    #[serde(skip)]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(claim: &str, ops: &RootOperators<'_>, params: Value) -> Self {
        let mut parameters = json!({ "algebra": ops.data().spec() });
        if let Some(f) = ops.fault() {
            parameters["fault"] = json!(f);
        }
        if let Value::Object(extra) = params {
            for (k, v) in extra {
                parameters[k] = v;
            }
        }
        Self { claim: claim.into(), parameters, verdict: Verdict::VerifiedOnWindow, certificates: Vec::new(), timing_ms: None }
    }

    pub fn certify(&mut self, cert: Value) {
        self.certificates.push(cert);
    }

    pub fn counterexample(&mut self, cert: Value) {
        self.verdict = Verdict::Counterexample;
        let failures = self.certificates.iter().filter(|c| c.get("failure").is_some()).count();
        if failures < MAX_FAILURES {
            self.certificates.push(json!({ "failure": cert }));
        }
    }

    pub fn inconclusive(&mut self, cert: Value) {
        if self.verdict == Verdict::VerifiedOnWindow {
            self.verdict = Verdict::InconclusiveTruncation;
        }
        self.certificates.push(json!({ "truncation": cert }));
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::VerifiedOnWindow
    }

    /// Canonical payload text (timings excluded).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

fn is_truncation(e: &Error) -> bool {
    matches!(e, Error::CapExceeded(_) | Error::IncompleteWindow | Error::DepthMismatch { .. })
}

/// Runs `body`; exploration caps and incomplete windows become an
/// inconclusive verdict, other errors propagate.
fn guarded(mut report: Report, body: impl FnOnce(&mut Report) -> Result<()>) -> Result<Report> {
    match body(&mut report) {
        Ok(()) => Ok(report),
        Err(e) if is_truncation(&e) => {
            report.inconclusive(json!({ "error": e.to_string() }));
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

fn qs(x: Q) -> Value {
    Value::String(format_q(&x))
}

/// Highest weight of a path crystal given in a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shape {
    /// `multiple · ϖ_i` (level zero).
    Fundamental {
        fundamental: usize,
        #[serde(default = "one")]
        multiple: i64,
    },
    /// `Σ_j m_j Λ_j`.
    Pairings { pairings: Vec<i64> },
}

fn one() -> i64 {
    1
}

impl Shape {
    pub fn weight(&self, data: &AffineData) -> Result<Weight> {
        match self {
            Shape::Fundamental { fundamental, multiple } => {
                Ok(data.fundamental_level_zero(*fundamental)?.scaled(q(*multiple)))
            }
            Shape::Pairings { pairings } => {
                if pairings.len() != data.rank() {
                    return Err(Error::Dimension { expected: data.rank(), got: pairings.len() });
                }
                Ok(Weight::from_ints(pairings, 0))
            }
        }
    }
}

fn all_colors(data: &AffineData) -> Vec<usize> {
    data.all_indices()
}

fn sample_ids(g: &CrystalGraph, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..g.len())).collect()
}

/// Every node of a bounded crystal satisfies
/// `(cl wt π, cl wt π) ≤ (cl ϖ_i, cl ϖ_i)`.
pub fn check_norm_bound(ops: &RootOperators<'_>, i: usize, limits: ExploreLimits) -> Result<Report> {
    let data = ops.data();
    let report = Report::new("norm-bound", ops, json!({ "i": i, "depth": limits.depth, "node_cap": limits.node_cap }));
    let top = data.fundamental_level_zero(i)?;
    let bound = data.cl_norm(&top)?;
    guarded(report, |r| {
        let start = Path::straight(top.clone());
        let g = bfs(ops, &start, &all_colors(data), limits)?;
        let mut max = Q::zero();
        let mut attained = 0usize;
        let mut violations = 0usize;
        for u in 0..g.len() {
            let n = data.cl_norm(g.weight(u))?;
            max = max.max(n);
            if n == bound {
                attained += 1;
            }
            if n > bound {
                violations += 1;
                r.counterexample(json!({
                    "start": start,
                    "word": g.word_to(u),
                    "path": g.node(u),
                    "norm": qs(n),
                    "bound": qs(bound),
                }));
            }
        }
        r.certify(json!({
            "nodes": g.len(),
            "bound": qs(bound),
            "max_norm": qs(max),
            "attaining_bound": attained,
            "violations": violations,
        }));
        Ok(())
    })
}

/// The `g_S`-components met by a bounded crystal, each fully closed.
/// Returns `(seed node in g, component)` pairs in node order.
fn components_with_seeds(
    ops: &RootOperators<'_>,
    g: &CrystalGraph,
    s: &[usize],
    node_cap: usize,
    keep: impl Fn(usize) -> bool,
) -> Result<Vec<(usize, CrystalGraph)>> {
    let mut seen: BTreeSet<Path> = BTreeSet::new();
    let mut out = Vec::new();
    for u in (0..g.len()).filter(|&u| keep(u)) {
        if seen.contains(g.node(u)) {
            continue;
        }
        let comp = closure(ops, g.node(u), s, node_cap)?;
        seen.extend(comp.nodes().iter().cloned());
        out.push((u, comp));
    }
    Ok(out)
}

/// Each `g_S`-component of `B₀(ϖ_i)` met by the bounded crystal has a
/// unique `g_S`-dominant highest element `π`, and the component is
/// isomorphic to `B_S(π(1))` as a rooted colored graph.
pub fn check_branching(ops: &RootOperators<'_>, i: usize, s: &[usize], limits: ExploreLimits) -> Result<Report> {
    let data = ops.data();
    let report = Report::new("branching", ops, json!({ "i": i, "s": s, "depth": limits.depth, "node_cap": limits.node_cap }));
    let start = Path::straight(data.fundamental_level_zero(i)?);
    guarded(report, |r| {
        let g = bfs(ops, &start, &all_colors(data), limits)?;
        let comps = components_with_seeds(ops, &g, s, limits.node_cap, |_| true)?;
        let mut sizes = Vec::new();
        for (seed, comp) in &comps {
            let replay = json!({ "start": start, "word": g.word_to(*seed), "path": g.node(*seed) });
            let top = match find_dominant_extremal(ops, comp, s) {
                Ok(p) => p,
                Err(e @ (Error::NotFound | Error::NotUnique(_))) => {
                    r.counterexample(json!({ "component_seed": replay, "reason": e.to_string() }));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mu = top.weight();
            let bs = generate_bs(data, &mu, s)?;
            let model = closure(ops, &Path::straight(mu.clone()), s, limits.node_cap)?;
            let model_nodes: BTreeSet<Path> = model.nodes().iter().cloned().collect();
            if model_nodes != bs {
                r.counterexample(json!({ "component_seed": replay, "reason": "f-closure and bidirectional closure of the straight path differ" }));
                continue;
            }
            let rooted = comp.with_root(&top).expect("dominant element lies in its component");
            let radius = comp.len().max(model.len());
            let mismatch = if comp.len() != model.len() {
                Some(json!(format!("component has {} elements, model has {}", comp.len(), model.len())))
            } else {
                rooted_colored_isomorphic(&rooted, &model, radius)?.map(|m| json!(m))
            };
            if let Some(m) = mismatch {
                r.counterexample(json!({ "component_seed": replay, "dominant": top, "mismatch": m }));
                continue;
            }
            sizes.push(json!({ "dominant_weight": mu, "size": comp.len() }));
        }
        r.certify(json!({ "explored_nodes": g.len(), "components": comps.len(), "matched": sizes }));
        Ok(())
    })
}

/// Character of the bounded crystal inside `window` equals the sum of the
/// characters of `B_S(π(1))` over the `g_S`-dominant highest elements `π` of
/// the components meeting the window.
pub fn check_character_branching(
    ops: &RootOperators<'_>,
    i: usize,
    s: &[usize],
    window: &WeightWindow,
    limits: ExploreLimits,
) -> Result<Report> {
    let data = ops.data();
    let report = Report::new(
        "character-branching",
        ops,
        json!({ "i": i, "s": s, "window": window, "depth": limits.depth, "node_cap": limits.node_cap }),
    );
    let start = Path::straight(data.fundamental_level_zero(i)?);
    guarded(report, |r| {
        let g = bfs(ops, &start, &all_colors(data), limits)?;
        let lhs = character_window(&g, window)?;
        let comps = components_with_seeds(ops, &g, s, limits.node_cap, |u| window.contains(g.weight(u)))?;
        let mut rhs = Character::empty(window.clone());
        for (seed, comp) in &comps {
            match find_dominant_extremal(ops, comp, s) {
                Ok(top) => rhs.merge(&Character::from_paths(window.clone(), &generate_bs(data, &top.weight(), s)?)),
                Err(e @ (Error::NotFound | Error::NotUnique(_))) => {
                    r.counterexample(json!({ "start": start, "word": g.word_to(*seed), "reason": e.to_string() }));
                }
                Err(e) => return Err(e),
            }
        }
        if lhs != rhs {
            let diff: Vec<Value> = lhs
                .counts
                .keys()
                .chain(rhs.counts.keys())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|w| lhs.counts.get(*w) != rhs.counts.get(*w))
                .map(|w| json!({ "weight": w, "lhs": lhs.counts.get(w).copied().unwrap_or(0), "rhs": rhs.counts.get(w).copied().unwrap_or(0) }))
                .collect();
            r.counterexample(json!({ "differences": diff }));
        }
        r.certify(json!({ "lhs": lhs, "rhs": rhs, "components": comps.len() }));
        Ok(())
    })
}

/// Applies the first available `e_j` (smallest `j`) until the path is
/// highest; returns the word and the end point.
pub fn raising_walk(ops: &RootOperators<'_>, start: &Path, colors: &[usize]) -> Result<(OpWord, Path)> {
    let mut cur = start.clone();
    let mut word = OpWord::default();
    for _ in 0..RAISING_CAP {
        let mut moved = false;
        for &j in colors {
            if let Some(next) = ops.e(&cur, j)? {
                cur = next;
                word = word.then(OpLetter::e(j));
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok((word, cur));
        }
    }
    Err(Error::CapExceeded(RAISING_CAP))
}

/// The concatenation crystal generated by `π_λ ∗ π_ν` (`ν` in an orbit
/// window of a minuscule `ϖ_i`) splits into components, each with exactly
/// one seed whose second factor is `λ`-dominant, and that component is
/// isomorphic near its root to the crystal of `π_{λ+ν}`.
pub fn check_minuscule_decomposition(
    ops: &RootOperators<'_>,
    lambda: &Weight,
    i: usize,
    limits: ExploreLimits,
    orbit_bound: i64,
) -> Result<Report> {
    let data = ops.data();
    if lambda.pairings.iter().any(|m| !m.is_integer() || m.is_negative()) {
        return Err(Error::NotDominant);
    }
    if lambda.pairings.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("λ must not be a multiple of δ".into()));
    }
    if !data.is_minuscule(i)? {
        return Err(Error::Invalid(format!("ϖ_{i} is not minuscule")));
    }
    let report = Report::new(
        "minuscule-decomposition",
        ops,
        json!({ "lambda": lambda, "i": i, "depth": limits.depth, "node_cap": limits.node_cap, "orbit_bound": orbit_bound }),
    );
    let colors = all_colors(data);
    let window = OrbitWindow::new(data, &data.fundamental_level_zero(i)?, &colors, orbit_bound);
    let head = Path::straight(lambda.clone());
    let seeds: Vec<Path> = window.elements().iter().map(|nu| head.concat(&Path::straight(nu.clone()))).collect();
    let dominant: Vec<bool> = window.elements().iter().map(|nu| Path::straight(nu.clone()).is_lambda_dominant(lambda)).collect();
    let seed_index: HashMap<&Path, usize> = seeds.iter().enumerate().map(|(k, p)| (p, k)).collect();
    guarded(report, |r| {
        for (k, seed) in seeds.iter().enumerate() {
            let nu = &window.elements()[k];
            let (word, end) = raising_walk(ops, seed, &colors)?;
            let fail = |reason: &str| json!({ "start": seed, "word": word, "seed_direction": nu, "reason": reason });
            if dominant[k] != word.is_empty() {
                r.counterexample(fail("a seed is highest exactly when its second factor is λ-dominant"));
                continue;
            }
            let halves = end.split_equal(2);
            if halves[0] != head || !halves[1].is_straight() {
                r.counterexample(fail("raising walk leaves π_λ ∗ (straight paths)"));
                continue;
            }
            let reached = halves[1].weight();
            match window.position(&reached) {
                None => r.inconclusive(json!({ "seed_direction": nu, "reaches_outside_window": reached })),
                Some(k2) if !dominant[k2] => r.counterexample(fail("raising walk ends at a seed that is not λ-dominant")),
                Some(_) => r.certify(json!({ "seed_direction": nu, "raising_word": word, "reaches": reached })),
            }
        }
        let checked: Vec<Result<Vec<(bool, Value)>>> = (0..seeds.len())
            .into_par_iter()
            .filter(|&k| dominant[k])
            .map(|k| {
                let nu = &window.elements()[k];
                let target = lambda + nu;
                let mut out = Vec::new();
                if !target.is_dominant_on(&colors) {
                    out.push((false, json!({ "seed_direction": nu, "reason": "λ + ν is not dominant" })));
                }
                let comp = bfs(ops, &seeds[k], &colors, limits)?;
                let dominant_seeds: Vec<&Weight> = comp
                    .nodes()
                    .iter()
                    .filter_map(|p| seed_index.get(p).filter(|&&k2| dominant[k2]).map(|&k2| &window.elements()[k2]))
                    .collect();
                if dominant_seeds.len() != 1 {
                    out.push((false, json!({ "start": seeds[k], "reason": "component holds several λ-dominant seeds", "seeds": dominant_seeds })));
                }
                let model = bfs(ops, &Path::straight(target.clone()), &colors, limits)?;
                match rooted_colored_isomorphic(&comp, &model, limits.depth)? {
                    Some(m) => out.push((false, json!({ "start": seeds[k], "model": Path::straight(target), "mismatch": m }))),
                    None => out.push((true, json!({ "seed_direction": nu, "target": target, "component_nodes": comp.len() }))),
                }
                Ok(out)
            })
            .collect();
        for res in checked {
            for (ok, cert) in res? {
                if ok {
                    r.certify(cert);
                } else {
                    r.counterexample(cert);
                }
            }
        }
        Ok(())
    })
}

/// `σ_{m,λ}(π)`: the `m` equal pieces of `mπ`.
pub fn sigma(path: &Path, m: u32) -> Vec<Path> {
    path.scale(m).split_equal(m)
}

fn orbit_bound_for(paths: &[&Path]) -> i64 {
    paths
        .iter()
        .flat_map(|p| p.segments().iter())
        .map(|s| s.direction.max_abs())
        .max()
        .unwrap_or_else(Q::zero)
        .ceil()
        .to_integer()
        + 1
}

/// Scaling identities on a sample of `B₀(λ)`: `S_m f_j = f_j^m S_m`, the
/// same for `e_j`, `wt(mπ) = m wt(π)`, and every piece of `σ_{m,λ}(π)` is an
/// LS path of shape `λ`, with `σ_{m,λ}(π_λ) = π_λ^{∗m}`.
pub fn check_sigma_properties(
    ops: &RootOperators<'_>,
    lambda: &Weight,
    m: u32,
    sample_size: usize,
    seed: u64,
    limits: ExploreLimits,
) -> Result<Report> {
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let data = ops.data();
    let report = Report::new(
        "sigma-properties",
        ops,
        json!({ "lambda": lambda, "m": m, "sample_size": sample_size, "seed": seed, "depth": limits.depth, "node_cap": limits.node_cap }),
    );
    guarded(report, |r| {
        let colors = all_colors(data);
        let start = Path::straight(lambda.clone());
        let g = bfs(ops, &start, &colors, limits)?;
        let straight_pieces = sigma(&start, m);
        if straight_pieces.iter().any(|p| *p != start) {
            r.counterexample(json!({ "start": start, "word": OpWord::default(), "identity": "σ(π_λ) = π_λ^{∗m}" }));
        }
        let bound = orbit_bound_for(&g.nodes().iter().collect::<Vec<_>>());
        let order = orbit_order(data, lambda, &colors, bound)?;
        let ids = sample_ids(&g, sample_size, seed);
        let mut unconfirmed = 0usize;
        let mut identities = 0usize;
        for &u in &ids {
            let p = g.node(u);
            let mp = p.scale(m);
            let fail = |what: &str, letter: Option<OpLetter>| {
                json!({ "start": start, "word": g.word_to(u), "path": p, "m": m, "letter": letter, "identity": what })
            };
            if mp.weight() != p.weight().scaled(q(i64::from(m))) {
                r.counterexample(fail("wt(mπ) = m wt(π)", None));
            }
            for &j in &colors {
                for letter in [OpLetter::f(j), OpLetter::e(j)] {
                    identities += 1;
                    let lhs = ops.apply(letter, p)?.map(|x| x.scale(m));
                    let rhs = ops.power(letter, m, &mp)?;
                    if lhs != rhs {
                        r.counterexample(fail("S_m x_j = x_j^m S_m", Some(letter)));
                    }
                }
            }
            for piece in sigma(p, m) {
                let verdict = LsPath::from_path(&piece, order.window()).map(|ls| validate_ls(&ls, &order));
                match verdict {
                    Some(v) if v.valid => {}
                    Some(v) if v.truncated => unconfirmed += 1,
                    None if order.is_truncated() => unconfirmed += 1,
                    _ => r.counterexample(fail("pieces of σ(π) are LS paths of shape λ", None)),
                }
            }
        }
        if unconfirmed > 0 {
            r.inconclusive(json!({ "pieces_unconfirmed_by_window": unconfirmed }));
        }
        r.certify(json!({ "explored_nodes": g.len(), "samples": ids.len(), "operator_identities": identities }));
        Ok(())
    })
}

fn is_orbit_concatenation(pieces: &[Path], window: &OrbitWindow) -> bool {
    pieces.iter().all(|p| p.is_straight() && window.contains(&p.weight()))
}

/// Smallest `m ≤ m_max` such that every prefix `π_l` of `word · π_λ` has
/// `σ_{m,λ}(π_l)` a concatenation of straight paths `π_{wλ}`.
pub fn find_straightening_m(ops: &RootOperators<'_>, lambda: &Weight, word: &OpWord, m_max: u32) -> Result<Report> {
    let data = ops.data();
    let mut report = Report::new("straightening", ops, json!({ "lambda": lambda, "words": [word], "m_max": m_max }));
    straighten_into(&mut report, data, ops, lambda, word, m_max)?;
    Ok(report)
}

/// Runs the straightening search for several words in one report.
pub fn check_straightening(ops: &RootOperators<'_>, lambda: &Weight, words: &[OpWord], m_max: u32) -> Result<Report> {
    let data = ops.data();
    let mut report = Report::new("straightening", ops, json!({ "lambda": lambda, "words": words, "m_max": m_max }));
    for w in words {
        straighten_into(&mut report, data, ops, lambda, w, m_max)?;
    }
    Ok(report)
}

fn straighten_into(
    r: &mut Report,
    data: &AffineData,
    ops: &RootOperators<'_>,
    lambda: &Weight,
    word: &OpWord,
    m_max: u32,
) -> Result<()> {
    let start = Path::straight(lambda.clone());
    let mut prefixes = vec![start.clone()];
    for &letter in word.0.iter().rev() {
        let cur = prefixes.last().expect("nonempty");
        match ops.apply(letter, cur)? {
            Some(next) => prefixes.push(next),
            None => return Err(Error::Invalid(format!("word {word} kills π_λ"))),
        }
    }
    let bound = orbit_bound_for(&prefixes.iter().collect::<Vec<_>>());
    let window = OrbitWindow::new(data, lambda, &data.all_indices(), bound);
    for m in 1..=m_max {
        if prefixes.iter().all(|p| is_orbit_concatenation(&sigma(p, m), &window)) {
            r.certify(json!({ "word": word, "m": m }));
            return Ok(());
        }
    }
    r.inconclusive(json!({ "word": word, "no_witness_up_to": m_max }));
    Ok(())
}

/// A random word of length `len` whose every prefix acts nontrivially on
/// `start`; shorter if the path becomes isolated.
pub fn random_nonnull_word(ops: &RootOperators<'_>, start: &Path, len: usize, rng: &mut impl Rng) -> Result<OpWord> {
    let colors = all_colors(ops.data());
    let mut cur = start.clone();
    let mut word = OpWord::default();
    for _ in 0..len {
        let mut options = Vec::new();
        for &j in &colors {
            for letter in [OpLetter::f(j), OpLetter::e(j)] {
                if let Some(p) = ops.apply(letter, &cur)? {
                    options.push((letter, p));
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let (letter, p) = options.swap_remove(rng.gen_range(0..options.len()));
        word = word.then(letter);
        cur = p;
    }
    Ok(word)
}

/// Compares `x_j(π₁ ∗ π₂)` computed on the concatenated path with the
/// componentwise tensor rule.
pub fn tensor_rule_agrees(ops: &RootOperators<'_>, letter: OpLetter, first: &Path, second: &Path) -> Result<bool> {
    let direct = ops.apply(letter, &first.concat(second))?;
    let rule = ops.tensor_rule(letter, first, second)?.map(|(a, b)| a.concat(&b));
    Ok(direct == rule)
}

/// Tensor rule on random pairs drawn from two bounded crystals.
pub fn check_tensor_rule(
    ops: &RootOperators<'_>,
    first: &Weight,
    second: &Weight,
    trials: usize,
    seed: u64,
    limits: ExploreLimits,
) -> Result<Report> {
    let data = ops.data();
    let report = Report::new(
        "tensor-rule",
        ops,
        json!({ "first": first, "second": second, "trials": trials, "seed": seed, "depth": limits.depth, "node_cap": limits.node_cap }),
    );
    guarded(report, |r| {
        let colors = all_colors(data);
        let (s1, s2) = (Path::straight(first.clone()), Path::straight(second.clone()));
        let g1 = bfs(ops, &s1, &colors, limits)?;
        let g2 = bfs(ops, &s2, &colors, limits)?;
        let a = sample_ids(&g1, trials, seed);
        let b = sample_ids(&g2, trials, seed.wrapping_add(1));
        let mut compared = 0usize;
        for (&u, &v) in a.iter().zip(&b) {
            for &j in &colors {
                for letter in [OpLetter::f(j), OpLetter::e(j)] {
                    compared += 1;
                    if !tensor_rule_agrees(ops, letter, g1.node(u), g2.node(v))? {
                        r.counterexample(json!({
                            "first": { "start": s1, "word": g1.word_to(u), "path": g1.node(u) },
                            "second": { "start": s2, "word": g2.word_to(v), "path": g2.node(v) },
                            "letter": letter,
                        }));
                    }
                }
            }
        }
        r.certify(json!({ "pairs": a.len(), "comparisons": compared }));
        Ok(())
    })
}

/// Crystal axioms for one path and color, exactly: `e_j f_j π = π`,
/// `f_j e_j π = π`, `wt(f_j π) = wt π − α_j`, `φ_j − ε_j = wt(π)(α_j^∨)` and
/// `ε_j`, `φ_j` equal the maximal numbers of applicable `e_j`, `f_j`.
pub fn crystal_axiom_failures(ops: &RootOperators<'_>, p: &Path, j: usize) -> Result<Vec<&'static str>> {
    let data = ops.data();
    let mut fails = Vec::new();
    let (eps, phi) = (ops.eps(p, j)?, ops.phi(p, j)?);
    if q(phi - eps) != p.weight().pairing(j) {
        fails.push("φ − ε = wt(α^∨)");
    }
    if let Some(fp) = ops.f(p, j)? {
        if fp.weight() != &p.weight() - data.simple_root(j) {
            fails.push("wt(f π) = wt π − α");
        }
        if ops.e(&fp, j)?.as_ref() != Some(p) {
            fails.push("e f π = π");
        }
    }
    if let Some(ep) = ops.e(p, j)? {
        if ops.f(&ep, j)?.as_ref() != Some(p) {
            fails.push("f e π = π");
        }
    }
    let count = |letter: OpLetter| -> Result<i64> {
        let mut cur = p.clone();
        let mut n = 0;
        while let Some(next) = ops.apply(letter, &cur)? {
            cur = next;
            n += 1;
            if n > eps.max(phi) + 1 {
                break;
            }
        }
        Ok(n)
    };
    if count(OpLetter::e(j))? != eps || count(OpLetter::f(j))? != phi {
        fails.push("normality");
    }
    Ok(fails)
}

/// Crystal axioms on every node of a bounded crystal plus `samples` seeded
/// draws from it.
pub fn check_crystal_axioms(
    ops: &RootOperators<'_>,
    lambda: &Weight,
    samples: usize,
    seed: u64,
    limits: ExploreLimits,
) -> Result<Report> {
    let data = ops.data();
    let report = Report::new(
        "crystal-axioms",
        ops,
        json!({ "lambda": lambda, "samples": samples, "seed": seed, "depth": limits.depth, "node_cap": limits.node_cap }),
    );
    guarded(report, |r| {
        let start = Path::straight(lambda.clone());
        let g = bfs(ops, &start, &all_colors(data), limits)?;
        let mut ids: Vec<usize> = (0..g.len()).collect();
        ids.extend(sample_ids(&g, samples, seed));
        let mut checked = 0usize;
        for &u in &ids {
            for j in data.all_indices() {
                checked += 1;
                for what in crystal_axiom_failures(ops, g.node(u), j)? {
                    r.counterexample(json!({ "start": start, "word": g.word_to(u), "path": g.node(u), "color": j, "axiom": what }));
                }
            }
        }
        r.certify(json!({ "explored_nodes": g.len(), "paths_checked": ids.len(), "path_color_pairs": checked }));
        Ok(())
    })
}

/// LS-side view of `B(ϖ_i)` on an orbit window: operator images of
/// enumerated LS paths validate again, bounded-crystal nodes validate, and
/// for minuscule `ϖ_i` the enumeration is exactly the straight paths.
/// Enumerated paths the bounded crystal does not reach are recorded as open
/// findings, not failures.
pub fn check_ls_window(
    ops: &RootOperators<'_>,
    i: usize,
    orbit_bound: i64,
    denom_bound: i64,
    limits: ExploreLimits,
) -> Result<Report> {
    let data = ops.data();
    let report = Report::new(
        "ls-window",
        ops,
        json!({ "i": i, "orbit_bound": orbit_bound, "denom_bound": denom_bound, "depth": limits.depth, "node_cap": limits.node_cap }),
    );
    let top = data.fundamental_level_zero(i)?;
    let colors = all_colors(data);
    let order: CoverGraph = orbit_order(data, &top, &colors, orbit_bound)?;
    let listing = enumerate_ls(&order, denom_bound)?;
    guarded(report, |r| {
        let mut unconfirmed = 0usize;
        let mut images = 0usize;
        let judge = |r: &mut Report, p: &Path, cert: Value, unconfirmed: &mut usize| match LsPath::from_path(p, order.window()) {
            Some(ls) => {
                let v = validate_ls(&ls, &order);
                if !v.valid {
                    if v.truncated {
                        *unconfirmed += 1;
                    } else {
                        r.counterexample(cert);
                    }
                }
            }
            None => *unconfirmed += 1,
        };
        for ls in &listing.paths {
            let p = ls.to_path();
            for &j in &colors {
                for letter in [OpLetter::f(j), OpLetter::e(j)] {
                    if let Some(x) = ops.apply(letter, &p)? {
                        images += 1;
                        let cert = json!({ "start": p, "word": OpWord(vec![letter]), "reason": "operator image is not an LS path" });
                        judge(r, &x, cert, &mut unconfirmed);
                    }
                }
            }
        }
        let start = Path::straight(top.clone());
        let g = bfs(ops, &start, &colors, limits)?;
        for u in 0..g.len() {
            let cert = json!({ "start": start, "word": g.word_to(u), "reason": "crystal element is not an LS path" });
            judge(r, g.node(u), cert, &mut unconfirmed);
        }
        let listed: BTreeSet<Path> = listing.paths.iter().map(LsPath::to_path).collect();
        if data.is_minuscule(i)? && listing.paths.iter().any(|p| p.len() != 1) {
            r.counterexample(json!({ "reason": "bent LS path of minuscule shape" }));
        }
        let unreached = listed.iter().filter(|p| !g.contains(p)).count();
        if unconfirmed > 0 {
            r.inconclusive(json!({ "unconfirmed_by_window": unconfirmed }));
        }
        r.certify(json!({
            "listed": listing.paths.len(),
            "operator_images": images,
            "window_truncated": listing.window_truncated,
            "denominator_truncated": listing.denominator_truncated,
            "explored_nodes": g.len(),
            "listed_not_reached_by_exploration": unreached,
        }));
        Ok(())
    })
}
