//! Lakshmibai–Seshadri paths: representation, the chain-condition validator,
//! conversion to [`Path`], and generation of finite crystals by f-closure.
//!
//! Directions are listed in time order. The lowering operator bends the
//! straight path `π_λ` into `(r_i λ, λ; 1/2)` with the lower weight first,
//! so along a valid LS path each link `(ν_k, ν_{k+1})` is witnessed by an
//! `a_k`-chain running from `ν_{k+1}` down to `ν_k` in the cover order.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::RootOperators;
use crate::path::{Path, Segment};
use crate::rational::{farey_interior, q, serde_q, serde_q_vec, Q};
use crate::rootsys::AffineData;
use crate::weight::Weight;
use crate::weyl::{orbit_order, CoverGraph, CoverStep, OrbitWindow};

/// Element cap for f-closures over index sets that are supposed to be of
/// finite type.
pub const FINITE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLsPath")]
pub struct LsPath {
    pub directions: Vec<Weight>,
    #[serde(with = "serde_q_vec")]
    pub cuts: Vec<Q>,
}

#[derive(Deserialize)]
struct RawLsPath {
    directions: Vec<Weight>,
    #[serde(with = "serde_q_vec")]
    cuts: Vec<Q>,
}

impl TryFrom<RawLsPath> for LsPath {
    type Error = Error;
    fn try_from(raw: RawLsPath) -> Result<Self> {
        LsPath::new(raw.directions, raw.cuts)
    }
}

impl LsPath {
    /// Checks the shape of the data: `s ≥ 1` directions of equal rank and
    /// cuts `0 = a_0 < a_1 < … < a_s = 1`.
    pub fn new(directions: Vec<Weight>, cuts: Vec<Q>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Invalid("LS path without directions".into()));
        }
        if cuts.len() != directions.len() + 1 {
            return Err(Error::Dimension { expected: directions.len() + 1, got: cuts.len() });
        }
        let rank = directions[0].rank();
        if directions.iter().any(|d| d.rank() != rank) {
            return Err(Error::Invalid("directions of different rank".into()));
        }
        if !cuts[0].is_zero() || cuts[cuts.len() - 1] != Q::one() {
            return Err(Error::OutOfRange("cuts must run from 0 to 1".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ZeroDuration);
        }
        Ok(Self { directions, cuts })
    }

    pub fn straight(direction: Weight) -> Self {
        Self { directions: vec![direction], cuts: vec![Q::zero(), Q::one()] }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// `Σ_k (a_k − a_{k−1}) ν_k`.
    pub fn endpoint(&self) -> Weight {
        let mut w = Weight::zero(self.directions[0].rank());
        for (k, nu) in self.directions.iter().enumerate() {
            w += &nu.scaled(self.cuts[k + 1] - self.cuts[k]);
        }
        w
    }

    pub fn to_path(&self) -> Path {
        let segs = self
            .directions
            .iter()
            .enumerate()
            .map(|(k, nu)| Segment::new(nu.clone(), self.cuts[k + 1] - self.cuts[k]))
            .collect();
        Path::canonicalize(segs).expect("LS cuts are strictly increasing from 0 to 1")
    }

    /// Reads a path as an LS path whose directions lie in `orbit`: each
    /// displacement must be a positive multiple of an orbit element, and the
    /// resulting durations must sum to one.
    pub fn from_path(path: &Path, orbit: &OrbitWindow) -> Option<LsPath> {
        let mut directions = Vec::new();
        let mut cuts = vec![Q::zero()];
        let mut t = Q::zero();
        for d in path.displacements() {
            let (nu, c) = orbit
                .elements()
                .iter()
                .find_map(|nu| d.positive_multiple_of(nu).map(|c| (nu.clone(), c)))?;
            t += c;
            directions.push(nu);
            cuts.push(t);
        }
        if directions.is_empty() {
            // Only the zero orbit has the trivial path as an LS path.
            let zero = orbit.elements().iter().find(|w| w.is_zero())?;
            return Some(LsPath::straight(zero.clone()));
        }
        (t == Q::one()).then_some(LsPath { directions, cuts })
    }
}

/// The a-chain witnessing link `k` (between directions `k` and `k + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCertificate {
    pub link: usize,
    #[serde(with = "serde_q")]
    pub cut: Q,
    pub chain: Vec<CoverStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkFailure {
    DirectionOutsideWindow { direction: usize },
    RepeatedDirection { link: usize },
    NoChain { link: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub certificates: Vec<LinkCertificate>,
    pub failure: Option<LinkFailure>,
    /// The answer depends on the part of the orbit outside the window; a
    /// negative verdict with this flag set is not a disproof.
    pub truncated: bool,
}

/// Checks the chain condition of `candidate` against the cover order of its
/// orbit. Certificates are returned for every link that passes.
pub fn validate_ls(candidate: &LsPath, order: &CoverGraph) -> Validation {
    let window = order.window();
    let mut certificates = Vec::new();
    let fail = |certificates, failure, truncated| Validation { valid: false, certificates, failure: Some(failure), truncated };
    for (k, nu) in candidate.directions.iter().enumerate() {
        if !window.contains(nu) {
            return fail(certificates, LinkFailure::DirectionOutsideWindow { direction: k }, true);
        }
    }
    for k in 0..candidate.len().saturating_sub(1) {
        let (lower, upper) = (&candidate.directions[k], &candidate.directions[k + 1]);
        if lower == upper {
            return fail(certificates, LinkFailure::RepeatedDirection { link: k }, false);
        }
        let cut = candidate.cuts[k + 1];
        let search = order.has_a_chain(upper, lower, cut);
        match search.chain {
            Some(chain) => certificates.push(LinkCertificate { link: k, cut, chain }),
            None => return fail(certificates, LinkFailure::NoChain { link: k }, search.truncated),
        }
    }
    Validation { valid: true, certificates, failure: None, truncated: false }
}

/// LS paths of one orbit window, with honesty flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LsEnumeration {
    pub paths: Vec<LsPath>,
    /// Some chain search or cover relation touched the window boundary.
    pub window_truncated: bool,
    /// The denominator bound is below the largest pairing on a cover edge,
    /// so cuts with larger denominators may be missing.
    pub denominator_truncated: bool,
}

impl LsEnumeration {
    pub fn is_complete(&self) -> bool {
        !self.window_truncated && !self.denominator_truncated
    }
}

/// Every LS path whose directions lie in the window of `order` and whose cuts
/// have denominators at most `denom_bound`, sorted.
pub fn enumerate_ls(order: &CoverGraph, denom_bound: i64) -> Result<LsEnumeration> {
    if denom_bound < 1 {
        return Err(Error::Invalid("denominator bound must be at least 1".into()));
    }
    let elements = order.window().elements();
    let cuts = farey_interior(denom_bound);
    let mut out = Vec::new();
    let mut truncated = order.is_truncated();
    let mut stack: Vec<(Vec<usize>, Vec<Q>)> = (0..elements.len()).map(|u| (vec![u], vec![Q::zero()])).collect();
    while let Some((dirs, cs)) = stack.pop() {
        let mut full = cs.clone();
        full.push(Q::one());
        out.push(LsPath { directions: dirs.iter().map(|&u| elements[u].clone()).collect(), cuts: full });
        let last = *dirs.last().expect("nonempty");
        let after = *cs.last().expect("nonempty");
        for &a in cuts.iter().filter(|&&a| a > after) {
            for (v, nu) in elements.iter().enumerate() {
                if v == last || !order.is_above(nu, &elements[last]) {
                    continue;
                }
                let search = order.has_a_chain(nu, &elements[last], a);
                truncated |= search.truncated;
                if search.found() {
                    let mut d = dirs.clone();
                    d.push(v);
                    let mut c = cs.clone();
                    c.push(a);
                    stack.push((d, c));
                }
            }
        }
    }
    out.sort_by_cached_key(LsPath::to_path);
    Ok(LsEnumeration {
        paths: out,
        window_truncated: truncated,
        denominator_truncated: max_cover_pairing(order) > q(denom_bound),
    })
}

fn max_cover_pairing(order: &CoverGraph) -> Q {
    order
        .window()
        .elements()
        .iter()
        .flat_map(|w| order.covers_of(w).into_iter().map(move |(_, beta)| beta.pair(w).abs()))
        .max()
        .unwrap_or_else(Q::zero)
}

/// LS paths of shape `ϖ_i` with directions in the orbit window of the given
/// coordinate bound.
///
/// Completeness inside the window requires `denom_bound` to be at least the
/// largest pairing `ν(β^∨)` along a cover, and chains never to leave the
/// window; both conditions are reported rather than assumed.
pub fn enumerate_b_window(data: &AffineData, i: usize, bound: i64, denom_bound: i64) -> Result<LsEnumeration> {
    let seed = data.fundamental_level_zero(i)?;
    let order = orbit_order(data, &seed, &data.all_indices(), bound)?;
    enumerate_ls(&order, denom_bound)
}

/// `B(λ)` for `g_sub` as the closure of `π_λ` under `f_j`, `j ∈ sub`.
///
/// Fails with [`Error::NotDominant`] unless `λ(α_j^∨)` is a nonnegative
/// integer on `sub`, and with [`Error::NotFiniteType`] if the closure grows
/// past `cap` elements.
pub fn generate_b_finite(data: &AffineData, lambda: &Weight, sub: &[usize], cap: usize) -> Result<BTreeSet<Path>> {
    for &j in sub {
        if j >= data.rank() {
            return Err(Error::BadIndex(j));
        }
        let m = lambda.pairing(j);
        if !m.is_integer() || m.is_negative() {
            return Err(Error::NotDominant);
        }
    }
    let ops = RootOperators::new(data);
    let start = Path::straight(lambda.clone());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for &j in sub {
            if let Some(next) = ops.f(&p, j)? {
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::NotFiniteType(cap));
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen)
}

/// `B_S(μ)`: the `g_S` crystal of `μ` in ambient coordinates.
pub fn generate_bs(data: &AffineData, mu: &Weight, s: &[usize]) -> Result<BTreeSet<Path>> {
    generate_b_finite(data, mu, s, FINITE_CAP)
}

/// The full `W_sub`-orbit of `λ` with its cover order, for a finite-type
/// `sub`. The window is sized from the straight paths of `closure`, which
/// contain every orbit element.
pub fn finite_order(data: &AffineData, lambda: &Weight, sub: &[usize], closure: &BTreeSet<Path>) -> Result<CoverGraph> {
    let bound = closure
        .iter()
        .filter(|p| p.is_straight())
        .map(|p| p.weight().max_abs())
        .max()
        .unwrap_or_else(Q::zero)
        .ceil()
        .to_integer()
        .max(1);
    let order = orbit_order(data, lambda, sub, bound)?;
    if order.is_truncated() {
        return Err(Error::NotFiniteType(order.window().len()));
    }
    Ok(order)
}

/// Validator-side construction of `B(λ)` for finite-type `sub`: all LS paths
/// of shape `λ` read off the full orbit, with a denominator bound large
/// enough to be complete.
pub fn enumerate_b_finite(data: &AffineData, lambda: &Weight, sub: &[usize]) -> Result<BTreeSet<Path>> {
    let closure = generate_b_finite(data, lambda, sub, FINITE_CAP)?;
    let order = finite_order(data, lambda, sub, &closure)?;
    let denom = max_cover_pairing(&order).ceil().to_integer().max(1);
    let listing = enumerate_ls(&order, denom)?;
    debug_assert!(listing.is_complete());
    Ok(listing.paths.iter().map(LsPath::to_path).collect())
}

/// Weyl dimension of the irreducible `sl_3` module with highest weight
/// `p ϖ_1 + q ϖ_2`.
pub fn sl3_dimension(p: u64, q: u64) -> u64 {
    (p + 1) * (q + 1) * (p + q + 2) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::rootsys::fixtures::*;

    fn a1_setup(k: i64) -> (AffineData, Weight, CoverGraph) {
        let d = algebra(a1_affine());
        let lam = d.fundamental_level_zero(1).unwrap().scaled(q(k));
        let closure = generate_b_finite(&d, &lam, &[1], FINITE_CAP).unwrap();
        let order = finite_order(&d, &lam, &[1], &closure).unwrap();
        (d, lam, order)
    }

    #[test]
    fn straight_path_is_ls() {
        let (_, lam, order) = a1_setup(2);
        let v = validate_ls(&LsPath::straight(lam.clone()), &order);
        assert!(v.valid);
        assert!(v.certificates.is_empty());
        assert_eq!(LsPath::straight(lam.clone()).to_path(), Path::straight(lam));
    }

    #[test]
    fn half_cut_link_in_finite_a1() {
        let (_, lam, order) = a1_setup(2);
        let half = LsPath::new(vec![-&lam, lam.clone()], vec![q(0), qf(1, 2), q(1)]).unwrap();
        let v = validate_ls(&half, &order);
        assert!(v.valid);
        assert_eq!(v.certificates.len(), 1);
        assert_eq!(v.certificates[0].chain.len(), 1);
        assert!(half.to_path().weight().is_zero());

        let third = LsPath::new(vec![-&lam, lam.clone()], vec![q(0), qf(1, 3), q(1)]).unwrap();
        let v = validate_ls(&third, &order);
        assert!(!v.valid);
        assert_eq!(v.failure, Some(LinkFailure::NoChain { link: 0 }));
        assert!(!v.truncated);

        // Higher weight first is the wrong orientation.
        let wrong = LsPath::new(vec![lam.clone(), -&lam], vec![q(0), qf(1, 2), q(1)]).unwrap();
        assert!(!validate_ls(&wrong, &order).valid);
    }

    #[test]
    fn malformed_cuts_are_rejected() {
        let w = Weight::from_ints(&[1, -1], 0);
        assert!(LsPath::new(vec![w.clone()], vec![q(0)]).is_err());
        assert!(LsPath::new(vec![w.clone(), -&w], vec![q(0), q(1), q(1)]).is_err());
        assert!(LsPath::new(vec![w], vec![qf(1, 2), q(1)]).is_err());
    }

    #[test]
    fn finite_a1_closures() {
        let d = algebra(a1_affine());
        let v = d.fundamental_level_zero(1).unwrap();
        let b1 = generate_b_finite(&d, &v, &[1], FINITE_CAP).unwrap();
        assert_eq!(b1, BTreeSet::from([Path::straight(v.clone()), Path::straight(-&v)]));
        let b2 = generate_b_finite(&d, &v.scaled(q(2)), &[1], FINITE_CAP).unwrap();
        assert_eq!(b2.len(), 3);
        let zero = generate_b_finite(&d, &Weight::zero(2), &[1], FINITE_CAP).unwrap();
        assert_eq!(zero, BTreeSet::from([Path::trivial(2)]));
        assert_eq!(generate_b_finite(&d, &-&v, &[1], FINITE_CAP), Err(Error::NotDominant));
    }

    #[test]
    fn affine_closure_hits_the_cap() {
        let d = algebra(a1_affine());
        let v = d.fundamental_level_zero(1).unwrap();
        // f_0 and f_1 together generate an infinite crystal.
        let l = &v + &d.fundamental_weight(0);
        assert_eq!(generate_b_finite(&d, &l, &[0, 1], 50), Err(Error::NotFiniteType(50)));
    }

    #[test]
    fn levi_crystal_in_ambient_coordinates() {
        let d = algebra(a1_affine());
        let mu = &d.fundamental_level_zero(1).unwrap() + &d.delta().scaled(q(3));
        let bs = generate_bs(&d, &mu, &[1]).unwrap();
        let ends: BTreeSet<Weight> = bs.iter().map(Path::weight).collect();
        let expect = BTreeSet::from([mu.clone(), &mu - d.simple_root(1)]);
        assert_eq!(ends, expect);
        assert_eq!(generate_bs(&d, &mu, &[]).unwrap(), BTreeSet::from([Path::straight(mu)]));
    }

    #[test]
    fn validator_matches_closure_on_sl3() {
        let d = algebra(a_affine(2));
        for (p, r) in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 0)] {
            let lam = &d.fundamental_level_zero(1).unwrap().scaled(q(p)) + &d.fundamental_level_zero(2).unwrap().scaled(q(r));
            let closure = generate_b_finite(&d, &lam, &[1, 2], FINITE_CAP).unwrap();
            let listed = enumerate_b_finite(&d, &lam, &[1, 2]).unwrap();
            assert_eq!(closure, listed, "p={p} q={r}");
            assert_eq!(closure.len() as u64, sl3_dimension(p as u64, r as u64));
        }
    }

    #[test]
    fn from_path_roundtrip() {
        let (_, lam, order) = a1_setup(2);
        let ls = LsPath::new(vec![-&lam, lam.clone()], vec![q(0), qf(1, 2), q(1)]).unwrap();
        let back = LsPath::from_path(&ls.to_path(), order.window()).unwrap();
        assert_eq!(back, ls);
    }

    #[test]
    fn minuscule_window_has_only_straight_paths() {
        let d = algebra(a1_affine());
        let listing = enumerate_b_window(&d, 1, 2, 6).unwrap();
        assert!(listing.window_truncated);
        assert!(listing.paths.iter().all(|p| p.len() == 1));
        let v = d.fundamental_level_zero(1).unwrap();
        assert!(listing.paths.contains(&LsPath::straight(v)));
    }

    #[test]
    fn json_format() {
        let w = Weight::from_ints(&[1, -1], 0);
        let ls = LsPath::new(vec![-&w, w.clone()], vec![q(0), qf(1, 2), q(1)]).unwrap();
        let s = serde_json::to_string(&ls).unwrap();
        assert!(s.contains(r#""cuts":["0","1/2","1"]"#));
        let back: LsPath = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ls);
    }
}
