//! Piecewise-linear paths modulo reparametrization.
//!
//! A [`Path`] keeps the time parametrization it was built with (LS cuts,
//! halved durations after concatenation, ...) but compares, hashes and sorts
//! by its sequence of displacement vectors with positively collinear
//! neighbors merged. That sequence is a complete invariant of the
//! reparametrization class.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{q, serde_q, Q};
use crate::rootsys::AffineData;
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub direction: Weight,
    #[serde(with = "serde_q")]
    pub duration: Q,
}

impl Segment {
    pub fn new(direction: Weight, duration: Q) -> Self {
        Self { direction, duration }
    }

    pub fn displacement(&self) -> Weight {
        self.direction.scaled(self.duration)
    }
}

#[derive(Clone)]
pub struct Path {
    segments: Vec<Segment>,
    displacements: Vec<Weight>,
}

impl PartialEq for Path {
    fn eq(&self, other: &Self) -> bool {
        self.displacements == other.displacements
    }
}

impl Eq for Path {}

impl Hash for Path {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.displacements.hash(state);
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.displacements.cmp(&other.displacements)
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} x {}", s.direction, s.duration)?;
        }
        write!(f, "]")
    }
}

/// Values of `t ↦ π(t)(α_i^∨)` at the breakpoints of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HProfile {
    pub breakpoints: Vec<Q>,
    pub values: Vec<Q>,
}

impl HProfile {
    pub fn min(&self) -> Q {
        *self.values.iter().min().expect("profile has at least one breakpoint")
    }

    pub fn end(&self) -> Q {
        *self.values.last().expect("profile has at least one breakpoint")
    }

    pub fn value_at(&self, t: Q) -> Q {
        let k = self.breakpoints.partition_point(|&b| b <= t);
        if k >= self.breakpoints.len() {
            return self.end();
        }
        let (t0, t1) = (self.breakpoints[k - 1], self.breakpoints[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Last time the minimum is attained (always a breakpoint).
    pub fn last_argmin(&self) -> Q {
        let m = self.min();
        let k = self.values.iter().rposition(|v| *v == m).unwrap();
        self.breakpoints[k]
    }

    /// First time the minimum is attained (always a breakpoint).
    pub fn first_argmin(&self) -> Q {
        let m = self.min();
        let k = self.values.iter().position(|v| *v == m).unwrap();
        self.breakpoints[k]
    }

    /// First `t ≥ from` with `h(t) = level`, assuming `h(from) < level`.
    pub fn first_reaching(&self, from: Q, level: Q) -> Option<Q> {
        for k in 0..self.breakpoints.len() - 1 {
            let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if t1 <= from {
                continue;
            }
            let (v0, v1) = (self.values[k], self.values[k + 1]);
            if v1 >= level && v0 < level {
                return Some(t0 + (level - v0) / (v1 - v0) * (t1 - t0));
            }
        }
        None
    }

    /// Last `t ≤ until` with `h(t) = level`, assuming `h(until) < level`.
    pub fn last_reaching(&self, until: Q, level: Q) -> Option<Q> {
        for k in (0..self.breakpoints.len() - 1).rev() {
            let (t0, t1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if t0 >= until {
                continue;
            }
            let (v0, v1) = (self.values[k], self.values[k + 1]);
            if v0 >= level && v1 < level {
                return Some(t0 + (v0 - level) / (v0 - v1) * (t1 - t0));
            }
        }
        None
    }
}

impl Path {
    /// Validates and canonicalizes a raw segment list.
    pub fn canonicalize(raw: Vec<Segment>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Invalid("path without segments".into()));
        }
        let rank = raw[0].direction.rank();
        if raw.iter().any(|s| s.direction.rank() != rank) {
            return Err(Error::Invalid("segment directions of different rank".into()));
        }
        if raw.iter().any(|s| !s.duration.is_positive()) {
            return Err(Error::ZeroDuration);
        }
        let total: Q = raw.iter().map(|s| s.duration).sum();
        if total != Q::one() {
            return Err(Error::BadTotal(total.to_string()));
        }
        Ok(Self::normalize(rank, raw))
    }

    /// Merges positively collinear neighbors, drops zero displacements and
    /// rescales time to `[0, 1]`. Durations must be positive.
    pub(crate) fn normalize(rank: usize, raw: Vec<Segment>) -> Self {
        let mut merged: Vec<Segment> = Vec::with_capacity(raw.len());
        for seg in raw {
            if seg.direction.is_zero() {
                continue;
            }
            if let Some(last) = merged.last_mut() {
                if seg.direction.positive_multiple_of(&last.direction).is_some() {
                    let disp = &last.displacement() + &seg.displacement();
                    let dur = last.duration + seg.duration;
                    *last = Segment::new(disp.scaled(dur.recip()), dur);
                    continue;
                }
            }
            merged.push(seg);
        }
        if merged.is_empty() {
            return Self::trivial(rank);
        }
        let total: Q = merged.iter().map(|s| s.duration).sum();
        if total != Q::one() {
            for s in merged.iter_mut() {
                s.duration /= total;
                s.direction = s.direction.scaled(total);
            }
        }
        let displacements = merged.iter().map(Segment::displacement).collect();
        Self { segments: merged, displacements }
    }

    /// `π_λ(t) = tλ`.
    pub fn straight(direction: Weight) -> Self {
        let rank = direction.rank();
        Self::normalize(rank, vec![Segment::new(direction, Q::one())])
    }

    /// The constant path at 0.
    pub fn trivial(rank: usize) -> Self {
        Self { segments: vec![Segment::new(Weight::zero(rank), Q::one())], displacements: Vec::new() }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Canonical displacement sequence (empty for the trivial path).
    pub fn displacements(&self) -> &[Weight] {
        &self.displacements
    }

    pub fn rank(&self) -> usize {
        self.segments[0].direction.rank()
    }

    pub fn is_trivial(&self) -> bool {
        self.displacements.is_empty()
    }

    /// One segment (the trivial path counts as straight).
    pub fn is_straight(&self) -> bool {
        self.displacements.len() <= 1
    }

    /// `wt(π) = π(1)`.
    pub fn weight(&self) -> Weight {
        let mut w = Weight::zero(self.rank());
        for d in &self.displacements {
            w += d;
        }
        w
    }

    /// Segment end times and positions, starting with `(0, 0)`.
    pub fn breakpoints(&self) -> Vec<(Q, Weight)> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = Q::zero();
        let mut pos = Weight::zero(self.rank());
        out.push((t, pos.clone()));
        for s in &self.segments {
            t += s.duration;
            pos += &s.displacement();
            out.push((t, pos.clone()));
        }
        out
    }

    pub fn evaluate(&self, t: Q) -> Result<Weight> {
        if t.is_negative() || t > Q::one() {
            return Err(Error::OutOfRange(t.to_string()));
        }
        let mut start = Q::zero();
        let mut pos = Weight::zero(self.rank());
        for s in &self.segments {
            let end = start + s.duration;
            if t <= end {
                return Ok(&pos + &s.direction.scaled(t - start));
            }
            pos += &s.displacement();
            start = end;
        }
        Ok(pos)
    }

    pub fn h_profile(&self, i: usize) -> HProfile {
        let mut breakpoints = Vec::with_capacity(self.segments.len() + 1);
        let mut values = Vec::with_capacity(self.segments.len() + 1);
        let (mut t, mut h) = (Q::zero(), Q::zero());
        breakpoints.push(t);
        values.push(h);
        for s in &self.segments {
            t += s.duration;
            h += s.direction.pairing(i) * s.duration;
            breakpoints.push(t);
            values.push(h);
        }
        HProfile { breakpoints, values }
    }

    /// `π₁ ∗ π₂`: `π₁` on `[0, 1/2]`, then `π₂` on `[1/2, 1]`.
    pub fn concat(&self, other: &Path) -> Path {
        Self::concat_many(&[self.clone(), other.clone()])
    }

    /// `π₁ ∗ ⋯ ∗ π_m` with each factor on an interval of length `1/m`.
    pub fn concat_many(parts: &[Path]) -> Path {
        assert!(!parts.is_empty(), "concatenation of zero paths");
        let m = q(parts.len() as i64);
        let rank = parts[0].rank();
        let raw = parts
            .iter()
            .flat_map(|p| p.segments.iter())
            .map(|s| Segment::new(s.direction.scaled(m), s.duration / m))
            .collect();
        Self::normalize(rank, raw)
    }

    /// `S_m(π) = mπ`.
    pub fn scale(&self, m: u32) -> Path {
        assert!(m >= 1, "scale factor must be positive");
        let c = q(i64::from(m));
        let raw = self.segments.iter().map(|s| Segment::new(s.direction.scaled(c), s.duration)).collect();
        Self::normalize(self.rank(), raw)
    }

    /// Segment list with extra breakpoints inserted at the given times.
    fn split_at(&self, cuts: &[Q]) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.segments.len() + cuts.len());
        let mut start = Q::zero();
        for s in &self.segments {
            let end = start + s.duration;
            let mut cur = start;
            for &c in cuts {
                if c > cur && c < end {
                    out.push(Segment::new(s.direction.clone(), c - cur));
                    cur = c;
                }
            }
            out.push(Segment::new(s.direction.clone(), end - cur));
            start = end;
        }
        out
    }

    /// The piece on `[t0, t1]`, reparametrized to `[0, 1]` with the same
    /// displacements.
    pub fn restrict(&self, t0: Q, t1: Q) -> Result<Path> {
        if t0.is_negative() || t1 > Q::one() || t0 >= t1 {
            return Err(Error::OutOfRange(format!("[{t0}, {t1}]")));
        }
        let mut start = Q::zero();
        let mut raw = Vec::new();
        for s in self.split_at(&[t0, t1]) {
            let end = start + s.duration;
            if start >= t0 && end <= t1 {
                raw.push(s);
            }
            start = end;
        }
        Ok(Self::normalize(self.rank(), raw))
    }

    /// Splits `[0, 1]` into `m` equal intervals; the pieces satisfy
    /// `concat_many(pieces) = self` up to reparametrization.
    pub fn split_equal(&self, m: u32) -> Vec<Path> {
        let mq = q(i64::from(m));
        (0..m)
            .map(|k| {
                let k = q(i64::from(k));
                self.restrict(k / mq, (k + Q::one()) / mq).expect("valid interval")
            })
            .collect()
    }

    /// Applies `r_i` to every direction on `[t1, t2]`, splitting segments at
    /// the endpoints; the rest of the path is unchanged.
    pub(crate) fn reflect_between(&self, data: &AffineData, i: usize, t1: Q, t2: Q) -> Path {
        let mut start = Q::zero();
        let raw = self
            .split_at(&[t1, t2])
            .into_iter()
            .map(|s| {
                let end = start + s.duration;
                let inside = start >= t1 && end <= t2;
                start = end;
                if inside {
                    Segment::new(data.reflect(&s.direction, i), s.duration)
                } else {
                    s
                }
            })
            .collect();
        Self::normalize(self.rank(), raw)
    }

    /// `π(t)(α_j^∨) ≥ 0` for all `t` and `j ∈ indices`.
    pub fn is_dominant_on(&self, indices: &[usize]) -> bool {
        self.breakpoints().iter().all(|(_, w)| w.is_dominant_on(indices))
    }

    /// `(λ + π(t))(α_j^∨) ≥ 0` for all `t` and all `j`.
    pub fn is_lambda_dominant(&self, lambda: &Weight) -> bool {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.breakpoints().iter().all(|(_, w)| (lambda + w).is_dominant_on(&all))
    }
}

/// `g_S`-dominance of a path.
pub fn is_dominant_s(path: &Path, s: &[usize]) -> bool {
    path.is_dominant_on(s)
}

pub fn is_lambda_dominant(path: &Path, lambda: &Weight) -> bool {
    path.is_lambda_dominant(lambda)
}

#[derive(Serialize, Deserialize)]
struct RawPath {
    segments: Vec<Segment>,
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPath { segments: self.segments.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPath::deserialize(d)?;
        Path::canonicalize(raw.segments).map_err(serde::de::Error::custom)
    }
}
