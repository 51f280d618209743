//! Raising and lowering root operators on paths, the crystal statistics
//! `ε_i`, `φ_i`, and the induced Weyl group action.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::path::Path;
use crate::rational::Q;
use crate::rootsys::AffineData;
use crate::weyl::WeylWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Raise,
    Lower,
}

/// `e_i` or `f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpLetter {
    pub kind: OpKind,
    pub index: usize,
}

impl OpLetter {
    pub fn e(index: usize) -> Self {
        Self { kind: OpKind::Raise, index }
    }

    pub fn f(index: usize) -> Self {
        Self { kind: OpKind::Lower, index }
    }

    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            OpKind::Raise => OpKind::Lower,
            OpKind::Lower => OpKind::Raise,
        };
        Self { kind, index: self.index }
    }
}

impl fmt::Display for OpLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            OpKind::Raise => 'e',
            OpKind::Lower => 'f',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for OpLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = match s.chars().next() {
            Some('e') => (OpKind::Raise, &s[1..]),
            Some('f') => (OpKind::Lower, &s[1..]),
            _ => return Err(Error::Invalid(format!("bad operator letter {s:?}"))),
        };
        let index = rest.parse().map_err(|_| Error::Invalid(format!("bad operator letter {s:?}")))?;
        Ok(Self { kind, index })
    }
}

/// `x_{j_1} x_{j_2} ⋯ x_{j_k}` written left to right; the rightmost letter
/// acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct OpWord(pub Vec<OpLetter>);

impl OpWord {
    /// Word obtained by acting with `letter` after `self`.
    pub fn then(&self, letter: OpLetter) -> OpWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        OpWord(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for OpWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(OpWord)
    }
}

impl Serialize for OpLetter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OpLetter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for OpWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OpWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deliberate corruptions of the operators, for exercising the
/// counterexample path of the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// `f_i` returns twice the correct path.
    DoubledLowering,
}

/// Root operators over a fixed affine datum.
#[derive(Debug, Clone, Copy)]
pub struct RootOperators<'a> {
    data: &'a AffineData,
    fault: Option<Fault>,
}

impl<'a> RootOperators<'a> {
    pub fn new(data: &'a AffineData) -> Self {
        Self { data, fault: None }
    }

    pub fn with_fault(data: &'a AffineData, fault: Option<Fault>) -> Self {
        Self { data, fault }
    }

    pub fn data(&self) -> &'a AffineData {
        self.data
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    fn integral_min(&self, path: &Path, i: usize) -> Result<(Q, Q, crate::path::HProfile)> {
        if i >= self.data.rank() {
            return Err(Error::BadIndex(i));
        }
        let h = path.h_profile(i);
        let (m, end) = (h.min(), h.end());
        if !m.is_integer() || !end.is_integer() {
            return Err(Error::NonIntegralPath(i));
        }
        Ok((m, end, h))
    }

    /// `ε_i(π) = −min_t π(t)(α_i^∨)`.
    pub fn eps(&self, path: &Path, i: usize) -> Result<i64> {
        let (m, _, _) = self.integral_min(path, i)?;
        Ok(-m.to_integer())
    }

    /// `φ_i(π) = π(1)(α_i^∨) − min_t π(t)(α_i^∨)`.
    pub fn phi(&self, path: &Path, i: usize) -> Result<i64> {
        let (m, end, _) = self.integral_min(path, i)?;
        Ok((end - m).to_integer())
    }

    /// Lowering operator `f_i`; `None` when `φ_i(π) = 0`.
    pub fn f(&self, path: &Path, i: usize) -> Result<Option<Path>> {
        let (m, end, h) = self.integral_min(path, i)?;
        if end - m < Q::one() {
            return Ok(None);
        }
        let t1 = h.last_argmin();
        let t2 = h
            .first_reaching(t1, m + Q::one())
            .expect("h reaches min + 1 after its last minimum when φ ≥ 1");
        let out = path.reflect_between(self.data, i, t1, t2);
        Ok(Some(match self.fault {
            Some(Fault::DoubledLowering) => out.scale(2),
            None => out,
        }))
    }

    /// Raising operator `e_i`; `None` when `ε_i(π) = 0`.
    pub fn e(&self, path: &Path, i: usize) -> Result<Option<Path>> {
        let (m, _, h) = self.integral_min(path, i)?;
        if -m < Q::one() {
            return Ok(None);
        }
        let t2 = h.first_argmin();
        let t1 = h
            .last_reaching(t2, m + Q::one())
            .expect("h is at min + 1 before its first minimum when ε ≥ 1");
        Ok(Some(path.reflect_between(self.data, i, t1, t2)))
    }

    pub fn apply(&self, letter: OpLetter, path: &Path) -> Result<Option<Path>> {
        match letter.kind {
            OpKind::Raise => self.e(path, letter.index),
            OpKind::Lower => self.f(path, letter.index),
        }
    }

    /// Applies a word right to left; `None` as soon as a letter kills the path.
    pub fn apply_word(&self, word: &OpWord, path: &Path) -> Result<Option<Path>> {
        let mut cur = path.clone();
        for &letter in word.0.iter().rev() {
            match self.apply(letter, &cur)? {
                Some(p) => cur = p,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// `x^n π`, `None` if some power is null.
    pub fn power(&self, letter: OpLetter, n: u32, path: &Path) -> Result<Option<Path>> {
        let mut cur = path.clone();
        for _ in 0..n {
            match self.apply(letter, &cur)? {
                Some(p) => cur = p,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// `r_i π = f_i^n π` if `n = wt(π)(α_i^∨) ≥ 0`, else `e_i^{−n} π`.
    pub fn reflect(&self, path: &Path, i: usize) -> Result<Path> {
        let n = path.weight().pairing(i);
        if !n.is_integer() {
            return Err(Error::NonIntegralPath(i));
        }
        let n = n.to_integer();
        let letter = if n >= 0 { OpLetter::f(i) } else { OpLetter::e(i) };
        let out = self.power(letter, n.unsigned_abs() as u32, path)?;
        out.ok_or(Error::NonIntegralPath(i))
    }

    /// Weyl group action on paths, letters applied right to left.
    pub fn weyl_act(&self, word: &WeylWord, path: &Path) -> Result<Path> {
        let mut cur = path.clone();
        for &j in word.0.iter().rev() {
            cur = self.reflect(&cur, j)?;
        }
        Ok(cur)
    }

    /// The path is killed by every `e_j`, `j ∈ indices`.
    pub fn is_highest(&self, path: &Path, indices: &[usize]) -> Result<bool> {
        for &j in indices {
            if self.eps(path, j)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `x_j(π₁ ∗ π₂)` from the factors alone, by the tensor product rule:
    /// `f` acts on the first factor iff `φ(π₁) > ε(π₂)`, `e` acts on the
    /// first factor iff `φ(π₁) ≥ ε(π₂)`.
    pub fn tensor_rule(&self, letter: OpLetter, first: &Path, second: &Path) -> Result<Option<(Path, Path)>> {
        let j = letter.index;
        let phi1 = self.phi(first, j)?;
        let eps2 = self.eps(second, j)?;
        let on_first = match letter.kind {
            OpKind::Lower => phi1 > eps2,
            OpKind::Raise => phi1 >= eps2,
        };
        if on_first {
            Ok(self.apply(letter, first)?.map(|p| (p, second.clone())))
        } else {
            Ok(self.apply(letter, second)?.map(|p| (first.clone(), p)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Segment;
    use crate::rational::{q, qf};
    use crate::rootsys::fixtures::*;
    use crate::weight::Weight;

    #[test]
    fn a1_basic_operators() {
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let p = Path::straight(v.clone());
        assert_eq!(ops.eps(&p, 1).unwrap(), 0);
        assert_eq!(ops.phi(&p, 1).unwrap(), 1);
        assert_eq!(ops.eps(&p, 0).unwrap(), 1);
        assert_eq!(ops.phi(&p, 0).unwrap(), 0);
        assert_eq!(ops.f(&p, 1).unwrap(), Some(Path::straight(-&v)));
        assert_eq!(ops.f(&p, 0).unwrap(), None);
        assert_eq!(ops.e(&p, 0).unwrap(), Some(Path::straight(&(-&v) + d.delta())));
        assert_eq!(ops.e(&p, 1).unwrap(), None);
    }

    #[test]
    fn bent_path_in_finite_a1() {
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let lam = d.fundamental_level_zero(1).unwrap().scaled(q(2));
        let p = Path::straight(lam.clone());
        let bent = ops.f(&p, 1).unwrap().unwrap();
        let expect = Path::canonicalize(vec![Segment::new(-&lam, qf(1, 2)), Segment::new(lam.clone(), qf(1, 2))]).unwrap();
        assert_eq!(bent, expect);
        assert_eq!(bent.weight(), Weight::zero(2));
        let low = ops.f(&bent, 1).unwrap().unwrap();
        assert_eq!(low, Path::straight(-&lam));
        assert_eq!(ops.f(&low, 1).unwrap(), None);
        assert_eq!(ops.e(&bent, 1).unwrap(), Some(p));
    }

    #[test]
    fn weyl_action_on_straight_paths() {
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        let p = Path::straight(v.clone());
        assert_eq!(ops.weyl_act(&WeylWord::default(), &p).unwrap(), p);
        assert_eq!(ops.weyl_act(&WeylWord(vec![0, 1]), &p).unwrap(), Path::straight(&v - d.delta()));
        let d2 = algebra(a_affine(2));
        let ops2 = RootOperators::new(&d2);
        let v2 = d2.fundamental_level_zero(1).unwrap();
        for word in [vec![0], vec![1, 2], vec![0, 2, 1, 0], vec![2, 0, 1, 2, 0]] {
            let w = WeylWord(word);
            assert_eq!(ops2.weyl_act(&w, &Path::straight(v2.clone())).unwrap(), Path::straight(w.apply(&d2, &v2)));
        }
    }

    #[test]
    fn non_integral_paths_rejected() {
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let half = Path::straight(Weight::new(vec![qf(-1, 2), qf(1, 2)], q(0)));
        assert_eq!(ops.f(&half, 1), Err(Error::NonIntegralPath(1)));
        assert_eq!(ops.eps(&half, 0), Err(Error::NonIntegralPath(0)));
        assert_eq!(ops.f(&half, 7), Err(Error::BadIndex(7)));
    }

    #[test]
    fn words_parse_and_apply() {
        let w: OpWord = "f1 e0".parse().unwrap();
        assert_eq!(w.0, vec![OpLetter::f(1), OpLetter::e(0)]);
        assert_eq!(w.to_string(), "f1 e0");
        assert!("g1".parse::<OpWord>().is_err());
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let v = d.fundamental_level_zero(1).unwrap();
        // e0 first: −ϖ₁ + δ; then f1 is null on it (pairing −1).
        assert_eq!(ops.apply_word(&w, &Path::straight(v.clone())).unwrap(), None);
        let w2: OpWord = "e1 e0".parse().unwrap();
        assert_eq!(ops.apply_word(&w2, &Path::straight(v.clone())).unwrap(), Some(Path::straight(&v + d.delta())));
        assert_eq!(OpWord::default().then(OpLetter::f(1)).then(OpLetter::e(0)).to_string(), "e0 f1");
    }

    #[test]
    fn tensor_rule_example() {
        let d = algebra(a1_affine());
        let ops = RootOperators::new(&d);
        let l0 = Path::straight(d.fundamental_weight(0));
        let v = Path::straight(d.fundamental_level_zero(1).unwrap());
        let direct = ops.f(&l0.concat(&v), 1).unwrap().unwrap();
        let (a, b) = ops.tensor_rule(OpLetter::f(1), &l0, &v).unwrap().unwrap();
        assert_eq!(a, l0);
        assert_eq!(direct, a.concat(&b));
    }

    #[test]
    fn doubled_lowering_fault() {
        let d = algebra(a1_affine());
        let bad = RootOperators::with_fault(&d, Some(Fault::DoubledLowering));
        let v = d.fundamental_level_zero(1).unwrap();
        let p = bad.f(&Path::straight(v.clone()), 1).unwrap().unwrap();
        assert_eq!(p.weight(), -&v.scaled(q(2)));
    }
}
