//! Weights in fundamental-weight coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_q, serde_q, serde_q_vec, Q};

/// `λ = Σ_j m_j Λ_j + c δ`, stored as the pairings `m_j = λ(α_j^∨)` together
/// with the δ-coefficient `c`.
///
/// The derived ordering is lexicographic on `(pairings, delta)`; it is only a
/// canonical sort order, not a dominance order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    #[serde(with = "serde_q_vec")]
    pub pairings: Vec<Q>,
    #[serde(with = "serde_q")]
    pub delta: Q,
}

impl Weight {
    pub fn new(pairings: Vec<Q>, delta: Q) -> Self {
        Self { pairings, delta }
    }

    pub fn zero(rank: usize) -> Self {
        Self { pairings: vec![Q::zero(); rank], delta: Q::zero() }
    }

    pub fn from_ints(pairings: &[i64], delta: i64) -> Self {
        Self {
            pairings: pairings.iter().map(|&m| Q::from_integer(m)).collect(),
            delta: Q::from_integer(delta),
        }
    }

    pub fn rank(&self) -> usize {
        self.pairings.len()
    }

    /// `λ(α_j^∨)`.
    pub fn pairing(&self, j: usize) -> Q {
        self.pairings[j]
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero() && self.pairings.iter().all(Zero::is_zero)
    }

    /// Largest absolute value among all coordinates; the window norm used by
    /// orbit and root enumeration.
    pub fn max_abs(&self) -> Q {
        self.pairings
            .iter()
            .chain(std::iter::once(&self.delta))
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn scaled(&self, c: Q) -> Self {
        Self {
            pairings: self.pairings.iter().map(|x| x * c).collect(),
            delta: self.delta * c,
        }
    }

    /// Returns `c > 0` with `self = c · other`, if one exists.
    pub fn positive_multiple_of(&self, other: &Weight) -> Option<Q> {
        let mut ratio: Option<Q> = None;
        let coords = self.pairings.iter().chain(std::iter::once(&self.delta));
        let others = other.pairings.iter().chain(std::iter::once(&other.delta));
        for (a, b) in coords.zip(others) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = a / b;
                    if ratio.is_some_and(|c| c != r) {
                        return None;
                    }
                    ratio = Some(r);
                }
                _ => return None,
            }
        }
        ratio.filter(|c| c.is_positive())
    }

    /// `self(α_j^∨) ≥ 0` for every `j` in `indices`.
    pub fn is_dominant_on(&self, indices: &[usize]) -> bool {
        indices.iter().all(|&j| !self.pairings[j].is_negative())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, m) in self.pairings.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_q(m))?;
        }
        write!(f, "; {})", format_q(&self.delta))
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight {
            pairings: self.pairings.iter().zip(&rhs.pairings).map(|(a, b)| a + b).collect(),
            delta: self.delta + rhs.delta,
        }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.pairings.iter_mut().zip(&rhs.pairings) {
            *a += b;
        }
        self.delta += rhs.delta;
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight {
            pairings: self.pairings.iter().zip(&rhs.pairings).map(|(a, b)| a - b).collect(),
            delta: self.delta - rhs.delta,
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.pairings.iter_mut().zip(&rhs.pairings) {
            *a -= b;
        }
        self.delta -= rhs.delta;
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-Q::from_integer(1))
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Mul<&Weight> for Q {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scaled(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn collinearity() {
        let a = Weight::from_ints(&[1, -1], 0);
        let b = Weight::from_ints(&[2, -2], 0);
        assert_eq!(b.positive_multiple_of(&a), Some(q(2)));
        assert_eq!((-&b).positive_multiple_of(&a), None);
        let c = Weight::from_ints(&[2, -2], 1);
        assert_eq!(c.positive_multiple_of(&a), None);
        assert_eq!(Weight::zero(2).positive_multiple_of(&a), None);
    }

    #[test]
    fn json_shape() {
        let w = Weight::new(vec![q(-1), qf(1, 2)], q(3));
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"pairings":["-1","1/2"],"delta":"3"}"#);
        let back: Weight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
