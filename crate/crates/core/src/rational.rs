//! Exact rational scalars and the small amount of linear algebra over ℚ the
//! crate needs (row reduction, kernels, square solves).

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used for every coordinate, duration and cut.
pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(format!("decimal notation is not accepted: {s:?}"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num.parse().map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let d: i64 = den.parse().map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Q::new(n, d))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Serde adapter for a single rational as a `"p/q"` string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>` as a list of `"p/q"` strings.
pub mod serde_q_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : M x = 0}`.
pub fn kernel(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); cols];
            x[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[row][f];
            }
            x
        })
        .collect()
}

/// Solves the square system `M x = b`; `None` when `M` is singular.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n]).collect())
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction (positive scalar only).
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

pub fn abs_max(xs: impl IntoIterator<Item = Q>) -> Q {
    xs.into_iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

/// All rationals in the open interval (0, 1) whose reduced denominator is at
/// most `max_den`, in increasing order.
pub fn farey_interior(max_den: i64) -> Vec<Q> {
    let mut out: Vec<Q> = (2..=max_den.max(1))
        .flat_map(|d| (1..d).map(move |n| Q::new(n, d)))
        .collect();
    out.sort();
    out.dedup();
    out
}
