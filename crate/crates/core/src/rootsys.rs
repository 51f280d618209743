//! Affine Cartan data: marks and comarks, the null root, level-zero
//! fundamental weights, the normalized invariant form, the classical
//! projection and windowed real-root enumeration.
//!
//! Conventions: `cartan[i][j] = α_j(α_i^∨)`, so column `j` holds the pairings
//! of `α_j`. Marks `a` satisfy `A a = 0` (δ pairs to zero with every coroot);
//! comarks `a^∨` satisfy `a^∨ A = 0` (the central element). The symmetrizers
//! are `d_i = a_i^∨ / a_i = (α_i, α_i) / 2`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, q, serde_q_vec, Q};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Checks the generalized-Cartan-matrix axioms.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::NotGcm("empty matrix".into()));
        }
        if let Some(row) = entries.iter().position(|r| r.len() != n) {
            return Err(Error::NotGcm(format!("row {row} has the wrong length")));
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(Error::NotGcm(format!("diagonal entry ({i},{i}) is not 2")));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(Error::NotGcm(format!("entry ({i},{j}) is positive")));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::NotGcm(format!(
                        "entries ({i},{j}) and ({j},{i}) are not simultaneously zero"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `α_j(α_i^∨)`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn as_q(&self) -> Vec<Vec<Q>> {
        self.entries.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn transpose_q(&self) -> Vec<Vec<Q>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| q(self.entries[j][i])).collect()).collect()
    }
}

/// On-disk description of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub cartan: Vec<Vec<i64>>,
    #[serde(default)]
    pub special_vertex: usize,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<AffineData> {
        AffineData::new(CartanMatrix::new(self.cartan.clone())?, self.special_vertex)
    }
}

/// Validated affine Cartan datum with all derived quantities precomputed.
#[derive(Debug, Clone)]
pub struct AffineData {
    cartan: CartanMatrix,
    special: usize,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    symmetrizers: Vec<Q>,
    simple_roots: Vec<Weight>,
    delta: Weight,
    fundamental: Vec<Option<Weight>>,
}

/// Builds the affine datum for `cartan` with special vertex 0.
pub fn validate_affine(cartan: CartanMatrix) -> Result<AffineData> {
    AffineData::new(cartan, 0)
}

fn positive_kernel_vector(m: &[Vec<Q>], what: &str) -> Result<Vec<i64>> {
    let ker = rational::kernel(m);
    if ker.len() != 1 {
        return Err(Error::NotAffine(format!("{what} kernel has dimension {}", ker.len())));
    }
    let mut v = rational::primitive_integer(&ker[0]);
    if v.iter().all(|&x| x <= 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x <= 0) {
        return Err(Error::NotAffine(format!("{what} kernel vector {v:?} is not positive")));
    }
    Ok(v)
}

impl AffineData {
    pub fn new(cartan: CartanMatrix, special: usize) -> Result<Self> {
        let n = cartan.size();
        if special >= n {
            return Err(Error::BadIndex(special));
        }
        let marks = positive_kernel_vector(&cartan.as_q(), "right")?;
        let comarks = positive_kernel_vector(&cartan.transpose_q(), "left")?;
        let symmetrizers: Vec<Q> = (0..n).map(|i| Q::new(comarks[i], marks[i])).collect();
        for i in 0..n {
            for j in 0..n {
                if symmetrizers[i] * q(cartan.get(i, j)) != symmetrizers[j] * q(cartan.get(j, i)) {
                    return Err(Error::NotSymmetrizable(format!(
                        "d_{i} a_{i}{j} != d_{j} a_{j}{i} with d from marks/comarks"
                    )));
                }
            }
        }
        let simple_roots: Vec<Weight> = (0..n)
            .map(|j| Weight {
                pairings: (0..n).map(|i| q(cartan.get(i, j))).collect(),
                delta: if j == special { Q::new(1, marks[special]) } else { Q::zero() },
            })
            .collect();
        let mut delta = Weight::zero(n);
        for (j, a) in marks.iter().enumerate() {
            delta += &simple_roots[j].scaled(q(*a));
        }
        let mut data = Self {
            cartan,
            special,
            marks,
            comarks,
            symmetrizers,
            simple_roots,
            delta,
            fundamental: vec![None; n],
        };
        for i in data.nonspecial() {
            data.fundamental[i] = Some(data.solve_fundamental(i)?);
        }
        Ok(data)
    }

    pub fn spec(&self) -> AlgebraSpec {
        AlgebraSpec { cartan: self.cartan.rows().to_vec(), special_vertex: self.special }
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// Number of simple roots, `|I|`.
    pub fn rank(&self) -> usize {
        self.cartan.size()
    }

    pub fn special_vertex(&self) -> usize {
        self.special
    }

    /// `I₀ = I \ {special vertex}`.
    pub fn nonspecial(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| i != self.special).collect()
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.rank()).collect()
    }

    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn symmetrizers(&self) -> &[Q] {
        &self.symmetrizers
    }

    pub fn simple_root(&self, j: usize) -> &Weight {
        &self.simple_roots[j]
    }

    pub fn delta(&self) -> &Weight {
        &self.delta
    }

    /// `Λ_j`: pairing 1 with `α_j^∨`, 0 elsewhere, no δ part.
    pub fn fundamental_weight(&self, j: usize) -> Weight {
        let mut w = Weight::zero(self.rank());
        w.pairings[j] = Q::one();
        w
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            Err(Error::BadIndex(i))
        } else {
            Ok(())
        }
    }

    /// The level-zero fundamental weight `ϖ_i`, `i ∈ I₀`.
    pub fn fundamental_level_zero(&self, i: usize) -> Result<Weight> {
        self.check_index(i)?;
        self.fundamental[i].clone().ok_or(Error::BadIndex(i))
    }

    // ϖ_i lies in span{α_j : j ∈ I₀} and pairs as δ_ij there.
    fn solve_fundamental(&self, i: usize) -> Result<Weight> {
        let idx = self.nonspecial();
        let sub: Vec<Vec<Q>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| q(self.cartan.get(r, c))).collect())
            .collect();
        let rhs: Vec<Q> = idx.iter().map(|&r| if r == i { Q::one() } else { Q::zero() }).collect();
        let y = rational::solve(&sub, &rhs)
            .ok_or_else(|| Error::NotAffine("finite part of the Cartan matrix is singular".into()))?;
        let mut coords = vec![Q::zero(); self.rank()];
        for (k, &j) in idx.iter().enumerate() {
            coords[j] = y[k];
        }
        Ok(self.from_root_coordinates(&coords))
    }

    /// `Σ_j y_j α_j`.
    pub fn from_root_coordinates(&self, coords: &[Q]) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (j, y) in coords.iter().enumerate() {
            if !y.is_zero() {
                w += &self.simple_roots[j].scaled(*y);
            }
        }
        w
    }

    fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: w.rank() });
        }
        Ok(())
    }

    /// `λ(c) = Σ_j a_j^∨ λ(α_j^∨)`.
    pub fn level(&self, w: &Weight) -> Q {
        w.pairings.iter().zip(&self.comarks).map(|(m, a)| m * q(*a)).sum()
    }

    /// Writes `λ = x Λ_s + Σ_j y_j α_j` (s the special vertex); returns `(x, y)`.
    pub fn root_decomposition(&self, w: &Weight) -> Result<(Q, Vec<Q>)> {
        self.check_rank(w)?;
        let s = self.special;
        let x = self.level(w) / q(self.comarks[s]);
        let mut rest = w.clone();
        rest.pairings[s] -= x;
        let y_s = q(self.marks[s]) * rest.delta;
        let idx = self.nonspecial();
        let sub: Vec<Vec<Q>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| q(self.cartan.get(r, c))).collect())
            .collect();
        let rhs: Vec<Q> = idx.iter().map(|&r| rest.pairings[r] - q(self.cartan.get(r, s)) * y_s).collect();
        let sol = rational::solve(&sub, &rhs)
            .ok_or_else(|| Error::UnsupportedWeight(format!("{w}")))?;
        let mut y = vec![Q::zero(); self.rank()];
        y[s] = y_s;
        for (k, &j) in idx.iter().enumerate() {
            y[j] = sol[k];
        }
        let check: Q = (0..self.rank()).map(|c| q(self.cartan.get(s, c)) * y[c]).sum();
        if check != rest.pairings[s] {
            return Err(Error::UnsupportedWeight(format!("{w}")));
        }
        Ok((x, y))
    }

    /// The invariant form normalized by `(α_i, α_j) = d_i a_ij`, extended to
    /// `span{α_j} ⊕ ℚΛ_s` by `(Λ_s, Λ_s) = 0`.
    pub fn bilinear(&self, a: &Weight, b: &Weight) -> Result<Q> {
        self.check_rank(b)?;
        let (x, y) = self.root_decomposition(a)?;
        let (_, y_b) = self.root_decomposition(b)?;
        let s = self.special;
        let mut acc = x * y_b[s] * self.symmetrizers[s];
        for j in 0..self.rank() {
            acc += y[j] * self.symmetrizers[j] * b.pairings[j];
        }
        Ok(acc)
    }

    /// Gram matrix `(α_i, α_j)`.
    pub fn gram(&self) -> Vec<Vec<Q>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.symmetrizers[i] * q(self.cartan.get(i, j))).collect())
            .collect()
    }

    /// `cl : h*_0 → h*_0 / ℚδ`; defined on level-zero weights.
    pub fn classical_projection(&self, w: &Weight) -> Result<ClassicalWeight> {
        self.check_rank(w)?;
        if !self.level(w).is_zero() {
            return Err(Error::NotInH0Star);
        }
        Ok(ClassicalWeight(Weight { pairings: w.pairings.clone(), delta: Q::zero() }))
    }

    /// `(cl λ, cl λ)`.
    pub fn cl_norm(&self, w: &Weight) -> Result<Q> {
        let c = self.classical_projection(w)?;
        self.bilinear(&c.0, &c.0)
    }

    /// `r_j λ = λ − λ(α_j^∨) α_j`.
    pub fn reflect(&self, w: &Weight, j: usize) -> Weight {
        let m = w.pairings[j];
        if m.is_zero() {
            return w.clone();
        }
        w - &self.simple_roots[j].scaled(m)
    }

    /// Real roots `w α_i` (w in the subgroup generated by `indices`, i in
    /// `indices`) whose coordinates stay within `bound`, closed under the
    /// simple reflections in `indices` inside the window.
    pub fn real_roots(&self, indices: &[usize], bound: i64) -> RootWindow {
        let n = self.rank();
        let limit = q(bound);
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut roots = Vec::new();
        for &i in indices {
            let mut coords = vec![0; n];
            coords[i] = 1;
            let root = RealRoot::from_parts(self, coords.clone(), coords);
            if root.weight.max_abs() <= limit && seen.insert(root.coords.clone()) {
                queue.push_back(root);
            }
        }
        while let Some(root) = queue.pop_front() {
            for &j in indices {
                let r = root.reflect(self, j);
                if r.weight.max_abs() <= limit && seen.insert(r.coords.clone()) {
                    queue.push_back(r);
                }
            }
            roots.push(root);
        }
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.coords.cmp(&b.coords)));
        RootWindow { bound, indices: indices.to_vec(), roots }
    }

    /// Real roots of the whole algebra inside the coordinate window.
    pub fn real_roots_window(&self, bound: i64) -> RootWindow {
        self.real_roots(&self.all_indices(), bound)
    }

    /// `ϖ_i(β^∨) ∈ {−1, 0, 1}` for every real root in a window wide enough to
    /// contain every classical root class.
    pub fn is_minuscule(&self, i: usize) -> Result<bool> {
        let w = self.fundamental_level_zero(i)?;
        let bound = self.minuscule_probe_bound();
        Ok(self
            .real_roots_window(bound)
            .roots
            .iter()
            .all(|b| b.pair(&w).abs() <= Q::one()))
    }

    fn minuscule_probe_bound(&self) -> i64 {
        let entry = self.cartan.rows().iter().flatten().map(|x| x.abs()).max().unwrap_or(2);
        let mark = *self.marks.iter().max().unwrap_or(&1);
        entry.max(2) * mark * 2 + 2
    }
}

/// A class in `h*_0 / ℚδ`, represented with δ-coefficient zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassicalWeight(pub Weight);

/// A real root `β = w α_i` together with its coroot `β^∨ = w α_i^∨`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealRoot {
    /// Coefficients on the simple roots.
    pub coords: Vec<i64>,
    /// Coefficients on the simple coroots.
    pub coroot: Vec<i64>,
    pub weight: Weight,
}

impl RealRoot {
    fn from_parts(data: &AffineData, coords: Vec<i64>, coroot: Vec<i64>) -> Self {
        let cq: Vec<Q> = coords.iter().map(|&c| q(c)).collect();
        let weight = data.from_root_coordinates(&cq);
        Self { coords, coroot, weight }
    }

    fn reflect(&self, data: &AffineData, j: usize) -> Self {
        // β(α_j^∨) and α_j(β^∨)
        let b_on_j: i64 = (0..data.rank()).map(|k| data.cartan.get(j, k) * self.coords[k]).sum();
        let j_on_b: i64 = (0..data.rank()).map(|k| self.coroot[k] * data.cartan.get(k, j)).sum();
        let mut coords = self.coords.clone();
        coords[j] -= b_on_j;
        let mut coroot = self.coroot.clone();
        coroot[j] -= j_on_b;
        Self::from_parts(data, coords, coroot)
    }

    /// `λ(β^∨)` through the coroot coordinates.
    pub fn pair(&self, w: &Weight) -> Q {
        self.coroot.iter().zip(&w.pairings).map(|(k, m)| q(*k) * m).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootWindow {
    pub bound: i64,
    pub indices: Vec<usize>,
    pub roots: Vec<RealRoot>,
}

impl RootWindow {
    pub fn positive(&self) -> impl Iterator<Item = &RealRoot> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        self.roots.iter().any(|r| r.coords == coords)
    }

    pub fn coordinate_set(&self) -> BTreeSet<Vec<i64>> {
        self.roots.iter().map(|r| r.coords.clone()).collect()
    }
}

/// Serialized summary of an algebra for `levelzero algebra`.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub cartan: Vec<Vec<i64>>,
    pub special_vertex: usize,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    #[serde(with = "serde_q_vec")]
    pub symmetrizers: Vec<Q>,
    pub delta: Weight,
    pub simple_roots: Vec<Weight>,
    pub level_zero_fundamental: Vec<IndexedWeight>,
    pub gram: Vec<GramRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexedWeight {
    pub index: usize,
    pub weight: Weight,
    #[serde(with = "crate::rational::serde_q")]
    pub norm: Q,
    pub minuscule: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct GramRow(#[serde(with = "serde_q_vec")] pub Vec<Q>);

impl AffineData {
    pub fn summary(&self) -> Result<AlgebraSummary> {
        let mut fundamental = Vec::new();
        for i in self.nonspecial() {
            let w = self.fundamental_level_zero(i)?;
            fundamental.push(IndexedWeight {
                index: i,
                norm: self.bilinear(&w, &w)?,
                minuscule: self.is_minuscule(i)?,
                weight: w,
            });
        }
        Ok(AlgebraSummary {
            cartan: self.cartan.rows().to_vec(),
            special_vertex: self.special,
            marks: self.marks.clone(),
            comarks: self.comarks.clone(),
            symmetrizers: self.symmetrizers.clone(),
            delta: self.delta.clone(),
            simple_roots: self.simple_roots.clone(),
            level_zero_fundamental: fundamental,
            gram: self.gram().into_iter().map(GramRow).collect(),
        })
    }
}

/// Cartan matrices of untwisted affine types used by tests, benches and the
/// bundled configurations.
pub mod fixtures {
    use super::*;

    pub fn a1_affine() -> Vec<Vec<i64>> {
        vec![vec![2, -2], vec![-2, 2]]
    }

    /// `A_n^(1)` for `n ≥ 2`: the cyclic matrix.
    pub fn a_affine(n: usize) -> Vec<Vec<i64>> {
        if n == 1 {
            return a1_affine();
        }
        let size = n + 1;
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if i == j {
                            2
                        } else if (i + 1) % size == j || (j + 1) % size == i {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `C_2^(1)`: 0 ⇒ 1 ⇐ 2 with α_0, α_2 long.
    pub fn c2_affine() -> Vec<Vec<i64>> {
        vec![vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]]
    }

    /// `D_4^(1)` with the central node 2.
    pub fn d4_affine() -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for leaf in [0, 1, 3, 4] {
            m[leaf][2] = -1;
            m[2][leaf] = -1;
        }
        m
    }

    /// `G_2^(1)`: 0 - 1 ⇛ 2 with α_2 short.
    pub fn g2_affine() -> Vec<Vec<i64>> {
        vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -3, 2]]
    }

    pub fn algebra(cartan: Vec<Vec<i64>>) -> AffineData {
        AffineData::new(CartanMatrix::new(cartan).expect("fixture is a GCM"), 0)
            .expect("fixture is affine")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::qf;

    fn w(p: &[i64], d: i64) -> Weight {
        Weight::from_ints(p, d)
    }

    // Independent check: marks must satisfy A a = 0 and comarks a^∨ A = 0.
    fn kernel_oracle(data: &AffineData) {
        let n = data.rank();
        for i in 0..n {
            let row: i64 = (0..n).map(|j| data.cartan().get(i, j) * data.marks()[j]).sum();
            assert_eq!(row, 0, "A a = 0 fails in row {i}");
            let col: i64 = (0..n).map(|j| data.comarks()[j] * data.cartan().get(j, i)).sum();
            assert_eq!(col, 0, "a^∨ A = 0 fails in column {i}");
        }
    }

    #[test]
    fn a1_marks_and_delta() {
        let d = algebra(a1_affine());
        assert_eq!(d.marks(), &[1, 1]);
        assert_eq!(d.comarks(), &[1, 1]);
        kernel_oracle(&d);
        // δ = α₀ + α₁ pairs to zero everywhere and has δ-coefficient 1.
        assert_eq!(d.delta(), &w(&[0, 0], 1));
        let sum = d.simple_root(0) + d.simple_root(1);
        assert_eq!(&sum, d.delta());
    }

    #[test]
    fn a2_marks() {
        let d = algebra(a_affine(2));
        assert_eq!(d.marks(), &[1, 1, 1]);
        kernel_oracle(&d);
    }

    #[test]
    fn non_simply_laced_marks() {
        let c = algebra(c2_affine());
        assert_eq!(c.marks(), &[1, 2, 1]);
        assert_eq!(c.comarks(), &[1, 1, 1]);
        assert_eq!(c.symmetrizers(), &[q(1), qf(1, 2), q(1)]);
        kernel_oracle(&c);
        let g = algebra(g2_affine());
        assert_eq!(g.marks(), &[1, 2, 3]);
        assert_eq!(g.comarks(), &[1, 2, 1]);
        kernel_oracle(&g);
        let dd = algebra(d4_affine());
        assert_eq!(dd.marks(), &[1, 1, 2, 1, 1]);
        kernel_oracle(&dd);
    }

    #[test]
    fn rejects_finite_and_bad_matrices() {
        let fin = CartanMatrix::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert!(matches!(validate_affine(fin), Err(Error::NotAffine(_))));
        assert!(matches!(CartanMatrix::new(vec![vec![2, 1], vec![1, 2]]), Err(Error::NotGcm(_))));
        assert!(matches!(CartanMatrix::new(vec![vec![2, 0], vec![-1, 2]]), Err(Error::NotGcm(_))));
        assert!(matches!(CartanMatrix::new(vec![vec![3]]), Err(Error::NotGcm(_))));
        // Hyperbolic: det < 0, zero kernel.
        let hyp = CartanMatrix::new(vec![vec![2, -3], vec![-3, 2]]).unwrap();
        assert!(matches!(validate_affine(hyp), Err(Error::NotAffine(_))));
        // Decomposable A1^(1) ⊕ A1^(1) has a 2-dimensional kernel.
        let mut m = vec![vec![0; 4]; 4];
        for b in [0, 2] {
            m[b][b] = 2;
            m[b + 1][b + 1] = 2;
            m[b][b + 1] = -2;
            m[b + 1][b] = -2;
        }
        assert!(matches!(validate_affine(CartanMatrix::new(m).unwrap()), Err(Error::NotAffine(_))));
    }

    #[test]
    fn level_zero_fundamental_weights() {
        let a1 = algebra(a1_affine());
        let v1 = a1.fundamental_level_zero(1).unwrap();
        assert_eq!(v1, w(&[-1, 1], 0));
        assert_eq!(v1, a1.simple_root(1).scaled(qf(1, 2)));
        assert!(a1.fundamental_level_zero(0).is_err());

        let a2 = algebra(a_affine(2));
        let v1 = a2.fundamental_level_zero(1).unwrap();
        assert_eq!(v1, w(&[-1, 1, 0], 0));
        let expect = a2.from_root_coordinates(&[q(0), qf(2, 3), qf(1, 3)]);
        assert_eq!(v1, expect);

        for cartan in [a_affine(3), c2_affine(), d4_affine(), g2_affine()] {
            let d = algebra(cartan);
            for i in d.nonspecial() {
                let v = d.fundamental_level_zero(i).unwrap();
                assert!(d.level(&v).is_zero());
                for j in d.nonspecial() {
                    assert_eq!(v.pairing(j), if i == j { q(1) } else { q(0) });
                }
                // Round trip through root coordinates.
                let (x, y) = d.root_decomposition(&v).unwrap();
                assert!(x.is_zero());
                assert!(y[d.special_vertex()].is_zero());
                assert_eq!(d.from_root_coordinates(&y), v);
            }
        }
    }

    #[test]
    fn bilinear_values() {
        let a1 = algebra(a1_affine());
        let v = a1.fundamental_level_zero(1).unwrap();
        assert_eq!(a1.bilinear(&v, &v).unwrap(), qf(1, 2));
        let a2 = algebra(a_affine(2));
        let v = a2.fundamental_level_zero(1).unwrap();
        assert_eq!(a2.bilinear(&v, &v).unwrap(), qf(2, 3));
        for d in [a1, a2, algebra(c2_affine()), algebra(g2_affine())] {
            let delta = d.delta().clone();
            assert!(d.bilinear(&delta, &delta).unwrap().is_zero());
            let gram = d.gram();
            for i in 0..d.rank() {
                for j in 0..d.rank() {
                    let b = d.bilinear(d.simple_root(i), d.simple_root(j)).unwrap();
                    assert_eq!(b, gram[i][j]);
                    assert_eq!(gram[i][j], gram[j][i]);
                }
                // (Λ_0, α_j) = d_0 δ_{j0}
                let l0 = d.fundamental_weight(0);
                let expect = if i == 0 { d.symmetrizers()[0] } else { Q::zero() };
                assert_eq!(d.bilinear(&l0, d.simple_root(i)).unwrap(), expect);
                assert!(d.bilinear(&l0, &l0).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn classical_projection() {
        let a1 = algebra(a1_affine());
        let v = a1.fundamental_level_zero(1).unwrap();
        let shifted = &v + &a1.delta().scaled(q(3));
        assert_eq!(a1.classical_projection(&shifted).unwrap(), a1.classical_projection(&v).unwrap());
        for n in -3..=3 {
            let s = &v + &a1.delta().scaled(q(n));
            assert_eq!(a1.cl_norm(&s).unwrap(), qf(1, 2));
        }
        // cl(α₀) = cl(−α₁) since δ = α₀ + α₁.
        assert_eq!(
            a1.classical_projection(a1.simple_root(0)).unwrap(),
            a1.classical_projection(&-a1.simple_root(1)).unwrap()
        );
        let c2 = algebra(c2_affine());
        let rhs = c2.from_root_coordinates(&[q(0), q(-2), q(-1)]);
        assert_eq!(
            c2.classical_projection(c2.simple_root(0)).unwrap(),
            c2.classical_projection(&rhs).unwrap()
        );
        assert_eq!(a1.classical_projection(&a1.fundamental_weight(0)), Err(Error::NotInH0Star));
    }

    #[test]
    fn a1_root_window() {
        let a1 = algebra(a1_affine());
        let win = a1.real_roots_window(3);
        let set = win.coordinate_set();
        for c in [[0, 1], [0, -1], [1, 0], [-1, 0], [1, 2], [-1, -2], [2, 1]] {
            assert!(set.contains(&c.to_vec()), "missing {c:?}");
        }
        assert!(!set.contains(&vec![1, 1]), "δ is imaginary");
        assert!(a1.real_roots_window(1).roots.is_empty());
    }

    #[test]
    fn roots_have_positive_norm_and_closed_window() {
        for cartan in [a1_affine(), a_affine(2), c2_affine(), g2_affine()] {
            let d = algebra(cartan);
            let bound = 6;
            let win = d.real_roots_window(bound);
            let set = win.coordinate_set();
            for b in &win.roots {
                let norm = d.bilinear(&b.weight, &b.weight).unwrap();
                assert!(norm > Q::zero());
                for j in 0..d.rank() {
                    let r = b.reflect(&d, j);
                    if r.weight.max_abs() <= q(bound) {
                        assert!(set.contains(&r.coords));
                    }
                }
            }
        }
    }

    #[test]
    fn coroot_pairing_two_ways() {
        for cartan in [a1_affine(), a_affine(2), a_affine(3), c2_affine(), g2_affine(), d4_affine()] {
            let d = algebra(cartan);
            let win = d.real_roots_window(5);
            let mut probes: Vec<Weight> = d.nonspecial().iter().map(|&i| d.fundamental_level_zero(i).unwrap()).collect();
            probes.push(d.fundamental_weight(0));
            probes.push(d.simple_root(1).clone());
            for b in &win.roots {
                let norm = d.bilinear(&b.weight, &b.weight).unwrap();
                for lam in &probes {
                    let via_form = q(2) * d.bilinear(lam, &b.weight).unwrap() / norm;
                    assert_eq!(b.pair(lam), via_form);
                }
            }
        }
    }

    #[test]
    fn minuscule_detection() {
        for n in 1..=3 {
            let d = algebra(a_affine(n));
            for i in d.nonspecial() {
                assert!(d.is_minuscule(i).unwrap());
                let v = d.fundamental_level_zero(i).unwrap();
                for b in d.real_roots_window(6).roots {
                    assert!(b.pair(&v).abs() <= Q::one());
                }
            }
        }
        let c2 = algebra(c2_affine());
        // ϖ_1 sits on the short node (vector representation of sp_4);
        // ϖ_2 pairs to 2 with a short coroot.
        assert!(c2.is_minuscule(1).unwrap());
        assert!(!c2.is_minuscule(2).unwrap());
    }

    #[test]
    fn special_vertex_other_than_zero() {
        let d = AffineData::new(CartanMatrix::new(a_affine(2)).unwrap(), 2).unwrap();
        assert_eq!(d.nonspecial(), vec![0, 1]);
        let v = d.fundamental_level_zero(0).unwrap();
        assert_eq!(v, w(&[1, 0, -1], 0));
        assert_eq!(d.bilinear(&v, &v).unwrap(), qf(2, 3));
    }
}
