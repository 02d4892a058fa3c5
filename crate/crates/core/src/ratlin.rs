//! Exact linear algebra over ℚ: matrices, subspaces in reduced row echelon
//! form, flags, and seeded generic flags.

use crate::error::{Error, Result};
use crate::rat::{self, Point, Rat};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Default number of random draws allowed per step of a generic construction.
pub const DEFAULT_ATTEMPTS: usize = 64;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatMatrix {
    #[serde(with = "rat::serde_rat::vec2")]
    rows: Vec<Point>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Point>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let n = first.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
            }
        }
        Ok(RatMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        RatMatrix { rows }
    }

    pub fn rows(&self) -> &[Point] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows).0.len()
    }

    pub fn transpose(&self) -> RatMatrix {
        let (m, n) = (self.nrows(), self.ncols());
        let rows = (0..n).map(|j| (0..m).map(|i| self.rows[i][j].clone()).collect()).collect();
        RatMatrix { rows }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[Rat]) -> Point {
        let n = self.ncols();
        let mut out = vec![Rat::zero(); n];
        for (xi, row) in x.iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[Rat]) -> Point {
        self.rows.iter().map(|row| rat::dot(row, x)).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix { rows: self.rows.iter().map(|r| other.apply_row(r)).collect() }
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.nrows();
        if self.ncols() != n {
            return None;
        }
        let mut aug: Vec<Point> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        let (red, pivots) = rref(&aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        aug = red;
        Some(RatMatrix { rows: aug.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Point> {
        kernel_of_rows(&self.rows, self.ncols())
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Point]) -> (Vec<Point>, Vec<usize>) {
    let mut m: Vec<Point> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : row · x = 0 for every row}` in `ℚ^ncols`.
pub fn kernel_of_rows(rows: &[Point], ncols: usize) -> Vec<Point> {
    let (red, pivots) = rref(rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Point]) -> usize {
    rref(rows).0.len()
}

/// A linear subspace of `ℚ^ambient`, stored by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Point>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, RatMatrix::identity(ambient).rows).expect("identity rows")
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Point>) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, got: bad.len() });
        }
        let (basis, pivots) = rref(&vectors);
        Ok(Subspace { ambient, basis, pivots })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, v)
    }

    /// Orthogonal complement for the standard pairing, i.e. the annihilator.
    pub fn annihilator(&self) -> Subspace {
        let k = kernel_of_rows(&self.basis, self.ambient);
        Subspace::span(self.ambient, k).expect("kernel vectors have ambient length")
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut rows = self.annihilator().basis;
        rows.extend(other.annihilator().basis);
        Subspace::span(self.ambient, kernel_of_rows(&rows, self.ambient))
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the RREF basis, `None` if `v` is outside.
    pub fn coords(&self, v: &[Rat]) -> Option<Point> {
        if v.len() != self.ambient {
            return None;
        }
        let c: Point = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.from_coords(&c);
        (back == v).then_some(c)
    }

    pub fn from_coords(&self, c: &[Rat]) -> Point {
        let mut out = vec![Rat::zero(); self.ambient];
        for (ci, row) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += ci * x;
            }
        }
        out
    }

    /// Image under the linear map `x ↦ M x` (column convention, `M` is `m × ambient`).
    pub fn image(&self, m: &RatMatrix) -> Result<Subspace> {
        if m.ncols() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: m.ncols() });
        }
        Subspace::span(m.nrows(), self.basis.iter().map(|v| m.apply(v)).collect())
    }

    /// `dim(self + other) = min(ambient, dim self + dim other)`, equivalently
    /// `dim(self ∩ other) = max(0, dim self + dim other - ambient)`.
    pub fn is_transverse_to(&self, other: &Subspace) -> bool {
        let s = self.sum(other).map(|s| s.dim()).unwrap_or(usize::MAX);
        s == (self.dim() + other.dim()).min(self.ambient)
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rat::serde_rat::vec2::serialize(&self.basis, s)
    }
}

/// A strictly increasing chain of subspaces of a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    parts: Vec<Subspace>,
}

impl Flag {
    pub fn new(parts: Vec<Subspace>) -> Result<Self> {
        for w in parts.windows(2) {
            w[0].check(&w[1])?;
            if !(w[1].contains_subspace(&w[0]) && w[1].dim() > w[0].dim()) {
                return Err(Error::invalid("flag members must be strictly increasing"));
            }
        }
        if parts.first().is_some_and(Subspace::is_zero) {
            return Err(Error::invalid("flag members must be nonzero"));
        }
        Ok(Flag { parts })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(Subspace::dim).collect()
    }

    pub fn is_complete(&self) -> bool {
        let amb = self.parts.first().map_or(0, Subspace::ambient);
        self.dims() == (1..=amb).collect::<Vec<_>>()
    }
}

pub fn rank_of_sum(spaces: &[Subspace]) -> usize {
    let rows: Vec<Point> = spaces.iter().flat_map(|s| s.basis.iter().cloned()).collect();
    rank(&rows)
}

/// All distinct sums `Σ_{α ∈ S} E_α` over subsets `S`, excluding the zero space.
pub fn subset_sums(arrangement: &[Subspace]) -> Vec<Subspace> {
    let Some(first) = arrangement.first() else { return Vec::new() };
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    seen.insert(Subspace::zero(first.ambient));
    for e in arrangement {
        let next: Vec<Subspace> = seen.iter().filter_map(|s| s.sum(e).ok()).collect();
        seen.extend(next);
    }
    seen.into_iter().filter(|s| !s.is_zero()).collect()
}

/// Draws a complete flag `W_1 ⊊ … ⊊ W_r` of `ℚ^r` transverse to every subset
/// sum of the arrangement.
pub fn generic_flag(arrangement: &[Subspace], r: usize, seed: u64) -> Result<Flag> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generic_flag_with(arrangement, r, &mut rng, DEFAULT_ATTEMPTS)
}

pub fn generic_flag_with(
    arrangement: &[Subspace],
    r: usize,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Result<Flag> {
    if let Some(bad) = arrangement.iter().find(|s| s.ambient != r) {
        return Err(Error::DimensionMismatch { expected: r, got: bad.ambient });
    }
    let sums = subset_sums(arrangement);
    let mut parts: Vec<Subspace> = Vec::with_capacity(r);
    let mut current = Subspace::zero(r);
    for step in 1..=r {
        let mut found = None;
        for _ in 0..attempts {
            let v: Point = (0..r).map(|_| rat::random_rat(rng, 9, 4)).collect();
            let cand = current.sum(&Subspace::span(r, vec![v])?)?;
            if cand.dim() == step && sums.iter().all(|s| cand.is_transverse_to(s)) {
                found = Some(cand);
                break;
            }
        }
        match found {
            Some(w) => {
                current = w.clone();
                parts.push(w);
            }
            None => {
                return Err(Error::GenericityExhausted {
                    attempts,
                    what: format!("generic flag member W_{step} in dimension {r}"),
                })
            }
        }
    }
    Flag::new(parts)
}

/// Splits a flag `F_1 ⊊ … ⊊ F_k = ℚ^r` into `V_1 ⊕ … ⊕ V_k` with
/// `F_i = V_1 ⊕ … ⊕ V_i`, taking `V_i = W_{r - dim F_{i-1}} ∩ F_i`.
pub fn compatible_decomposition(f: &Flag, w: &Flag) -> Result<Vec<Subspace>> {
    let Some(first) = f.parts.first() else { return Ok(Vec::new()) };
    let r = first.ambient;
    if !w.is_complete() || w.parts[0].ambient != r {
        return Err(Error::invalid("w must be a complete flag of the same ambient space"));
    }
    let mut out = vec![first.clone()];
    for i in 1..f.parts.len() {
        let prev = &f.parts[i - 1];
        let fi = &f.parts[i];
        let wj = &w.parts[r - prev.dim() - 1];
        let vi = wj.intersect(fi)?;
        let meets_prev = !vi.intersect(prev)?.is_zero();
        if vi.dim() != fi.dim() - prev.dim() || meets_prev {
            return Err(Error::precondition(format!(
                "w is not transverse to flag member F_{}",
                i + 1
            )));
        }
        out.push(vi);
    }
    Ok(out)
}

/// Coordinates with respect to a direct sum decomposition `V_1 ⊕ … ⊕ V_k = ℚ^r`:
/// the block of coordinates for each summand in its RREF basis.
pub struct Decomposition {
    blocks: Vec<Subspace>,
    inv: RatMatrix,
    offsets: Vec<usize>,
}

impl Decomposition {
    pub fn new(blocks: Vec<Subspace>) -> Result<Self> {
        let r = blocks.first().map_or(0, Subspace::ambient);
        let rows: Vec<Point> = blocks.iter().flat_map(|b| b.basis.iter().cloned()).collect();
        let m = RatMatrix::from_rows(rows)?;
        let inv = m
            .inverse()
            .filter(|_| m.nrows() == r)
            .ok_or_else(|| Error::precondition("summands do not form a direct sum decomposition"))?;
        let mut offsets = vec![0];
        for b in &blocks {
            offsets.push(offsets.last().unwrap() + b.dim());
        }
        Ok(Decomposition { blocks, inv, offsets })
    }

    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    /// Coordinates of the projection of `v` onto summand `i` along the others.
    pub fn project(&self, i: usize, v: &[Rat]) -> Point {
        let c = self.inv.apply_row(v);
        c[self.offsets[i]..self.offsets[i + 1]].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::point;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span(v.len(), vec![point(v)]).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let rows = vec![point(&[1, 2, 3]), point(&[2, 4, 6]), point(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let k = kernel_of_rows(&rows, 3);
        assert_eq!(k.len(), 1);
        for r in &rows {
            assert!(rat::dot(r, &k[0]).is_zero());
        }
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::span(3, vec![point(&[1, 0, 0]), point(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(3, vec![point(&[0, 1, 0]), point(&[0, 0, 1])]).unwrap();
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
        assert_eq!(a.intersect(&b).unwrap(), line(&[0, 1, 0]));
        assert!(a.sum(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_rows(vec![point(&[2, 1]), point(&[1, 1])]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        let s = RatMatrix::from_rows(vec![point(&[1, 2]), point(&[2, 4])]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn compatible_decomposition_of_coordinate_flag() {
        let f = Flag::new(vec![line(&[1, 0]), Subspace::full(2)]).unwrap();
        let w = Flag::new(vec![line(&[1, 1]), Subspace::full(2)]).unwrap();
        let v = compatible_decomposition(&f, &w).unwrap();
        assert_eq!(v, vec![line(&[1, 0]), line(&[1, 1])]);
        let bad = Flag::new(vec![line(&[1, 0]), Subspace::full(2)]).unwrap();
        let err = compatible_decomposition(&f, &bad).unwrap_err();
        assert!(err.to_string().contains("F_2"));
    }

    #[test]
    fn generic_flag_is_transverse_and_deterministic() {
        let arr = vec![line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[1, 1, 0])];
        let w = generic_flag(&arr, 3, 7).unwrap();
        assert!(w.is_complete());
        for s in subset_sums(&arr) {
            for p in w.parts() {
                assert!(p.is_transverse_to(&s));
            }
        }
        assert_eq!(w, generic_flag(&arr, 3, 7).unwrap());
    }

    #[test]
    fn generic_flag_rejects_mismatched_ambient() {
        let arr = vec![line(&[1, 0])];
        assert!(matches!(generic_flag(&arr, 3, 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn exhausted_retry_budget_is_reported() {
        let arr = vec![line(&[1, 0])];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = generic_flag_with(&arr, 2, &mut rng, 0).unwrap_err();
        assert!(matches!(err, Error::GenericityExhausted { .. }));
    }
}
