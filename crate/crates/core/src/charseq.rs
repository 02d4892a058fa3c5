//! Torus-invariant subspaces `L = ⊕ E_α ⊗ x^α`, their characteristic
//! polytopes and multi-valued support functions.

use crate::error::{Error, Result};
use crate::lattice::LatticeFrame;
use crate::polyhedra::{Fan, LatticePolytope, VirtualPolytope};
use crate::polymat::{label_point, Polymatroid};
use crate::rat::{self, Point, Rat};
use crate::ratlin::{self, compatible_decomposition, Decomposition, Flag, RatMatrix, Subspace};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;

/// `L = ⊕ E_α ⊗ x^α` with distinct characters and nonzero `E_α ⊂ ℚ^r`
/// summing to `ℚ^r`.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    n: usize,
    r: usize,
    characters: Vec<Vec<i64>>,
    subspaces: Vec<Subspace>,
    normalized_from: Option<usize>,
    pm: Polymatroid,
}

impl InvariantSubspace {
    /// Builds from spanning sets. Duplicate characters are rejected unless
    /// `merge` is set, in which case their subspaces are summed. If the
    /// subspaces do not span `ℚ^r`, everything is rewritten in coordinates of
    /// their sum and the original `r` is kept in [`Self::normalized_from`].
    pub fn new(n: usize, r: usize, characters: Vec<Vec<i64>>, spans: Vec<Vec<Point>>, merge: bool) -> Result<Self> {
        if characters.len() != spans.len() {
            return Err(Error::invalid(format!(
                "{} characters but {} subspaces",
                characters.len(),
                spans.len()
            )));
        }
        let spaces = spans
            .into_iter()
            .map(|s| Subspace::span(r, s))
            .collect::<Result<Vec<_>>>()?;
        InvariantSubspace::from_subspaces(n, r, characters, spaces, merge)
    }

    pub fn from_subspaces(
        n: usize,
        r: usize,
        characters: Vec<Vec<i64>>,
        spaces: Vec<Subspace>,
        merge: bool,
    ) -> Result<Self> {
        if characters.len() != spaces.len() {
            return Err(Error::invalid("one subspace per character is required"));
        }
        if let Some(bad) = characters.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        if let Some(bad) = spaces.iter().find(|s| s.ambient() != r) {
            return Err(Error::DimensionMismatch { expected: r, got: bad.ambient() });
        }
        if let Some(i) = spaces.iter().position(Subspace::is_zero) {
            return Err(Error::invalid(format!("subspace for character {:?} is zero", characters[i])));
        }
        let mut pairs: Vec<(Vec<i64>, Subspace)> = Vec::with_capacity(characters.len());
        for (c, s) in characters.into_iter().zip(spaces) {
            match pairs.iter_mut().find(|(d, _)| *d == c) {
                Some((_, t)) if merge => *t = t.sum(&s)?,
                Some(_) => {
                    return Err(Error::invalid(format!(
                        "duplicate character {c:?}; pass the merge flag to sum their subspaces"
                    )))
                }
                None => pairs.push((c, s)),
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (characters, mut spaces): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let total = spaces.iter().try_fold(Subspace::zero(r), |acc, s| acc.sum(s))?;
        let mut normalized_from = None;
        let mut rank = r;
        if !total.is_full() {
            normalized_from = Some(r);
            rank = total.dim();
            spaces = spaces
                .iter()
                .map(|s| {
                    let coords: Vec<Point> = s.basis().iter().map(|v| total.coords(v).expect("inside the sum")).collect();
                    Subspace::span(rank, coords)
                })
                .collect::<Result<_>>()?;
        }
        let pm = Polymatroid::from_arrangement(n, characters.clone(), spaces.clone())?;
        Ok(InvariantSubspace { n, r: rank, characters, subspaces: spaces, normalized_from, pm })
    }

    /// Rank 0 subspace with no characters.
    pub fn empty(n: usize) -> Self {
        InvariantSubspace::from_subspaces(n, 0, Vec::new(), Vec::new(), false).expect("empty is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn characters(&self) -> &[Vec<i64>] {
        &self.characters
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// Original rank when the constructor had to project onto `Σ E_α`.
    pub fn normalized_from(&self) -> Option<usize> {
        self.normalized_from
    }

    pub fn polymatroid(&self) -> &Polymatroid {
        &self.pm
    }

    pub fn subspace_of(&self, alpha: &[i64]) -> Option<&Subspace> {
        self.characters.iter().position(|c| c.as_slice() == alpha).map(|i| &self.subspaces[i])
    }

    /// `E^ξ_c = Σ_{⟨ξ,α⟩ ≤ c} E_α`.
    pub fn filtration(&self, xi: &[Rat], c: &Rat) -> Subspace {
        let parts: Vec<Subspace> = self
            .characters
            .iter()
            .zip(&self.subspaces)
            .filter(|(a, _)| rat::dot(xi, &label_point(a)) <= *c)
            .map(|(_, s)| s.clone())
            .collect();
        sum_all(self.r, &parts)
    }

    /// Random arrangement with `r` spanning, each `E_α` of dimension at most
    /// `max_dim` and characters drawn from `[-coord, coord]^n`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, r: usize, max_chars: usize, max_dim: usize, coord: i64) -> Self {
        assert!(r >= 1 && max_chars >= 1 && max_dim >= 1);
        loop {
            let k = rng.gen_range(1..=max_chars);
            let mut chars: BTreeSet<Vec<i64>> = BTreeSet::new();
            while chars.len() < k {
                chars.insert((0..n).map(|_| rng.gen_range(-coord..=coord)).collect());
            }
            let spaces: Vec<Subspace> = chars
                .iter()
                .map(|_| {
                    let d = rng.gen_range(1..=max_dim.min(r));
                    let vecs = (0..d).map(|_| (0..r).map(|_| rat::rat(rng.gen_range(-2..=2))).collect()).collect();
                    Subspace::span(r, vecs).expect("ambient matches")
                })
                .collect();
            if spaces.iter().any(Subspace::is_zero) || sum_all(r, &spaces).dim() != r {
                continue;
            }
            return InvariantSubspace::from_subspaces(n, r, chars.into_iter().collect(), spaces, false)
                .expect("random arrangement is valid");
        }
    }
}

pub(crate) fn sum_all(r: usize, parts: &[Subspace]) -> Subspace {
    let vecs: Vec<Point> = parts.iter().flat_map(|s| s.basis().iter().cloned()).collect();
    Subspace::span(r, vecs).expect("ambient matches")
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct SpanJson(#[serde(with = "rat::serde_rat::vec2")] Vec<Point>);

#[derive(Serialize, Deserialize)]
struct InvariantSubspaceJson {
    n: usize,
    r: usize,
    characters: Vec<Vec<i64>>,
    subspaces: Vec<SpanJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    merge_duplicates: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalized_from: Option<usize>,
}

impl Serialize for InvariantSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InvariantSubspaceJson {
            n: self.n,
            r: self.r,
            characters: self.characters.clone(),
            subspaces: self.subspaces.iter().map(|sp| SpanJson(sp.basis().to_vec())).collect(),
            merge_duplicates: false,
            normalized_from: self.normalized_from,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InvariantSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = InvariantSubspaceJson::deserialize(d)?;
        InvariantSubspace::new(j.n, j.r, j.characters, j.subspaces.into_iter().map(|s| s.0).collect(), j.merge_duplicates)
            .map_err(serde::de::Error::custom)
    }
}

/// `Δ_0 = {0}, Δ_1, …, Δ_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicSequence {
    n: usize,
    polys: Vec<Arc<LatticePolytope>>,
}

impl CharacteristicSequence {
    pub fn from_polytopes(n: usize, polys: Vec<LatticePolytope>) -> Result<Self> {
        if let Some(bad) = polys.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.dim() });
        }
        let mut all = vec![Arc::new(LatticePolytope::point(vec![Rat::zero(); n]))];
        all.extend(polys.into_iter().map(Arc::new));
        Ok(CharacteristicSequence { n, polys: all })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.polys.len() - 1
    }

    /// `Δ_i`, with `Δ_0 = {0}`.
    pub fn delta(&self, i: usize) -> &Arc<LatticePolytope> {
        &self.polys[i]
    }

    /// `Δ_1, Δ_2 − Δ_1, …, Δ_r − Δ_{r−1}`.
    pub fn canonical(&self) -> Vec<VirtualPolytope> {
        (1..self.polys.len())
            .map(|i| {
                if i == 1 {
                    VirtualPolytope::from_arc(self.polys[1].clone())
                } else {
                    VirtualPolytope::difference(self.polys[i].clone(), self.polys[i - 1].clone()).expect("same dimension")
                }
            })
            .collect()
    }

    /// `Δ_L = Δ_1 + ⋯ + Δ_r`.
    pub fn total(&self) -> Result<LatticePolytope> {
        let mut acc = (*self.polys[0]).clone();
        for p in &self.polys[1..] {
            acc = acc.minkowski_sum(p)?;
        }
        Ok(acc)
    }

    /// `h_i(ξ) = h_{Δ_i}(ξ) − h_{Δ_{i−1}}(ξ)`; ascending.
    pub fn support_values(&self, xi: &[Rat]) -> Vec<Rat> {
        let h: Vec<Rat> = self.polys.iter().map(|p| p.support_value(xi)).collect();
        h.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// Faces `Δ^ξ_i`.
    pub fn faces(&self, xi: &[Rat]) -> Vec<LatticePolytope> {
        self.polys.iter().map(|p| p.face(xi)).collect()
    }
}

/// `Δ_i = conv{α_1 + ⋯ + α_i : (α_1, …, α_i) admissible}`.
pub fn characteristic_polytopes(p: &Polymatroid) -> Result<CharacteristicSequence> {
    let levels = p.admissible_multisets();
    let labels: Vec<Point> = p.labels().iter().map(|l| label_point(l)).collect();
    let mut polys = Vec::with_capacity(levels.len().saturating_sub(1));
    for level in levels.iter().skip(1) {
        let sums: BTreeSet<Point> = level
            .iter()
            .map(|counts| {
                let mut s = vec![Rat::zero(); p.n()];
                for (e, &c) in counts.iter().enumerate() {
                    if c > 0 {
                        s = rat::add(&s, &rat::scale(&labels[e], &rat::rat(c as i64)));
                    }
                }
                s
            })
            .collect();
        polys.push(LatticePolytope::convex_hull(sums.into_iter().collect())?);
    }
    CharacteristicSequence::from_polytopes(p.n(), polys)
}

/// Canonical multi-valued support function `h_L = (h_1, …, h_r)`.
#[derive(Clone, Debug)]
pub struct MultiSupportFunction {
    seq: CharacteristicSequence,
}

impl MultiSupportFunction {
    pub fn new(seq: CharacteristicSequence) -> Self {
        MultiSupportFunction { seq }
    }

    pub fn sequence(&self) -> &CharacteristicSequence {
        &self.seq
    }

    pub fn eval(&self, xi: &[Rat]) -> Result<Vec<Rat>> {
        if xi.len() != self.seq.n {
            return Err(Error::DimensionMismatch { expected: self.seq.n, got: xi.len() });
        }
        Ok(self.seq.support_values(xi))
    }

    pub fn representation(&self) -> Vec<VirtualPolytope> {
        self.seq.canonical()
    }
}

pub fn multi_support(p: &Polymatroid) -> Result<MultiSupportFunction> {
    Ok(MultiSupportFunction::new(characteristic_polytopes(p)?))
}

/// Jumps `(c_j, d_j)` of `E^ξ_c` and, for subspace sources, the flag `F^ξ_•`.
#[derive(Clone, Debug)]
pub struct CriticalData {
    pub xi: Point,
    pub jumps: Vec<(Rat, usize)>,
    pub flag: Option<Flag>,
}

impl CriticalData {
    /// Critical numbers repeated by multiplicity, ascending.
    pub fn multiset(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut prev = 0;
        for (c, d) in &self.jumps {
            for _ in prev..*d {
                out.push(c.clone());
            }
            prev = *d;
        }
        out
    }

    pub fn levels(&self) -> Vec<Rat> {
        self.jumps.iter().map(|j| j.0.clone()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.jumps.iter().map(|j| j.1).collect()
    }
}

fn distinct_values(labels: &[Vec<i64>], xi: &[Rat]) -> Vec<Rat> {
    let vals: BTreeSet<Rat> = labels.iter().map(|a| rat::dot(xi, &label_point(a))).collect();
    vals.into_iter().collect()
}

pub fn critical_data(l: &InvariantSubspace, xi: &[Rat]) -> Result<CriticalData> {
    if xi.len() != l.n {
        return Err(Error::DimensionMismatch { expected: l.n, got: xi.len() });
    }
    let mut jumps = Vec::new();
    let mut parts = Vec::new();
    let mut last = 0;
    for c in distinct_values(&l.characters, xi) {
        let f = l.filtration(xi, &c);
        if f.dim() > last {
            last = f.dim();
            jumps.push((c, last));
            parts.push(f);
        }
    }
    let flag = Flag::new(parts)?;
    Ok(CriticalData { xi: xi.to_vec(), jumps, flag: Some(flag) })
}

/// Critical numbers from the rank function alone.
pub fn critical_data_polymatroid(p: &Polymatroid, xi: &[Rat]) -> Result<CriticalData> {
    if xi.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: xi.len() });
    }
    let vals: Vec<Rat> = p.labels().iter().map(|a| rat::dot(xi, &label_point(a))).collect();
    let mut jumps = Vec::new();
    let mut last = 0;
    for c in distinct_values(p.labels(), xi) {
        let mask = (0..p.len()).filter(|&e| vals[e] <= c).fold(0u64, |m, e| m | 1 << e);
        let d = p.rank(mask) as usize;
        if d > last {
            last = d;
            jumps.push((c, d));
        }
    }
    Ok(CriticalData { xi: xi.to_vec(), jumps, flag: None })
}

/// Fixed direction sample: `{−1,0,1}^n ∖ 0` plus seeded random directions.
pub fn direction_sample(n: usize, extra: usize, seed: u64) -> Vec<Point> {
    let mut out = Vec::new();
    if n <= 4 {
        let mut v = vec![-1i64; n];
        loop {
            if v.iter().any(|&x| x != 0) {
                out.push(rat::point(&v));
            }
            let mut i = 0;
            while i < n && v[i] == 1 {
                v[i] = -1;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend(random_directions(&mut rng, n, extra));
    out
}

/// Nonzero random rational directions with small entries.
pub fn random_directions<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    // ℝ^0 has no nonzero direction
    while n > 0 && out.len() < count {
        let v: Point = (0..n).map(|_| rat::random_rat(rng, 7, 3)).collect();
        if !rat::is_zero_vec(&v) {
            out.push(v);
        }
    }
    out
}

/// Block-diagonal direct sum `L_1 ⊕ L_2` on the union of characters,
/// verified against merged critical multisets on a direction sample.
pub fn direct_sum(l1: &InvariantSubspace, l2: &InvariantSubspace) -> Result<InvariantSubspace> {
    if l1.n != l2.n {
        return Err(Error::DimensionMismatch { expected: l1.n, got: l2.n });
    }
    let r = l1.r + l2.r;
    let embed = |s: &Subspace, offset: usize| -> Vec<Point> {
        s.basis()
            .iter()
            .map(|v| {
                let mut w = vec![Rat::zero(); r];
                for (i, x) in v.iter().enumerate() {
                    w[offset + i] = x.clone();
                }
                w
            })
            .collect()
    };
    let mut chars: Vec<Vec<i64>> = Vec::new();
    let mut spans: Vec<Vec<Point>> = Vec::new();
    for (c, s) in l1.characters.iter().zip(&l1.subspaces) {
        chars.push(c.clone());
        spans.push(embed(s, 0));
    }
    for (c, s) in l2.characters.iter().zip(&l2.subspaces) {
        let v = embed(s, l1.r);
        match chars.iter().position(|d| d == c) {
            Some(i) => spans[i].extend(v),
            None => {
                chars.push(c.clone());
                spans.push(v);
            }
        }
    }
    let sum = InvariantSubspace::new(l1.n, r, chars, spans, false)?;
    for xi in direction_sample(l1.n, 8, 0) {
        let mut merged = critical_data(l1, &xi)?.multiset();
        merged.extend(critical_data(l2, &xi)?.multiset());
        merged.sort();
        if critical_data(&sum, &xi)?.multiset() != merged {
            return Err(Error::invalid(format!("direct sum fails the merge check at ξ = {xi:?}")));
        }
    }
    Ok(sum)
}

/// `{π(E_α)}` for the quotient map `π: ℚ^r → ℚ^r / K`, written in
/// coordinates given by a basis of the annihilator of `K`.
pub fn project(l: &InvariantSubspace, kernel: &Subspace) -> Result<InvariantSubspace> {
    if kernel.ambient() != l.r {
        return Err(Error::DimensionMismatch { expected: l.r, got: kernel.ambient() });
    }
    if kernel.is_zero() {
        return Ok(l.clone());
    }
    for s in ratlin::subset_sums(&l.subspaces) {
        if !kernel.is_transverse_to(&s) {
            let members: Vec<&Vec<i64>> = l
                .characters
                .iter()
                .zip(&l.subspaces)
                .filter(|(_, e)| s.contains_subspace(e))
                .map(|(c, _)| c)
                .collect();
            return Err(Error::precondition(format!(
                "kernel is not transverse to the subspace sum of dimension {} spanned by the characters {:?}",
                s.dim(),
                members
            )));
        }
    }
    let rows = kernel.annihilator().basis().to_vec();
    let rp = rows.len();
    let pi = RatMatrix::from_rows(rows)?;
    let mut chars = Vec::new();
    let mut spaces = Vec::new();
    for (c, s) in l.characters.iter().zip(&l.subspaces) {
        let img = Subspace::span(rp, s.basis().iter().map(|v| pi.apply(v)).collect())?;
        if !img.is_zero() {
            chars.push(c.clone());
            spaces.push(img);
        }
    }
    InvariantSubspace::from_subspaces(l.n, rp, chars, spaces, false)
}

/// Projection along the `k`-dimensional member of a seeded generic flag.
pub fn project_generic(l: &InvariantSubspace, k: usize, seed: u64) -> Result<InvariantSubspace> {
    if k > l.r {
        return Err(Error::precondition(format!("kernel dimension {k} exceeds rank {}", l.r)));
    }
    if k == 0 {
        return Ok(l.clone());
    }
    let w = ratlin::generic_flag(&l.subspaces, l.r, seed)?;
    project(l, &w.parts()[k - 1])
}

/// Witness direction where the support function of `p` is not linear on
/// some maximal cone of `fan`.
pub fn linearity_witness(fan: &Fan, p: &LatticePolytope) -> Option<(usize, Point)> {
    for ci in 0..fan.maximal_cones().len() {
        let cone = fan.cone(ci);
        let inner = cone.interior_point();
        let face = p.face(&inner);
        let ok = face.vertices().len() == 1
            && cone.generators.iter().all(|g| rat::dot(g, &face.vertices()[0]) == p.support_value(g));
        if !ok {
            return Some((ci, inner));
        }
    }
    None
}

/// Normal fan `Σ_L` of `Δ_1 + ⋯ + Δ_r`, audited for linearity of every `h_{Δ_i}`.
pub fn fan_of(seq: &CharacteristicSequence) -> Result<Fan> {
    let total = seq.total()?;
    if !total.is_full_dim() {
        return Err(Error::precondition(format!(
            "Δ_L has affine dimension {} in ambient dimension {}; reduce to the quotient torus first",
            total.affine_dim(),
            seq.n
        )));
    }
    let fan = Fan::normal_fan(&total)?;
    for i in 1..=seq.r() {
        if let Some((ci, w)) = linearity_witness(&fan, seq.delta(i)) {
            return Err(Error::invalid(format!("h_Δ{i} is not linear on cone {ci} (witness {w:?})")));
        }
    }
    Ok(fan)
}

/// `Σ_L` for a subspace source, additionally checking that `F^ξ_•` is the
/// same at two interior points of every maximal cone.
pub fn fan_of_subspace(l: &InvariantSubspace) -> Result<Fan> {
    let seq = characteristic_polytopes(l.polymatroid())?;
    let fan = fan_of(&seq)?;
    for ci in 0..fan.maximal_cones().len() {
        let cone = fan.cone(ci);
        let a = cone.interior_point();
        let b = cone
            .generators
            .iter()
            .enumerate()
            .fold(vec![Rat::zero(); l.n], |acc, (i, g)| rat::add(&acc, &rat::scale(g, &rat::rat(i as i64 + 2))));
        let fa = critical_data(l, &a)?.flag.expect("subspace source");
        let fb = critical_data(l, &b)?.flag.expect("subspace source");
        if fa != fb {
            return Err(Error::invalid(format!("flag F^ξ changes inside cone {ci}")));
        }
    }
    Ok(fan)
}

/// One `ξ`-truncation `L^ξ_i ⊂ V_i ⊗ ℚ[T]` at level `c_i`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub level: Rat,
    pub sub: InvariantSubspace,
}

/// `L^ξ_i = ⊕_{⟨ξ,α⟩ = c_i} π_i(E_α)` with `π_i: F_i → V_i` along `F_{i−1}`,
/// using the decomposition compatible with a seeded generic flag.
pub fn truncate(l: &InvariantSubspace, xi: &[Rat], seed: u64) -> Result<Vec<Truncation>> {
    let cd = critical_data(l, xi)?;
    if l.r == 0 {
        return Ok(Vec::new());
    }
    let flag = cd.flag.as_ref().expect("subspace source");
    let w = ratlin::generic_flag(&l.subspaces, l.r, seed)?;
    let blocks = compatible_decomposition(flag, &w)?;
    let dec = Decomposition::new(blocks)?;
    let mut out = Vec::with_capacity(cd.jumps.len());
    for (i, (c, _)) in cd.jumps.iter().enumerate() {
        let di = dec.blocks()[i].dim();
        let mut chars = Vec::new();
        let mut spaces = Vec::new();
        for (a, e) in l.characters.iter().zip(&l.subspaces) {
            if rat::dot(xi, &label_point(a)) != *c {
                continue;
            }
            let img = Subspace::span(di, e.basis().iter().map(|v| dec.project(i, v)).collect())?;
            if !img.is_zero() {
                chars.push(a.clone());
                spaces.push(img);
            }
        }
        let sub = InvariantSubspace::from_subspaces(l.n, di, chars, spaces, false)?;
        if sub.normalized_from.is_some() {
            return Err(Error::invalid(format!("truncation at level {c} does not span V_{}", i + 1)));
        }
        out.push(Truncation { level: c.clone(), sub });
    }
    Ok(out)
}

/// One checked instance `Δ^ξ_j = Δ^i_{j−d_{i−1}} + Δ^ξ_{d_{i−1}}`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationCheck {
    pub i: usize,
    pub j: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    #[serde(with = "rat::serde_rat::vec")]
    pub xi: Point,
    pub dims: Vec<usize>,
    pub checks: Vec<TruncationCheck>,
    pub pass: bool,
}

/// Compares faces of the characteristic sequence with the characteristic
/// sequences of the `ξ`-truncations. The face `Δ^ξ_{d_{i−1}}` equals the
/// sum of the full top polytopes of the earlier truncations; both forms are
/// checked.
pub fn check_truncation_theorem(l: &InvariantSubspace, xi: &[Rat], seed: u64) -> Result<TruncationReport> {
    let seq = characteristic_polytopes(l.polymatroid())?;
    let faces = seq.faces(xi);
    let cd = critical_data(l, xi)?;
    let dims = cd.dims();
    let truncs = truncate(l, xi, seed)?;
    let mut checks = Vec::new();
    let mut prefix = LatticePolytope::point(vec![Rat::zero(); l.n]);
    let mut prev_d = 0;
    for (i, t) in truncs.iter().enumerate() {
        let ts = characteristic_polytopes(t.sub.polymatroid())?;
        let pass_prefix = faces[prev_d] == prefix;
        for j in prev_d + 1..=dims[i] {
            let rhs = ts.delta(j - prev_d).minkowski_sum(&faces[prev_d])?;
            checks.push(TruncationCheck { i: i + 1, j, pass: pass_prefix && rhs == faces[j] });
        }
        prefix = prefix.minkowski_sum(ts.delta(ts.r()))?;
        prev_d = dims[i];
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(TruncationReport { xi: xi.to_vec(), dims, checks, pass })
}

/// Change of character lattice onto the saturated lattice of the affine
/// span of the characters, anchored at the lexicographically least one.
#[derive(Clone, Debug)]
pub struct CharacterReduction {
    pub anchor: Vec<i64>,
    pub frame: LatticeFrame,
}

impl CharacterReduction {
    pub fn of_labels(n: usize, labels: &[Vec<i64>]) -> Result<Self> {
        let anchor = labels.iter().min().cloned().unwrap_or_else(|| vec![0; n]);
        let diffs: Vec<Point> = labels
            .iter()
            .map(|l| rat::sub(&label_point(l), &label_point(&anchor)))
            .collect();
        let frame = LatticeFrame::of_span(n, diffs)?;
        Ok(CharacterReduction { anchor, frame })
    }

    pub fn map_label(&self, l: &[i64]) -> Result<Vec<i64>> {
        let c = self.frame.coords(&rat::sub(&label_point(l), &label_point(&self.anchor)))?;
        c.iter()
            .map(|x| rat::to_i64(x).ok_or_else(|| Error::invalid("reduced character is not integral")))
            .collect()
    }

    /// A polytope moved to its own anchor and written in the reduced lattice.
    pub fn map_polytope(&self, p: &LatticePolytope) -> Result<LatticePolytope> {
        p.in_frame(&self.frame)
    }
}

/// Rewrites `L` on the saturated lattice of its characters' affine span, so
/// that `Δ_1` becomes full-dimensional.
pub fn quotient_reduce(l: &InvariantSubspace) -> Result<(InvariantSubspace, CharacterReduction)> {
    let red = CharacterReduction::of_labels(l.n, &l.characters)?;
    let chars = l.characters.iter().map(|c| red.map_label(c)).collect::<Result<Vec<_>>>()?;
    let sub = InvariantSubspace::from_subspaces(red.frame.rank(), l.r, chars, l.subspaces.clone(), false)?;
    Ok((sub, red))
}

/// Polymatroid analogue of [`quotient_reduce`].
pub fn quotient_reduce_polymatroid(p: &Polymatroid) -> Result<(Polymatroid, CharacterReduction)> {
    let red = CharacterReduction::of_labels(p.n(), p.labels())?;
    let labels = p.labels().iter().map(|c| red.map_label(c)).collect::<Result<Vec<_>>>()?;
    Ok((p.relabel(red.frame.rank(), labels)?, red))
}

/// Sorted multiset union.
pub fn merge_sorted(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut v: Vec<Rat> = a.iter().chain(b).cloned().collect();
    v.sort();
    v
}
