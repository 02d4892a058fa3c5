//! Rational polyhedral cones and complete fans.

use super::{hull_data, LatticePolytope};
use crate::error::{Error, Result};
use crate::rat::{self, Point, Rat};
use crate::ratlin::{kernel_of_rows, rank, rref};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A pointed cone given by generators, with its facet inequalities
/// `⟨a, x⟩ ≥ 0` when it is full-dimensional.
#[derive(Clone, Debug)]
pub struct Cone {
    pub generators: Vec<Point>,
}

/// Facets of the cone generated by `gens` inside its own linear span, each
/// reported as the set of generator indices lying on it.
pub fn cone_facet_sets(gens: &[Point]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = gens.first() else { return Ok(Vec::new()) };
    let (basis, pivots) = rref(gens);
    let k = basis.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let proj: Vec<Point> = gens.iter().map(|g| pivots.iter().map(|&c| g[c].clone()).collect()).collect();
    let _ = first;
    let normals = full_cone_normals(&proj)?;
    let mut out: Vec<Vec<usize>> = normals
        .iter()
        .map(|a| (0..gens.len()).filter(|&i| rat::dot(a, &proj[i]).is_zero()).collect())
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Inward facet normals of a full-dimensional pointed cone.
pub fn full_cone_normals(gens: &[Point]) -> Result<Vec<Point>> {
    let d = gens[0].len();
    if d == 1 {
        let s = gens[0][0].signum();
        if gens.iter().any(|g| g[0].signum() != s) {
            return Err(Error::invalid("cone is not pointed"));
        }
        return Ok(vec![vec![s]]);
    }
    let mut pts: Vec<Point> = vec![vec![Rat::zero(); d]];
    let mut seen = BTreeSet::new();
    for g in gens {
        let p = rat::from_ints(&rat::primitive(g));
        if seen.insert(p.clone()) {
            pts.push(p);
        }
    }
    if rank(&pts[1..]) < d {
        return Err(Error::invalid("cone is not full-dimensional"));
    }
    let h = hull_data(&pts)?;
    let normals: Vec<Point> = h
        .facets
        .into_iter()
        .filter(|f| f.offset.is_zero())
        .map(|f| rat::from_ints(&f.normal))
        .collect();
    if !h.vertices.contains(&0) {
        return Err(Error::invalid("cone is not pointed"));
    }
    Ok(normals)
}

impl Cone {
    pub fn new(generators: Vec<Point>) -> Self {
        Cone { generators }
    }

    pub fn dim(&self) -> usize {
        rank(&self.generators)
    }

    pub fn interior_point(&self) -> Point {
        let n = self.generators.first().map_or(0, Vec::len);
        self.generators.iter().fold(vec![Rat::zero(); n], |acc, g| rat::add(&acc, g))
    }

    pub fn normals(&self) -> Result<Vec<Point>> {
        full_cone_normals(&self.generators)
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        Ok(self.normals()?.iter().all(|a| !rat::dot(a, x).is_negative()))
    }

    /// Annihilator of the span: the linear space `σ^⊥`.
    pub fn orthogonal_space(&self, n: usize) -> crate::ratlin::Subspace {
        crate::ratlin::Subspace::span(n, kernel_of_rows(&self.generators, n)).expect("kernel vectors have length n")
    }
}

/// A complete fan: primitive ray generators and maximal cones as ray index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    maximal_cones: Vec<Vec<usize>>,
    rays: Vec<Vec<i64>>,
}

impl Serialize for Fan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rays = self
            .rays
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| serde::ser::Error::custom("ray entry out of range"))).collect())
            .collect::<std::result::Result<Vec<Vec<i64>>, S::Error>>()?;
        FanJson { dim: self.dim, maximal_cones: self.cones.clone(), rays }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FanJson::deserialize(d)?;
        let rays = j.rays.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        Fan::new(j.dim, rays, j.maximal_cones).map_err(serde::de::Error::custom)
    }
}

fn ray_key(v: &[Rat]) -> Vec<BigInt> {
    rat::primitive(v)
}

impl Fan {
    /// Builds a fan, normalizing rays to primitive vectors and checking that
    /// every maximal cone is full-dimensional.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut prim = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::invalid("zero ray"));
            }
            prim.push(ray_key(&rat::from_ints(r)));
        }
        let mut cs = Vec::with_capacity(cones.len());
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::invalid(format!("cone refers to missing ray {bad}")));
            }
            let gens: Vec<Point> = c.iter().map(|&i| rat::from_ints(&prim[i])).collect();
            if rank(&gens) != dim {
                return Err(Error::invalid(format!("maximal cone {c:?} is not full-dimensional")));
            }
            cs.push(c);
        }
        Ok(Fan { dim, rays: prim, cones: cs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Point {
        rat::from_ints(&self.rays[i])
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> Cone {
        Cone::new(self.cones[i].iter().map(|&r| self.ray(r)).collect())
    }

    pub fn cone_of(&self, rays: &[usize]) -> Cone {
        Cone::new(rays.iter().map(|&r| self.ray(r)).collect())
    }

    /// Normal fan of a full-dimensional polytope under the min convention:
    /// the cone at a vertex `v` is `{ξ : ⟨ξ, v⟩ = h_P(ξ)}`.
    pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
        if !p.is_full_dim() {
            return Err(Error::precondition("normal fan needs a full-dimensional polytope"));
        }
        let n = p.dim();
        if n == 0 {
            return Ok(Fan { dim: 0, rays: Vec::new(), cones: vec![Vec::new()] });
        }
        let facets = p.facets()?;
        let rays: Vec<Vec<BigInt>> = facets.iter().map(|f| f.normal.clone()).collect();
        let mut cones = Vec::with_capacity(p.vertices().len());
        for vi in 0..p.vertices().len() {
            let c: Vec<usize> = facets.iter().enumerate().filter(|(_, f)| f.vertices.contains(&vi)).map(|(i, _)| i).collect();
            cones.push(c);
        }
        Fan::new(n, rays, cones)
    }

    /// Index of a maximal cone containing `x`.
    pub fn locate(&self, x: &[Rat]) -> Result<Option<usize>> {
        for i in 0..self.cones.len() {
            if self.cone(i).contains(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Completeness audit: every facet of a maximal cone is shared by
    /// exactly two maximal cones, and every sample direction is covered.
    pub fn check_complete(&self, sample: &[Point]) -> Result<()> {
        if self.dim == 0 {
            return Ok(());
        }
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.cones {
            let gens: Vec<Point> = c.iter().map(|&r| self.ray(r)).collect();
            for f in cone_facet_sets(&gens)? {
                let key: Vec<usize> = f.iter().map(|&i| c[i]).collect();
                *count.entry(key).or_default() += 1;
            }
        }
        if let Some((f, k)) = count.iter().find(|(_, &k)| k != 2) {
            return Err(Error::invalid(format!("fan facet {f:?} lies in {k} maximal cones")));
        }
        for x in sample {
            if self.locate(x)?.is_none() {
                let s: Vec<String> = x.iter().map(rat::fmt_rat).collect();
                return Err(Error::invalid(format!("direction ({}) is not covered by the fan", s.join(","))));
            }
        }
        Ok(())
    }

    /// `self` refines `other`: each maximal cone of `self` lies in a maximal cone of `other`.
    pub fn refines(&self, other: &Fan) -> Result<bool> {
        for i in 0..self.cones.len() {
            let c = self.cone(i);
            let Some(j) = other.locate(&c.interior_point())? else { return Ok(false) };
            let host = other.cone(j).normals()?;
            if !c.generators.iter().all(|g| host.iter().all(|a| !rat::dot(a, g).is_negative())) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Common refinement of complete fans: all full-dimensional intersections
    /// of one maximal cone from each fan.
    pub fn common_refinement(fans: &[Fan]) -> Result<Fan> {
        let Some(first) = fans.first() else {
            return Err(Error::invalid("common refinement of no fans"));
        };
        let mut acc = first.clone();
        for f in &fans[1..] {
            if f.dim != acc.dim {
                return Err(Error::DimensionMismatch { expected: acc.dim, got: f.dim });
            }
            acc = acc.refine_with(f)?;
        }
        Ok(acc)
    }

    fn refine_with(&self, other: &Fan) -> Result<Fan> {
        let d = self.dim;
        let mut rays: Vec<Vec<BigInt>> = Vec::new();
        let mut index: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
        let a_normals: Vec<Vec<Point>> = (0..self.cones.len()).map(|i| self.cone(i).normals()).collect::<Result<_>>()?;
        let b_normals: Vec<Vec<Point>> = (0..other.cones.len()).map(|i| other.cone(i).normals()).collect::<Result<_>>()?;
        for na in &a_normals {
            for nb in &b_normals {
                let ineqs: Vec<Point> = na.iter().chain(nb.iter()).cloned().collect();
                let extreme = extreme_rays(&ineqs, d);
                if extreme.len() < d || rank(&extreme.iter().map(|r| rat::from_ints(r)).collect::<Vec<_>>()) < d {
                    continue;
                }
                let mut cone = Vec::new();
                for r in extreme {
                    let next = rays.len();
                    let id = *index.entry(r.clone()).or_insert(next);
                    if id == next {
                        rays.push(r);
                    }
                    cone.push(id);
                }
                cone.sort_unstable();
                cones.insert(cone);
            }
        }
        Fan::new(d, rays, cones.into_iter().collect())
    }

    /// Replaces maximal cone `i` by the cones over its facets with apex the
    /// ray through its interior point.
    pub fn stellar_subdivision(&self, i: usize) -> Result<Fan> {
        let c = &self.cones[i];
        let gens: Vec<Point> = c.iter().map(|&r| self.ray(r)).collect();
        let v = ray_key(&Cone::new(gens.clone()).interior_point());
        let mut rays = self.rays.clone();
        let vid = match rays.iter().position(|r| *r == v) {
            Some(j) => j,
            None => {
                rays.push(v);
                rays.len() - 1
            }
        };
        let mut cones: Vec<Vec<usize>> = self.cones.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
        for f in cone_facet_sets(&gens)? {
            let mut nc: Vec<usize> = f.iter().map(|&k| c[k]).collect();
            nc.push(vid);
            cones.push(nc);
        }
        Fan::new(self.dim, rays, cones)
    }

    /// All cones of the given dimension, as sorted ray index lists; the
    /// zero cone is the empty list.
    pub fn cones_of_dim(&self, k: usize) -> Result<Vec<Vec<usize>>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.cones {
            for face in cone_faces(&c.iter().map(|&r| self.ray(r)).collect::<Vec<_>>())? {
                let rays: Vec<usize> = face.iter().map(|&i| c[i]).collect();
                let dim = rank(&rays.iter().map(|&r| self.ray(r)).collect::<Vec<_>>());
                if dim == k {
                    out.insert(rays);
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Simplicial refinement by pulling triangulations with respect to the
    /// global ray order, which restrict consistently to shared faces.
    pub fn simplicial_refinement(&self) -> Result<Fan> {
        let mut cones = Vec::new();
        for c in &self.cones {
            for s in self.pull_triangulate(c)? {
                cones.push(s);
            }
        }
        Fan::new(self.dim, self.rays.clone(), cones)
    }

    fn pull_triangulate(&self, c: &[usize]) -> Result<Vec<Vec<usize>>> {
        let gens: Vec<Point> = c.iter().map(|&r| self.ray(r)).collect();
        let k = rank(&gens);
        if gens.len() == k {
            return Ok(vec![c.to_vec()]);
        }
        let apex = *c.iter().min().unwrap();
        let apos = c.iter().position(|&r| r == apex).unwrap();
        let mut out = Vec::new();
        for f in cone_facet_sets(&gens)? {
            if f.contains(&apos) {
                continue;
            }
            let face: Vec<usize> = f.iter().map(|&i| c[i]).collect();
            for mut s in self.pull_triangulate(&face)? {
                s.push(apex);
                s.sort_unstable();
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.dim)
    }
}

/// Extreme rays of the pointed cone `{x : ⟨a, x⟩ ≥ 0 for all a}` in `ℚ^d`.
pub fn extreme_rays(ineqs: &[Point], d: usize) -> Vec<Vec<BigInt>> {
    let mut out: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    if d == 1 {
        for s in [1i64, -1] {
            let x = vec![rat::rat(s)];
            if ineqs.iter().all(|a| !rat::dot(a, &x).is_negative()) {
                out.insert(vec![BigInt::from(s)]);
            }
        }
        return out.into_iter().collect();
    }
    let mut distinct: Vec<Point> = ineqs.iter().map(|a| rat::from_ints(&rat::primitive(a))).collect();
    distinct.sort();
    distinct.dedup();
    for subset in distinct.iter().combinations(d - 1) {
        let rows: Vec<Point> = subset.into_iter().cloned().collect();
        let k = kernel_of_rows(&rows, d);
        if k.len() != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            let r = rat::scale(&k[0], &rat::rat(sign));
            if distinct.iter().all(|a| !rat::dot(a, &r).is_negative()) {
                out.insert(ray_key(&r));
            }
        }
    }
    out.into_iter().collect()
}

/// All nonempty faces of a cone as generator index sets (the apex is the empty set).
pub fn cone_faces(gens: &[Point]) -> Result<Vec<Vec<usize>>> {
    let all: Vec<usize> = (0..gens.len()).collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(all.clone());
    let mut frontier = vec![all];
    while let Some(face) = frontier.pop() {
        let sub: Vec<Point> = face.iter().map(|&i| gens[i].clone()).collect();
        if rank(&sub) == 0 {
            continue;
        }
        for f in cone_facet_sets(&sub)? {
            let global: Vec<usize> = f.iter().map(|&i| face[i]).collect();
            if faces.insert(global.clone()) {
                frontier.push(global);
            }
        }
    }
    Ok(faces.into_iter().collect())
}
