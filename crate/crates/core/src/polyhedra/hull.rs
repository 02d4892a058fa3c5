//! Exact convex hull of a full-dimensional integer point set.
//!
//! Beneath-beyond insertion in Quickhull order over a simplicial boundary.
//! Every inserted point cones over the facets it sees, so the cones form a
//! placing triangulation and the volume falls out of the construction.
//! Arithmetic is generic so the same code runs on checked `i128` and, after
//! an overflow, on `BigInt`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};
use std::collections::HashMap;

pub trait HullScalar:
    Clone + Ord + std::hash::Hash + Zero + One + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul + Send + Sync + std::fmt::Debug
{
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl HullScalar for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        num_traits::ToPrimitive::to_i128(x)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl HullScalar for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn mul<T: HullScalar>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}
fn add<T: HullScalar>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}
fn sub<T: HullScalar>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

fn dot<T: HullScalar>(a: &[T], b: &[T]) -> Result<T> {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s = add(&s, &mul(x, y)?)?;
    }
    Ok(s)
}

/// Fraction-free determinant.
pub fn det_bareiss<T: HullScalar>(mut m: Vec<Vec<T>>) -> Result<T> {
    let n = m.len();
    if n == 0 {
        return Ok(T::one());
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = sub(&mul(&m[i][j], &m[k][k])?, &mul(&m[i][k], &m[k][j])?)?;
                m[i][j] = t / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * m[n - 1][n - 1].clone())
}

/// A merged facet: `normal · x ≥ offset` on the hull, `normal` primitive.
#[derive(Clone, Debug)]
pub struct HullFacet<T> {
    pub normal: Vec<T>,
    pub offset: T,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Hull<T> {
    /// `d!` times the volume.
    pub volume_dfact: T,
    pub facets: Vec<HullFacet<T>>,
    pub vertices: Vec<usize>,
}

struct Simplex<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
    scale: T,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

struct Builder<'a, T> {
    pts: &'a [Vec<T>],
    d: usize,
    interior: Vec<T>,
    simplices: Vec<Simplex<T>>,
}

impl<'a, T: HullScalar> Builder<'a, T> {
    /// Inward primitive normal through `verts`, with the gcd that was removed.
    fn plane(&self, verts: &[usize]) -> Result<(Vec<T>, T, T)> {
        let d = self.d;
        let p0 = &self.pts[verts[0]];
        let rows: Vec<Vec<T>> = verts[1..]
            .iter()
            .map(|&v| self.pts[v].iter().zip(p0).map(|(a, b)| sub(a, b)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut normal = Vec::with_capacity(d);
        for j in 0..d {
            let minor: Vec<Vec<T>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let c = det_bareiss(minor)?;
            normal.push(if j % 2 == 0 { c } else { -c });
        }
        let g = normal.iter().fold(T::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::invalid("degenerate simplex in hull construction"));
        }
        let mut normal: Vec<T> = normal.into_iter().map(|x| x / g.clone()).collect();
        let mut offset = dot(&normal, p0)?;
        // interior is the sum of d+1 initial points, compare against (d+1)·offset
        let lhs = dot(&normal, &self.interior)?;
        let rhs = mul(&offset, &T::from_big(&BigInt::from(d + 1)).ok_or(Error::Overflow)?)?;
        if lhs < rhs {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        Ok((normal, offset, g))
    }

    /// `offset - normal·p`, positive iff `p` is strictly beyond.
    fn height(&self, s: usize, p: usize) -> Result<T> {
        let f = &self.simplices[s];
        sub(&f.offset, &dot(&f.normal, &self.pts[p])?)
    }

    fn push(&mut self, verts: Vec<usize>) -> Result<usize> {
        let (normal, offset, scale) = self.plane(&verts)?;
        let d = self.d;
        self.simplices.push(Simplex {
            verts,
            normal,
            offset,
            scale,
            neighbors: vec![usize::MAX; d],
            outside: Vec::new(),
            alive: true,
        });
        Ok(self.simplices.len() - 1)
    }
}

fn initial_simplex<T: HullScalar>(pts: &[Vec<T>], d: usize) -> Option<Vec<usize>> {
    // incremental row echelon over ℚ via BigInt fractions
    use num_rational::BigRational as Q;
    let q = |x: &T| Q::from_integer(x.to_big());
    let mut chosen = vec![0usize];
    let mut basis: Vec<(usize, Vec<Q>)> = Vec::new();
    let p0: Vec<Q> = pts[0].iter().map(q).collect();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if chosen.len() == d + 1 {
            break;
        }
        let mut v: Vec<Q> = p.iter().map(q).zip(&p0).map(|(a, b)| a - b).collect();
        for (piv, row) in &basis {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone() / row[*piv].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
            basis.push((piv, v));
            chosen.push(i);
        }
    }
    (chosen.len() == d + 1).then_some(chosen)
}

/// Hull of distinct points spanning `ℝ^d`, `d ≥ 1`.
pub fn hull<T: HullScalar>(pts: &[Vec<T>], d: usize) -> Result<Hull<T>> {
    if d == 1 {
        return Ok(hull_1d(pts));
    }
    let init = initial_simplex(pts, d).ok_or_else(|| Error::invalid("points are not full-dimensional"))?;
    let mut interior = vec![T::zero(); d];
    for &i in &init {
        for (acc, x) in interior.iter_mut().zip(&pts[i]) {
            *acc = add(acc, x)?;
        }
    }
    let mut b = Builder { pts, d, interior, simplices: Vec::new() };
    for k in 0..=d {
        let verts: Vec<usize> = init.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
        b.push(verts)?;
    }
    // facet k omits init[k]; its vertex at position j is init[j'] with j' = j or j+1
    for k in 0..=d {
        let verts = b.simplices[k].verts.clone();
        for (pos, v) in verts.iter().enumerate() {
            let other = init.iter().position(|x| x == v).unwrap();
            b.simplices[k].neighbors[pos] = other;
        }
    }
    let mut volume = {
        let p0 = &pts[init[0]];
        let rows: Vec<Vec<T>> = init[1..]
            .iter()
            .map(|&v| pts[v].iter().zip(p0).map(|(a, c)| sub(a, c)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        det_bareiss(rows)?.abs()
    };
    let in_init: std::collections::HashSet<usize> = init.iter().copied().collect();
    for p in 0..pts.len() {
        if in_init.contains(&p) {
            continue;
        }
        for s in 0..=d {
            if b.height(s, p)?.is_positive() {
                b.simplices[s].outside.push(p);
                break;
            }
        }
    }
    let mut stack: Vec<usize> = (0..=d).collect();
    while let Some(s) = stack.pop() {
        if !b.simplices[s].alive || b.simplices[s].outside.is_empty() {
            continue;
        }
        let mut best = None;
        let mut best_h = T::zero();
        for &p in &b.simplices[s].outside {
            let h = b.height(s, p)?;
            if best.is_none() || h > best_h {
                best = Some(p);
                best_h = h;
            }
        }
        let p = best.unwrap();
        // visible region is connected; grow it through neighbors
        let mut visible = vec![s];
        let mut mark: HashMap<usize, bool> = HashMap::from([(s, true)]);
        let mut i = 0;
        while i < visible.len() {
            let f = visible[i];
            i += 1;
            for k in 0..d {
                let nb = b.simplices[f].neighbors[k];
                if mark.contains_key(&nb) {
                    continue;
                }
                let vis = b.height(nb, p)?.is_positive();
                mark.insert(nb, vis);
                if vis {
                    visible.push(nb);
                }
            }
        }
        let mut orphans = Vec::new();
        let mut horizon = Vec::new();
        for &f in &visible {
            let sf = &b.simplices[f];
            volume = add(&volume, &mul(&sf.scale, &sub(&sf.offset, &dot(&sf.normal, &pts[p])?)?)?)?;
            orphans.extend(sf.outside.iter().copied().filter(|&q| q != p));
            for k in 0..d {
                let nb = sf.neighbors[k];
                if !mark[&nb] {
                    horizon.push((f, k, nb));
                }
            }
        }
        for &f in &visible {
            b.simplices[f].alive = false;
            b.simplices[f].outside.clear();
        }
        let mut new_ids = Vec::with_capacity(horizon.len());
        let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for (f, k, nb) in horizon {
            let mut verts: Vec<usize> = b.simplices[f].verts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            verts.push(p);
            verts.sort_unstable();
            let id = b.push(verts.clone())?;
            let ppos = verts.iter().position(|&v| v == p).unwrap();
            b.simplices[id].neighbors[ppos] = nb;
            if let Some(slot) = b.simplices[nb].neighbors.iter().position(|&x| x == f) {
                b.simplices[nb].neighbors[slot] = id;
            }
            for (j, &v) in verts.iter().enumerate() {
                if v == p {
                    continue;
                }
                let ridge: Vec<usize> = verts.iter().copied().filter(|&x| x != v).collect();
                if let Some((other, oj)) = ridge_map.remove(&ridge) {
                    b.simplices[id].neighbors[j] = other;
                    b.simplices[other].neighbors[oj] = id;
                } else {
                    ridge_map.insert(ridge, (id, j));
                }
            }
            new_ids.push(id);
        }
        for q in orphans {
            for &id in &new_ids {
                if b.height(id, q)?.is_positive() {
                    b.simplices[id].outside.push(q);
                    break;
                }
            }
        }
        stack.extend(new_ids.iter().copied().filter(|&id| !b.simplices[id].outside.is_empty()));
    }
    finish(pts, d, volume, b.simplices)
}

fn finish<T: HullScalar>(pts: &[Vec<T>], d: usize, volume: T, simplices: Vec<Simplex<T>>) -> Result<Hull<T>> {
    let mut groups: HashMap<(Vec<T>, T), Vec<usize>> = HashMap::new();
    let mut order = Vec::new();
    for s in simplices.into_iter().filter(|s| s.alive) {
        let key = (s.normal, s.offset);
        let entry = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        entry.extend(s.verts);
    }
    let mut facets: Vec<HullFacet<T>> = order
        .into_iter()
        .map(|key| {
            let mut points = groups.remove(&key).unwrap();
            points.sort_unstable();
            points.dedup();
            HullFacet { normal: key.0, offset: key.1, points }
        })
        .collect();
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (fi, f) in facets.iter().enumerate() {
        for &p in &f.points {
            incident.entry(p).or_default().push(fi);
        }
    }
    let mut vertices: Vec<usize> = incident
        .into_iter()
        .filter(|(_, fs)| {
            fs.len() >= d && {
                let rows: Vec<Vec<num_rational::BigRational>> = fs
                    .iter()
                    .map(|&f| facets[f].normal.iter().map(|x| num_rational::BigRational::from_integer(x.to_big())).collect())
                    .collect();
                crate::ratlin::rank(&rows) == d
            }
        })
        .map(|(p, _)| p)
        .collect();
    vertices.sort_unstable();
    let _ = pts;
    Ok(Hull { volume_dfact: volume, facets, vertices })
}

fn hull_1d<T: HullScalar>(pts: &[Vec<T>]) -> Hull<T> {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    let volume_dfact = pts[hi][0].clone() - pts[lo][0].clone();
    let facets = vec![
        HullFacet { normal: vec![-T::one()], offset: -pts[hi][0].clone(), points: vec![hi] },
        HullFacet { normal: vec![T::one()], offset: pts[lo][0].clone(), points: vec![lo] },
    ];
    let mut vertices = vec![lo, hi];
    vertices.sort_unstable();
    Hull { volume_dfact, facets, vertices }
}
