//! Rational polytopes, formal differences of polytopes, fans and mixed volumes.
//!
//! Support functions use the min convention `h_P(ξ) = min_{v ∈ P} ⟨ξ, v⟩`.

pub mod fan;
pub mod hull;
pub mod mixed;

use crate::error::{Error, Result};
use crate::lattice::LatticeFrame;
use crate::rat::{self, Point, Rat};
use crate::ratlin::{rref, Subspace};
use hull::{Hull, HullScalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub use fan::{Cone, Fan};
pub use mixed::{
    mixed_volume, mixed_volume_in_lattice, mixed_volume_recursive, mixed_volume_virtual, Expansion,
    split_segment, MixedVolumeAlgorithm, MixedVolumeRegistry, Polarization, RecursiveFan,
};

/// Convex hull of finitely many rational points, stored by its vertices in
/// lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<Vec<String>> = self.vertices.iter().map(|v| v.iter().map(rat::fmt_rat).collect()).collect();
        write!(f, "conv{vs:?}")
    }
}

/// Facet `⟨normal, x⟩ ≥ offset` with a primitive inward integer normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
}

/// Result of an integer hull computation expressed back over ℚ.
pub(crate) struct HullData {
    pub vertices: Vec<usize>,
    pub facets: Vec<Facet>,
    pub volume: Rat,
}

fn hull_with<T: HullScalar>(ints: &[Vec<BigInt>], d: usize) -> Result<Hull<T>> {
    let pts: Vec<Vec<T>> = ints
        .iter()
        .map(|p| p.iter().map(|x| T::from_big(x).ok_or(Error::Overflow)).collect())
        .collect::<Result<_>>()?;
    hull::hull(&pts, d)
}

/// Hull of distinct full-dimensional rational points in `ℚ^d`.
pub(crate) fn hull_data(points: &[Point]) -> Result<HullData> {
    let d = points[0].len();
    let l = rat::common_denominator(points);
    let lr = Rat::from_integer(l.clone());
    let ints: Vec<Vec<BigInt>> = points.iter().map(|p| p.iter().map(|x| (x * &lr).to_integer()).collect()).collect();
    let convert = |h: Hull<BigInt>| {
        let dfact = Rat::from_integer(rat::factorial(d) * num_traits::pow(l.clone(), d));
        HullData {
            vertices: h.vertices,
            facets: h
                .facets
                .into_iter()
                .map(|f| Facet { normal: f.normal, offset: Rat::new(f.offset, l.clone()), vertices: f.points })
                .collect(),
            volume: Rat::from_integer(h.volume_dfact) / dfact,
        }
    };
    match hull_with::<i128>(&ints, d) {
        Ok(h) => Ok(convert(Hull {
            volume_dfact: BigInt::from(h.volume_dfact),
            vertices: h.vertices,
            facets: h
                .facets
                .into_iter()
                .map(|f| hull::HullFacet {
                    normal: f.normal.into_iter().map(BigInt::from).collect(),
                    offset: BigInt::from(f.offset),
                    points: f.points,
                })
                .collect(),
        })),
        Err(Error::Overflow) => hull_with::<BigInt>(&ints, d).map(convert),
        Err(e) => Err(e),
    }
}

/// Affine span of a point set: base point, RREF basis of directions and pivots.
fn affine_span(points: &[Point]) -> (Vec<Point>, Vec<usize>) {
    let p0 = &points[0];
    let diffs: Vec<Point> = points[1..].iter().map(|p| rat::sub(p, p0)).collect();
    rref(&diffs)
}

fn dedup_sorted(mut points: Vec<Point>) -> Vec<Point> {
    points.sort();
    points.dedup();
    points
}

impl LatticePolytope {
    /// Convex hull of a nonempty point set.
    pub fn convex_hull(points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("convex hull of an empty point set"));
        };
        let dim = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        let points = dedup_sorted(points);
        if points.len() <= 2 {
            return Ok(LatticePolytope { dim, vertices: points });
        }
        let (basis, pivots) = affine_span(&points);
        let k = basis.len();
        if k == 0 {
            return Ok(LatticePolytope { dim, vertices: vec![points[0].clone()] });
        }
        if k == 1 {
            // sorted order is monotone along the line
            let vertices = vec![points[0].clone(), points[points.len() - 1].clone()];
            return Ok(LatticePolytope { dim, vertices });
        }
        let projected: Vec<Point> = points.iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
        let h = hull_data(&projected)?;
        let vertices = h.vertices.iter().map(|&i| points[i].clone()).collect();
        Ok(LatticePolytope { dim, vertices: dedup_sorted(vertices) })
    }

    /// Builds a polytope from points already known to be its vertices.
    pub(crate) fn from_vertices_unchecked(dim: usize, vertices: Vec<Point>) -> Self {
        LatticePolytope { dim, vertices: dedup_sorted(vertices) }
    }

    pub fn point(p: Point) -> Self {
        LatticePolytope { dim: p.len(), vertices: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Lexicographically least vertex.
    pub fn anchor(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn affine_dim(&self) -> usize {
        if self.vertices.len() <= 1 {
            return 0;
        }
        affine_span(&self.vertices).0.len()
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// Linear span of the difference vectors.
    pub fn direction_space(&self) -> Subspace {
        let p0 = self.anchor();
        let diffs = self.vertices[1..].iter().map(|p| rat::sub(p, p0)).collect();
        Subspace::span(self.dim, diffs).expect("vertices share the ambient dimension")
    }

    pub fn support_value(&self, xi: &[Rat]) -> Rat {
        self.vertices.iter().map(|v| rat::dot(xi, v)).min().expect("nonempty vertex set")
    }

    pub fn face(&self, xi: &[Rat]) -> LatticePolytope {
        let vals: Vec<Rat> = self.vertices.iter().map(|v| rat::dot(xi, v)).collect();
        let m = vals.iter().min().unwrap().clone();
        let vertices = self.vertices.iter().zip(&vals).filter(|(_, x)| **x == m).map(|(v, _)| v.clone()).collect();
        LatticePolytope { dim: self.dim, vertices }
    }

    pub fn translate(&self, t: &[Rat]) -> LatticePolytope {
        LatticePolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| rat::add(v, t)).collect() }
    }

    pub fn dilate(&self, k: &Rat) -> LatticePolytope {
        let vertices: Vec<Point> = self.vertices.iter().map(|v| rat::scale(v, k)).collect();
        LatticePolytope { dim: self.dim, vertices: dedup_sorted(vertices) }
    }

    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.vertices.len() == 1 {
            return Ok(other.translate(&self.vertices[0]));
        }
        if other.vertices.len() == 1 {
            return Ok(self.translate(&other.vertices[0]));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(rat::add(a, b));
            }
        }
        LatticePolytope::convex_hull(pts)
    }

    /// Minkowski sum together with its volume (zero when not full-dimensional).
    pub(crate) fn sum_with_volume(&self, other: &LatticePolytope) -> Result<(LatticePolytope, Rat)> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(rat::add(a, b));
            }
        }
        let pts = dedup_sorted(pts);
        if self.dim >= 2 && pts.len() > self.dim && affine_span(&pts).0.len() == self.dim {
            let h = hull_data(&pts)?;
            let vertices = h.vertices.iter().map(|&i| pts[i].clone()).collect();
            return Ok((LatticePolytope { dim: self.dim, vertices: dedup_sorted(vertices) }, h.volume));
        }
        let p = LatticePolytope::convex_hull(pts)?;
        let v = p.volume_or_zero();
        Ok((p, v))
    }

    /// Euclidean volume, normalized so the unit cube has volume one.
    pub fn volume(&self) -> Result<Rat> {
        if !self.is_full_dim() {
            return Err(Error::precondition(format!(
                "volume needs a full-dimensional polytope (affine dimension {} in ℚ^{})",
                self.affine_dim(),
                self.dim
            )));
        }
        Ok(self.volume_or_zero())
    }

    /// Volume, or zero when the polytope is not full-dimensional.
    pub fn volume_or_zero(&self) -> Rat {
        if self.dim == 0 {
            return Rat::one();
        }
        if self.vertices.len() <= self.dim {
            return Rat::zero();
        }
        if self.dim == 1 {
            return &self.vertices[self.vertices.len() - 1][0] - &self.vertices[0][0];
        }
        if self.affine_dim() < self.dim {
            return Rat::zero();
        }
        hull_data(&self.vertices).expect("full-dimensional vertex set").volume
    }

    /// Volume inside the affine span, normalized by the lattice `V ∩ ℤ^n`
    /// where `V` is spanned by the difference vectors. A point has volume one.
    pub fn volume_sublattice(&self) -> Result<Rat> {
        if self.vertices.len() == 1 {
            return Ok(Rat::one());
        }
        let frame = LatticeFrame::saturate(&self.direction_space());
        Ok(self.in_frame(&frame)?.volume_or_zero())
    }

    /// The polytope translated to its anchor and written in lattice coordinates.
    pub fn in_frame(&self, frame: &LatticeFrame) -> Result<LatticePolytope> {
        let a = self.anchor();
        let vertices = self
            .vertices
            .iter()
            .map(|v| frame.coords(&rat::sub(v, a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePolytope { dim: frame.rank(), vertices: dedup_sorted(vertices) })
    }

    /// Facets with primitive inward normals; requires full dimension.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        if !self.is_full_dim() {
            return Err(Error::precondition("facets requested for a lower-dimensional polytope"));
        }
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let h = hull_data(&self.vertices)?;
        Ok(h.facets
            .into_iter()
            .map(|f| {
                // hull indices refer to self.vertices, all of which are vertices
                Facet { vertices: f.vertices, ..f }
            })
            .collect())
    }

    pub fn normal_fan(&self) -> Result<Fan> {
        Fan::normal_fan(self)
    }

    pub fn contains(&self, p: &[Rat]) -> Result<bool> {
        let sum = LatticePolytope::convex_hull(self.vertices.iter().cloned().chain(std::iter::once(p.to_vec())).collect())?;
        Ok(sum.vertices == self.vertices)
    }
}

impl Serialize for LatticePolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson { dim: self.dim, vertices: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolytopeJson::deserialize(d)?;
        if let Some(bad) = j.vertices.iter().find(|v| v.len() != j.dim) {
            return Err(serde::de::Error::custom(format!("vertex of length {} in dimension {}", bad.len(), j.dim)));
        }
        LatticePolytope::convex_hull(j.vertices).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    #[serde(with = "rat::serde_rat::vec2")]
    vertices: Vec<Point>,
}

/// Signed term of a virtual polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub positive: bool,
    pub polytope: Arc<LatticePolytope>,
}

/// Formal signed Minkowski combination `Σ ±P_j`, compared through its support function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualPolytope {
    dim: usize,
    terms: Vec<Term>,
}

impl VirtualPolytope {
    pub fn zero(dim: usize) -> Self {
        VirtualPolytope { dim, terms: Vec::new() }
    }

    pub fn from_polytope(p: LatticePolytope) -> Self {
        VirtualPolytope { dim: p.dim, terms: vec![Term { positive: true, polytope: Arc::new(p) }] }
    }

    pub fn from_arc(p: Arc<LatticePolytope>) -> Self {
        VirtualPolytope { dim: p.dim, terms: vec![Term { positive: true, polytope: p }] }
    }

    /// `p - q`.
    pub fn difference(p: Arc<LatticePolytope>, q: Arc<LatticePolytope>) -> Result<Self> {
        if p.dim != q.dim {
            return Err(Error::DimensionMismatch { expected: p.dim, got: q.dim });
        }
        Ok(VirtualPolytope {
            dim: p.dim,
            terms: vec![Term { positive: true, polytope: p }, Term { positive: false, polytope: q }],
        })
    }

    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|t| t.polytope.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.polytope.dim });
        }
        Ok(VirtualPolytope { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn add(&self, other: &VirtualPolytope) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        VirtualPolytope::new(self.dim, terms)
    }

    pub fn neg(&self) -> Self {
        VirtualPolytope {
            dim: self.dim,
            terms: self.terms.iter().map(|t| Term { positive: !t.positive, polytope: t.polytope.clone() }).collect(),
        }
    }

    pub fn sub(&self, other: &VirtualPolytope) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn support_value(&self, xi: &[Rat]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, t| {
            let h = t.polytope.support_value(xi);
            if t.positive {
                acc + h
            } else {
                acc - h
            }
        })
    }

    /// Face at `ξ`, taken termwise.
    pub fn face(&self, xi: &[Rat]) -> VirtualPolytope {
        VirtualPolytope {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term { positive: t.positive, polytope: Arc::new(t.polytope.face(xi)) })
                .collect(),
        }
    }

    /// Each term translated to its anchor and written in lattice coordinates.
    pub fn in_frame(&self, frame: &LatticeFrame) -> Result<VirtualPolytope> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term { positive: t.positive, polytope: Arc::new(t.polytope.in_frame(frame)?) }))
            .collect::<Result<_>>()?;
        Ok(VirtualPolytope { dim: frame.rank(), terms })
    }

    /// Merges equal polytopes and cancels opposite signs.
    pub fn simplified(&self) -> VirtualPolytope {
        let mut acc: Vec<(Arc<LatticePolytope>, i64)> = Vec::new();
        for t in &self.terms {
            let s = if t.positive { 1 } else { -1 };
            match acc.iter_mut().find(|(p, _)| **p == *t.polytope) {
                Some(entry) => entry.1 += s,
                None => acc.push((t.polytope.clone(), s)),
            }
        }
        let mut terms = Vec::new();
        for (p, c) in acc {
            for _ in 0..c.unsigned_abs() {
                terms.push(Term { positive: c > 0, polytope: p.clone() });
            }
        }
        VirtualPolytope { dim: self.dim, terms }
    }

    /// Agreement of support functions on a list of directions.
    pub fn agrees_on(&self, other: &VirtualPolytope, directions: &[Point]) -> bool {
        directions.iter().all(|xi| self.support_value(xi) == other.support_value(xi))
    }
}

impl From<LatticePolytope> for VirtualPolytope {
    fn from(p: LatticePolytope) -> Self {
        VirtualPolytope::from_polytope(p)
    }
}

/// Standard simplex `conv{0, e_1, …, e_n}`.
pub fn unit_simplex(n: usize) -> LatticePolytope {
    let mut pts = vec![vec![Rat::zero(); n]];
    for i in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        pts.push(e);
    }
    LatticePolytope::from_vertices_unchecked(n, pts)
}

/// Unit cube `[0,1]^n`.
pub fn unit_cube(n: usize) -> LatticePolytope {
    let mut pts = Vec::new();
    for mask in 0..(1usize << n) {
        pts.push((0..n).map(|i| if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() }).collect());
    }
    LatticePolytope::from_vertices_unchecked(n, pts)
}

/// Segment between two points.
pub fn segment(a: Point, b: Point) -> LatticePolytope {
    LatticePolytope::from_vertices_unchecked(a.len(), vec![a, b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, point, rat};

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::convex_hull(v.iter().map(|p| point(p)).collect()).unwrap()
    }

    #[test]
    fn pentagon_from_square_plus_simplex() {
        let p = unit_cube(2).minkowski_sum(&unit_simplex(2)).unwrap();
        assert_eq!(p, poly(&[&[0, 0], &[2, 0], &[2, 1], &[1, 2], &[0, 2]]));
        assert_eq!(p.volume().unwrap(), frac(7, 2));
    }

    #[test]
    fn difference_body_of_simplex_is_a_hexagon() {
        let s = unit_simplex(2);
        let h = s.minkowski_sum(&s.dilate(&rat(-1))).unwrap();
        assert_eq!(h.vertices().len(), 6);
        assert_eq!(h.volume().unwrap(), rat(3));
    }

    #[test]
    fn empty_hull_is_an_error() {
        assert!(LatticePolytope::convex_hull(vec![]).is_err());
    }

    #[test]
    fn support_and_face() {
        let sq = unit_cube(2);
        assert_eq!(sq.support_value(&point(&[-1, -1])), rat(-2));
        assert_eq!(sq.face(&point(&[1, 0])), poly(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn lower_dimensional_volume_is_rejected() {
        let seg = poly(&[&[0, 0], &[1, 1]]);
        assert!(seg.volume().is_err());
        assert_eq!(seg.volume_or_zero(), rat(0));
    }

    #[test]
    fn sublattice_volumes() {
        let tri = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(tri.volume_sublattice().unwrap(), frac(1, 2));
        let seg = poly(&[&[0, 0], &[2, 2]]);
        assert_eq!(seg.volume_sublattice().unwrap(), rat(2));
        assert_eq!(poly(&[&[3, 4]]).volume_sublattice().unwrap(), rat(1));
    }

    #[test]
    fn hull_drops_interior_points_in_3d() {
        let mut pts: Vec<Point> = unit_cube(3).vertices().iter().map(|v| rat::scale(v, &rat(2))).collect();
        pts.push(point(&[1, 1, 1]));
        pts.push(point(&[1, 1, 0]));
        let p = LatticePolytope::convex_hull(pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.volume().unwrap(), rat(8));
        assert_eq!(p.facets().unwrap().len(), 6);
    }

    #[test]
    fn rational_vertices() {
        let p = LatticePolytope::convex_hull(vec![
            vec![rat(0), rat(0)],
            vec![frac(1, 2), rat(0)],
            vec![rat(0), frac(1, 3)],
        ])
        .unwrap();
        assert_eq!(p.volume().unwrap(), frac(1, 12));
    }

    #[test]
    fn virtual_support_is_additive() {
        let sq = Arc::new(unit_cube(2));
        let si = Arc::new(unit_simplex(2));
        let v = VirtualPolytope::difference(sq.clone(), si.clone()).unwrap();
        let xi = point(&[-1, -1]);
        assert_eq!(v.support_value(&xi), sq.support_value(&xi) - si.support_value(&xi));
        assert_eq!(v.support_value(&xi), rat(-1));
    }
}
