//! Toric vector bundle data of an invariant subspace: ray filtrations,
//! per-cone characters and splittings, and equivariant Chern classes.
//!
//! Two filtrations are in play. The increasing one `E^ξ_c = Σ_{⟨ξ,α⟩ ≤ c} E_α`
//! matches the min convention of the support functions. The decreasing one
//! `Ẽ^ρ_i = Σ_{⟨ρ,α⟩ ≥ i} E_α` is Klyachko's; it satisfies `Ẽ^ρ_i = E^{−ρ}_{−i}`,
//! so its compatible characters are those of the cone containing `−ρ`.

use crate::charseq::{critical_data, linearity_witness, sum_all, CharacteristicSequence, InvariantSubspace};
use crate::error::{Error, Result};
use crate::polyhedra::{Cone, Fan};
use crate::polymat::label_point;
use crate::rat::{self, Point, Rat};
use crate::ratlin::{self, compatible_decomposition, rref, Subspace};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Decreasing filtration `Ẽ^ρ_i` on a primitive ray.
#[derive(Clone, Debug)]
pub struct RayFiltration {
    pub ray: Vec<BigInt>,
    /// The ray as given, when it had to be made primitive.
    pub normalized_from: Option<Point>,
    pub r: usize,
    /// `(t, Ẽ^ρ_t)` for the distinct values `t = ⟨ρ, α⟩`, ascending. For
    /// `i` between two consecutive values the filtration equals the entry of
    /// the larger one; it is `ℚ^r` below the first and `0` above the last.
    pub steps: Vec<(Rat, Subspace)>,
}

impl RayFiltration {
    pub fn at(&self, i: &Rat) -> Subspace {
        match self.steps.iter().find(|(t, _)| t >= i) {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.r),
        }
    }

    pub fn ray_point(&self) -> Point {
        rat::from_ints(&self.ray)
    }

    /// `dim Ẽ^ρ_i` at every step value.
    pub fn profile(&self) -> Vec<(Rat, usize)> {
        self.steps.iter().map(|(t, s)| (t.clone(), s.dim())).collect()
    }
}

pub fn ray_filtration(l: &InvariantSubspace, ray: &[Rat]) -> Result<RayFiltration> {
    if ray.len() != l.n() {
        return Err(Error::DimensionMismatch { expected: l.n(), got: ray.len() });
    }
    if rat::is_zero_vec(ray) {
        return Err(Error::invalid("ray must be nonzero"));
    }
    let prim = rat::primitive(ray);
    let p = rat::from_ints(&prim);
    let normalized_from = (p.as_slice() != ray).then(|| ray.to_vec());
    let vals: BTreeSet<Rat> = l.characters().iter().map(|a| rat::dot(&p, &label_point(a))).collect();
    let steps = vals
        .into_iter()
        .map(|t| {
            let parts: Vec<Subspace> = l
                .characters()
                .iter()
                .zip(l.subspaces())
                .filter(|(a, _)| rat::dot(&p, &label_point(a)) >= t)
                .map(|(_, s)| s.clone())
                .collect();
            (t, sum_all(l.r(), &parts))
        })
        .collect();
    Ok(RayFiltration { ray: prim, normalized_from, r: l.r(), steps })
}

/// Characters `β_{σ,1} < … < β_{σ,k}` (ordered by their value at an interior
/// point) with multiplicities and the splitting `E = V_1 ⊕ ⋯ ⊕ V_k`.
#[derive(Clone, Debug)]
pub struct ConeChernData {
    pub generators: Vec<Point>,
    pub characters: Vec<Point>,
    pub multiplicities: Vec<usize>,
    pub splitting: Vec<Subspace>,
}

impl ConeChernData {
    /// Chern roots `⟨·, β_j⟩` repeated by multiplicity.
    pub fn roots(&self) -> Vec<Point> {
        self.characters
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(b, &m)| std::iter::repeat(b.clone()).take(m))
            .collect()
    }

    /// `Σ_{⟨ξ,β_j⟩ ≤ c} V_j`.
    pub fn increasing(&self, xi: &[Rat], c: &Rat, r: usize) -> Subspace {
        let parts: Vec<Subspace> = self
            .characters
            .iter()
            .zip(&self.splitting)
            .filter(|(b, _)| rat::dot(xi, b) <= *c)
            .map(|(_, v)| v.clone())
            .collect();
        sum_all(r, &parts)
    }

    /// `Σ_{⟨ξ,β_j⟩ ≥ i} V_j`.
    pub fn decreasing(&self, xi: &[Rat], i: &Rat, r: usize) -> Subspace {
        let parts: Vec<Subspace> = self
            .characters
            .iter()
            .zip(&self.splitting)
            .filter(|(b, _)| rat::dot(xi, b) >= *i)
            .map(|(_, v)| v.clone())
            .collect();
        sum_all(r, &parts)
    }
}

/// Solves `⟨g, β⟩ = h(g)` over the generators of a full-dimensional cone.
fn solve_on_generators(gens: &[Point], values: &[Rat]) -> Option<Point> {
    let n = gens[0].len();
    let rows: Vec<Point> = gens
        .iter()
        .zip(values)
        .map(|(g, v)| {
            let mut row = g.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&rows);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

pub fn cone_chern_data(l: &InvariantSubspace, seq: &CharacteristicSequence, cone: &Cone, seed: u64) -> Result<ConeChernData> {
    let n = l.n();
    if cone.dim() != n {
        return Err(Error::precondition("characters are underdetermined on a cone that is not full-dimensional"));
    }
    let gens = &cone.generators;
    let mut betas: Vec<Point> = Vec::with_capacity(l.r());
    for i in 1..=seq.r() {
        let vals: Vec<Rat> = gens
            .iter()
            .map(|g| seq.delta(i).support_value(g) - seq.delta(i - 1).support_value(g))
            .collect();
        let beta = solve_on_generators(gens, &vals).ok_or_else(|| {
            Error::precondition(format!("h_{i} is not linear on the cone with generators {gens:?}"))
        })?;
        betas.push(beta);
    }
    let inner = cone.interior_point();
    let cd = critical_data(l, &inner)?;
    let mut characters: Vec<Point> = Vec::new();
    let mut multiplicities = Vec::new();
    let mut prev = 0;
    for (c, d) in &cd.jumps {
        let group = &betas[prev..*d];
        if group.iter().any(|b| b != &group[0] || rat::dot(&inner, b) != *c) {
            return Err(Error::precondition(format!(
                "characters on the cone with generators {gens:?} do not match the critical numbers at its interior"
            )));
        }
        characters.push(group[0].clone());
        multiplicities.push(d - prev);
        prev = *d;
    }
    let splitting = if l.r() == 0 {
        Vec::new()
    } else {
        let w = ratlin::generic_flag(l.subspaces(), l.r(), seed)?;
        compatible_decomposition(cd.flag.as_ref().expect("subspace source"), &w)?
    };
    Ok(ConeChernData { generators: gens.clone(), characters, multiplicities, splitting })
}

/// Outcome of the compatibility checks for one ray of one maximal cone.
#[derive(Clone, Debug, Serialize)]
pub struct RayCheck {
    pub cone: usize,
    pub ray: usize,
    /// `E^ρ_c = Σ_{⟨ρ,β_j⟩ ≤ c} V_j` for all `c`.
    pub increasing: bool,
    /// `Ẽ^{−ρ}_i = Σ_{⟨−ρ,β_j⟩ ≥ i} V_j` for all `i`.
    pub decreasing_reflected: bool,
    /// `Ẽ^ρ_i = Σ_{⟨ρ,β_j⟩ ≥ i} V_j`, the decreasing filtration paired with
    /// the cone containing `ρ` itself. Informational: it holds only when the
    /// filtration is symmetric.
    pub decreasing_same_cone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub linear: bool,
    /// Interior point of a cone on which some `h_{Δ_i}` is not linear.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub checks: Vec<RayCheck>,
    pub pass: bool,
}

fn thresholds(l: &InvariantSubspace, xi: &[Rat], data: &ConeChernData) -> BTreeSet<Rat> {
    let mut t: BTreeSet<Rat> = l.characters().iter().map(|a| rat::dot(xi, &label_point(a))).collect();
    t.extend(data.characters.iter().map(|b| rat::dot(xi, b)));
    let extra: Vec<Rat> = t.iter().map(|x| x - Rat::one()).chain(t.iter().map(|x| x + Rat::one())).collect();
    t.extend(extra);
    t
}

/// Audits linearity of every `h_{Δ_i}` on every maximal cone of `fan`, then
/// checks the compatibility conditions on each ray of each maximal cone.
pub fn verify_compatibility(l: &InvariantSubspace, seq: &CharacteristicSequence, fan: &Fan, seed: u64) -> Result<CompatibilityReport> {
    for i in 1..=seq.r() {
        if let Some((_, w)) = linearity_witness(fan, seq.delta(i)) {
            return Ok(CompatibilityReport {
                linear: false,
                witness: Some(w.iter().map(rat::fmt_rat).collect()),
                checks: Vec::new(),
                pass: false,
            });
        }
    }
    let r = l.r();
    let per_cone: Vec<Result<Vec<RayCheck>>> = (0..fan.maximal_cones().len())
        .into_par_iter()
        .map(|ci| {
            let data = cone_chern_data(l, seq, &fan.cone(ci), seed)?;
            let mut out = Vec::new();
            for &ri in &fan.maximal_cones()[ci] {
                let rho = fan.ray(ri);
                let neg = rat::scale(&rho, &-Rat::one());
                let increasing = thresholds(l, &rho, &data)
                    .iter()
                    .all(|c| l.filtration(&rho, c) == data.increasing(&rho, c, r));
                let refl = ray_filtration(l, &neg)?;
                let decreasing_reflected = thresholds(l, &neg, &data)
                    .iter()
                    .all(|i| refl.at(i) == data.decreasing(&neg, i, r));
                let same = ray_filtration(l, &rho)?;
                let decreasing_same_cone = thresholds(l, &rho, &data)
                    .iter()
                    .all(|i| same.at(i) == data.decreasing(&rho, i, r));
                out.push(RayCheck { cone: ci, ray: ri, increasing, decreasing_reflected, decreasing_same_cone });
            }
            Ok(out)
        })
        .collect();
    let mut checks = Vec::new();
    for c in per_cone {
        checks.extend(c?);
    }
    let pass = checks.iter().all(|c| c.increasing && c.decreasing_reflected);
    Ok(CompatibilityReport { linear: true, witness: None, checks, pass })
}

/// Homogeneous polynomial in `n` variables, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn constant(n: usize, c: Rat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; n], c);
        }
        Poly { terms }
    }

    pub fn linear(b: &[Rat]) -> Poly {
        let n = b.len();
        let mut terms = BTreeMap::new();
        for (i, c) in b.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                terms.insert(e, c.clone());
            }
        }
        Poly { terms }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *v += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = terms.entry(e).or_insert_with(Rat::zero);
                *v += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(Rat::one(), |p, (&k, xi)| p * num_traits::pow(xi.clone(), k as usize));
            acc + c * m
        })
    }

    /// Coefficients on [`monomials`]`(n, degree)`.
    pub fn dense(&self, n: usize, degree: u32) -> Vec<Rat> {
        monomials(n, degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(Rat::zero))
            .collect()
    }
}

/// Exponent vectors of total degree `d` in `n` variables, lexicographically
/// descending (`x_1^d` first).
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// `e_i` of the linear forms `⟨·, β⟩`.
pub fn elementary_symmetric(n: usize, roots: &[Point], i: usize) -> Poly {
    let mut e: Vec<Poly> = vec![Poly::constant(n, Rat::one())];
    e.resize(i + 1, Poly::default());
    for b in roots {
        let lin = Poly::linear(b);
        for k in (1..=i).rev() {
            e[k] = e[k].add(&e[k - 1].mul(&lin));
        }
    }
    e.swap_remove(i)
}

/// Polynomial on one maximal cone.
#[derive(Clone, Debug, Serialize)]
pub struct ConePolynomial {
    pub cone: Vec<usize>,
    #[serde(with = "rat::serde_rat::vec")]
    pub coefficients: Vec<Rat>,
    #[serde(skip)]
    pub poly: Poly,
}

/// Piecewise polynomial of fixed degree on the maximal cones of a fan.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewisePolynomial {
    pub n: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    pub cones: Vec<ConePolynomial>,
    pub continuous: bool,
}

/// `c_i^T` as `e_i(⟨·,β_{σ,1}⟩, …)` on every maximal cone, with a
/// continuity audit on sample points inside each shared facet.
pub fn equivariant_chern(
    l: &InvariantSubspace,
    seq: &CharacteristicSequence,
    fan: &Fan,
    i: usize,
    seed: u64,
) -> Result<PiecewisePolynomial> {
    let n = l.n();
    let cones: Vec<ConePolynomial> = (0..fan.maximal_cones().len())
        .into_par_iter()
        .map(|ci| {
            let data = cone_chern_data(l, seq, &fan.cone(ci), seed)?;
            let poly = elementary_symmetric(n, &data.roots(), i);
            Ok(ConePolynomial { cone: fan.maximal_cones()[ci].clone(), coefficients: poly.dense(n, i as u32), poly })
        })
        .collect::<Result<_>>()?;
    let continuous = facet_continuity(fan, &cones, i as u32 + 2);
    Ok(PiecewisePolynomial { n, degree: i as u32, monomials: monomials(n, i as u32), cones, continuous })
}

fn facet_continuity(fan: &Fan, cones: &[ConePolynomial], samples: u32) -> bool {
    let n = fan.dim();
    let mc = fan.maximal_cones();
    for a in 0..mc.len() {
        for b in a + 1..mc.len() {
            let shared: Vec<usize> = mc[a].iter().filter(|r| mc[b].contains(r)).copied().collect();
            let gens: Vec<Point> = shared.iter().map(|&r| fan.ray(r)).collect();
            if n == 0 || ratlin::rank(&gens) + 1 != n {
                continue;
            }
            for k in 0..samples {
                let x = gens.iter().enumerate().fold(vec![Rat::zero(); n], |acc, (j, g)| {
                    let w = 1 + ((k as usize + 1) * (j + 3)) % 7;
                    rat::add(&acc, &rat::scale(g, &rat::rat(w as i64)))
                });
                if cones[a].poly.eval(&x) != cones[b].poly.eval(&x) {
                    return false;
                }
            }
        }
    }
    true
}

/// `∫ p` over the complete toric variety of `fan` by localization at the
/// torus-fixed points of a simplicial refinement, evaluated at a generic
/// seeded point. The result is independent of that point when `p` is a
/// genuine piecewise polynomial of degree `n`.
pub fn localization_degree(pp: &PiecewisePolynomial, fan: &Fan, seed: u64) -> Result<Rat> {
    let n = fan.dim();
    let simp = if fan.is_simplicial() { fan.clone() } else { fan.simplicial_refinement()? };
    struct Local {
        owner: usize,
        duals: Vec<Point>,
        mult: Rat,
    }
    let mut locals = Vec::new();
    for (si, c) in simp.maximal_cones().iter().enumerate() {
        let cone = simp.cone(si);
        let inner = cone.interior_point();
        let owner = (0..fan.maximal_cones().len())
            .find(|&j| fan.cone(j).contains(&inner).unwrap_or(false))
            .ok_or_else(|| Error::invalid("refined cone lies in no maximal cone"))?;
        let gens: Vec<Point> = c.iter().map(|&r| simp.ray(r)).collect();
        let m = ratlin::RatMatrix::from_rows(gens.clone())?;
        let inv = m.inverse().ok_or_else(|| Error::invalid("simplicial cone with dependent rays"))?;
        // columns of the inverse are the dual basis: ⟨u_i, m_j⟩ = δ_ij
        let duals: Vec<Point> = (0..n).map(|j| inv.rows().iter().map(|row| row[j].clone()).collect()).collect();
        let mult = rat::abs(&determinant(&gens));
        locals.push(Local { owner, duals, mult });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ratlin::DEFAULT_ATTEMPTS {
        let xi: Point = (0..n).map(|_| rat::random_rat(&mut rng, 97, 7)).collect();
        let mut total = Rat::zero();
        let mut ok = true;
        for loc in &locals {
            let denom = loc.duals.iter().fold(loc.mult.clone(), |acc, m| acc * rat::dot(m, &xi));
            if denom.is_zero() {
                ok = false;
                break;
            }
            total += pp.cones[loc.owner].poly.eval(&xi) / denom;
        }
        if ok {
            return Ok(total);
        }
    }
    Err(Error::GenericityExhausted { attempts: ratlin::DEFAULT_ATTEMPTS, what: "localization point".into() })
}

fn determinant(rows: &[Point]) -> Rat {
    let n = rows.len();
    let mut m: Vec<Point> = rows.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            let f = &m[r][c] / &piv;
            if !f.is_zero() {
                for k in c..n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
    }
    det
}

/// Degree of the top equivariant Chern class, normalized to count points:
/// `(−1)^n ∫ c_n^T`, the sign coming from the min convention of the roots.
pub fn top_chern_degree(l: &InvariantSubspace, seq: &CharacteristicSequence, fan: &Fan, seed: u64) -> Result<Rat> {
    let n = l.n();
    if l.r() != n {
        return Err(Error::precondition(format!("top Chern degree needs rank {n}, got {}", l.r())));
    }
    let pp = equivariant_chern(l, seq, fan, n, seed)?;
    if !pp.continuous {
        return Err(Error::invalid("top Chern class is not continuous across facets"));
    }
    let d = localization_degree(&pp, fan, seed)?;
    Ok(if n % 2 == 1 { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charseq::{characteristic_polytopes, fan_of_subspace};
    use crate::polyhedra::LatticePolytope;
    use crate::rat::{point, rat};

    fn sq2() -> InvariantSubspace {
        InvariantSubspace::new(
            2,
            2,
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            vec![vec![point(&[1, 0]), point(&[0, 1])], vec![point(&[1, 0])], vec![point(&[0, 1])]],
            false,
        )
        .unwrap()
    }

    #[test]
    fn sq2_ray_filtration() {
        let f = ray_filtration(&sq2(), &point(&[1, 0])).unwrap();
        assert!(f.at(&rat(0)).is_full());
        assert_eq!(f.at(&rat(1)), Subspace::span(2, vec![point(&[1, 0])]).unwrap());
        assert!(f.at(&rat(2)).is_zero());
        let g = ray_filtration(&sq2(), &point(&[2, 0])).unwrap();
        assert_eq!(g.normalized_from, Some(point(&[2, 0])));
    }

    #[test]
    fn sq2_cone_data() {
        let l = sq2();
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        let q = cone_chern_data(&l, &seq, &Cone::new(vec![point(&[1, 0]), point(&[0, 1])]), 0).unwrap();
        assert_eq!(q.characters, vec![point(&[0, 0])]);
        assert_eq!(q.multiplicities, vec![2]);
        let c = cone_chern_data(&l, &seq, &Cone::new(vec![point(&[-1, 0]), point(&[-1, -1])]), 0).unwrap();
        assert_eq!(c.characters, vec![point(&[1, 0]), point(&[0, 1])]);
        assert_eq!(c.multiplicities, vec![1, 1]);
    }

    #[test]
    fn sq2_compatibility_and_chern() {
        let l = sq2();
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        let fan = fan_of_subspace(&l).unwrap();
        let rep = verify_compatibility(&l, &seq, &fan, 0).unwrap();
        assert!(rep.pass, "{rep:?}");
        let finer = fan.stellar_subdivision(0).unwrap();
        assert!(verify_compatibility(&l, &seq, &finer, 0).unwrap().pass);
        let coarse = LatticePolytope::convex_hull(vec![point(&[0, 0]), point(&[1, 0]), point(&[0, 1]), point(&[1, 1])])
            .unwrap()
            .normal_fan()
            .unwrap();
        let bad = verify_compatibility(&l, &seq, &coarse, 0).unwrap();
        assert!(!bad.linear && bad.witness.is_some());
        let c1 = equivariant_chern(&l, &seq, &fan, 1, 0).unwrap();
        assert!(c1.continuous);
        assert_eq!(top_chern_degree(&l, &seq, &fan, 0).unwrap(), rat(1));
    }

    #[test]
    fn localization_recovers_volume() {
        // ∫ h_P^n = (−1)^n n! Vol(P) for the min-convention support function
        for p in [
            LatticePolytope::convex_hull(vec![point(&[0, 0]), point(&[2, 0]), point(&[0, 1])]).unwrap(),
            LatticePolytope::convex_hull(vec![point(&[0, 0]), point(&[3, 1]), point(&[1, 2]), point(&[0, 1])]).unwrap(),
        ] {
            let fan = p.normal_fan().unwrap();
            let cones = (0..fan.maximal_cones().len())
                .map(|ci| {
                    let v = p.face(&fan.cone(ci).interior_point()).vertices()[0].clone();
                    let lin = Poly::linear(&v);
                    let poly = lin.mul(&lin);
                    ConePolynomial { cone: fan.maximal_cones()[ci].clone(), coefficients: poly.dense(2, 2), poly }
                })
                .collect();
            let pp = PiecewisePolynomial { n: 2, degree: 2, monomials: monomials(2, 2), cones, continuous: true };
            let d = localization_degree(&pp, &fan, 1).unwrap();
            assert_eq!(d, rat(2) * p.volume().unwrap(), "{p:?}");
        }
    }

    #[test]
    fn elementary_symmetric_basics() {
        let roots = vec![point(&[1, 0]), point(&[0, 1])];
        let e2 = elementary_symmetric(2, &roots, 2);
        assert_eq!(e2.dense(2, 2), vec![rat(0), rat(1), rat(0)]);
        assert_eq!(elementary_symmetric(2, &roots, 0), Poly::constant(2, rat(1)));
        assert_eq!(monomials(3, 2).len(), 6);
    }
}
