//! Mixed volumes, normalized so that `MVol(P, …, P) = Vol(P)`.
//!
//! Two interchangeable algorithms sit behind [`MixedVolumeAlgorithm`]:
//! polarization (inclusion–exclusion over Minkowski sums) and the recursive
//! facet formula over a fan on which every support function is linear.
//! [`MixedVolumeRegistry`] maps names to algorithms so callers can pick one
//! at run time.

use super::{Fan, LatticePolytope, Term, VirtualPolytope};
use crate::error::{Error, Result};
use crate::lattice::LatticeFrame;
use crate::rat::{self, Point, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub trait MixedVolumeAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;

    /// `MVol(P_1, …, P_n)` of `n` virtual polytopes in `ℚ^n`.
    fn mixed_volume(&self, ps: &[VirtualPolytope]) -> Result<Rat>;
}

/// Inclusion–exclusion over Minkowski sums after multilinear expansion.
pub struct Polarization;

/// Recursive facet formula over the normal fan of the sum of all terms.
pub struct RecursiveFan;

impl MixedVolumeAlgorithm for Polarization {
    fn name(&self) -> &'static str {
        "polarization"
    }

    fn mixed_volume(&self, ps: &[VirtualPolytope]) -> Result<Rat> {
        check_arity(ps)?;
        split_segments(ps, |qs| Ok(Expansion::new(qs).polarize(qs.len())))
    }
}

impl MixedVolumeAlgorithm for RecursiveFan {
    fn name(&self) -> &'static str {
        "recursive"
    }

    fn mixed_volume(&self, ps: &[VirtualPolytope]) -> Result<Rat> {
        check_arity(ps)?;
        split_segments(ps, |qs| recursive(qs, None))
    }
}

/// Name-keyed collection of mixed volume algorithms.
pub struct MixedVolumeRegistry {
    entries: Vec<Box<dyn MixedVolumeAlgorithm>>,
}

impl Default for MixedVolumeRegistry {
    fn default() -> Self {
        let mut r = MixedVolumeRegistry { entries: Vec::new() };
        r.register(Box::new(Polarization)).expect("fresh registry");
        r.register(Box::new(RecursiveFan)).expect("fresh registry");
        r
    }
}

impl MixedVolumeRegistry {
    pub fn empty() -> Self {
        MixedVolumeRegistry { entries: Vec::new() }
    }

    pub fn register(&mut self, alg: Box<dyn MixedVolumeAlgorithm>) -> Result<()> {
        if self.entries.iter().any(|e| e.name() == alg.name()) {
            return Err(Error::invalid(format!("mixed volume algorithm `{}` registered twice", alg.name())));
        }
        self.entries.push(alg);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&dyn MixedVolumeAlgorithm> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown { kind: "mixed volume algorithm", name: name.to_string() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn MixedVolumeAlgorithm> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

fn check_arity(ps: &[VirtualPolytope]) -> Result<()> {
    let n = ps.len();
    if let Some(bad) = ps.iter().find(|p| p.dim() != n) {
        return Err(Error::precondition(format!(
            "{} polytopes given in ambient dimension {}; mixed volume needs exactly as many as the dimension",
            n,
            bad.dim()
        )));
    }
    Ok(())
}

/// If some slot is a single segment `[a, a + ℓv]` with `v` primitive,
/// `MVol_n(K_1, …, K_{n−1}, S) = (ℓ/n)·MVol_{n−1}(πK_1, …, πK_{n−1})` where
/// `π: ℤ^n → ℤ^n/ℤv ≅ ℤ^{n−1}`. Returns the factor and projected slots.
pub fn split_segment(ps: &[VirtualPolytope]) -> Result<Option<(Rat, Vec<VirtualPolytope>)>> {
    let n = ps.len();
    let Some(at) = ps.iter().position(|p| {
        matches!(p.terms(), [t] if t.positive && t.polytope.vertices().len() == 2)
    }) else {
        return Ok(None);
    };
    let seg = &ps[at].terms()[0].polytope;
    let v = rat::sub(&seg.vertices()[1], &seg.vertices()[0]);
    let prim = rat::primitive(&v);
    let len = v.iter().zip(&prim).find(|(_, p)| !p.is_zero()).map(|(x, p)| x / Rat::from_integer(p.clone())).unwrap();
    let len = if len < Rat::zero() { -len } else { len };
    let rows: Vec<Point> = crate::lattice::integer_kernel(&[prim], n).iter().map(|r| rat::from_ints(r)).collect();
    let project = |p: &LatticePolytope| -> Result<LatticePolytope> {
        LatticePolytope::convex_hull(p.vertices().iter().map(|x| rows.iter().map(|w| rat::dot(w, x)).collect()).collect())
    };
    let mut rest = Vec::with_capacity(n - 1);
    for (i, p) in ps.iter().enumerate() {
        if i == at {
            continue;
        }
        let terms = p
            .terms()
            .iter()
            .map(|t| Ok(Term { positive: t.positive, polytope: Arc::new(project(&t.polytope)?) }))
            .collect::<Result<Vec<_>>>()?;
        rest.push(VirtualPolytope::new(n - 1, terms)?);
    }
    Ok(Some((len / rat::rat(n as i64), rest)))
}

/// Peels segment slots off with [`split_segment`] and evaluates the rest with `f`.
fn split_segments(ps: &[VirtualPolytope], f: impl Fn(&[VirtualPolytope]) -> Result<Rat>) -> Result<Rat> {
    let mut factor = Rat::one();
    let mut cur = ps.to_vec();
    while let Some((c, next)) = split_segment(&cur)? {
        factor *= c;
        cur = next;
    }
    if cur.is_empty() {
        return Ok(factor);
    }
    Ok(factor * f(&cur)?)
}

/// Mixed volume of genuine polytopes by polarization.
pub fn mixed_volume(ps: &[LatticePolytope]) -> Result<Rat> {
    let vs: Vec<VirtualPolytope> = ps.iter().cloned().map(VirtualPolytope::from_polytope).collect();
    Polarization.mixed_volume(&vs)
}

/// Mixed volume of virtual polytopes by multilinear expansion and polarization.
pub fn mixed_volume_virtual(ps: &[VirtualPolytope]) -> Result<Rat> {
    Polarization.mixed_volume(ps)
}

/// Recursive formula over an explicit complete fan on which every term's
/// support function is linear on every maximal cone.
pub fn mixed_volume_recursive(ps: &[VirtualPolytope], fan: &Fan) -> Result<Rat> {
    check_arity(ps)?;
    if fan.dim() != ps.len() {
        return Err(Error::DimensionMismatch { expected: ps.len(), got: fan.dim() });
    }
    for (ci, c) in fan.maximal_cones().iter().enumerate() {
        let cone = fan.cone(ci);
        let inner = cone.interior_point();
        for p in ps {
            for t in p.terms() {
                let face = t.polytope.face(&inner);
                let ok = face.vertices().len() == 1
                    && cone.generators.iter().all(|g| rat::dot(g, &face.vertices()[0]) == t.polytope.support_value(g));
                if !ok {
                    let w: Vec<String> = inner.iter().map(rat::fmt_rat).collect();
                    return Err(Error::precondition(format!(
                        "support function of {:?} is not linear on cone {:?} (witness ξ = ({}))",
                        t.polytope,
                        c,
                        w.join(",")
                    )));
                }
            }
        }
    }
    let rays: Vec<Point> = (0..fan.rays().len()).map(|i| fan.ray(i)).collect();
    recursive(ps, Some(rays))
}

/// Mixed volume of polytopes lying in translates of the span of `frame`,
/// measured in that lattice. Each term is translated to its anchor first.
pub fn mixed_volume_in_lattice(
    ps: &[VirtualPolytope],
    frame: &LatticeFrame,
    alg: &dyn MixedVolumeAlgorithm,
) -> Result<Rat> {
    let local: Vec<VirtualPolytope> = ps.iter().map(|p| p.in_frame(frame)).collect::<Result<_>>()?;
    alg.mixed_volume(&local)
}

/// Multilinear expansion of a sequence of virtual polytopes into integer
/// combinations of mixed volumes of genuine polytopes.
pub struct Expansion {
    bodies: Vec<Arc<LatticePolytope>>,
    /// Sorted multisets of body ids with their coefficients.
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl Expansion {
    pub fn new(ps: &[VirtualPolytope]) -> Self {
        let mut bodies: Vec<Arc<LatticePolytope>> = Vec::new();
        let mut ids: HashMap<LatticePolytope, usize> = HashMap::new();
        let mut slots: Vec<Vec<(usize, bool)>> = Vec::with_capacity(ps.len());
        for p in ps {
            let mut slot = Vec::new();
            for t in p.terms() {
                let id = *ids.entry((*t.polytope).clone()).or_insert_with(|| {
                    bodies.push(t.polytope.clone());
                    bodies.len() - 1
                });
                slot.push((id, t.positive));
            }
            slots.push(slot);
        }
        let mut terms: BTreeMap<Vec<usize>, BigInt> = BTreeMap::from([(Vec::new(), BigInt::one())]);
        for slot in &slots {
            let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            for (ms, c) in &terms {
                for &(id, pos) in slot {
                    let mut m = ms.clone();
                    let at = m.partition_point(|&x| x <= id);
                    m.insert(at, id);
                    let e = next.entry(m).or_insert_with(BigInt::zero);
                    if pos {
                        *e += c;
                    } else {
                        *e -= c;
                    }
                }
            }
            next.retain(|_, c| !c.is_zero());
            terms = next;
        }
        Expansion { bodies, terms }
    }

    pub fn bodies(&self) -> &[Arc<LatticePolytope>] {
        &self.bodies
    }

    /// Nonzero integer coefficients of `MVol(P_{i_1}, …, P_{i_n})`.
    pub fn terms(&self) -> &BTreeMap<Vec<usize>, BigInt> {
        &self.terms
    }

    /// Evaluates every expanded term by polarization, sharing Minkowski sums.
    pub fn polarize(&self, n: usize) -> Rat {
        let (total, _) = self.polarize_with_terms(n);
        total
    }

    /// Total and the mixed volume of each expanded term.
    pub fn polarize_with_terms(&self, n: usize) -> (Rat, Vec<Rat>) {
        if n == 0 {
            let c = self.terms.values().fold(BigInt::zero(), |a, b| a + b);
            return (Rat::from_integer(c), vec![Rat::one(); self.terms.len()]);
        }
        // per term: coefficients of Vol(Σ c_j A_j), keyed by sorted (id, count)
        let mut per_term: Vec<BTreeMap<Vec<(usize, usize)>, BigInt>> = Vec::with_capacity(self.terms.len());
        let mut needed: BTreeMap<Vec<(usize, usize)>, ()> = BTreeMap::new();
        for ms in self.terms.keys() {
            let mut counts: Vec<(usize, usize)> = Vec::new();
            for &id in ms {
                match counts.last_mut() {
                    Some((j, c)) if *j == id => *c += 1,
                    _ => counts.push((id, 1)),
                }
            }
            let mut coeffs = BTreeMap::new();
            let skip = counts.iter().any(|&(id, _)| self.bodies[id].vertices().len() == 1);
            if !skip {
                polarization_coefficients(&counts, n, &mut coeffs);
            }
            for k in coeffs.keys() {
                needed.insert(k.clone(), ());
            }
            per_term.push(coeffs);
        }
        let volumes = self.sum_volumes(needed.into_keys().collect());
        let nf = Rat::from_integer(rat::factorial(n));
        let mut each = Vec::with_capacity(per_term.len());
        for coeffs in &per_term {
            let mut acc = Rat::zero();
            for (k, c) in coeffs {
                acc += Rat::from_integer(c.clone()) * &volumes[k];
            }
            each.push(acc / &nf);
        }
        let total = self
            .terms
            .values()
            .zip(&each)
            .fold(Rat::zero(), |a, (c, m)| a + Rat::from_integer(c.clone()) * m);
        (total, each)
    }

    /// Volumes of `Σ c_j A_j` for each key, building sums level by level.
    fn sum_volumes(&self, keys: Vec<Vec<(usize, usize)>>) -> HashMap<Vec<(usize, usize)>, Rat> {
        let pred = |k: &Vec<(usize, usize)>| -> Option<(Vec<(usize, usize)>, usize)> {
            let mut p = k.clone();
            let (id, c) = *p.last()?;
            if c == 1 {
                p.pop();
            } else {
                p.last_mut().unwrap().1 -= 1;
            }
            Some((p, id))
        };
        let level = |k: &Vec<(usize, usize)>| k.iter().map(|x| x.1).sum::<usize>();
        let mut closure: BTreeMap<usize, Vec<Vec<(usize, usize)>>> = BTreeMap::new();
        let mut seen: std::collections::BTreeSet<Vec<(usize, usize)>> = std::collections::BTreeSet::new();
        let mut stack = keys.clone();
        while let Some(k) = stack.pop() {
            if k.is_empty() || !seen.insert(k.clone()) {
                continue;
            }
            closure.entry(level(&k)).or_default().push(k.clone());
            if let Some((p, _)) = pred(&k) {
                stack.push(p);
            }
        }
        let mut sums: HashMap<Vec<(usize, usize)>, (Arc<LatticePolytope>, Rat)> = HashMap::new();
        for (_, ks) in closure {
            let computed: Vec<(Vec<(usize, usize)>, (Arc<LatticePolytope>, Rat))> = ks
                .par_iter()
                .map(|k| {
                    let (p, id) = pred(k).expect("nonempty key");
                    let body = &self.bodies[id];
                    let (s, v) = if p.is_empty() {
                        ((**body).clone(), body.volume_or_zero())
                    } else {
                        sums[&p].0.sum_with_volume(body).expect("bodies share the ambient dimension")
                    };
                    (k.clone(), (Arc::new(s), v))
                })
                .collect();
            sums.extend(computed);
        }
        keys.into_iter().map(|k| {
            let v = sums[&k].1.clone();
            (k, v)
        }).collect()
    }
}

/// `n! MVol(A_1^{m_1}, …) = Σ_{0 ≠ c ≤ m} (-1)^{n-|c|} Π binom(m_j, c_j) Vol(Σ c_j A_j)`.
fn polarization_coefficients(counts: &[(usize, usize)], n: usize, out: &mut BTreeMap<Vec<(usize, usize)>, BigInt>) {
    let mut c = vec![0usize; counts.len()];
    loop {
        // increment mixed-radix counter
        let mut i = 0;
        while i < c.len() {
            if c[i] < counts[i].1 {
                c[i] += 1;
                break;
            }
            c[i] = 0;
            i += 1;
        }
        if i == c.len() {
            break;
        }
        let size: usize = c.iter().sum();
        let mut coeff = BigInt::one();
        for (ci, &(_, m)) in c.iter().zip(counts) {
            coeff *= rat::binomial(m, *ci);
        }
        if (n - size) % 2 == 1 {
            coeff = -coeff;
        }
        let key: Vec<(usize, usize)> = counts.iter().zip(&c).filter(|(_, &ci)| ci > 0).map(|(&(id, _), &ci)| (id, ci)).collect();
        *out.entry(key).or_insert_with(BigInt::zero) += coeff;
    }
}

/// `MVol_n(P_1, …, P_n) = -(1/n) Σ_ρ h_{P_n}(ξ_ρ) MVol_{n-1}(P_1^ξ, …, P_{n-1}^ξ)`
/// with faces measured in `ξ^⊥ ∩ ℤ^n` and `ξ_ρ` primitive.
fn recursive(ps: &[VirtualPolytope], rays: Option<Vec<Point>>) -> Result<Rat> {
    let n = ps.len();
    if n == 0 {
        return Ok(Rat::one());
    }
    if n == 1 {
        return Ok(ps[0].terms().iter().fold(Rat::zero(), |acc, t| {
            let v = t.polytope.vertices();
            let len = &v[v.len() - 1][0] - &v[0][0];
            if t.positive {
                acc + len
            } else {
                acc - len
            }
        }));
    }
    if ps.iter().any(|p| p.terms().is_empty()) {
        return Ok(Rat::zero());
    }
    // put the slot with the fewest vertices last and move its terms to the origin
    let last = (0..n)
        .min_by_key(|&i| ps[i].terms().iter().map(|t| t.polytope.vertices().len()).sum::<usize>())
        .unwrap();
    let mut rest: Vec<VirtualPolytope> = ps.to_vec();
    let tail = rest.remove(last);
    let tail = VirtualPolytope::new(
        n,
        tail.terms()
            .iter()
            .map(|t| {
                let a: Point = t.polytope.anchor().iter().map(|x| -x.clone()).collect();
                Term { positive: t.positive, polytope: Arc::new(t.polytope.translate(&a)) }
            })
            .collect(),
    )?;
    if tail.terms().iter().all(|t| t.polytope.vertices().len() == 1) {
        return Ok(Rat::zero());
    }
    let rays = match rays {
        Some(r) => r,
        None => {
            let mut distinct: Vec<LatticePolytope> = Vec::new();
            for p in ps {
                for t in p.terms() {
                    let a: Point = t.polytope.anchor().iter().map(|x| -x.clone()).collect();
                    let q = t.polytope.translate(&a);
                    if q.vertices().len() > 1 && !distinct.contains(&q) {
                        distinct.push(q);
                    }
                }
            }
            let mut sum = LatticePolytope::point(vec![Rat::zero(); n]);
            for q in &distinct {
                sum = sum.minkowski_sum(q)?;
            }
            if !sum.is_full_dim() {
                return Ok(Rat::zero());
            }
            sum.facets()?.into_iter().map(|f| rat::from_ints(&f.normal)).collect()
        }
    };
    let contributions: Vec<Rat> = rays
        .par_iter()
        .map(|xi| -> Result<Rat> {
            let h = tail.support_value(xi);
            if h.is_zero() {
                return Ok(Rat::zero());
            }
            let frame = LatticeFrame::orthogonal(xi);
            let faces: Vec<VirtualPolytope> =
                rest.iter().map(|p| p.face(xi).in_frame(&frame)).collect::<Result<_>>()?;
            Ok(h * recursive(&faces, None)?)
        })
        .collect::<Result<_>>()?;
    let total = contributions.into_iter().fold(Rat::zero(), |a, b| a + b);
    Ok(-total / rat::rat(n as i64))
}

/// `Vol(P)` as the mixed volume of `dim P` copies of `P`.
pub fn volume_via_mixed(p: &LatticePolytope, alg: &dyn MixedVolumeAlgorithm) -> Result<Rat> {
    let v = VirtualPolytope::from_polytope(p.clone());
    alg.mixed_volume(&vec![v; p.dim()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{segment, unit_cube, unit_simplex};
    use crate::rat::{frac, point, rat};

    fn v(p: LatticePolytope) -> VirtualPolytope {
        VirtualPolytope::from_polytope(p)
    }

    #[test]
    fn simplex_and_square() {
        let ps = [unit_simplex(2), unit_cube(2)];
        assert_eq!(mixed_volume(&ps).unwrap(), rat(1));
        let vs: Vec<_> = ps.iter().cloned().map(v).collect();
        assert_eq!(RecursiveFan.mixed_volume(&vs).unwrap(), rat(1));
    }

    #[test]
    fn unit_segments() {
        let a = segment(point(&[0, 0]), point(&[1, 0]));
        let b = segment(point(&[0, 0]), point(&[0, 1]));
        assert_eq!(mixed_volume(&[a.clone(), b.clone()]).unwrap(), frac(1, 2));
        assert_eq!(RecursiveFan.mixed_volume(&[v(a.clone()), v(b)]).unwrap(), frac(1, 2));
        assert_eq!(mixed_volume(&[a.clone(), a]).unwrap(), rat(0));
    }

    #[test]
    fn mixed_volume_of_copies_is_volume() {
        let p = LatticePolytope::convex_hull(vec![point(&[0, 0, 0]), point(&[2, 0, 1]), point(&[0, 3, 0]), point(&[1, 1, 2]), point(&[-1, 0, 1])]).unwrap();
        let vol = p.volume().unwrap();
        for alg in MixedVolumeRegistry::default().iter() {
            assert_eq!(volume_via_mixed(&p, alg).unwrap(), vol, "{}", alg.name());
        }
    }

    #[test]
    fn virtual_difference_matches_both_algorithms() {
        let s = Arc::new(unit_simplex(2));
        let q = Arc::new(unit_cube(2));
        let d = VirtualPolytope::difference(q, s.clone()).unwrap();
        let seq = [VirtualPolytope::from_arc(s), d];
        assert_eq!(mixed_volume_virtual(&seq).unwrap(), frac(1, 2));
        assert_eq!(RecursiveFan.mixed_volume(&seq).unwrap(), frac(1, 2));
    }

    #[test]
    fn explicit_fan_must_make_supports_linear() {
        let s = unit_simplex(2);
        let q = unit_cube(2);
        let good = Fan::common_refinement(&[s.normal_fan().unwrap(), q.normal_fan().unwrap()]).unwrap();
        let seq = [v(s.clone()), v(q.clone())];
        assert_eq!(mixed_volume_recursive(&seq, &good).unwrap(), rat(1));
        let coarse = q.normal_fan().unwrap();
        let err = mixed_volume_recursive(&seq, &coarse).unwrap_err();
        assert!(err.to_string().contains("witness"));
    }

    #[test]
    fn registry_lookup() {
        let r = MixedVolumeRegistry::default();
        assert_eq!(r.names(), vec!["polarization", "recursive"]);
        assert!(r.get("recursive").is_ok());
        assert!(matches!(r.get("nope"), Err(Error::Unknown { .. })));
        let mut r2 = MixedVolumeRegistry::default();
        assert!(r2.register(Box::new(Polarization)).is_err());
    }

    #[test]
    fn arity_mismatch_is_a_precondition_error() {
        let err = mixed_volume(&[unit_simplex(2)]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn three_dimensional_mixed_volume() {
        // MVol(simplex, simplex, cube) in dimension 3: coefficient extraction
        // from Vol(λ S + μ C) = λ³/6 + 3λ²μ·MVol(S,S,C) + …
        let s = unit_simplex(3);
        let c = unit_cube(3);
        let a = mixed_volume(&[s.clone(), s.clone(), c.clone()]).unwrap();
        let b = RecursiveFan.mixed_volume(&[v(s.clone()), v(s), v(c)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, frac(1, 2));
    }

    #[test]
    fn segment_split_matches_plain_polarization() {
        let seg = segment(point(&[0, 0, 0]), point(&[2, -2, 4]));
        let s = unit_simplex(3);
        let c = unit_cube(3).translate(&point(&[1, 0, -1]));
        let ps = [v(s), v(c), v(seg)];
        let plain = Expansion::new(&ps).polarize(3);
        assert!(split_segment(&ps).unwrap().is_some());
        assert_eq!(Polarization.mixed_volume(&ps).unwrap(), plain);
        assert_eq!(RecursiveFan.mixed_volume(&ps).unwrap(), plain);
    }
}
