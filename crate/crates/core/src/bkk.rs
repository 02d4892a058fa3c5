//! Generic root counts `n!·MVol_n(Δ_1, Δ_2 − Δ_1, …)`, mixed counts with
//! scalar Newton polytopes, and Minkowski weights.

use crate::charseq::{characteristic_polytopes, linearity_witness, CharacteristicSequence, InvariantSubspace};
use crate::error::{Error, Result};
use crate::lattice::LatticeFrame;
use crate::polyhedra::{split_segment, Expansion, Fan, LatticePolytope, MixedVolumeAlgorithm, MixedVolumeRegistry, Polarization, VirtualPolytope};
use crate::polymat::Polymatroid;
use crate::rat::{self, Point, Rat};
use crate::ratlin::Subspace;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// One term `coefficient · MVol(bodies…)` of the multilinear expansion.
#[derive(Clone, Debug, Serialize)]
pub struct TraceTerm {
    pub bodies: Vec<usize>,
    #[serde(serialize_with = "ser_bigint")]
    pub coefficient: BigInt,
    /// Present when the expansion was evaluated term by term.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rat")]
    pub mixed_volume: Option<Rat>,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&rat::fmt_rat(v)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    /// `slots! · MVol`.
    #[serde(with = "rat::serde_rat")]
    pub count: Rat,
    #[serde(with = "rat::serde_rat")]
    pub mixed_volume: Rat,
    /// Number of mixed-volume slots, the dimension of the lattice measured in.
    pub slots: usize,
    pub algorithm: String,
    /// Values from every registered algorithm when cross-checking.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_check: Vec<(String, String)>,
    pub nonnegative: bool,
    pub bodies: Vec<LatticePolytope>,
    pub trace: Vec<TraceTerm>,
}

/// Mixed volume of `slots` virtual polytopes together with its signed
/// expansion trace and optional cross-check.
pub fn evaluate(
    vs: &[VirtualPolytope],
    alg: &dyn MixedVolumeAlgorithm,
    cross_check: Option<&MixedVolumeRegistry>,
) -> Result<CountReport> {
    let n = vs.len();
    let exp = Expansion::new(vs);
    // segment slots are split off first, so there is no per-term trace then
    let (mvol, per_term) = if alg.name() == Polarization.name() && split_segment(vs)?.is_none() {
        let (total, each) = exp.polarize_with_terms(n);
        (total, Some(each))
    } else {
        (alg.mixed_volume(vs)?, None)
    };
    let mut checks = Vec::new();
    if let Some(reg) = cross_check {
        for other in reg.iter() {
            let v = if other.name() == alg.name() { mvol.clone() } else { other.mixed_volume(vs)? };
            if v != mvol {
                return Err(Error::invalid(format!(
                    "mixed volume algorithms disagree: {} gives {}, {} gives {}",
                    alg.name(),
                    rat::fmt_rat(&mvol),
                    other.name(),
                    rat::fmt_rat(&v)
                )));
            }
            checks.push((other.name().to_string(), rat::fmt_rat(&v)));
        }
    }
    let count = &mvol * Rat::from_integer(rat::factorial(n));
    if !rat::is_integral(&count) {
        return Err(Error::invalid(format!("count {} is not an integer", rat::fmt_rat(&count))));
    }
    let trace = exp
        .terms()
        .iter()
        .enumerate()
        .map(|(i, (bodies, c))| TraceTerm {
            bodies: bodies.clone(),
            coefficient: c.clone(),
            mixed_volume: per_term.as_ref().map(|e| e[i].clone()),
        })
        .collect();
    Ok(CountReport {
        nonnegative: !count.is_negative(),
        count,
        mixed_volume: mvol,
        slots: n,
        algorithm: alg.name().to_string(),
        cross_check: checks,
        bodies: exp.bodies().iter().map(|b| (**b).clone()).collect(),
        trace,
    })
}

/// `n!·MVol_n(Δ_1, Δ_2 − Δ_1, …, Δ_n − Δ_{n−1})`; requires rank `n`.
pub fn count_solutions(
    p: &Polymatroid,
    alg: &dyn MixedVolumeAlgorithm,
    cross_check: Option<&MixedVolumeRegistry>,
) -> Result<CountReport> {
    let r = p.total_rank() as usize;
    if r != p.n() {
        return Err(Error::precondition(format!(
            "counting solutions needs rank equal to the torus dimension: rank {r}, n = {}",
            p.n()
        )));
    }
    let seq = characteristic_polytopes(p)?;
    evaluate(&seq.canonical(), alg, cross_check)
}

/// `k!·MVol_k(Δ_1, …, Δ_r − Δ_{r−1}, P_1, …, P_{n−r})`. When the number of
/// slots `k` is below the ambient dimension, every body is translated to
/// its anchor and the mixed volume is taken in the saturated lattice of
/// the common direction space, which must then have dimension `k`.
pub fn count_mixed(
    seq: &CharacteristicSequence,
    scalars: &[LatticePolytope],
    alg: &dyn MixedVolumeAlgorithm,
    cross_check: Option<&MixedVolumeRegistry>,
) -> Result<CountReport> {
    let n = seq.n();
    let mut vs = seq.canonical();
    for s in scalars {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.dim() });
        }
        vs.push(VirtualPolytope::from_polytope(s.clone()));
    }
    let k = vs.len();
    if k > n {
        return Err(Error::precondition(format!(
            "arity mismatch: {} characteristic slots plus {} scalar polytopes exceed dimension {n}",
            seq.r(),
            scalars.len()
        )));
    }
    if k == n {
        return evaluate(&vs, alg, cross_check);
    }
    let frame = common_frame(&vs)?;
    if frame.rank() != k {
        return Err(Error::precondition(format!(
            "arity mismatch: {k} slots but the polytopes span a {}-dimensional direction space in dimension {n}",
            frame.rank()
        )));
    }
    let local = vs.iter().map(|v| v.in_frame(&frame)).collect::<Result<Vec<_>>>()?;
    evaluate(&local, alg, cross_check)
}

/// Saturated lattice of the sum of the direction spaces of all terms.
pub fn common_frame(vs: &[VirtualPolytope]) -> Result<LatticeFrame> {
    let n = vs.first().map_or(0, VirtualPolytope::dim);
    let mut space = Subspace::zero(n);
    for v in vs {
        for t in v.terms() {
            space = space.sum(&t.polytope.direction_space())?;
        }
    }
    Ok(LatticeFrame::saturate(&space))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub cone: Vec<usize>,
    #[serde(serialize_with = "ser_bigint")]
    pub weight: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightTable {
    pub n: usize,
    pub r: usize,
    pub fan: Fan,
    pub weights: Vec<WeightEntry>,
    pub nonnegative: bool,
}

/// For every `(n−r)`-cone `τ` with interior point `ξ`, the weight
/// `r!·MVol_r(Δ^ξ_1, Δ^ξ_2 − Δ^ξ_1, …)` measured in the lattice `τ^⊥ ∩ ℤ^n`.
pub fn minkowski_weights(seq: &CharacteristicSequence, fan: &Fan, alg: &dyn MixedVolumeAlgorithm) -> Result<WeightTable> {
    let n = seq.n();
    let r = seq.r();
    if fan.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: fan.dim() });
    }
    if r > n {
        return Err(Error::precondition(format!("rank {r} exceeds dimension {n}")));
    }
    for i in 1..=r {
        if let Some((ci, w)) = linearity_witness(fan, seq.delta(i)) {
            return Err(Error::precondition(format!(
                "fan does not refine Σ_L: h_Δ{i} is not linear on cone {ci} (witness {:?})",
                w.iter().map(rat::fmt_rat).collect::<Vec<_>>()
            )));
        }
    }
    let mut weights = Vec::new();
    for cone in fan.cones_of_dim(n - r)? {
        let gens: Vec<Point> = cone.iter().map(|&i| fan.ray(i)).collect();
        let xi = gens.iter().fold(vec![Rat::zero(); n], |acc, g| rat::add(&acc, g));
        let faces: Vec<std::sync::Arc<LatticePolytope>> =
            (0..=r).map(|i| std::sync::Arc::new(seq.delta(i).face(&xi))).collect();
        let vs: Vec<VirtualPolytope> = (1..=r)
            .map(|i| {
                if i == 1 {
                    Ok(VirtualPolytope::from_arc(faces[1].clone()))
                } else {
                    VirtualPolytope::difference(faces[i].clone(), faces[i - 1].clone())
                }
            })
            .collect::<Result<_>>()?;
        let perp = crate::polyhedra::Cone::new(gens.clone()).orthogonal_space(n);
        let frame = LatticeFrame::saturate(&if gens.is_empty() { Subspace::full(n) } else { perp });
        let local = vs.iter().map(|v| v.in_frame(&frame)).collect::<Result<Vec<_>>>()?;
        let mv = alg.mixed_volume(&local)?;
        let w = mv * Rat::from_integer(rat::factorial(r));
        if !rat::is_integral(&w) {
            return Err(Error::invalid(format!("weight {} on cone {cone:?} is not an integer", rat::fmt_rat(&w))));
        }
        weights.push(WeightEntry { cone, weight: w.to_integer() });
    }
    let nonnegative = weights.iter().all(|w| !w.weight.is_negative());
    Ok(WeightTable { n, r, fan: fan.clone(), weights, nonnegative })
}

/// The invariant subspace of a scalar system with supports `A_1, …, A_n`:
/// `E_α = span{e_i : α ∈ A_i} ⊂ ℚ^n`.
pub fn embed_scalar_system(n: usize, supports: &[Vec<Vec<i64>>]) -> Result<InvariantSubspace> {
    if supports.len() != n {
        return Err(Error::precondition(format!("{} supports for a system in {n} variables", supports.len())));
    }
    let mut chars: Vec<Vec<i64>> = Vec::new();
    let mut spans: Vec<Vec<Point>> = Vec::new();
    for (i, a) in supports.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::invalid(format!("support {i} is empty")));
        }
        let mut e = vec![Rat::zero(); n];
        e[i] = rat::rat(1);
        for alpha in a {
            match chars.iter().position(|c| c == alpha) {
                Some(j) => spans[j].push(e.clone()),
                None => {
                    chars.push(alpha.clone());
                    spans.push(vec![e.clone()]);
                }
            }
        }
    }
    InvariantSubspace::new(n, n, chars, spans, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{mixed_volume, unit_simplex};
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
    fn sq2_counts_one() {
        let reg = MixedVolumeRegistry::default();
        let rep = count_solutions(sq2().polymatroid(), &Polarization, Some(&reg)).unwrap();
        assert_eq!(rep.count, rat(1));
        assert_eq!(rep.cross_check.len(), 2);
    }

    #[test]
    fn scalar_embedding_matches_bkk() {
        // a·simplex and b·simplex give a·b roots
        let simplex = |k: i64| vec![vec![0, 0], vec![k, 0], vec![0, k]];
        let l = embed_scalar_system(2, &[simplex(2), simplex(3)]).unwrap();
        let rep = count_solutions(l.polymatroid(), &Polarization, None).unwrap();
        assert_eq!(rep.count, rat(6));
        let p = unit_simplex(2).dilate(&rat(2));
        let q = unit_simplex(2).dilate(&rat(3));
        assert_eq!(mixed_volume(&[p, q]).unwrap() * rat(2), rat(6));
    }

    #[test]
    fn rank_mismatch_is_a_precondition_error() {
        let l = InvariantSubspace::new(2, 1, vec![vec![0, 0], vec![1, 0]], vec![vec![point(&[1])]; 2], false).unwrap();
        let e = count_solutions(l.polymatroid(), &Polarization, None).unwrap_err();
        assert_eq!(e.class(), crate::ErrorClass::Precondition);
    }

    #[test]
    fn weights_of_simplex_edges() {
        let l = InvariantSubspace::new(
            2,
            1,
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            vec![vec![point(&[1])]; 3],
            false,
        )
        .unwrap();
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        let fan = seq.delta(1).normal_fan().unwrap();
        let t = minkowski_weights(&seq, &fan, &Polarization).unwrap();
        assert_eq!(t.weights.len(), 3);
        assert!(t.weights.iter().all(|w| w.weight == BigInt::from(1)));
    }

    #[test]
    fn full_rank_weight_is_the_count() {
        let l = sq2();
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        let fan = crate::charseq::fan_of(&seq).unwrap();
        let t = minkowski_weights(&seq, &fan, &Polarization).unwrap();
        assert_eq!(t.weights.len(), 1);
        assert_eq!(t.weights[0].weight, BigInt::from(1));
    }

    #[test]
    fn mixed_count_in_sublattice() {
        // rank-1 subspace on e0..e3 (a simplex in Σx = 1) with two simplices in Σx = 0
        let chars: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        let l = InvariantSubspace::new(4, 1, chars, vec![vec![point(&[1])]; 4], false).unwrap();
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        let tri = LatticePolytope::convex_hull(vec![point(&[0, 0, 0, 0]), point(&[-1, 1, 0, 0]), point(&[-1, 0, 1, 0])]).unwrap();
        let rep = count_mixed(&seq, &[tri.clone(), tri], &Polarization, None).unwrap();
        assert_eq!(rep.slots, 3);
        assert_eq!(rep.count, rat(1));
        let seg = LatticePolytope::convex_hull(vec![point(&[0, 0, 0, 0]), point(&[-1, 1, 0, 0])]).unwrap();
        assert!(count_mixed(&seq, &[seg.clone()], &Polarization, None).is_err());
    }
}
