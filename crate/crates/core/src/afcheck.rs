//! Alexandrov–Fenchel certificates `b² ≥ ac` for characteristic sequences,
//! and the auxiliary-variable identity that trades a matroid for segments.

use crate::bkk::{count_mixed, count_solutions, evaluate, CountReport, TraceTerm};
use crate::charseq::{characteristic_polytopes, direct_sum, CharacteristicSequence, InvariantSubspace};
use crate::error::{Error, Result};
use crate::polyhedra::{LatticePolytope, MixedVolumeAlgorithm, VirtualPolytope};
use crate::polymat::Polymatroid;
use crate::rat::{self, Point, Rat};
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AFTraces {
    pub a: Vec<TraceTerm>,
    pub b: Vec<TraceTerm>,
    pub c: Vec<TraceTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AFReport {
    #[serde(with = "rat::serde_rat")]
    pub a: Rat,
    #[serde(with = "rat::serde_rat")]
    pub b: Rat,
    #[serde(with = "rat::serde_rat")]
    pub c: Rat,
    /// Number of mixed-volume slots; `slots!` turns a, b, c into counts.
    pub slots: usize,
    pub verdict: bool,
    pub a_nonnegative: bool,
    pub b_nonnegative: bool,
    pub c_nonnegative: bool,
    /// `slots!·a`, `slots!·b`, `slots!·c` are all integers.
    pub integral_after_scaling: bool,
    pub trace: AFTraces,
}

impl AFReport {
    fn from_counts(a: CountReport, b: CountReport, c: CountReport) -> Self {
        let integral = [&a, &b, &c].iter().all(|r| rat::is_integral(&r.count));
        let verdict = &b.mixed_volume * &b.mixed_volume >= &a.mixed_volume * &c.mixed_volume;
        AFReport {
            a_nonnegative: !a.mixed_volume.is_negative(),
            b_nonnegative: !b.mixed_volume.is_negative(),
            c_nonnegative: !c.mixed_volume.is_negative(),
            slots: b.slots,
            verdict,
            integral_after_scaling: integral,
            a: a.mixed_volume,
            b: b.mixed_volume,
            c: c.mixed_volume,
            trace: AFTraces { a: a.trace, b: b.trace, c: c.trace },
        }
    }

    /// `b² − ac`.
    pub fn gap(&self) -> Rat {
        &self.b * &self.b - &self.a * &self.c
    }
}

fn join3<F, T>(f: F) -> Result<(T, T, T)>
where
    F: Fn(usize) -> Result<T> + Sync,
    T: Send,
{
    let (x, (y, z)) = rayon::join(|| f(0), || rayon::join(|| f(1), || f(2)));
    Ok((x?, y?, z?))
}

/// `a, b, c` for `L_1⊕L_1⊕L_3`, `L_1⊕L_2⊕L_3`, `L_2⊕L_2⊕L_3`, each through the
/// canonical representation of the direct sum.
pub fn af_subspaces(
    l1: &InvariantSubspace,
    l2: &InvariantSubspace,
    l3: &InvariantSubspace,
    alg: &dyn MixedVolumeAlgorithm,
) -> Result<AFReport> {
    let n = l3.n();
    for (name, l, want) in [("L1", l1, 1), ("L2", l2, 1), ("L3", l3, n.saturating_sub(2))] {
        if l.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: l.n() });
        }
        if l.r() != want || n < 2 {
            return Err(Error::precondition(format!("rank mismatch: {name} has rank {}, expected {want}", l.r())));
        }
    }
    let pairs = [(l1, l1), (l1, l2), (l2, l2)];
    let (a, b, c) = join3(|i| {
        let (x, y) = pairs[i];
        let sum = direct_sum(&direct_sum(x, y)?, l3)?;
        count_solutions(sum.polymatroid(), alg, None)
    })?;
    Ok(AFReport::from_counts(a, b, c))
}

/// `a = MVol(seq, P_1, P_1, rest)`, `b = MVol(seq, P_1, P_2, rest)`,
/// `c = MVol(seq, P_2, P_2, rest)`, measured as in [`count_mixed`].
pub fn af_polytopes(
    seq: &CharacteristicSequence,
    p1: &LatticePolytope,
    p2: &LatticePolytope,
    rest: &[LatticePolytope],
    alg: &dyn MixedVolumeAlgorithm,
) -> Result<AFReport> {
    let slots = seq.r() + 2 + rest.len();
    if slots > seq.n() {
        return Err(Error::precondition(format!(
            "arity mismatch: rank {} plus {} polytopes exceeds dimension {}",
            seq.r(),
            2 + rest.len(),
            seq.n()
        )));
    }
    let pairs = [(p1, p1), (p1, p2), (p2, p2)];
    let (a, b, c) = join3(|i| {
        let (x, y) = pairs[i];
        let mut scalars = vec![x.clone(), y.clone()];
        scalars.extend(rest.iter().cloned());
        count_mixed(seq, &scalars, alg, None)
    })?;
    Ok(AFReport::from_counts(a, b, c))
}

#[derive(Clone, Debug, Serialize)]
pub struct AuxReport {
    pub n: usize,
    pub k: usize,
    #[serde(with = "rat::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "rat::serde_rat")]
    pub rhs: Rat,
    /// `n!·lhs`.
    #[serde(with = "rat::serde_rat")]
    pub lhs_count: Rat,
    /// `(n+k)!·rhs`.
    #[serde(with = "rat::serde_rat")]
    pub rhs_count: Rat,
    pub equal: bool,
    /// Segments `T_i` in `ℝ^n × ℝ^k`.
    pub segments: Vec<LatticePolytope>,
}

fn lift(p: &LatticePolytope, before: usize, after: usize) -> Result<LatticePolytope> {
    let pts = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = vec![Rat::zero(); before];
            w.extend(v.iter().cloned());
            w.extend(std::iter::repeat(Rat::zero()).take(after));
            w
        })
        .collect();
    LatticePolytope::convex_hull(pts)
}

/// `T_i = conv{(0, e_i), (α_i, 0)}` in `ℝ^n × ℝ^k`.
pub fn aux_segments(m: &Polymatroid) -> Result<Vec<LatticePolytope>> {
    let (n, k) = (m.n(), m.len());
    m.labels()
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let mut top: Point = vec![Rat::zero(); n + k];
            top[n + i] = rat::rat(1);
            let mut bottom: Point = label.iter().map(|&x| rat::rat(x)).collect();
            bottom.extend(std::iter::repeat(Rat::zero()).take(k));
            LatticePolytope::convex_hull(vec![top, bottom])
        })
        .collect()
}

/// Compares `n!·MVol_n(Δ_1, …, Δ_r − Δ_{r−1}, P_1, …)` for the matroid `m`
/// with `(n+k)!·MVol_{n+k}` of the independence-polytope sequence lifted to
/// `{0}^n × ℝ^k`, the lifted scalars `P_j × {0}^k`, and the segments `T_i`.
pub fn aux_identity(m: &Polymatroid, scalars: &[LatticePolytope], alg: &dyn MixedVolumeAlgorithm) -> Result<AuxReport> {
    if !m.is_matroid() {
        return Err(Error::precondition("auxiliary identity needs a matroid"));
    }
    let (n, k, r) = (m.n(), m.len(), m.total_rank() as usize);
    if r + scalars.len() != n {
        return Err(Error::precondition(format!(
            "arity mismatch: rank {r} plus {} scalar polytopes differs from n = {n}",
            scalars.len()
        )));
    }
    if let Some(p) = scalars.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
    }
    let segments = aux_segments(m)?;
    let left = || -> Result<Rat> {
        let seq = characteristic_polytopes(m)?;
        let mut vs = seq.canonical();
        vs.extend(scalars.iter().cloned().map(VirtualPolytope::from_polytope));
        alg.mixed_volume(&vs)
    };
    let right = || -> Result<Rat> {
        let bp = (1..=r)
            .map(|i| lift(&m.independence_polytope(i)?, n, 0))
            .collect::<Result<Vec<_>>>()?;
        let mut vs = CharacteristicSequence::from_polytopes(n + k, bp)?.canonical();
        for p in scalars {
            vs.push(VirtualPolytope::from_polytope(lift(p, 0, k)?));
        }
        vs.extend(segments.iter().cloned().map(VirtualPolytope::from_polytope));
        alg.mixed_volume(&vs)
    };
    let (lhs, rhs) = rayon::join(left, right);
    let (lhs, rhs) = (lhs?, rhs?);
    let lhs_count = &lhs * Rat::from_integer(rat::factorial(n));
    let rhs_count = &rhs * Rat::from_integer(rat::factorial(n + k));
    Ok(AuxReport { n, k, equal: lhs_count == rhs_count, lhs, rhs, lhs_count, rhs_count, segments })
}

#[derive(Clone, Debug, Serialize)]
pub struct AuxReduction {
    /// `count_solutions(L)`.
    #[serde(with = "rat::serde_rat")]
    pub direct: Rat,
    /// Count of the auxiliary system built from the natural matroid.
    #[serde(with = "rat::serde_rat")]
    pub auxiliary: Rat,
    pub equal: bool,
    /// Ground element of `L`'s polymatroid behind each auxiliary variable.
    pub origin: Vec<usize>,
    pub natural_matroid: Polymatroid,
    pub identity: AuxReport,
}

/// Replaces every monomial coefficient by a new variable: the natural
/// matroid of `L` supplies the linear-space class in `ℝ^n × ℝ^k` and each
/// binomial `w·x^α − c` contributes the segment `T_i`.
pub fn aux_reduction_demo(l: &InvariantSubspace, alg: &dyn MixedVolumeAlgorithm) -> Result<AuxReduction> {
    let p = l.polymatroid();
    let direct = count_solutions(p, alg, None)?.count;
    let (nat, origin) = p.natural_matroid()?;
    let identity = aux_identity(&nat, &[], alg)?;
    Ok(AuxReduction {
        equal: identity.rhs_count == direct && identity.equal,
        auxiliary: identity.rhs_count.clone(),
        direct,
        origin,
        natural_matroid: nat,
        identity,
    })
}

/// `n!·MVol(P, …)` through [`evaluate`], for comparisons in tests.
pub fn scalar_count(ps: &[LatticePolytope], alg: &dyn MixedVolumeAlgorithm) -> Result<Rat> {
    let vs: Vec<VirtualPolytope> = ps.iter().cloned().map(VirtualPolytope::from_polytope).collect();
    Ok(evaluate(&vs, alg, None)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{unit_cube, unit_simplex, Polarization};
    use crate::rat::point;

    fn scalar(n: usize, p: &LatticePolytope) -> InvariantSubspace {
        let chars: Vec<Vec<i64>> = p.vertices().iter().map(|v| v.iter().map(|x| rat::to_i64(x).unwrap()).collect()).collect();
        let spans = vec![vec![point(&[1])]; chars.len()];
        InvariantSubspace::new(n, 1, chars, spans, false).unwrap()
    }

    #[test]
    fn minkowski_inequality() {
        let s = scalar(2, &unit_simplex(2));
        let q = scalar(2, &unit_cube(2));
        let rep = af_subspaces(&s, &q, &InvariantSubspace::empty(2), &Polarization).unwrap();
        assert_eq!(rep.a, rat::frac(1, 2));
        assert_eq!(rep.b, rat::rat(1));
        assert_eq!(rep.c, rat::rat(1));
        assert!(rep.verdict);
    }

    #[test]
    fn equality_case() {
        let s = scalar(2, &unit_simplex(2));
        let rep = af_subspaces(&s, &s, &InvariantSubspace::empty(2), &Polarization).unwrap();
        assert!(rep.gap().is_zero());
    }

    #[test]
    fn polytope_form_with_equal_bodies() {
        let p = unit_simplex(3);
        let seq = characteristic_polytopes(scalar(3, &unit_cube(3)).polymatroid()).unwrap();
        let rep = af_polytopes(&seq, &p, &p, &[], &Polarization).unwrap();
        assert!(rep.gap().is_zero());
        assert!(rep.integral_after_scaling);
        assert!(af_polytopes(&seq, &p, &p, &[p.clone(), p.clone()], &Polarization).is_err());
    }

    #[test]
    fn aux_single_element() {
        let m = Polymatroid::uniform(1, vec![vec![3]], 1).unwrap();
        let rep = aux_identity(&m, &[], &Polarization).unwrap();
        assert!(rep.equal);
    }

    #[test]
    fn aux_uniform_23() {
        let m = Polymatroid::uniform(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap();
        let rep = aux_identity(&m, &[], &Polarization).unwrap();
        assert!(rep.equal, "{} vs {}", rep.lhs_count, rep.rhs_count);
    }

    #[test]
    fn aux_with_scalar() {
        let m = Polymatroid::uniform(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], 1).unwrap();
        let rep = aux_identity(&m, &[unit_cube(2)], &Polarization).unwrap();
        assert!(rep.equal, "{} vs {}", rep.lhs_count, rep.rhs_count);
        assert!(aux_identity(&m, &[], &Polarization).is_err());
    }
}
