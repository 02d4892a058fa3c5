//! Hyperplane arrangements `u_0, …, u_N` in `ℙ^n` and the invariant subspace
//! `L_ℋ = ⊕ ⟨ℓ_i⟩ ⊗ z_i` of the complement.

use crate::bkk::{evaluate, CountReport};
use crate::charseq::{characteristic_polytopes, InvariantSubspace};
use crate::error::{Error, Result};
use crate::lattice::LatticeFrame;
use crate::polyhedra::{LatticePolytope, MixedVolumeAlgorithm, MixedVolumeRegistry, VirtualPolytope};
use crate::rat::{self, Point, Rat};
use crate::ratlin::{kernel_of_rows, rank};
use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Nonzero linear forms on `ℚ^{n+1}` spanning the dual space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperplaneArrangement {
    pub n: usize,
    #[serde(with = "rat::serde_rat::vec2")]
    pub forms: Vec<Point>,
}

/// Largest arrangement whose dual-matroid audit runs over all subsets.
const AUDIT_LIMIT: usize = 14;

impl HyperplaneArrangement {
    pub fn new(n: usize, forms: Vec<Point>) -> Result<Self> {
        let a = HyperplaneArrangement { n, forms };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.forms.iter().find(|f| f.len() != self.n + 1) {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: bad.len() });
        }
        if let Some(i) = self.forms.iter().position(|f| rat::is_zero_vec(f)) {
            return Err(Error::invalid(format!("form {i} is zero")));
        }
        if rank(&self.forms) != self.n + 1 {
            return Err(Error::invalid("the forms do not span the dual space (the hyperplanes have a common point)"));
        }
        Ok(())
    }

    /// `N`, one less than the number of hyperplanes.
    pub fn big_n(&self) -> usize {
        self.forms.len() - 1
    }

    /// `N+1` seeded random forms with every `n+1` of them independent.
    pub fn generic(n: usize, big_n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..crate::ratlin::DEFAULT_ATTEMPTS {
            let forms: Vec<Point> = (0..=big_n)
                .map(|_| (0..=n).map(|_| rat::rat(rng.gen_range(-5..=5))).collect())
                .collect();
            let general = forms.iter().combinations((n + 1).min(forms.len())).all(|s| {
                let rows: Vec<Point> = s.into_iter().cloned().collect();
                rank(&rows) == rows.len()
            });
            if general && rank(&forms) == n + 1 {
                return HyperplaneArrangement::new(n, forms);
            }
        }
        Err(Error::GenericityExhausted { attempts: crate::ratlin::DEFAULT_ATTEMPTS, what: "arrangement in general position".into() })
    }

    /// Rank of the forms indexed by `mask`.
    fn rank_of(&self, mask: u64) -> usize {
        let rows: Vec<Point> = (0..self.forms.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.forms[i].clone()).collect();
        rank(&rows)
    }
}

fn unit(len: usize, i: usize) -> Vec<i64> {
    (0..len).map(|j| i64::from(i == j)).collect()
}

/// `L_ℋ`: `E` is the dual of `K = ker(z ↦ Σ z_i u_i)` and `ℓ_i` is the
/// `i`-th coordinate restricted to `K`, written in the dual of a basis of
/// `K`. Characters are `e_i ∈ ℤ^{N+1}`; forms with `ℓ_i = 0` are dropped.
pub fn subspace_of(arr: &HyperplaneArrangement) -> Result<InvariantSubspace> {
    arr.validate()?;
    let m = arr.forms.len();
    if m <= arr.n + 1 {
        return Err(Error::precondition(format!(
            "{m} independent forms in ℚ^{} leave a zero kernel; L_ℋ would have rank 0",
            arr.n + 1
        )));
    }
    let cols: Vec<Point> = (0..=arr.n).map(|c| arr.forms.iter().map(|u| u[c].clone()).collect()).collect();
    let kernel = kernel_of_rows(&cols, m);
    let ells: Vec<Point> = (0..m).map(|i| kernel.iter().map(|k| k[i].clone()).collect()).collect();
    if m <= AUDIT_LIMIT {
        for mask in 0..1u64 << m {
            let sub: Vec<Point> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| ells[i].clone()).collect();
            let dual = mask.count_ones() as usize + arr.rank_of(!mask & ((1 << m) - 1)) - (arr.n + 1);
            if rank(&sub) != dual {
                return Err(Error::invalid(format!("dual-matroid audit failed on subset mask {mask:#b}")));
            }
        }
    }
    let r = kernel.len();
    let mut chars = Vec::new();
    let mut spans = Vec::new();
    for (i, l) in ells.into_iter().enumerate() {
        if !rat::is_zero_vec(&l) {
            chars.push(unit(m, i));
            spans.push(vec![l]);
        }
    }
    InvariantSubspace::new(m, r, chars, spans, false)
}

/// `Δ_i = conv{e_{j_1} + ⋯ + e_{j_i} : the forms outside {j_1,…,j_i} span}`,
/// computed from the form matrix alone.
pub fn linear_space_polytopes(arr: &HyperplaneArrangement) -> Result<Vec<LatticePolytope>> {
    let m = arr.forms.len();
    let full = (1u64 << m) - 1;
    let r = m - (arr.n + 1);
    (1..=r)
        .map(|i| {
            let pts: Vec<Point> = (0..m)
                .combinations(i)
                .filter(|js| {
                    let mask = js.iter().fold(0u64, |a, &j| a | 1 << j);
                    arr.rank_of(full & !mask) == arr.n + 1
                })
                .map(|js| (0..m).map(|k| rat::rat(i64::from(js.contains(&k)))).collect())
                .collect();
            LatticePolytope::convex_hull(pts)
        })
        .collect()
}

/// Lattice `{Σ x = 0} ∩ ℤ^{N+1}` with basis `e_i − e_0`.
pub fn zero_sum_frame(m: usize) -> Result<LatticeFrame> {
    let basis: Vec<Point> = (1..m)
        .map(|i| (0..m).map(|k| rat::rat(i64::from(k == i) - i64::from(k == 0))).collect())
        .collect();
    LatticeFrame::of_span(m, basis)
}

fn check_parallel(p: &LatticePolytope, m: usize) -> Result<()> {
    if p.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: p.dim() });
    }
    let sums: Vec<Rat> = p.vertices().iter().map(|v| v.iter().fold(Rat::zero(), |a, x| a + x)).collect();
    if sums.iter().any(|s| *s != sums[0]) {
        return Err(Error::precondition(format!(
            "scalar polytope {p:?} does not lie in a hyperplane parallel to Σ x = 0"
        )));
    }
    Ok(())
}

/// `N!·MVol_N(Δ_1, …, Δ_{N−n} − Δ_{N−n−1}, P_1, …, P_n)` in the lattice of
/// `Σ x = 0`, every body translated to its anchor.
pub fn hyperplane_count(
    arr: &HyperplaneArrangement,
    scalars: &[LatticePolytope],
    alg: &dyn MixedVolumeAlgorithm,
    cross_check: Option<&MixedVolumeRegistry>,
) -> Result<CountReport> {
    let l = subspace_of(arr)?;
    let m = arr.forms.len();
    if scalars.len() != arr.n {
        return Err(Error::precondition(format!(
            "arity mismatch: {} scalar polytopes for an arrangement in ℙ^{}",
            scalars.len(),
            arr.n
        )));
    }
    for p in scalars {
        check_parallel(p, m)?;
    }
    let seq = characteristic_polytopes(l.polymatroid())?;
    let frame = zero_sum_frame(m)?;
    let mut vs = seq.canonical();
    vs.extend(scalars.iter().cloned().map(VirtualPolytope::from_polytope));
    let local = vs.iter().map(|v| v.in_frame(&frame)).collect::<Result<Vec<_>>>()?;
    evaluate(&local, alg, cross_check)
}

/// Count for an arrangement in general position:
/// `N!·MVol_N(Δ, …, Δ, P_1, …, P_n)` with `Δ = conv{e_0, …, e_N}` repeated
/// `N − n` times, in the lattice of `Σ x = 0`.
pub fn generic_hyperplane_count(
    n: usize,
    big_n: usize,
    scalars: &[LatticePolytope],
    alg: &dyn MixedVolumeAlgorithm,
) -> Result<Rat> {
    let m = big_n + 1;
    if scalars.len() != n || big_n <= n {
        return Err(Error::precondition("need n scalar polytopes and N > n"));
    }
    for p in scalars {
        check_parallel(p, m)?;
    }
    let delta = LatticePolytope::convex_hull((0..m).map(|i| rat::from_i64s(&unit(m, i))).collect())?;
    let frame = zero_sum_frame(m)?;
    let mut bodies: Vec<VirtualPolytope> = vec![VirtualPolytope::from_polytope(delta); big_n - n];
    bodies.extend(scalars.iter().cloned().map(VirtualPolytope::from_polytope));
    let local = bodies.iter().map(|v| v.in_frame(&frame)).collect::<Result<Vec<_>>>()?;
    Ok(alg.mixed_volume(&local)? * Rat::from_integer(rat::factorial(big_n)))
}

/// Standard simplex `conv{0, e_1 − e_0, …, e_N − e_0}` of the lattice `Σ x = 0`.
pub fn zero_sum_simplex(m: usize) -> LatticePolytope {
    let mut pts = vec![vec![Rat::zero(); m]];
    for i in 1..m {
        pts.push((0..m).map(|k| rat::rat(i64::from(k == i) - i64::from(k == 0))).collect());
    }
    LatticePolytope::convex_hull(pts).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::Polarization;
    use crate::rat::point;

    fn four_lines() -> HyperplaneArrangement {
        HyperplaneArrangement::new(2, vec![point(&[1, 0, 0]), point(&[0, 1, 0]), point(&[0, 0, 1]), point(&[1, 1, 1])]).unwrap()
    }

    #[test]
    fn four_generic_lines() {
        let l = subspace_of(&four_lines()).unwrap();
        assert_eq!(l.r(), 1);
        assert_eq!(l.characters().len(), 4);
        let seq = characteristic_polytopes(l.polymatroid()).unwrap();
        assert_eq!(seq.delta(1).vertices().len(), 4);
        assert_eq!(**seq.delta(1), linear_space_polytopes(&four_lines()).unwrap()[0]);
    }

    #[test]
    fn rank_zero_rejected() {
        let a = HyperplaneArrangement::new(2, vec![point(&[1, 0, 0]), point(&[0, 1, 0]), point(&[0, 0, 1])]).unwrap();
        assert!(subspace_of(&a).is_err());
        assert!(HyperplaneArrangement::new(2, vec![point(&[1, 0, 0]), point(&[0, 1, 0])]).is_err());
    }

    #[test]
    fn generic_counts_agree() {
        for (n, big_n) in [(2, 3), (2, 4)] {
            let a = HyperplaneArrangement::generic(n, big_n, 7).unwrap();
            let ps = vec![zero_sum_simplex(big_n + 1); n];
            let c = hyperplane_count(&a, &ps, &Polarization, None).unwrap();
            let g = generic_hyperplane_count(n, big_n, &ps, &Polarization).unwrap();
            assert_eq!(c.count, g);
            for (x, y) in characteristic_polytopes(subspace_of(&a).unwrap().polymatroid())
                .unwrap()
                .canonical()
                .iter()
                .zip(linear_space_polytopes(&a).unwrap())
            {
                assert!(x.terms()[0].polytope.as_ref() == &y);
            }
        }
    }

    #[test]
    fn non_parallel_scalar_rejected() {
        let p = LatticePolytope::convex_hull(vec![point(&[0, 0, 0, 0]), point(&[1, 0, 0, 0])]).unwrap();
        assert!(hyperplane_count(&four_lines(), &[p.clone(), p], &Polarization, None).is_err());
    }
}
