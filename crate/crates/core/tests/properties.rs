use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vecbkk::charseq::{characteristic_polytopes, critical_data, random_directions, InvariantSubspace};
use vecbkk::polyhedra::{split_segment, LatticePolytope, MixedVolumeAlgorithm, Polarization, RecursiveFan, VirtualPolytope};
use vecbkk::rat::{self, Rat};

fn polytope(points: &[Vec<i64>]) -> LatticePolytope {
    LatticePolytope::convex_hull(points.iter().map(|p| rat::from_i64s(p)).collect()).unwrap()
}

fn virt(ps: &[LatticePolytope]) -> Vec<VirtualPolytope> {
    ps.iter().cloned().map(VirtualPolytope::from_polytope).collect()
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `n!·MVol(K_1, …, K_n) = Σ_J (−1)^{n−|J|} Vol(Σ_{j∈J} K_j)`, from volumes alone.
fn brute_mixed_volume(ps: &[LatticePolytope]) -> Rat {
    let n = ps.len();
    let mut total = Rat::zero();
    for mask in 1u32..1 << n {
        let mut sum: Option<LatticePolytope> = None;
        for (j, p) in ps.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sum = Some(match sum {
                    None => p.clone(),
                    Some(s) => s.minkowski_sum(p).unwrap(),
                });
            }
        }
        let v = sum.unwrap().volume_or_zero();
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total / rat::rat(factorial(n))
}

fn point_set(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=3, n), 1..=5)
}

fn polytopes(n: usize) -> impl Strategy<Value = Vec<LatticePolytope>> {
    prop::collection::vec(point_set(n), n).prop_map(|sets| sets.iter().map(|s| polytope(s)).collect())
}

fn instance() -> impl Strategy<Value = Vec<LatticePolytope>> {
    (2usize..=3).prop_flat_map(polytopes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algorithms_agree_with_volume_oracle(ps in instance()) {
        let vs = virt(&ps);
        let oracle = brute_mixed_volume(&ps);
        prop_assert_eq!(Polarization.mixed_volume(&vs).unwrap(), oracle.clone());
        prop_assert_eq!(RecursiveFan.mixed_volume(&vs).unwrap(), oracle);
    }

    #[test]
    fn diagonal_is_volume(ps in instance()) {
        let p = &ps[0];
        let diag = vec![p.clone(); ps.len()];
        prop_assert_eq!(Polarization.mixed_volume(&virt(&diag)).unwrap(), p.volume_or_zero());
    }

    #[test]
    fn symmetric_and_homogeneous(ps in instance(), k in 1i64..=3) {
        let base = Polarization.mixed_volume(&virt(&ps)).unwrap();
        let mut rev = ps.clone();
        rev.reverse();
        prop_assert_eq!(Polarization.mixed_volume(&virt(&rev)).unwrap(), base.clone());
        let mut scaled = ps.clone();
        scaled[0] = scaled[0].dilate(&rat::rat(k));
        prop_assert_eq!(Polarization.mixed_volume(&virt(&scaled)).unwrap(), base * rat::rat(k));
    }

    #[test]
    fn segment_reduction_matches_oracle(
        mut ps in instance(),
        a in prop::collection::vec(-2i64..=2, 3),
        v in prop::collection::vec(-3i64..=3, 3),
    ) {
        let n = ps.len();
        prop_assume!(v[..n].iter().any(|&x| x != 0));
        let end: Vec<i64> = (0..n).map(|i| a[i] + v[i]).collect();
        ps[n - 1] = polytope(&[a[..n].to_vec(), end]);
        let (factor, rest) = split_segment(&virt(&ps)).unwrap().expect("a segment slot is present");
        prop_assert_eq!(rest.len(), n - 1);
        prop_assert!(factor > Rat::zero());
        prop_assert_eq!(Polarization.mixed_volume(&virt(&ps)).unwrap(), brute_mixed_volume(&ps));
    }

    #[test]
    fn subspace_polymatroid_invariants(seed in any::<u64>(), n in 1usize..=3, r in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = InvariantSubspace::random(&mut rng, n, r, 4, 2, 2);
        let p = l.polymatroid();
        prop_assert!(p.audit().is_ok());
        prop_assert!(p.total_rank() as usize <= l.r());
        let seq = characteristic_polytopes(p).unwrap();
        for xi in random_directions(&mut rng, n, 8) {
            let g = p.greedy_min_sequence(&xi).unwrap();
            let hull: Vec<Rat> = (1..=seq.r()).map(|i| seq.delta(i).support_value(&xi)).collect();
            prop_assert_eq!(&g.partial_sums, &hull);
            prop_assert_eq!(critical_data(&l, &xi).unwrap().multiset(), seq.support_values(&xi));
        }
    }
}

#[test]
fn unit_square_and_triangle() {
    let square = polytope(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    let tri = polytope(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
    let m = Polarization.mixed_volume(&virt(&[square, tri])).unwrap();
    assert_eq!(m, rat::rat(1));
}
