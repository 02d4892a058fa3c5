//! Acceptance run: one line per criterion, nonzero exit if any fails.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use vecbkk::afcheck::{af_polytopes, af_subspaces, aux_identity};
use vecbkk::arrangements::{generic_hyperplane_count, hyperplane_count, HyperplaneArrangement};
use vecbkk::bkk::{count_mixed, count_solutions, embed_scalar_system};
use vecbkk::charseq::{
    characteristic_polytopes, check_truncation_theorem, critical_data, direct_sum, fan_of, quotient_reduce,
    random_directions, InvariantSubspace,
};
use vecbkk::fixtures;
use vecbkk::klyachko::{top_chern_degree, verify_compatibility};
use vecbkk::polyhedra::{
    mixed_volume, unit_cube, unit_simplex, LatticePolytope, MixedVolumeAlgorithm, MixedVolumeRegistry, Polarization,
    RecursiveFan, VirtualPolytope,
};
use vecbkk::rat::{self, Point, Rat};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fmt_point(p: &[Rat]) -> String {
    p.iter().map(rat::fmt_rat).collect::<Vec<_>>().join(",")
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    if e > limit {
        Err(format!("{what} took {e:.2?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

/// The three fixture subspaces and 25 seeded random arrangements.
fn sweep_subspaces(seed: u64) -> Vec<(String, InvariantSubspace)> {
    let mut out = vec![
        ("sq2".to_string(), fixtures::sq2()),
        ("u23".to_string(), fixtures::u23()),
        ("hyp4".to_string(), fixtures::hyp4()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..25 {
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(1..=3);
        out.push((format!("random-{i}"), InvariantSubspace::random(&mut rng, n, r, 5, 2, 2)));
    }
    out
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let l = fixtures::sq2();
    let seq = ok(characteristic_polytopes(l.polymatroid()))?;
    ensure!(**seq.delta(1) == unit_simplex(2), "Δ1 is not the unit simplex");
    ensure!(**seq.delta(2) == unit_cube(2), "Δ2 is not the unit square");
    let rep = ok(count_solutions(l.polymatroid(), &Polarization, None))?;
    // c1 + a·x = 0, c2 + b·y = 0 decouples into one root
    ensure!(rep.count == rat::rat(1), "count {}", rep.count);
    within(t, Duration::from_secs(1), "SQ2")?;
    Ok(format!("count 1 in {:.2?}", t.elapsed()))
}

/// Twice the area of the convex hull of integer points (monotone chain).
fn twice_area(pts: &[(i64, i64)]) -> i64 {
    let mut p: Vec<(i64, i64)> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let m = hull.len();
    (0..m).map(|i| hull[i].0 * hull[(i + 1) % m].1 - hull[(i + 1) % m].0 * hull[i].1).sum::<i64>().abs()
}

fn random_support(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let k = rng.gen_range(2..=6);
    let mut s: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
    s.sort();
    s.dedup();
    s
}

fn hull_of(s: &[Vec<i64>]) -> Result<LatticePolytope, String> {
    ok(LatticePolytope::convex_hull(s.iter().map(|v| rat::from_i64s(v)).collect()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut nonzero = [0; 2];
    for case in 0..50 {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let supports: Vec<Vec<Vec<i64>>> = (0..n).map(|_| random_support(&mut rng, n)).collect();
        let l = ok(embed_scalar_system(n, &supports))?;
        let got = if l.r() == n { ok(count_solutions(l.polymatroid(), &Polarization, None))?.count } else { Rat::zero() };
        let expected = if n == 2 {
            // 2·MVol(P, Q) = Area(P + Q) − Area(P) − Area(Q)
            let p: Vec<(i64, i64)> = supports[0].iter().map(|v| (v[0], v[1])).collect();
            let q: Vec<(i64, i64)> = supports[1].iter().map(|v| (v[0], v[1])).collect();
            let pq: Vec<(i64, i64)> = p.iter().flat_map(|a| q.iter().map(move |b| (a.0 + b.0, a.1 + b.1))).collect();
            rat::frac(twice_area(&pq) - twice_area(&p) - twice_area(&q), 2)
        } else {
            let ps = supports.iter().map(|s| hull_of(s)).collect::<Result<Vec<_>, _>>()?;
            let vs: Vec<VirtualPolytope> = ps.iter().cloned().map(VirtualPolytope::from_polytope).collect();
            let a = ok(mixed_volume(&ps))?;
            let b = ok(RecursiveFan.mixed_volume(&vs))?;
            ensure!(a == b, "case {case}: algorithms disagree on the scalar system");
            a * rat::rat(6)
        };
        ensure!(got == expected, "case {case} (n = {n}): embedding gives {got}, classical count {expected}");
        if !expected.is_zero() {
            nonzero[n - 2] += 1;
        }
    }
    within(t, Duration::from_secs(60), "50 systems")?;
    Ok(format!("50 systems, nonzero counts {}/25 in n = 2 and {}/25 in n = 3, {:.2?}", nonzero[0], nonzero[1], t.elapsed()))
}

fn criterion_3_and_4(check_critical: bool) -> Outcome {
    let mut total = 0;
    for (name, l) in sweep_subspaces(3) {
        let p = l.polymatroid();
        let seq = ok(characteristic_polytopes(p))?;
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for xi in random_directions(&mut rng, l.n(), 200) {
            if check_critical {
                let cd = ok(critical_data(&l, &xi))?;
                ensure!(cd.multiset() == seq.support_values(&xi), "{name}: critical multiset differs at ξ = {}", fmt_point(&xi));
            } else {
                let g = ok(p.greedy_min_sequence(&xi))?;
                let hull: Vec<Rat> = (1..=seq.r()).map(|i| seq.delta(i).support_value(&xi)).collect();
                ensure!(g.partial_sums == hull, "{name}: greedy differs from hull at ξ = {}", fmt_point(&xi));
            }
            total += 1;
        }
    }
    Ok(format!("{total} evaluations on 28 arrangements"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..25 {
        let n = rng.gen_range(2..=3);
        let r1 = rng.gen_range(1..n);
        let l1 = InvariantSubspace::random(&mut rng, n, r1, 4, 2, 2);
        let l2 = InvariantSubspace::random(&mut rng, n, n - r1, 4, 2, 2);
        let sum = ok(direct_sum(&l1, &l2))?;
        let merged = ok(characteristic_polytopes(sum.polymatroid()))?.canonical();
        let mut concat = ok(characteristic_polytopes(l1.polymatroid()))?.canonical();
        concat.extend(ok(characteristic_polytopes(l2.polymatroid()))?.canonical());
        let a = ok(Polarization.mixed_volume(&merged))?;
        let b = ok(Polarization.mixed_volume(&concat))?;
        ensure!(a == b, "pair {case}: merged {a} vs concatenated {b}");
    }
    Ok("25 pairs".into())
}

fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> LatticePolytope {
    let k = rng.gen_range(1..=n + 3);
    let pts: Vec<Point> = (0..k).map(|_| (0..n).map(|_| rat::rat(rng.gen_range(0..=3))).collect()).collect();
    LatticePolytope::convex_hull(pts).expect("nonempty")
}

fn criterion_6() -> Outcome {
    let reg = MixedVolumeRegistry::default();
    let mut checked = 0;
    for name in ["sq2", "u23", "fano", "u24", "u23-matroid"] {
        let p = ok(ok(fixtures::fixture(name))?.polymatroid())?;
        ok(count_solutions(&p, &Polarization, Some(&reg)))?;
        checked += 1;
    }
    let hyp = ok(characteristic_polytopes(fixtures::hyp4().polymatroid()))?;
    let tri = vecbkk::arrangements::zero_sum_simplex(4);
    ok(count_mixed(&hyp, &[tri.clone(), tri], &Polarization, Some(&reg)))?;
    let vamos = ok(characteristic_polytopes(&fixtures::vamos6()))?;
    let [s1, s2] = fixtures::vamos_segments();
    ok(count_mixed(&vamos, &[s1, s2], &Polarization, Some(&reg)))?;
    checked += 2;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..50 {
        let n = rng.gen_range(1..=3);
        let vs: Vec<VirtualPolytope> = (0..n)
            .map(|_| {
                let p = random_polytope(&mut rng, n);
                if rng.gen_bool(0.5) {
                    let q = random_polytope(&mut rng, n);
                    VirtualPolytope::difference(p.into(), q.into()).expect("same dimension")
                } else {
                    VirtualPolytope::from_polytope(p)
                }
            })
            .collect();
        let a = ok(Polarization.mixed_volume(&vs))?;
        let b = ok(RecursiveFan.mixed_volume(&vs))?;
        ensure!(a == b, "random sequence {case} (n = {n}): polarization {a}, recursive {b}");
    }
    Ok(format!("{checked} fixtures and 50 random sequences"))
}

fn reduced(l: &InvariantSubspace) -> Result<InvariantSubspace, String> {
    let seq = ok(characteristic_polytopes(l.polymatroid()))?;
    if ok(seq.total())?.is_full_dim() {
        Ok(l.clone())
    } else {
        Ok(ok(quotient_reduce(l))?.0)
    }
}

fn criterion_7() -> Outcome {
    let mut cases = vec![("sq2".to_string(), fixtures::sq2()), ("u23".to_string(), fixtures::u23())];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10 {
        let n = rng.gen_range(2..=3);
        let r = rng.gen_range(1..=3);
        cases.push((format!("random-{i}"), InvariantSubspace::random(&mut rng, n, r, 5, 2, 2)));
    }
    let mut total = 0;
    for (name, l) in cases {
        let l = reduced(&l)?;
        let seq = ok(characteristic_polytopes(l.polymatroid()))?;
        let fan = ok(fan_of(&seq))?;
        let mut dirs: Vec<Point> = (0..fan.rays().len()).map(|i| fan.ray(i)).collect();
        dirs.extend(random_directions(&mut rng, l.n(), 20));
        for xi in dirs {
            let rep = ok(check_truncation_theorem(&l, &xi, 7))?;
            ensure!(rep.pass, "{name}: truncation identities fail at ξ = {}", fmt_point(&xi));
            total += 1;
        }
    }
    Ok(format!("{total} directions on 12 arrangements"))
}

fn criterion_8() -> Outcome {
    let mut degrees = Vec::new();
    for (name, l) in [("sq2", fixtures::sq2()), ("u23", fixtures::u23()), ("hyp4", fixtures::hyp4())] {
        let l = reduced(&l)?;
        let seq = ok(characteristic_polytopes(l.polymatroid()))?;
        let fan = ok(fan_of(&seq))?;
        ensure!(ok(verify_compatibility(&l, &seq, &fan, 8))?.pass, "{name}: audit fails on Σ_L");
        let finer = ok(fan.stellar_subdivision(0))?;
        ensure!(finer.rays().len() > fan.rays().len() && ok(finer.refines(&fan))?, "{name}: refinement is not strict");
        ensure!(ok(verify_compatibility(&l, &seq, &finer, 8))?.pass, "{name}: audit fails on the refinement");
        if l.r() == l.n() {
            let d = ok(top_chern_degree(&l, &seq, &fan, 8))?;
            let c = ok(count_solutions(l.polymatroid(), &Polarization, None))?.count;
            ensure!(d == c, "{name}: top Chern degree {d} vs count {c}");
            degrees.push(format!("{name}={d}"));
        }
    }
    Ok(format!("3 fixtures audited; degrees {}", degrees.join(" ")))
}

fn criterion_9() -> Outcome {
    let mut out = Vec::new();
    for (n, big_n) in [(2, 3), (2, 4), (3, 4)] {
        let arr = ok(HyperplaneArrangement::generic(n, big_n, 9))?;
        let m = big_n + 1;
        for dil in [1i64, 2] {
            let base = vecbkk::arrangements::zero_sum_simplex(m).dilate(&rat::rat(dil));
            let scalars = vec![base; n];
            let c = ok(hyperplane_count(&arr, &scalars, &Polarization, None))?.count;
            let g = ok(generic_hyperplane_count(n, big_n, &scalars, &Polarization))?;
            // Bézout: n hypersurfaces of degree dil on a linear space
            let bezout = rat::rat(dil.pow(n as u32));
            ensure!(c == g && g == bezout, "{} hyperplanes in P^{n}, degree {dil}: count {c}, formula {g}, Bézout {bezout}", m);
        }
        out.push(format!("{m} in P^{n}"));
    }
    Ok(out.join(", "))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut strict = 0;
    for case in 0..50 {
        let l1 = InvariantSubspace::random(&mut rng, 3, 1, 4, 1, 2);
        let l2 = InvariantSubspace::random(&mut rng, 3, 1, 4, 1, 2);
        let l3 = InvariantSubspace::random(&mut rng, 3, 1, 4, 1, 2);
        let rep = ok(af_subspaces(&l1, &l2, &l3, &Polarization))?;
        ensure!(rep.verdict, "triple {case}: b² < ac with a = {}, b = {}, c = {}", rep.a, rep.b, rep.c);
        if rep.gap() > Rat::zero() {
            strict += 1;
        }
        let eq = ok(af_subspaces(&l1, &l1, &l3, &Polarization))?;
        ensure!(eq.b.clone() * &eq.b == eq.a.clone() * &eq.c, "triple {case}: equality case fails");
    }
    Ok(format!("50 triples, {strict} strict"))
}

fn criterion_11() -> Outcome {
    let t = Instant::now();
    let seq = ok(characteristic_polytopes(&fixtures::vamos6()))?;
    let [p1, p2] = fixtures::vamos_segments();
    let rep = ok(af_polytopes(&seq, &p1, &p2, &[], &Polarization))?;
    let scale = rat::rat(720);
    for (name, v) in [("a", &rep.a), ("b", &rep.b), ("c", &rep.c)] {
        let s = v * &scale;
        ensure!(s.is_integer() && s >= Rat::zero(), "6!·{name} = {s} is not a nonnegative integer");
    }
    ensure!(rep.verdict, "b² < ac");
    within(t, Duration::from_secs(600), "Vámos")?;
    Ok(format!("6!·(a, b, c) = ({}, {}, {}) in {:.2?}", &rep.a * &scale, &rep.b * &scale, &rep.c * &scale, t.elapsed()))
}

fn criterion_12() -> Outcome {
    let mut out = Vec::new();
    let (nat, _) = ok(fixtures::sq2().polymatroid().natural_matroid())?;
    for (name, m, dim) in [("U_{2,3}", fixtures::u23_matroid(), 5), ("SQ2 natural", nat, 6)] {
        let t = Instant::now();
        let rep = ok(aux_identity(&m, &[], &Polarization))?;
        ensure!(rep.n + rep.k == dim, "{name}: dimension {} expected {dim}", rep.n + rep.k);
        ensure!(rep.equal, "{name}: {} vs {}", rep.lhs_count, rep.rhs_count);
        within(t, Duration::from_secs(120), name)?;
        out.push(format!("{name} {}={} in {:.2?}", rep.lhs_count, rep.rhs_count, t.elapsed()));
    }
    Ok(out.join("; "))
}

fn criterion_13() -> Outcome {
    let mut reports = Vec::new();
    for jobs in ["1", "8", "1", "8"] {
        let mut all = String::new();
        for name in fixtures::NAMES {
            let input = format!("@{name}");
            let o = vecbkk_cli::run(["vecbkk", "validate", &input, "--level", "full", "--jobs", jobs, "--seed", "13"]);
            ensure!(o.code == 0, "validate {name} exited {}: {}", o.code, o.stderr);
            ensure!(o.stdout.contains("\"pass\": true"), "validate {name} did not pass");
            all.push_str(&o.stdout);
        }
        reports.push(all);
    }
    ensure!(reports.iter().all(|r| *r == reports[0]), "reports differ between runs");
    Ok(format!("{} fixtures x 4 runs byte-identical", fixtures::NAMES.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("SQ2 end-to-end", criterion_1),
        ("classical embedding", criterion_2),
        ("greedy vs hull", || criterion_3_and_4(false)),
        ("critical data vs canonical representation", || criterion_3_and_4(true)),
        ("representation independence", criterion_5),
        ("polarization vs recursion", criterion_6),
        ("truncation identities", criterion_7),
        ("Klyachko audit and top Chern degree", criterion_8),
        ("generic hyperplane count", criterion_9),
        ("representable Alexandrov-Fenchel", criterion_10),
        ("Vamos Alexandrov-Fenchel", criterion_11),
        ("auxiliary identity", criterion_12),
        ("determinism across thread counts", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
