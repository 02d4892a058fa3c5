//! Validation suite: every cross-check that applies to one input, in a
//! fixed order, with exact comparisons only.

use crate::{Level, Reduced};
use serde::Serialize;
use vecbkk::afcheck::aux_identity;
use vecbkk::bkk::count_solutions;
use vecbkk::charseq::{
    characteristic_polytopes, check_truncation_theorem, critical_data, critical_data_polymatroid, direction_sample,
    fan_of,
};
use vecbkk::fixtures::Input;
use vecbkk::klyachko::{top_chern_degree, verify_compatibility};
use vecbkk::polyhedra::{MixedVolumeAlgorithm, MixedVolumeRegistry};
use vecbkk::rat;
use vecbkk::Result;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub level: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Largest ambient dimension for fan-based checks.
const FAN_DIM_LIMIT: usize = 4;
/// Largest `n + k` for the auxiliary identity.
const AUX_DIM_LIMIT: usize = 7;

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn run(&mut self, name: &'static str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) {
        let (status, detail) = match f() {
            Ok(Ok(d)) => (Status::Pass, d),
            Ok(Err(d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(Check { name, status, detail });
    }

    fn skip(&mut self, name: &'static str, why: impl Into<String>) {
        self.checks.push(Check { name, status: Status::Skipped, detail: why.into() });
    }
}

fn verdict(ok: bool, fail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(String::new())
    } else {
        Err(fail)
    }
}

pub fn run_suite(
    input: &Input,
    level: Level,
    seed: u64,
    alg: &dyn MixedVolumeAlgorithm,
    registry: &MixedVolumeRegistry,
) -> Report {
    let full = level == Level::Full;
    let extra = if full { 200 } else { 20 };
    let mut s = Suite { checks: Vec::new() };
    let pm = match input.polymatroid() {
        Ok(p) => p,
        Err(e) => {
            s.checks.push(Check { name: "load", status: Status::Fail, detail: e.to_string() });
            return finish(input, level, s);
        }
    };
    let n = pm.n();
    let r = pm.total_rank() as usize;
    let dirs = direction_sample(n, extra, seed);

    s.run("rank-axioms", || Ok(pm.audit().map(|_| String::new()).map_err(|e| e.to_string())));

    s.run("greedy-vs-hull", || {
        let seq = characteristic_polytopes(&pm)?;
        for xi in &dirs {
            let g = pm.greedy_min_sequence(xi)?;
            let hull: Vec<_> = (1..=r).map(|i| seq.delta(i).support_value(xi)).collect();
            if g.partial_sums != hull {
                return Ok(Err(format!("mismatch at xi = {:?}", xi.iter().map(rat::fmt_rat).collect::<Vec<_>>())));
            }
        }
        Ok(Ok(format!("{} directions", dirs.len())))
    });

    s.run("critical-vs-canonical", || {
        let seq = characteristic_polytopes(&pm)?;
        let sub = input.subspace().ok();
        for xi in &dirs {
            let cd = match &sub {
                Some(l) => critical_data(l, xi)?,
                None => critical_data_polymatroid(&pm, xi)?,
            };
            if cd.multiset() != seq.support_values(xi) {
                return Ok(Err(format!("mismatch at xi = {:?}", xi.iter().map(rat::fmt_rat).collect::<Vec<_>>())));
            }
        }
        Ok(Ok(format!("{} directions", dirs.len())))
    });

    if r == n {
        s.run("mixed-volume-cross-check", || {
            let rep = count_solutions(&pm, alg, Some(registry))?;
            Ok(verdict(
                rat::is_integral(&rep.count) && rep.nonnegative,
                format!("count {} is not a nonnegative integer", rat::fmt_rat(&rep.count)),
            )
            .map(|_| format!("count {}", rat::fmt_rat(&rep.count))))
        });
    } else {
        s.skip("mixed-volume-cross-check", format!("rank {r} differs from n = {n}"));
    }

    let reduced = Reduced::of(input);
    let fan_dim = reduced.as_ref().map(|x| x.polymatroid().n()).unwrap_or(n);
    let subspace_checks = matches!(input, Input::Subspace(_) | Input::Arrangement(_));
    if fan_dim > FAN_DIM_LIMIT {
        for name in ["fan", "truncation", "klyachko-compatibility", "klyachko-refinement", "top-chern-vs-count"] {
            s.skip(name, format!("fan checks run up to dimension {FAN_DIM_LIMIT}"));
        }
    } else {
        let red = match reduced {
            Ok(x) => x,
            Err(e) => {
                s.checks.push(Check { name: "fan", status: Status::Fail, detail: e.to_string() });
                return finish(input, level, s);
            }
        };
        let seq = characteristic_polytopes(red.polymatroid());
        let fan = seq.as_ref().map_err(|e| e.to_string()).and_then(|q| fan_of(q).map_err(|e| e.to_string()));
        s.run("fan", || {
            Ok(match &fan {
                Ok(f) => Ok(format!("{} rays, {} maximal cones", f.rays().len(), f.maximal_cones().len())),
                Err(e) => Err(e.clone()),
            })
        });
        match (fan, seq, red.subspace()) {
            (Ok(fan), Ok(seq), Ok(l)) if subspace_checks => {
                s.run("truncation", || {
                    let mut xs: Vec<_> = (0..fan.rays().len()).map(|i| fan.ray(i)).collect();
                    let k = if full { 20 } else { 5 };
                    let sample = direction_sample(l.n(), k, seed);
                    // the last k entries are the seeded random directions
                    xs.extend(sample[sample.len().saturating_sub(k)..].iter().cloned());
                    for xi in &xs {
                        let rep = check_truncation_theorem(l, xi, seed)?;
                        if !rep.pass {
                            return Ok(Err(format!("fails at xi = {:?}", xi.iter().map(rat::fmt_rat).collect::<Vec<_>>())));
                        }
                    }
                    Ok(Ok(format!("{} directions", xs.len())))
                });
                s.run("klyachko-compatibility", || {
                    let rep = verify_compatibility(l, &seq, &fan, seed)?;
                    Ok(verdict(rep.pass, "compatibility audit failed on Σ_L".into()))
                });
                if full {
                    s.run("klyachko-refinement", || {
                        let refined = fan.stellar_subdivision(0)?;
                        let rep = verify_compatibility(l, &seq, &refined, seed)?;
                        Ok(verdict(rep.pass, "compatibility audit failed on a stellar refinement".into()))
                    });
                } else {
                    s.skip("klyachko-refinement", "runs at level full");
                }
                if l.r() == l.n() {
                    s.run("top-chern-vs-count", || {
                        let d = top_chern_degree(l, &seq, &fan, seed)?;
                        let c = count_solutions(l.polymatroid(), alg, None)?.count;
                        Ok(verdict(d == c, format!("top degree {} vs count {}", rat::fmt_rat(&d), rat::fmt_rat(&c)))
                            .map(|_| format!("both {}", rat::fmt_rat(&c))))
                    });
                } else {
                    s.skip("top-chern-vs-count", "rank differs from n");
                }
            }
            _ => {
                for name in ["truncation", "klyachko-compatibility", "klyachko-refinement", "top-chern-vs-count"] {
                    s.skip(name, "needs an invariant subspace and its fan");
                }
            }
        }
    }

    if full {
        let matroid = if pm.is_matroid() { Some(pm.clone()) } else { pm.natural_matroid().ok().map(|x| x.0) };
        match matroid {
            Some(m) if r == n && n + m.len() <= AUX_DIM_LIMIT => s.run("aux-identity", || {
                let rep = aux_identity(&m, &[], alg)?;
                Ok(verdict(rep.equal, format!("{} vs {}", rat::fmt_rat(&rep.lhs_count), rat::fmt_rat(&rep.rhs_count))))
            }),
            _ => s.skip("aux-identity", format!("needs rank n and n + k ≤ {AUX_DIM_LIMIT}")),
        }
    } else {
        s.skip("aux-identity", "runs at level full");
    }
    finish(input, level, s)
}

fn finish(input: &Input, level: Level, s: Suite) -> Report {
    let pass = s.checks.iter().all(|c| c.status != Status::Fail);
    Report {
        kind: input.kind(),
        level: if level == Level::Full { "full" } else { "fast" },
        checks: s.checks,
        pass,
    }
}
