//! Command-line front end: argument parsing, input loading, dispatch and
//! deterministic JSON output. Everything runs in-process through [`run`].

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use vecbkk::afcheck::{af_polytopes, af_subspaces, aux_identity, aux_reduction_demo};
use vecbkk::arrangements::{generic_hyperplane_count, hyperplane_count, subspace_of, zero_sum_simplex, HyperplaneArrangement};
use vecbkk::bkk::{count_mixed, count_solutions, minkowski_weights};
use vecbkk::charseq::{
    characteristic_polytopes, check_truncation_theorem, critical_data, critical_data_polymatroid,
    fan_of, quotient_reduce, quotient_reduce_polymatroid, truncate, CharacterReduction, CharacteristicSequence,
    InvariantSubspace,
};
use vecbkk::fixtures::{self, Input};
use vecbkk::klyachko::{equivariant_chern, ray_filtration, top_chern_degree, verify_compatibility};
use vecbkk::polyhedra::{Fan, LatticePolytope, MixedVolumeAlgorithm, MixedVolumeRegistry, VirtualPolytope};
use vecbkk::polymat::Polymatroid;
use vecbkk::rat::{self, Point, Rat};
use vecbkk::{Error, ErrorClass, Result};

pub mod validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "vecbkk", version, about = "Root counts and characteristic polytopes of vector-valued Laurent systems")]
pub struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, env = "VECBKK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "fast")]
    pub level: Level,
    /// Mixed volume algorithm: polarization or recursive.
    #[arg(long, global = true, default_value = "polarization")]
    pub mvol: String,
    /// Direction as comma-separated rationals, e.g. `1,-1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Fan JSON file.
    #[arg(long, global = true)]
    pub fan: Option<PathBuf>,
    /// Polytope JSON file; repeatable, order matters.
    #[arg(long = "polytope", global = true)]
    pub polytopes: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs are JSON files, or `@name` for a built-in fixture.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic polytopes Δ_1, …, Δ_r and the canonical representation.
    Charseq { input: String },
    /// Canonical support values, critical data and greedy sums at --xi.
    SupportEval { input: String },
    /// The fan Σ_L, after reducing to the quotient torus when needed.
    Fan { input: String },
    /// Generic number of solutions n!·MVol_n; needs rank n.
    Count { input: String },
    /// Count with scalar Newton polytopes from --polytope.
    CountMixed { input: String },
    /// Minkowski weights on the (n−r)-cones of Σ_L or --fan.
    Weights { input: String },
    /// Klyachko filtrations and the compatibility audit.
    Klyachko { input: String },
    /// Equivariant Chern classes and the top degree.
    Chern { input: String },
    /// Truncations at --xi and the face identities.
    Truncate { input: String },
    /// Alexandrov–Fenchel for rank-1 L1, L2 and rank n−2 L3.
    Af { l1: String, l2: String, l3: String },
    /// Alexandrov–Fenchel with polytopes P1, P2 and rest from --polytope.
    AfPolymatroid { input: String },
    /// Auxiliary-variable identity; scalars from --polytope.
    AuxCheck { input: String },
    /// Solutions on a hyperplane-arrangement complement; scalars from --polytope.
    Hyperplane { input: String },
    /// Runs the validation suite on one input.
    Validate { input: String },
    /// Prints or writes a built-in fixture.
    EmitFixture {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Invalid => 1,
        ErrorClass::Precondition => 2,
        ErrorClass::Genericity => 3,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(Error::Invalid(format!("cannot build thread pool: {e}"))),
        },
        None => execute(cli),
    };
    match result {
        Ok(text) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Err(e) => {
            let class = e.class();
            let body = json!({ "error": e.to_string(), "class": format!("{class:?}").to_lowercase() });
            Outcome { code: exit_code(class), stdout: String::new(), stderr: format!("{body}\n") }
        }
    }
}

/// Loaded inputs plus a running digest of them.
struct Ctx<'a> {
    cli: &'a Cli,
    registry: MixedVolumeRegistry,
    hasher: Sha256,
    /// Output printed verbatim instead of a report.
    raw: Option<String>,
}

impl<'a> Ctx<'a> {
    fn new(cli: &'a Cli) -> Self {
        Ctx { cli, registry: MixedVolumeRegistry::default(), hasher: Sha256::new(), raw: None }
    }

    fn absorb(&mut self, tag: &str, bytes: &[u8]) {
        self.hasher.update((tag.len() as u64).to_le_bytes());
        self.hasher.update(tag.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    fn read(&mut self, tag: &str, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        self.absorb(tag, text.as_bytes());
        Ok(text)
    }

    /// Inputs are hashed by their canonical serialization, so a fixture and
    /// its emitted file share a digest.
    fn input(&mut self, source: &str) -> Result<Input> {
        let f = match source.strip_prefix('@') {
            Some(name) => fixtures::fixture(name)?,
            None => {
                let text = std::fs::read_to_string(source)
                    .map_err(|e| Error::Parse(format!("cannot read {source}: {e}")))?;
                fixtures::parse_input(&text).map_err(|e| located(source, e))?
            }
        };
        let text = serde_json::to_string(&f)?;
        self.absorb("input", text.as_bytes());
        Ok(f)
    }

    fn alg(&self) -> Result<&dyn MixedVolumeAlgorithm> {
        self.registry.get(&self.cli.mvol)
    }

    fn cross_check(&self) -> Option<&MixedVolumeRegistry> {
        (self.cli.level == Level::Full).then_some(&self.registry)
    }

    fn polytopes(&mut self) -> Result<Vec<LatticePolytope>> {
        let paths = self.cli.polytopes.clone();
        paths
            .iter()
            .map(|p| {
                let text = self.read("polytope", p)?;
                serde_json::from_str(&text).map_err(|e| located(&p.display().to_string(), Error::from(e)))
            })
            .collect()
    }

    fn fan(&mut self) -> Result<Option<Fan>> {
        let Some(p) = self.cli.fan.clone() else { return Ok(None) };
        let text = self.read("fan", &p)?;
        let fan: Fan = serde_json::from_str(&text).map_err(|e| located(&p.display().to_string(), Error::from(e)))?;
        Ok(Some(fan))
    }

    fn xi(&mut self, n: usize) -> Result<Point> {
        let s = self.cli.xi.clone().ok_or_else(|| Error::Invalid("this command needs --xi".into()))?;
        self.absorb("xi", s.as_bytes());
        let xi = rat::parse_rat_list(&s)?;
        if xi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: xi.len() });
        }
        Ok(xi)
    }

    fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }
}

fn located(source: &str, e: Error) -> Error {
    match e {
        Error::Json(j) => Error::Parse(format!("{source}:{}:{}: {j}", j.line(), j.column())),
        Error::Parse(m) => Error::Parse(format!("{source}: {m}")),
        Error::Invalid(m) => Error::Invalid(format!("{source}: {m}")),
        other => other,
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let mut ctx = Ctx::new(cli);
    let (name, body) = dispatch(&mut ctx)?;
    let Some(mut body) = body else {
        return Ok(ctx.raw.take().unwrap_or_default());
    };
    if let Value::Object(m) = &mut body {
        m.insert("command".into(), json!(name));
        m.insert("seed".into(), json!(cli.seed));
        m.insert("inputs_digest".into(), json!(ctx.digest()));
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&body)?))
}

fn obj(v: impl serde::Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| json!(rat::fmt_rat(x))).collect())
}

/// Subspace or polymatroid reduced to the quotient torus when `Δ_L` is not
/// full-dimensional, with the reduction used.
pub enum Reduced {
    Subspace(InvariantSubspace, Option<CharacterReduction>),
    Polymatroid(Polymatroid, Option<CharacterReduction>),
}

impl Reduced {
    pub fn of(input: &Input) -> Result<Self> {
        match input {
            Input::Polymatroid(p) => {
                let seq = characteristic_polytopes(p)?;
                if seq.total()?.is_full_dim() {
                    Ok(Reduced::Polymatroid(p.clone(), None))
                } else {
                    let (q, red) = quotient_reduce_polymatroid(p)?;
                    Ok(Reduced::Polymatroid(q, Some(red)))
                }
            }
            other => {
                let l = other.subspace()?;
                let seq = characteristic_polytopes(l.polymatroid())?;
                if seq.total()?.is_full_dim() {
                    Ok(Reduced::Subspace(l, None))
                } else {
                    let (q, red) = quotient_reduce(&l)?;
                    Ok(Reduced::Subspace(q, Some(red)))
                }
            }
        }
    }

    pub fn polymatroid(&self) -> &Polymatroid {
        match self {
            Reduced::Subspace(l, _) => l.polymatroid(),
            Reduced::Polymatroid(p, _) => p,
        }
    }

    pub fn subspace(&self) -> Result<&InvariantSubspace> {
        match self {
            Reduced::Subspace(l, _) => Ok(l),
            Reduced::Polymatroid(..) => Err(Error::Precondition("this command needs an invariant subspace".into())),
        }
    }

    pub fn reduction_json(&self) -> Value {
        let red = match self {
            Reduced::Subspace(_, r) | Reduced::Polymatroid(_, r) => r,
        };
        match red {
            None => Value::Null,
            Some(r) => json!({
                "anchor": r.anchor,
                "basis": r.frame.basis().iter().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        }
    }
}

fn seq_json(seq: &CharacteristicSequence) -> Result<Value> {
    let polys = (1..=seq.r()).map(|i| obj(&**seq.delta(i))).collect::<Result<Vec<_>>>()?;
    let canonical: Vec<Value> = seq
        .canonical()
        .iter()
        .map(|v| virtual_json(v))
        .collect::<Result<_>>()?;
    Ok(json!({ "n": seq.n(), "r": seq.r(), "polytopes": polys, "canonical": canonical }))
}

fn virtual_json(v: &VirtualPolytope) -> Result<Value> {
    v.terms()
        .iter()
        .map(|t| Ok(json!({ "sign": if t.positive { "+" } else { "-" }, "polytope": obj(&*t.polytope)? })))
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

/// Fan given by --fan, else `Σ_L` of the (reduced) sequence.
fn fan_for(ctx: &mut Ctx, input: &Input) -> Result<(Reduced, Fan)> {
    if let Some(f) = ctx.fan()? {
        let red = match input {
            Input::Polymatroid(p) => Reduced::Polymatroid(p.clone(), None),
            other => Reduced::Subspace(other.subspace()?, None),
        };
        return Ok((red, f));
    }
    let red = Reduced::of(input)?;
    let seq = characteristic_polytopes(red.polymatroid())?;
    let fan = fan_of(&seq)?;
    Ok((red, fan))
}

fn dispatch(ctx: &mut Ctx) -> Result<(&'static str, Option<Value>)> {
    let cli = ctx.cli;
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Charseq { input } => {
            let inp = ctx.input(input)?;
            let seq = characteristic_polytopes(&inp.polymatroid()?)?;
            ("charseq", Some(merge(json!({ "kind": inp.kind() }), seq_json(&seq)?)))
        }
        Command::SupportEval { input } => {
            let inp = ctx.input(input)?;
            let p = inp.polymatroid()?;
            let xi = ctx.xi(p.n())?;
            let seq = characteristic_polytopes(&p)?;
            let cd = match &inp {
                Input::Polymatroid(_) => critical_data_polymatroid(&p, &xi)?,
                other => critical_data(&other.subspace()?, &xi)?,
            };
            let greedy = p.greedy_min_sequence(&xi)?;
            let jumps: Vec<Value> = cd.jumps.iter().map(|(c, d)| json!([rat::fmt_rat(c), d])).collect();
            (
                "support-eval",
                Some(json!({
                    "xi": rats(&xi),
                    "values": rats(&seq.support_values(&xi)),
                    "critical": jumps,
                    "greedy_partial_sums": rats(&greedy.partial_sums),
                })),
            )
        }
        Command::Fan { input } => {
            let inp = ctx.input(input)?;
            let (red, fan) = fan_for(ctx, &inp)?;
            ("fan", Some(json!({ "reduction": red.reduction_json(), "fan": obj(&fan)? })))
        }
        Command::Count { input } => {
            let inp = ctx.input(input)?;
            let rep = count_solutions(&inp.polymatroid()?, ctx.alg()?, ctx.cross_check())?;
            ("count", Some(obj(&rep)?))
        }
        Command::CountMixed { input } => {
            let inp = ctx.input(input)?;
            let scalars = ctx.polytopes()?;
            let seq = characteristic_polytopes(&inp.polymatroid()?)?;
            let rep = count_mixed(&seq, &scalars, ctx.alg()?, ctx.cross_check())?;
            ("count-mixed", Some(obj(&rep)?))
        }
        Command::Weights { input } => {
            let inp = ctx.input(input)?;
            let (red, fan) = fan_for(ctx, &inp)?;
            let seq = characteristic_polytopes(red.polymatroid())?;
            let table = minkowski_weights(&seq, &fan, ctx.alg()?)?;
            ("weights", Some(merge(obj(&table)?, json!({ "reduction": red.reduction_json() }))))
        }
        Command::Klyachko { input } => {
            let inp = ctx.input(input)?;
            let (red, fan) = fan_for(ctx, &inp)?;
            let l = red.subspace()?;
            let seq = characteristic_polytopes(l.polymatroid())?;
            let mut rays = Vec::new();
            for i in 0..fan.rays().len() {
                let f = ray_filtration(l, &fan.ray(i))?;
                let profile: Vec<Value> = f.profile().iter().map(|(c, d)| json!([rat::fmt_rat(c), d])).collect();
                rays.push(json!({ "ray": rats(&fan.ray(i)), "profile": profile }));
            }
            let report = verify_compatibility(l, &seq, &fan, seed)?;
            (
                "klyachko",
                Some(json!({
                    "reduction": red.reduction_json(),
                    "fan": obj(&fan)?,
                    "filtrations": rays,
                    "compatibility": obj(&report)?,
                })),
            )
        }
        Command::Chern { input } => {
            let inp = ctx.input(input)?;
            let (red, fan) = fan_for(ctx, &inp)?;
            let l = red.subspace()?;
            let seq = characteristic_polytopes(l.polymatroid())?;
            let classes = (1..=l.r().min(l.n()))
                .map(|i| obj(&equivariant_chern(l, &seq, &fan, i, seed)?))
                .collect::<Result<Vec<_>>>()?;
            let mut out = json!({ "reduction": red.reduction_json(), "classes": classes });
            if l.r() == l.n() {
                let degree = top_chern_degree(l, &seq, &fan, seed)?;
                let count = count_solutions(l.polymatroid(), ctx.alg()?, None)?.count;
                out = merge(
                    out,
                    json!({ "top_degree": rat::fmt_rat(&degree), "count": rat::fmt_rat(&count), "agrees": degree == count }),
                );
            }
            ("chern", Some(out))
        }
        Command::Truncate { input } => {
            let inp = ctx.input(input)?;
            let l = inp.subspace()?;
            let xi = ctx.xi(l.n())?;
            let truncs = truncate(&l, &xi, seed)?;
            let pieces = truncs
                .iter()
                .map(|t| Ok(json!({ "level": rat::fmt_rat(&t.level), "subspace": obj(&t.sub)? })))
                .collect::<Result<Vec<_>>>()?;
            let report = check_truncation_theorem(&l, &xi, seed)?;
            ("truncate", Some(json!({ "truncations": pieces, "report": obj(&report)? })))
        }
        Command::Af { l1, l2, l3 } => {
            let a = ctx.input(l1)?.subspace()?;
            let b = ctx.input(l2)?.subspace()?;
            let c = ctx.input(l3)?.subspace()?;
            ("af", Some(obj(&af_subspaces(&a, &b, &c, ctx.alg()?)?)?))
        }
        Command::AfPolymatroid { input } => {
            let inp = ctx.input(input)?;
            let ps = ctx.polytopes()?;
            if ps.len() < 2 {
                return Err(Error::Precondition("af-polymatroid needs at least two --polytope bodies".into()));
            }
            let seq = characteristic_polytopes(&inp.polymatroid()?)?;
            ("af-polymatroid", Some(obj(&af_polytopes(&seq, &ps[0], &ps[1], &ps[2..], ctx.alg()?)?)?))
        }
        Command::AuxCheck { input } => {
            let inp = ctx.input(input)?;
            let scalars = ctx.polytopes()?;
            let alg = ctx.alg()?;
            let out = match &inp {
                Input::Subspace(l) if scalars.is_empty() && l.r() == l.n() => obj(&aux_reduction_demo(l, alg)?)?,
                other => {
                    let p = other.polymatroid()?;
                    let m = if p.is_matroid() { p } else { p.natural_matroid()?.0 };
                    obj(&aux_identity(&m, &scalars, alg)?)?
                }
            };
            ("aux-check", Some(out))
        }
        Command::Hyperplane { input } => {
            let inp = ctx.input(input)?;
            let Input::Arrangement(arr) = &inp else {
                return Err(Error::Invalid("hyperplane needs an arrangement input with `forms`".into()));
            };
            let mut scalars = ctx.polytopes()?;
            if scalars.is_empty() {
                scalars = vec![zero_sum_simplex(arr.forms.len()); arr.n];
            }
            let alg = ctx.alg()?;
            let rep = hyperplane_count(arr, &scalars, alg, ctx.cross_check())?;
            let general = general_position(arr);
            let mut out = merge(obj(&rep)?, json!({ "general_position": general }));
            if general {
                let g = generic_hyperplane_count(arr.n, arr.big_n(), &scalars, alg)?;
                out = merge(out, json!({ "generic_value": rat::fmt_rat(&g), "agrees": g == rep.count }));
            }
            let l = subspace_of(arr)?;
            out = merge(out, json!({ "subspace": obj(&l)? }));
            ("hyperplane", Some(out))
        }
        Command::Validate { input } => {
            let inp = ctx.input(input)?;
            let alg = ctx.alg()?;
            let report = validate::run_suite(&inp, cli.level, seed, alg, &ctx.registry);
            ("validate", Some(obj(&report)?))
        }
        Command::EmitFixture { name, out } => {
            let f = fixtures::fixture(name)?;
            let text = format!("{}\n", serde_json::to_string_pretty(&f)?);
            match out {
                None => {
                    ctx.raw = Some(text);
                    ("emit-fixture", None)
                }
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
                    ctx.absorb("fixture", text.as_bytes());
                    ("emit-fixture", Some(json!({ "fixture": name, "path": path.display().to_string() })))
                }
            }
        }
    })
}

/// Every `n+1` of the forms are independent.
pub fn general_position(arr: &HyperplaneArrangement) -> bool {
    use itertools::Itertools;
    arr.forms.iter().combinations(arr.n + 1).all(|s| {
        let rows: Vec<Point> = s.into_iter().cloned().collect();
        vecbkk::ratlin::rank(&rows) == rows.len()
    })
}
