//! One function per subcommand, generic over the coefficient field.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use derivator::document::{parse_document, Payload};
use derivator::fincat::{comma, FinCategory, FinPoset, FunctorData, MonotoneMap, Side};
use derivator::fincat::named_shape;
use derivator::repmodel::{exact_square_verdict, kan, KanSide, VecDiagram};
use derivator::stablemodel::{
    biproduct, cocartesian_status, cone, hkan, octahedron, rotate, suspension, suspension_map, triangle, ChainDiagram,
    ChainMap, Complex, HoSide, Replacement, Triangle, Witness, ZigStep, Zigzag,
};
use derivator::verify::{gen_instance, long_exact_check, run_suite_with, Gen, InstanceKind, SizeBounds};
use derivator::{Field, Fp, Verdict, Q};

use crate::output::{slug, write_json, Sink};
use crate::{Cli, Command, SideArg, SliceArg};

pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }
}

/// Primes accepted by `--field fp:P`. Arithmetic is in `u64`, so every
/// prime must stay below `2^32`.
pub const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 101, 257, 65537, 1_000_003, 2_147_483_647];

macro_rules! dispatch {
    ($field:expr, $cli:expr; $($p:literal)*) => {
        match $field {
            FieldArg::Q => run_in::<Q>($cli),
            $(FieldArg::Fp($p) => run_in::<Fp<$p>>($cli),)*
            FieldArg::Fp(p) => bail!("unsupported prime {p}; supported: {:?}", PRIMES),
        }
    };
}

enum FieldArg {
    Q,
    Fp(u64),
}

fn parse_field(s: &str) -> Result<FieldArg> {
    if s == "q" {
        return Ok(FieldArg::Q);
    }
    let p = s
        .strip_prefix("fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| anyhow!("--field must be `q` or `fp:P`, got {s:?}"))?;
    if !PRIMES.contains(&p) {
        bail!("unsupported prime {p}; supported: {:?}", PRIMES);
    }
    Ok(FieldArg::Fp(p))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let field = parse_field(&cli.global.field)?;
    dispatch!(field, cli; 2 3 5 7 11 13 17 101 257 65537 1000003 2147483647)
}

fn run_in<F: Field>(cli: &Cli) -> Result<Outcome> {
    let sink = Sink::new(cli.global.out.clone());
    let g = &cli.global;
    match &cli.command {
        Command::Shape { name, n, map } => shape(&sink, name, *n, map.as_deref()),
        Command::Slice { functor, at, side } => slice(&sink, functor, at, *side),
        Command::Comma { u1, u2 } => comma_cmd(&sink, u1, u2),
        Command::Kan { diagram, functor, side } => kan_cmd::<F>(&sink, diagram, functor, *side),
        Command::Hocolim { diagram, lim } => hocolim_cmd::<F>(&sink, diagram, *lim),
        Command::Cone { map } => cone_cmd::<F>(&sink, map),
        Command::Suspension { input } => suspension_cmd::<F>(&sink, input),
        Command::Triangle { map } => triangle_cmd::<F>(&sink, map),
        Command::Rotate { map } => rotate_cmd::<F>(&sink, map),
        Command::Octahedron { f, g } => octahedron_cmd::<F>(&sink, f, g),
        Command::Biproduct { x, y } => biproduct_cmd::<F>(&sink, x, y),
        Command::Status { input } => status::<F>(&sink, input),
        Command::Check { square, sample } => check::<F>(&sink, square, sample.as_deref(), g.seed, g.trials.unwrap_or(3)),
        Command::Suite { name, max_elements, max_dim } => {
            let mut bounds = SizeBounds::default();
            bounds.max_elements = max_elements.unwrap_or(bounds.max_elements);
            bounds.max_dim = max_dim.unwrap_or(bounds.max_dim);
            suite::<F>(&sink, name, g.seed, g.trials.unwrap_or(10), bounds, g.json)
        }
        Command::Gen { kind } => {
            let kind: InstanceKind = kind.parse()?;
            sink.emit(&gen_instance(kind, g.seed, SizeBounds::default()))?;
            Ok(Outcome::Success)
        }
    }
}

// ---------------------------------------------------------------------------
// Loading

fn load<F: Field>(path: &Path) -> Result<Payload<F>> {
    parse_document(path).with_context(|| format!("loading {}", path.display()))
}

fn wrong_kind<T>(path: &Path, want: &str, got: &str) -> Result<T> {
    bail!("{}: expected a {want} document, found {got}", path.display())
}

fn load_functor(path: &Path) -> Result<MonotoneMap> {
    match load::<Q>(path)? {
        Payload::Functor(u) => Ok(u),
        p => wrong_kind(path, "functor", p.kind()),
    }
}

fn load_map<F: Field>(path: &Path) -> Result<ChainMap<F>> {
    match load(path)? {
        Payload::ChainMap(f) => Ok(f),
        p => wrong_kind(path, "chain_map", p.kind()),
    }
}

fn load_complex<F: Field>(path: &Path) -> Result<Complex<F>> {
    match load(path)? {
        Payload::Complex(c) => Ok(c),
        p => wrong_kind(path, "complex", p.kind()),
    }
}

// ---------------------------------------------------------------------------
// Serialization helpers

fn doc<F: Field>(p: Payload<F>) -> Value {
    p.to_document()
}

fn complex_doc<F: Field>(c: &Complex<F>) -> Value {
    doc(Payload::Complex(c.clone()))
}

fn map_doc<F: Field>(f: &ChainMap<F>) -> Value {
    doc(Payload::ChainMap(f.clone()))
}

fn poset_doc(p: &FinPoset) -> Value {
    doc::<Q>(Payload::Poset(p.clone()))
}

fn functor_doc(u: &MonotoneMap) -> Value {
    doc::<Q>(Payload::Functor(u.clone()))
}

fn dims(c: &Complex<impl Field>) -> Value {
    json!(c.homology_dims().0)
}

fn zigzag_json<F: Field>(name: &str, z: &Zigzag<F>) -> Value {
    let legs: Vec<Value> = z
        .steps()
        .iter()
        .map(|s| match s {
            ZigStep::Forward(f) => json!({"direction": "forward", "quasi_iso": f.is_quasi_iso(), "map": map_doc(f)}),
            ZigStep::Backward(f) => json!({"direction": "backward", "quasi_iso": f.is_quasi_iso(), "map": map_doc(f)}),
        })
        .collect();
    json!({"name": name, "quasi_iso": z.is_quasi_iso(), "legs": legs})
}

fn witness_summary<F: Field>(ws: &[Witness<F>]) -> Value {
    Value::Array(ws.iter().map(|w| json!({"name": w.name, "quasi_iso": w.holds()})).collect())
}

/// `x, y, c, sx` and `f, g, h` of a triangle, as documents.
fn triangle_docs<F: Field>(t: &Triangle<F>) -> Vec<(&'static str, Value)> {
    vec![
        ("x", complex_doc(&t.x)),
        ("y", complex_doc(&t.y)),
        ("c", complex_doc(&t.c)),
        ("sx", complex_doc(&t.sx)),
        ("f", map_doc(&t.f)),
        ("g", map_doc(&t.g)),
        ("h", map_doc(&t.h)),
    ]
}

fn triangle_summary<F: Field>(t: &Triangle<F>) -> Value {
    json!({
        "provenance": t.provenance,
        "homology": {"X": dims(&t.x), "Y": dims(&t.y), "C": dims(&t.c), "SX": dims(&t.sx)},
        "long_exact_sequence": long_exact_check(t),
    })
}

/// Writes the triangle's documents and witnesses under `dir`.
fn write_triangle<F: Field>(dir: &Path, t: &Triangle<F>, witnesses: &[Witness<F>]) -> Result<()> {
    for (name, v) in triangle_docs(t) {
        write_json(&dir.join(format!("{name}.json")), &v)?;
    }
    write_json(&dir.join("witnesses").join("shift.json"), &zigzag_json("SX ≃ ΣX", &t.shift))?;
    for w in witnesses {
        write_json(&dir.join("witnesses").join(format!("{}.json", slug(&w.name))), &zigzag_json(&w.name, &w.zigzag))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shapes

fn shape(sink: &Sink, name: &str, n: Option<usize>, map: Option<&str>) -> Result<Outcome> {
    let s = named_shape(name, n)?;
    let v = match map {
        None => poset_doc(&s.poset),
        Some(m) => {
            let u = s.maps.get(m).ok_or_else(|| {
                anyhow!("{name} has no map {m:?}; available: {:?}", s.maps.keys().collect::<Vec<_>>())
            })?;
            functor_doc(u)
        }
    };
    sink.emit(&v)?;
    Ok(Outcome::Success)
}

fn slice(sink: &Sink, functor: &Path, at: &str, side: SliceArg) -> Result<Outcome> {
    let u = load_functor(functor)?;
    let k = u.target().index(at)?;
    let side = match side {
        SliceArg::Over => Side::Over,
        SliceArg::Under => Side::Under,
    };
    let (p, incl) = u.slice(k, side)?;
    sink.emit(&json!({"poset": poset_doc(&p), "inclusion": functor_doc(&incl)}))?;
    Ok(Outcome::Success)
}

fn as_monotone(u: &FunctorData) -> Result<MonotoneMap> {
    let s = u.source().as_poset().ok_or_else(|| anyhow!("source is not a poset"))?;
    let t = u.target().as_poset().ok_or_else(|| anyhow!("target is not a poset"))?;
    Ok(MonotoneMap::new(s, t, u.object_map().to_vec())?)
}

fn comma_cmd(sink: &Sink, u1: &Path, u2: &Path) -> Result<Outcome> {
    let (a, b) = (load_functor(u1)?, load_functor(u2)?);
    let c = comma(&FunctorData::from_monotone(&a), &FunctorData::from_monotone(&b))?;
    let p = c.category.as_poset().ok_or_else(|| anyhow!("comma category is not a poset"))?;
    sink.emit(&json!({
        "poset": poset_doc(&p),
        "pr1": functor_doc(&as_monotone(&c.pr1)?),
        "pr2": functor_doc(&as_monotone(&c.pr2)?),
    }))?;
    Ok(Outcome::Success)
}

// ---------------------------------------------------------------------------
// Kan extensions and (co)limits

fn kan_side(s: SideArg) -> KanSide {
    match s {
        SideArg::Left => KanSide::Left,
        SideArg::Right => KanSide::Right,
    }
}

fn kan_cmd<F: Field>(sink: &Sink, diagram: &Path, functor: &Path, side: SideArg) -> Result<Outcome> {
    let u = load_functor(functor)?;
    let out = match load::<F>(diagram)? {
        Payload::ChainDiagram(x) => doc(Payload::ChainDiagram(hkan(&u, &x, kan_side(side))?)),
        Payload::VecDiagram(x) => {
            if x.shape().as_poset().as_ref() != Some(u.source()) {
                bail!("the diagram does not live on the functor's source");
            }
            let uf = FunctorData::from_monotone_on(&u, x.shape().clone(), Arc::new(FinCategory::from_poset(u.target())));
            doc(Payload::VecDiagram(kan(&uf, &x, kan_side(side))?))
        }
        p => return wrong_kind(diagram, "chain_diagram or vec_diagram", p.kind()),
    };
    sink.emit(&out)?;
    Ok(Outcome::Success)
}

fn hocolim_cmd<F: Field>(sink: &Sink, diagram: &Path, lim: bool) -> Result<Outcome> {
    let x: ChainDiagram<F> = match load(diagram)? {
        Payload::ChainDiagram(x) => x,
        p => return wrong_kind(diagram, "chain_diagram", p.kind()),
    };
    let side = if lim { HoSide::Lim } else { HoSide::Colim };
    sink.emit(&complex_doc(Replacement::new(&x, side).tot()))?;
    Ok(Outcome::Success)
}

// ---------------------------------------------------------------------------
// Stable constructions

fn cone_cmd<F: Field>(sink: &Sink, map: &Path) -> Result<Outcome> {
    let f: ChainMap<F> = load_map(map)?;
    let (c, i) = cone(&f)?;
    sink.emit(&json!({"cone": complex_doc(&c), "from_target": map_doc(&i), "homology": dims(&c)}))?;
    Ok(Outcome::Success)
}

fn suspension_cmd<F: Field>(sink: &Sink, input: &Path) -> Result<Outcome> {
    let v = match load::<F>(input)? {
        Payload::Complex(x) => complex_doc(&suspension(&x)),
        Payload::ChainMap(f) => map_doc(&suspension_map(&f)?),
        p => return wrong_kind(input, "complex or chain_map", p.kind()),
    };
    sink.emit(&v)?;
    Ok(Outcome::Success)
}

fn triangle_cmd<F: Field>(sink: &Sink, map: &Path) -> Result<Outcome> {
    let f: ChainMap<F> = load_map(map)?;
    let t = triangle(&f)?;
    let les = long_exact_check(&t.triangle);
    let pass = t.all_bicartesian() && t.witnesses.iter().all(Witness::holds) && les.pass;
    let mut summary = json!({
        "squares": t.squares,
        "witnesses": witness_summary(&t.witnesses),
        "triangle": triangle_summary(&t.triangle),
    });
    match sink.dir()? {
        Some(dir) => {
            write_triangle(dir, &t.triangle, &t.witnesses)?;
            write_json(&dir.join("summary.json"), &summary)?;
        }
        None => {
            summary["documents"] = Value::Object(triangle_docs(&t.triangle).into_iter().map(|(k, v)| (k.into(), v)).collect());
            sink.emit(&summary)?;
        }
    }
    Ok(Outcome::from_pass(pass))
}

fn rotate_cmd<F: Field>(sink: &Sink, map: &Path) -> Result<Outcome> {
    let f: ChainMap<F> = load_map(map)?;
    let r = rotate(&f)?;
    let graded = |m: &std::collections::BTreeMap<i32, derivator::Matrix<F>>| -> Value {
        Value::Object(m.iter().map(|(n, a)| (n.to_string(), derivator::document::matrix_to_json(a))).collect())
    };
    let pass = r.is_negated() && r.witnesses.iter().all(Witness::holds) && long_exact_check(&r.triangle).pass;
    let summary = json!({
        "negated": r.is_negated(),
        "comparison": graded(&r.comparison),
        "sigma_f": graded(&r.sigma_f),
        "squares": r.squares,
        "witnesses": witness_summary(&r.witnesses),
        "triangle": triangle_summary(&r.triangle),
    });
    if let Some(dir) = sink.dir()? {
        write_triangle(dir, &r.triangle, &r.witnesses)?;
        write_json(&dir.join("summary.json"), &summary)?;
    } else {
        sink.emit(&summary)?;
    }
    Ok(Outcome::from_pass(pass))
}

fn octahedron_cmd<F: Field>(sink: &Sink, f: &Path, g: &Path) -> Result<Outcome> {
    let (f, g): (ChainMap<F>, ChainMap<F>) = (load_map(f)?, load_map(g)?);
    let o = octahedron(&f, &g)?;
    let pass = o.all_bicartesian()
        && o.witnesses.iter().all(Witness::holds)
        && o.triangles.iter().all(|t| long_exact_check(t).pass);
    let summary = json!({
        "squares": o.squares,
        "witnesses": witness_summary(&o.witnesses),
        "triangles": o.triangles.iter().map(triangle_summary).collect::<Vec<_>>(),
    });
    if let Some(dir) = sink.dir()? {
        for (i, t) in o.triangles.iter().enumerate() {
            write_triangle(&dir.join(format!("triangle{}", i + 1)), t, &[])?;
        }
        for w in &o.witnesses {
            write_json(&dir.join("witnesses").join(format!("{}.json", slug(&w.name))), &zigzag_json(&w.name, &w.zigzag))?;
        }
        write_json(&dir.join("summary.json"), &summary)?;
    } else {
        sink.emit(&summary)?;
    }
    Ok(Outcome::from_pass(pass))
}

fn biproduct_cmd<F: Field>(sink: &Sink, x: &Path, y: &Path) -> Result<Outcome> {
    let (x, y): (Complex<F>, Complex<F>) = (load_complex(x)?, load_complex(y)?);
    let b = biproduct(&x, &y)?;
    sink.emit(&json!({
        "biproduct": complex_doc(&b.b),
        "homology": dims(&b.b),
        "squares": b.squares,
        "witnesses": witness_summary(&b.witnesses),
        "holds": b.holds(),
    }))?;
    Ok(Outcome::from_pass(b.holds()))
}

// ---------------------------------------------------------------------------
// Checks

fn status<F: Field>(sink: &Sink, input: &Path) -> Result<Outcome> {
    let v = match load::<F>(input)? {
        Payload::Functor(u) => {
            let s = u.sieve_status();
            let fib = FunctorData::from_monotone(&u).fibration_status();
            json!({
                "sieve": s.is_sieve(),
                "cosieve": s.is_cosieve(),
                "fibration": fib.fibration,
                "opfibration": fib.opfibration,
                "discrete_fibers": fib.discrete_fibers,
            })
        }
        Payload::ChainDiagram(q) => serde_json::to_value(cocartesian_status(&q)?)?,
        p => return wrong_kind(input, "functor or chain_diagram on the square", p.kind()),
    };
    sink.emit(&v)?;
    Ok(Outcome::Success)
}

fn check<F: Field>(sink: &Sink, square: &Path, sample: Option<&Path>, seed: u64, trials: usize) -> Result<Outcome> {
    let sq = match load::<F>(square)? {
        Payload::Square(s) => s,
        p => return wrong_kind(square, "square", p.kind()),
    };
    let data = sq.to_square_data()?;
    let corner = data.u2.source().clone();
    let shape = sq.u2.source();
    let samples: Vec<VecDiagram<F>> = match sample {
        Some(path) => {
            let x: VecDiagram<F> = match load(path)? {
                Payload::VecDiagram(x) => x,
                p => return wrong_kind(path, "vec_diagram", p.kind()),
            };
            if x.shape().as_poset().as_ref() != Some(shape) {
                bail!("the sample does not live on the source of u2");
            }
            vec![VecDiagram::new(corner, x.dims().to_vec(), x.maps().to_vec())?]
        }
        None => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let mut g = Gen::new(seed, SizeBounds::default());
            (0..trials).map(|_| g.vec_diagram_on(&corner, shape)).collect()
        }
    };
    let name = if sq.left { "left mate is an isomorphism" } else { "right mate is an isomorphism" };
    let v: Verdict = exact_square_verdict(name, &data, &samples)?;
    sink.emit(&serde_json::to_value(&v)?)?;
    Ok(Outcome::from_pass(v.pass))
}

fn suite<F: Field>(sink: &Sink, name: &str, seed: u64, trials: usize, bounds: SizeBounds, as_json: bool) -> Result<Outcome> {
    let report = run_suite_with::<F>(name, seed, trials, bounds)?;
    let text = if as_json { report.to_json() + "\n" } else { report.table() };
    let failing: Vec<&Verdict> =
        report.failures().chain(report.controls.iter().filter(|c| !c.caught).map(|c| &c.verdict)).collect();
    let dir = match sink.dir()? {
        Some(d) => {
            std::fs::write(d.join("report.json"), report.to_json() + "\n")?;
            Some(d.to_path_buf())
        }
        None if !failing.is_empty() => Some(std::path::PathBuf::from(format!("witnesses/{name}-seed{seed}"))),
        None => None,
    };
    if let Some(dir) = dir.filter(|_| !failing.is_empty()) {
        for (i, v) in failing.iter().enumerate() {
            let file = format!("{i:03}_{}.json", slug(&v.name));
            write_json(&dir.join("witnesses").join(file), &serde_json::to_value(v)?)?;
        }
        eprintln!("{} failing checks; witnesses in {}", failing.len(), dir.join("witnesses").display());
    }
    sink.emit_text(&text)?;
    Ok(Outcome::from_pass(report.pass))
}
