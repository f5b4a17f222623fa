//! Versioned JSON documents for the domain objects.
//!
//! Every document is `{"version": 1, "kind": …, "body": …}`. Loading validates
//! the body against its type's invariants: posets are closed transitively,
//! diagrams are closed along composites and their squares re-checked.
//! Schema errors carry a JSON pointer into the document; invariant errors
//! name the offending objects.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::error::Error;
use crate::exactlin::{Field, Matrix};
use crate::fincat::{CellDirection, FinCategory, FinPoset, FunctorData, MonotoneMap, NatTransData, SquareData};
use crate::repmodel::VecDiagram;
use crate::stablemodel::{ChainDiagram, ChainMap, Complex};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema error at {pointer:?}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invariant violated: {message}")]
    Invariant { message: String, objects: Vec<String> },
}

pub type DocResult<T> = std::result::Result<T, DocumentError>;

/// A commutative square of monotone maps
///
/// ```text
/// J1 --v--> J2
/// |u1       |u2
/// K1 --w--> K2
/// ```
///
/// whose cell is the unique one between the composites; `left` selects the
/// orientation `u2 v <= w u1` carrying a left mate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PosetSquare {
    pub u1: MonotoneMap,
    pub u2: MonotoneMap,
    pub v: MonotoneMap,
    pub w: MonotoneMap,
    pub left: bool,
}

impl PosetSquare {
    pub fn to_square_data(&self) -> crate::Result<SquareData> {
        let j1 = Arc::new(FinCategory::from_poset(self.u1.source()));
        let j2 = Arc::new(FinCategory::from_poset(self.u2.source()));
        let k1 = Arc::new(FinCategory::from_poset(self.u1.target()));
        let k2 = Arc::new(FinCategory::from_poset(self.u2.target()));
        let u1 = FunctorData::from_monotone_on(&self.u1, j1.clone(), k1.clone());
        let u2 = FunctorData::from_monotone_on(&self.u2, j2.clone(), k2.clone());
        let v = FunctorData::from_monotone_on(&self.v, j1, j2);
        let w = FunctorData::from_monotone_on(&self.w, k1, k2);
        let top = v.then(&u2)?;
        let bottom = u1.then(&w)?;
        let (cell, direction) = if self.left {
            (NatTransData::between_monotone(&top, &bottom)?, CellDirection::TowardWU1)
        } else {
            (NatTransData::between_monotone(&bottom, &top)?, CellDirection::TowardU2V)
        };
        SquareData::new(u1, u2, v, w, cell, direction)
    }
}

/// The payload of a document.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Debug)]
pub enum Payload<F: Field> {
    Poset(FinPoset),
    Functor(MonotoneMap),
    VecDiagram(VecDiagram<F>),
    ChainDiagram(ChainDiagram<F>),
    ChainMap(ChainMap<F>),
    Complex(Complex<F>),
    Square(PosetSquare),
}

impl<F: Field> Payload<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Poset(_) => "poset",
            Payload::Functor(_) => "functor",
            Payload::VecDiagram(_) => "vec_diagram",
            Payload::ChainDiagram(_) => "chain_diagram",
            Payload::ChainMap(_) => "chain_map",
            Payload::Complex(_) => "complex",
            Payload::Square(_) => "square",
        }
    }

    pub fn body(&self) -> Value {
        match self {
            Payload::Poset(p) => poset_to_json(p),
            Payload::Functor(u) => functor_to_json(u),
            Payload::VecDiagram(d) => vec_diagram_to_json(d),
            Payload::ChainDiagram(d) => chain_diagram_to_json(d),
            Payload::ChainMap(f) => chain_map_to_json(f),
            Payload::Complex(c) => complex_to_json(c),
            Payload::Square(s) => square_to_json(s),
        }
    }

    pub fn to_document(&self) -> Value {
        json!({"version": FORMAT_VERSION, "kind": self.kind(), "body": self.body()})
    }
}

pub fn parse_document<F: Field>(path: &Path) -> DocResult<Payload<F>> {
    let io = |e: std::io::Error| DocumentError::Io { path: path.display().to_string(), message: e.to_string() };
    let text = std::fs::read_to_string(path).map_err(io)?;
    parse_str(&text)
}

pub fn parse_str<F: Field>(text: &str) -> DocResult<Payload<F>> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    from_document(&v)
}

pub fn from_document<F: Field>(v: &Value) -> DocResult<Payload<F>> {
    let at = At::root(v);
    let version = at.field("version")?.u64()?;
    if version != FORMAT_VERSION {
        return Err(schema("/version", format!("unsupported version {version}")));
    }
    let kind = at.field("kind")?;
    let body = at.field("body")?;
    Ok(match kind.str()? {
        "poset" => Payload::Poset(poset_from(&body)?),
        "functor" => Payload::Functor(functor_from(&body)?),
        "vec_diagram" => Payload::VecDiagram(vec_diagram_from(&body)?),
        "chain_diagram" => Payload::ChainDiagram(chain_diagram_from(&body)?),
        "chain_map" => Payload::ChainMap(chain_map_from(&body)?),
        "complex" => Payload::Complex(complex_from(&body)?),
        "square" => Payload::Square(square_from(&body)?),
        other => return Err(schema(&kind.ptr, format!("unknown kind {other:?}"))),
    })
}

fn schema(pointer: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn invariant(message: impl Into<String>, objects: Vec<String>) -> DocumentError {
    DocumentError::Invariant { message: message.into(), objects }
}

/// Model errors raised while validating a body. Errors that name objects
/// keep them; the rest are reported against `ptr`.
fn lift(ptr: &str, e: Error) -> DocumentError {
    let objects = match &e {
        Error::NonCommuting(path) => path.to_vec(),
        Error::CycleDetected(a, b) | Error::NotMonotone(a, b) => vec![a.clone(), b.clone()],
        Error::DuplicateLabel(a) => vec![a.clone()],
        Error::UnknownLabel(a) | Error::ObjectNotInTarget(a) => return schema(ptr, format!("unknown object {a:?}")),
        Error::ShapeMismatch(m) => return schema(ptr, m.clone()),
        _ => vec![],
    };
    invariant(e.to_string(), objects)
}

/// A JSON value with its pointer.
#[derive(Clone)]
struct At<'a> {
    v: &'a Value,
    ptr: String,
}

impl<'a> At<'a> {
    fn root(v: &'a Value) -> Self {
        At { v, ptr: String::new() }
    }

    fn child(&self, key: &str, v: &'a Value) -> At<'a> {
        let esc = key.replace('~', "~0").replace('/', "~1");
        At { v, ptr: format!("{}/{}", self.ptr, esc) }
    }

    fn field(&self, key: &str) -> DocResult<At<'a>> {
        let obj = self.obj()?;
        let v = obj.get(key).ok_or_else(|| schema(&self.ptr, format!("missing field {key:?}")))?;
        Ok(self.child(key, v))
    }

    fn opt(&self, key: &str) -> DocResult<Option<At<'a>>> {
        Ok(self.obj()?.get(key).filter(|v| !v.is_null()).map(|v| self.child(key, v)))
    }

    fn obj(&self) -> DocResult<&'a Map<String, Value>> {
        self.v.as_object().ok_or_else(|| schema(&self.ptr, "expected an object"))
    }

    fn entries(&self) -> DocResult<Vec<(&'a str, At<'a>)>> {
        Ok(self.obj()?.iter().map(|(k, v)| (k.as_str(), self.child(k, v))).collect())
    }

    fn arr(&self) -> DocResult<Vec<At<'a>>> {
        let a = self.v.as_array().ok_or_else(|| schema(&self.ptr, "expected an array"))?;
        Ok(a.iter().enumerate().map(|(i, v)| self.child(&i.to_string(), v)).collect())
    }

    fn str(&self) -> DocResult<&'a str> {
        self.v.as_str().ok_or_else(|| schema(&self.ptr, "expected a string"))
    }

    fn u64(&self) -> DocResult<u64> {
        self.v.as_u64().ok_or_else(|| schema(&self.ptr, "expected a non-negative integer"))
    }

    fn i32(&self) -> DocResult<i32> {
        self.v
            .as_i64()
            .and_then(|n| i32::try_from(n).ok())
            .ok_or_else(|| schema(&self.ptr, "expected an integer degree"))
    }

    fn scalar<F: Field>(&self) -> DocResult<F> {
        let text = match self.v {
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            Value::String(s) => s.clone(),
            _ => return Err(schema(&self.ptr, "expected an integer or a fraction string")),
        };
        F::parse_text(&text).map_err(|e| schema(&self.ptr, e.to_string()))
    }

    /// A `rows × cols` matrix given as a list of rows. Empty matrices may be
    /// written as `[]`.
    fn matrix<F: Field>(&self, rows: usize, cols: usize) -> DocResult<Matrix<F>> {
        let list = self.arr()?;
        if list.is_empty() && rows * cols == 0 {
            return Ok(Matrix::zeros(rows, cols));
        }
        if list.len() != rows {
            return Err(schema(&self.ptr, format!("expected {rows} rows, found {}", list.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for row in list {
            let entries = row.arr()?;
            if entries.len() != cols {
                return Err(schema(&row.ptr, format!("expected {cols} entries, found {}", entries.len())));
            }
            for e in entries {
                data.push(e.scalar()?);
            }
        }
        Ok(Matrix::from_vec(rows, cols, data))
    }

    fn degree_key(&self, key: &str) -> DocResult<i32> {
        key.parse().map_err(|_| schema(&self.ptr, format!("{key:?} is not a degree")))
    }
}

pub fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| {
                            let t = x.to_text();
                            t.parse::<i64>().map_or(Value::String(t), Value::from)
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn poset_to_json(p: &FinPoset) -> Value {
    let leq: Vec<Value> = p.covers().iter().map(|&(a, b)| json!([p.label(a), p.label(b)])).collect();
    json!({"objects": p.labels(), "leq": leq})
}

fn poset_from(at: &At) -> DocResult<FinPoset> {
    let mut labels = Vec::new();
    for o in at.field("objects")?.arr()? {
        labels.push(o.str()?.to_string());
    }
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut pairs = Vec::new();
    if let Some(leq) = at.opt("leq")? {
        for pair in leq.arr()? {
            let ends = pair.arr()?;
            if ends.len() != 2 {
                return Err(schema(&pair.ptr, "expected a pair [a, b]"));
            }
            let mut ix = [0; 2];
            for (k, e) in ends.iter().enumerate() {
                let l = e.str()?;
                ix[k] = *index.get(l).ok_or_else(|| schema(&e.ptr, format!("unknown object {l:?}")))?;
            }
            pairs.push((ix[0], ix[1]));
        }
    }
    FinPoset::from_pairs(labels, &pairs).map_err(|e| lift(&at.ptr, e))
}

pub fn functor_to_json(u: &MonotoneMap) -> Value {
    let map: Map<String, Value> = (0..u.source().len())
        .map(|j| (u.source().label(j).to_string(), Value::from(u.target().label(u.apply(j)))))
        .collect();
    json!({"source": poset_to_json(u.source()), "target": poset_to_json(u.target()), "map": map})
}

fn functor_from(at: &At) -> DocResult<MonotoneMap> {
    let source = poset_from(&at.field("source")?)?;
    let target = poset_from(&at.field("target")?)?;
    let map_at = at.field("map")?;
    let mut map = vec![usize::MAX; source.len()];
    for (k, v) in map_at.entries()? {
        let j = source.index_of(k).ok_or_else(|| schema(&v.ptr, format!("{k:?} is not an object of the source")))?;
        let l = v.str()?;
        map[j] = target.index_of(l).ok_or_else(|| schema(&v.ptr, format!("{l:?} is not an object of the target")))?;
    }
    if let Some(j) = map.iter().position(|&t| t == usize::MAX) {
        return Err(schema(&map_at.ptr, format!("no image for {:?}", source.label(j))));
    }
    MonotoneMap::new(source, target, map).map_err(|e| lift(&at.ptr, e))
}

pub fn complex_to_json<F: Field>(c: &Complex<F>) -> Value {
    let Some((lo, hi)) = c.window() else {
        return json!({"dims": {}});
    };
    let dims: Map<String, Value> = (lo..=hi).map(|n| (n.to_string(), Value::from(c.dim(n)))).collect();
    let diff: Map<String, Value> = (lo..=hi)
        .filter_map(|n| c.d_ref(n).filter(|d| !d.is_zero()).map(|d| (n.to_string(), matrix_to_json(d))))
        .collect();
    json!({"window": [lo, hi], "dims": dims, "diff": diff})
}

fn complex_from<F: Field>(at: &At) -> DocResult<Complex<F>> {
    let mut dims = BTreeMap::new();
    let dims_at = at.field("dims")?;
    for (k, v) in dims_at.entries()? {
        dims.insert(dims_at.degree_key(k)?, v.u64()? as usize);
    }
    let window = match at.opt("window")? {
        Some(w) => {
            let ends = w.arr()?;
            if ends.len() != 2 {
                return Err(schema(&w.ptr, "expected [lo, hi]"));
            }
            let (lo, hi) = (ends[0].i32()?, ends[1].i32()?);
            if lo > hi {
                return Err(schema(&w.ptr, "empty window"));
            }
            if let Some((&n, _)) = dims.iter().find(|(&n, &d)| d > 0 && (n < lo || n > hi)) {
                return Err(schema(&dims_at.ptr, format!("degree {n} lies outside the window")));
            }
            Some((lo, hi))
        }
        None => {
            let nz: Vec<i32> = dims.iter().filter(|(_, &d)| d > 0).map(|(&n, _)| n).collect();
            nz.first().map(|&lo| (lo, *nz.last().unwrap()))
        }
    };
    let Some((lo, hi)) = window else {
        return Ok(Complex::zero());
    };
    let dim = |n: i32| dims.get(&n).copied().unwrap_or(0);
    let mut diffs = Vec::new();
    if let Some(d_at) = at.opt("diff")? {
        for (k, v) in d_at.entries()? {
            let n = d_at.degree_key(k)?;
            if n < lo || n > hi {
                return Err(schema(&v.ptr, format!("d_{n} lies outside the window")));
            }
            diffs.push((n, v.matrix(dim(n - 1), dim(n))?));
        }
    }
    let dimvec = (lo..=hi).map(dim).collect();
    Complex::new(lo, dimvec, diffs).map_err(|e| lift(&at.ptr, e))
}

pub fn chain_map_to_json<F: Field>(f: &ChainMap<F>) -> Value {
    json!({
        "source": complex_to_json(f.source()),
        "target": complex_to_json(f.target()),
        "components": components_to_json(f),
    })
}

fn components_to_json<F: Field>(f: &ChainMap<F>) -> Value {
    let comps: Map<String, Value> = f
        .source()
        .degrees()
        .filter_map(|n| f.comp_ref(n).filter(|m| !m.is_zero()).map(|m| (n.to_string(), matrix_to_json(m))))
        .collect();
    Value::Object(comps)
}

fn components_from<F: Field>(at: &At, x: &Complex<F>, y: &Complex<F>) -> DocResult<ChainMap<F>> {
    let mut given = BTreeMap::new();
    for (k, v) in at.entries()? {
        let n = at.degree_key(k)?;
        given.insert(n, v.matrix(y.dim(n), x.dim(n))?);
    }
    let comps: Vec<(i32, Matrix<F>)> =
        x.degrees().map(|n| (n, given.remove(&n).unwrap_or_else(|| Matrix::zeros(y.dim(n), x.dim(n))))).collect();
    if let Some((&n, m)) = given.iter().find(|(_, m)| !m.is_zero()) {
        return Err(schema(&at.ptr, format!("nonzero component in degree {n} where the source vanishes ({:?})", m.shape())));
    }
    ChainMap::new(x.clone(), y.clone(), comps).map_err(|e| lift(&at.ptr, e))
}

fn chain_map_from<F: Field>(at: &At) -> DocResult<ChainMap<F>> {
    let x = complex_from(&at.field("source")?)?;
    let y = complex_from(&at.field("target")?)?;
    match at.opt("components")? {
        Some(c) => components_from(&c, &x, &y),
        None => Ok(ChainMap::zero(&x, &y)),
    }
}

pub fn chain_diagram_to_json<F: Field>(d: &ChainDiagram<F>) -> Value {
    let s = d.shape();
    let complexes: Map<String, Value> =
        (0..s.len()).map(|a| (s.label(a).to_string(), complex_to_json(d.value(a)))).collect();
    let maps: Map<String, Value> = d
        .cover_maps()
        .into_iter()
        .map(|((a, b), f)| (format!("{}->{}", s.label(a), s.label(b)), components_to_json(f)))
        .collect();
    json!({"shape": poset_to_json(s), "complexes": complexes, "maps": maps})
}

/// Splits `"a->b"` into a strict relation of `shape`.
fn relation_key(at: &At, shape: &FinPoset, key: &str) -> DocResult<(usize, usize)> {
    let (a, b) = key.split_once("->").ok_or_else(|| schema(&at.ptr, format!("{key:?} is not of the form a->b")))?;
    let look = |l: &str| shape.index_of(l).ok_or_else(|| schema(&at.ptr, format!("unknown object {l:?}")));
    let (a, b) = (look(a)?, look(b)?);
    if !shape.lt(a, b) {
        return Err(schema(&at.ptr, format!("{key:?} is not a strict relation of the shape")));
    }
    Ok((a, b))
}

/// Builds a diagram from maps on some strict relations. Cover maps generate;
/// missing covers between nonzero values are an error; every other given map
/// must agree with the composite.
fn diagram_from_relations<F: Field>(
    at: &At,
    shape: FinPoset,
    values: Vec<Complex<F>>,
    given: BTreeMap<(usize, usize), ChainMap<F>>,
) -> DocResult<ChainDiagram<F>> {
    let mut covers = Vec::new();
    for (a, b) in shape.covers() {
        let f = match given.get(&(a, b)) {
            Some(f) => f.clone(),
            None if values[a].is_zero() || values[b].is_zero() => ChainMap::zero(&values[a], &values[b]),
            None => {
                return Err(schema(&at.ptr, format!("missing map {}->{}", shape.label(a), shape.label(b))));
            }
        };
        covers.push(((a, b), f));
    }
    let d = ChainDiagram::from_covers(shape.clone(), values, covers).map_err(|e| lift(&at.ptr, e))?;
    for (&(a, b), f) in &given {
        if d.map(a, b) != f {
            let objects = vec![shape.label(a).to_string(), shape.label(b).to_string()];
            return Err(invariant(
                format!("map {}->{} disagrees with the composite of covers", shape.label(a), shape.label(b)),
                objects,
            ));
        }
    }
    Ok(d)
}

fn chain_diagram_from<F: Field>(at: &At) -> DocResult<ChainDiagram<F>> {
    let shape = poset_from(&at.field("shape")?)?;
    let c_at = at.field("complexes")?;
    let mut values: Vec<Option<Complex<F>>> = vec![None; shape.len()];
    for (k, v) in c_at.entries()? {
        let a = shape.index_of(k).ok_or_else(|| schema(&v.ptr, format!("unknown object {k:?}")))?;
        values[a] = Some(complex_from(&v)?);
    }
    let values: Vec<Complex<F>> = values.into_iter().map(|v| v.unwrap_or_else(Complex::zero)).collect();
    let mut given = BTreeMap::new();
    if let Some(m_at) = at.opt("maps")? {
        for (k, v) in m_at.entries()? {
            let (a, b) = relation_key(&v, &shape, k)?;
            given.insert((a, b), components_from(&v, &values[a], &values[b])?);
        }
    }
    diagram_from_relations(at, shape, values, given)
}

pub fn vec_diagram_to_json<F: Field>(d: &VecDiagram<F>) -> Value {
    let cat = d.shape();
    let Some(p) = cat.as_poset() else {
        return json!({"error": "diagram shape is not a poset"});
    };
    let dims: Map<String, Value> = (0..p.len()).map(|a| (p.label(a).to_string(), Value::from(d.dim(a)))).collect();
    let maps: Map<String, Value> = p
        .covers()
        .into_iter()
        .filter_map(|(a, b)| {
            let f = cat.hom(a, b)[0];
            let m = d.map(f);
            (m.rows() * m.cols() > 0).then(|| (format!("{}->{}", p.label(a), p.label(b)), matrix_to_json(m)))
        })
        .collect();
    json!({"shape": poset_to_json(&p), "dims": dims, "maps": maps})
}

fn vec_diagram_from<F: Field>(at: &At) -> DocResult<VecDiagram<F>> {
    let shape = poset_from(&at.field("shape")?)?;
    let mut dims = vec![0; shape.len()];
    for (k, v) in at.field("dims")?.entries()? {
        let a = shape.index_of(k).ok_or_else(|| schema(&v.ptr, format!("unknown object {k:?}")))?;
        dims[a] = v.u64()? as usize;
    }
    let values: Vec<Complex<F>> = dims.iter().map(|&n| Complex::concentrated(0, n)).collect();
    let mut given = BTreeMap::new();
    if let Some(m_at) = at.opt("maps")? {
        for (k, v) in m_at.entries()? {
            let (a, b) = relation_key(&v, &shape, k)?;
            let m = v.matrix(dims[b], dims[a])?;
            let f = ChainMap::new(values[a].clone(), values[b].clone(), [(0, m)]).map_err(|e| lift(&v.ptr, e))?;
            given.insert((a, b), f);
        }
    }
    let d = diagram_from_relations(at, shape.clone(), values, given)?;
    let cat = Arc::new(FinCategory::from_poset(&shape));
    Ok(crate::verify::gen::to_vec_diagram(&cat, &shape, &d))
}

pub fn square_to_json(s: &PosetSquare) -> Value {
    json!({
        "u1": functor_to_json(&s.u1),
        "u2": functor_to_json(&s.u2),
        "v": functor_to_json(&s.v),
        "w": functor_to_json(&s.w),
        "mate": if s.left { "left" } else { "right" },
    })
}

fn square_from(at: &At) -> DocResult<PosetSquare> {
    let mate = at.field("mate")?;
    let left = match mate.str()? {
        "left" => true,
        "right" => false,
        other => return Err(schema(&mate.ptr, format!("mate must be \"left\" or \"right\", not {other:?}"))),
    };
    let s = PosetSquare {
        u1: functor_from(&at.field("u1")?)?,
        u2: functor_from(&at.field("u2")?)?,
        v: functor_from(&at.field("v")?)?,
        w: functor_from(&at.field("w")?)?,
        left,
    };
    let fits = s.u1.source() == s.v.source()
        && s.u2.source() == s.v.target()
        && s.u1.target() == s.w.source()
        && s.u2.target() == s.w.target();
    if !fits {
        return Err(schema(&at.ptr, "the four maps do not form a square"));
    }
    s.to_square_data().map_err(|e| {
        invariant(format!("no cell in the requested orientation: {e}"), vec![])
    })?;
    Ok(s)
}
