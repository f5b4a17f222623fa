//! Seeded random instances. Every generated object satisfies its type's
//! invariants by construction: diagram maps are drawn from the solution
//! space of the commutation constraints, so functoriality is exact.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use std::str::FromStr;

use serde_json::Value;

use crate::document::Payload;
use crate::error::{Error, Result};
use crate::Q;
use crate::exactlin::{Field, Matrix};
use crate::fincat::{FinCategory, FinPoset, MonotoneMap};
use crate::repmodel::VecDiagram;
use crate::stablemodel::{ChainDiagram, ChainMap, Complex};

/// Size limits for generated instances.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SizeBounds {
    pub max_elements: usize,
    pub max_dim: usize,
    /// Complexes live in degrees `window.0 ..= window.1`.
    pub window: (i32, i32),
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds { max_elements: 6, max_dim: 3, window: (-2, 3) }
    }
}

/// Instance kinds understood by [`gen_instance`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InstanceKind {
    Poset,
    MonotoneMap,
    VecDiagram,
    ChainDiagram,
    ChainMap,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 5] =
        [InstanceKind::Poset, InstanceKind::MonotoneMap, InstanceKind::VecDiagram, InstanceKind::ChainDiagram, InstanceKind::ChainMap];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Poset => "poset",
            InstanceKind::MonotoneMap => "functor",
            InstanceKind::VecDiagram => "vec_diagram",
            InstanceKind::ChainDiagram => "chain_diagram",
            InstanceKind::ChainMap => "chain_map",
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown instance kind {s:?}")))
    }
}

/// A random instance over ℚ as a versioned document.
pub fn gen_instance(kind: InstanceKind, seed: u64, bounds: SizeBounds) -> Value {
    let mut g = Gen::new(seed, bounds);
    let payload: Payload<Q> = match kind {
        InstanceKind::Poset => Payload::Poset(g.poset("x")),
        InstanceKind::MonotoneMap => {
            let (j, k) = (g.poset("j"), g.poset("k"));
            Payload::Functor(g.monotone_map(&j, &k))
        }
        InstanceKind::VecDiagram => {
            let p = g.poset("x");
            Payload::VecDiagram(g.vec_diagram(&p).1)
        }
        InstanceKind::ChainDiagram => {
            let p = g.poset("x");
            Payload::ChainDiagram(g.chain_diagram(&p))
        }
        InstanceKind::ChainMap => {
            let (x, y) = (g.complex(), g.complex());
            Payload::ChainMap(g.chain_map(&x, &y))
        }
    };
    payload.to_document()
}

/// A deterministic instance generator.
pub struct Gen {
    rng: ChaCha8Rng,
    bounds: SizeBounds,
}

/// Linear equations in unknown matrices, `Σ ± L · M_i · R = 0`.
struct System<F: Field> {
    blocks: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    rows: Vec<Vec<F>>,
}

impl<F: Field> System<F> {
    fn new() -> Self {
        System { blocks: Vec::new(), offsets: Vec::new(), rows: Vec::new() }
    }

    fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        let at = self.offsets.last().map_or(0, |&o| o) + self.blocks.last().map_or(0, |&(r, c)| r * c);
        self.blocks.push((rows, cols));
        self.offsets.push(at);
        self.blocks.len() - 1
    }

    fn vars(&self) -> usize {
        self.offsets.last().map_or(0, |&o| o) + self.blocks.last().map_or(0, |&(r, c)| r * c)
    }

    /// Adds the entrywise equations of `Σ sign · L · M_block · R = 0`.
    fn equation(&mut self, terms: &[(Matrix<F>, usize, Matrix<F>, F)]) {
        let Some((l, _, r, _)) = terms.first() else { return };
        let (p_n, q_n) = (l.rows(), r.cols());
        let n = self.vars();
        for p in 0..p_n {
            for q in 0..q_n {
                let mut row = vec![F::zero(); n];
                for (l, b, r, sign) in terms {
                    let (br, bc) = self.blocks[*b];
                    for s in 0..br {
                        let ls = l.get(p, s);
                        if ls.is_zero() {
                            continue;
                        }
                        for t in 0..bc {
                            let rt = r.get(t, q);
                            if !rt.is_zero() {
                                let v = sign.mul_ref(&ls.mul_ref(rt));
                                let i = self.offsets[*b] + s * bc + t;
                                row[i] = row[i].add_ref(&v);
                            }
                        }
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    self.rows.push(row);
                }
            }
        }
    }

    /// A random solution: a small integer combination of a kernel basis.
    fn sample(&self, gen: &mut Gen) -> Vec<Matrix<F>> {
        let n = self.vars();
        let basis = if self.rows.is_empty() {
            Matrix::identity(n)
        } else {
            // Rows written before later unknowns were declared are padded.
            let data = self.rows.iter().flat_map(|r| r.iter().cloned().chain(std::iter::repeat_n(F::zero(), n - r.len()))).collect();
            Matrix::from_vec(self.rows.len(), n, data).kernel()
        };
        let coeffs: Vec<F> = (0..basis.cols()).map(|_| gen.scalar()).collect();
        let x = basis.mul_vec(&coeffs);
        self.blocks
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &o)| Matrix::from_vec(r, c, x[o..o + r * c].to_vec()))
            .collect()
    }
}

impl Gen {
    pub fn new(seed: u64, bounds: SizeBounds) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn bounds(&self) -> SizeBounds {
        self.bounds
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// An integer in `-2..=2`, zero about half the time.
    pub fn scalar<F: Field>(&mut self) -> F {
        if self.rng.gen_bool(0.5) {
            F::zero()
        } else {
            let v = [-2, -1, 1, 2][self.rng.gen_range(0..4)];
            F::from_i64(v)
        }
    }

    pub fn matrix<F: Field>(&mut self, rows: usize, cols: usize) -> Matrix<F> {
        Matrix::from_fn(rows, cols, |_, _| self.scalar())
    }

    /// Relations drawn on a shuffled labelling, then closed transitively.
    pub fn poset_of_size(&mut self, n: usize, prefix: &str) -> FinPoset {
        let labels: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        let density = self.rng.gen_range(0.2..0.6);
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.rng.gen_bool(density) {
                    pairs.push((perm[a], perm[b]));
                }
            }
        }
        FinPoset::from_pairs(labels, &pairs).expect("acyclic relations")
    }

    /// A poset with `min..=max` elements.
    pub fn poset_sized(&mut self, min: usize, max: usize, prefix: &str) -> FinPoset {
        let n = self.rng.gen_range(min..=max.max(min));
        self.poset_of_size(n, prefix)
    }

    pub fn poset(&mut self, prefix: &str) -> FinPoset {
        let n = self.rng.gen_range(1..=self.bounds.max_elements.max(1));
        self.poset_of_size(n, prefix)
    }

    /// Images chosen in a linear extension among the upper bounds of the
    /// images already fixed below; constant when that runs out.
    pub fn monotone_map(&mut self, source: &FinPoset, target: &FinPoset) -> MonotoneMap {
        for _ in 0..8 {
            let mut map = vec![usize::MAX; source.len()];
            let mut ok = true;
            for a in source.linear_extension() {
                let cands: Vec<usize> = (0..target.len())
                    .filter(|&t| (0..source.len()).all(|b| !source.lt(b, a) || target.leq(map[b], t)))
                    .collect();
                match cands.choose(&mut self.rng) {
                    Some(&t) => map[a] = t,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return MonotoneMap::new(source.clone(), target.clone(), map).expect("monotone by construction");
            }
        }
        let t = self.below(target.len());
        MonotoneMap::new(source.clone(), target.clone(), vec![t; source.len()]).expect("constant map")
    }

    /// A random down-set, as the inclusion of a full subposet. Proper and
    /// non-empty whenever `k` has at least two elements.
    pub fn sieve(&mut self, k: &FinPoset) -> MonotoneMap {
        self.closed_subset(k, true)
    }

    pub fn cosieve(&mut self, k: &FinPoset) -> MonotoneMap {
        self.closed_subset(k, false)
    }

    fn closed_subset(&mut self, k: &FinPoset, down: bool) -> MonotoneMap {
        let n = k.len();
        loop {
            let seeds: Vec<usize> = (0..n).filter(|_| self.rng.gen_bool(0.4)).collect();
            let elems: Vec<usize> = (0..n)
                .filter(|&x| seeds.iter().any(|&s| if down { k.leq(x, s) } else { k.leq(s, x) }))
                .collect();
            if n < 2 || (!elems.is_empty() && elems.len() < n) {
                return k.subposet(&elems).1;
            }
        }
    }

    /// A complex in a random sub-window of at most three degrees.
    pub fn complex<F: Field>(&mut self) -> Complex<F> {
        let (wlo, whi) = self.bounds.window;
        let lo = self.rng.gen_range(wlo..=whi);
        let hi = self.rng.gen_range(lo..=whi.min(lo + 2));
        let dims: Vec<usize> = (lo..=hi).map(|_| self.rng.gen_range(0..=self.bounds.max_dim)).collect();
        self.complex_with_dims(lo, dims)
    }

    /// Differentials from the top down: `d_n` is a random map out of the
    /// cokernel of `d_{n+1}`, so `d_n ∘ d_{n+1} = 0` holds exactly.
    pub fn complex_with_dims<F: Field>(&mut self, lo: i32, dims: Vec<usize>) -> Complex<F> {
        let mut diffs: Vec<(i32, Matrix<F>)> = Vec::new();
        let mut above: Option<Matrix<F>> = None;
        for i in (1..dims.len()).rev() {
            let ann = match &above {
                None => Matrix::identity(dims[i]),
                Some(d) => d.transpose().kernel().transpose(),
            };
            let d = if self.rng.gen_bool(0.2) {
                Matrix::zeros(dims[i - 1], dims[i])
            } else {
                self.matrix(dims[i - 1], ann.rows()).mul(&ann)
            };
            diffs.push((lo + i as i32, d.clone()));
            above = Some(d);
        }
        Complex::new(lo, dims, diffs).expect("d∘d = 0 by construction")
    }

    /// A random element of the space of chain maps `x → y`.
    pub fn chain_map<F: Field>(&mut self, x: &Complex<F>, y: &Complex<F>) -> ChainMap<F> {
        let mut sys = System::new();
        let degs: Vec<i32> = x.degrees().collect();
        let ids: HashMap<i32, usize> = degs.iter().map(|&n| (n, sys.unknown(y.dim(n), x.dim(n)))).collect();
        for &n in &degs {
            chain_constraint(&mut sys, &ids, x, y, n);
        }
        let sol = sys.sample(self);
        ChainMap::new(x.clone(), y.clone(), degs.iter().map(|&n| (n, sol[ids[&n]].clone())))
            .expect("chain map by construction")
    }

    /// Random values, random maps.
    pub fn chain_diagram<F: Field>(&mut self, shape: &FinPoset) -> ChainDiagram<F> {
        let values = (0..shape.len()).map(|_| self.complex()).collect();
        self.chain_diagram_on(shape, values, None).expect("diagram by construction")
    }

    /// Random maps turning `values` into a diagram on `shape`. Maps between
    /// elements of `fixed` (a diagram on a sieve, with its inclusion) are
    /// kept; the rest are drawn element by element in a linear extension.
    pub fn chain_diagram_on<F: Field>(
        &mut self,
        shape: &FinPoset,
        values: Vec<Complex<F>>,
        fixed: Option<(&ChainDiagram<F>, &MonotoneMap)>,
    ) -> Result<ChainDiagram<F>> {
        let pre: Vec<Option<usize>> = (0..shape.len())
            .map(|b| fixed.and_then(|(_, u)| (0..u.source().len()).find(|&j| u.apply(j) == b)))
            .collect();
        let mut maps: HashMap<(usize, usize), ChainMap<F>> = HashMap::new();
        let covers = shape.covers();
        for b in shape.linear_extension() {
            if let (Some(jb), Some((d, _))) = (pre[b], fixed) {
                for a in (0..shape.len()).filter(|&a| shape.lt(a, b)) {
                    let ja = pre[a].expect("fixed part is a sieve");
                    maps.insert((a, b), d.map(ja, jb).clone());
                }
                continue;
            }
            let lower: Vec<usize> = covers.iter().filter(|&&(_, t)| t == b).map(|&(a, _)| a).collect();
            let xb = &values[b];
            let mut sys = System::new();
            let mut ids: Vec<HashMap<i32, usize>> = Vec::new();
            for &a in &lower {
                let xa = &values[a];
                let m: HashMap<i32, usize> = xa.degrees().map(|n| (n, sys.unknown(xb.dim(n), xa.dim(n)))).collect();
                for n in xa.degrees() {
                    chain_constraint(&mut sys, &m, xa, xb, n);
                }
                ids.push(m);
            }
            for (p, &a) in lower.iter().enumerate() {
                for (q, &a2) in lower.iter().enumerate().skip(p + 1) {
                    for c in (0..shape.len()).filter(|&c| shape.lt(c, a) && shape.lt(c, a2)) {
                        let (f, g) = (&maps[&(c, a)], &maps[&(c, a2)]);
                        for n in values[c].degrees() {
                            let mut terms = Vec::new();
                            if let Some(&i) = ids[p].get(&n) {
                                terms.push((Matrix::identity(xb.dim(n)), i, f.comp(n), F::one()));
                            }
                            if let Some(&i) = ids[q].get(&n) {
                                terms.push((Matrix::identity(xb.dim(n)), i, g.comp(n), -F::one()));
                            }
                            sys.equation(&terms);
                        }
                    }
                }
            }
            let sol = sys.sample(self);
            for (p, &a) in lower.iter().enumerate() {
                let xa = &values[a];
                let m = ChainMap::new(xa.clone(), xb.clone(), xa.degrees().map(|n| (n, sol[ids[p][&n]].clone())))?;
                maps.insert((a, b), m);
            }
            for c in (0..shape.len()).filter(|&c| shape.lt(c, b)) {
                if lower.contains(&c) {
                    continue;
                }
                let via = *lower.iter().find(|&&a| shape.lt(c, a)).expect("some cover lies above c");
                let m = maps[&(c, via)].then(&maps[&(via, b)])?;
                maps.insert((c, b), m);
            }
        }
        let cover_maps = covers.iter().map(|&(a, b)| ((a, b), maps[&(a, b)].clone())).collect::<Vec<_>>();
        ChainDiagram::from_covers(shape.clone(), values, cover_maps)
    }

    /// A diagram of vector spaces on the category of a poset: a chain
    /// diagram concentrated in degree zero.
    pub fn vec_diagram<F: Field>(&mut self, shape: &FinPoset) -> (Arc<FinCategory>, VecDiagram<F>) {
        let values: Vec<Complex<F>> =
            (0..shape.len()).map(|_| Complex::concentrated(0, self.rng.gen_range(0..=self.bounds.max_dim))).collect();
        let d = self.chain_diagram_on(shape, values, None).expect("diagram by construction");
        let cat = Arc::new(FinCategory::from_poset(shape));
        (cat.clone(), to_vec_diagram(&cat, shape, &d))
    }

    /// As [`Gen::vec_diagram`], on an existing category of `shape`.
    pub fn vec_diagram_on<F: Field>(&mut self, cat: &Arc<FinCategory>, shape: &FinPoset) -> VecDiagram<F> {
        let values: Vec<Complex<F>> =
            (0..shape.len()).map(|_| Complex::concentrated(0, self.rng.gen_range(0..=self.bounds.max_dim))).collect();
        let d = self.chain_diagram_on(shape, values, None).expect("diagram by construction");
        to_vec_diagram(cat, shape, &d)
    }
}

/// `d^y_n M_n = M_{n-1} d^x_n` for the unknown components of a chain map.
fn chain_constraint<F: Field>(
    sys: &mut System<F>,
    ids: &HashMap<i32, usize>,
    x: &Complex<F>,
    y: &Complex<F>,
    n: i32,
) {
    let here = ids.get(&n).copied();
    let below = ids.get(&(n - 1)).copied();
    let mut terms = Vec::new();
    if let Some(i) = here {
        if y.dim(n - 1) > 0 {
            terms.push((y.d(n), i, Matrix::identity(x.dim(n)), F::one()));
        }
    }
    if let Some(i) = below {
        terms.push((Matrix::identity(y.dim(n - 1)), i, x.d(n), -F::one()));
    }
    if terms.len() == 2 || (terms.len() == 1 && y.dim(n - 1) > 0 && x.dim(n) > 0) {
        sys.equation(&terms);
    }
}

/// Degree-zero parts of a chain diagram, as a diagram on the poset's category.
pub fn to_vec_diagram<F: Field>(cat: &Arc<FinCategory>, shape: &FinPoset, d: &ChainDiagram<F>) -> VecDiagram<F> {
    let dims: Vec<usize> = (0..shape.len()).map(|a| d.value(a).dim(0)).collect();
    let maps = (0..cat.morphism_count())
        .map(|f| {
            let (a, b) = (cat.src(f), cat.tgt(f));
            d.map(a, b).comp(0)
        })
        .collect();
    VecDiagram::new(cat.clone(), dims, maps).expect("degree-zero part of a diagram")
}
