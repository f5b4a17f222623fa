//! Bounded chain complexes, chain maps and their homology.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};

/// A bounded complex `… → C_n --d_n--> C_{n-1} → …` of finite-dimensional
/// spaces.
///
/// Stored on its support window `[lo, hi]`: the outermost dimensions are
/// nonzero, or the complex is empty with `lo = 0`. `d ∘ d = 0` holds exactly.
#[derive(Clone)]
pub struct Complex<F: Field> {
    lo: i32,
    dims: Vec<usize>,
    /// `diffs[i]` is `d_{lo+i}`.
    diffs: Vec<Matrix<F>>,
    homology: Arc<OnceLock<Arc<Homology<F>>>>,
}

impl<F: Field> PartialEq for Complex<F> {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.dims == other.dims && self.diffs == other.diffs
    }
}

impl<F: Field> Eq for Complex<F> {}

impl<F: Field> Hash for Complex<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.lo.hash(state);
        self.dims.hash(state);
        self.diffs.hash(state);
    }
}

impl<F: Field> fmt::Debug for Complex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex{{lo: {}, dims: {:?}}}", self.lo, self.dims)
    }
}

impl<F: Field> Complex<F> {
    /// Complex with `dims[i] = dim C_{lo+i}` and the listed differentials;
    /// unlisted differentials are zero.
    pub fn new(lo: i32, dims: Vec<usize>, diffs: impl IntoIterator<Item = (i32, Matrix<F>)>) -> Result<Self> {
        let dim = |n: i32| -> usize {
            let i = n - lo;
            if i < 0 || i as usize >= dims.len() {
                0
            } else {
                dims[i as usize]
            }
        };
        let mut given: BTreeMap<i32, Matrix<F>> = BTreeMap::new();
        for (n, m) in diffs {
            if m.shape() != (dim(n - 1), dim(n)) {
                return Err(Error::ShapeMismatch(format!(
                    "d_{n} is {:?}, expected {:?}",
                    m.shape(),
                    (dim(n - 1), dim(n))
                )));
            }
            given.insert(n, m);
        }
        let full: Vec<Matrix<F>> = (0..dims.len())
            .map(|i| {
                let n = lo + i as i32;
                given.remove(&n).unwrap_or_else(|| Matrix::zeros(dim(n - 1), dim(n)))
            })
            .collect();
        for i in 1..full.len() {
            if !full[i - 1].mul(&full[i]).is_zero() {
                return Err(Error::Invariant(format!("d_{} ∘ d_{} != 0", lo + i as i32 - 1, lo + i as i32)));
            }
        }
        Ok(Self::trimmed(lo, dims, full))
    }

    /// Assumes shapes and `d ∘ d = 0` are already known.
    pub(crate) fn from_parts_unchecked(lo: i32, dims: Vec<usize>, diffs: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(dims.len(), diffs.len());
        debug_assert!((1..diffs.len()).all(|i| diffs[i - 1].mul(&diffs[i]).is_zero()));
        Self::trimmed(lo, dims, diffs)
    }

    fn trimmed(mut lo: i32, mut dims: Vec<usize>, mut diffs: Vec<Matrix<F>>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
            diffs.pop();
        }
        let lead = dims.iter().take_while(|&&d| d == 0).count();
        if lead == dims.len() {
            return Self::zero();
        }
        if lead > 0 {
            dims.drain(..lead);
            diffs.drain(..lead);
            lo += lead as i32;
            diffs[0] = Matrix::zeros(0, dims[0]);
        }
        Complex { lo, dims, diffs, homology: Arc::default() }
    }

    pub fn zero() -> Self {
        Complex { lo: 0, dims: Vec::new(), diffs: Vec::new(), homology: Arc::default() }
    }

    /// `F^dim` in degree `deg`.
    pub fn concentrated(deg: i32, dim: usize) -> Self {
        Self::trimmed(deg, vec![dim], vec![Matrix::zeros(0, dim)])
    }

    /// `C_deg --m--> C_{deg-1}` and nothing else.
    pub fn two_term(deg: i32, m: Matrix<F>) -> Self {
        let (r, c) = m.shape();
        Self::trimmed(deg - 1, vec![r, c], vec![Matrix::zeros(0, r), m])
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Support window `[lo, hi]`, `None` for the zero complex.
    pub fn window(&self) -> Option<(i32, i32)> {
        (!self.is_zero()).then(|| (self.lo, self.lo + self.dims.len() as i32 - 1))
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Degrees of the support window, empty for the zero complex.
    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.lo..self.lo + self.dims.len() as i32
    }

    pub fn dim(&self, n: i32) -> usize {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees().map(|n| (n, self.dim(n))).filter(|&(_, d)| d > 0).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_n`, borrowed inside the window.
    pub fn d_ref(&self, n: i32) -> Option<&Matrix<F>> {
        let i = n - self.lo;
        (i >= 0 && (i as usize) < self.dims.len()).then(|| &self.diffs[i as usize])
    }

    /// `d_n: C_n → C_{n-1}`.
    pub fn d(&self, n: i32) -> Matrix<F> {
        self.d_ref(n).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    pub fn direct_sum(&self, other: &Complex<F>) -> Complex<F> {
        let (lo, hi) = union_window(&[self, other]);
        let dims = (lo..=hi).map(|n| self.dim(n) + other.dim(n)).collect();
        let diffs = (lo..=hi).map(|n| Matrix::block_diag(&[self.d(n), other.d(n)])).collect();
        Self::from_parts_unchecked(lo, dims, diffs)
    }

    /// `C[k]_n = C_{n-k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex<F> {
        let sign = if k.rem_euclid(2) == 0 { F::one() } else { -F::one() };
        let diffs = self.diffs.iter().map(|d| d.scale(&sign)).collect();
        Self::trimmed(self.lo + k, self.dims.clone(), diffs)
    }

    /// Homology with fixed bases, computed once per complex.
    pub fn homology(&self) -> Arc<Homology<F>> {
        self.homology.get_or_init(|| Arc::new(Homology::compute(self))).clone()
    }

    pub fn homology_dims(&self) -> GradedDims {
        self.homology().dims()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| {
            let below = self.d_ref(n + 1).map_or(0, |d| d.rank());
            self.dim(n) == self.d(n).rank() + below
        })
    }
}

/// Smallest window containing every nonzero input, `(0, -1)` if all are zero.
pub(crate) fn union_window<F: Field>(cs: &[&Complex<F>]) -> (i32, i32) {
    let ws: Vec<(i32, i32)> = cs.iter().filter_map(|c| c.window()).collect();
    if ws.is_empty() {
        return (0, -1);
    }
    (ws.iter().map(|w| w.0).min().unwrap(), ws.iter().map(|w| w.1).max().unwrap())
}

/// Homology dimensions by degree; zero entries are omitted.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GradedDims(pub BTreeMap<i32, usize>);

impl GradedDims {
    pub fn from_pairs(pairs: &[(i32, usize)]) -> Self {
        GradedDims(pairs.iter().copied().filter(|&(_, d)| d > 0).collect())
    }

    pub fn get(&self, n: i32) -> usize {
        self.0.get(&n).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &GradedDims) -> GradedDims {
        let mut out = self.0.clone();
        for (&n, &d) in &other.0 {
            *out.entry(n).or_insert(0) += d;
        }
        GradedDims(out)
    }

    /// Degrees shifted by `k`.
    pub fn shift(&self, k: i32) -> GradedDims {
        GradedDims(self.0.iter().map(|(&n, &d)| (n + k, d)).collect())
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(n, d)| format!("H_{n}={d}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Homology of a complex with explicit bases.
///
/// In degree `n` the cycles `Z_n = ker d_n` are coordinatized by the free
/// columns of the reduced form of `d_n`; a cycle `z` has coordinates
/// `z[free]`. The class of `z` is `proj · z[free]`, and `reps` holds one cycle
/// per basis class with `proj · reps[free] = I`. Both are determined by the
/// reduced echelon forms, so bases are reproducible.
#[derive(Clone, Debug)]
pub struct Homology<F: Field> {
    lo: i32,
    degrees: Vec<HomologyDegree<F>>,
}

#[derive(Clone, Debug)]
struct HomologyDegree<F: Field> {
    free: Vec<usize>,
    proj: Matrix<F>,
    reps: Matrix<F>,
}

impl<F: Field> Homology<F> {
    fn compute(c: &Complex<F>) -> Self {
        let degrees = c
            .degrees()
            .map(|n| {
                let rref = c.d(n).rref();
                let free = rref.free_columns();
                let kernel = rref.kernel_basis();
                let boundaries = c.d(n + 1).select_rows(&free);
                let proj = boundaries.transpose().kernel().transpose();
                let section = proj.right_inverse().expect("annihilator rows are independent");
                HomologyDegree { reps: kernel.mul(&section), proj, free }
            })
            .collect();
        Homology { lo: c.lo, degrees }
    }

    fn at(&self, n: i32) -> Option<&HomologyDegree<F>> {
        let i = n - self.lo;
        (i >= 0 && (i as usize) < self.degrees.len()).then(|| &self.degrees[i as usize])
    }

    pub fn dim(&self, n: i32) -> usize {
        self.at(n).map_or(0, |h| h.proj.rows())
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims(
            (0..self.degrees.len())
                .map(|i| (self.lo + i as i32, self.degrees[i].proj.rows()))
                .filter(|&(_, d)| d > 0)
                .collect(),
        )
    }

    /// Classes of the cycle columns of `cycles ⊂ C_n`.
    pub fn classes(&self, n: i32, cycles: &Matrix<F>) -> Matrix<F> {
        match self.at(n) {
            Some(h) => h.proj.mul(&cycles.select_rows(&h.free)),
            None => Matrix::zeros(0, cycles.cols()),
        }
    }

    /// One representing cycle per basis class of `H_n`, as columns.
    pub fn representatives(&self, n: i32, ambient: usize) -> Matrix<F> {
        match self.at(n) {
            Some(h) => h.reps.clone(),
            None => Matrix::zeros(ambient, 0),
        }
    }
}

/// Degreewise matrices `f_n: X_n → Y_n` commuting with the differentials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap<F: Field> {
    source: Complex<F>,
    target: Complex<F>,
    /// `comps[i]` is `f_{source.lo + i}`.
    comps: Vec<Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    /// Components by degree; unlisted components are zero.
    pub fn new(
        source: Complex<F>,
        target: Complex<F>,
        comps: impl IntoIterator<Item = (i32, Matrix<F>)>,
    ) -> Result<Self> {
        let mut given: BTreeMap<i32, Matrix<F>> = comps.into_iter().collect();
        let mut full = Vec::with_capacity(source.dims.len());
        for n in source.degrees() {
            let want = (target.dim(n), source.dim(n));
            let m = given.remove(&n).unwrap_or_else(|| Matrix::zeros(want.0, want.1));
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!("f_{n} is {:?}, expected {want:?}", m.shape())));
            }
            full.push(m);
        }
        if let Some((n, m)) = given.into_iter().find(|(_, m)| !m.is_zero() && m.cols() > 0) {
            return Err(Error::ShapeMismatch(format!("f_{n} is {:?} outside the source window", m.shape())));
        }
        let f = ChainMap { source, target, comps: full };
        f.check_commutes()?;
        Ok(f)
    }

    pub fn from_fn(source: Complex<F>, target: Complex<F>, mut f: impl FnMut(i32) -> Matrix<F>) -> Result<Self> {
        let comps: Vec<(i32, Matrix<F>)> = source.degrees().map(|n| (n, f(n))).collect();
        Self::new(source, target, comps)
    }

    pub(crate) fn from_parts_unchecked(source: Complex<F>, target: Complex<F>, comps: Vec<Matrix<F>>) -> Self {
        let f = ChainMap { source, target, comps };
        debug_assert!(f.check_commutes().is_ok());
        f
    }

    fn check_commutes(&self) -> Result<()> {
        for n in self.source.degrees() {
            let lhs = self.target.d(n).mul(self.comp_ref(n).unwrap());
            let rhs = self.comp(n - 1).mul(&self.source.d(n));
            if lhs != rhs {
                return Err(Error::Invariant(format!("chain map does not commute with d_{n}")));
            }
        }
        Ok(())
    }

    pub fn identity(x: &Complex<F>) -> Self {
        let comps = x.degrees().map(|n| Matrix::identity(x.dim(n))).collect();
        ChainMap { source: x.clone(), target: x.clone(), comps }
    }

    pub fn zero(source: &Complex<F>, target: &Complex<F>) -> Self {
        let comps = source.degrees().map(|n| Matrix::zeros(target.dim(n), source.dim(n))).collect();
        ChainMap { source: source.clone(), target: target.clone(), comps }
    }

    pub fn source(&self) -> &Complex<F> {
        &self.source
    }

    pub fn target(&self) -> &Complex<F> {
        &self.target
    }

    pub fn comp_ref(&self, n: i32) -> Option<&Matrix<F>> {
        let i = n - self.source.lo;
        (i >= 0 && (i as usize) < self.comps.len()).then(|| &self.comps[i as usize])
    }

    /// `f_n`, zero outside the source window.
    pub fn comp(&self, n: i32) -> Matrix<F> {
        self.comp_ref(n).cloned().unwrap_or_else(|| Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap<F>) -> Result<ChainMap<F>> {
        if self.target != other.source {
            return Err(Error::CompositionMismatch);
        }
        let comps = self.source.degrees().map(|n| other.comp(n).mul(self.comp_ref(n).unwrap())).collect();
        Ok(ChainMap { source: self.source.clone(), target: other.target.clone(), comps })
    }

    fn zip_with(&self, other: &ChainMap<F>, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Result<ChainMap<F>> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("chain maps with different endpoints".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect();
        Ok(ChainMap { source: self.source.clone(), target: self.target.clone(), comps })
    }

    pub fn add(&self, other: &ChainMap<F>) -> Result<ChainMap<F>> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &ChainMap<F>) -> Result<ChainMap<F>> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &F) -> ChainMap<F> {
        let comps = self.comps.iter().map(|m| m.scale(c)).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn neg(&self) -> ChainMap<F> {
        self.scale(&-F::one())
    }

    /// The same components between equal complexes given again.
    pub fn with_ends(&self, source: &Complex<F>, target: &Complex<F>) -> Result<ChainMap<F>> {
        if *source != self.source || *target != self.target {
            return Err(Error::CompositionMismatch);
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), comps: self.comps.clone() })
    }

    /// Induced map `H_n(X) → H_n(Y)` on the fixed homology bases.
    pub fn homology_map(&self, n: i32) -> Matrix<F> {
        let hx = self.source.homology();
        let hy = self.target.homology();
        let reps = hx.representatives(n, self.source.dim(n));
        if reps.cols() == 0 || hy.dim(n) == 0 {
            return Matrix::zeros(hy.dim(n), reps.cols());
        }
        hy.classes(n, &self.comp(n).mul(&reps))
    }

    /// Induced maps in every degree where source or target has homology.
    pub fn homology_maps(&self) -> BTreeMap<i32, Matrix<F>> {
        let mut degs: Vec<i32> = self.source.homology_dims().0.keys().copied().collect();
        degs.extend(self.target.homology_dims().0.keys());
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter().map(|n| (n, self.homology_map(n))).collect()
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.homology_maps().values().all(|m| m.is_iso())
    }
}

/// One leg of a [`Zigzag`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ZigStep<M> {
    Forward(M),
    Backward(M),
}

/// A chain of chain maps `A → • ← • → … B` whose legs are meant to be
/// quasi-isomorphisms. Every identification "isomorphic in D" is recorded as
/// one of these, built from canonical maps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Zigzag<F: Field> {
    steps: Vec<ZigStep<ChainMap<F>>>,
}

impl<F: Field> Zigzag<F> {
    pub fn forward(f: ChainMap<F>) -> Self {
        Zigzag { steps: vec![ZigStep::Forward(f)] }
    }

    pub fn backward(f: ChainMap<F>) -> Self {
        Zigzag { steps: vec![ZigStep::Backward(f)] }
    }

    /// Panics unless consecutive legs share their ends.
    pub fn from_steps(steps: Vec<ZigStep<ChainMap<F>>>) -> Self {
        let mut it = steps.into_iter();
        let first = Zigzag { steps: vec![it.next().expect("a zigzag has at least one leg")] };
        it.fold(first, |z, s| z.then(Zigzag { steps: vec![s] }).expect("legs of a zigzag compose"))
    }

    /// Appends `next`, whose start must be this zigzag's end.
    pub fn then(mut self, next: Zigzag<F>) -> Result<Self> {
        if self.target() != next.source() {
            return Err(Error::CompositionMismatch);
        }
        self.steps.extend(next.steps);
        Ok(self)
    }

    /// The same legs read from the other end.
    pub fn reversed(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                ZigStep::Forward(f) => ZigStep::Backward(f.clone()),
                ZigStep::Backward(f) => ZigStep::Forward(f.clone()),
            })
            .collect();
        Zigzag { steps }
    }

    pub fn steps(&self) -> &[ZigStep<ChainMap<F>>] {
        &self.steps
    }

    pub fn source(&self) -> &Complex<F> {
        match &self.steps[0] {
            ZigStep::Forward(f) => f.source(),
            ZigStep::Backward(f) => f.target(),
        }
    }

    pub fn target(&self) -> &Complex<F> {
        match self.steps.last().unwrap() {
            ZigStep::Forward(f) => f.target(),
            ZigStep::Backward(f) => f.source(),
        }
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.steps.iter().all(|s| match s {
            ZigStep::Forward(f) | ZigStep::Backward(f) => f.is_quasi_iso(),
        })
    }

    /// The composite isomorphism `H_n(source) → H_n(target)`, `None` if a
    /// backward leg is not invertible in degree `n`.
    pub fn homology_map(&self, n: i32) -> Option<Matrix<F>> {
        let mut acc = Matrix::identity(self.source().homology().dim(n));
        for s in &self.steps {
            let m = match s {
                ZigStep::Forward(f) => f.homology_map(n),
                ZigStep::Backward(f) => f.homology_map(n).inverse()?,
            };
            acc = m.mul(&acc);
        }
        Some(acc)
    }
}
