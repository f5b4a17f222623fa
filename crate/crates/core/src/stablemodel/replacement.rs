//! Homotopy colimits and limits over finite posets by (co)simplicial
//! replacement.
//!
//! Sign convention, used everywhere: a summand indexed by a strict chain
//! `x_0 < … < x_m` and an inner degree `n` sits in total degree `n + m`
//! (colimits) or `n - m` (limits). The colimit differential is
//! `Σ_i (-1)^i d_i + (-1)^m d_X`, where `d_0` pushes along `x_0 → x_1` and
//! `d_i` drops `x_i` otherwise. The limit differential is `δ + (-1)^m d_X`
//! with `(δc)(σ) = Σ_i (-1)^i c(d_i σ)`, the last face pushing along
//! `σ_{m} → σ_{m+1}`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::MonotoneMap;

use super::complex::{ChainMap, Complex};
use super::diagram::{ChainDiagram, ChainDiagramMorphism};

/// Which homotopy (co)limit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum HoSide {
    Colim,
    Lim,
}

/// The total complex of the replacement of a diagram, with its block layout.
#[derive(Clone, Debug)]
pub struct Replacement<F: Field> {
    side: HoSide,
    diagram: ChainDiagram<F>,
    chains: Vec<Vec<usize>>,
    chain_index: HashMap<Vec<usize>, usize>,
    /// Offset of the block `(chain, inner degree)` inside its total degree.
    offsets: HashMap<(usize, i32), usize>,
    tot: Complex<F>,
}

impl<F: Field> Replacement<F> {
    pub fn new(diagram: &ChainDiagram<F>, side: HoSide) -> Self {
        let chains: Vec<Vec<usize>> = diagram.shape().all_chains().into_iter().flatten().collect();
        let chain_index = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut r = Replacement {
            side,
            diagram: diagram.clone(),
            chains,
            chain_index,
            offsets: HashMap::new(),
            tot: Complex::zero(),
        };
        let mut sizes: BTreeMap<i32, usize> = BTreeMap::new();
        let mut offsets = HashMap::new();
        for c in 0..r.chains.len() {
            let v = r.value(c);
            for n in v.degrees() {
                let size = sizes.entry(r.total_degree(c, n)).or_insert(0);
                offsets.insert((c, n), *size);
                *size += v.dim(n);
            }
        }
        r.offsets = offsets;
        let (Some(&lo), Some(&hi)) = (sizes.keys().next(), sizes.keys().next_back()) else {
            return r;
        };
        let dim = |t: i32| sizes.get(&t).copied().unwrap_or(0);
        let mut diffs: Vec<Matrix<F>> = (lo..=hi).map(|t| Matrix::zeros(dim(t - 1), dim(t))).collect();
        let mut put = |t: i32, row: usize, col: usize, m: &Matrix<F>, sign: &F| {
            diffs[(t - lo) as usize].add_block(row, col, m, sign);
        };
        let one = F::one();
        let minus = -F::one();
        let sign = |k: usize| if k.is_multiple_of(2) { &one } else { &minus };
        for (c, chain) in r.chains.iter().enumerate() {
            let m = chain.len() - 1;
            let v = r.value(c);
            for n in v.degrees() {
                let t = r.total_degree(c, n);
                let col = r.offsets[&(c, n)];
                if v.dim(n - 1) > 0 {
                    put(t, r.offsets[&(c, n - 1)], col, v.d_ref(n).unwrap(), sign(m));
                }
                if m == 0 {
                    continue;
                }
                for i in 0..=m {
                    let mut face = chain.clone();
                    face.remove(i);
                    let f = r.chain_index[&face];
                    match side {
                        HoSide::Colim => {
                            if i == 0 {
                                let push = diagram.map(chain[0], chain[1]);
                                if push.target().dim(n) > 0 {
                                    put(t, r.offsets[&(f, n)], col, push.comp_ref(n).unwrap(), sign(0));
                                }
                            } else {
                                put(t, r.offsets[&(f, n)], col, &Matrix::identity(v.dim(n)), sign(i));
                            }
                        }
                        HoSide::Lim => {
                            // Block (face, n) sits in degree t + 1 and maps into (chain, n).
                            let fv = r.value(f);
                            if fv.dim(n) == 0 {
                                continue;
                            }
                            let src = r.offsets[&(f, n)];
                            if i == m {
                                let push = diagram.map(chain[m - 1], chain[m]);
                                put(t + 1, col, src, push.comp_ref(n).unwrap(), sign(i));
                            } else {
                                put(t + 1, col, src, &Matrix::identity(v.dim(n)), sign(i));
                            }
                        }
                    }
                }
            }
        }
        let dims = (lo..=hi).map(dim).collect();
        r.tot = Complex::new(lo, dims, (lo..=hi).zip(diffs)).expect("replacement differential squares to zero");
        r
    }

    pub fn side(&self) -> HoSide {
        self.side
    }

    pub fn diagram(&self) -> &ChainDiagram<F> {
        &self.diagram
    }

    pub fn tot(&self) -> &Complex<F> {
        &self.tot
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    /// The element whose value labels the chain's summand.
    fn key(&self, c: usize) -> usize {
        let chain = &self.chains[c];
        match self.side {
            HoSide::Colim => chain[0],
            HoSide::Lim => *chain.last().unwrap(),
        }
    }

    fn value(&self, c: usize) -> &Complex<F> {
        self.diagram.value(self.key(c))
    }

    fn total_degree(&self, c: usize, n: i32) -> i32 {
        let m = self.chains[c].len() as i32 - 1;
        match self.side {
            HoSide::Colim => n + m,
            HoSide::Lim => n - m,
        }
    }

    fn singleton(&self, a: usize) -> usize {
        self.chain_index[&vec![a]]
    }

    /// `X_a → hocolim`, the inclusion of the summand of the chain `(a)`.
    pub fn insertion(&self, a: usize) -> ChainMap<F> {
        assert_eq!(self.side, HoSide::Colim, "insertions exist for homotopy colimits");
        let x = self.diagram.value(a);
        let c = self.singleton(a);
        let mut b = Blocks::new(x, &self.tot);
        for n in x.degrees() {
            b.put(n, self.offsets[&(c, n)], 0, &Matrix::identity(x.dim(n)), &F::one());
        }
        b.finish_unchecked()
    }

    /// `holim → X_a`, the projection to the summand of the chain `(a)`.
    pub fn projection(&self, a: usize) -> ChainMap<F> {
        assert_eq!(self.side, HoSide::Lim, "projections exist for homotopy limits");
        let x = self.diagram.value(a);
        let c = self.singleton(a);
        let mut b = Blocks::new(&self.tot, x);
        for n in x.degrees() {
            b.put(n, 0, self.offsets[&(c, n)], &Matrix::identity(x.dim(n)), &F::one());
        }
        b.finish_unchecked()
    }

    /// `hocolim → W` sending the summand of `(a)` along `legs[a]` and higher
    /// chains to zero; fails unless the legs form a cocone.
    pub fn augmentation(&self, w: &Complex<F>, legs: &[ChainMap<F>]) -> Result<ChainMap<F>> {
        assert_eq!(self.side, HoSide::Colim, "augmentations exist for homotopy colimits");
        self.check_legs(legs.len())?;
        let mut b = Blocks::new(&self.tot, w);
        for (a, leg) in legs.iter().enumerate() {
            if leg.source() != self.diagram.value(a) || leg.target() != w {
                return Err(Error::ShapeMismatch(format!("leg {a} has the wrong ends")));
            }
            let c = self.singleton(a);
            for n in leg.source().degrees() {
                b.put(n, 0, self.offsets[&(c, n)], &leg.comp(n), &F::one());
            }
        }
        b.finish()
    }

    /// `W → holim`, the dual of [`Replacement::augmentation`].
    pub fn coaugmentation(&self, w: &Complex<F>, legs: &[ChainMap<F>]) -> Result<ChainMap<F>> {
        assert_eq!(self.side, HoSide::Lim, "coaugmentations exist for homotopy limits");
        self.check_legs(legs.len())?;
        let mut b = Blocks::new(w, &self.tot);
        for (a, leg) in legs.iter().enumerate() {
            if leg.target() != self.diagram.value(a) || leg.source() != w {
                return Err(Error::ShapeMismatch(format!("leg {a} has the wrong ends")));
            }
            let c = self.singleton(a);
            for n in leg.target().degrees() {
                b.put(n, self.offsets[&(c, n)], 0, &leg.comp(n), &F::one());
            }
        }
        b.finish()
    }

    fn check_legs(&self, n: usize) -> Result<()> {
        if n != self.diagram.shape().len() {
            return Err(Error::ShapeMismatch(format!("{n} legs for {} elements", self.diagram.shape().len())));
        }
        Ok(())
    }

    /// Functoriality along `φ: P → P'`.
    ///
    /// Colimits: `self` is over `P` with diagram `φ* X`, `to` over `P'` with
    /// diagram `X`; the map `self → to` sends a chain to its image when that
    /// is still strict, and to zero otherwise. Limits: `self` is over `P'`
    /// with `X` and `to` over `P` with `φ* X`; the map `self → to` reads a
    /// chain's component at its image.
    pub fn along(&self, to: &Replacement<F>, phi: &MonotoneMap) -> Result<ChainMap<F>> {
        if self.side != to.side {
            return Err(Error::ShapeMismatch("colimit and limit replacements".into()));
        }
        let (small, big) = match self.side {
            HoSide::Colim => (self, to),
            HoSide::Lim => (to, self),
        };
        if *phi.source() != *small.diagram.shape() || *phi.target() != *big.diagram.shape() {
            return Err(Error::ShapeMismatch("map between the wrong shapes".into()));
        }
        for a in 0..phi.source().len() {
            if small.diagram.value(a) != big.diagram.value(phi.apply(a)) {
                return Err(Error::ShapeMismatch(format!("value at {} is not restricted", phi.source().label(a))));
            }
        }
        let mut b = Blocks::new(&self.tot, &to.tot);
        for (c, chain) in small.chains.iter().enumerate() {
            let image: Vec<usize> = chain.iter().map(|&x| phi.apply(x)).collect();
            let Some(&ci) = big.chain_index.get(&image) else { continue };
            let v = small.value(c);
            for n in v.degrees() {
                let id = Matrix::identity(v.dim(n));
                let t = small.total_degree(c, n);
                match self.side {
                    HoSide::Colim => b.put(t, big.offsets[&(ci, n)], small.offsets[&(c, n)], &id, &F::one()),
                    HoSide::Lim => b.put(t, small.offsets[&(c, n)], big.offsets[&(ci, n)], &id, &F::one()),
                }
            }
        }
        b.finish()
    }

    /// The map induced by a morphism of diagrams on this shape, `self` over
    /// its source and `to` over its target.
    pub fn morphism(&self, to: &Replacement<F>, f: &ChainDiagramMorphism<F>) -> Result<ChainMap<F>> {
        if self.side != to.side || f.source() != &self.diagram || f.target() != &to.diagram {
            return Err(Error::ShapeMismatch("morphism does not match the replacements".into()));
        }
        let mut b = Blocks::new(&self.tot, &to.tot);
        for c in 0..self.chains.len() {
            let comp = f.component(self.key(c));
            for n in self.value(c).degrees() {
                if to.value(c).dim(n) == 0 {
                    continue;
                }
                let t = self.total_degree(c, n);
                b.put(t, to.offsets[&(c, n)], self.offsets[&(c, n)], comp.comp_ref(n).unwrap(), &F::one());
            }
        }
        b.finish()
    }
}

/// Homotopy colimit of `x` over its whole shape.
pub fn hocolim<F: Field>(x: &ChainDiagram<F>) -> Replacement<F> {
    Replacement::new(x, HoSide::Colim)
}

/// Homotopy limit of `x` over its whole shape.
pub fn holim<F: Field>(x: &ChainDiagram<F>) -> Replacement<F> {
    Replacement::new(x, HoSide::Lim)
}

/// Chain map assembled from blocks, degree by degree.
pub(crate) struct Blocks<F: Field> {
    source: Complex<F>,
    target: Complex<F>,
    comps: Vec<Matrix<F>>,
}

impl<F: Field> Blocks<F> {
    pub(crate) fn new(source: &Complex<F>, target: &Complex<F>) -> Self {
        let comps = source.degrees().map(|n| Matrix::zeros(target.dim(n), source.dim(n))).collect();
        Blocks { source: source.clone(), target: target.clone(), comps }
    }

    pub(crate) fn put(&mut self, n: i32, row: usize, col: usize, m: &Matrix<F>, sign: &F) {
        if m.rows() == 0 || m.cols() == 0 {
            return;
        }
        let i = (n - self.source.lo()) as usize;
        self.comps[i].add_block(row, col, m, sign);
    }

    pub(crate) fn finish(self) -> Result<ChainMap<F>> {
        let lo = self.source.lo();
        let comps = self.comps.into_iter().enumerate().map(|(i, m)| (lo + i as i32, m));
        ChainMap::new(self.source, self.target, comps)
    }

    pub(crate) fn finish_unchecked(self) -> ChainMap<F> {
        ChainMap::from_parts_unchecked(self.source, self.target, self.comps)
    }
}
