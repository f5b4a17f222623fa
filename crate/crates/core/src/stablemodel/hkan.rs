//! Homotopy Kan extensions along monotone maps, by the pointwise formula.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::shapes::{corner_pull, corner_push, grid};
use crate::fincat::{MonotoneMap, Side};
use crate::repmodel::KanSide;

use super::complex::{ChainMap, Complex, ZigStep};
use super::diagram::{ChainDiagram, ChainDiagramMorphism, DiagramZigzag};
use super::replacement::{HoSide, Replacement};

/// A homotopy Kan extension with the replacements it was assembled from.
///
/// Left: the value at `k` is the homotopy colimit over `{ j : u(j) <= k }`.
/// Right: the homotopy limit over `{ j : k <= u(j) }`. Structure maps are
/// induced by the inclusions of these subposets.
#[derive(Clone, Debug)]
pub struct HKan<F: Field> {
    side: KanSide,
    u: MonotoneMap,
    input: ChainDiagram<F>,
    /// Per element of the target: the slice's elements and its replacement.
    pieces: Vec<(Vec<usize>, Replacement<F>)>,
    output: ChainDiagram<F>,
}

impl<F: Field> HKan<F> {
    pub fn compute(u: &MonotoneMap, x: &ChainDiagram<F>, side: KanSide) -> Result<Self> {
        if *u.source() != *x.shape() {
            return Err(Error::ShapeMismatch("diagram does not live on the map's source".into()));
        }
        let k = u.target();
        let (slice_side, ho) = match side {
            KanSide::Left => (Side::Over, HoSide::Colim),
            KanSide::Right => (Side::Under, HoSide::Lim),
        };
        let pieces: Vec<(Vec<usize>, Replacement<F>)> = (0..k.len())
            .into_par_iter()
            .map(|b| {
                let (_, incl) = u.slice(b, slice_side)?;
                let rep = Replacement::new(&x.restrict(&incl)?, ho);
                Ok((incl.as_slice().to_vec(), rep))
            })
            .collect::<Result<_>>()?;
        let values = pieces.iter().map(|(_, r)| r.tot().clone()).collect();
        let output = ChainDiagram::from_relations(k.clone(), values, |a, b| {
            let (pa, ra) = &pieces[a];
            let (pb, rb) = &pieces[b];
            let (small, big, rs, rb2) = match side {
                KanSide::Left => (pa, pb, ra, rb),
                KanSide::Right => (pb, pa, rb, ra),
            };
            let map = small.iter().map(|j| big.iter().position(|y| y == j).expect("slices are nested")).collect();
            let phi = MonotoneMap::new(
                rs.diagram().shape().clone(),
                rb2.diagram().shape().clone(),
                map,
            )?;
            ra.along(rb, &phi)
        })?;
        Ok(HKan { side, u: u.clone(), input: x.clone(), pieces, output })
    }

    pub fn output(&self) -> &ChainDiagram<F> {
        &self.output
    }

    pub fn into_output(self) -> ChainDiagram<F> {
        self.output
    }

    pub fn side(&self) -> KanSide {
        self.side
    }

    pub fn input(&self) -> &ChainDiagram<F> {
        &self.input
    }

    pub fn replacement(&self, k: usize) -> &Replacement<F> {
        &self.pieces[k].1
    }

    /// Elements of the source in the slice at `k`, in the order of the
    /// replacement's shape.
    pub fn slice_elements(&self, k: usize) -> &[usize] {
        &self.pieces[k].0
    }

    /// Position of `j` inside the slice at `k`.
    fn position(&self, k: usize, j: usize) -> usize {
        self.pieces[k].0.iter().position(|&y| y == j).expect("element in slice")
    }

    /// Left: the unit `X → u* u_! X` as `X ← QX → u* u_! X`, where
    /// `QX(j)` is the homotopy colimit over `{ j' <= j }`.
    ///
    /// Inserting `X_j` at the chain `(j)` is natural only up to the homotopy
    /// given by the chain `(j < j')`, so the unit is not a strict morphism.
    /// `QX` is strictly functorial, augments to `X` by a levelwise
    /// quasi-isomorphism and maps into each slice by inclusion of chains.
    pub fn unit(&self) -> Result<DiagramZigzag<F>> {
        self.expect_side(KanSide::Left)?;
        let j = self.u.source();
        let q = HKan::compute(&MonotoneMap::identity(j), &self.input, KanSide::Left)?;
        let back = q.augmentation_to(&self.input)?;
        let comps = (0..j.len()).map(|a| self.identity_slice_map(&q, a)).collect::<Result<_>>()?;
        let forward = ChainDiagramMorphism::new(q.output.clone(), self.output.restrict(&self.u)?, comps)?;
        Ok(DiagramZigzag::new(vec![ZigStep::Backward(back), ZigStep::Forward(forward)]))
    }

    /// Right: the counit `u* u_* X → X` as `u* u_* X → PX ← X`, dual to
    /// [`HKan::unit`].
    pub fn counit(&self) -> Result<DiagramZigzag<F>> {
        self.expect_side(KanSide::Right)?;
        let j = self.u.source();
        let p = HKan::compute(&MonotoneMap::identity(j), &self.input, KanSide::Right)?;
        let back = p.coaugmentation_from(&self.input)?;
        let comps = (0..j.len()).map(|a| self.identity_slice_map(&p, a)).collect::<Result<_>>()?;
        let forward = ChainDiagramMorphism::new(self.output.restrict(&self.u)?, p.output.clone(), comps)?;
        Ok(DiagramZigzag::new(vec![ZigStep::Forward(forward), ZigStep::Backward(back)]))
    }

    /// The map between the slice of the identity at `a` and the slice of `u`
    /// at `u(a)`, which contains it.
    fn identity_slice_map(&self, id: &HKan<F>, a: usize) -> Result<ChainMap<F>> {
        let k = self.u.apply(a);
        let small = id.replacement(a);
        let big = self.replacement(k);
        let map = id.slice_elements(a).iter().map(|&x| self.position(k, x)).collect();
        let phi = MonotoneMap::new(small.diagram().shape().clone(), big.diagram().shape().clone(), map)?;
        match self.side {
            KanSide::Left => small.along(big, &phi),
            KanSide::Right => big.along(small, &phi),
        }
    }

    /// Left, when the input is `u* Y`: the counit `u_! u* Y → Y` with legs
    /// `Y(u(j) <= k)`.
    pub fn augmentation_to(&self, y: &ChainDiagram<F>) -> Result<ChainDiagramMorphism<F>> {
        self.expect_side(KanSide::Left)?;
        self.expect_restriction(y)?;
        let comps = (0..y.shape().len())
            .map(|k| {
                let legs: Vec<ChainMap<F>> =
                    self.pieces[k].0.iter().map(|&j| y.map(self.u.apply(j), k).clone()).collect();
                self.pieces[k].1.augmentation(y.value(k), &legs)
            })
            .collect::<Result<_>>()?;
        ChainDiagramMorphism::new(self.output.clone(), y.clone(), comps)
    }

    /// Right, when the input is `u* Y`: the unit `Y → u_* u* Y` with legs
    /// `Y(k <= u(j))`.
    pub fn coaugmentation_from(&self, y: &ChainDiagram<F>) -> Result<ChainDiagramMorphism<F>> {
        self.expect_side(KanSide::Right)?;
        self.expect_restriction(y)?;
        let comps = (0..y.shape().len())
            .map(|k| {
                let legs: Vec<ChainMap<F>> =
                    self.pieces[k].0.iter().map(|&j| y.map(k, self.u.apply(j)).clone()).collect();
                self.pieces[k].1.coaugmentation(y.value(k), &legs)
            })
            .collect::<Result<_>>()?;
        ChainDiagramMorphism::new(y.clone(), self.output.clone(), comps)
    }

    fn expect_side(&self, side: KanSide) -> Result<()> {
        if self.side != side {
            return Err(Error::ShapeMismatch(format!("needs a {side:?} Kan extension")));
        }
        Ok(())
    }

    fn expect_restriction(&self, y: &ChainDiagram<F>) -> Result<()> {
        if y.restrict(&self.u)? != self.input {
            return Err(Error::ShapeMismatch("input is not the restriction of the given diagram".into()));
        }
        Ok(())
    }
}

/// `u_! X` (left) or `u_* X` (right).
pub fn hkan<F: Field>(u: &MonotoneMap, x: &ChainDiagram<F>, side: KanSide) -> Result<ChainDiagram<F>> {
    Ok(HKan::compute(u, x, side)?.into_output())
}

/// The map `hkan(u, X) → hkan(u, X')` induced by `f: X → X'`.
pub fn hkan_morphism<F: Field>(
    a: &HKan<F>,
    b: &HKan<F>,
    f: &ChainDiagramMorphism<F>,
) -> Result<ChainDiagramMorphism<F>> {
    if a.u != b.u || a.side != b.side || f.source() != &a.input || f.target() != &b.input {
        return Err(Error::ShapeMismatch("morphism does not match the Kan extensions".into()));
    }
    let comps = (0..a.u.target().len())
        .map(|k| {
            let (elems, ra) = &a.pieces[k];
            let (sub, _) = a.u.source().subposet(elems);
            let incl = MonotoneMap::new(sub, a.u.source().clone(), elems.clone())?;
            ra.morphism(&b.pieces[k].1, &f.restrict(&incl)?)
        })
        .collect::<Result<_>>()?;
    ChainDiagramMorphism::new(a.output.clone(), b.output.clone(), comps)
}

/// Strict extension by zero along a sieve (`Right`) or cosieve (`Left`):
/// `X` on the image, the zero complex elsewhere.
pub fn extend_by_zero<F: Field>(u: &MonotoneMap, x: &ChainDiagram<F>, side: KanSide) -> Result<ChainDiagram<F>> {
    let status = u.sieve_status();
    match side {
        KanSide::Left if !status.is_cosieve() => return Err(Error::NotACosieve),
        KanSide::Right if !status.is_sieve() => return Err(Error::NotASieve),
        _ => {}
    }
    if *u.source() != *x.shape() {
        return Err(Error::ShapeMismatch("diagram does not live on the map's source".into()));
    }
    let k = u.target();
    let pre: Vec<Option<usize>> = (0..k.len()).map(|b| (0..u.source().len()).find(|&j| u.apply(j) == b)).collect();
    let values: Vec<Complex<F>> = pre.iter().map(|p| p.map_or_else(Complex::zero, |j| x.value(j).clone())).collect();
    let vals = values.clone();
    ChainDiagram::from_relations(k.clone(), values, |a, b| match (pre[a], pre[b]) {
        (Some(ja), Some(jb)) => Ok(x.map(ja, jb).clone()),
        _ => Ok(ChainMap::zero(&vals[a], &vals[b])),
    })
}

/// Comparison between the strict extension by zero and the formula: along a
/// cosieve `u_! X → ext(X)` by augmentation, along a sieve `ext(X) → u_* X`
/// by coaugmentation. It is a levelwise quasi-isomorphism.
pub fn extension_comparison<F: Field>(
    u: &MonotoneMap,
    x: &ChainDiagram<F>,
    side: KanSide,
) -> Result<ChainDiagramMorphism<F>> {
    let strict = extend_by_zero(u, x, side)?;
    let formula = HKan::compute(u, x, side)?;
    match side {
        KanSide::Left => formula.augmentation_to(&strict),
        KanSide::Right => formula.coaugmentation_from(&strict),
    }
}

/// Which universal properties a square has.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SquareStatus {
    #[serde(rename = "coCartesian")]
    pub cocartesian: bool,
    pub cartesian: bool,
}

impl SquareStatus {
    pub fn bicartesian(self) -> bool {
        self.cocartesian && self.cartesian
    }
}

/// Both comparison maps of a square: `hocolim_⌐(Q|⌐) → Q_{1,1}` and
/// `Q_{0,0} → holim_⌟(Q|⌟)`.
pub fn square_comparisons<F: Field>(q: &ChainDiagram<F>) -> Result<(ChainMap<F>, ChainMap<F>)> {
    if *q.shape() != grid(1, 1) {
        return Err(Error::WrongShape("expected the square [1] x [1]".into()));
    }
    let top = 3;
    let (_, push) = corner_push();
    let colim = Replacement::new(&q.restrict(&push)?, HoSide::Colim);
    let legs: Vec<ChainMap<F>> = push.as_slice().iter().map(|&a| q.map(a, top).clone()).collect();
    let aug = colim.augmentation(q.value(top), &legs)?;
    let (_, pull) = corner_pull();
    let lim = Replacement::new(&q.restrict(&pull)?, HoSide::Lim);
    let legs: Vec<ChainMap<F>> = pull.as_slice().iter().map(|&a| q.map(0, a).clone()).collect();
    let coaug = lim.coaugmentation(q.value(0), &legs)?;
    Ok((aug, coaug))
}

pub fn cocartesian_status<F: Field>(q: &ChainDiagram<F>) -> Result<SquareStatus> {
    let (aug, coaug) = square_comparisons(q)?;
    Ok(SquareStatus { cocartesian: aug.is_quasi_iso(), cartesian: coaug.is_quasi_iso() })
}

/// The square `c00 → c10, c00 → c01, → c11` of `x`, as a diagram on `□`.
pub fn square_at<F: Field>(x: &ChainDiagram<F>, corners: [usize; 4]) -> Result<ChainDiagram<F>> {
    let [c00, c10, c01, c11] = corners;
    let u = MonotoneMap::new(grid(1, 1), x.shape().clone(), vec![c00, c01, c10, c11])?;
    x.restrict(&u)
}
