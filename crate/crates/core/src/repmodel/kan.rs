//! Limits, colimits and Kan extensions by Kan's formula.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::{slice, slice_objects, FinCategory, FunctorData, Side};

use super::diagram::{DiagramMorphism, VecDiagram};

/// Which universal construction to take.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LimSide {
    Lim,
    Colim,
}

/// Which Kan extension to take.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum KanSide {
    Left,
    Right,
}

/// A chosen (co)limit: its dimension and the legs `X_j → colim` or `lim → X_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Limit<F: Field> {
    pub dim: usize,
    pub legs: Vec<Matrix<F>>,
}

/// Presentation of a (co)limit as a subspace or quotient of `⊕_j X_j`.
///
/// For a colimit `pres = π` is the quotient map and `sect = σ` satisfies
/// `π σ = 1`. For a limit `pres = ι` is the inclusion of the kernel and
/// `sect = ι⁺` satisfies `ι⁺ ι = 1`.
#[derive(Clone, Debug)]
pub(crate) struct Presentation<F: Field> {
    side: LimSide,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    pres: Matrix<F>,
    sect: Matrix<F>,
}

impl<F: Field> Presentation<F> {
    fn new(x: &VecDiagram<F>, side: LimSide) -> Self {
        let shape = x.shape();
        let dims = x.dims().to_vec();
        let n = dims.len();
        // Summands are stacked with the most reachable objects last, so that
        // elimination keeps their coordinates free: a terminal object (colimit)
        // or initial object (limit) then has the identity as its leg.
        let reach = |a: usize| match side {
            LimSide::Colim => (0..n).filter(|&b| !shape.hom(b, a).is_empty()).count(),
            LimSide::Lim => (0..n).filter(|&b| !shape.hom(a, b).is_empty()).count(),
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| reach(a));
        let mut offsets = vec![0; n];
        let mut total = 0;
        for &a in &order {
            offsets[a] = total;
            total += dims[a];
        }
        let non_id = shape.non_identities();
        match side {
            LimSide::Colim => {
                // Columns: for v in X_a and f: a → b, ins_b(X_f v) − ins_a(v).
                let width: usize = non_id.iter().map(|&f| dims[shape.src(f)]).sum();
                let mut rel = Matrix::zeros(total, width);
                let mut c0 = 0;
                for &f in &non_id {
                    let (a, b) = (shape.src(f), shape.tgt(f));
                    rel.add_block(offsets[b], c0, x.map(f), &F::one());
                    rel.add_block(offsets[a], c0, &Matrix::identity(dims[a]), &-F::one());
                    c0 += dims[a];
                }
                let pi = rel.transpose().kernel().transpose();
                let sigma = pi.right_inverse().expect("quotient map has full row rank");
                Presentation { side, offsets, dims, pres: pi, sect: sigma }
            }
            LimSide::Lim => {
                // Rows: for f: a → b, X_f ∘ proj_a − proj_b.
                let height: usize = non_id.iter().map(|&f| dims[shape.tgt(f)]).sum();
                let mut diff = Matrix::zeros(height, total);
                let mut r0 = 0;
                for &f in &non_id {
                    let (a, b) = (shape.src(f), shape.tgt(f));
                    diff.add_block(r0, offsets[a], x.map(f), &F::one());
                    diff.add_block(r0, offsets[b], &Matrix::identity(dims[b]), &-F::one());
                    r0 += dims[b];
                }
                let iota = diff.kernel();
                let left = iota.left_inverse().expect("kernel basis has full column rank");
                Presentation { side, offsets, dims, pres: iota, sect: left }
            }
        }
    }

    fn dim(&self) -> usize {
        match self.side {
            LimSide::Colim => self.pres.rows(),
            LimSide::Lim => self.pres.cols(),
        }
    }

    fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    fn leg(&self, j: usize) -> Matrix<F> {
        match self.side {
            LimSide::Colim => self.pres.block(0, self.offsets[j], self.pres.rows(), self.dims[j]),
            LimSide::Lim => self.pres.block(self.offsets[j], 0, self.dims[j], self.pres.cols()),
        }
    }

    /// Universal map determined by a cocone `X_j → W` (colimit) or a cone
    /// `W → X_j` (limit). The solution is unique by universality; this is
    /// asserted by checking that it reproduces every leg.
    fn universal(&self, legs: &[Matrix<F>], other: usize) -> Result<Matrix<F>> {
        match self.side {
            LimSide::Colim => {
                let mut joined = Matrix::zeros(other, self.total());
                for (j, l) in legs.iter().enumerate() {
                    joined.set_block(0, self.offsets[j], l);
                }
                let phi = joined.mul(&self.sect);
                if phi.mul(&self.pres) != joined {
                    return Err(Error::Invariant("legs do not form a cocone".into()));
                }
                Ok(phi)
            }
            LimSide::Lim => {
                let mut joined = Matrix::zeros(self.total(), other);
                for (j, l) in legs.iter().enumerate() {
                    joined.set_block(self.offsets[j], 0, l);
                }
                let phi = self.sect.mul(&joined);
                if self.pres.mul(&phi) != joined {
                    return Err(Error::Invariant("legs do not form a cone".into()));
                }
                Ok(phi)
            }
        }
    }

    /// `⊕_j A_j` between two presentations over the same index category,
    /// carried through the presentation maps.
    fn induced(&self, target: &Presentation<F>, blocks: &[Matrix<F>]) -> Matrix<F> {
        let mut diag = Matrix::zeros(target.total(), self.total());
        for (j, b) in blocks.iter().enumerate() {
            diag.set_block(target.offsets[j], self.offsets[j], b);
        }
        match self.side {
            LimSide::Colim => target.pres.mul(&diag).mul(&self.sect),
            LimSide::Lim => target.sect.mul(&diag).mul(&self.pres),
        }
    }
}

/// (Co)limit of `x` over its shape.
pub fn lim_colim<F: Field>(x: &VecDiagram<F>, side: LimSide) -> Limit<F> {
    let p = Presentation::new(x, side);
    Limit { dim: p.dim(), legs: (0..x.shape().object_count()).map(|j| p.leg(j)).collect() }
}

/// Universal map out of the colimit (or into the limit) of `x` determined by
/// compatible legs into (or out of) a space of dimension `other`.
pub fn universal_map<F: Field>(
    x: &VecDiagram<F>,
    side: LimSide,
    legs: &[Matrix<F>],
    other: usize,
) -> Result<Matrix<F>> {
    if legs.len() != x.shape().object_count() {
        return Err(Error::ShapeMismatch("one leg per object is required".into()));
    }
    Presentation::new(x, side).universal(legs, other)
}

/// A Kan extension with the pointwise data used to build it.
#[derive(Clone, Debug)]
pub struct KanExtension<F: Field> {
    side: KanSide,
    u: FunctorData,
    input: VecDiagram<F>,
    output: VecDiagram<F>,
    /// Slice objects `(j, f)` at each `k`.
    objs: Vec<Vec<(usize, usize)>>,
    points: Vec<Presentation<F>>,
}

impl<F: Field> KanExtension<F> {
    /// Kan's formula: the value at `k` is the colimit over the slice over `k`
    /// (left) or the limit over the slice under `k` (right). Structure maps
    /// are induced by the maps between slices, and functoriality of the
    /// assembled diagram is re-verified.
    pub fn compute(u: &FunctorData, x: &VecDiagram<F>, side: KanSide) -> Result<Self> {
        if **u.source() != **x.shape() {
            return Err(Error::ShapeMismatch("Kan extension along a functor from another shape".into()));
        }
        let k = u.target();
        let (slice_side, lim_side) = match side {
            KanSide::Left => (Side::Over, LimSide::Colim),
            KanSide::Right => (Side::Under, LimSide::Lim),
        };
        let mut objs = Vec::with_capacity(k.object_count());
        let mut points = Vec::with_capacity(k.object_count());
        for c in 0..k.object_count() {
            let (_, proj) = slice(u, c, slice_side)?;
            objs.push(slice_objects(u, c, slice_side));
            points.push(Presentation::new(&x.restrict(&proj)?, lim_side));
        }
        let index: Vec<HashMap<(usize, usize), usize>> = objs
            .iter()
            .map(|o| o.iter().enumerate().map(|(i, &p)| (p, i)).collect())
            .collect();
        let dims: Vec<usize> = points.iter().map(Presentation::dim).collect();
        let mut maps = Vec::with_capacity(k.morphism_count());
        for g in 0..k.morphism_count() {
            let (a, b) = (k.src(g), k.tgt(g));
            let m = match side {
                // (j, f: u j → a) ↦ (j, g f) in the slice over b.
                KanSide::Left => {
                    let mut emb = Matrix::zeros(points[b].total(), points[a].total());
                    for (x_idx, &(j, f)) in objs[a].iter().enumerate() {
                        let y_idx = index[b][&(j, k.comp(g, f))];
                        emb.set_block(points[b].offsets[y_idx], points[a].offsets[x_idx], &Matrix::identity(x.dim(j)));
                    }
                    points[b].pres.mul(&emb).mul(&points[a].sect)
                }
                // (j, f: b → u j) ↦ (j, f g) in the slice under a.
                KanSide::Right => {
                    let mut sel = Matrix::zeros(points[b].total(), points[a].total());
                    for (y_idx, &(j, f)) in objs[b].iter().enumerate() {
                        let x_idx = index[a][&(j, k.comp(f, g))];
                        sel.set_block(points[b].offsets[y_idx], points[a].offsets[x_idx], &Matrix::identity(x.dim(j)));
                    }
                    points[b].sect.mul(&sel).mul(&points[a].pres)
                }
            };
            maps.push(m);
        }
        let output = VecDiagram::new(k.clone(), dims, maps)?;
        Ok(KanExtension { side, u: u.clone(), input: x.clone(), output, objs, points })
    }

    pub fn output(&self) -> &VecDiagram<F> {
        &self.output
    }

    pub fn into_output(self) -> VecDiagram<F> {
        self.output
    }

    /// `u_!(f)` or `u_*(f)` for `f: self.input → other.input`.
    pub fn apply(&self, other: &KanExtension<F>, f: &DiagramMorphism<F>) -> Result<DiagramMorphism<F>> {
        if self.side != other.side || self.u != other.u || *f.source() != self.input || *f.target() != other.input {
            return Err(Error::ShapeMismatch("morphism does not match the Kan extensions".into()));
        }
        let comps = (0..self.points.len())
            .map(|c| {
                let blocks: Vec<Matrix<F>> = self.objs[c].iter().map(|&(j, _)| f.component(j).clone()).collect();
                self.points[c].induced(&other.points[c], &blocks)
            })
            .collect();
        DiagramMorphism::new(self.output.clone(), other.output.clone(), comps)
    }

    /// Leg of the (co)limit at `k` for the slice object `(j, f)`.
    fn leg_at(&self, k: usize, j: usize, f: usize) -> Matrix<F> {
        let i = self.objs[k].iter().position(|&p| p == (j, f)).expect("slice object");
        self.points[k].leg(i)
    }
}

/// `u_! X` or `u_* X`.
pub fn kan<F: Field>(u: &FunctorData, x: &VecDiagram<F>, side: KanSide) -> Result<VecDiagram<F>> {
    Ok(KanExtension::compute(u, x, side)?.into_output())
}

/// `u_!(f)` or `u_*(f)`.
pub fn kan_morphism<F: Field>(u: &FunctorData, f: &DiagramMorphism<F>, side: KanSide) -> Result<DiagramMorphism<F>> {
    let a = KanExtension::compute(u, f.source(), side)?;
    let b = KanExtension::compute(u, f.target(), side)?;
    a.apply(&b, f)
}

/// Units and counits of `u_! ⊣ u*` and `u* ⊣ u_*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Adjunction {
    /// `η: X → u* u_! X` for `X` on the source.
    UnitLeft,
    /// `ε: u_! u* Y → Y` for `Y` on the target.
    CounitLeft,
    /// `η: Y → u_* u* Y` for `Y` on the target.
    UnitRight,
    /// `ε: u* u_* X → X` for `X` on the source.
    CounitRight,
}

pub fn unit_counit<F: Field>(u: &FunctorData, arg: &VecDiagram<F>, which: Adjunction) -> Result<DiagramMorphism<F>> {
    let k = u.target();
    let j = u.source();
    match which {
        Adjunction::UnitLeft | Adjunction::CounitRight => {
            let side = if which == Adjunction::UnitLeft { KanSide::Left } else { KanSide::Right };
            let ext = KanExtension::compute(u, arg, side)?;
            let back = ext.output.restrict(u)?;
            let comps: Vec<Matrix<F>> = (0..j.object_count())
                .map(|a| ext.leg_at(u.obj(a), a, k.identity(u.obj(a))))
                .collect();
            if which == Adjunction::UnitLeft {
                DiagramMorphism::new(arg.clone(), back, comps)
            } else {
                DiagramMorphism::new(back, arg.clone(), comps)
            }
        }
        Adjunction::CounitLeft | Adjunction::UnitRight => {
            let side = if which == Adjunction::CounitLeft { KanSide::Left } else { KanSide::Right };
            let ext = KanExtension::compute(u, &arg.restrict(u)?, side)?;
            let mut comps = Vec::with_capacity(k.object_count());
            for c in 0..k.object_count() {
                let legs: Vec<Matrix<F>> = ext.objs[c].iter().map(|&(_, f)| arg.map(f).clone()).collect();
                comps.push(ext.points[c].universal(&legs, arg.dim(c))?);
            }
            if which == Adjunction::CounitLeft {
                DiagramMorphism::new(ext.output, arg.clone(), comps)
            } else {
                DiagramMorphism::new(arg.clone(), ext.output, comps)
            }
        }
    }
}

/// Dimension of the space of diagram morphisms `X → Y`.
pub fn nat_dim<F: Field>(x: &VecDiagram<F>, y: &VecDiagram<F>) -> Result<usize> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch("nat_dim between diagrams on different shapes".into()));
    }
    let shape: &Arc<FinCategory> = x.shape();
    let mut offsets = Vec::with_capacity(shape.object_count());
    let mut unknowns = 0;
    for a in 0..shape.object_count() {
        offsets.push(unknowns);
        unknowns += y.dim(a) * x.dim(a);
    }
    // φ_a has entry (r, c) at offsets[a] + r * dim X_a + c.
    let var = |a: usize, r: usize, c: usize| offsets[a] + r * x.dim(a) + c;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for f in shape.non_identities() {
        let (a, b) = (shape.src(f), shape.tgt(f));
        let (yf, xf) = (y.map(f), x.map(f));
        // (Y_f φ_a − φ_b X_f)[r][c] = 0
        for r in 0..y.dim(b) {
            for c in 0..x.dim(a) {
                let mut row = vec![F::zero(); unknowns];
                for s in 0..y.dim(a) {
                    row[var(a, s, c)] = row[var(a, s, c)].add_ref(yf.get(r, s));
                }
                for t in 0..x.dim(b) {
                    row[var(b, r, t)] = row[var(b, r, t)].sub_ref(xf.get(t, c));
                }
                rows.push(row);
            }
        }
    }
    let n = rows.len();
    Ok(unknowns - Matrix::from_rows(rows, unknowns).rank().min(n))
}
