//! The two gluing triangles of a sieve and its complementary cosieve.
//!
//! For a sieve `j: U → K` with complement `i: Z → K`, every `X` on `K` sits
//! in `i_! i* X → X → j_* j* X → Σ` and `j_* j^! X → X → i_* i* X → Σ`. Both
//! are checked levelwise: the first two maps are realized by canonical chain
//! maps, the triangle on them is built by `T(f)`, and its third vertex is
//! identified with the expected Kan extension by explicit quasi-isomorphisms.

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::{poset_cylinder, Cylinder, MonotoneMap};
use crate::repmodel::KanSide;

use super::complex::{ChainMap, Complex, Zigzag};
use super::diagram::{ChainDiagram, ChainDiagramMorphism};
use super::hkan::{extend_by_zero, hkan_morphism, HKan};
use super::pointed::cone_replacement;
use super::triangulated::{triangle, TriangleConstruction, Witness};

/// One gluing triangle at one element of `K`.
#[derive(Clone, Debug)]
pub struct GluingLevel<F: Field> {
    pub element: usize,
    pub construction: TriangleConstruction<F>,
    /// The vertices of the triangle against the functors they stand for.
    pub identifications: Vec<Witness<F>>,
}

impl<F: Field> GluingLevel<F> {
    pub fn holds(&self) -> Result<bool> {
        let c = &self.construction;
        Ok(c.all_bicartesian()
            && c.witnesses.iter().all(Witness::holds)
            && self.identifications.iter().all(Witness::holds)
            && c.triangle.les_defects()?.is_empty())
    }
}

#[derive(Clone, Debug)]
pub struct Recollement<F: Field> {
    pub sieve: MonotoneMap,
    pub cosieve: MonotoneMap,
    /// `i_! i* X → X → j_* j* X → Σ`, one level per element.
    pub open_closed: Vec<GluingLevel<F>>,
    /// `j_* j^! X → X → i_* i* X → Σ`, one level per element.
    pub closed_open: Vec<GluingLevel<F>>,
}

impl<F: Field> Recollement<F> {
    pub fn holds(&self) -> Result<bool> {
        for level in self.open_closed.iter().chain(&self.closed_open) {
            if !level.holds()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `cone(f) → W` with legs `0`, `g` and `0`; needs `g∘f = 0` exactly.
fn cone_to<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainMap<F>> {
    let w = g.target();
    let legs = [ChainMap::zero(f.source(), w), g.clone(), ChainMap::zero(&Complex::zero(), w)];
    cone_replacement(f)?.augmentation(w, &legs)
}

/// The third vertex of `T(f)` against `W`, through `cone(f)`.
fn third_vertex<F: Field>(t: &TriangleConstruction<F>, to_w: Zigzag<F>) -> Result<Zigzag<F>> {
    let cone_witness = &t.witnesses[1].zigzag;
    cone_witness.reversed().then(to_w)
}

pub fn recollement<F: Field>(j: &MonotoneMap, x: &ChainDiagram<F>) -> Result<Recollement<F>> {
    if !j.sieve_status().is_sieve() {
        return Err(Error::NotASieve);
    }
    if *j.target() != *x.shape() {
        return Err(Error::ShapeMismatch("diagram does not live on the sieve's target".into()));
    }
    let (_, i) = j.complement();
    let n = x.shape().len();

    // i_! i* X → X → j_* j* X. Off Z the source is zero, on Z the target is,
    // so the composite vanishes exactly.
    let left = HKan::compute(&i, &x.restrict(&i)?, KanSide::Left)?;
    let eps = left.augmentation_to(x)?;
    let right = HKan::compute(j, &x.restrict(j)?, KanSide::Right)?;
    let eta = right.coaugmentation_from(x)?;
    let open_closed = (0..n)
        .map(|k| {
            let (e, h) = (eps.component(k), eta.component(k));
            let t = triangle(e)?;
            let third = third_vertex(&t, Zigzag::forward(cone_to(e, h)?))?;
            Ok(GluingLevel { element: k, construction: t, identifications: vec![Witness::new("C ≃ j_* j* X", third)] })
        })
        .collect::<Result<Vec<_>>>()?;

    // j_* j^! X is q'_* s'_! X over the cylinder cyl'(i); it maps to
    // q'_* q'* X ≃ X with cofiber q'_* N, N being X on the copy of Z.
    let cyl = poset_cylinder(&i, Cylinder::CylPrime)?;
    let nz = i.source().len();
    let y = extend_by_zero(&cyl.s, x, KanSide::Left)?;
    let qx = x.restrict(&cyl.q)?;
    let nvals: Vec<Complex<F>> =
        (0..cyl.poset.len()).map(|c| if c < nz { qx.value(c).clone() } else { Complex::zero() }).collect();
    let nv = nvals.clone();
    let quotient = ChainDiagram::from_relations(cyl.poset.clone(), nvals, |a, b| {
        Ok(if b < nz { qx.map(a, b).clone() } else { ChainMap::zero(&nv[a], &nv[b]) })
    })?;
    let m = ChainDiagramMorphism::new(
        y.clone(),
        qx.clone(),
        (0..cyl.poset.len())
            .map(|c| if c < nz { ChainMap::zero(y.value(c), qx.value(c)) } else { ChainMap::identity(qx.value(c)) })
            .collect(),
    )?;
    let p = ChainDiagramMorphism::new(
        qx.clone(),
        quotient.clone(),
        (0..cyl.poset.len())
            .map(|c| if c < nz { ChainMap::identity(qx.value(c)) } else { ChainMap::zero(qx.value(c), quotient.value(c)) })
            .collect(),
    )?;
    let hg = HKan::compute(&cyl.q, &y, KanSide::Right)?;
    let hh = HKan::compute(&cyl.q, &qx, KanSide::Right)?;
    let hn = HKan::compute(&cyl.q, &quotient, KanSide::Right)?;
    let gm = hkan_morphism(&hg, &hh, &m)?;
    let pn = hkan_morphism(&hh, &hn, &p)?;
    let unit = hh.coaugmentation_from(x)?;
    let closed = HKan::compute(&i, &x.restrict(&i)?, KanSide::Right)?;
    let closed_open = (0..n)
        .map(|k| {
            let g = gm.component(k);
            let t = triangle(g)?;
            // The copy of Z sits at the start of the cylinder, so z ↦ z.
            let phi = MonotoneMap::new(
                closed.replacement(k).diagram().shape().clone(),
                hn.replacement(k).diagram().shape().clone(),
                closed
                    .slice_elements(k)
                    .iter()
                    .map(|z| hn.slice_elements(k).iter().position(|c| c == z).expect("copy of Z in slice"))
                    .collect(),
            )?;
            let to_closed = hn.replacement(k).along(closed.replacement(k), &phi)?;
            let third = third_vertex(&t, Zigzag::forward(cone_to(g, pn.component(k))?).then(Zigzag::forward(to_closed))?)?;
            let mut ids = vec![
                Witness::new("X ≃ q'_* q'* X", Zigzag::forward(unit.component(k).clone())),
                Witness::new("C ≃ i_* i* X", third),
            ];
            if !j.as_slice().contains(&k) {
                let g_src = g.source();
                ids.push(Witness::new("j_* j^! X vanishes on Z", Zigzag::forward(ChainMap::zero(g_src, &Complex::zero()))));
            }
            Ok(GluingLevel { element: k, construction: t, identifications: ids })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Recollement { sieve: j.clone(), cosieve: i, open_closed, closed_open })
}
