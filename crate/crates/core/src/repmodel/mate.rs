//! Mates of 2-cells in squares of shapes, evaluated on samples.

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::{CellDirection, NatTransData, SquareData};
use crate::verdict::Verdict;

use super::diagram::{DiagramMorphism, VecDiagram};
use super::kan::{kan_morphism, unit_counit, Adjunction, KanExtension, KanSide};

/// Evaluates the mate of the square's cell at `sample ∈ D(J2)`.
///
/// For a cell `u2 v ⇒ w u1` the left mate `u1_! v* → w* u2_!` is the pasting
/// `η` of `u2`, then the cell, then `ε` of `u1`. For a cell `w u1 ⇒ u2 v` the
/// right mate `w* u2_* → u1_* v*` is `η` of `u1`, then the cell, then `ε` of
/// `u2`.
pub fn mate<F: Field>(square: &SquareData, side: KanSide, sample: &VecDiagram<F>) -> Result<DiagramMorphism<F>> {
    if **square.u2.source() != **sample.shape() {
        return Err(Error::ShapeMismatch("sample does not live on the square's top right corner".into()));
    }
    match (side, square.direction) {
        (KanSide::Left, CellDirection::TowardWU1) => left_mate(square, sample),
        (KanSide::Right, CellDirection::TowardU2V) => right_mate(square, sample),
        _ => Err(Error::ShapeMismatch("the cell's orientation does not admit this mate".into())),
    }
}

fn left_mate<F: Field>(sq: &SquareData, y: &VecDiagram<F>) -> Result<DiagramMorphism<F>> {
    let z = KanExtension::compute(&sq.u2, y, KanSide::Left)?.into_output();
    let eta = unit_counit(&sq.u2, y, Adjunction::UnitLeft)?.restrict(&sq.v)?;
    let cell = z.whisker(&sq.cell)?;
    let inner = eta.then(&relabel(&cell, eta.target())?)?;
    let wz = z.restrict(&sq.w)?;
    let inner = retarget(&inner, &wz.restrict(&sq.u1)?)?;
    let pushed = kan_morphism(&sq.u1, &inner, KanSide::Left)?;
    let eps = unit_counit(&sq.u1, &wz, Adjunction::CounitLeft)?;
    pushed.then(&eps)
}

fn right_mate<F: Field>(sq: &SquareData, x: &VecDiagram<F>) -> Result<DiagramMorphism<F>> {
    let z = KanExtension::compute(&sq.u2, x, KanSide::Right)?.into_output();
    let wz = z.restrict(&sq.w)?;
    let eta = unit_counit(&sq.u1, &wz, Adjunction::UnitRight)?;
    let cell = relabel(&z.whisker(&sq.cell)?, &wz.restrict(&sq.u1)?)?;
    let eps = unit_counit(&sq.u2, x, Adjunction::CounitRight)?.restrict(&sq.v)?;
    let inner = cell.then(&relabel(&eps, cell.target())?)?;
    let pushed = kan_morphism(&sq.u1, &inner, KanSide::Right)?;
    eta.then(&pushed)
}

/// The same components over another copy of the source. Restricting along a
/// composite and restricting twice give equal diagrams; the components are
/// re-validated against the new copy.
fn relabel<F: Field>(m: &DiagramMorphism<F>, source: &VecDiagram<F>) -> Result<DiagramMorphism<F>> {
    if m.source() == source {
        return Ok(m.clone());
    }
    DiagramMorphism::new(source.clone(), m.target().clone(), m.components().to_vec())
}

fn retarget<F: Field>(m: &DiagramMorphism<F>, target: &VecDiagram<F>) -> Result<DiagramMorphism<F>> {
    if m.target() == target {
        return Ok(m.clone());
    }
    DiagramMorphism::new(m.source().clone(), target.clone(), m.components().to_vec())
}

/// Passes iff the mate is invertible at every object on every sample; a
/// failure names the sample, object and non-invertible component.
pub fn exact_square_verdict<F: Field>(name: &str, square: &SquareData, samples: &[VecDiagram<F>]) -> Result<Verdict> {
    let side = match square.direction {
        CellDirection::TowardWU1 => KanSide::Left,
        CellDirection::TowardU2V => KanSide::Right,
    };
    for (i, s) in samples.iter().enumerate() {
        let m = mate(square, side, s)?;
        if let Some(obj) = m.non_iso_component() {
            let c = m.component(obj);
            return Ok(Verdict::fail(
                name,
                json!({
                    "sample": i,
                    "object": square.u1.target().object(obj),
                    "matrix": c.to_text_rows(),
                    "shape": [c.rows(), c.cols()],
                    "rank": c.rank(),
                }),
            ));
        }
    }
    Ok(Verdict::pass(name))
}

/// Both sides of the inverse lemma at `z ∈ D(K2)` for a left-mate square:
/// the mate of the left mate, `v* u2* Z → u1* w* Z`, and the morphism `Z(α)`
/// given by the cell itself.
pub fn inverse_lemma_sides<F: Field>(
    sq: &SquareData,
    z: &VecDiagram<F>,
) -> Result<(DiagramMorphism<F>, DiagramMorphism<F>)> {
    if sq.direction != CellDirection::TowardWU1 {
        return Err(Error::ShapeMismatch("inverse lemma is stated for a left-mate square".into()));
    }
    let u2z = z.restrict(&sq.u2)?;
    let start = u2z.restrict(&sq.v)?;
    let eta = unit_counit(&sq.u1, &start, Adjunction::UnitLeft)?;
    let alpha = mate(sq, KanSide::Left, &u2z)?.restrict(&sq.u1)?;
    let eps = unit_counit(&sq.u2, z, Adjunction::CounitLeft)?.restrict(&sq.w)?.restrict(&sq.u1)?;
    let recovered = eta.then(&alpha)?.then(&relabel(&eps, alpha.target())?)?;
    let direct = z.whisker(&sq.cell)?;
    Ok((recovered, direct))
}

/// Horizontal pasting of `first` (left) and `second` (right), both with
/// cells of left-mate orientation and with `first.u2 = second.u1`.
pub fn paste_horizontal(first: &SquareData, second: &SquareData) -> Result<SquareData> {
    if first.u2 != second.u1 {
        return Err(Error::CompositionMismatch);
    }
    if first.direction != CellDirection::TowardWU1 || second.direction != CellDirection::TowardWU1 {
        return Err(Error::ShapeMismatch("pasting is implemented for left-mate squares".into()));
    }
    let v = first.v.then(&second.v)?;
    let w = first.w.then(&second.w)?;
    let k3 = second.u2.target();
    let comps = (0..first.u1.source().object_count())
        .map(|j| {
            let a2 = second.cell.component(first.v.obj(j));
            let a1 = second.w.mor(first.cell.component(j));
            k3.comp(a1, a2)
        })
        .collect();
    let cell = NatTransData::new(v.then(&second.u2)?, first.u1.then(&w)?, comps)?;
    SquareData::new(first.u1.clone(), second.u2.clone(), v, w, cell, CellDirection::TowardWU1)
}

/// Both sides of pasting compatibility at `y ∈ D(J3)`: the mate of the pasted
/// square, and `w1*(mate of second at y)` after `mate of first at v2* y`.
pub fn pasting_sides<F: Field>(
    first: &SquareData,
    second: &SquareData,
    y: &VecDiagram<F>,
) -> Result<(DiagramMorphism<F>, DiagramMorphism<F>)> {
    let pasted = paste_horizontal(first, second)?;
    let whole = mate(&pasted, KanSide::Left, y)?;
    let a1 = mate(first, KanSide::Left, &y.restrict(&second.v)?)?;
    let a2 = mate(second, KanSide::Left, y)?.restrict(&first.w)?;
    let composite = a1.then(&relabel(&a2, a1.target())?)?;
    Ok((whole, composite))
}
