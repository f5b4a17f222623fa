//! Squares of shapes whose exactness is a standard result.

use crate::error::{Error, Result};

use super::category::{comma, pullback, slice, slice_objects, CellDirection, FunctorData, NatTransData, SquareData};
use super::poset::Side;

/// The square of Kan's formula at `k`.
///
/// Over (`Side::Over`): `J_{/k} → J` over `e → K`, with cell `u ∘ pr ⇒ k ∘ p`
/// given by `f: u(j) → k`; its left mate is the comparison
/// `colim_{J_{/k}} pr* X → (u_! X)_k`. Under: the dual, with a right mate.
pub fn kan_formula_square(u: &FunctorData, k: usize, side: Side) -> Result<SquareData> {
    let (sl, pr) = slice(u, k, side)?;
    let objs = slice_objects(u, k, side);
    let p = FunctorData::to_terminal(&sl);
    let kk = FunctorData::point(u.target(), k);
    let top = pr.then(u)?;
    let bottom = p.then(&kk)?;
    let comps = objs.iter().map(|&(_, f)| f).collect();
    let (cell, direction) = match side {
        Side::Over => (NatTransData::new(top, bottom, comps)?, CellDirection::TowardWU1),
        Side::Under => (NatTransData::new(bottom, top, comps)?, CellDirection::TowardU2V),
    };
    SquareData::new(p, u.clone(), pr, kk, cell, direction)
}

/// The comma square of `u1: J1 → K` and `u2: J2 → K`:
///
/// ```text
/// (u1/u2) --pr2--> J2
///   |pr1           |u2
///   J1 ----u1----> K
/// ```
///
/// with cell `u1 ∘ pr1 ⇒ u2 ∘ pr2`, so it carries a right mate
/// `u1* u2_* → pr1_* pr2*`. Its transpose carries the left mate.
pub fn comma_square(u1: &FunctorData, u2: &FunctorData) -> Result<SquareData> {
    let c = comma(u1, u2)?;
    SquareData::new(c.pr1, u2.clone(), c.pr2, u1.clone(), c.cell, CellDirection::TowardU2V)
}

/// The square `J --r--> K` over `e = e` with the identity cell; exact with
/// respect to colimits whenever `r` is a right adjoint.
pub fn cofinality_square(r: &FunctorData) -> Result<SquareData> {
    let p_j = FunctorData::to_terminal(r.source());
    let p_k = FunctorData::to_terminal(r.target());
    let id_e = FunctorData::identity(p_k.target());
    SquareData::commutative(p_j, p_k, r.clone(), id_e, CellDirection::TowardWU1)
}

/// The strict pullback of `w: K1 → K2` along `u2: J2 → K2`, filled by the
/// identity. With `TowardU2V` the right mate is invertible when `u2` is a
/// fibration or `w` an opfibration; with `TowardWU1` the left mate is
/// invertible when `u2` is an opfibration or `w` a fibration.
pub fn pullback_square(w: &FunctorData, u2: &FunctorData, direction: CellDirection) -> Result<SquareData> {
    let (_, u1, v) = pullback(w, u2)?;
    SquareData::commutative(u1, u2.clone(), v, w.clone(), direction)
}

/// The square with identity legs on `u`'s source and target.
pub fn identity_square(u: &FunctorData) -> Result<SquareData> {
    let id_j = FunctorData::identity(u.source());
    let id_k = FunctorData::identity(u.target());
    SquareData::commutative(u.clone(), u.clone(), id_j, id_k, CellDirection::TowardWU1)
}

/// A commutative square that is not exact: `e --0--> [1]` over `e = e`.
/// Its left mate at `X` is the map `X_0 → X_1`, which need not be invertible.
pub fn non_exact_square(interval: &std::sync::Arc<super::FinCategory>) -> Result<SquareData> {
    if interval.object_count() != 2 || interval.hom(0, 1).len() != 1 {
        return Err(Error::BadParams("expected the category [1]".into()));
    }
    let v = FunctorData::point(interval, 0);
    let u1 = FunctorData::identity(v.source());
    let u2 = FunctorData::to_terminal(interval);
    let w = FunctorData::identity(u2.target());
    SquareData::commutative(u1, u2, v, w, CellDirection::TowardWU1)
}
