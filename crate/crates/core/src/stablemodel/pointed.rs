//! Suspension, loops, cones, fibers and the exceptional functors.

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::shapes::{corner_pull, corner_push};
use crate::fincat::{poset_cylinder, Cylinder, MonotoneMap};
use crate::repmodel::KanSide;

use super::complex::{ChainMap, Complex};
use super::diagram::{ChainDiagram, ChainDiagramMorphism};
use super::hkan::{extend_by_zero, HKan};
use super::replacement::{HoSide, Replacement};

/// `X ← Y → Z` on `⌐` with `Y` at the corner, maps `f` (horizontal) and `g`.
pub fn span<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainDiagram<F>> {
    if f.source() != g.source() {
        return Err(Error::CompositionMismatch);
    }
    let (p, _) = corner_push();
    let values = vec![f.source().clone(), f.target().clone(), g.target().clone()];
    ChainDiagram::from_covers(p, values, vec![((0, 1), f.clone()), ((0, 2), g.clone())])
}

/// `X → Z ← Y` on `⌟`, `f` horizontal into the corner.
pub fn cospan<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainDiagram<F>> {
    if f.target() != g.target() {
        return Err(Error::CompositionMismatch);
    }
    let (p, _) = corner_pull();
    // Order of ⌟: (1,0), (0,1), (1,1).
    let values = vec![g.source().clone(), f.source().clone(), f.target().clone()];
    ChainDiagram::from_covers(p, values, vec![((0, 2), g.clone()), ((1, 2), f.clone())])
}

/// `0 ← X → 0`, whose homotopy pushout is `ΣX`.
pub fn suspension_span<F: Field>(x: &Complex<F>) -> ChainDiagram<F> {
    let zero = ChainMap::zero(x, &Complex::zero());
    span(&zero, &zero).expect("span of zero maps")
}

/// `0 → X ← 0`, whose homotopy pullback is `ΩX`.
pub fn loop_cospan<F: Field>(x: &Complex<F>) -> ChainDiagram<F> {
    let zero = ChainMap::zero(&Complex::zero(), x);
    cospan(&zero, &zero).expect("cospan of zero maps")
}

/// The replacement computing `ΣX`: the homotopy pushout of `0 ← X → 0`,
/// which is the value at `(1,1)` of its Kan extension to the square.
pub fn suspension_replacement<F: Field>(x: &Complex<F>) -> Replacement<F> {
    Replacement::new(&suspension_span(x), HoSide::Colim)
}

pub fn suspension<F: Field>(x: &Complex<F>) -> Complex<F> {
    suspension_replacement(x).tot().clone()
}

/// `Σf: ΣX → ΣY`.
pub fn suspension_map<F: Field>(f: &ChainMap<F>) -> Result<ChainMap<F>> {
    let a = suspension_replacement(f.source());
    let b = suspension_replacement(f.target());
    let zero = Complex::zero();
    let comps = vec![f.clone(), ChainMap::identity(&zero), ChainMap::identity(&zero)];
    let m = ChainDiagramMorphism::new(a.diagram().clone(), b.diagram().clone(), comps)?;
    a.morphism(&b, &m)
}

pub fn loop_replacement<F: Field>(x: &Complex<F>) -> Replacement<F> {
    Replacement::new(&loop_cospan(x), HoSide::Lim)
}

/// `ΩX`, the homotopy pullback of `0 → X ← 0`.
pub fn loop_space<F: Field>(x: &Complex<F>) -> Complex<F> {
    loop_replacement(x).tot().clone()
}

/// `Ωf: ΩX → ΩY`.
pub fn loop_map<F: Field>(f: &ChainMap<F>) -> Result<ChainMap<F>> {
    let a = loop_replacement(f.source());
    let b = loop_replacement(f.target());
    let zero = Complex::zero();
    let comps = vec![ChainMap::identity(&zero), ChainMap::identity(&zero), f.clone()];
    let m = ChainDiagramMorphism::new(a.diagram().clone(), b.diagram().clone(), comps)?;
    a.morphism(&b, &m)
}

/// The cone `C(f)`: the homotopy pushout of `Y ← X → 0`, with the replacement
/// it is computed from.
pub fn cone_replacement<F: Field>(f: &ChainMap<F>) -> Result<Replacement<F>> {
    let zero = ChainMap::zero(f.source(), &Complex::zero());
    Ok(Replacement::new(&span(f, &zero)?, HoSide::Colim))
}

/// `C(f)` with the canonical map `Y → C(f)`.
pub fn cone<F: Field>(f: &ChainMap<F>) -> Result<(Complex<F>, ChainMap<F>)> {
    let r = cone_replacement(f)?;
    Ok((r.tot().clone(), r.insertion(1)))
}

/// The fiber: the homotopy pullback of `X → Y ← 0`.
pub fn fiber_replacement<F: Field>(f: &ChainMap<F>) -> Result<Replacement<F>> {
    let zero = ChainMap::zero(&Complex::zero(), f.target());
    Ok(Replacement::new(&cospan(&zero, f)?, HoSide::Lim))
}

/// `F(f)` with the canonical map `F(f) → X`.
pub fn fiber<F: Field>(f: &ChainMap<F>) -> Result<(Complex<F>, ChainMap<F>)> {
    let r = fiber_replacement(f)?;
    Ok((r.tot().clone(), r.projection(0)))
}

/// Which exceptional functor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Exceptional {
    /// `u^?`, left adjoint to extension by zero along a cosieve `u`.
    LeftExceptional,
    /// `u^!`, right adjoint to extension by zero along a sieve `u`.
    RightCoexceptional,
}

/// The exceptional functor through the mapping cylinder of the complement.
///
/// For a cosieve `u` with complementary sieve `v`: `u^? = u* q_! s_*`, where
/// `s: K → cyl(v)` is the end at `0` and `q` the projection. For a sieve `u`
/// with complementary cosieve `w`: `u^! = u* q'_* s'_!` over `cyl'(w)`.
pub fn exceptional<F: Field>(u: &MonotoneMap, x: &ChainDiagram<F>, kind: Exceptional) -> Result<ChainDiagram<F>> {
    exceptional_kan(u, x, kind)?.output().restrict(u)
}

/// The Kan extension along the cylinder projection whose restriction along
/// `u` is the exceptional functor; its values carry the replacements that
/// comparison maps are built from.
pub(crate) fn exceptional_kan<F: Field>(u: &MonotoneMap, x: &ChainDiagram<F>, kind: Exceptional) -> Result<HKan<F>> {
    let status = u.sieve_status();
    let (which, ext_side, kan_side) = match kind {
        Exceptional::LeftExceptional if status.is_cosieve() => (Cylinder::Cyl, KanSide::Right, KanSide::Left),
        Exceptional::LeftExceptional => return Err(Error::NotACosieve),
        Exceptional::RightCoexceptional if status.is_sieve() => (Cylinder::CylPrime, KanSide::Left, KanSide::Right),
        Exceptional::RightCoexceptional => return Err(Error::NotASieve),
    };
    if *u.target() != *x.shape() {
        return Err(Error::ShapeMismatch("diagram does not live on the map's target".into()));
    }
    let (_, complement) = u.complement();
    let cyl = poset_cylinder(&complement, which)?;
    let pushed = extend_by_zero(&cyl.s, x, ext_side)?;
    HKan::compute(&cyl.q, &pushed, kan_side)
}
