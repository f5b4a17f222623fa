//! Biproducts and the loop-space calculus behind additivity.

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::shapes::{at, named_shape, pull, pull_map};
use crate::fincat::MonotoneMap;
use crate::repmodel::KanSide;

use super::complex::{ChainMap, Complex, Zigzag};
use super::diagram::ChainDiagram;
use super::hkan::{extend_by_zero, HKan};
use super::replacement::{HoSide, Replacement};
use super::triangulated::{squares, NamedSquare, Witness};

/// The output of the biproduct construction.
#[derive(Clone, Debug)]
pub struct Biproduct<F: Field> {
    /// `Q` on `[2] × [2]`.
    pub diagram: ChainDiagram<F>,
    pub squares: Vec<NamedSquare>,
    /// `Q` at `(1,1)`.
    pub b: Complex<F>,
    /// `X ≃ X'`, `Y ≃ Y'` and `X ⊕ Y ≃ B`.
    pub witnesses: Vec<Witness<F>>,
    /// Whether `Q` at `(2,2)` is acyclic.
    pub z_acyclic: bool,
}

impl<F: Field> Biproduct<F> {
    pub fn holds(&self) -> bool {
        self.squares.iter().all(|s| s.status.bicartesian()) && self.witnesses.iter().all(Witness::holds) && self.z_acyclic
    }
}

/// The map `X ⊕ Y → W` with the given components.
fn copair<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainMap<F>> {
    if f.target() != g.target() {
        return Err(Error::CompositionMismatch);
    }
    let sum = f.source().direct_sum(g.source());
    ChainMap::from_fn(sum, f.target().clone(), |n| f.comp(n).hstack(&g.comp(n)))
}

/// `W → X ⊕ Y` with the given components.
fn pair<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainMap<F>> {
    if f.source() != g.source() {
        return Err(Error::CompositionMismatch);
    }
    let sum = f.target().direct_sum(g.target());
    ChainMap::from_fn(f.source().clone(), sum, |n| f.comp(n).vstack(&g.comp(n)))
}

/// `Q = j3_! j2_! j1_*(X, Y)`: `X` and `Y` at `(1,0)` and `(0,1)`, zero at
/// the other points of `L2`, zero at `(0,0)`, then Kan extended to the
/// full grid.
pub fn biproduct<F: Field>(x: &Complex<F>, y: &Complex<F>) -> Result<Biproduct<F>> {
    let l = named_shape("biproduct_L", None)?;
    let pair_shape = l.map("j1").source().clone();
    let two = ChainDiagram::from_covers(pair_shape, vec![x.clone(), y.clone()], vec![])?;
    let on_l2 = extend_by_zero(l.map("j1"), &two, KanSide::Right)?;
    let on_l3 = extend_by_zero(l.map("j2"), &on_l2, KanSide::Left)?;
    let j3 = l.map("j3");
    let hk = HKan::compute(j3, &on_l3, KanSide::Left)?;
    let q = hk.output().clone();
    let p = |pt: (usize, usize)| at(q.shape(), pt);
    let sq = squares(
        &q,
        &[
            ("00-11", [(0, 0), (1, 0), (0, 1), (1, 1)]),
            ("10-21", [(1, 0), (2, 0), (1, 1), (2, 1)]),
            ("01-12", [(0, 1), (1, 1), (0, 2), (1, 2)]),
            ("11-22", [(1, 1), (2, 1), (1, 2), (2, 2)]),
        ],
    )?;
    let l3 = j3.source();
    let insert = |k: (usize, usize), from: (usize, usize)| -> ChainMap<F> {
        let j = at(l3, from);
        let pos = hk.slice_elements(p(k)).iter().position(|&e| e == j).expect("point in slice");
        hk.replacement(p(k)).insertion(pos)
    };
    let into_b = copair(&insert((1, 1), (1, 0)), &insert((1, 1), (0, 1)))?;
    Ok(Biproduct {
        b: q.value(p((1, 1))).clone(),
        z_acyclic: q.value(p((2, 2))).is_acyclic(),
        witnesses: vec![
            Witness::new("X ≃ X'", Zigzag::forward(insert((1, 2), (1, 0)))),
            Witness::new("Y ≃ Y'", Zigzag::forward(insert((2, 1), (0, 1)))),
            Witness::new("X ⊕ Y ≃ B", Zigzag::forward(into_b)),
        ],
        diagram: q,
        squares: sq,
    })
}

/// The replacement computing `P_n X`: the homotopy limit over `pull_n` of
/// `X` at `t` and zero at `e_0, …, e_n`.
pub fn path_replacement<F: Field>(x: &Complex<F>, n: usize) -> Result<Replacement<F>> {
    if n < 1 {
        return Err(Error::BadParams("P_n needs n >= 1".into()));
    }
    let p = pull(n);
    let t = MonotoneMap::point(&p, n + 1);
    let e = extend_by_zero(&t, &ChainDiagram::point(x), KanSide::Left)?;
    Ok(Replacement::new(&e, HoSide::Lim))
}

/// `P_n X`. `P_1 X` is the loop object `ΩX` used throughout this module.
pub fn path_object<F: Field>(x: &Complex<F>, n: usize) -> Result<Complex<F>> {
    Ok(path_replacement(x, n)?.tot().clone())
}

/// `(k-1, k)*: P_n X → P_1 X` for `k = 1..=n`.
pub fn segal_components<F: Field>(x: &Complex<F>, n: usize) -> Result<Vec<ChainMap<F>>> {
    let big = path_replacement(x, n)?;
    let small = path_replacement(x, 1)?;
    (1..=n).map(|k| big.along(&small, &pull_map(&[k - 1, k], n)?)).collect()
}

/// The Segal map `P_n X → (ΩX)^n`, stacking the components.
pub fn segal<F: Field>(x: &Complex<F>, n: usize) -> Result<ChainMap<F>> {
    let comps = segal_components(x, n)?;
    let mut it = comps.into_iter();
    let first = it.next().expect("n >= 1");
    it.try_fold(first, |acc, c| pair(&acc, &c))
}

/// `σ*: ΩX → ΩX` induced by swapping `e_0` and `e_1`.
pub fn invert<F: Field>(x: &Complex<F>) -> Result<ChainMap<F>> {
    let r = path_replacement(x, 1)?;
    r.along(&r, &pull_map(&[1, 0], 1)?)
}

/// The pairing `H_d(ΩX) × H_d(ΩX) → H_d(ΩX)`: `(0,2)*` after the inverse of
/// the Segal isomorphism for `n = 2`. The columns of `a` and `b` are
/// classes in the homology basis of `ΩX`.
pub fn concat<F: Field>(x: &Complex<F>, deg: i32, a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    let segal_h = segal_components(x, 2)?
        .iter()
        .map(|c| c.homology_map(deg))
        .reduce(|acc, m| acc.vstack(&m))
        .expect("two components");
    let inv = segal_h
        .inverse()
        .ok_or_else(|| Error::Invariant(format!("Segal map is not invertible in degree {deg}")))?;
    let outer = path_replacement(x, 2)?.along(&path_replacement(x, 1)?, &pull_map(&[0, 2], 2)?)?;
    if a.shape() != b.shape() || a.rows() != segal_h.rows() / 2 {
        return Err(Error::ShapeMismatch("classes do not live in the homology of ΩX".into()));
    }
    Ok(outer.homology_map(deg).mul(&inv).mul(&a.vstack(b)))
}
