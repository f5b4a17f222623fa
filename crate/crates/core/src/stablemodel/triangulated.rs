//! Distinguished triangles, rotation and the octahedron, extracted from
//! homotopy Kan extensions of extensions by zero.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::shapes::{at, corner_push, named_shape};
use crate::fincat::{FinPoset, MonotoneMap};
use crate::repmodel::KanSide;

use super::complex::{ChainMap, Complex, Zigzag};
use super::diagram::{ChainDiagram, ChainDiagramMorphism};
use super::hkan::{cocartesian_status, extend_by_zero, square_at, HKan, SquareStatus};
use super::pointed::{cone_replacement, suspension, suspension_map, suspension_replacement, suspension_span};
use super::replacement::{HoSide, Replacement};

/// `X --f--> Y --g--> C --h--> SX` together with a witness `ΣX ⇝ SX`.
#[derive(Clone, Debug)]
pub struct Triangle<F: Field> {
    /// Which construction produced the triangle.
    pub provenance: String,
    pub x: Complex<F>,
    pub y: Complex<F>,
    pub c: Complex<F>,
    pub sx: Complex<F>,
    pub f: ChainMap<F>,
    pub g: ChainMap<F>,
    pub h: ChainMap<F>,
    /// Identifies the last vertex with the suspension of the first.
    pub shift: Zigzag<F>,
}

/// A failed joint of the long exact homology sequence.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LesDefect {
    /// The middle term: `Y`, `C` or `SX`.
    pub joint: String,
    pub degree: i32,
    pub composite_zero: bool,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim: usize,
}

impl<F: Field> Triangle<F> {
    pub fn new(
        provenance: impl Into<String>,
        f: ChainMap<F>,
        g: ChainMap<F>,
        h: ChainMap<F>,
        shift: Zigzag<F>,
    ) -> Result<Self> {
        if f.target() != g.source() || g.target() != h.source() {
            return Err(Error::CompositionMismatch);
        }
        if *shift.source() != suspension(f.source()) || shift.target() != h.target() {
            return Err(Error::ShapeMismatch("shift witness must run from ΣX to the last vertex".into()));
        }
        Ok(Triangle {
            provenance: provenance.into(),
            x: f.source().clone(),
            y: f.target().clone(),
            c: g.target().clone(),
            sx: h.target().clone(),
            f,
            g,
            h,
            shift,
        })
    }

    /// Joints of `… → H_n X → H_n Y → H_n C → H_n SX → H_n ΣY → …` that fail
    /// exactness. The map `H_n SX → H_n ΣY` is `H(Σf)` after the inverse of
    /// the shift witness; the remaining joints are shifts of these three.
    pub fn les_defects(&self) -> Result<Vec<LesDefect>> {
        let sigma_f = suspension_map(&self.f)?;
        let mut degrees: Vec<i32> = Vec::new();
        for c in [&self.y, &self.c, &self.sx] {
            degrees.extend(c.homology_dims().0.keys());
        }
        degrees.sort_unstable();
        degrees.dedup();
        let mut out = Vec::new();
        for n in degrees {
            let back = self
                .shift
                .homology_map(n)
                .ok_or_else(|| Error::Invariant(format!("shift witness is not invertible in degree {n}")))?
                .inverse()
                .ok_or_else(|| Error::Invariant(format!("shift witness is not invertible in degree {n}")))?;
            let joints = [
                ("Y", self.f.homology_map(n), self.g.homology_map(n), self.y.homology().dim(n)),
                ("C", self.g.homology_map(n), self.h.homology_map(n), self.c.homology().dim(n)),
                ("SX", self.h.homology_map(n), sigma_f.homology_map(n).mul(&back), self.sx.homology().dim(n)),
            ];
            for (joint, a, b, dim) in joints {
                let composite_zero = b.mul(&a).is_zero();
                let (rank_in, rank_out) = (a.rank(), b.rank());
                if !composite_zero || rank_in + rank_out != dim {
                    out.push(LesDefect { joint: joint.into(), degree: n, composite_zero, rank_in, rank_out, dim });
                }
            }
        }
        Ok(out)
    }
}

/// A named identification, to be checked as a quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct Witness<F: Field> {
    pub name: String,
    pub zigzag: Zigzag<F>,
}

impl<F: Field> Witness<F> {
    pub(crate) fn new(name: &str, zigzag: Zigzag<F>) -> Self {
        Witness { name: name.into(), zigzag }
    }

    pub fn holds(&self) -> bool {
        self.zigzag.is_quasi_iso()
    }
}

/// Status of a named square of a construction.
#[derive(Clone, Debug, Serialize)]
pub struct NamedSquare {
    pub name: String,
    pub status: SquareStatus,
}

/// Map from a replacement over `P` into the value at `k` of a left Kan
/// extension, along `φ: P → J` landing in the slice over `k`.
///
/// Fails unless the replacement's diagram is literally the restriction of the
/// extension's input along `φ`.
pub(crate) fn into_value<F: Field>(hk: &HKan<F>, k: usize, rep: &Replacement<F>, phi: &[usize]) -> Result<ChainMap<F>> {
    let phi = slice_map(hk, k, rep, phi)?;
    rep.along(hk.replacement(k), &phi)
}

/// The dual of [`into_value`] for a right Kan extension: the map from the
/// value at `k` to a replacement over `P`, along `φ` into the slice under `k`.
pub(crate) fn from_value<F: Field>(hk: &HKan<F>, k: usize, rep: &Replacement<F>, phi: &[usize]) -> Result<ChainMap<F>> {
    let phi = slice_map(hk, k, rep, phi)?;
    hk.replacement(k).along(rep, &phi)
}

fn slice_map<F: Field>(hk: &HKan<F>, k: usize, rep: &Replacement<F>, phi: &[usize]) -> Result<MonotoneMap> {
    let target = hk.replacement(k);
    let elems = hk.slice_elements(k);
    let map = phi
        .iter()
        .map(|j| elems.iter().position(|y| y == j).ok_or_else(|| Error::Invariant("image leaves the slice".into())))
        .collect::<Result<Vec<_>>>()?;
    let phi = MonotoneMap::new(rep.diagram().shape().clone(), target.diagram().shape().clone(), map)?;
    if *rep.diagram() != target.diagram().restrict(&phi)? {
        return Err(Error::Invariant("diagram is not the restriction along the given map".into()));
    }
    Ok(phi)
}

/// `ΣD_a ⇝ D_d` for a square `a → b, a → c, → d` of `D` whose corners `b`
/// and `c` are acyclic: `ΣD_a ← hocolim_⌐(D|⌐) → D_d`, the first leg induced
/// by `D|⌐ → (D_a ← … → 0)`, the second by the cocone of the square.
pub fn suspension_zigzag<F: Field>(d: &ChainDiagram<F>, corners: [usize; 4]) -> Result<Zigzag<F>> {
    let [a, b, c, top] = corners;
    let (p, _) = corner_push();
    let psi = MonotoneMap::new(p, d.shape().clone(), vec![a, b, c])?;
    let corner = d.restrict(&psi)?;
    let mid = Replacement::new(&corner, HoSide::Colim);
    let sigma = suspension_replacement(d.value(a));
    let comps = vec![
        ChainMap::identity(d.value(a)),
        ChainMap::zero(d.value(b), &Complex::zero()),
        ChainMap::zero(d.value(c), &Complex::zero()),
    ];
    let collapse = ChainDiagramMorphism::new(corner, suspension_span(d.value(a)), comps)?;
    let back = mid.morphism(&sigma, &collapse)?;
    let legs: Vec<ChainMap<F>> = [a, b, c].iter().map(|&x| d.map(x, top).clone()).collect();
    let forth = mid.augmentation(d.value(top), &legs)?;
    Zigzag::backward(back).then(Zigzag::forward(forth))
}

/// `F` on `J` extended by zero along the sieve `i`, then Kan extended along `j`.
fn build<F: Field>(small: &ChainDiagram<F>, i: &MonotoneMap, j: &MonotoneMap) -> Result<HKan<F>> {
    let e = extend_by_zero(i, small, KanSide::Right)?;
    HKan::compute(j, &e, KanSide::Left)
}

pub(crate) fn squares<F: Field>(d: &ChainDiagram<F>, list: &[(&str, [(usize, usize); 4])]) -> Result<Vec<NamedSquare>> {
    let shape = d.shape();
    list.iter()
        .map(|(name, pts)| {
            let corners = pts.map(|p| at(shape, p));
            Ok(NamedSquare { name: name.to_string(), status: cocartesian_status(&square_at(d, corners)?)? })
        })
        .collect()
}

fn grid_name((i, j): (usize, usize)) -> String {
    format!("{i},{j}")
}

fn pts(shape: &FinPoset, list: &[(usize, usize)]) -> Vec<usize> {
    list.iter().map(|&p| at(shape, p)).collect()
}

/// The output of the construction `T(f)`.
#[derive(Clone, Debug)]
pub struct TriangleConstruction<F: Field> {
    /// `T(f)` on `[2] × [1]`.
    pub diagram: ChainDiagram<F>,
    pub squares: Vec<NamedSquare>,
    pub triangle: Triangle<F>,
    /// `Y' ≃ Y`, `C(f) ≃ C` and `ΣX ≃ SX`.
    pub witnesses: Vec<Witness<F>>,
}

impl<F: Field> TriangleConstruction<F> {
    pub fn all_bicartesian(&self) -> bool {
        self.squares.iter().all(|s| s.status.bicartesian())
    }
}

/// `T(f) = i1_! i0_*(f)` on `[2] × [1]` and the triangle along
/// `(0,0) → (1,0) → (1,1) → (2,1)`.
pub fn triangle<F: Field>(f: &ChainMap<F>) -> Result<TriangleConstruction<F>> {
    let shape = named_shape("T_shape", None)?;
    let hk = build(&lift_morphism(f), shape.map("i0"), shape.map("i1"))?;
    let t = hk.output().clone();
    let k_t = shape.map("i1").source().clone();
    let p = |q: (usize, usize)| at(t.shape(), q);
    let [x, y, c, s] = [(0, 0), (1, 0), (1, 1), (2, 1)].map(p);
    if t.value(x) != f.source() {
        return Err(Error::Invariant("T(f) does not start at the source of f".into()));
    }
    let sq = squares(
        &t,
        &[
            ("left", [(0, 0), (1, 0), (0, 1), (1, 1)]),
            ("right", [(1, 0), (2, 0), (1, 1), (2, 1)]),
            ("composite", [(0, 0), (2, 0), (0, 1), (2, 1)]),
        ],
    )?;
    let aug_legs = vec![f.clone(), ChainMap::identity(f.target())];
    let y_aug = hk.replacement(y).augmentation(f.target(), &aug_legs)?;
    let cone_map = into_value(&hk, c, &cone_replacement(f)?, &pts(&k_t, &[(0, 0), (1, 0), (0, 1)]))?;
    let shift = into_value(&hk, s, &suspension_replacement(f.source()), &pts(&k_t, &[(0, 0), (2, 0), (0, 1)]))?;
    let tri = Triangle::new(
        "T(f)",
        t.map(x, y).clone(),
        t.map(y, c).clone(),
        t.map(c, s).clone(),
        Zigzag::forward(shift.clone()),
    )?;
    Ok(TriangleConstruction {
        diagram: t,
        squares: sq,
        triangle: tri,
        witnesses: vec![
            Witness::new("Y' ≃ Y", Zigzag::forward(y_aug)),
            Witness::new("C(f) ≃ C", Zigzag::forward(cone_map)),
            Witness::new("ΣX ≃ SX", Zigzag::forward(shift)),
        ],
    })
}

/// `f` as a diagram on `[1]`; restricting to `0` and `1` gives back the
/// source and target exactly.
pub fn lift_morphism<F: Field>(f: &ChainMap<F>) -> ChainDiagram<F> {
    ChainDiagram::arrow(f)
}

/// The output of the rotation construction.
#[derive(Clone, Debug)]
pub struct Rotation<F: Field> {
    /// `j_! i_*(f)` on `[2] × [2]` without `(0,2)`.
    pub diagram: ChainDiagram<F>,
    pub squares: Vec<NamedSquare>,
    /// `Y' → C → SX → SY` along `(1,0) → (1,1) → (2,1) → (2,2)`.
    pub triangle: Triangle<F>,
    /// `ΣX ≃ SX` and `ΣY ≃ SY`.
    pub witnesses: Vec<Witness<F>>,
    /// The last map read as `H(ΣX) → H(ΣY)` through the witnesses.
    pub comparison: BTreeMap<i32, Matrix<F>>,
    /// `H(Σf)`.
    pub sigma_f: BTreeMap<i32, Matrix<F>>,
}

impl<F: Field> Rotation<F> {
    /// True iff the comparison is `-H(Σf)` in every degree.
    pub fn is_negated(&self) -> bool {
        self.comparison.keys().chain(self.sigma_f.keys()).all(|n| {
            match (self.comparison.get(n), self.sigma_f.get(n)) {
                (Some(a), Some(b)) => *a == b.neg(),
                (Some(a), None) | (None, Some(a)) => a.is_zero(),
                (None, None) => true,
            }
        })
    }
}

/// Builds `j_! i_*(f)` on the rotation shape. The square with corners
/// `(1,0), (1,2), (2,0), (2,2)` exhibits `(2,2)` as `ΣY`, read with `(1,2)`
/// as the first direction, as for the triangle of `Y → C(f)`; the last map
/// then compares to `-Σf`.
pub fn rotate<F: Field>(f: &ChainMap<F>) -> Result<Rotation<F>> {
    let rj = named_shape("rotation_J", None)?;
    let rk = named_shape("rotation_K", None)?;
    let j = rk.map("j");
    let hk = build(&lift_morphism(f), rj.map("i"), j)?;
    let d = hk.output().clone();
    let p = |q: (usize, usize)| at(d.shape(), q);
    let sq = squares(
        &d,
        &[
            ("00-11", [(0, 0), (1, 0), (0, 1), (1, 1)]),
            ("10-21", [(1, 0), (2, 0), (1, 1), (2, 1)]),
            ("11-22", [(1, 1), (2, 1), (1, 2), (2, 2)]),
            ("00-21", [(0, 0), (2, 0), (0, 1), (2, 1)]),
            ("10-22", [(1, 0), (2, 0), (1, 2), (2, 2)]),
        ],
    )?;
    let jp = rj.poset.clone();
    let zx = into_value(&hk, p((2, 1)), &suspension_replacement(f.source()), &pts(&jp, &[(0, 0), (2, 0), (0, 1)]))?;
    let zy = into_value(&hk, p((2, 2)), &suspension_replacement(f.target()), &pts(&jp, &[(1, 0), (1, 2), (2, 0)]))?;
    let last = d.map(p((2, 1)), p((2, 2)));
    let sigma_f = suspension_map(f)?;
    let mut comparison = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    let mut degs: Vec<i32> = zx.source().homology_dims().0.keys().copied().collect();
    degs.extend(zy.source().homology_dims().0.keys());
    degs.sort_unstable();
    degs.dedup();
    for n in degs {
        let inv = zy
            .homology_map(n)
            .inverse()
            .ok_or_else(|| Error::Invariant(format!("ΣY ≃ SY fails in degree {n}")))?;
        comparison.insert(n, inv.mul(&last.homology_map(n)).mul(&zx.homology_map(n)));
        sigma.insert(n, sigma_f.homology_map(n));
    }
    let [y1, c, s, sy] = [(1, 0), (1, 1), (2, 1), (2, 2)].map(p);
    let shift = suspension_zigzag(&d, [y1, p((1, 2)), p((2, 0)), sy])?;
    let tri = Triangle::new(
        "rotation",
        d.map(y1, c).clone(),
        d.map(c, s).clone(),
        d.map(s, sy).clone(),
        shift,
    )?;
    Ok(Rotation {
        diagram: d,
        squares: sq,
        triangle: tri,
        witnesses: vec![Witness::new("ΣX ≃ SX", Zigzag::forward(zx)), Witness::new("ΣY ≃ SY", Zigzag::forward(zy))],
        comparison,
        sigma_f: sigma,
    })
}

/// The output of the octahedron construction.
#[derive(Clone, Debug)]
pub struct Octahedron<F: Field> {
    /// `j_! i_*(X → Y → Z)` on `[4] × [2]` without `(4,0)` and `(0,2)`.
    pub diagram: ChainDiagram<F>,
    pub squares: Vec<NamedSquare>,
    /// `X → Y → C1 → SX`, `X → Z → C3 → SX`, `Y → Z → C2 → SY`,
    /// `C1 → C3 → C2 → SC1`.
    pub triangles: Vec<Triangle<F>>,
    /// `C_k ≃ cone(f_k)`, `SX ≃ ΣX`, `SY ≃ ΣY`.
    pub witnesses: Vec<Witness<F>>,
}

impl<F: Field> Octahedron<F> {
    pub fn all_bicartesian(&self) -> bool {
        self.squares.iter().all(|s| s.status.bicartesian())
    }
}

/// Every rectangle of grid points whose four corners lie in `shape`.
fn rectangles(shape: &FinPoset, a: usize, b: usize) -> Vec<(String, [(usize, usize); 4])> {
    let has = |p: (usize, usize)| shape.index_of(&grid_name(p)).is_some();
    let mut out = Vec::new();
    for i0 in 0..=a {
        for i1 in i0 + 1..=a {
            for j0 in 0..=b {
                for j1 in j0 + 1..=b {
                    let c = [(i0, j0), (i1, j0), (i0, j1), (i1, j1)];
                    if c.iter().all(|&p| has(p)) {
                        out.push((format!("{i0}{j0}-{i1}{j1}"), c));
                    }
                }
            }
        }
    }
    out
}

/// Builds the octahedron diagram of `X --f1--> Y --f2--> Z`.
pub fn octahedron<F: Field>(f1: &ChainMap<F>, f2: &ChainMap<F>) -> Result<Octahedron<F>> {
    if f1.target() != f2.source() {
        return Err(Error::CompositionMismatch);
    }
    let f3 = f1.then(f2)?;
    let chain = FinPoset::chain(2);
    let small = ChainDiagram::from_covers(
        chain,
        vec![f1.source().clone(), f2.source().clone(), f2.target().clone()],
        vec![((0, 1), f1.clone()), ((1, 2), f2.clone())],
    )?;
    let oj = named_shape("octa_J", None)?;
    let ok = named_shape("octa_K", None)?;
    let hk = build(&small, oj.map("i"), ok.map("j"))?;
    let d = hk.output().clone();
    let p = |q: (usize, usize)| at(d.shape(), q);
    let rects = rectangles(d.shape(), 4, 2);
    let list: Vec<(&str, [(usize, usize); 4])> = rects.iter().map(|(n, c)| (n.as_str(), *c)).collect();
    let sq = squares(&d, &list)?;

    let jp = oj.poset.clone();
    let cone_into = |k: (usize, usize), f: &ChainMap<F>, at_pts: &[(usize, usize)]| -> Result<ChainMap<F>> {
        into_value(&hk, p(k), &cone_replacement(f)?, &pts(&jp, at_pts))
    };
    let c1 = cone_into((1, 1), f1, &[(0, 0), (1, 0), (0, 1)])?;
    let c3 = cone_into((2, 1), &f3, &[(0, 0), (2, 0), (0, 1)])?;
    let c2 = cone_into((2, 2), f2, &[(1, 0), (2, 0), (1, 2)])?;
    let sx = into_value(&hk, p((3, 1)), &suspension_replacement(f1.source()), &pts(&jp, &[(0, 0), (3, 0), (0, 1)]))?;
    let sy = into_value(&hk, p((3, 2)), &suspension_replacement(f2.source()), &pts(&jp, &[(1, 0), (3, 0), (1, 2)]))?;

    let tri = |name: &str, path: [(usize, usize); 4], square: [(usize, usize); 4]| -> Result<Triangle<F>> {
        let [a, b, c, s] = path.map(p);
        let shift = suspension_zigzag(&d, square.map(p))?;
        Triangle::new(name, d.map(a, b).clone(), d.map(b, c).clone(), d.map(c, s).clone(), shift)
    };
    let triangles = vec![
        tri("octahedron: X → Y → C1", [(0, 0), (1, 0), (1, 1), (3, 1)], [(0, 0), (3, 0), (0, 1), (3, 1)])?,
        tri("octahedron: X → Z → C3", [(0, 0), (2, 0), (2, 1), (3, 1)], [(0, 0), (3, 0), (0, 1), (3, 1)])?,
        tri("octahedron: Y → Z → C2", [(1, 0), (2, 0), (2, 2), (3, 2)], [(1, 0), (3, 0), (1, 2), (3, 2)])?,
        tri("octahedron: C1 → C3 → C2", [(1, 1), (2, 1), (2, 2), (4, 2)], [(1, 1), (4, 1), (1, 2), (4, 2)])?,
    ];
    Ok(Octahedron {
        diagram: d,
        squares: sq,
        triangles,
        witnesses: vec![
            Witness::new("cone(f1) ≃ C1", Zigzag::forward(c1)),
            Witness::new("cone(f2∘f1) ≃ C3", Zigzag::forward(c3)),
            Witness::new("cone(f2) ≃ C2", Zigzag::forward(c2)),
            Witness::new("ΣX ≃ SX", Zigzag::forward(sx)),
            Witness::new("ΣY ≃ SY", Zigzag::forward(sy)),
        ],
    })
}
