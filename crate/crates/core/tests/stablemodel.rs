use derivator::fincat::shapes::{corner_push, grid};
use derivator::fincat::{FinPoset, MonotoneMap};
use derivator::repmodel::KanSide;
use derivator::stablemodel::{
    cocartesian_status, hkan, hocolim, ChainDiagram, ChainMap, Complex, GradedDims,
};
use derivator::{QMatrix, Q};

fn q(deg: i32) -> Complex<Q> {
    Complex::concentrated(deg, 1)
}

fn dims(pairs: &[(i32, usize)]) -> GradedDims {
    GradedDims::from_pairs(pairs)
}

fn map(x: &Complex<Q>, y: &Complex<Q>, comps: Vec<(i32, QMatrix)>) -> ChainMap<Q> {
    ChainMap::new(x.clone(), y.clone(), comps).unwrap()
}

#[test]
fn homology_examples() {
    assert_eq!(q(0).homology_dims(), dims(&[(0, 1)]));
    let exact = Complex::<Q>::two_term(1, QMatrix::identity(1));
    assert!(exact.homology_dims().is_zero());
    assert!(exact.is_acyclic());
}

#[test]
fn quasi_iso_examples() {
    let x = q(0);
    assert!(ChainMap::identity(&x).is_quasi_iso());
    let exact = Complex::<Q>::two_term(1, QMatrix::identity(1));
    assert!(ChainMap::zero(&exact, &Complex::zero()).is_quasi_iso());
    assert!(!ChainMap::zero(&x, &Complex::zero()).is_quasi_iso());
}

#[test]
fn hocolim_examples() {
    let x = q(0);
    assert_eq!(*hocolim(&ChainDiagram::point(&x)).tot(), x);
    let id = ChainDiagram::arrow(&ChainMap::identity(&x));
    assert_eq!(hocolim(&id).tot().homology_dims(), dims(&[(0, 1)]));
    let (p, _) = corner_push();
    let zero = Complex::zero();
    let span = ChainDiagram::from_covers(
        p,
        vec![x.clone(), zero.clone(), zero.clone()],
        vec![((0, 1), ChainMap::zero(&x, &zero)), ((0, 2), ChainMap::zero(&x, &zero))],
    )
    .unwrap();
    assert_eq!(hocolim(&span).tot().homology_dims(), dims(&[(1, 1)]));
}

#[test]
fn hkan_examples() {
    let x = q(0);
    let id = ChainDiagram::arrow(&ChainMap::identity(&x));
    let p = MonotoneMap::to_terminal(&FinPoset::chain(1));
    let out = hkan(&p, &id, KanSide::Left).unwrap();
    assert_eq!(out.value(0).homology_dims(), dims(&[(0, 1)]));
    let one = MonotoneMap::point(&FinPoset::chain(1), 1);
    let ext = hkan(&one, &ChainDiagram::point(&x), KanSide::Left).unwrap();
    assert!(ext.value(0).is_zero());
}

#[test]
fn cocartesian_examples() {
    let sq = grid(1, 1);
    let zero = Complex::<Q>::zero();
    let build = |top: Complex<Q>| {
        let vals = vec![q(0), zero.clone(), zero.clone(), top.clone()];
        let covers = vec![
            ((0, 1), ChainMap::zero(&q(0), &zero)),
            ((0, 2), ChainMap::zero(&q(0), &zero)),
            ((1, 3), ChainMap::zero(&zero, &top)),
            ((2, 3), ChainMap::zero(&zero, &top)),
        ];
        ChainDiagram::from_covers(sq.clone(), vals, covers).unwrap()
    };
    // Strict zero maps carry no null-homotopy: the augmentation is zero.
    assert!(!cocartesian_status(&build(q(1))).unwrap().cocartesian);
    assert!(!cocartesian_status(&build(q(0))).unwrap().cocartesian);
    let (_, push) = corner_push();
    let (p, _) = corner_push();
    let span = ChainDiagram::from_covers(
        p,
        vec![q(0), zero.clone(), zero.clone()],
        vec![((0, 1), ChainMap::zero(&q(0), &zero)), ((0, 2), ChainMap::zero(&q(0), &zero))],
    )
    .unwrap();
    let pushout = hkan(&push, &span, KanSide::Left).unwrap();
    assert_eq!(pushout.value(3).homology_dims(), dims(&[(1, 1)]));
    let s = cocartesian_status(&pushout).unwrap();
    assert!(s.cocartesian && s.cartesian);
    let constant = ChainDiagram::constant(sq.clone(), &q(0));
    let s = cocartesian_status(&constant).unwrap();
    assert!(s.cocartesian && s.cartesian);
    let _ = map(&q(0), &q(0), vec![]);
}
