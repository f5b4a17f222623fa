use derivator::fincat::{FinPoset, MonotoneMap};
use derivator::stablemodel::{
    cone, exceptional, fiber, lift_morphism, octahedron, rotate, suspension, triangle, ChainDiagram, ChainMap,
    Complex, Exceptional, GradedDims,
};
use derivator::{QMatrix, Q};

fn q(deg: i32, dim: usize) -> Complex<Q> {
    Complex::concentrated(deg, dim)
}

fn dims(pairs: &[(i32, usize)]) -> GradedDims {
    GradedDims::from_pairs(pairs)
}

fn scalar(x: &Complex<Q>, c: i64) -> ChainMap<Q> {
    ChainMap::identity(x).scale(&Q::from(c))
}

fn projection() -> ChainMap<Q> {
    ChainMap::new(q(0, 2), q(0, 1), vec![(0, QMatrix::from_rows(vec![vec![Q::from(1), Q::from(0)]], 2))]).unwrap()
}

#[test]
fn pointed_examples() {
    assert_eq!(suspension(&q(0, 1)).homology_dims(), dims(&[(1, 1)]));
    let (c, _) = cone(&ChainMap::identity(&q(0, 1))).unwrap();
    assert!(c.is_acyclic());
    let (c, _) = cone(&projection()).unwrap();
    assert_eq!(c.homology_dims(), dims(&[(1, 1)]));
    let (f, to_x) = fiber(&ChainMap::zero(&Complex::zero(), &q(0, 1))).unwrap();
    assert_eq!(f.homology_dims(), dims(&[(-1, 1)]));
    assert!(to_x.target().is_zero());
    let (f, to_x) = fiber(&projection()).unwrap();
    assert_eq!(f.homology_dims(), dims(&[(0, 1)]));
    assert_eq!(*to_x.target(), q(0, 2));
    assert_eq!(to_x.homology_map(0).rank(), 1);
}

#[test]
fn exceptional_examples() {
    let one = MonotoneMap::point(&FinPoset::chain(1), 1);
    let zero = MonotoneMap::point(&FinPoset::chain(1), 0);
    let p = projection();
    let x = lift_morphism(&p);
    let (c, _) = cone(&p).unwrap();
    let (f, _) = fiber(&p).unwrap();
    let left = exceptional(&one, &x, Exceptional::LeftExceptional).unwrap();
    assert_eq!(left.value(0).homology_dims(), c.homology_dims());
    let right = exceptional(&zero, &x, Exceptional::RightCoexceptional).unwrap();
    assert_eq!(right.value(0).homology_dims(), f.homology_dims());
    let a = q(0, 1);
    let to_zero = lift_morphism(&ChainMap::zero(&a, &Complex::zero()));
    let s = exceptional(&one, &to_zero, Exceptional::LeftExceptional).unwrap();
    assert_eq!(s.value(0).homology_dims(), suspension(&a).homology_dims());
    assert!(exceptional(&zero, &x, Exceptional::LeftExceptional).is_err());
    assert!(exceptional(&one, &x, Exceptional::RightCoexceptional).is_err());
}

#[test]
fn lift_morphism_examples() {
    let x = q(0, 1);
    let d = lift_morphism(&ChainMap::identity(&x));
    assert_eq!(d, ChainDiagram::constant(FinPoset::chain(1), &x));
    let p = projection();
    let d = lift_morphism(&p);
    assert_eq!(d.value(0), p.source());
    assert_eq!(d.value(1), p.target());
    assert!(lift_morphism(&ChainMap::zero(&x, &x)).map(0, 1).is_zero());
}

#[test]
fn triangle_examples() {
    for (f, expect) in [
        (ChainMap::identity(&q(0, 1)), dims(&[])),
        (ChainMap::zero(&q(0, 1), &Complex::zero()), dims(&[(1, 1)])),
        (projection(), dims(&[(1, 1)])),
    ] {
        let t = triangle(&f).unwrap();
        assert!(t.all_bicartesian(), "{:?}", t.squares);
        assert!(t.witnesses.iter().all(|w| w.holds()));
        assert_eq!(t.triangle.c.homology_dims(), expect);
        assert_eq!(t.triangle.les_defects().unwrap(), vec![]);
    }
}

#[test]
fn rotation_examples() {
    let x = q(0, 1);
    for (f, sign) in [(scalar(&x, 1), -1), (ChainMap::zero(&x, &x), 0), (scalar(&x, 2), -2)] {
        let r = rotate(&f).unwrap();
        assert!(r.squares.iter().all(|s| s.status.bicartesian()));
        assert!(r.witnesses.iter().all(|w| w.holds()));
        assert!(r.is_negated());
        assert_eq!(r.comparison[&1], QMatrix::from_rows(vec![vec![Q::from(sign)]], 1));
        assert_eq!(r.triangle.les_defects().unwrap(), vec![]);
    }
}

#[test]
fn octahedron_examples() {
    let x = q(0, 1);
    let o = octahedron(&ChainMap::identity(&x), &ChainMap::zero(&x, &Complex::zero())).unwrap();
    assert!(o.all_bicartesian());
    assert!(o.witnesses.iter().all(|w| w.holds()));
    let at = |p| derivator::fincat::shapes::at(o.diagram.shape(), p);
    assert!(o.diagram.value(at((1, 1))).is_acyclic());
    assert_eq!(o.diagram.value(at((2, 1))).homology_dims(), dims(&[(1, 1)]));
    assert_eq!(o.diagram.value(at((2, 2))).homology_dims(), dims(&[(1, 1)]));
    for t in &o.triangles {
        assert_eq!(t.les_defects().unwrap(), vec![], "{}", t.provenance);
    }

    let zero = ChainMap::zero(&x, &x);
    let o = octahedron(&zero, &zero).unwrap();
    assert_eq!(o.diagram.value(at((1, 1))).homology_dims(), dims(&[(0, 1), (1, 1)]));
    assert!(o.triangles.iter().all(|t| t.les_defects().unwrap().is_empty()));

    let y = q(0, 2);
    assert!(octahedron(&ChainMap::identity(&x), &ChainMap::identity(&y)).is_err());
}

#[test]
fn recollement_on_an_arrow() {
    let zero = MonotoneMap::point(&FinPoset::chain(1), 0);
    for f in [projection(), ChainMap::identity(&q(0, 1)), ChainMap::zero(&q(1, 1), &q(0, 2))] {
        let r = derivator::stablemodel::recollement(&zero, &lift_morphism(&f)).unwrap();
        assert!(r.holds().unwrap());
    }
}

#[test]
fn recollement_on_a_square() {
    use derivator::fincat::shapes::grid;
    let sq = grid(1, 1);
    let (low, sieve) = sq.subposet(&[0, 1]);
    let _ = low;
    let x = q(0, 1);
    let d = ChainDiagram::constant(sq, &x);
    let r = derivator::stablemodel::recollement(&sieve, &d).unwrap();
    assert!(r.holds().unwrap());
    let bad = MonotoneMap::point(&FinPoset::chain(1), 1);
    assert!(derivator::stablemodel::recollement(&bad, &lift_morphism(&projection())).is_err());
}
