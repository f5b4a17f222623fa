use derivator::stablemodel::{
    biproduct, concat, invert, loop_space, path_object, segal, Complex, GradedDims,
};
use derivator::{QMatrix, Q};

fn q(deg: i32, dim: usize) -> Complex<Q> {
    Complex::concentrated(deg, dim)
}

fn dims(pairs: &[(i32, usize)]) -> GradedDims {
    GradedDims::from_pairs(pairs)
}

#[test]
fn biproduct_examples() {
    let b = biproduct(&q(0, 1), &q(0, 2)).unwrap();
    assert!(b.holds(), "{:?}", b.squares);
    assert_eq!(b.b.homology_dims(), dims(&[(0, 3)]));
    let y = Complex::<Q>::two_term(1, QMatrix::from_i64(&[&[1, 0]])).direct_sum(&q(-1, 1));
    let b = biproduct(&Complex::zero(), &y).unwrap();
    assert!(b.holds());
    assert_eq!(b.b.homology_dims(), y.homology_dims());
    let b = biproduct(&q(0, 1), &q(1, 1)).unwrap();
    assert!(b.holds());
    assert_eq!(b.b.homology_dims(), dims(&[(0, 1), (1, 1)]));
}

#[test]
fn loop_calculus_examples() {
    let x = q(0, 1);
    assert_eq!(path_object(&x, 1).unwrap().homology_dims(), dims(&[(-1, 1)]));
    assert_eq!(path_object(&x, 1).unwrap().homology_dims(), loop_space(&x).homology_dims());
    assert_eq!(path_object(&x, 2).unwrap().homology_dims(), dims(&[(-1, 2)]));
    assert!(segal(&x, 2).unwrap().is_quasi_iso());
    assert!(segal(&x, 3).unwrap().is_quasi_iso());
    assert_eq!(invert(&x).unwrap().homology_map(-1), QMatrix::from_i64(&[&[-1]]));
    assert!(path_object(&x, 0).is_err());
}

#[test]
fn concat_is_addition() {
    let x = q(0, 2);
    let a = QMatrix::from_i64(&[&[1, 0, 3], &[0, 1, -2]]);
    let b = QMatrix::from_i64(&[&[2, 5, 0], &[-1, 1, 7]]);
    assert_eq!(concat(&x, -1, &a, &b).unwrap(), a.add(&b));
}
