use std::sync::Arc;

use derivator::fincat::squares::{
    comma_square, cofinality_square, identity_square, kan_formula_square, non_exact_square, pullback_square,
};
use derivator::fincat::{CellDirection, FinCategory, FinPoset, FunctorData, MonotoneMap, Side};
use derivator::repmodel::{
    exact_square_verdict, inverse_lemma_sides, kan, lim_colim, mate, nat_dim, pasting_sides, unit_counit,
    Adjunction, DiagramMorphism, KanSide, LimSide, VecDiagram,
};
use derivator::{QMatrix, Q};

fn cat(p: &FinPoset) -> Arc<FinCategory> {
    Arc::new(FinCategory::from_poset(p))
}

fn interval() -> Arc<FinCategory> {
    cat(&FinPoset::chain(1))
}

fn edge(c: &Arc<FinCategory>, a: usize, b: usize) -> usize {
    c.hom(a, b)[0]
}

/// `A → B` on `[1]`.
fn arrow(m: QMatrix) -> VecDiagram<Q> {
    let c = interval();
    let f = edge(&c, 0, 1);
    VecDiagram::from_generators(c, vec![m.cols(), m.rows()], &[(f, m)]).unwrap()
}

fn point_diagram(dim: usize) -> VecDiagram<Q> {
    VecDiagram::constant(cat(&FinPoset::terminal()), dim)
}

#[test]
fn restrict_examples() {
    let x = arrow(QMatrix::from_i64(&[&[1, 2]]));
    let one = FunctorData::point(x.shape(), 1);
    assert_eq!(x.restrict(&one).unwrap().dims(), &[1]);
    assert_eq!(x.restrict(&FunctorData::identity(x.shape())).unwrap(), x);
}

#[test]
fn colimit_of_pushout_of_isos_is_one_dimensional() {
    let (p, _) = derivator::fincat::shapes::corner_push();
    let c = cat(&p);
    let gens: Vec<(usize, QMatrix)> = c.non_identities().into_iter().map(|f| (f, QMatrix::identity(1))).collect();
    let x = VecDiagram::from_generators(c, vec![1, 1, 1], &gens).unwrap();
    assert_eq!(lim_colim(&x, LimSide::Colim).dim, 1);
}

#[test]
fn limit_over_empty_is_zero() {
    let x = VecDiagram::<Q>::zero(cat(&FinPoset::empty()));
    assert_eq!(lim_colim(&x, LimSide::Lim).dim, 0);
    assert_eq!(lim_colim(&point_diagram(3), LimSide::Colim).dim, 3);
}

#[test]
fn kan_extension_by_zero_and_along_sieve() {
    let c = interval();
    let v = point_diagram(2);
    let one = FunctorData::point(&c, 1);
    let zero = FunctorData::point(&c, 0);
    assert_eq!(kan(&one, &v, KanSide::Left).unwrap().dims(), &[0, 2]);
    assert_eq!(kan(&zero, &v, KanSide::Right).unwrap().dims(), &[2, 0]);
    let ext = kan(&zero, &v, KanSide::Left).unwrap();
    assert_eq!(ext.dims(), &[2, 2]);
    assert!(ext.map(edge(&c, 0, 1)).is_iso());
}

#[test]
fn counit_along_endpoint() {
    let y = arrow(QMatrix::from_i64(&[&[1], &[3]]));
    let one = FunctorData::point(y.shape(), 1);
    let eps = unit_counit(&one, &y, Adjunction::CounitLeft).unwrap();
    assert_eq!(eps.component(0).shape(), (1, 0));
    assert_eq!(*eps.component(1), QMatrix::identity(2));
}

#[test]
fn identity_adjunction_maps_are_identities() {
    let y = arrow(QMatrix::from_i64(&[&[2]]));
    let id = FunctorData::identity(y.shape());
    for which in [Adjunction::UnitLeft, Adjunction::CounitLeft, Adjunction::UnitRight, Adjunction::CounitRight] {
        let m = unit_counit(&id, &y, which).unwrap();
        assert!(m.components().iter().all(|c| *c == QMatrix::identity(1)));
    }
}

#[test]
fn nat_dim_examples() {
    let c = interval();
    let constant = VecDiagram::<Q>::constant(c.clone(), 1);
    assert_eq!(nat_dim(&constant, &constant).unwrap(), 1);
    let x = VecDiagram::<Q>::from_generators(c.clone(), vec![1, 0], &[]).unwrap();
    let y = VecDiagram::from_generators(c, vec![0, 1], &[]).unwrap();
    assert_eq!(nat_dim(&x, &y).unwrap(), 0);
    assert_eq!(nat_dim(&point_diagram(1), &point_diagram(1)).unwrap(), 1);
}

#[test]
fn identity_square_has_identity_mate() {
    let y = arrow(QMatrix::from_i64(&[&[1, 1]]));
    let sq = identity_square(&FunctorData::identity(y.shape())).unwrap();
    let m = mate(&sq, KanSide::Left, &y).unwrap();
    assert_eq!(m, DiagramMorphism::identity(&y));
}

fn two_by_one() -> Arc<FinCategory> {
    cat(&FinPoset::chain(2).product(&FinPoset::chain(1)))
}

fn sample_on(c: &Arc<FinCategory>) -> VecDiagram<Q> {
    // Constant ℚ² with a non-trivial automorphism on each generating edge.
    let p = c.as_poset().unwrap();
    let gens: Vec<(usize, QMatrix)> = p
        .covers()
        .into_iter()
        .map(|(a, b)| (edge(c, a, b), QMatrix::from_i64(&[&[1, 1], &[0, 1]])))
        .collect();
    let diag = VecDiagram::from_generators(c.clone(), vec![2; p.len()], &gens);
    diag.unwrap_or_else(|_| VecDiagram::constant(c.clone(), 2))
}

#[test]
fn kan_formula_squares_are_exact() {
    let k = two_by_one();
    let p = FinPoset::chain(2).product(&FinPoset::chain(1));
    let (sub, incl) = p.subposet(&[0, 1, 2, 3]);
    let u = FunctorData::from_monotone_on(&incl, cat(&sub), k.clone());
    let x = VecDiagram::<Q>::constant(cat(&sub), 2);
    for obj in 0..k.object_count() {
        for side in [Side::Over, Side::Under] {
            let sq = kan_formula_square(&u, obj, side).unwrap();
            assert!(exact_square_verdict("der4", &sq, std::slice::from_ref(&x)).unwrap().pass);
        }
    }
}

#[test]
fn comma_square_and_transpose_are_exact() {
    let c = interval();
    let i2 = cat(&FinPoset::chain(2));
    let u1 = FunctorData::point(&i2, 1);
    let u2 = FunctorData::from_monotone_on(
        &MonotoneMap::new(FinPoset::chain(1), FinPoset::chain(2), vec![0, 2]).unwrap(),
        c.clone(),
        i2.clone(),
    );
    let sq = comma_square(&u1, &u2).unwrap();
    let y = arrow(QMatrix::from_i64(&[&[1, 0], &[2, 1]]));
    assert!(exact_square_verdict("comma", &sq, std::slice::from_ref(&y)).unwrap().pass);
    let t = sq.transpose();
    assert!(exact_square_verdict("comma_t", &t, &[point_diagram(2)]).unwrap().pass);
}

#[test]
fn cofinality_of_right_adjoint() {
    let s0 = MonotoneMap::new(FinPoset::chain(2), FinPoset::chain(1), vec![0, 0, 1]).unwrap();
    let d0 = s0.find_adjoint(derivator::fincat::AdjointSide::Right).unwrap();
    let r = FunctorData::from_monotone(&d0);
    let sq = cofinality_square(&r).unwrap();
    let x = sample_on(r.target());
    assert!(exact_square_verdict("cofinal", &sq, &[x]).unwrap().pass);
}

#[test]
fn pullback_along_opfibration_is_exact() {
    let k = interval();
    let prod = cat(&FinPoset::chain(1).product(&FinPoset::chain(1)));
    let pr = FunctorData::new(prod.clone(), k.clone(), vec![0, 0, 1, 1], {
        (0..prod.morphism_count())
            .map(|f| k.hom(prod.src(f) / 2, prod.tgt(f) / 2)[0])
            .collect()
    })
    .unwrap();
    assert!(pr.fibration_status().opfibration);
    let zero = FunctorData::point(&k, 0);
    let sq = pullback_square(&pr, &FunctorData::identity(&k), CellDirection::TowardU2V).unwrap();
    let y = arrow(QMatrix::from_i64(&[&[1, 2]]));
    assert!(exact_square_verdict("pullback", &sq, std::slice::from_ref(&y)).unwrap().pass);
    let sq = pullback_square(&zero, &FunctorData::identity(&k), CellDirection::TowardU2V).unwrap();
    assert!(exact_square_verdict("pullback_point", &sq, &[y]).unwrap().pass);
}

#[test]
fn non_exact_square_fails_with_witness() {
    let sq = non_exact_square(&interval()).unwrap();
    let y = arrow(QMatrix::from_i64(&[&[1, 1]]));
    let v = exact_square_verdict("control", &sq, &[y]).unwrap();
    assert!(!v.pass);
    assert_eq!(v.witness.unwrap()["rank"], 1);
}

#[test]
fn inverse_lemma_and_pasting() {
    let c = interval();
    let one = FunctorData::point(&c, 1);
    let sq = kan_formula_square(&FunctorData::identity(&c), 1, Side::Over).unwrap();
    let z = arrow(QMatrix::from_i64(&[&[1, 2], &[3, 4]]));
    let (a, b) = inverse_lemma_sides(&sq, &z).unwrap();
    assert_eq!(a.components(), b.components());

    let first = kan_formula_square(&one, 1, Side::Over).unwrap();
    let second = identity_square(&one).unwrap();
    let y = point_diagram(2);
    let _ = pasting_sides(&first, &second, &y);
    let second = identity_square(&FunctorData::identity(&c)).unwrap();
    let first = kan_formula_square(&FunctorData::identity(&c), 0, Side::Over).unwrap();
    let (whole, composite) = pasting_sides(&first, &second, &z).unwrap();
    assert_eq!(whole.components(), composite.components());
}
