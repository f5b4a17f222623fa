use proptest::prelude::*;
use serde_json::{json, Value};

use derivator::document::{from_document, parse_document, parse_str, DocumentError, Payload, PosetSquare};
use derivator::fincat::shapes::grid;
use derivator::fincat::{FinPoset, MonotoneMap};
use derivator::stablemodel::{ChainMap, Complex};
use derivator::verify::{gen_instance, InstanceKind, SizeBounds};
use derivator::{Fp, Matrix, Q};

fn arrow_poset_doc() -> Value {
    json!({"version": 1, "kind": "poset", "body": {"objects": ["0", "1"], "leq": [["0", "1"]]}})
}

/// `□` with `ℚ` everywhere, both paths given explicitly and disagreeing.
fn noncommuting_square() -> Value {
    let one = json!({"dims": {"0": 1}});
    json!({
        "version": 1,
        "kind": "chain_diagram",
        "body": {
            "shape": {"objects": ["0,0", "0,1", "1,0", "1,1"],
                      "leq": [["0,0", "0,1"], ["0,0", "1,0"], ["0,1", "1,1"], ["1,0", "1,1"]]},
            "complexes": {"0,0": one, "0,1": one, "1,0": one, "1,1": one},
            "maps": {
                "0,0->0,1": {"0": [[1]]}, "0,0->1,0": {"0": [[1]]},
                "0,1->1,1": {"0": [[1]]}, "1,0->1,1": {"0": [[2]]}
            }
        }
    })
}

#[test]
fn arrow_poset_file_loads() {
    let dir = std::env::temp_dir().join(format!("derivator-doc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("arrow.json");
    std::fs::write(&path, arrow_poset_doc().to_string()).unwrap();
    let p = parse_document::<Q>(&path).unwrap();
    assert_eq!(p, Payload::Poset(FinPoset::chain(1)));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn missing_file_is_an_io_error() {
    let e = parse_document::<Q>(std::path::Path::new("/nonexistent/x.json")).unwrap_err();
    assert!(matches!(e, DocumentError::Io { .. }));
}

#[test]
fn unknown_version_is_a_schema_error() {
    let mut doc = arrow_poset_doc();
    doc["version"] = json!(99);
    match from_document::<Q>(&doc).unwrap_err() {
        DocumentError::Schema { pointer, .. } => assert_eq!(pointer, "/version"),
        e => panic!("expected a schema error, got {e:?}"),
    }
}

#[test]
fn schema_errors_point_into_the_document() {
    let doc = json!({"version": 1, "kind": "poset", "body": {"objects": ["0", "1"], "leq": [["0", "2"]]}});
    let e = from_document::<Q>(&doc).unwrap_err();
    assert!(matches!(&e, DocumentError::Schema { pointer, .. } if pointer.starts_with("/body")), "{e:?}");
    assert!(matches!(parse_str::<Q>("{"), Err(DocumentError::Schema { .. })));
    let doc = json!({"version": 1, "kind": "sheaf", "body": {}});
    assert!(matches!(from_document::<Q>(&doc), Err(DocumentError::Schema { pointer, .. }) if pointer == "/kind"));
}

#[test]
fn noncommuting_square_names_its_objects() {
    match from_document::<Q>(&noncommuting_square()).unwrap_err() {
        DocumentError::Invariant { objects, message } => {
            assert_eq!(objects.len(), 3, "{message}");
            assert_eq!(objects.first().map(String::as_str), Some("0,0"));
            assert_eq!(objects.last().map(String::as_str), Some("1,1"));
        }
        e => panic!("expected an invariant error, got {e:?}"),
    }
}

#[test]
fn cyclic_relations_are_invariant_errors() {
    let doc = json!({"version": 1, "kind": "poset", "body": {"objects": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}});
    match from_document::<Q>(&doc).unwrap_err() {
        DocumentError::Invariant { objects, .. } => assert_eq!(objects.len(), 2),
        e => panic!("expected an invariant error, got {e:?}"),
    }
}

#[test]
fn non_chain_maps_are_rejected() {
    // Into the acyclic complex ℚ --1--> ℚ in degrees 1, 0: the inclusion in
    // degree 0 commutes with d, the inclusion in degree 1 does not.
    let target = json!({"dims": {"0": 1, "1": 1}, "diff": {"1": [[1]]}});
    let doc = |deg: &str| {
        json!({"version": 1, "kind": "chain_map", "body": {
            "source": {"dims": {deg: 1}}, "target": target, "components": {deg: [[1]]}
        }})
    };
    assert!(from_document::<Q>(&doc("0")).is_ok());
    assert!(matches!(from_document::<Q>(&doc("1")), Err(DocumentError::Invariant { .. })));
}

#[test]
fn fractions_round_trip() {
    let x = Complex::<Q>::concentrated(0, 2);
    let m = Matrix::from_fn(2, 2, |i, j| derivator::Rational::new(i as i64 + 1, j as i64 + 2));
    let f = ChainMap::new(x.clone(), x, [(0, m)]).unwrap();
    let v = Payload::ChainMap(f.clone()).to_document();
    assert_eq!(v["body"]["components"]["0"][0][0], json!("1/2"));
    assert_eq!(from_document::<Q>(&v).unwrap(), Payload::ChainMap(f));
}

#[test]
fn squares_round_trip_and_build() {
    let sq = grid(1, 1);
    let s = PosetSquare {
        u1: MonotoneMap::point(&sq, 0),
        u2: MonotoneMap::identity(&sq),
        v: MonotoneMap::point(&sq, 0),
        w: MonotoneMap::identity(&sq),
        left: true,
    };
    let v = Payload::<Q>::Square(s.clone()).to_document();
    assert_eq!(from_document::<Q>(&v).unwrap(), Payload::Square(s.clone()));
    assert!(s.to_square_data().is_ok());
}

#[test]
fn documents_load_over_prime_fields() {
    let v = gen_instance(InstanceKind::ChainMap, 5, SizeBounds::default());
    assert!(matches!(from_document::<Fp<7>>(&v), Ok(Payload::ChainMap(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// parse(serialize(x)) = x, at the level of documents and of objects.
    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), k in 0usize..5) {
        let kind = InstanceKind::ALL[k];
        let v = gen_instance(kind, seed, SizeBounds::default());
        let p = from_document::<Q>(&v).unwrap();
        prop_assert_eq!(p.kind(), kind.name());
        let again = p.to_document();
        prop_assert_eq!(&again, &v);
        prop_assert_eq!(from_document::<Q>(&again).unwrap(), p);
    }
}
