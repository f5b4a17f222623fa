use proptest::prelude::*;

use derivator::stablemodel::{triangle, ChainMap, Complex, GradedDims, Triangle};
use derivator::verify::{gen_instance, long_exact_check, run_suite, run_suite_with, trial_seed, Gen, InstanceKind, SizeBounds};
use derivator::{Error, Fp, Q};

#[test]
fn gen_instance_is_deterministic() {
    let bounds = SizeBounds { max_elements: 4, ..SizeBounds::default() };
    let a = gen_instance(InstanceKind::Poset, 7, bounds);
    assert_eq!(a, gen_instance(InstanceKind::Poset, 7, bounds));
    assert!(a["body"]["objects"].as_array().unwrap().len() <= 4);
}

#[test]
fn instance_kinds_parse() {
    for k in InstanceKind::ALL {
        assert_eq!(k.name().parse::<InstanceKind>().unwrap(), k);
    }
    assert!("sheaf".parse::<InstanceKind>().is_err());
}

#[test]
fn long_exact_check_examples() {
    let q = Complex::<Q>::concentrated(0, 1);
    assert!(long_exact_check(&triangle(&ChainMap::identity(&q)).unwrap().triangle).pass);

    let t = triangle(&ChainMap::zero(&q, &Complex::zero())).unwrap().triangle;
    assert!(long_exact_check(&t).pass);
    assert_eq!(t.c.homology_dims(), GradedDims::from_pairs(&[(1, 1)]));

    let broken = Triangle::new("corrupted", t.f.clone(), t.g.clone(), ChainMap::zero(&t.c, &t.sx), t.shift.clone()).unwrap();
    let v = long_exact_check(&broken);
    assert!(!v.pass);
    assert!(v.witness.is_some());
}

#[test]
fn suite_parameters_are_validated() {
    assert!(matches!(run_suite("triangulation", 1, 0), Err(Error::BadParams(_))));
    assert!(matches!(run_suite("nosuch", 1, 1), Err(Error::UnknownSuite(_))));
    let bad = SizeBounds { max_elements: 0, ..SizeBounds::default() };
    assert!(run_suite_with::<Q>("pointed", 1, 1, bad).is_err());
}

#[test]
fn reports_are_consistent() {
    let r = run_suite("stable_squares", 3, 2).unwrap();
    assert_eq!(r.totals.checks, r.verdicts.len());
    assert_eq!(r.totals.passed + r.totals.failed, r.totals.checks);
    assert!(r.verdicts.iter().all(|v| v.name.starts_with("trial ") && v.seed.is_some()));
    assert!(r.controls.iter().all(|c| !c.verdict.pass && c.verdict.witness.is_some()));
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert!(json.get("duration").is_none());
    assert!(r.table().contains("cancellation of coCartesian squares"));
}

#[test]
fn suites_run_over_a_prime_field() {
    let r = run_suite_with::<Fp<101>>("triangulation", 2, 2, SizeBounds::default()).unwrap();
    assert!(r.pass, "{}", r.table());
    assert_eq!(r.field, "fp:101");
}

#[test]
fn trial_seeds_are_distinct() {
    let seeds: std::collections::BTreeSet<u64> = (0..100).map(|i| trial_seed(1, i)).collect();
    assert_eq!(seeds.len(), 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_maps_are_monotone(seed in any::<u64>()) {
        let mut g = Gen::new(seed, SizeBounds::default());
        let (j, k) = (g.poset("j"), g.poset("k"));
        let u = g.monotone_map(&j, &k);
        for a in 0..j.len() {
            for b in 0..j.len() {
                if j.leq(a, b) {
                    prop_assert!(k.leq(u.apply(a), u.apply(b)));
                }
            }
        }
    }

    #[test]
    fn generated_sieves_are_proper_and_closed(seed in any::<u64>()) {
        let mut g = Gen::new(seed, SizeBounds::default());
        let k = g.poset_of_size(2 + (seed % 4) as usize, "k");
        let s = g.sieve(&k);
        let c = g.cosieve(&k);
        prop_assert!(s.sieve_status().is_sieve());
        prop_assert!(c.sieve_status().is_cosieve());
        prop_assert!(!s.source().is_empty() && s.source().len() < k.len());
        prop_assert!(!c.source().is_empty() && c.source().len() < k.len());
    }

    /// Generated chain maps satisfy `d f = f d`; `ChainMap::new` re-checks.
    #[test]
    fn generated_chain_maps_commute(seed in any::<u64>()) {
        let mut g = Gen::new(seed, SizeBounds::default());
        let (x, y): (Complex<Q>, Complex<Q>) = (g.complex(), g.complex());
        let f = g.chain_map(&x, &y);
        let comps: Vec<_> = x.degrees().map(|n| (n, f.comp(n))).collect();
        prop_assert!(ChainMap::new(x, y, comps).is_ok());
    }

    /// Generated diagrams are functorial; rebuilding from covers re-checks
    /// every square.
    #[test]
    fn generated_diagrams_are_functorial(seed in any::<u64>()) {
        let mut g = Gen::new(seed, SizeBounds { max_elements: 5, ..SizeBounds::default() });
        let p = g.poset("x");
        let d = g.chain_diagram::<Q>(&p);
        for (a, b) in p.strict_pairs() {
            for c in (0..p.len()).filter(|&c| p.lt(a, c) && p.lt(c, b)) {
                prop_assert_eq!(d.map(a, c).then(d.map(c, b)).unwrap(), d.map(a, b).clone());
            }
        }
    }
}
