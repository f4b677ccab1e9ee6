//! Exhaustive contract tests over enumerated constellations, beyond the
//! fixture-level unit tests.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use zariski::verify::enumerate::brute_force_confirms_minimal;
use zariski::verify::{
    enumerate_complete_ideals, enumerate_constellations, minimal_complete_above,
    random_constellation,
};
use zariski::{IdealClass, PointBasis};

/// Products of powers of two simple ideals are never adjoints unless the
/// supports are nested (over degree-one constellations with at most seven
/// points).
#[test]
fn adjoint_simple_pair_products_have_nested_supports() {
    let mut checked = 0u64;
    for c in enumerate_constellations(7, &[1]) {
        let simples: Vec<IdealClass> = c
            .points()
            .map(|b| IdealClass::simple(&c, b).expect("point is known"))
            .collect();
        for i in &simples {
            for j in &simples {
                if i == j {
                    continue;
                }
                let si = i.support();
                let sj = j.support();
                let nested = si.iter().all(|p| sj.contains(p)) || sj.iter().all(|p| si.contains(p));
                for (p, q) in [(1u64, 1u64), (1, 2), (2, 1), (3, 2)] {
                    let product = i.power(p).product(&j.power(q));
                    if product.is_adjoint_power(1).expect("nonzero") {
                        checked += 1;
                        assert!(
                            nested,
                            "adjoint product {product} with incomparable supports"
                        );
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

/// The three minimal-multiplicity criteria agree on every complete ideal
/// with entries at most three over degree-one constellations with at most
/// seven points.
#[test]
fn minimal_multiplicity_routes_agree_on_seven_points() {
    for c in enumerate_constellations(7, &[1]) {
        for i in enumerate_complete_ideals(&c, 3) {
            let report = i.minimal_multiplicity_report().expect("nonzero ideal");
            assert!(
                report.adjoint_route == report.numerical_route
                    && report.numerical_route == report.structural_route,
                "routes disagree for {i}: {report:?}"
            );
        }
    }
}

/// The same trichotomy over eight-point constellations.
#[test]
fn minimal_multiplicity_routes_agree_on_eight_points() {
    for c in enumerate_constellations(8, &[1]) {
        for i in enumerate_complete_ideals(&c, 3) {
            let report = i.minimal_multiplicity_report().expect("nonzero ideal");
            assert!(
                report.adjoint_route == report.numerical_route
                    && report.numerical_route == report.structural_route,
                "routes disagree for {i}: {report:?}"
            );
        }
    }
}

/// Unloading minimality on six-point clusters with entries up to five,
/// residue degree two included: the one-pass oracle everywhere, plus full
/// box enumeration wherever the box stays below a million vectors.
#[test]
fn unloading_box_sweep_on_six_points() {
    let mut rng = StdRng::seed_from_u64(0xb0b);
    let mut brute_forced = 0u64;
    for _ in 0..3_000 {
        let c = random_constellation(&mut rng, 6, true);
        let values: Vec<u64> = (0..c.len()).map(|_| rng.gen_range(0..=5)).collect();
        let v = PointBasis::new(&c, values.clone()).unwrap();
        let unloaded = v.unload();
        assert_eq!(
            unloaded,
            minimal_complete_above(&v),
            "oracle mismatch on {values:?}"
        );
        let cap = IdealClass::from_excess(
            &c,
            &v.values().iter().map(|&x| x as i64).collect::<Vec<_>>(),
        )
        .unwrap();
        if let Some(check) = brute_force_confirms_minimal(&v, &cap, &unloaded, 1_000_000) {
            assert!(
                check.confirms,
                "box enumeration refutes minimality on {values:?}"
            );
            brute_forced += 1;
        }
    }
    assert!(
        brute_forced > 1_500,
        "most boxes fit the budget, got {brute_forced}"
    );
}

/// Reciprocity: the order of the simple ideal at a point equals the residue
/// degree times the value of the point's valuation on the maximal ideal,
/// including degree-two edges.
#[test]
fn valuation_reciprocity_over_enumeration() {
    for c in enumerate_constellations(5, &[1, 2]) {
        let m = IdealClass::maximal(&c);
        for b in c.points() {
            let simple = IdealClass::simple(&c, b).expect("point is known");
            let degree = c.degree_over_base(b).expect("point is known");
            assert_eq!(
                simple.order(),
                degree * m.valuation(b).expect("point is known"),
                "reciprocity fails at {b}"
            );
        }
    }
}

/// Transforms restrict the basis to the subtree: the order of a transform
/// is the multiplicity at the new base point, and simple ideals transform
/// to simple ideals.
#[test]
fn transform_orders_match_multiplicities() {
    for c in enumerate_constellations(5, &[1, 2]) {
        for i in enumerate_complete_ideals(&c, 2) {
            for b in c.points() {
                let t = i.transform(b).expect("point is known");
                assert_eq!(t.ideal.order(), i.value(b));
                assert!(t.ideal.basis().is_complete());
            }
        }
        for b in c.points() {
            let simple = IdealClass::simple(&c, b).expect("point is known");
            let t = simple.transform(b).expect("point is known");
            assert_eq!(t.ideal.order(), 1);
        }
    }
}
