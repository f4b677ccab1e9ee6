//! The cross-route verification suites.
//!
//! Each suite checks one family of exact identities over an exhaustive or
//! randomized instance set and reports the number of instances together
//! with any failures. All checks are exact integer comparisons.

use std::sync::{Arc, OnceLock};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::constellation::Constellation;
use crate::geometry::Resolution;
use crate::ideal::{IdealClass, PointBasis};
use crate::monomial::{enumerate_closed_staircases, Staircase};
use crate::verify::enumerate::{
    brute_force_confirms_minimal, enumerate_complete_ideals, enumerate_constellations,
    minimal_complete_above, random_constellation, random_ideal, signature, support_signature,
};
use crate::verify::SuiteOutcome;

const MAX_REPORTED_FAILURES: usize = 8;

fn record(failures: &mut Vec<String>, message: String) {
    if failures.len() < MAX_REPORTED_FAILURES {
        failures.push(message);
    }
}

/// Degree-one constellations with at most six points, each with every
/// nonzero complete ideal with entries at most four.
fn degree_one_instances() -> &'static [(Arc<Constellation>, Vec<IdealClass>)] {
    static INSTANCES: OnceLock<Vec<(Arc<Constellation>, Vec<IdealClass>)>> = OnceLock::new();
    INSTANCES.get_or_init(|| {
        enumerate_constellations(6, &[1])
            .into_iter()
            .map(|c| {
                let ideals = enumerate_complete_ideals(&c, 4);
                (c, ideals)
            })
            .collect()
    })
}

/// Every integrally closed m-primary staircase with polygon vertices in
/// `[0, 8]^2`.
fn monomial_corpus() -> &'static [Staircase] {
    static CORPUS: OnceLock<Vec<Staircase>> = OnceLock::new();
    CORPUS.get_or_init(|| enumerate_closed_staircases(8))
}

/// Exact facts about the cluster of the plane cusp `(x^2, y^3)`-bar.
pub fn cusp_fixture_facts() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut check = |name: &str, ok: bool| {
        instances += 1;
        if !ok {
            record(&mut failures, format!("cusp fact failed: {name}"));
        }
    };

    let staircase = crate::monomial::parse_monomials("x^2, y^3")
        .and_then(|s| s.closure())
        .expect("the cusp staircase parses");
    check(
        "closure adds x*y^2",
        staircase.generators() == [(2, 0), (1, 2), (0, 3)],
    );
    let (c, j) = staircase.base_points().expect("the closure is closed");
    check("point basis (2,1,1)", j.values() == [2, 1, 1]);
    check("order 2", j.order() == 2);
    check("multiplicity 6 = k^2 s + k", j.multiplicity() == Ok(6));
    check("colength 5", j.colength() == 5);
    check("staircase colength 5", staircase.colength() == Ok(5));
    check(
        "twice the polygon area is 6",
        staircase.double_area() == Ok(6),
    );
    check(
        "adjoint is the maximal ideal",
        j.adjoint() == IdealClass::maximal(&c),
    );
    check("no power is an adjoint", j.min_adjoint_exponent().is_none());
    check("blowup is not Gorenstein", !j.is_blowup_gorenstein());
    check(
        "minimal multiplicity",
        j.has_minimal_multiplicity() == Ok(true),
    );
    check("three generators", j.min_generators() == Ok(3));

    SuiteOutcome {
        name: "cusp-fixture-facts",
        instances,
        failures,
    }
}

/// The four readings of "some power is an adjoint" agree: the excess
/// inequality, divisibility of the next power by the adjoint, the
/// intersection-theoretic inequality, and reconstruction through the
/// adjoint source.
pub fn adjoint_power_routes() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    for (_, ideals) in degree_one_instances() {
        for j in ideals {
            for n in 1..=3u64 {
                instances += 1;
                let by_inequality = j.is_adjoint_power(n).expect("nonzero ideal");
                let by_divisibility = j.power(n + 1).divide_by(&j.adjoint()).is_some();
                let by_intersection = j.geometric_adjoint_condition(n);
                let by_construction = match j.adjoint_source(n) {
                    Ok(source) => source.adjoint() == j.power(n),
                    Err(_) => false,
                };
                if !(by_inequality == by_divisibility
                    && by_divisibility == by_intersection
                    && by_intersection == by_construction)
                {
                    record(
                        &mut failures,
                        format!(
                            "routes disagree for {j} at n={n}: inequality={by_inequality} \
                             divisibility={by_divisibility} intersection={by_intersection} \
                             construction={by_construction}"
                        ),
                    );
                }
            }
        }
    }
    SuiteOutcome {
        name: "adjoint-power-routes",
        instances,
        failures,
    }
}

/// `adjoint(I^n) = I^(n-1) * adjoint(I)` on randomized instances,
/// including residue degree two.
pub fn briancon_skoda_randomized() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x1dea);
    let mut instances = 0;
    for _ in 0..10_000 {
        let c = random_constellation(&mut rng, 7, true);
        let i = random_ideal(&mut rng, &c);
        let n = rng.gen_range(1..=5);
        instances += 1;
        let (lhs, rhs) = i.briancon_skoda_pair(n);
        if lhs != rhs {
            record(
                &mut failures,
                format!("identity fails for {i} at n={n}: {lhs} vs {rhs}"),
            );
        }
    }
    SuiteOutcome {
        name: "briancon-skoda-randomized",
        instances,
        failures,
    }
}

/// Once `J^n` is an adjoint, so is `J^k` for every
/// `k >= min(n, order - 1)`.
pub fn adjoint_power_monotonicity() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    for (_, ideals) in degree_one_instances() {
        for j in ideals {
            for n in 1..=3u64 {
                if !j.is_adjoint_power(n).expect("nonzero ideal") {
                    continue;
                }
                let start = n.min(j.order().saturating_sub(1)).max(1);
                for k in start..=n + 5 {
                    instances += 1;
                    if !j.is_adjoint_power(k).expect("nonzero ideal") {
                        record(
                            &mut failures,
                            format!("stability fails for {j}: n={n} but k={k} does not hold"),
                        );
                    }
                }
            }
        }
    }
    SuiteOutcome {
        name: "adjoint-power-monotonicity",
        instances,
        failures,
    }
}

/// The Gorenstein-blowup criteria agree: the excess-structure test, the
/// existence of an adjoint power, and the two intersection-number variants
/// at contracted curves; and the adjoint product always passes.
pub fn gorenstein_routes() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    for (c, ideals) in degree_one_instances() {
        for j in ideals {
            instances += 1;
            let direct = j.is_blowup_gorenstein();
            let by_exponent = j.min_adjoint_exponent().is_some();
            let res = Resolution::for_ideal(j);
            let excess = j.excess();
            let contracted: Vec<_> = j
                .support()
                .into_iter()
                .filter(|&b| excess.value(b) == 0)
                .collect();
            let by_self_intersection = contracted.iter().all(|&b| {
                let w = c.degree_over_base(b).expect("support point") as i64;
                res.self_intersection(b) == -2 * w
            });
            let by_canonical_degree = contracted.iter().all(|&b| res.canonical_degree(b) == 0);
            if !(direct == by_exponent
                && by_exponent == by_self_intersection
                && by_self_intersection == by_canonical_degree)
            {
                record(
                    &mut failures,
                    format!(
                        "Gorenstein routes disagree for {j}: structure={direct} \
                         exponent={by_exponent} self-intersection={by_self_intersection} \
                         canonical={by_canonical_degree}"
                    ),
                );
            }
            if let Some(n) = j.min_adjoint_exponent() {
                let threshold = j.order().saturating_sub(1).max(1);
                if !j
                    .is_adjoint_power(n.min(threshold).max(1))
                    .expect("nonzero")
                {
                    record(
                        &mut failures,
                        format!("{j}: the order-1 threshold is not an adjoint exponent (n={n})"),
                    );
                }
            }
            if !j.gorensteinfication().is_blowup_gorenstein() {
                record(
                    &mut failures,
                    format!("adjoint product of {j} has a non-Gorenstein blowup"),
                );
            }
        }
    }
    SuiteOutcome {
        name: "gorenstein-routes",
        instances,
        failures,
    }
}

/// The iterative unloading equals the componentwise-minimal complete basis
/// above the input, checked against a one-pass oracle everywhere and
/// against full box enumeration wherever the box is small enough.
pub fn unloading_minimality() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0u64;
    let mut brute_forced = 0u64;
    for c in enumerate_constellations(5, &[1, 2]) {
        let n = c.len();
        let mut values = vec![0u64; n];
        loop {
            instances += 1;
            let v = PointBasis::new(&c, values.clone()).expect("length matches");
            let unloaded = v.unload();
            let greedy = minimal_complete_above(&v);
            if unloaded != greedy {
                record(
                    &mut failures,
                    format!(
                        "unloading of {:?} on {} gives {unloaded}, oracle {greedy}",
                        values,
                        signature(&c, None)
                    ),
                );
            }
            if unloaded.values().iter().zip(v.values()).any(|(w, x)| w < x) {
                record(
                    &mut failures,
                    format!("unloading of {values:?} dropped below"),
                );
            }
            // the search box [v, product of simple-ideal powers] always
            // holds the minimum; enumerate it outright
            let cap = IdealClass::from_excess(
                &c,
                &v.values().iter().map(|&x| x as i64).collect::<Vec<_>>(),
            )
            .expect("nonnegative excesses");
            let check = brute_force_confirms_minimal(&v, &cap, &unloaded, u64::MAX)
                .expect("an unbounded budget always runs");
            brute_forced += 1;
            if !check.confirms {
                record(
                    &mut failures,
                    format!("box enumeration refutes minimality for {values:?}"),
                );
            }
            // odometer over [0,4]^n
            let mut i = 0;
            while i < n {
                values[i] += 1;
                if values[i] <= 4 {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    assert_eq!(brute_forced, instances, "every instance gets the box check");
    SuiteOutcome {
        name: "unloading-minimality",
        instances,
        failures,
    }
}

/// `e(I) = len(A/I) + len(A/adjoint(I))` everywhere, and on the monomial
/// corpus the cluster colength and multiplicity match the staircase count
/// and twice the polygon area.
pub fn length_multiplicity_identities() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    for (c, ideals) in degree_one_instances() {
        for i in ideals {
            instances += 1;
            let direct: u64 = c
                .points()
                .map(|p| c.degree_over_base(p).expect("point is known") * i.value(p) * i.value(p))
                .sum();
            if direct != i.colength() + i.adjoint().colength() {
                record(&mut failures, format!("length identity fails for {i}"));
            }
        }
    }
    for s in monomial_corpus() {
        instances += 1;
        let (_, ideal) = s.base_points().expect("corpus staircases are closed");
        if Ok(ideal.colength()) != s.colength() {
            record(
                &mut failures,
                format!("colength mismatch for staircase {s}"),
            );
        }
        let by_cluster = ideal.multiplicity().expect("corpus ideals are nonzero");
        let by_area = s.double_area().expect("corpus staircases are m-primary");
        if by_cluster != by_area {
            record(
                &mut failures,
                format!("multiplicity/area mismatch for staircase {s}"),
            );
        }
    }
    SuiteOutcome {
        name: "length-multiplicity-identities",
        instances,
        failures,
    }
}

/// The interior-lattice-point adjoint of a monomial ideal and the
/// proximity-side adjoint of its cluster are the same ideal.
pub fn monomial_adjoint_agreement() -> SuiteOutcome {
    let mut failures = Vec::new();
    let corpus = monomial_corpus();
    assert!(
        corpus.len() >= 500,
        "the corpus must hold at least 500 staircases, found {}",
        corpus.len()
    );
    let mut instances = 0;
    for s in corpus {
        instances += 1;
        let (_, ideal) = s.base_points().expect("corpus staircases are closed");
        let proximity_adjoint = ideal.adjoint();

        let howald = s.adjoint().expect("corpus staircases are m-primary");
        let (howald_cluster, howald_values) = match howald.base_points() {
            Ok((c, i)) => (c, i.values().to_vec()),
            Err(e) => {
                record(
                    &mut failures,
                    format!("adjoint staircase of {s} is not closed: {e}"),
                );
                continue;
            }
        };
        let howald_signature = signature(&howald_cluster, Some(&howald_values));
        if support_signature(&proximity_adjoint) != howald_signature {
            record(
                &mut failures,
                format!("adjoint clusters differ for staircase {s}"),
            );
        }
    }
    SuiteOutcome {
        name: "monomial-adjoint-agreement",
        instances,
        failures,
    }
}

/// The two-factor criteria agree on every simple pair with an order-one
/// companion drawn from the enumeration.
pub fn two_factor_routes() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut held = 0u64;
    for (c, _) in degree_one_instances() {
        let simples: Vec<IdealClass> = c
            .points()
            .map(|b| IdealClass::simple(c, b).expect("point is known"))
            .filter(|i| i.values().iter().all(|&v| v <= 4))
            .collect();
        for companion in simples.iter().filter(|i| i.order() == 1) {
            for main in &simples {
                if main == companion {
                    continue;
                }
                for p in 1..=3 {
                    instances += 1;
                    match crate::classifier::two_factor_adjoint_test(companion, main, p) {
                        Ok(report) => {
                            if report.holds() {
                                held += 1;
                            }
                        }
                        Err(e) => record(
                            &mut failures,
                            format!("two-factor test errored for {companion}, {main}: {e}"),
                        ),
                    }
                }
            }
        }
    }
    assert!(held > 0, "some pair has to satisfy the two-factor criteria");
    SuiteOutcome {
        name: "two-factor-routes",
        instances,
        failures,
    }
}

/// The adjoint, numerical, and structural characterizations of minimal
/// multiplicity agree on every enumerated ideal.
pub fn minimal_multiplicity_trichotomy() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    for (_, ideals) in degree_one_instances() {
        for i in ideals {
            instances += 1;
            let report = i.minimal_multiplicity_report().expect("nonzero ideal");
            if !(report.adjoint_route == report.numerical_route
                && report.numerical_route == report.structural_route)
            {
                record(
                    &mut failures,
                    format!("minimal-multiplicity routes disagree for {i}: {report:?}"),
                );
            }
        }
    }
    SuiteOutcome {
        name: "minimal-multiplicity-trichotomy",
        instances,
        failures,
    }
}

/// Runs every suite in order.
pub fn run_all() -> Vec<SuiteOutcome> {
    vec![
        cusp_fixture_facts(),
        adjoint_power_routes(),
        briancon_skoda_randomized(),
        adjoint_power_monotonicity(),
        gorenstein_routes(),
        unloading_minimality(),
        length_multiplicity_identities(),
        monomial_adjoint_agreement(),
        two_factor_routes(),
        minimal_multiplicity_trichotomy(),
    ]
}

/// Internal consistency of the degree-one cluster cache, used by tests.
pub fn degree_one_instance_count() -> (usize, u64) {
    let data = degree_one_instances();
    let ideals = data.iter().map(|(_, v)| v.len() as u64).sum();
    (data.len(), ideals)
}
