//! Exhaustive and randomized instance generation for the verification
//! suites: constellations up to isomorphism, all complete ideals with
//! bounded entries, and canonical cluster signatures.

use std::collections::HashSet;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use crate::constellation::{Constellation, PointId};
use crate::ideal::{IdealClass, PointBasis};

/// All valid constellations with at most `max_points` points and edge
/// degrees drawn from `degrees`, one representative per isomorphism class.
pub fn enumerate_constellations(max_points: usize, degrees: &[u64]) -> Vec<Arc<Constellation>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![Constellation::new()];
    while let Some(c) = stack.pop() {
        if !seen.insert(signature(&c, None)) {
            // an isomorphic copy was expanded before; extensions of
            // isomorphic clusters cover the same classes
            continue;
        }
        out.push(Arc::new(c.clone()));
        if c.len() >= max_points {
            continue;
        }
        for parent in c.points() {
            let mut targets: Vec<Option<PointId>> = vec![None];
            targets.extend(c.proximity_targets(parent).map(Some));
            for target in targets {
                for &degree in degrees {
                    let mut next = c.clone();
                    next.add_point(parent, target, degree)
                        .expect("enumerated extensions are valid");
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// All nonzero point bases with entries at most `max_entry` satisfying the
/// proximity inequalities, enumerated children-first with pruning.
pub fn enumerate_complete_ideals(
    constellation: &Arc<Constellation>,
    max_entry: u64,
) -> Vec<IdealClass> {
    let n = constellation.len();
    let mut values = vec![0u64; n];
    let mut out = Vec::new();
    fill_point(constellation, max_entry, n, &mut values, &mut out);
    out
}

fn fill_point(
    constellation: &Arc<Constellation>,
    max_entry: u64,
    remaining: usize,
    values: &mut Vec<u64>,
    out: &mut Vec<IdealClass>,
) {
    if remaining == 0 {
        if values.iter().any(|&v| v > 0) {
            out.push(
                IdealClass::from_values(constellation, values.clone())
                    .expect("enumeration respects the proximity inequalities"),
            );
        }
        return;
    }
    let i = remaining - 1;
    let b = PointId::from_index(i);
    let forced: u64 = constellation
        .points()
        .skip(i + 1)
        .filter(|&p| constellation.is_proximate(p, b))
        .map(|p| {
            constellation
                .degree_between(b, p)
                .expect("proximate points are descendants")
                * values[p.index()]
        })
        .sum();
    if forced > max_entry {
        return;
    }
    for r in forced..=max_entry {
        values[i] = r;
        fill_point(constellation, max_entry, remaining - 1, values, out);
    }
    values[i] = 0;
}

/// Canonical string of a cluster up to isomorphism. Children are sorted by
/// their encodings; satellite targets are encoded relative to the parent
/// (grandparent vs. the parent's own target), which determines them
/// uniquely. Pass multiplicities to compare weighted clusters.
pub fn signature(constellation: &Constellation, values: Option<&[u64]>) -> String {
    fn encode(c: &Constellation, values: Option<&[u64]>, p: PointId, out: &mut String) {
        out.push('(');
        let degree = c.edge_degree(p);
        if degree != 1 {
            out.push_str(&format!("d{degree}"));
        }
        if let Some(target) = c.satellite_target(p) {
            let parent = c.parent(p).expect("satellites are not roots");
            if Some(target) == c.parent(parent) {
                out.push('G');
            } else {
                debug_assert_eq!(Some(target), c.satellite_target(parent));
                out.push('T');
            }
        }
        if let Some(values) = values {
            out.push_str(&format!("m{}", values[p.index()]));
        }
        let mut children: Vec<String> = c
            .points()
            .filter(|&q| c.parent(q) == Some(p))
            .map(|q| {
                let mut s = String::new();
                encode(c, values, q, &mut s);
                s
            })
            .collect();
        children.sort();
        for child in children {
            out.push_str(&child);
        }
        out.push(')');
    }
    let mut out = String::new();
    encode(constellation, values, constellation.root(), &mut out);
    out
}

/// The support of an ideal as a standalone cluster: the sub-constellation
/// spanned by the support points together with the restricted basis. The
/// unit ideal restricts to a bare root with multiplicity zero.
pub fn restrict_to_support(ideal: &IdealClass) -> (Arc<Constellation>, Vec<u64>) {
    let c = ideal.constellation();
    let support = if ideal.is_unit() {
        vec![c.root()]
    } else {
        ideal.support()
    };
    let mut position = vec![None; c.len()];
    for (i, &p) in support.iter().enumerate() {
        position[p.index()] = Some(i);
    }
    let mut sub = Constellation::new();
    for &p in support.iter().skip(1) {
        let parent = c.parent(p).expect("support is ancestor-closed");
        let parent = PointId::from_index(position[parent.index()].expect("parent in support"));
        let satellite = c
            .satellite_target(p)
            .and_then(|t| position[t.index()])
            .map(PointId::from_index);
        sub.add_point(parent, satellite, c.edge_degree(p))
            .expect("support restriction stays valid");
    }
    let values = support.iter().map(|&p| ideal.value(p)).collect();
    (Arc::new(sub), values)
}

/// Canonical signature of the support cluster of an ideal.
pub fn support_signature(ideal: &IdealClass) -> String {
    let (sub, values) = restrict_to_support(ideal);
    signature(&sub, Some(&values))
}

/// A random valid constellation with 2 to `max_points` points.
pub fn random_constellation(
    rng: &mut StdRng,
    max_points: usize,
    allow_degree_two: bool,
) -> Arc<Constellation> {
    let n = rng.gen_range(2..=max_points);
    let mut c = Constellation::new();
    while c.len() < n {
        let parent = PointId::from_index(rng.gen_range(0..c.len()));
        let targets: Vec<PointId> = c.proximity_targets(parent).collect();
        let satellite = if !targets.is_empty() && rng.gen_bool(0.4) {
            Some(targets[rng.gen_range(0..targets.len())])
        } else {
            None
        };
        let degree = if allow_degree_two && rng.gen_bool(0.25) {
            2
        } else {
            1
        };
        c.add_point(parent, satellite, degree)
            .expect("random extensions are valid");
    }
    Arc::new(c)
}

/// A random complete nonzero ideal, built from a random excess vector.
pub fn random_ideal(rng: &mut StdRng, constellation: &Arc<Constellation>) -> IdealClass {
    loop {
        let excess: Vec<i64> = (0..constellation.len())
            .map(|_| rng.gen_range(0..=3))
            .collect();
        if excess.iter().any(|&e| e > 0) {
            return IdealClass::from_excess(constellation, &excess)
                .expect("nonnegative excesses define an ideal");
        }
    }
}

/// The componentwise-least complete basis above `v`, computed by one
/// children-first pass: every point takes the larger of its own value and
/// the sum forced by its proximate points. Serves as the independent oracle
/// for the iterative unloading.
pub fn minimal_complete_above(v: &PointBasis) -> IdealClass {
    let c = v.constellation();
    let n = c.len();
    let mut values = v.values().to_vec();
    for i in (0..n).rev() {
        let b = PointId::from_index(i);
        let forced: u64 = c
            .points()
            .skip(i + 1)
            .filter(|&p| c.is_proximate(p, b))
            .map(|p| {
                c.degree_between(b, p)
                    .expect("proximate points are descendants")
                    * values[p.index()]
            })
            .sum();
        values[i] = values[i].max(forced);
    }
    IdealClass::from_values(c, values).expect("the pass ends on a complete basis")
}

/// Outcome of a box enumeration around an unloading result.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceCheck {
    /// Complete bases visited inside the box.
    pub visited: u64,
    /// The candidate was found and no visited basis undercuts it anywhere.
    pub confirms: bool,
}

/// Enumerates every complete basis `w` with `v <= w <= cap` and checks that
/// `candidate` is among them and componentwise below all of them. Returns
/// `None` when the box holds more than `budget` vectors.
pub fn brute_force_confirms_minimal(
    v: &PointBasis,
    cap: &IdealClass,
    candidate: &IdealClass,
    budget: u64,
) -> Option<BruteForceCheck> {
    let mut box_size: u64 = 1;
    for (lo, hi) in v.values().iter().zip(cap.values()) {
        box_size = box_size.saturating_mul(hi - lo + 1);
        if box_size > budget {
            return None;
        }
    }
    let c = v.constellation();
    let n = c.len();
    let mut values = vec![0u64; n];
    let mut visited = 0u64;
    let mut seen_candidate = false;
    let mut all_above = true;
    #[allow(clippy::too_many_arguments)]
    fn walk(
        c: &Arc<Constellation>,
        v: &[u64],
        cap: &[u64],
        candidate: &[u64],
        remaining: usize,
        values: &mut Vec<u64>,
        visited: &mut u64,
        seen_candidate: &mut bool,
        all_above: &mut bool,
    ) {
        if remaining == 0 {
            *visited += 1;
            if values == candidate {
                *seen_candidate = true;
            }
            if values.iter().zip(candidate).any(|(w, c)| w < c) {
                *all_above = false;
            }
            return;
        }
        let i = remaining - 1;
        let b = PointId::from_index(i);
        let forced: u64 = c
            .points()
            .skip(i + 1)
            .filter(|&p| c.is_proximate(p, b))
            .map(|p| {
                c.degree_between(b, p)
                    .expect("proximate points are descendants")
                    * values[p.index()]
            })
            .sum();
        let lo = forced.max(v[i]);
        if lo > cap[i] {
            return;
        }
        for r in lo..=cap[i] {
            values[i] = r;
            walk(
                c,
                v,
                cap,
                candidate,
                remaining - 1,
                values,
                visited,
                seen_candidate,
                all_above,
            );
        }
        values[i] = 0;
    }
    walk(
        c,
        v.values(),
        cap.values(),
        candidate.values(),
        n,
        &mut values,
        &mut visited,
        &mut seen_candidate,
        &mut all_above,
    );
    Some(BruteForceCheck {
        visited,
        confirms: seen_candidate && all_above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn enumeration_counts_are_stable() {
        let ones = enumerate_constellations(3, &[1]);
        // root; chain of 2; chain of 3; cusp of 3; root with two children
        assert_eq!(ones.len(), 5);
        for c in &ones {
            assert!(c.validate().is_valid());
        }

        let four = enumerate_constellations(4, &[1]);
        assert!(four.len() > ones.len());
        let mut sigs: Vec<String> = four.iter().map(|c| signature(c, None)).collect();
        sigs.sort();
        sigs.dedup();
        assert_eq!(sigs.len(), four.len(), "no duplicate classes");
    }

    #[test]
    fn complete_ideal_enumeration_matches_definition() {
        for c in enumerate_constellations(3, &[1, 2]) {
            let listed = enumerate_complete_ideals(&c, 2);
            let mut expected = 0;
            let n = c.len();
            let mut values = vec![0u64; n];
            loop {
                let basis = PointBasis::new(&c, values.clone()).unwrap();
                if !basis.is_zero() && basis.is_complete() {
                    expected += 1;
                }
                // odometer over [0,2]^n
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    values[i] += 1;
                    if values[i] <= 2 {
                        break;
                    }
                    values[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            assert_eq!(listed.len(), expected, "on {}", signature(&c, None));
        }
    }

    #[test]
    fn signatures_identify_isomorphic_clusters() {
        // two branches added in either order
        let mut a = Constellation::new();
        let a1 = a.add_point(a.root(), None, 1).unwrap();
        a.add_point(a1, None, 1).unwrap();
        a.add_point(a.root(), None, 2).unwrap();

        let mut b = Constellation::new();
        b.add_point(b.root(), None, 2).unwrap();
        let b1 = b.add_point(b.root(), None, 1).unwrap();
        b.add_point(b1, None, 1).unwrap();

        assert_eq!(signature(&a, None), signature(&b, None));
        assert_ne!(
            signature(&a, Some(&[1, 1, 0, 0])),
            signature(&b, Some(&[1, 1, 0, 0]))
        );
        assert_eq!(
            signature(&a, Some(&[1, 1, 0, 0])),
            signature(&b, Some(&[1, 0, 1, 0]))
        );
    }

    #[test]
    fn greedy_matches_iterative_unloading() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let c = random_constellation(&mut rng, 6, true);
            let values: Vec<u64> = (0..c.len()).map(|_| rng.gen_range(0..=4)).collect();
            let v = PointBasis::new(&c, values).unwrap();
            assert_eq!(v.unload(), minimal_complete_above(&v));
        }
    }

    #[test]
    fn unloading_is_update_order_independent() {
        // an arbitrary-order relaxation reaches the same fixed point
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let c = random_constellation(&mut rng, 6, true);
            let values: Vec<u64> = (0..c.len()).map(|_| rng.gen_range(0..=4)).collect();
            let v = PointBasis::new(&c, values).unwrap();
            let mut chaotic = v.values().to_vec();
            loop {
                let violated: Vec<usize> = (0..c.len())
                    .filter(|&i| {
                        let b = PointId::from_index(i);
                        let forced: u64 = c
                            .points()
                            .filter(|&p| c.is_proximate(p, b))
                            .map(|p| c.degree_between(b, p).unwrap() * chaotic[p.index()])
                            .sum();
                        chaotic[i] < forced
                    })
                    .collect();
                if violated.is_empty() {
                    break;
                }
                let pick = violated[rng.gen_range(0..violated.len())];
                let b = PointId::from_index(pick);
                chaotic[pick] = c
                    .points()
                    .filter(|&p| c.is_proximate(p, b))
                    .map(|p| c.degree_between(b, p).unwrap() * chaotic[p.index()])
                    .sum();
            }
            assert_eq!(v.unload().values(), chaotic.as_slice());
        }
    }
}
