//! Intersection theory on the minimal resolution.
//!
//! Divisors supported on the exceptional locus are written in two integer
//! bases: the total transforms `E*` (where a point basis is literally the
//! coordinate vector of the divisor of the ideal) and the strict transforms
//! `E` (the prime exceptional curves). The intersection form is diagonal in
//! the total basis, with `E*_B · E*_B = -[B : base]`, and the two bases are
//! related through proximity: `E_B = E*_B - sum of E*_C over points C
//! proximate to B`.

use std::sync::Arc;

use crate::constellation::{Constellation, PointId};
use crate::ideal::IdealClass;

/// The combinatorial shadow of the minimal resolution over an
/// ancestor-closed set of points: intersection numbers, base changes, the
/// canonical divisor, anti-nef tests.
#[derive(Debug, Clone)]
pub struct Resolution {
    constellation: Arc<Constellation>,
    points: Vec<PointId>,
    position: Vec<Option<usize>>,
    /// `[B : base]` per position; minus the diagonal of the form.
    weights: Vec<i64>,
}

/// Integer divisor in total-transform coordinates, relative to a [`Resolution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalDivisor {
    values: Vec<i64>,
}

impl TotalDivisor {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_effective(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }
}

/// Integer divisor in strict-transform coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictDivisor {
    values: Vec<i64>,
}

impl StrictDivisor {
    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

impl Resolution {
    fn build(constellation: &Arc<Constellation>, points: Vec<PointId>) -> Self {
        let mut position = vec![None; constellation.len()];
        for (i, &p) in points.iter().enumerate() {
            if let Some(parent) = constellation.parent(p) {
                assert!(
                    position[parent.index()].is_some(),
                    "resolution support must be ancestor-closed"
                );
            }
            position[p.index()] = Some(i);
        }
        let weights = points
            .iter()
            .map(|&p| constellation.degree_over_base(p).expect("point is known") as i64)
            .collect();
        Resolution {
            constellation: constellation.clone(),
            points,
            position,
            weights,
        }
    }

    /// The resolution blowing up every point of the constellation.
    pub fn full(constellation: &Arc<Constellation>) -> Self {
        Self::build(constellation, constellation.points().collect())
    }

    /// The minimal resolution of the blowup along `ideal`: exactly the base
    /// points are blown up.
    pub fn for_ideal(ideal: &IdealClass) -> Self {
        assert!(!ideal.is_unit(), "the unit ideal has no base points");
        Self::build(ideal.constellation(), ideal.support())
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, p: PointId) -> Option<usize> {
        self.position.get(p.index()).copied().flatten()
    }

    /// Residue degree over the base of the point at `position`.
    pub fn weight(&self, position: usize) -> i64 {
        self.weights[position]
    }

    pub fn total_divisor(&self, values: impl Into<Vec<i64>>) -> TotalDivisor {
        let values = values.into();
        assert_eq!(values.len(), self.len(), "divisor length mismatch");
        TotalDivisor { values }
    }

    pub fn strict_divisor(&self, values: impl Into<Vec<i64>>) -> StrictDivisor {
        let values = values.into();
        assert_eq!(values.len(), self.len(), "divisor length mismatch");
        StrictDivisor { values }
    }

    /// The divisor cut out by an ideal: its point basis read in total
    /// coordinates.
    pub fn divisor_of(&self, ideal: &IdealClass) -> TotalDivisor {
        let values = self.points.iter().map(|&p| ideal.value(p) as i64).collect();
        TotalDivisor { values }
    }

    /// The canonical divisor: the sum of all total transforms.
    pub fn canonical_divisor(&self) -> TotalDivisor {
        TotalDivisor {
            values: vec![1; self.len()],
        }
    }

    /// Positions of the proximity targets of the point at `pos` that lie
    /// inside this resolution.
    fn proximities_inside(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.points[pos];
        self.constellation
            .proximity_targets(p)
            .filter_map(move |b| self.position(b))
    }

    /// Rewrites strict coordinates in the total basis.
    pub fn to_total(&self, d: &StrictDivisor) -> TotalDivisor {
        let mut values = d.values.clone();
        for (pos, value) in values.iter_mut().enumerate() {
            for bpos in self.proximities_inside(pos) {
                *value -= d.values[bpos];
            }
        }
        TotalDivisor { values }
    }

    /// Rewrites total coordinates in the strict basis; inverse of
    /// [`Resolution::to_total`].
    pub fn to_strict(&self, d: &TotalDivisor) -> StrictDivisor {
        let mut values = vec![0i64; self.len()];
        for pos in 0..self.len() {
            let mut v = d.values[pos];
            for bpos in self.proximities_inside(pos) {
                v += values[bpos];
            }
            values[pos] = v;
        }
        StrictDivisor { values }
    }

    /// The exceptional curve of a point, in total coordinates.
    pub fn exceptional(&self, b: PointId) -> TotalDivisor {
        let pos = self.position(b).expect("point lies in the resolution");
        let mut values = vec![0i64; self.len()];
        values[pos] = 1;
        self.to_total(&StrictDivisor { values })
    }

    /// The symmetric bilinear intersection form, diagonal in the total basis.
    pub fn intersect(&self, a: &TotalDivisor, b: &TotalDivisor) -> i64 {
        assert_eq!(a.values.len(), self.len());
        assert_eq!(b.values.len(), self.len());
        (0..self.len())
            .map(|i| -self.weights[i] * a.values[i] * b.values[i])
            .sum()
    }

    /// Self-intersection of the exceptional curve of `b`, through the form.
    pub fn self_intersection(&self, b: PointId) -> i64 {
        let e = self.exceptional(b);
        self.intersect(&e, &e)
    }

    /// Intersection of the canonical divisor with the exceptional curve of `b`.
    pub fn canonical_degree(&self, b: PointId) -> i64 {
        self.intersect(&self.canonical_divisor(), &self.exceptional(b))
    }

    /// Whether `d` meets every exceptional curve non-positively. For an
    /// effective divisor in total coordinates this is equivalent to the
    /// coefficient vector being a complete point basis.
    pub fn is_antinef(&self, d: &TotalDivisor) -> bool {
        assert_eq!(d.values.len(), self.len());
        (0..self.len()).all(|pos| {
            let mut pairing = -self.weights[pos] * d.values[pos];
            for cpos in self.curves_meeting(pos) {
                pairing += self.weights[cpos] * d.values[cpos];
            }
            pairing <= 0
        })
    }

    /// Positions of points proximate to the point at `pos` inside the
    /// resolution (the curves whose total transforms meet `E` at `pos`).
    fn curves_meeting(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&cpos| {
            self.constellation
                .is_proximate(self.points[cpos], self.points[pos])
        })
    }

    /// The full matrix of pairwise intersections of the exceptional curves,
    /// in strict coordinates (the dual graph intersection matrix).
    pub fn strict_intersection_matrix(&self) -> Vec<Vec<i64>> {
        let exceptional: Vec<TotalDivisor> =
            self.points.iter().map(|&p| self.exceptional(p)).collect();
        exceptional
            .iter()
            .map(|a| exceptional.iter().map(|b| self.intersect(a, b)).collect())
            .collect()
    }
}

impl IdealClass {
    /// The intersection-theoretic form of the adjoint-power test on the
    /// minimal resolution of this ideal: at every base point,
    /// `E_B^2 >= -2[B:base] + n (F · E_B)` with `F` the divisor of the
    /// ideal. Agrees with [`IdealClass::is_adjoint_power`].
    pub fn geometric_adjoint_condition(&self, n: u64) -> bool {
        assert!(n >= 1, "the power must be positive");
        assert!(!self.is_unit(), "the unit ideal has no base points");
        let res = Resolution::for_ideal(self);
        let f = res.divisor_of(self);
        res.points().iter().all(|&b| {
            let e = res.exceptional(b);
            let e2 = res.intersect(&e, &e);
            let w = res.weight(res.position(b).expect("support point"));
            e2 >= -2 * w + (n as i64) * res.intersect(&f, &e)
        })
    }

    /// Whether the blowup along this ideal is Gorenstein: every base point
    /// of excess zero must have exactly one proximate base point, of
    /// relative degree one.
    pub fn is_blowup_gorenstein(&self) -> bool {
        assert!(!self.is_unit(), "the unit ideal blows up nothing");
        let c = self.constellation();
        let excess = self.excess();
        let support = self.support();
        support.iter().filter(|&&b| excess.value(b) == 0).all(|&b| {
            let proximate: Vec<PointId> = support
                .iter()
                .copied()
                .filter(|&p| c.is_proximate(p, b))
                .collect();
            proximate.len() == 1 && c.degree_between(b, proximate[0]) == Some(1)
        })
    }

    /// The product with the own adjoint. Its blowup is always Gorenstein,
    /// and it is the combinatorial counterpart of the canonical model of
    /// the minimal resolution over the blowup.
    pub fn gorensteinfication(&self) -> IdealClass {
        assert!(!self.is_unit(), "the unit ideal blows up nothing");
        let out = self.product(&self.adjoint());
        assert!(
            out.is_blowup_gorenstein(),
            "the adjoint product always has a Gorenstein blowup"
        );
        out
    }

    /// Whether the canonical model of the minimal resolution collapses back
    /// onto the blowup, i.e. the blowup is already Gorenstein. Checked a
    /// second way: the excess-zero locus must not shrink when passing to
    /// the adjoint product.
    pub fn canonical_model_is_trivial(&self) -> bool {
        let direct = self.is_blowup_gorenstein();
        let excess = self.excess();
        let product_excess = self.gorensteinfication().excess();
        let same_contracted_locus = self
            .support()
            .into_iter()
            .filter(|&b| excess.value(b) == 0)
            .all(|b| product_excess.value(b) == 0);
        assert_eq!(
            direct, same_contracted_locus,
            "the two Gorenstein criteria must agree"
        );
        direct
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::Constellation;

    fn chain3() -> Arc<Constellation> {
        let mut c = Constellation::new();
        let a1 = c.add_point(c.root(), None, 1).unwrap();
        c.add_point(a1, None, 1).unwrap();
        Arc::new(c)
    }

    fn cusp3() -> Arc<Constellation> {
        let mut c = Constellation::new();
        let a1 = c.add_point(c.root(), None, 1).unwrap();
        c.add_point(a1, Some(c.root()), 1).unwrap();
        Arc::new(c)
    }

    fn deg2() -> Arc<Constellation> {
        let mut c = Constellation::new();
        c.add_point(c.root(), None, 2).unwrap();
        Arc::new(c)
    }

    #[test]
    fn base_change_round_trips() {
        for c in [chain3(), cusp3(), deg2()] {
            let res = Resolution::full(&c);
            for values in [[1i64, -2, 3].as_slice(), &[0, 1, 0], &[5, 5, 5]] {
                let values = &values[..res.len().min(values.len())];
                let d = res.total_divisor(values);
                assert_eq!(res.to_total(&res.to_strict(&d)), d);
            }
            // single root: the identity
            let single = Arc::new(Constellation::new());
            let res = Resolution::full(&single);
            let d = res.total_divisor([7]);
            assert_eq!(res.to_strict(&d).values(), &[7]);
        }
    }

    #[test]
    fn strict_basis_relation_on_cusp3() {
        let c = cusp3();
        let res = Resolution::full(&c);
        // E_{A0} = E*_{A0} - E*_{A1} - E*_{A2}
        let e0 = res.exceptional(c.root());
        assert_eq!(e0.values(), &[1, -1, -1]);
    }

    #[test]
    fn self_intersection_two_routes() {
        // through the form and through the proximity formula
        for c in [chain3(), cusp3(), deg2()] {
            let res = Resolution::full(&c);
            for b in c.points() {
                let via_form = res.self_intersection(b);
                let degree = c.degree_over_base(b).unwrap() as i64;
                let prox_sum: i64 = c
                    .points()
                    .filter(|&p| c.is_proximate(p, b))
                    .map(|p| c.degree_between(b, p).unwrap() as i64)
                    .sum();
                assert_eq!(via_form, degree * (-1 - prox_sum));
            }
            // same comparison with the proximate points clipped to a
            // smaller support
            let m = IdealClass::maximal(&c);
            for ideal in [m.clone(), m.product(&m)] {
                let res = Resolution::for_ideal(&ideal);
                for &b in res.points() {
                    let degree = c.degree_over_base(b).unwrap() as i64;
                    let prox_sum: i64 = res
                        .points()
                        .iter()
                        .filter(|&&p| c.is_proximate(p, b))
                        .map(|&p| c.degree_between(b, p).unwrap() as i64)
                        .sum();
                    assert_eq!(res.self_intersection(b), degree * (-1 - prox_sum));
                }
            }
        }
        let c = cusp3();
        let res = Resolution::full(&c);
        assert_eq!(res.self_intersection(c.root()), -3);
        let d = deg2();
        let res = Resolution::full(&d);
        assert_eq!(res.self_intersection(d.root()), -3);
        let single = Arc::new(Constellation::new());
        assert_eq!(
            Resolution::full(&single).self_intersection(single.root()),
            -1
        );
    }

    #[test]
    fn canonical_degree_two_routes() {
        for c in [chain3(), cusp3(), deg2()] {
            let res = Resolution::full(&c);
            for b in c.points() {
                let via_form = res.canonical_degree(b);
                let degree = c.degree_over_base(b).unwrap() as i64;
                // K · E_B = -E_B^2 - 2[B:base]
                assert_eq!(via_form, -res.self_intersection(b) - 2 * degree);
                // K · E_B = sum of [C:base] over proximate C, minus [B:base]
                let prox_sum: i64 = c
                    .points()
                    .filter(|&p| c.is_proximate(p, b))
                    .map(|p| c.degree_over_base(p).unwrap() as i64)
                    .sum();
                assert_eq!(via_form, prox_sum - degree);
            }
        }
    }

    #[test]
    fn canonical_divisor_is_all_ones() {
        let c = cusp3();
        let res = Resolution::full(&c);
        assert_eq!(res.canonical_divisor().values(), &[1, 1, 1]);
        let single = Arc::new(Constellation::new());
        assert_eq!(Resolution::full(&single).canonical_divisor().values(), &[1]);
    }

    #[test]
    fn antinef_matches_completeness() {
        let c = cusp3();
        let res = Resolution::full(&c);
        assert!(res.is_antinef(&res.total_divisor([2, 1, 1])));
        assert!(!res.is_antinef(&res.total_divisor([1, 1, 1])));
        assert!(res.is_antinef(&res.total_divisor([0, 0, 0])));

        // pairing against E_B equals -[B:base] * excess for effective divisors
        for c in [chain3(), cusp3(), deg2()] {
            let res = Resolution::full(&c);
            for values in [[2u64, 1, 1].as_slice(), &[1, 1, 1], &[3, 0, 2]] {
                let values = &values[..res.len().min(values.len())];
                let basis = crate::ideal::PointBasis::new(&c, values).unwrap();
                let excess = basis.excess();
                let d = res.total_divisor(values.iter().map(|&v| v as i64).collect::<Vec<_>>());
                for b in c.points() {
                    let pairing = res.intersect(&d, &res.exceptional(b));
                    let w = c.degree_over_base(b).unwrap() as i64;
                    assert_eq!(pairing, -w * excess.value(b));
                }
            }
        }
    }

    #[test]
    fn geometric_condition_matches_arithmetic() {
        let c = cusp3();
        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        assert!(j.geometric_adjoint_condition(1));
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert!(!p.geometric_adjoint_condition(5));
        let single = Arc::new(Constellation::new());
        assert!(IdealClass::maximal(&single).geometric_adjoint_condition(1));

        for c in [chain3(), cusp3(), deg2()] {
            let mut ideals = vec![IdealClass::maximal(&c)];
            for b in c.points() {
                ideals.push(IdealClass::simple(&c, b).unwrap());
            }
            ideals.push(ideals[0].product(&ideals[ideals.len() - 1]));
            for i in &ideals {
                for n in 1..4 {
                    assert_eq!(
                        i.geometric_adjoint_condition(n),
                        i.is_adjoint_power(n).unwrap(),
                        "i={i} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn gorenstein_examples() {
        let c3 = chain3();
        let j = IdealClass::from_values(&c3, [2, 2, 1]).unwrap();
        assert!(j.is_blowup_gorenstein());

        let c = cusp3();
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert!(!p.is_blowup_gorenstein());

        let single = Arc::new(Constellation::new());
        assert!(IdealClass::maximal(&single).is_blowup_gorenstein());

        // degree sensitivity: excess-zero point whose unique proximate
        // support point has degree two
        let d = deg2();
        let p = IdealClass::from_values(&d, [2, 1]).unwrap();
        assert!(!p.is_blowup_gorenstein());
    }

    #[test]
    fn gorensteinfication_examples() {
        let c = cusp3();
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        let g = p.gorensteinfication();
        assert_eq!(g.values(), &[3, 1, 1]);
        assert!(g.is_blowup_gorenstein());

        let single = Arc::new(Constellation::new());
        let m = IdealClass::maximal(&single);
        assert_eq!(m.gorensteinfication(), m);

        let c3 = chain3();
        let j = IdealClass::from_values(&c3, [2, 2, 1]).unwrap();
        assert_eq!(j.gorensteinfication().values(), &[3, 3, 1]);
        assert!(j.gorensteinfication().is_blowup_gorenstein());
    }

    #[test]
    fn canonical_model_examples() {
        let single = Arc::new(Constellation::new());
        assert!(IdealClass::maximal(&single).canonical_model_is_trivial());

        let c = cusp3();
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert!(!p.canonical_model_is_trivial());
        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        assert!(j.canonical_model_is_trivial());
    }

    #[test]
    fn resolution_for_ideal_restricts_support() {
        let c = cusp3();
        let m = IdealClass::maximal(&c);
        let res = Resolution::for_ideal(&m);
        assert_eq!(res.points(), &[c.root()]);
        assert_eq!(res.self_intersection(c.root()), -1);

        // on the full resolution the root curve meets the later blowups
        let res = Resolution::full(&c);
        assert_eq!(res.self_intersection(c.root()), -3);
    }

    #[test]
    fn intersection_matrix_is_symmetric() {
        for c in [chain3(), cusp3(), deg2()] {
            let res = Resolution::full(&c);
            let m = res.strict_intersection_matrix();
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert_eq!(*v, m[j][i]);
                }
            }
        }
    }
}
