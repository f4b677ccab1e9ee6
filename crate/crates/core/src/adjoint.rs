//! Adjoint (multiplier) ideals with integer parameter.
//!
//! The adjoint of a complete ideal truncates every multiplicity by one. The
//! central decision procedure here answers when a given complete ideal — or
//! one of its powers — arises as the adjoint of some ideal, and constructs
//! the unique source with matching support when it does.

use thiserror::Error;

use crate::constellation::PointId;
use crate::ideal::{IdealClass, PointBasis};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdjointError {
    #[error("the ideal must be m-primary (nonzero point basis)")]
    NotPrimary,
    #[error("not an adjoint power: at {point} the excess bound fails: {lhs} < {rhs}")]
    NotAdjointPower { point: PointId, lhs: u64, rhs: u64 },
}

/// Per-point record of the adjoint-power inequality, for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointPowerCheck {
    pub point: PointId,
    /// `n * excess + 1`.
    pub bound: u64,
    /// Degree-weighted count of proximate support points.
    pub proximate_degree_sum: u64,
}

impl AdjointPowerCheck {
    pub fn holds(&self) -> bool {
        self.bound >= self.proximate_degree_sum
    }
}

impl IdealClass {
    /// The adjoint ideal: every positive multiplicity drops by one.
    /// The result always satisfies the proximity inequalities.
    pub fn adjoint(&self) -> IdealClass {
        let values: Vec<u64> = self.values().iter().map(|&v| v.saturating_sub(1)).collect();
        let basis = PointBasis::new(self.constellation(), values).expect("length preserved");
        IdealClass::from_basis(basis).expect("the truncated basis stays complete")
    }

    /// `r`-fold iterated adjoint.
    pub fn iterated_adjoint(&self, r: u64) -> IdealClass {
        let mut out = self.clone();
        for _ in 0..r {
            out = out.adjoint();
        }
        out
    }

    /// Evaluates, at every support point, the inequality governing whether
    /// the `n`-th power of this ideal is an adjoint:
    /// `n * excess + 1 >= sum of [C : B] over proximate support points C`.
    pub fn adjoint_power_checks(&self, n: u64) -> Result<Vec<AdjointPowerCheck>, AdjointError> {
        assert!(n >= 1, "the power must be positive");
        if self.is_unit() {
            return Err(AdjointError::NotPrimary);
        }
        let c = self.constellation();
        let excess = self.excess();
        let support = self.support();
        let mut checks = Vec::with_capacity(support.len());
        for &b in &support {
            let proximate_degree_sum: u64 = support
                .iter()
                .filter(|&&p| c.is_proximate(p, b))
                .map(|&p| {
                    c.degree_between(b, p)
                        .expect("proximate points are descendants")
                })
                .sum();
            let bound = n
                .checked_mul(excess.value(b) as u64)
                .and_then(|x| x.checked_add(1))
                .expect("excess bound overflow");
            checks.push(AdjointPowerCheck {
                point: b,
                bound,
                proximate_degree_sum,
            });
        }
        Ok(checks)
    }

    /// Whether `self^n` is the adjoint of some ideal.
    pub fn is_adjoint_power(&self, n: u64) -> Result<bool, AdjointError> {
        Ok(self.adjoint_power_checks(n)?.iter().all(|c| c.holds()))
    }

    /// The unique complete ideal `I` with the same support whose adjoint is
    /// `self^n`: multiplicity `n*r + 1` on the support, zero elsewhere.
    pub fn adjoint_source(&self, n: u64) -> Result<IdealClass, AdjointError> {
        let checks = self.adjoint_power_checks(n)?;
        if let Some(bad) = checks.iter().find(|c| !c.holds()) {
            return Err(AdjointError::NotAdjointPower {
                point: bad.point,
                lhs: bad.bound,
                rhs: bad.proximate_degree_sum,
            });
        }
        let values: Vec<u64> = self
            .values()
            .iter()
            .map(|&r| if r > 0 { n * r + 1 } else { 0 })
            .collect();
        let source = IdealClass::from_values(self.constellation(), values)
            .expect("the source basis satisfies the proximity inequalities");
        debug_assert_eq!(source.adjoint(), self.power(n));
        debug_assert_eq!(source.product(&self.adjoint()), self.power(n + 1));
        Ok(source)
    }

    /// The smallest positive `n` for which `self^n` is an adjoint, or `None`
    /// when no power is (equivalently, the blowup is not Gorenstein).
    pub fn min_adjoint_exponent(&self) -> Option<u64> {
        assert!(!self.is_unit(), "the unit ideal has no m-primary powers");
        let c = self.constellation();
        let excess = self.excess();
        let support = self.support();
        let mut needed = Some(1u64);
        for &b in &support {
            let proximate_degree_sum: u64 = support
                .iter()
                .filter(|&&p| c.is_proximate(p, b))
                .map(|&p| {
                    c.degree_between(b, p)
                        .expect("proximate points are descendants")
                })
                .sum();
            let deficiency = proximate_degree_sum as i64 - 1;
            if deficiency <= 0 {
                continue;
            }
            let e = excess.value(b);
            if e == 0 {
                needed = None;
                break;
            }
            let n_b = (deficiency as u64).div_ceil(e as u64);
            needed = needed.map(|n| n.max(n_b));
        }
        debug_assert_eq!(needed.is_some(), self.is_blowup_gorenstein());
        needed
    }

    /// Both sides of the Briançon–Skoda identity
    /// `adjoint(I^n) = I^(n-1) * adjoint(I)`, for the test suites.
    pub fn briancon_skoda_pair(&self, n: u64) -> (IdealClass, IdealClass) {
        assert!(n >= 1, "the power must be positive");
        let lhs = self.power(n).adjoint();
        let rhs = self.power(n - 1).product(&self.adjoint());
        (lhs, rhs)
    }

    /// Verifies that shifting the adjoint source by `p` is the same as
    /// multiplying by `self^p`: the source of `self` at exponent `n + p`
    /// must equal `self^p` times the source at exponent `n`.
    pub fn source_shift_agrees(&self, n: u64, p: u64) -> Result<bool, AdjointError> {
        let base = self.adjoint_source(n)?;
        let shifted = self.adjoint_source(n + p)?;
        Ok(shifted == self.power(p).product(&base))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

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
    fn adjoint_truncates() {
        let c = cusp3();
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert_eq!(p.adjoint(), IdealClass::maximal(&c));

        let order_one = IdealClass::from_values(&chain3(), [1, 1, 0]).unwrap();
        assert!(order_one.adjoint().is_unit());

        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        assert_eq!(j.adjoint().values(), &[2, 0, 0]);
    }

    #[test]
    fn iterated_adjoint_examples() {
        let c = cusp3();
        let i = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert_eq!(i.iterated_adjoint(1), i.adjoint());

        // two-fold adjoint of the square equals the square of the adjoint
        let sq = i.power(2);
        assert_eq!(sq.iterated_adjoint(2), i.adjoint().power(2));
        assert_eq!(sq.iterated_adjoint(2).values(), &[2, 0, 0]);

        let single = Arc::new(Constellation::new());
        for k in 1..6 {
            let mk = IdealClass::maximal(&single).power(k);
            assert!(mk.iterated_adjoint(k).is_unit());
        }
    }

    #[test]
    fn adjoint_power_examples() {
        let c = cusp3();
        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        assert!(j.is_adjoint_power(1).unwrap());

        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        for n in 1..8 {
            assert!(!p.is_adjoint_power(n).unwrap());
        }

        let single = Arc::new(Constellation::new());
        let m = IdealClass::maximal(&single);
        assert!(m.is_adjoint_power(1).unwrap());
        assert_eq!(m.power(2).adjoint(), m);

        assert_eq!(
            IdealClass::unit(&c).is_adjoint_power(1),
            Err(AdjointError::NotPrimary)
        );
    }

    #[test]
    fn adjoint_source_examples() {
        let c = cusp3();
        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        let i = j.adjoint_source(1).unwrap();
        assert_eq!(i.values(), &[4, 2, 2]);
        assert_eq!(i.adjoint(), j);
        assert_eq!(i.product(&j.adjoint()), j.power(2));

        let single = Arc::new(Constellation::new());
        let m = IdealClass::maximal(&single);
        assert_eq!(m.adjoint_source(1).unwrap(), m.power(2));

        let c3 = chain3();
        let j = IdealClass::from_values(&c3, [2, 2, 1]).unwrap();
        assert_eq!(j.adjoint_source(1).unwrap().values(), &[3, 3, 2]);

        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert!(matches!(
            p.adjoint_source(1),
            Err(AdjointError::NotAdjointPower { lhs: 1, rhs: 2, .. })
        ));
    }

    #[test]
    fn min_adjoint_exponent_examples() {
        let c = cusp3();
        let p = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        assert_eq!(p.min_adjoint_exponent(), None);

        let c3 = chain3();
        let j = IdealClass::from_values(&c3, [2, 2, 1]).unwrap();
        assert_eq!(j.min_adjoint_exponent(), Some(1));

        let d = deg2();
        let p = IdealClass::from_values(&d, [2, 1]).unwrap();
        assert_eq!(p.min_adjoint_exponent(), None);
    }

    #[test]
    fn min_adjoint_exponent_is_minimal() {
        for c in [chain3(), cusp3(), deg2()] {
            let mut ideals = vec![IdealClass::maximal(&c)];
            for b in c.points() {
                ideals.push(IdealClass::simple(&c, b).unwrap());
                ideals.push(
                    IdealClass::simple(&c, b)
                        .unwrap()
                        .product(&IdealClass::maximal(&c)),
                );
            }
            for i in ideals {
                match i.min_adjoint_exponent() {
                    Some(n) => {
                        assert!(i.is_adjoint_power(n).unwrap());
                        for k in 1..n {
                            assert!(!i.is_adjoint_power(k).unwrap());
                        }
                    }
                    None => {
                        for k in 1..12 {
                            assert!(!i.is_adjoint_power(k).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn briancon_skoda_examples() {
        let c = cusp3();
        let i = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        let (lhs, rhs) = i.briancon_skoda_pair(3);
        assert_eq!(lhs.values(), &[5, 2, 2]);
        assert_eq!(lhs, rhs);

        let (lhs, rhs) = i.briancon_skoda_pair(1);
        assert_eq!(lhs, i.adjoint());
        assert_eq!(rhs, i.adjoint());

        let single = Arc::new(Constellation::new());
        let m = IdealClass::maximal(&single);
        let (lhs, rhs) = m.briancon_skoda_pair(4);
        assert_eq!(lhs, m.power(3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn source_shift_examples() {
        let c = cusp3();
        let j = IdealClass::from_values(&c, [3, 1, 1]).unwrap();
        assert!(j.source_shift_agrees(1, 2).unwrap());
        assert!(j.source_shift_agrees(1, 0).unwrap());

        let c3 = chain3();
        let j = IdealClass::from_values(&c3, [2, 2, 1]).unwrap();
        assert!(j.source_shift_agrees(1, 1).unwrap());
    }

    #[test]
    fn power_stability() {
        // once a power is an adjoint, all larger powers are; and order-1
        // thresholds: from min(n, order-1) on, every power works
        let c3 = chain3();
        let samples = [
            IdealClass::from_values(&c3, [2, 2, 1]).unwrap(),
            IdealClass::from_values(&c3, [3, 2, 1]).unwrap(),
            IdealClass::from_values(&cusp3(), [3, 1, 1]).unwrap(),
        ];
        for j in samples {
            for n in 1..6 {
                if j.is_adjoint_power(n).unwrap() {
                    let start = n.min(j.order().saturating_sub(1)).max(1);
                    for k in start..n + 6 {
                        assert!(j.is_adjoint_power(k).unwrap(), "j={j} n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn stepwise_iterated_adjoints() {
        // with j = adjoint(i), the iterated adjoints of i^n descend through
        // i^(n-k) * j^k
        let c = cusp3();
        let i = IdealClass::from_values(&c, [2, 1, 1]).unwrap();
        let j = i.adjoint();
        for n in 1..5u64 {
            let mut cur = i.power(n);
            for k in 0..=n {
                assert_eq!(cur, i.power(n - k).product(&j.power(k)));
                if k < n {
                    cur = cur.adjoint();
                }
            }
            assert_eq!(i.power(n).iterated_adjoint(n), j.power(n));
        }
    }
}
