//! Numerical invariants of complete ideals.
//!
//! Colength and multiplicity come out of the point basis by the
//! Hoskin–Deligne formula; the multiplicity is additionally recomputed from
//! the length identity `e(I) = len(A/I) + len(A/adjoint(I))` and the two
//! routes are required to agree. Minimal multiplicity in the sense of Goto
//! is decided three independent ways.

use crate::ideal::{IdealClass, IdealError};

/// The three equivalent readings of minimal multiplicity, evaluated
/// independently so they can be cross-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalMultiplicityReport {
    /// The adjoint is the unit ideal or the maximal ideal.
    pub adjoint_route: bool,
    /// `e(I) = mu(I) + len(A/I) - 2` with `mu = order + 1`.
    pub numerical_route: bool,
    /// Order one, or simple with basis `(2,1,...,1)`, or a product of two
    /// order-one ideals whose supports meet only at the base point.
    pub structural_route: bool,
}

impl IdealClass {
    /// Colength `len(A/I)`: the degree-weighted sum of `r(r+1)/2` over the
    /// point basis. Zero for the unit ideal.
    pub fn colength(&self) -> u64 {
        let c = self.constellation();
        self.support()
            .into_iter()
            .map(|p| {
                let r = self.value(p);
                let d = c.degree_over_base(p).expect("support point is known");
                d * (r * (r + 1) / 2)
            })
            .sum()
    }

    /// Multiplicity `e(I)`: the degree-weighted sum of the squared
    /// multiplicities. Also recomputed as `colength(I) +
    /// colength(adjoint(I))`; the routes must agree.
    pub fn multiplicity(&self) -> Result<u64, IdealError> {
        if self.is_unit() {
            return Err(IdealError::UnitIdeal);
        }
        let c = self.constellation();
        let direct: u64 = self
            .support()
            .into_iter()
            .map(|p| {
                let r = self.value(p);
                let d = c.degree_over_base(p).expect("support point is known");
                d * r * r
            })
            .sum();
        let via_lengths = self.colength() + self.adjoint().colength();
        assert_eq!(
            direct, via_lengths,
            "the multiplicity routes must agree on {self}"
        );
        Ok(direct)
    }

    /// Least number of generators: order plus one for a complete m-primary
    /// ideal in a two-dimensional regular local ring.
    pub fn min_generators(&self) -> Result<u64, IdealError> {
        if self.is_unit() {
            return Err(IdealError::UnitIdeal);
        }
        Ok(self.order() + 1)
    }

    /// Evaluates the three minimal-multiplicity criteria separately.
    pub fn minimal_multiplicity_report(&self) -> Result<MinimalMultiplicityReport, IdealError> {
        if self.is_unit() {
            return Err(IdealError::UnitIdeal);
        }
        let adjoint = self.adjoint();
        let adjoint_route =
            adjoint.is_unit() || adjoint == IdealClass::maximal(self.constellation());

        let e = self.multiplicity()?;
        let numerical_route = e == self.min_generators()? + self.colength() - 2;

        let structural_route = self.order() == 1
            || self.has_shape_two_one()
            || self.splits_into_two_order_one_factors();

        Ok(MinimalMultiplicityReport {
            adjoint_route,
            numerical_route,
            structural_route,
        })
    }

    /// Whether the ideal has minimal multiplicity in the sense of Goto:
    /// the adjoint is the unit ideal or the maximal ideal. The numerical
    /// and structural readings are asserted to agree.
    pub fn has_minimal_multiplicity(&self) -> Result<bool, IdealError> {
        let report = self.minimal_multiplicity_report()?;
        assert!(
            report.adjoint_route == report.numerical_route
                && report.numerical_route == report.structural_route,
            "the minimal-multiplicity criteria must agree on {self}: {report:?}"
        );
        Ok(report.adjoint_route)
    }

    /// Simple of order two with every other support multiplicity one.
    fn has_shape_two_one(&self) -> bool {
        self.is_simple()
            && self.order() == 2
            && self
                .support()
                .into_iter()
                .skip(1)
                .all(|p| self.value(p) == 1)
    }

    /// Product of exactly two order-one simple ideals (with multiplicity)
    /// whose supports meet only at the base point.
    fn splits_into_two_order_one_factors(&self) -> bool {
        let c = self.constellation();
        let factors = self.factorize();
        let total: u64 = factors.factors().iter().map(|&(_, e)| e).sum();
        if total != 2 {
            return false;
        }
        let expanded: Vec<_> = factors
            .factors()
            .iter()
            .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
            .collect();
        let [first, second] = expanded[..] else {
            return false;
        };
        let simple_first = IdealClass::simple(c, first).expect("factor point is known");
        let simple_second = IdealClass::simple(c, second).expect("factor point is known");
        if simple_first.order() != 1 || simple_second.order() != 1 {
            return false;
        }
        let chain_first = c.chain(first).expect("factor point is known");
        let chain_second = c.chain(second).expect("factor point is known");
        let meet: Vec<_> = chain_first
            .iter()
            .filter(|p| chain_second.contains(p))
            .collect();
        meet == [&c.root()]
    }
}
