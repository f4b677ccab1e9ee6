//! Point bases and the calculus of complete ideals.
//!
//! A complete (integrally closed) `m`-primary ideal of the base ring is
//! determined by its point basis: the vector of multiplicities of its
//! transforms at the points of a constellation. The proximity inequalities
//! single out exactly the vectors that occur, and the excesses — the image
//! of the basis under the proximity matrix — are the exponents of the
//! Zariski factorization into simple ideals.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constellation::{Constellation, ConstellationError, PointId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("basis has {got} entries but the constellation has {expected} points")]
    BasisLength { expected: usize, got: usize },
    #[error("negative excess {excess} at {point}")]
    NegativeExcess { point: PointId, excess: i64 },
    #[error("proximity inequality fails at {point}: {value} < {required}")]
    NotComplete {
        point: PointId,
        value: u64,
        required: u64,
    },
    #[error("the unit ideal is not allowed here")]
    UnitIdeal,
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
}

/// A finitely supported vector of nonnegative multiplicities over the points
/// of one constellation. Not every point basis is the basis of an ideal;
/// see [`PointBasis::is_complete`] and [`PointBasis::unload`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointBasis {
    constellation: Arc<Constellation>,
    values: Vec<u64>,
}

impl PointBasis {
    /// Builds a basis from explicit values; shorter vectors are padded with
    /// zeros.
    pub fn new(
        constellation: &Arc<Constellation>,
        values: impl Into<Vec<u64>>,
    ) -> Result<Self, IdealError> {
        let mut values = values.into();
        let n = constellation.len();
        if values.len() > n {
            return Err(IdealError::BasisLength {
                expected: n,
                got: values.len(),
            });
        }
        values.resize(n, 0);
        Ok(PointBasis {
            constellation: constellation.clone(),
            values,
        })
    }

    pub fn zero(constellation: &Arc<Constellation>) -> Self {
        PointBasis {
            constellation: constellation.clone(),
            values: vec![0; constellation.len()],
        }
    }

    pub fn constellation(&self) -> &Arc<Constellation> {
        &self.constellation
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, p: PointId) -> u64 {
        self.values[p.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Points with positive multiplicity, ancestor-first.
    pub fn support(&self) -> Vec<PointId> {
        self.constellation
            .points()
            .filter(|&p| self.value(p) > 0)
            .collect()
    }

    /// The excess at every point: multiplicity minus the degree-weighted sum
    /// of the multiplicities at all proximate points.
    pub fn excess(&self) -> ExcessVector {
        let c = &self.constellation;
        let mut values: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
        for p in c.points() {
            let r = self.values[p.index()] as i64;
            if r == 0 {
                continue;
            }
            for b in c.proximity_targets(p) {
                let degree = c
                    .degree_between(b, p)
                    .expect("proximity targets are ancestors") as i64;
                values[b.index()] -= degree * r;
            }
        }
        ExcessVector {
            constellation: c.clone(),
            values,
        }
    }

    /// Whether every proximity inequality holds, i.e. whether this vector is
    /// the point basis of a complete ideal.
    pub fn is_complete(&self) -> bool {
        self.excess().is_nonnegative()
    }

    /// The smallest complete basis dominating this one, computed by
    /// repeatedly raising any point with negative excess to the value forced
    /// by its proximate points. Sweeps run children-first for determinism;
    /// the result does not depend on the order.
    pub fn unload(&self) -> IdealClass {
        let c = &self.constellation;
        let n = c.len();
        let mut values = self.values.clone();
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                let b = PointId::from_index(i);
                let forced: u64 = c
                    .points()
                    .skip(i + 1)
                    .filter(|&p| c.is_proximate(p, b))
                    .map(|p| {
                        c.degree_between(b, p)
                            .expect("proximate point is a descendant")
                            * values[p.index()]
                    })
                    .sum();
                if values[i] < forced {
                    values[i] = forced;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let basis = PointBasis {
            constellation: c.clone(),
            values,
        };
        IdealClass::from_basis(basis).expect("unloading ends on a complete basis")
    }
}

/// The image of a point basis under the proximity matrix. Nonnegative
/// exactly when the basis belongs to a complete ideal, in which case the
/// entries are the exponents of the Zariski factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExcessVector {
    constellation: Arc<Constellation>,
    values: Vec<i64>,
}

impl ExcessVector {
    pub fn constellation(&self) -> &Arc<Constellation> {
        &self.constellation
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, p: PointId) -> i64 {
        self.values[p.index()]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }
}

/// The class of a complete `m`-primary ideal (or the unit ideal, with the
/// zero basis): a point basis satisfying every proximity inequality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealClass {
    basis: PointBasis,
}

impl IdealClass {
    /// Wraps a basis after checking the proximity inequalities.
    pub fn from_basis(basis: PointBasis) -> Result<Self, IdealError> {
        let excess = basis.excess();
        for p in basis.constellation.points() {
            let e = excess.value(p);
            if e < 0 {
                let value = basis.value(p);
                return Err(IdealError::NotComplete {
                    point: p,
                    value,
                    required: (value as i64 - e) as u64,
                });
            }
        }
        Ok(IdealClass { basis })
    }

    /// Convenience constructor from raw values.
    pub fn from_values(
        constellation: &Arc<Constellation>,
        values: impl Into<Vec<u64>>,
    ) -> Result<Self, IdealError> {
        Self::from_basis(PointBasis::new(constellation, values)?)
    }

    /// The unit ideal: zero basis, empty factorization, order 0.
    pub fn unit(constellation: &Arc<Constellation>) -> Self {
        IdealClass {
            basis: PointBasis::zero(constellation),
        }
    }

    /// The maximal ideal of the base point.
    pub fn maximal(constellation: &Arc<Constellation>) -> Self {
        let mut values = vec![0; constellation.len()];
        values[0] = 1;
        IdealClass {
            basis: PointBasis {
                constellation: constellation.clone(),
                values,
            },
        }
    }

    /// The unique complete ideal with the given excesses, obtained by
    /// solving the unitriangular proximity system children-first.
    pub fn from_excess(
        constellation: &Arc<Constellation>,
        excess: &[i64],
    ) -> Result<Self, IdealError> {
        let n = constellation.len();
        if excess.len() > n {
            return Err(IdealError::BasisLength {
                expected: n,
                got: excess.len(),
            });
        }
        if let Some(i) = excess.iter().position(|&e| e < 0) {
            return Err(IdealError::NegativeExcess {
                point: PointId::from_index(i),
                excess: excess[i],
            });
        }
        let mut values = vec![0u64; n];
        let mut load = vec![0u64; n];
        for i in (0..n).rev() {
            let e = *excess.get(i).unwrap_or(&0) as u64;
            let p = PointId::from_index(i);
            values[i] = e + load[i];
            for b in constellation.proximity_targets(p) {
                let degree = constellation
                    .degree_between(b, p)
                    .expect("proximity targets are ancestors");
                load[b.index()] += degree * values[i];
            }
        }
        Ok(IdealClass {
            basis: PointBasis {
                constellation: constellation.clone(),
                values,
            },
        })
    }

    /// The simple ideal attached to a point: excess one there, zero
    /// elsewhere. Its support is the chain from the root to the point.
    pub fn simple(constellation: &Arc<Constellation>, b: PointId) -> Result<Self, IdealError> {
        if !constellation.contains(b) {
            return Err(ConstellationError::UnknownPoint(b).into());
        }
        let mut excess = vec![0i64; constellation.len()];
        excess[b.index()] = 1;
        Self::from_excess(constellation, &excess)
    }

    pub fn basis(&self) -> &PointBasis {
        &self.basis
    }

    pub fn constellation(&self) -> &Arc<Constellation> {
        &self.basis.constellation
    }

    pub fn values(&self) -> &[u64] {
        &self.basis.values
    }

    pub fn value(&self, p: PointId) -> u64 {
        self.basis.value(p)
    }

    pub fn support(&self) -> Vec<PointId> {
        self.basis.support()
    }

    pub fn excess(&self) -> ExcessVector {
        self.basis.excess()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.is_zero()
    }

    /// Multiplicity at the base point.
    pub fn order(&self) -> u64 {
        self.basis.values[0]
    }

    /// Whether the Zariski factorization consists of a single factor with
    /// exponent one.
    pub fn is_simple(&self) -> bool {
        let f = self.factorize();
        f.factors().len() == 1 && f.factors()[0].1 == 1
    }

    fn same_constellation(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis.constellation, &other.basis.constellation)
            || self.basis.constellation == other.basis.constellation
    }

    /// Product of complete ideals: point bases add.
    pub fn product(&self, other: &Self) -> Self {
        assert!(
            self.same_constellation(other),
            "product of ideals on different constellations"
        );
        let values = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(&a, &b)| a.checked_add(b).expect("multiplicity overflow"))
            .collect();
        IdealClass {
            basis: PointBasis {
                constellation: self.basis.constellation.clone(),
                values,
            },
        }
    }

    /// `n`-th power; `n = 0` gives the unit ideal.
    pub fn power(&self, n: u64) -> Self {
        let values = self
            .values()
            .iter()
            .map(|&v| v.checked_mul(n).expect("multiplicity overflow"))
            .collect();
        IdealClass {
            basis: PointBasis {
                constellation: self.basis.constellation.clone(),
                values,
            },
        }
    }

    /// Zariski factorization: the points of positive excess with their
    /// excesses as exponents.
    pub fn factorize(&self) -> SimpleFactorization {
        let excess = self.excess();
        let factors = self
            .basis
            .constellation
            .points()
            .filter_map(|p| {
                let e = excess.value(p);
                (e > 0).then_some((p, e as u64))
            })
            .collect();
        SimpleFactorization { factors }
    }

    /// The transform at `b`: the restriction of the point basis to the
    /// subtree rooted at `b`, as an ideal over `b`. Satellite targets that
    /// leave the subtree are dropped, because the corresponding proximities
    /// involve points that do not contain `b`.
    pub fn transform(&self, b: PointId) -> Result<IdealTransform, IdealError> {
        let c = &self.basis.constellation;
        if !c.contains(b) {
            return Err(ConstellationError::UnknownPoint(b).into());
        }
        let subtree = c.subtree(b);
        let mut position = vec![None; c.len()];
        for (new, &old) in subtree.iter().enumerate() {
            position[old.index()] = Some(new);
        }
        let mut sub = Constellation::new();
        for &old in subtree.iter().skip(1) {
            let parent = c.parent(old).expect("non-root point has a parent");
            let parent =
                PointId::from_index(position[parent.index()].expect("parent lies in the subtree"));
            let satellite = c
                .satellite_target(old)
                .and_then(|t| position[t.index()])
                .map(PointId::from_index);
            sub.add_point(parent, satellite, c.edge_degree(old))
                .expect("subtree relations stay valid");
        }
        let sub = Arc::new(sub);
        let values: Vec<u64> = subtree.iter().map(|&old| self.value(old)).collect();
        let ideal = IdealClass::from_basis(PointBasis {
            constellation: sub,
            values,
        })
        .expect("transforms of complete ideals are complete");
        Ok(IdealTransform {
            ideal,
            points: subtree,
        })
    }

    /// Value of the divisorial valuation attached to `b` on this ideal.
    ///
    /// Computed through the pairing of the point basis with the basis of the
    /// simple ideal at `b` along the chain, weighted by residue degrees; in
    /// particular `valuation(root)` is the order. Reciprocity — the order of
    /// the simple ideal at `b` equals `[b : base]` times the value of the
    /// valuation on the maximal ideal — is enforced by the test suite.
    pub fn valuation(&self, b: PointId) -> Result<u64, IdealError> {
        let c = &self.basis.constellation;
        let chain = c.chain(b)?;
        let simple = IdealClass::simple(c, b)?;
        let d_b = c.degree_over_base(b)?;
        let mut total: u64 = 0;
        for &a in &chain {
            let d_a = c.degree_over_base(a)?;
            total += self.value(a) * simple.value(a) * d_a;
        }
        debug_assert_eq!(total % d_b, 0, "valuation pairing is integral");
        Ok(total / d_b)
    }

    /// Divisibility test through excesses: `other` divides `self` exactly
    /// when the factorization exponents dominate, and then the quotient is
    /// the ideal whose basis is the difference.
    pub fn divide_by(&self, other: &Self) -> Option<IdealClass> {
        assert!(
            self.same_constellation(other),
            "dividing ideals on different constellations"
        );
        let mine = self.excess();
        let theirs = other.excess();
        let diff: Vec<i64> = mine
            .values()
            .iter()
            .zip(theirs.values())
            .map(|(&a, &b)| a - b)
            .collect();
        if diff.iter().any(|&e| e < 0) {
            return None;
        }
        let quotient = IdealClass::from_excess(&self.basis.constellation, &diff)
            .expect("nonnegative excesses define an ideal");
        debug_assert_eq!(other.product(&quotient), *self);
        Some(quotient)
    }

    pub fn is_divisible_by(&self, other: &Self) -> bool {
        self.divide_by(other).is_some()
    }

    /// Containment `other ⊆ self`, decided valuatively: every divisorial
    /// valuation in the support of `self` is at least as large on `other`.
    pub fn contains(&self, other: &Self) -> bool {
        assert!(
            self.same_constellation(other),
            "comparing ideals on different constellations"
        );
        self.support().into_iter().all(|b| {
            let mine = self.valuation(b).expect("support point is known");
            let theirs = other.valuation(b).expect("support point is known");
            theirs >= mine
        })
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Result of transforming an ideal at a point: the ideal over the new base
/// together with the original ids of the subtree points, ancestor-first.
#[derive(Debug, Clone)]
pub struct IdealTransform {
    pub ideal: IdealClass,
    pub points: Vec<PointId>,
}

/// The Zariski factorization of a complete ideal into simple ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleFactorization {
    factors: Vec<(PointId, u64)>,
}

impl SimpleFactorization {
    pub fn factors(&self) -> &[(PointId, u64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self, constellation: &Arc<Constellation>) -> IdealClass {
        let mut excess = vec![0i64; constellation.len()];
        for &(p, e) in &self.factors {
            excess[p.index()] = e as i64;
        }
        IdealClass::from_excess(constellation, &excess)
            .expect("factorization exponents are nonnegative")
    }
}
