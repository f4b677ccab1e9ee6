//! Exact calculus of complete ideals in a two-dimensional regular local ring.
//!
//! Everything here is integer combinatorics over clusters of infinitely near
//! points: proximity, point bases and excesses, Zariski factorization into
//! simple ideals, adjoint (multiplier) ideals with integer parameter,
//! intersection theory on the minimal resolution, Gorenstein blowup tests,
//! Hoskin–Deligne numerics, and an independent Newton-polygon oracle for
//! two-variable monomial ideals. No floating point is used anywhere.
//!
//! The companion guide under `book/` walks through the theory chapter by
//! chapter; its code snippets compile and run as doctests of this crate.

pub mod adjoint;
pub mod classifier;
pub mod constellation;
pub mod document;
pub mod geometry;
pub mod ideal;
pub mod invariants;
pub mod monomial;
pub mod verify;

pub use adjoint::{AdjointError, AdjointPowerCheck};
pub use classifier::{ClassifierError, MultiplicityBoundReport, SupportNesting, TwoFactorReport};
pub use constellation::{
    Constellation, ConstellationError, PointId, PointRecord, ProximityMatrix, ValidationReport,
    Violation,
};
pub use document::{Document, DocumentError};
pub use geometry::{Resolution, StrictDivisor, TotalDivisor};
pub use ideal::{
    ExcessVector, IdealClass, IdealError, IdealTransform, PointBasis, SimpleFactorization,
};
pub use invariants::MinimalMultiplicityReport;
pub use monomial::{MonomialError, Staircase};

// Every fenced code block of the guide runs as a doctest of this crate, so
// the book cannot drift away from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/constellations.md")]
    pub struct Constellations;
    #[doc = include_str!("../../../book/src/complete-ideals.md")]
    pub struct CompleteIdeals;
    #[doc = include_str!("../../../book/src/adjoints.md")]
    pub struct Adjoints;
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub struct Geometry;
    #[doc = include_str!("../../../book/src/invariants.md")]
    pub struct Invariants;
    #[doc = include_str!("../../../book/src/monomial.md")]
    pub struct Monomial;
    #[doc = include_str!("../../../book/src/classification.md")]
    pub struct Classification;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
