//! Classification of adjoint ideals with few simple factors.
//!
//! Every predicate here is computed along at least two independent routes
//! and the routes are asserted to agree; a disagreement aborts instead of
//! being reported. The results in this module assume all residue degrees
//! are one (an algebraically closed or infinite residue field), and the
//! entry points reject constellations with larger degrees.

use thiserror::Error;

use crate::constellation::PointId;
use crate::ideal::IdealClass;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("the ideal must be simple (one Zariski factor with exponent one)")]
    NotSimple,
    #[error("the two ideals must differ")]
    EqualIdeals,
    #[error("this classification requires all residue degrees equal to one")]
    NonTrivialDegrees,
    #[error("the ideal must have order one")]
    NotOrderOne,
    #[error("the ideal must have order at least two")]
    OrderTooSmall,
    #[error("the ideal must have minimal multiplicity")]
    NotMinimalMultiplicity,
}

/// How the supports of two ideals compare as sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportNesting {
    Equal,
    FirstInSecond,
    SecondInFirst,
    Incomparable,
}

fn require_simple(i: &IdealClass) -> Result<(), ClassifierError> {
    if i.is_simple() {
        Ok(())
    } else {
        Err(ClassifierError::NotSimple)
    }
}

fn require_degree_one(i: &IdealClass) -> Result<(), ClassifierError> {
    if i.constellation().is_degree_one() {
        Ok(())
    } else {
        Err(ClassifierError::NonTrivialDegrees)
    }
}

/// A simple complete ideal is an adjoint (equivalently, any of its powers
/// is) exactly when it has order one. Both routes are evaluated.
pub fn simple_adjoint_test(i: &IdealClass) -> Result<bool, ClassifierError> {
    require_simple(i)?;
    let by_order = i.order() == 1;
    for n in 1..=4 {
        let by_power = i.is_adjoint_power(n).expect("simple ideals are m-primary");
        assert_eq!(
            by_order, by_power,
            "order-one and adjoint-power routes must agree on {i} at n={n}"
        );
    }
    Ok(by_order)
}

/// Set comparison of the supports of two simple ideals.
pub fn support_nesting(i: &IdealClass, j: &IdealClass) -> Result<SupportNesting, ClassifierError> {
    require_simple(i)?;
    require_simple(j)?;
    let si = i.support();
    let sj = j.support();
    let i_in_j = si.iter().all(|p| sj.contains(p));
    let j_in_i = sj.iter().all(|p| si.contains(p));
    Ok(match (i_in_j, j_in_i) {
        (true, true) => SupportNesting::Equal,
        (true, false) => SupportNesting::FirstInSecond,
        (false, true) => SupportNesting::SecondInFirst,
        (false, false) => SupportNesting::Incomparable,
    })
}

/// Verdicts of the independent criteria for a product of two simple ideals
/// to be an adjoint. All fields agree; `holds` is their common value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactorReport {
    /// Order of the second (main) factor.
    pub order: u64,
    /// Shape criterion: exponent bound, nested supports, and the basis of
    /// the main factor reading `(k,...,k,1,...,1)` with `k` repeated once
    /// per support point of the companion.
    pub shape_route: bool,
    /// Adjoint criterion: the companion has order one and the adjoint of
    /// the main factor is its `(k-1)`-st power.
    pub adjoint_route: bool,
    /// Length criterion: containment in the `k`-th power of the companion
    /// plus the multiplicity/colength identity.
    pub length_route: bool,
    /// Direct evaluation of the adjoint-power test on sampled products.
    pub direct_route: bool,
}

impl TwoFactorReport {
    pub fn holds(&self) -> bool {
        self.shape_route
    }
}

/// Decides whether `companion^p * main^q` is an adjoint ideal (for one, and
/// then every, positive `q`), for distinct simple ideals on a degree-one
/// constellation. Four routes are computed and must agree.
pub fn two_factor_adjoint_test(
    companion: &IdealClass,
    main: &IdealClass,
    p: u64,
) -> Result<TwoFactorReport, ClassifierError> {
    assert!(p >= 1, "the exponent must be positive");
    require_simple(companion)?;
    require_simple(main)?;
    require_degree_one(companion)?;
    if companion == main {
        return Err(ClassifierError::EqualIdeals);
    }

    let k = main.order();
    let support_i = companion.support();
    let support_j = main.support();
    let nested = support_i.iter().all(|b| support_j.contains(b));

    let shape_route = p + 1 >= k && nested && {
        let s = support_i.len();
        support_j
            .iter()
            .enumerate()
            .all(|(pos, &b)| main.value(b) == if pos < s { k } else { 1 })
    };

    let adjoint_route = p + 1 >= k
        && companion.order() == 1
        && main.adjoint() == companion.power(k - 1)
        // an order-one companion power carries no support information, so
        // nesting must be demanded separately in that degenerate case
        && (k >= 2 || nested);

    let length_route = p + 1 >= k && companion.order() == 1 && {
        let contained = companion.power(k).contains(main);
        let len_identity = main.multiplicity().expect("main factor is m-primary") - main.colength()
            == companion.power(k - 1).colength();
        contained && len_identity
    };

    let mut direct = None;
    for q in 1..=5 {
        let product = companion.power(p).product(&main.power(q));
        let adjoint_power = product
            .is_adjoint_power(1)
            .expect("products of simple ideals are m-primary");
        let verdict = adjoint_power && nested;
        if let Some(prev) = direct {
            assert_eq!(prev, verdict, "the verdict must not depend on q");
        }
        direct = Some(verdict);
    }
    let direct_route = direct.expect("at least one q was sampled");

    let report = TwoFactorReport {
        order: k,
        shape_route,
        adjoint_route,
        length_route,
        direct_route,
    };
    assert!(
        report.shape_route == report.adjoint_route
            && report.adjoint_route == report.length_route
            && report.length_route == report.direct_route,
        "two-factor routes disagree for {companion}, {main}, p={p}: {report:?}"
    );
    if report.holds() {
        assert_eq!(companion.order(), 1, "a passing companion has order one");
    }
    Ok(report)
}

/// For two distinct order-one simple ideals, every power of every product
/// is an adjoint exactly when one ideal contains the other; equivalently
/// the bases are comparable, equivalently the supports are nested.
pub fn order_one_pair_test(i: &IdealClass, j: &IdealClass) -> Result<bool, ClassifierError> {
    require_simple(i)?;
    require_simple(j)?;
    require_degree_one(i)?;
    if i == j {
        return Err(ClassifierError::EqualIdeals);
    }
    if i.order() != 1 || j.order() != 1 {
        return Err(ClassifierError::NotOrderOne);
    }

    let nested = matches!(
        support_nesting(i, j)?,
        SupportNesting::FirstInSecond | SupportNesting::SecondInFirst | SupportNesting::Equal
    );
    let comparable = {
        let ge = i.values().iter().zip(j.values()).all(|(a, b)| a >= b);
        let le = i.values().iter().zip(j.values()).all(|(a, b)| a <= b);
        ge || le
    };
    let contained = i.contains(j) || j.contains(i);
    assert_eq!(nested, comparable, "support and basis routes must agree");
    assert_eq!(
        nested, contained,
        "support and containment routes must agree"
    );

    for (p, q, n) in [(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 3)] {
        let product = i.power(p).product(&j.power(q)).power(n);
        assert_eq!(
            product.is_adjoint_power(1).expect("products are m-primary"),
            nested,
            "sampled power route must agree at p={p} q={q} n={n}"
        );
    }
    Ok(nested)
}

/// Outcome of the multiplicity bound for the main factor of a two-factor
/// adjoint: `e >= k^2 s + k`, with equality exactly for the monomial family
/// `(x^k, y^(k s + 1))`-bar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityBoundReport {
    pub order: u64,
    pub multiplicity: u64,
    pub lower_bound: u64,
    /// Whether the basis has the two-factor shape `(k,...,k,1,...,1)` with
    /// `k` repeated `s` times.
    pub shape_holds: bool,
    pub extremal: bool,
    /// For extremal ideals, whether the cluster is the one of
    /// `(x^k, y^(k s + 1))`-bar: a chain whose last `k - 1` points are
    /// satellites looking back at the `s`-th point.
    pub extremal_cluster: bool,
}

/// Checks the multiplicity bound `e(J) >= k^2 s + k` for a simple ideal of
/// order `k > 1` whose companion has `s` support points, and classifies the
/// equality case.
pub fn multiplicity_bound_check(
    main: &IdealClass,
    s: usize,
) -> Result<MultiplicityBoundReport, ClassifierError> {
    assert!(s >= 1, "the companion support size must be positive");
    require_simple(main)?;
    require_degree_one(main)?;
    let k = main.order();
    if k < 2 {
        return Err(ClassifierError::OrderTooSmall);
    }

    let support = main.support();
    let shape_holds = support.len() > s
        && support
            .iter()
            .enumerate()
            .all(|(pos, &b)| main.value(b) == if pos < s { k } else { 1 });

    let multiplicity = main.multiplicity().expect("simple ideals are m-primary");
    let lower_bound = k * k * (s as u64) + k;
    if shape_holds {
        assert!(
            multiplicity >= lower_bound,
            "the multiplicity bound must hold when the shape does"
        );
    }
    let extremal = shape_holds && multiplicity == lower_bound;
    let extremal_cluster = extremal && {
        let c = main.constellation();
        let chain = c
            .chain(*support.last().expect("support is nonempty"))
            .expect("support point is known");
        chain == support
            && support.iter().enumerate().all(|(pos, &b)| {
                let expected = if pos > s { Some(support[s - 1]) } else { None };
                c.satellite_target(b) == expected
            })
    };
    if extremal {
        assert!(
            extremal_cluster,
            "an extremal ideal must carry the monomial cluster shape"
        );
    }

    Ok(MultiplicityBoundReport {
        order: k,
        multiplicity,
        lower_bound,
        shape_holds,
        extremal,
        extremal_cluster,
    })
}

/// For an ideal of minimal multiplicity on a degree-one constellation:
/// it is an adjoint exactly when it has order one or the maximal ideal
/// divides it. Both routes are evaluated and must agree.
pub fn minimal_multiplicity_adjoint_test(i: &IdealClass) -> Result<bool, ClassifierError> {
    require_degree_one(i)?;
    if i.is_unit() || !i.has_minimal_multiplicity().expect("nonzero ideal") {
        return Err(ClassifierError::NotMinimalMultiplicity);
    }
    let direct = i.is_adjoint_power(1).expect("nonzero ideal");
    let structural = i.order() == 1 || i.is_divisible_by(&IdealClass::maximal(i.constellation()));
    assert_eq!(
        direct, structural,
        "adjoint and divisibility routes must agree on {i}"
    );
    Ok(direct)
}

/// For a simple ideal on a degree-one constellation: minimal multiplicity
/// holds exactly when the order is at most two and `m^p * I^q` is an
/// adjoint; the choice of positive `p`, `q` does not matter.
pub fn simple_minimal_multiplicity_test(
    i: &IdealClass,
    p: u64,
    q: u64,
) -> Result<bool, ClassifierError> {
    assert!(p >= 1 && q >= 1, "the exponents must be positive");
    require_simple(i)?;
    require_degree_one(i)?;
    let minimal = i
        .has_minimal_multiplicity()
        .expect("simple ideals are nonzero");

    let m = IdealClass::maximal(i.constellation());
    let mut verdicts = Vec::new();
    for (pp, qq) in [(p, q), (1, 1), (1, 2), (2, 1), (2, 2)] {
        let product = m.power(pp).product(&i.power(qq));
        let adjoint = product.is_adjoint_power(1).expect("nonzero ideal");
        verdicts.push(i.order() <= 2 && adjoint);
    }
    assert!(
        verdicts.windows(2).all(|w| w[0] == w[1]),
        "the verdict must not depend on the exponents"
    );
    assert_eq!(
        verdicts[0], minimal,
        "structural and adjoint routes must agree on {i}"
    );
    Ok(minimal)
}

/// Support points proximate to `b` within `support`, used by reporting.
pub fn proximate_support_points(i: &IdealClass, b: PointId) -> Vec<PointId> {
    let c = i.constellation();
    i.support()
        .into_iter()
        .filter(|&p| c.is_proximate(p, b))
        .collect()
}
