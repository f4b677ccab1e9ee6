//! Two-variable monomial ideals: the independent oracle.
//!
//! A monomial ideal is held as its staircase — the minimal antichain of
//! exponent pairs. The Newton polygon gives the integral closure and, via
//! the interior-lattice-point rule, the adjoint without ever touching
//! proximity data. A corner-chart recursion extracts the cluster of base
//! points directly from the staircase, so every proximity-side computation
//! can be replayed against this module on monomial inputs.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constellation::{Constellation, PointId};
use crate::ideal::{IdealClass, PointBasis};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("a staircase needs at least one generator")]
    Empty,
    #[error("the ideal must be m-primary: it needs a pure power of each variable")]
    NotPrimary,
    #[error("the staircase must be integrally closed; take the closure first")]
    NotClosed,
    #[error("cannot parse monomial list at byte {at}: {reason}")]
    Parse { at: usize, reason: String },
}

/// A two-variable monomial ideal, stored as the minimal generating
/// antichain sorted by decreasing x-exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Staircase {
    gens: Vec<(u64, u64)>,
}

impl Staircase {
    /// Builds a staircase from generator exponents, discarding dominated
    /// generators and duplicates.
    pub fn new(gens: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, MonomialError> {
        let mut gens: Vec<(u64, u64)> = gens.into_iter().collect();
        if gens.is_empty() {
            return Err(MonomialError::Empty);
        }
        gens.sort();
        gens.dedup();
        let minimal: Vec<(u64, u64)> = gens
            .iter()
            .filter(|&&(a, b)| {
                !gens
                    .iter()
                    .any(|&(x, y)| (x, y) != (a, b) && x <= a && y <= b)
            })
            .copied()
            .collect();
        let mut gens = minimal;
        gens.sort_by(|l, r| r.0.cmp(&l.0).then(l.1.cmp(&r.1)));
        Ok(Staircase { gens })
    }

    /// Generators sorted by decreasing x-exponent.
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens == [(0, 0)]
    }

    /// Whether the monomial `x^a y^b` lies in the ideal.
    pub fn contains_monomial(&self, a: u64, b: u64) -> bool {
        self.gens.iter().any(|&(x, y)| x <= a && y <= b)
    }

    /// m-primary means both pure powers are present.
    pub fn is_m_primary(&self) -> bool {
        self.gens.iter().any(|&(_, b)| b == 0) && self.gens.iter().any(|&(a, _)| a == 0)
    }

    fn require_m_primary(&self) -> Result<(), MonomialError> {
        if self.is_m_primary() {
            Ok(())
        } else {
            Err(MonomialError::NotPrimary)
        }
    }

    /// Vertices of the Newton polygon, from the y-axis down to the x-axis.
    pub fn newton_vertices(&self) -> Result<Vec<(u64, u64)>, MonomialError> {
        self.require_m_primary()?;
        // sweep by increasing x, keeping only strictly convex corners
        let mut pts: Vec<(u64, u64)> = self.gens.clone();
        pts.sort();
        let mut hull: Vec<(u64, u64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let u = hull[hull.len() - 2];
                let v = hull[hull.len() - 1];
                let cross = (v.0 as i64 - u.0 as i64) * (p.1 as i64 - v.1 as i64)
                    - (v.1 as i64 - u.1 as i64) * (p.0 as i64 - v.0 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(hull)
    }

    /// Inward normals and offsets of the polygon edges: each edge
    /// contributes `(na, nb, c)` with the polyhedron given by
    /// `na*a + nb*b >= c`.
    fn edge_inequalities(&self) -> Result<Vec<(i64, i64, i64)>, MonomialError> {
        let vertices = self.newton_vertices()?;
        let mut edges = Vec::new();
        for w in vertices.windows(2) {
            let (a1, b1) = (w[0].0 as i64, w[0].1 as i64);
            let (a2, b2) = (w[1].0 as i64, w[1].1 as i64);
            let na = b1 - b2;
            let nb = a2 - a1;
            edges.push((na, nb, na * a1 + nb * b1));
        }
        if edges.is_empty() {
            // a single vertex: the ideal is a power product x^a y^b with
            // a = 0 or b = 0 already handled by m-primariness; here the only
            // single-vertex m-primary case is the unit staircase
            edges.push((1, 1, vertices[0].0 as i64 + vertices[0].1 as i64));
        }
        Ok(edges)
    }

    /// The integral closure: minimal generators of the set of lattice
    /// points on or above the Newton polygon.
    pub fn closure(&self) -> Result<Staircase, MonomialError> {
        let edges = self.edge_inequalities()?;
        let a_max = self.gens.iter().map(|&(a, _)| a).max().expect("nonempty");
        let mut gens = Vec::new();
        for a in 0..=a_max {
            let mut b_min = 0i64;
            for &(na, nb, c) in &edges {
                let rest = c - na * a as i64;
                if rest > 0 {
                    b_min = b_min.max(rest.div_euclid(nb) + i64::from(rest.rem_euclid(nb) != 0));
                }
            }
            gens.push((a, b_min as u64));
        }
        Staircase::new(gens)
    }

    pub fn is_closed(&self) -> bool {
        self.closure().map(|c| c == *self).unwrap_or(false)
    }

    /// The adjoint ideal by the interior rule: monomials whose exponent
    /// shifted by `(1,1)` lies strictly inside the Newton polyhedron.
    pub fn adjoint(&self) -> Result<Staircase, MonomialError> {
        let edges = self.edge_inequalities()?;
        let a_max = self.gens.iter().map(|&(a, _)| a).max().expect("nonempty");
        let mut gens = Vec::new();
        for a in 0..=a_max {
            let mut b_min = 0i64;
            for &(na, nb, c) in &edges {
                // strict: nb*(b+1) > c - na*(a+1)
                let rest = c - na * (a as i64 + 1);
                if rest >= 0 {
                    b_min = b_min.max(rest.div_euclid(nb));
                }
            }
            gens.push((a, b_min as u64));
        }
        Staircase::new(gens)
    }

    /// Lattice points outside the ideal; the colength of the monomial ideal.
    pub fn colength(&self) -> Result<u64, MonomialError> {
        self.require_m_primary()?;
        let a_max = self.gens.iter().map(|&(a, _)| a).max().expect("nonempty");
        let mut count = 0;
        for a in 0..a_max {
            let b_min = self
                .gens
                .iter()
                .filter(|&&(x, _)| x <= a)
                .map(|&(_, y)| y)
                .min()
                .expect("m-primary staircases have a generator on the y-axis");
            count += b_min;
        }
        Ok(count)
    }

    /// Twice the area enclosed by the axes and the Newton polygon; equals
    /// the multiplicity of the (closure of the) ideal.
    pub fn double_area(&self) -> Result<u64, MonomialError> {
        let vertices = self.newton_vertices()?;
        // shoelace around (0,0) -> (0, b0) -> ... -> (a_max, 0) -> (0,0)
        let mut path = vec![(0i64, 0i64)];
        path.extend(vertices.iter().map(|&(a, b)| (a as i64, b as i64)));
        let mut twice = 0i64;
        for i in 0..path.len() {
            let (x1, y1) = path[i];
            let (x2, y2) = path[(i + 1) % path.len()];
            twice += x1 * y2 - x2 * y1;
        }
        Ok(twice.unsigned_abs())
    }

    /// Extracts the cluster of base points by recursing into the two corner
    /// charts of each blowup. Requires an integrally closed m-primary
    /// staircase; the resulting constellation has all residue degrees one.
    pub fn base_points(&self) -> Result<(Arc<Constellation>, IdealClass), MonomialError> {
        self.require_m_primary()?;
        if !self.is_closed() {
            return Err(MonomialError::NotClosed);
        }
        let mut constellation = Constellation::new();
        let mut values = Vec::new();
        let root_frame = ChartFrame {
            gens: self.gens.clone(),
            x_axis: AxisLabel::Original,
            y_axis: AxisLabel::Original,
        };
        expand_chart(&mut constellation, &mut values, None, root_frame);
        let constellation = Arc::new(constellation);
        let basis = PointBasis::new(&constellation, values).expect("one multiplicity per point");
        let ideal = IdealClass::from_basis(basis)
            .expect("monomial base points satisfy the proximity inequalities");
        Ok((constellation, ideal))
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(a, b)) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match (a, b) {
                (0, 0) => write!(f, "1")?,
                (a, 0) => write_power(f, 'x', a)?,
                (0, b) => write_power(f, 'y', b)?,
                (a, b) => {
                    write_power(f, 'x', a)?;
                    write!(f, "*")?;
                    write_power(f, 'y', b)?;
                }
            }
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: char, exp: u64) -> fmt::Result {
    if exp == 1 {
        write!(f, "{var}")
    } else {
        write!(f, "{var}^{exp}")
    }
}

/// What a chart axis is the strict transform of: an original coordinate
/// axis, or the exceptional curve of an earlier point.
#[derive(Debug, Clone, Copy)]
enum AxisLabel {
    Original,
    Exceptional(PointId),
}

impl AxisLabel {
    fn satellite_target(self) -> Option<PointId> {
        match self {
            AxisLabel::Original => None,
            AxisLabel::Exceptional(p) => Some(p),
        }
    }
}

struct ChartFrame {
    gens: Vec<(u64, u64)>,
    x_axis: AxisLabel,
    y_axis: AxisLabel,
}

/// Records the point sitting at the origin of `frame` and recurses into the
/// two corner charts of its blowup. `parent` is `None` exactly for the root.
fn expand_chart(
    constellation: &mut Constellation,
    values: &mut Vec<u64>,
    parent: Option<(PointId, Option<PointId>)>,
    frame: ChartFrame,
) {
    let point = match parent {
        None => constellation.root(),
        Some((parent, satellite)) => constellation
            .add_point(parent, satellite, 1)
            .expect("chart bookkeeping yields valid satellites"),
    };
    let ord = frame
        .gens
        .iter()
        .map(|&(a, b)| a + b)
        .min()
        .expect("charts hold nonempty ideals");
    debug_assert_eq!(values.len(), point.index());
    values.push(ord);

    // x-direction chart: x = s, y = s t; the s-axis is the new exceptional
    // curve, the t-axis continues the old y-axis.
    let x_gens = transform_gens(&frame.gens, |(a, b)| (a + b - ord, b));
    if let Some(gens) = x_gens {
        let satellite = frame.y_axis.satellite_target();
        expand_chart(
            constellation,
            values,
            Some((point, satellite)),
            ChartFrame {
                gens,
                x_axis: AxisLabel::Exceptional(point),
                y_axis: frame.y_axis,
            },
        );
    }

    // y-direction chart: x = s t, y = t; the t-axis is the new exceptional
    // curve, the s-axis continues the old x-axis.
    let y_gens = transform_gens(&frame.gens, |(a, b)| (a, a + b - ord));
    if let Some(gens) = y_gens {
        let satellite = frame.x_axis.satellite_target();
        expand_chart(
            constellation,
            values,
            Some((point, satellite)),
            ChartFrame {
                gens,
                x_axis: frame.x_axis,
                y_axis: AxisLabel::Exceptional(point),
            },
        );
    }
}

/// Applies the chart substitution to every generator and minimalizes;
/// `None` when the transform is the unit ideal.
fn transform_gens(
    gens: &[(u64, u64)],
    map: impl Fn((u64, u64)) -> (u64, u64),
) -> Option<Vec<(u64, u64)>> {
    let transformed: Vec<(u64, u64)> = gens.iter().map(|&g| map(g)).collect();
    if transformed.contains(&(0, 0)) {
        return None;
    }
    Some(
        Staircase::new(transformed)
            .expect("transforms of nonempty ideals are nonempty")
            .gens,
    )
}

/// Parses a comma-separated list of monomials in `x` and `y`, e.g.
/// `"x^2, x*y^2, y^3"` or `"x^2*y^0, x^0*y^3"`.
pub fn parse_monomials(input: &str) -> Result<Staircase, MonomialError> {
    let mut gens = Vec::new();
    for (offset, term) in split_terms(input) {
        let term = term.trim();
        if term.is_empty() {
            return Err(MonomialError::Parse {
                at: offset,
                reason: "empty monomial".into(),
            });
        }
        gens.push(parse_term(term, offset)?);
    }
    if gens.is_empty() {
        return Err(MonomialError::Empty);
    }
    Staircase::new(gens)
}

fn split_terms(input: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in input.char_indices() {
        if ch == ',' {
            out.push((start, &input[start..i]));
            start = i + 1;
        }
    }
    if start < input.len() || !input.is_empty() {
        out.push((start, &input[start..]));
    }
    out
}

fn parse_term(term: &str, offset: usize) -> Result<(u64, u64), MonomialError> {
    if term == "1" {
        return Ok((0, 0));
    }
    let mut a = 0u64;
    let mut b = 0u64;
    for factor in term.split('*') {
        let factor = factor.trim();
        let mut chars = factor.chars();
        let var = chars.next().ok_or_else(|| MonomialError::Parse {
            at: offset,
            reason: "empty factor".into(),
        })?;
        let exponent = match chars.next() {
            None => 1,
            Some('^') => {
                let digits = chars.as_str().trim();
                let exp = digits.parse::<u64>().map_err(|_| MonomialError::Parse {
                    at: offset,
                    reason: format!("bad exponent {digits:?}"),
                })?;
                if exp > 1 << 20 {
                    return Err(MonomialError::Parse {
                        at: offset,
                        reason: format!("exponent {exp} is out of range"),
                    });
                }
                exp
            }
            Some(other) => {
                return Err(MonomialError::Parse {
                    at: offset,
                    reason: format!("unexpected character {other:?} after variable"),
                })
            }
        };
        match var {
            'x' => a += exponent,
            'y' => b += exponent,
            other => {
                return Err(MonomialError::Parse {
                    at: offset,
                    reason: format!("unknown variable {other:?}"),
                })
            }
        }
    }
    Ok((a, b))
}

/// Every integrally closed m-primary staircase whose Newton polygon has its
/// vertices inside `[0, max]^2`: all strictly convex vertex chains from the
/// y-axis to the x-axis.
pub fn enumerate_closed_staircases(max: u64) -> Vec<Staircase> {
    let mut out = Vec::new();
    let mut chain: Vec<(u64, u64)> = Vec::new();
    for b0 in 1..=max {
        chain.push((0, b0));
        extend_chain(max, &mut chain, &mut out);
        chain.pop();
    }
    out
}

fn extend_chain(max: u64, chain: &mut Vec<(u64, u64)>, out: &mut Vec<Staircase>) {
    let &(a, b) = chain.last().expect("chain is seeded");
    if b == 0 {
        let staircase =
            Staircase::new(vertex_chain_lattice_gens(chain)).expect("vertex chains are nonempty");
        debug_assert!(staircase.is_closed());
        out.push(staircase);
        return;
    }
    for a2 in a + 1..=max {
        for b2 in (0..b).rev() {
            if slope_decreases(chain, (a2, b2)) {
                chain.push((a2, b2));
                extend_chain(max, chain, out);
                chain.pop();
            }
        }
    }
}

/// New segments must be strictly shallower than the previous one.
fn slope_decreases(chain: &[(u64, u64)], next: (u64, u64)) -> bool {
    if chain.len() < 2 {
        return true;
    }
    let u = chain[chain.len() - 2];
    let v = chain[chain.len() - 1];
    let cross = (v.0 as i64 - u.0 as i64) * (next.1 as i64 - v.1 as i64)
        - (v.1 as i64 - u.1 as i64) * (next.0 as i64 - v.0 as i64);
    cross > 0
}

fn vertex_chain_lattice_gens(chain: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let a_max = chain.last().expect("nonempty").0;
    let mut gens = Vec::with_capacity(a_max as usize + 1);
    for a in 0..=a_max {
        let mut b_min = 0i64;
        for w in chain.windows(2) {
            let (a1, b1) = (w[0].0 as i64, w[0].1 as i64);
            let (a2, b2) = (w[1].0 as i64, w[1].1 as i64);
            let (na, nb) = (b1 - b2, a2 - a1);
            let rest = na * a1 + nb * b1 - na * a as i64;
            if rest > 0 {
                b_min = b_min.max(rest.div_euclid(nb) + i64::from(rest.rem_euclid(nb) != 0));
            }
        }
        gens.push((a, b_min as u64));
    }
    gens
}
