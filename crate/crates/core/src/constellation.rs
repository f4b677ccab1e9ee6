//! Clusters of infinitely near points.
//!
//! A [`Constellation`] records the combinatorial data of a finite set of
//! points infinitely near a fixed regular base point: every non-root point
//! has a parent (the point it was blown up from), an optional second
//! proximity (making it a satellite), and a residue degree over its parent.
//! Points are stored ancestor-first, so parents always precede children;
//! this makes the proximity matrix unitriangular without any reordering.

use std::fmt;

use thiserror::Error;

/// Identifier of a point inside one constellation.
///
/// Ids are indices in ancestor-first order and are only meaningful for the
/// constellation that issued them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(u32);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The id of the point at `index` in ancestor-first order. Whether a
    /// given constellation actually has that many points is up to the
    /// caller; see [`Constellation::contains`].
    pub fn from_index(index: usize) -> Self {
        PointId(u32::try_from(index).expect("constellation too large"))
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Raw data of one point: parent link, optional second proximity, residue
/// degree over the parent. The root carries `(None, None, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointRecord {
    pub parent: Option<PointId>,
    pub satellite: Option<PointId>,
    pub degree: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstellationError {
    #[error("unknown parent point {0}")]
    UnknownParent(PointId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error(
        "point {point}: illegal satellite target {target}: not among the proximities of the parent"
    )]
    IllegalSatellite { point: PointId, target: PointId },
    #[error("residue degree must be positive")]
    ZeroDegree,
    #[error("point {point}: parent {parent} does not precede it in ancestor-first order")]
    UnorderedParent { point: PointId, parent: PointId },
    #[error(
        "point {point}: satellite target {target} does not precede it in ancestor-first order"
    )]
    UnorderedSatellite { point: PointId, target: PointId },
    #[error("the first point must be a root record (no parent, no satellite, degree 1)")]
    MalformedRoot,
    #[error("a constellation needs at least the root point")]
    Empty,
}

/// A violated constellation invariant, reported by [`Constellation::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A non-root point without a parent: the forest is not a tree.
    UnrootedPoint(PointId),
    /// Satellite target equal to the parent.
    SatelliteEqualsParent(PointId),
    /// Satellite target not among the proximities of the parent.
    IllegalSatellite { point: PointId, target: PointId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnrootedPoint(p) => write!(f, "{p}: not reachable from the root"),
            Violation::SatelliteEqualsParent(p) => {
                write!(f, "{p}: satellite target equals the parent")
            }
            Violation::IllegalSatellite { point, target } => write!(
                f,
                "{point}: satellite target {target} is not among the proximities of the parent"
            ),
        }
    }
}

/// Outcome of validating a constellation; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

/// A finite cluster of infinitely near points over one base point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constellation {
    points: Vec<PointRecord>,
}

impl Default for Constellation {
    fn default() -> Self {
        Self::new()
    }
}

impl Constellation {
    /// A constellation holding only the base point.
    pub fn new() -> Self {
        Constellation {
            points: vec![PointRecord {
                parent: None,
                satellite: None,
                degree: 1,
            }],
        }
    }

    /// The base point.
    pub fn root(&self) -> PointId {
        PointId(0)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl DoubleEndedIterator<Item = PointId> {
        (0..self.points.len()).map(PointId::from_index)
    }

    pub fn contains(&self, p: PointId) -> bool {
        p.index() < self.points.len()
    }

    /// Appends a point blown up from `parent`. `satellite`, when given, is
    /// the second point the new point is proximate to; it must be one of the
    /// proximities of `parent`.
    pub fn add_point(
        &mut self,
        parent: PointId,
        satellite: Option<PointId>,
        degree: u64,
    ) -> Result<PointId, ConstellationError> {
        if !self.contains(parent) {
            return Err(ConstellationError::UnknownParent(parent));
        }
        if degree == 0 {
            return Err(ConstellationError::ZeroDegree);
        }
        let id = PointId::from_index(self.points.len());
        if let Some(target) = satellite {
            if !self.contains(target) {
                return Err(ConstellationError::UnknownPoint(target));
            }
            if !self.proximity_targets(parent).any(|q| q == target) {
                return Err(ConstellationError::IllegalSatellite { point: id, target });
            }
        }
        self.points.push(PointRecord {
            parent: Some(parent),
            satellite,
            degree,
        });
        Ok(id)
    }

    /// Rebuilds a constellation from raw records in ancestor-first order.
    ///
    /// Only structural sanity is enforced here (references resolve and point
    /// backwards, the root record is well formed, degrees are positive);
    /// semantic invariants are left to [`Constellation::validate`] so that a
    /// caller can report all of them at once.
    pub fn from_parts(points: Vec<PointRecord>) -> Result<Self, ConstellationError> {
        if points.is_empty() {
            return Err(ConstellationError::Empty);
        }
        let root = &points[0];
        if root.parent.is_some() || root.satellite.is_some() || root.degree != 1 {
            return Err(ConstellationError::MalformedRoot);
        }
        for (i, record) in points.iter().enumerate().skip(1) {
            let point = PointId::from_index(i);
            if record.degree == 0 {
                return Err(ConstellationError::ZeroDegree);
            }
            if let Some(parent) = record.parent {
                if parent.index() >= i {
                    return Err(ConstellationError::UnorderedParent { point, parent });
                }
            }
            if let Some(target) = record.satellite {
                if target.index() >= i {
                    return Err(ConstellationError::UnorderedSatellite { point, target });
                }
            }
        }
        Ok(Constellation { points })
    }

    pub fn records(&self) -> &[PointRecord] {
        &self.points
    }

    /// Checks every constellation invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for p in self.points().skip(1) {
            let record = &self.points[p.index()];
            let Some(parent) = record.parent else {
                violations.push(Violation::UnrootedPoint(p));
                continue;
            };
            if let Some(target) = record.satellite {
                if target == parent {
                    violations.push(Violation::SatelliteEqualsParent(p));
                } else if !self.proximity_targets(parent).any(|q| q == target) {
                    violations.push(Violation::IllegalSatellite { point: p, target });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn parent(&self, p: PointId) -> Option<PointId> {
        self.points[p.index()].parent
    }

    pub fn satellite_target(&self, p: PointId) -> Option<PointId> {
        self.points[p.index()].satellite
    }

    /// Residue degree of `p` over its parent; 1 for the root.
    pub fn edge_degree(&self, p: PointId) -> u64 {
        self.points[p.index()].degree
    }

    /// The points `p` is proximate to: its parent and, for a satellite, the
    /// recorded second target.
    pub fn proximity_targets(&self, p: PointId) -> impl Iterator<Item = PointId> + '_ {
        let record = &self.points[p.index()];
        record.parent.into_iter().chain(record.satellite)
    }

    /// Whether `p` is proximate to `target`.
    pub fn is_proximate(&self, p: PointId, target: PointId) -> bool {
        self.proximity_targets(p).any(|q| q == target)
    }

    /// All points proximate to `b`, in ancestor-first order.
    pub fn proximate_points(&self, b: PointId) -> Vec<PointId> {
        self.points().filter(|&p| self.is_proximate(p, b)).collect()
    }

    /// Whether `ancestor` lies on the chain from the root to `p` (inclusive).
    pub fn is_ancestor_or_self(&self, ancestor: PointId, p: PointId) -> bool {
        let mut cur = Some(p);
        while let Some(q) = cur {
            if q == ancestor {
                return true;
            }
            cur = self.parent(q);
        }
        false
    }

    /// Residue degree `[top : base]`, composed along the chain from `base`
    /// to `top`. Returns `None` when `base` is not an ancestor of `top`.
    pub fn degree_between(&self, base: PointId, top: PointId) -> Option<u64> {
        let mut degree = 1u64;
        let mut cur = top;
        while cur != base {
            degree = degree
                .checked_mul(self.edge_degree(cur))
                .expect("residue degree overflow");
            cur = self.parent(cur)?;
        }
        Some(degree)
    }

    /// Residue degree of `p` over the base point.
    pub fn degree_over_base(&self, p: PointId) -> Result<u64, ConstellationError> {
        if !self.contains(p) {
            return Err(ConstellationError::UnknownPoint(p));
        }
        Ok(self
            .degree_between(self.root(), p)
            .expect("every point chains back to the root"))
    }

    /// The quadratic sequence from the root to `p`, both inclusive.
    pub fn chain(&self, p: PointId) -> Result<Vec<PointId>, ConstellationError> {
        if !self.contains(p) {
            return Err(ConstellationError::UnknownPoint(p));
        }
        let mut chain = Vec::new();
        let mut cur = Some(p);
        while let Some(q) = cur {
            chain.push(q);
            cur = self.parent(q);
        }
        chain.reverse();
        Ok(chain)
    }

    /// The subtree rooted at `b` (descendants including `b`), ancestor-first.
    pub fn subtree(&self, b: PointId) -> Vec<PointId> {
        self.points()
            .filter(|&p| self.is_ancestor_or_self(b, p))
            .collect()
    }

    /// Whether every residue degree is 1.
    pub fn is_degree_one(&self) -> bool {
        self.points.iter().all(|r| r.degree == 1)
    }

    /// The proximity matrix: unit diagonal, `-[C:B]` at `(B, C)` when `C` is
    /// proximate to `B`. Applied to a point basis it yields the excesses.
    pub fn proximity_matrix(&self) -> ProximityMatrix {
        let n = self.len();
        let mut entries = vec![0i64; n * n];
        for c in self.points() {
            entries[c.index() * n + c.index()] = 1;
            for b in self.proximity_targets(c) {
                let degree = self
                    .degree_between(b, c)
                    .expect("proximity targets are ancestors");
                entries[b.index() * n + c.index()] = -(degree as i64);
            }
        }
        ProximityMatrix { n, entries }
    }
}

/// Integer matrix of the proximity relation, rows and columns indexed by the
/// points of one constellation in ancestor-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ProximityMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: PointId, col: PointId) -> i64 {
        self.entries[row.index() * self.n + col.index()]
    }

    pub fn row(&self, row: PointId) -> &[i64] {
        let start = row.index() * self.n;
        &self.entries[start..start + self.n]
    }

    /// Matrix-vector product; sends a point basis to its excess vector.
    pub fn apply(&self, values: &[u64]) -> Vec<i64> {
        assert_eq!(values.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entries[i * self.n + j] * values[j] as i64)
                    .sum()
            })
            .collect()
    }

    pub fn is_unitriangular(&self) -> bool {
        (0..self.n).all(|i| {
            self.entries[i * self.n + i] == 1 && (0..i).all(|j| self.entries[i * self.n + j] == 0)
        })
    }

    /// Exact integer inverse, by back-substitution on the unitriangular form.
    /// Column `B` of the inverse is the point basis of the simple ideal at `B`.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Vec<Vec<i64>> {
        assert!(self.is_unitriangular());
        let n = self.n;
        let mut inv = vec![vec![0i64; n]; n];
        for col in 0..n {
            inv[col][col] = 1;
            for row in (0..col).rev() {
                let mut sum = 0i64;
                for k in row + 1..=col {
                    sum += self.entries[row * n + k] * inv[k][col];
                }
                inv[row][col] = -sum;
            }
        }
        inv
    }
}
