//! The on-disk document format.
//!
//! A document is a JSON file holding one constellation (points with named
//! ids, listed ancestor-first), a set of named ideals given by their point
//! bases, and optionally named monomial generator lists. Serialization is
//! canonical — ancestor-first point order, nonzero basis entries only — so
//! canonical files round-trip byte for byte.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constellation::{Constellation, PointId, PointRecord};
use crate::ideal::PointBasis;
use crate::monomial::{parse_monomials, MonomialError, Staircase};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u64),
    #[error("duplicate point id {0:?}")]
    DuplicatePoint(String),
    #[error("the constellation has no points")]
    NoPoints,
    #[error("point {point:?} references unknown {role} {id:?}")]
    DanglingPointReference {
        point: String,
        role: &'static str,
        id: String,
    },
    #[error("the parent relation of {0:?} loops back on itself")]
    ParentCycle(String),
    #[error("point {0:?} must not be its own {1}")]
    SelfReference(String, &'static str),
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),
    #[error("ideal {ideal:?} references unknown point {id:?}")]
    DanglingIdealReference { ideal: String, id: String },
    #[error("unknown ideal {0:?}")]
    UnknownIdeal(String),
    #[error("in monomial list {name:?}: {source}")]
    Monomial { name: String, source: MonomialError },
}

#[derive(Debug, Serialize, Deserialize)]
struct FileDocument {
    version: u64,
    constellation: Vec<FilePoint>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    ideals: IndexMap<String, IndexMap<String, u64>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    monomials: IndexMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FilePoint {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    satellite: Option<String>,
    #[serde(default = "default_degree", skip_serializing_if = "is_default_degree")]
    degree: u64,
}

fn default_degree() -> u64 {
    1
}

#[allow(clippy::trivially_copy_pass_by_ref)]
fn is_default_degree(d: &u64) -> bool {
    *d == 1
}

/// A parsed document: a validated constellation with named points, plus
/// named point bases and monomial staircases.
#[derive(Debug, Clone)]
pub struct Document {
    constellation: Arc<Constellation>,
    names: Vec<String>,
    ideals: IndexMap<String, PointBasis>,
    monomials: IndexMap<String, Staircase>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        let file: FileDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(file.version));
        }
        if file.constellation.is_empty() {
            return Err(DocumentError::NoPoints);
        }

        // resolve names, reordering ancestor-first if the file is not
        let order = ancestor_first_order(&file.constellation)?;
        let mut names = Vec::with_capacity(order.len());
        let mut index_of = IndexMap::new();
        for &i in &order {
            let p = &file.constellation[i];
            if index_of.insert(p.id.clone(), names.len()).is_some() {
                return Err(DocumentError::DuplicatePoint(p.id.clone()));
            }
            names.push(p.id.clone());
        }
        let mut records = Vec::with_capacity(order.len());
        for &i in &order {
            let p = &file.constellation[i];
            let parent = p
                .parent
                .as_ref()
                .map(|id| resolve(&index_of, &p.id, "parent", id))
                .transpose()?;
            let satellite = p
                .satellite
                .as_ref()
                .map(|id| resolve(&index_of, &p.id, "satellite", id))
                .transpose()?;
            records.push(PointRecord {
                parent,
                satellite,
                degree: p.degree,
            });
        }
        let constellation = Constellation::from_parts(records)
            .map_err(|e| DocumentError::InvalidConstellation(e.to_string()))?;
        let report = constellation.validate();
        if !report.is_valid() {
            let rendered: Vec<String> = report
                .violations()
                .iter()
                .map(|v| {
                    let mut s = v.to_string();
                    // descending, so that p1 never clobbers the tail of p10
                    for (i, name) in names.iter().enumerate().rev() {
                        s = s.replace(&PointId::from_index(i).to_string(), name);
                    }
                    s
                })
                .collect();
            return Err(DocumentError::InvalidConstellation(rendered.join("; ")));
        }
        let constellation = Arc::new(constellation);

        let mut ideals = IndexMap::new();
        for (name, entries) in &file.ideals {
            let mut values = vec![0u64; constellation.len()];
            for (id, &value) in entries {
                let Some(&idx) = index_of.get(id) else {
                    return Err(DocumentError::DanglingIdealReference {
                        ideal: name.clone(),
                        id: id.clone(),
                    });
                };
                values[idx] = value;
            }
            let basis = PointBasis::new(&constellation, values)
                .expect("the length matches by construction");
            ideals.insert(name.clone(), basis);
        }

        let mut monomials = IndexMap::new();
        for (name, text) in &file.monomials {
            let staircase = parse_monomials(text).map_err(|source| DocumentError::Monomial {
                name: name.clone(),
                source,
            })?;
            monomials.insert(name.clone(), staircase);
        }

        Ok(Document {
            constellation,
            names,
            ideals,
            monomials,
        })
    }

    /// Canonical serialization; parsing it back yields an equal document.
    pub fn to_text(&self) -> String {
        let constellation = self
            .constellation
            .points()
            .map(|p| FilePoint {
                id: self.names[p.index()].clone(),
                parent: self
                    .constellation
                    .parent(p)
                    .map(|q| self.names[q.index()].clone()),
                satellite: self
                    .constellation
                    .satellite_target(p)
                    .map(|q| self.names[q.index()].clone()),
                degree: self.constellation.edge_degree(p),
            })
            .collect();
        let ideals = self
            .ideals
            .iter()
            .map(|(name, basis)| {
                let entries = self
                    .constellation
                    .points()
                    .filter(|&p| basis.value(p) > 0)
                    .map(|p| (self.names[p.index()].clone(), basis.value(p)))
                    .collect();
                (name.clone(), entries)
            })
            .collect();
        let monomials = self
            .monomials
            .iter()
            .map(|(name, s)| (name.clone(), s.to_string()))
            .collect();
        let file = FileDocument {
            version: FORMAT_VERSION,
            constellation,
            ideals,
            monomials,
        };
        let mut text = serde_json::to_string_pretty(&file).expect("documents serialize cleanly");
        text.push('\n');
        text
    }

    /// Builds a document programmatically; ideal and monomial names keep
    /// their insertion order.
    pub fn new(
        constellation: Arc<Constellation>,
        names: Vec<String>,
        ideals: Vec<(String, PointBasis)>,
        monomials: Vec<(String, Staircase)>,
    ) -> Document {
        assert_eq!(names.len(), constellation.len(), "one name per point");
        Document {
            constellation,
            names,
            ideals: ideals.into_iter().collect(),
            monomials: monomials.into_iter().collect(),
        }
    }

    pub fn constellation(&self) -> &Arc<Constellation> {
        &self.constellation
    }

    pub fn point_name(&self, p: PointId) -> &str {
        &self.names[p.index()]
    }

    pub fn point_names(&self) -> &[String] {
        &self.names
    }

    pub fn point_by_name(&self, name: &str) -> Option<PointId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(PointId::from_index)
    }

    pub fn ideal(&self, name: &str) -> Result<&PointBasis, DocumentError> {
        self.ideals
            .get(name)
            .ok_or_else(|| DocumentError::UnknownIdeal(name.to_string()))
    }

    pub fn ideals(&self) -> impl Iterator<Item = (&str, &PointBasis)> {
        self.ideals.iter().map(|(n, b)| (n.as_str(), b))
    }

    pub fn monomial(&self, name: &str) -> Option<&Staircase> {
        self.monomials.get(name)
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&str, &Staircase)> {
        self.monomials.iter().map(|(n, s)| (n.as_str(), s))
    }

    /// Renders the constellation as a DOT graph: solid edges to parents,
    /// dashed edges for satellite proximities, and — when an ideal is given
    /// — node labels `id:multiplicity(excess)`.
    pub fn export_dot(&self, ideal: Option<&str>) -> Result<String, DocumentError> {
        let basis = ideal.map(|name| self.ideal(name)).transpose()?;
        let excess = basis.map(|b| b.excess());
        let mut out = String::from("digraph cluster {\n  rankdir = BT;\n");
        for p in self.constellation.points() {
            let name = self.point_name(p);
            let label = match (&basis, &excess) {
                (Some(b), Some(e)) => {
                    format!("{name}:{}({})", b.value(p), e.value(p))
                }
                _ => name.to_string(),
            };
            out.push_str(&format!("  \"{name}\" [label=\"{label}\"];\n"));
        }
        for p in self.constellation.points() {
            if let Some(parent) = self.constellation.parent(p) {
                let degree = self.constellation.edge_degree(p);
                let attr = if degree != 1 {
                    format!(" [label=\"{degree}\"]")
                } else {
                    String::new()
                };
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\"{attr};\n",
                    self.point_name(p),
                    self.point_name(parent)
                ));
            }
        }
        for p in self.constellation.points() {
            if let Some(target) = self.constellation.satellite_target(p) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [style=dashed];\n",
                    self.point_name(p),
                    self.point_name(target)
                ));
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn resolve(
    index_of: &IndexMap<String, usize>,
    point: &str,
    role: &'static str,
    id: &str,
) -> Result<PointId, DocumentError> {
    if id == point {
        return Err(DocumentError::SelfReference(point.to_string(), role));
    }
    index_of
        .get(id)
        .map(|&i| PointId::from_index(i))
        .ok_or_else(|| DocumentError::DanglingPointReference {
            point: point.to_string(),
            role,
            id: id.to_string(),
        })
}

/// Stable topological order putting parents before children; detects
/// dangling parents and parent cycles.
fn ancestor_first_order(points: &[FilePoint]) -> Result<Vec<usize>, DocumentError> {
    let index_of: IndexMap<&str, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    let mut order = Vec::with_capacity(points.len());
    let mut placed = vec![false; points.len()];
    loop {
        let mut progressed = false;
        for (i, p) in points.iter().enumerate() {
            if placed[i] {
                continue;
            }
            let ready = match &p.parent {
                None => true,
                Some(parent) => {
                    let &j = index_of.get(parent.as_str()).ok_or_else(|| {
                        DocumentError::DanglingPointReference {
                            point: p.id.clone(),
                            role: "parent",
                            id: parent.clone(),
                        }
                    })?;
                    placed[j]
                }
            };
            if ready {
                placed[i] = true;
                order.push(i);
                progressed = true;
            }
        }
        if order.len() == points.len() {
            return Ok(order);
        }
        if !progressed {
            let stuck = points
                .iter()
                .enumerate()
                .find(|(i, _)| !placed[*i])
                .expect("some point is unplaced");
            return Err(DocumentError::ParentCycle(stuck.1.id.clone()));
        }
    }
}
