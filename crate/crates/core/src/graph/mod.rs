//! Constraint graphs: geometric entities as vertices, scalar constraints as edges.
//!
//! Every constraint is binary and removes exactly one degree of freedom.
//! Duplicate constraints between the same pair are accepted here; the
//! rigidity analysis reports them as over-constraint.

mod format;

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

pub use format::{parse, serialize};

/// Errors raised while building, reading or transforming a constraint graph.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("duplicate entity id `{0}`")]
    DuplicateId(String),
    #[error("unknown entity `{0}`")]
    UnknownEndpoint(String),
    #[error("constraint joins `{0}` to itself")]
    SelfLoop(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("bad value: {0}")]
    BadValue(String),
    #[error("graph needs at least two entities, found {0}")]
    TooSmall(usize),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("no distance edge between `{0}` and `{1}`")]
    MissingEdge(String, String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

/// Geometric kind of an entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Point,
    Line,
    Circle { radius_known: bool },
}

impl EntityKind {
    /// Degrees of freedom of an entity of this kind in the plane.
    pub fn dof(self) -> u32 {
        match self {
            EntityKind::Point | EntityKind::Line => 2,
            EntityKind::Circle { radius_known: true } => 2,
            EntityKind::Circle {
                radius_known: false,
            } => 3,
        }
    }

    pub fn is_point(self) -> bool {
        matches!(self, EntityKind::Point)
    }

    pub fn is_line(self) -> bool {
        matches!(self, EntityKind::Line)
    }

    pub fn is_circle(self) -> bool {
        matches!(self, EntityKind::Circle { .. })
    }

    fn name(self) -> &'static str {
        match self {
            EntityKind::Point => "point",
            EntityKind::Line => "line",
            EntityKind::Circle { .. } => "circle",
        }
    }
}

/// Free-function form of [`EntityKind::dof`].
pub fn dof(kind: EntityKind) -> u32 {
    kind.dof()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    /// Radius of a known-radius circle; `None` for every other kind.
    pub radius: Option<f64>,
}

impl Entity {
    pub fn point(id: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            kind: EntityKind::Point,
            radius: None,
        }
    }

    pub fn line(id: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            kind: EntityKind::Line,
            radius: None,
        }
    }

    pub fn circle(id: impl Into<String>, radius: f64) -> Self {
        Entity {
            id: id.into(),
            kind: EntityKind::Circle { radius_known: true },
            radius: Some(radius),
        }
    }

    pub fn free_circle(id: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            kind: EntityKind::Circle {
                radius_known: false,
            },
            radius: None,
        }
    }

    pub fn dof(&self) -> u32 {
        self.kind.dof()
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.id.is_empty() {
            return Err(GraphError::BadValue("entity id must be nonempty".into()));
        }
        match (self.kind, self.radius) {
            (EntityKind::Circle { radius_known: true }, Some(r)) => {
                if !(r.is_finite() && r > 0.0) {
                    return Err(GraphError::BadValue(format!(
                        "circle `{}` radius must be positive, got {r}",
                        self.id
                    )));
                }
            }
            (EntityKind::Circle { radius_known: true }, None) => {
                return Err(GraphError::BadValue(format!(
                    "circle `{}` has a known radius but no value",
                    self.id
                )))
            }
            (_, Some(_)) => {
                return Err(GraphError::BadValue(format!(
                    "entity `{}` carries a radius but is not a known-radius circle",
                    self.id
                )))
            }
            (_, None) => {}
        }
        Ok(())
    }
}

/// What a constraint measures. Values are lengths or radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintKind {
    /// Point to point distance, strictly positive.
    Distance(f64),
    /// Unsigned distance from a point to a line.
    PointLineDistance(f64),
    /// Point on a line or on a circle.
    Incidence,
    /// Angle between two lines, in the open interval (0, π).
    Angle(f64),
    /// Line tangent to a circle, or two circles tangent.
    Tangency,
}

impl ConstraintKind {
    pub fn value(&self) -> Option<f64> {
        match *self {
            ConstraintKind::Distance(v)
            | ConstraintKind::PointLineDistance(v)
            | ConstraintKind::Angle(v) => Some(v),
            ConstraintKind::Incidence | ConstraintKind::Tangency => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstraintKind::Distance(_) => "distance",
            ConstraintKind::PointLineDistance(_) => "point_line_distance",
            ConstraintKind::Incidence => "incidence",
            ConstraintKind::Angle(_) => "angle",
            ConstraintKind::Tangency => "tangency",
        }
    }

    /// Whether the unordered pair of endpoint kinds is admissible for this kind.
    pub fn admits(&self, a: EntityKind, b: EntityKind) -> bool {
        let either = |f: &dyn Fn(EntityKind, EntityKind) -> bool| f(a, b) || f(b, a);
        match self {
            ConstraintKind::Distance(_) => a.is_point() && b.is_point(),
            ConstraintKind::PointLineDistance(_) => either(&|x, y| x.is_point() && y.is_line()),
            ConstraintKind::Incidence => {
                either(&|x, y| x.is_point() && (y.is_line() || y.is_circle()))
            }
            ConstraintKind::Angle(_) => a.is_line() && b.is_line(),
            ConstraintKind::Tangency => {
                either(&|x, y| x.is_line() && y.is_circle()) || (a.is_circle() && b.is_circle())
            }
        }
    }

    fn validate_value(&self) -> Result<(), GraphError> {
        match *self {
            ConstraintKind::Distance(v) if !(v.is_finite() && v > 0.0) => Err(
                GraphError::BadValue(format!("distance must be positive, got {v}")),
            ),
            ConstraintKind::PointLineDistance(v) if !(v.is_finite() && v >= 0.0) => Err(
                GraphError::BadValue(format!("point-line distance must be non-negative, got {v}")),
            ),
            ConstraintKind::Angle(v) if !(v > 0.0 && v < PI) => Err(GraphError::BadValue(format!(
                "angle must lie in (0, pi), got {v}"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub between: (String, String),
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn new(a: impl Into<String>, b: impl Into<String>, kind: ConstraintKind) -> Self {
        Constraint {
            between: (a.into(), b.into()),
            kind,
        }
    }

    pub fn distance(a: impl Into<String>, b: impl Into<String>, d: f64) -> Self {
        Self::new(a, b, ConstraintKind::Distance(d))
    }

    pub fn incidence(a: impl Into<String>, b: impl Into<String>) -> Self {
        Self::new(a, b, ConstraintKind::Incidence)
    }

    pub fn angle(a: impl Into<String>, b: impl Into<String>, radians: f64) -> Self {
        Self::new(a, b, ConstraintKind::Angle(radians))
    }

    pub fn tangency(a: impl Into<String>, b: impl Into<String>) -> Self {
        Self::new(a, b, ConstraintKind::Tangency)
    }

    pub fn point_line_distance(a: impl Into<String>, b: impl Into<String>, d: f64) -> Self {
        Self::new(a, b, ConstraintKind::PointLineDistance(d))
    }

    /// The endpoint opposite `id`, if `id` is an endpoint.
    pub fn other(&self, id: &str) -> Option<&str> {
        if self.between.0 == id {
            Some(&self.between.1)
        } else if self.between.1 == id {
            Some(&self.between.0)
        } else {
            None
        }
    }

    pub fn touches(&self, id: &str) -> bool {
        self.between.0 == id || self.between.1 == id
    }
}

/// A validated constraint graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    entities: Vec<Entity>,
    constraints: Vec<Constraint>,
    index: HashMap<String, usize>,
}

impl PartialEq for ConstraintGraph {
    fn eq(&self, other: &Self) -> bool {
        self.entities == other.entities && self.constraints == other.constraints
    }
}

impl ConstraintGraph {
    /// Validate entities and constraints and assemble a graph.
    pub fn new(entities: Vec<Entity>, constraints: Vec<Constraint>) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(entities.len());
        for (i, e) in entities.iter().enumerate() {
            e.validate()?;
            if index.insert(e.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(e.id.clone()));
            }
        }
        for c in &constraints {
            let (a, b) = &c.between;
            let ka = index
                .get(a)
                .map(|&i| entities[i].kind)
                .ok_or_else(|| GraphError::UnknownEndpoint(a.clone()))?;
            let kb = index
                .get(b)
                .map(|&i| entities[i].kind)
                .ok_or_else(|| GraphError::UnknownEndpoint(b.clone()))?;
            if a == b {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            if !c.kind.admits(ka, kb) {
                return Err(GraphError::KindMismatch(format!(
                    "{} between {} `{a}` and {} `{b}`",
                    c.kind.name(),
                    ka.name(),
                    kb.name()
                )));
            }
            c.kind.validate_value()?;
        }
        Ok(ConstraintGraph {
            entities,
            constraints,
            index,
        })
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.index.get(id).map(|&i| &self.entities[i])
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Number of entities, `n`.
    pub fn n(&self) -> usize {
        self.entities.len()
    }

    /// Number of constraints, `m`.
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    /// Constraint endpoints as entity indices.
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        self.constraints
            .iter()
            .map(|c| (self.index[&c.between.0], self.index[&c.between.1]))
            .collect()
    }

    /// Per-entity degrees of freedom, in entity order.
    pub fn dofs(&self) -> Vec<u32> {
        self.entities.iter().map(Entity::dof).collect()
    }

    pub fn total_dof(&self) -> u32 {
        self.entities.iter().map(Entity::dof).sum()
    }

    /// True when every entity is a point and every constraint a distance.
    pub fn is_point_distance(&self) -> bool {
        self.entities.iter().all(|e| e.kind.is_point())
            && self
                .constraints
                .iter()
                .all(|c| matches!(c.kind, ConstraintKind::Distance(_)))
    }

    /// `Σ dof − 3 − m`: zero for an exact count, negative when too many constraints.
    pub fn deficiency(&self) -> Result<i64, GraphError> {
        if self.n() < 2 {
            return Err(GraphError::TooSmall(self.n()));
        }
        Ok(self.total_dof() as i64 - 3 - self.m() as i64)
    }

    /// The subgraph on `ids` with every constraint whose endpoints both lie in `ids`.
    pub fn induced_subgraph<'a, I>(&self, ids: I) -> Result<ConstraintGraph, GraphError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut keep = BTreeSet::new();
        for id in ids {
            let i = self
                .index_of(id)
                .ok_or_else(|| GraphError::UnknownEndpoint(id.to_string()))?;
            keep.insert(i);
        }
        let entities: Vec<Entity> = keep.iter().map(|&i| self.entities[i].clone()).collect();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| {
                keep.contains(&self.index[&c.between.0]) && keep.contains(&self.index[&c.between.1])
            })
            .cloned()
            .collect();
        ConstraintGraph::new(entities, constraints)
    }

    /// A copy with one more constraint appended.
    pub fn with_constraint(&self, c: Constraint) -> Result<ConstraintGraph, GraphError> {
        let mut constraints = self.constraints.clone();
        constraints.push(c);
        ConstraintGraph::new(self.entities.clone(), constraints)
    }

    /// A copy with the constraint at `index` removed.
    pub fn without_constraint(&self, index: usize) -> ConstraintGraph {
        let mut constraints = self.constraints.clone();
        constraints.remove(index);
        ConstraintGraph {
            entities: self.entities.clone(),
            constraints,
            index: self.index.clone(),
        }
    }
}

/// Free-function form of [`ConstraintGraph::new`].
pub fn build_graph(
    entities: Vec<Entity>,
    constraints: Vec<Constraint>,
) -> Result<ConstraintGraph, GraphError> {
    ConstraintGraph::new(entities, constraints)
}

impl fmt::Display for ConstraintGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
