//! JSON graph file format.
//!
//! ```json
//! {"entities":[{"id":"A","kind":"point"},{"id":"C","kind":"circle","radius_known":true,"radius":2.0}],
//!  "constraints":[{"kind":"distance","between":["A","B"],"value":5.0}]}
//! ```
//!
//! Entities and constraints are written in insertion order. Floats use the
//! shortest representation that round-trips exactly.

use serde::{Deserialize, Serialize};

use super::{Constraint, ConstraintGraph, ConstraintKind, Entity, EntityKind, GraphError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    entities: Vec<EntityRecord>,
    constraints: Vec<ConstraintRecord>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "snake_case")]
enum EntityTag {
    Point,
    Line,
    Circle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityRecord {
    id: String,
    kind: EntityTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius_known: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum ConstraintTag {
    Distance,
    PointLineDistance,
    Incidence,
    Angle,
    Tangency,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintRecord {
    kind: ConstraintTag,
    between: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

impl From<&Entity> for EntityRecord {
    fn from(e: &Entity) -> Self {
        let (kind, radius_known) = match e.kind {
            EntityKind::Point => (EntityTag::Point, None),
            EntityKind::Line => (EntityTag::Line, None),
            EntityKind::Circle { radius_known } => (EntityTag::Circle, Some(radius_known)),
        };
        EntityRecord {
            id: e.id.clone(),
            kind,
            radius_known,
            radius: e.radius,
        }
    }
}

impl TryFrom<EntityRecord> for Entity {
    type Error = GraphError;

    fn try_from(r: EntityRecord) -> Result<Self, GraphError> {
        let kind = match (r.kind, r.radius_known) {
            (EntityTag::Point, None) => EntityKind::Point,
            (EntityTag::Line, None) => EntityKind::Line,
            (EntityTag::Circle, known) => EntityKind::Circle {
                radius_known: known.unwrap_or(r.radius.is_some()),
            },
            (_, Some(_)) => {
                return Err(GraphError::Syntax(format!(
                    "`radius_known` only applies to circles (entity `{}`)",
                    r.id
                )))
            }
        };
        Ok(Entity {
            id: r.id,
            kind,
            radius: r.radius,
        })
    }
}

impl From<&Constraint> for ConstraintRecord {
    fn from(c: &Constraint) -> Self {
        let kind = match c.kind {
            ConstraintKind::Distance(_) => ConstraintTag::Distance,
            ConstraintKind::PointLineDistance(_) => ConstraintTag::PointLineDistance,
            ConstraintKind::Incidence => ConstraintTag::Incidence,
            ConstraintKind::Angle(_) => ConstraintTag::Angle,
            ConstraintKind::Tangency => ConstraintTag::Tangency,
        };
        ConstraintRecord {
            kind,
            between: [c.between.0.clone(), c.between.1.clone()],
            value: c.kind.value(),
        }
    }
}

impl TryFrom<ConstraintRecord> for Constraint {
    type Error = GraphError;

    fn try_from(r: ConstraintRecord) -> Result<Self, GraphError> {
        let [a, b] = r.between;
        let need = |v: Option<f64>| {
            v.ok_or_else(|| GraphError::Syntax(format!("constraint {a}-{b} is missing `value`")))
        };
        let kind = match r.kind {
            ConstraintTag::Distance => ConstraintKind::Distance(need(r.value)?),
            ConstraintTag::PointLineDistance => ConstraintKind::PointLineDistance(need(r.value)?),
            ConstraintTag::Angle => ConstraintKind::Angle(need(r.value)?),
            ConstraintTag::Incidence | ConstraintTag::Tangency if r.value.is_some() => {
                return Err(GraphError::Syntax(format!(
                    "constraint {a}-{b} takes no `value`"
                )))
            }
            ConstraintTag::Incidence => ConstraintKind::Incidence,
            ConstraintTag::Tangency => ConstraintKind::Tangency,
        };
        Ok(Constraint {
            between: (a, b),
            kind,
        })
    }
}

/// Render a graph in the canonical JSON file format.
pub fn serialize(g: &ConstraintGraph) -> String {
    let record = GraphRecord {
        entities: g.entities().iter().map(EntityRecord::from).collect(),
        constraints: g.constraints().iter().map(ConstraintRecord::from).collect(),
    };
    serde_json::to_string(&record).expect("graph records always serialize")
}

/// Read a graph from the canonical JSON file format and validate it.
pub fn parse(text: &str) -> Result<ConstraintGraph, GraphError> {
    let record: GraphRecord =
        serde_json::from_str(text).map_err(|e| GraphError::Syntax(e.to_string()))?;
    let entities = record
        .entities
        .into_iter()
        .map(Entity::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    let constraints = record
        .constraints
        .into_iter()
        .map(Constraint::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    ConstraintGraph::new(entities, constraints)
}
