//! Forward simulation: read constraint values off a placement, and compare
//! placements up to a rigid motion.

use std::collections::BTreeMap;

use super::ExecError;
use crate::geom::{line_angle, rigid_align, Placement, Point2, EPS};
use crate::graph::{Constraint, ConstraintGraph, ConstraintKind};

/// A copy of `g` whose constraint values are measured on `placements`.
pub fn measure(
    g: &ConstraintGraph,
    placements: &BTreeMap<String, Placement>,
) -> Result<ConstraintGraph, ExecError> {
    let at = |id: &str| {
        placements
            .get(id)
            .copied()
            .ok_or_else(|| ExecError::MissingPlacement(id.to_string()))
    };
    let mut constraints = Vec::with_capacity(g.m());
    for c in g.constraints() {
        let (a, b) = (at(&c.between.0)?, at(&c.between.1)?);
        let kind = match (c.kind, a, b) {
            (ConstraintKind::Distance(_), Placement::Point(p), Placement::Point(q)) => {
                ConstraintKind::Distance(p.dist(q))
            }
            (ConstraintKind::PointLineDistance(_), Placement::Point(p), Placement::Line(l))
            | (ConstraintKind::PointLineDistance(_), Placement::Line(l), Placement::Point(p)) => {
                ConstraintKind::PointLineDistance(l.signed_distance(p).abs())
            }
            (ConstraintKind::Angle(_), Placement::Line(l1), Placement::Line(l2)) => {
                ConstraintKind::Angle(line_angle(&l1, &l2))
            }
            (kind, _, _) => kind,
        };
        constraints.push(Constraint {
            between: c.between.clone(),
            kind,
        });
    }
    ConstraintGraph::new(g.entities().to_vec(), constraints)
        .map_err(|e| ExecError::UnsupportedStep(e.to_string()))
}

/// Whether some rigid motion (possibly a reflection) carries `a` onto `b`
/// within `tol`. The motion is fixed by the first two distinct points of `a`.
pub fn congruent(
    a: &BTreeMap<String, Placement>,
    b: &BTreeMap<String, Placement>,
    tol: f64,
) -> bool {
    if a.len() != b.len() || a.keys().any(|k| !b.contains_key(k)) {
        return false;
    }
    let points: Vec<(&String, Point2)> = a
        .iter()
        .filter_map(|(k, p)| p.as_point().map(|q| (k, q)))
        .collect();
    let Some((i, j)) = points.iter().enumerate().find_map(|(i, (_, p))| {
        points[i + 1..]
            .iter()
            .position(|(_, q)| p.dist(*q) > EPS)
            .map(|off| (i, i + 1 + off))
    }) else {
        return a.iter().all(|(k, p)| p.approx_eq(&b[k], tol));
    };
    let (ka, pa) = points[i];
    let (kb, pb) = points[j];
    let (Some(qa), Some(qb)) = (b[ka].as_point(), b[kb].as_point()) else {
        return false;
    };
    [false, true].into_iter().any(|reflect| {
        rigid_align((pa, pb), (qa, qb), reflect)
            .is_ok_and(|m| a.iter().all(|(k, p)| m.apply(p).approx_eq(&b[k], tol)))
    })
}
