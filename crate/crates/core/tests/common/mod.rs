#![allow(dead_code)]

use std::collections::BTreeMap;

use gcs_core::geom::{line_through_points, Placement, Point2, EPS};
use gcs_core::graph::{Constraint, ConstraintGraph, Entity, EntityKind};
use proptest::prelude::*;

/// Entity kinds and loose edges; edges between kinds that admit no
/// constraint are dropped.
pub fn mixed_graph() -> impl Strategy<Value = ConstraintGraph> {
    (2usize..7)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..4, n),
                proptest::collection::vec((0..n, 0..n, 0u8..2), 0..14),
            )
        })
        .prop_map(|(kinds, edges)| build_mixed(&kinds, &edges))
}

pub fn build_mixed(kinds: &[u8], edges: &[(usize, usize, u8)]) -> ConstraintGraph {
    let entities: Vec<Entity> = kinds
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let id = format!("e{i}");
            match k {
                0 => Entity::point(id),
                1 => Entity::line(id),
                2 => Entity::circle(id, 1.0 + i as f64),
                _ => Entity::free_circle(id),
            }
        })
        .collect();
    let mut constraints = Vec::new();
    for &(i, j, sel) in edges {
        if i == j {
            continue;
        }
        let (a, b) = (entities[i].id.clone(), entities[j].id.clone());
        let (ka, kb) = (entities[i].kind, entities[j].kind);
        let c = match (ka.is_point(), ka.is_line(), kb.is_point(), kb.is_line()) {
            (true, _, true, _) => Constraint::distance(a, b, 1.5),
            (true, _, _, true) | (_, true, true, _) if sel == 0 => {
                Constraint::point_line_distance(a, b, 0.5)
            }
            (true, _, _, _) | (_, _, true, _) => Constraint::incidence(a, b),
            (_, true, _, true) => Constraint::angle(a, b, 1.0),
            _ => Constraint::tangency(a, b),
        };
        constraints.push(c);
    }
    ConstraintGraph::new(entities, constraints).expect("generator builds valid graphs")
}

pub fn is_free_circle(k: EntityKind) -> bool {
    k == EntityKind::Circle {
        radius_known: false,
    }
}

pub fn pt(x: f64, y: f64) -> Placement {
    Placement::Point(Point2::new(x, y))
}

pub fn line(p: Point2, q: Point2) -> Placement {
    Placement::Line(line_through_points(p, q, EPS).unwrap())
}

/// The unit-distance Moser spindle: two rhombi of equilateral triangles
/// hinged at A and turned until the far tips D and G are one apart.
pub fn moser_embedding() -> BTreeMap<String, Placement> {
    let s3 = 3f64.sqrt();
    let phi = 2.0 * (1.0 / (2.0 * s3)).asin();
    let rot = |x: f64, y: f64| {
        let (s, c) = phi.sin_cos();
        pt(c * x - s * y, s * x + c * y)
    };
    [
        ("A", pt(0.0, 0.0)),
        ("B", pt(s3 / 2.0, 0.5)),
        ("C", pt(s3 / 2.0, -0.5)),
        ("D", pt(s3, 0.0)),
        ("E", rot(s3 / 2.0, 0.5)),
        ("F", rot(s3 / 2.0, -0.5)),
        ("G", rot(s3, 0.0)),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), p))
    .collect()
}
