//! Named constraint graphs used throughout the tests, the guide and the CLI.
//!
//! Values are consistent with a concrete embedding wherever a fixture is
//! meant to be solved; purely structural fixtures use unit distances.

use std::f64::consts::PI;

use crate::graph::{Constraint, ConstraintGraph, Entity, GraphError};

pub const FIXTURE_NAMES: &[&str] = &[
    "triangle",
    "k4",
    "path3",
    "moser-spindle",
    "three-prism",
    "k33",
    "three-angle-triangle",
    "degenerate-triangle",
    "quad-angle",
    "quad-angle-aux",
    "cramer-castillon",
    "malfatti",
];

/// Look up a fixture by name.
pub fn fixture(name: &str) -> Result<ConstraintGraph, GraphError> {
    match name {
        "triangle" => distances(
            &["A", "B", "C"],
            &[("A", "B", 3.0), ("B", "C", 5.0), ("C", "A", 4.0)],
        ),
        "k4" => unit(
            &["A", "B", "C", "D"],
            &[
                ("A", "B"),
                ("A", "C"),
                ("A", "D"),
                ("B", "C"),
                ("B", "D"),
                ("C", "D"),
            ],
        ),
        "path3" => unit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]),
        "moser-spindle" => unit(
            &["A", "B", "C", "D", "E", "F", "G"],
            &[
                ("A", "B"),
                ("A", "C"),
                ("B", "C"),
                ("B", "D"),
                ("C", "D"),
                ("A", "E"),
                ("A", "F"),
                ("E", "F"),
                ("E", "G"),
                ("F", "G"),
                ("D", "G"),
            ],
        ),
        "three-prism" => unit(
            &["A", "B", "C", "D", "E", "F"],
            &[
                ("A", "B"),
                ("B", "C"),
                ("C", "A"),
                ("D", "E"),
                ("E", "F"),
                ("F", "D"),
                ("A", "D"),
                ("B", "E"),
                ("C", "F"),
            ],
        ),
        "k33" => {
            let mut edges = Vec::new();
            for a in ["A", "B", "C"] {
                for b in ["D", "E", "F"] {
                    edges.push((a, b));
                }
            }
            unit(&["A", "B", "C", "D", "E", "F"], &edges)
        }
        "three-angle-triangle" => ConstraintGraph::new(
            vec![Entity::line("L1"), Entity::line("L2"), Entity::line("L3")],
            vec![
                Constraint::angle("L1", "L2", 1.0),
                Constraint::angle("L2", "L3", 1.2),
                Constraint::angle("L3", "L1", PI - 2.2),
            ],
        ),
        "degenerate-triangle" => distances(
            &["A", "B", "C"],
            &[("A", "B", 1.0), ("B", "C", 1.0), ("C", "A", 2.0)],
        ),
        "quad-angle" => quad_angle(),
        "quad-angle-aux" => quad_angle_aux(),
        "cramer-castillon" => cramer_castillon(),
        "malfatti" => malfatti(),
        other => Err(GraphError::UnknownFixture(other.to_string())),
    }
}

fn distances(ids: &[&str], edges: &[(&str, &str, f64)]) -> Result<ConstraintGraph, GraphError> {
    ConstraintGraph::new(
        ids.iter().map(|&i| Entity::point(i)).collect(),
        edges
            .iter()
            .map(|&(a, b, d)| Constraint::distance(a, b, d))
            .collect(),
    )
}

fn unit(ids: &[&str], edges: &[(&str, &str)]) -> Result<ConstraintGraph, GraphError> {
    let weighted: Vec<(&str, &str, f64)> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
    distances(ids, &weighted)
}

type Xy = (f64, f64);

fn dist(p: Xy, q: Xy) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

/// Unsigned angle in (0, π) between the directions `u` and `v`, folded so
/// that the measured line angle lies in (0, π/2].
fn line_angle(u: Xy, v: Xy) -> f64 {
    let a = (u.1.atan2(u.0) - v.1.atan2(v.0)).rem_euclid(PI);
    a.min(PI - a)
}

// Quadrilateral ABCD with AD and BC non-parallel.
const QA: Xy = (0.0, 0.0);
const QB: Xy = (0.5, 2.0);
const QC: Xy = (3.0, 3.0);
const QD: Xy = (4.0, 0.0);

fn sub(p: Xy, q: Xy) -> Xy {
    (p.0 - q.0, p.1 - q.1)
}

fn quad_angle() -> Result<ConstraintGraph, GraphError> {
    let beta = line_angle(sub(QD, QA), sub(QC, QB));
    ConstraintGraph::new(
        vec![
            Entity::point("A"),
            Entity::point("B"),
            Entity::point("C"),
            Entity::point("D"),
            Entity::line("LAD"),
            Entity::line("LBC"),
        ],
        vec![
            Constraint::incidence("A", "LAD"),
            Constraint::incidence("D", "LAD"),
            Constraint::incidence("B", "LBC"),
            Constraint::incidence("C", "LBC"),
            Constraint::distance("A", "B", dist(QA, QB)),
            Constraint::distance("B", "C", dist(QB, QC)),
            Constraint::distance("C", "D", dist(QC, QD)),
            Constraint::distance("D", "A", dist(QD, QA)),
            Constraint::angle("LAD", "LBC", beta),
        ],
    )
}

/// The quadrilateral with the auxiliary point E = A + (C − B), so that AE is
/// parallel to BC with the same length and EC equals AB.
fn quad_angle_aux() -> Result<ConstraintGraph, GraphError> {
    let qe = (QA.0 + QC.0 - QB.0, QA.1 + QC.1 - QB.1);
    let beta = line_angle(sub(QD, QA), sub(qe, QA));
    ConstraintGraph::new(
        vec![
            Entity::point("A"),
            Entity::point("B"),
            Entity::point("C"),
            Entity::point("D"),
            Entity::point("E"),
            Entity::line("LAD"),
            Entity::line("LAE"),
        ],
        vec![
            Constraint::incidence("A", "LAD"),
            Constraint::incidence("A", "LAE"),
            Constraint::angle("LAD", "LAE", beta),
            Constraint::incidence("D", "LAD"),
            Constraint::incidence("E", "LAE"),
            Constraint::distance("D", "A", dist(QD, QA)),
            Constraint::distance("A", "E", dist(QC, QB)),
            Constraint::distance("E", "C", dist(QA, QB)),
            Constraint::distance("C", "D", dist(QC, QD)),
            Constraint::distance("C", "B", dist(QC, QB)),
            Constraint::distance("A", "B", dist(QA, QB)),
        ],
    )
}

/// Triangle MNP inscribed in the circle of centre O whose sides pass through
/// A, B and C. The circle is carried by the distances OM = ON = OP.
fn cramer_castillon() -> Result<ConstraintGraph, GraphError> {
    let o = (0.0, 0.0);
    let r = 2.0;
    let on_circle = |t: f64| (r * t.cos(), r * t.sin());
    let (m, n, p) = (on_circle(0.0), on_circle(2.2), on_circle(4.1));
    let along =
        |from: Xy, to: Xy, t: f64| (from.0 + t * (to.0 - from.0), from.1 + t * (to.1 - from.1));
    let a = along(m, n, 1.4);
    let b = along(n, p, 1.3);
    let c = along(p, m, 1.5);
    let ids = ["O", "A", "B", "C", "M", "N", "P"];
    let mut entities: Vec<Entity> = ids.iter().map(|&i| Entity::point(i)).collect();
    entities.extend(["LMN", "LNP", "LPM"].map(Entity::line));
    let mut constraints = vec![
        Constraint::distance("O", "A", dist(o, a)),
        Constraint::distance("O", "B", dist(o, b)),
        Constraint::distance("O", "C", dist(o, c)),
        Constraint::distance("A", "B", dist(a, b)),
        Constraint::distance("B", "C", dist(b, c)),
        Constraint::distance("O", "M", r),
        Constraint::distance("O", "N", r),
        Constraint::distance("O", "P", r),
    ];
    for (pt, line) in [
        ("M", "LMN"),
        ("N", "LMN"),
        ("A", "LMN"),
        ("N", "LNP"),
        ("P", "LNP"),
        ("B", "LNP"),
        ("P", "LPM"),
        ("M", "LPM"),
        ("C", "LPM"),
    ] {
        constraints.push(Constraint::incidence(pt, line));
    }
    ConstraintGraph::new(entities, constraints)
}

/// Triangle ABC with its side lines and three free-radius circles, each
/// inscribed in one angle and tangent to the other two circles.
fn malfatti() -> Result<ConstraintGraph, GraphError> {
    let (a, b, c) = ((0.0, 0.0), (4.0, 0.0), (1.0, 3.0));
    let mut entities: Vec<Entity> = ["A", "B", "C"].map(Entity::point).to_vec();
    entities.extend(["LAB", "LBC", "LCA"].map(Entity::line));
    entities.extend(["K1", "K2", "K3"].map(Entity::free_circle));
    let mut constraints = vec![
        Constraint::distance("A", "B", dist(a, b)),
        Constraint::distance("B", "C", dist(b, c)),
        Constraint::distance("C", "A", dist(c, a)),
    ];
    for (pt, line) in [
        ("A", "LAB"),
        ("B", "LAB"),
        ("B", "LBC"),
        ("C", "LBC"),
        ("C", "LCA"),
        ("A", "LCA"),
    ] {
        constraints.push(Constraint::incidence(pt, line));
    }
    for (x, y) in [
        ("K1", "LAB"),
        ("K1", "LCA"),
        ("K2", "LAB"),
        ("K2", "LBC"),
        ("K3", "LBC"),
        ("K3", "LCA"),
        ("K1", "K2"),
        ("K2", "K3"),
        ("K3", "K1"),
    ] {
        constraints.push(Constraint::tangency(x, y));
    }
    ConstraintGraph::new(entities, constraints)
}
