//! Structural diagnosis of constraint graphs.
//!
//! A graph with `Σ dof(v) − 3` constraints is well constrained when no
//! induced subgraph on two or more entities carries more than
//! `Σ dof(v') − 3` constraints. Any such subgraph is over-constrained;
//! otherwise a graph with fewer constraints is under-constrained.
//!
//! Two independent routes compute the verdict: [`diagnose_counting`]
//! enumerates subsets and [`diagnose_pebble`] runs the pebble game. They
//! agree on every input; the witness sets they report may differ.
//!
//! Counting is purely structural. Three lines pairwise constrained by angles
//! count as well constrained even though the triangle they bound can be
//! scaled freely; the construction phase catches that.

mod counting;
mod pebble;

use serde::Serialize;

use crate::graph::{ConstraintGraph, GraphError};

pub use counting::{diagnose_counting, COUNTING_LIMIT};
pub use pebble::diagnose_pebble;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "diagnosis", rename_all = "snake_case")]
pub enum Diagnosis {
    #[serde(rename = "well")]
    WellConstrained,
    #[serde(rename = "under")]
    UnderConstrained { deficit: u32 },
    /// `witness` holds sorted entity ids whose induced subgraph exceeds its count.
    #[serde(rename = "over")]
    OverConstrained { witness: Vec<String> },
}

impl Diagnosis {
    pub fn is_well(&self) -> bool {
        matches!(self, Diagnosis::WellConstrained)
    }

    /// Equal verdicts, ignoring which witness set was found.
    pub fn same_verdict(&self, other: &Diagnosis) -> bool {
        match (self, other) {
            (Diagnosis::OverConstrained { .. }, Diagnosis::OverConstrained { .. }) => true,
            _ => self == other,
        }
    }

    pub fn witness(&self) -> Option<&[String]> {
        match self {
            Diagnosis::OverConstrained { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Ids of an over-constrained part of `g`, if there is one.
pub fn overconstrained_witness(g: &ConstraintGraph) -> Result<Option<Vec<String>>, GraphError> {
    Ok(match diagnose_pebble(g)? {
        Diagnosis::OverConstrained { witness } => Some(witness),
        _ => None,
    })
}

/// Laman test for point/distance graphs.
pub fn is_laman(g: &ConstraintGraph) -> Result<bool, GraphError> {
    if !g.is_point_distance() {
        return Err(GraphError::KindMismatch(
            "Laman test needs a graph of points and distances".into(),
        ));
    }
    Ok(diagnose_pebble(g)?.is_well())
}

/// `m(W) − (Σ_{v∈W} dof(v) − 3)` for the subgraph induced by `ids`.
/// Positive means the subset is over-constrained.
pub fn excess(g: &ConstraintGraph, ids: &[String]) -> Result<i64, GraphError> {
    let sub = g.induced_subgraph(ids.iter().map(String::as_str))?;
    Ok(sub.m() as i64 - (sub.total_dof() as i64 - 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Constraint, Entity};
    use std::f64::consts::PI;

    fn points(ids: &[&str], edges: &[(&str, &str)]) -> ConstraintGraph {
        ConstraintGraph::new(
            ids.iter().map(|&i| Entity::point(i)).collect(),
            edges
                .iter()
                .map(|&(a, b)| Constraint::distance(a, b, 1.0))
                .collect(),
        )
        .unwrap()
    }

    fn k4_edges() -> Vec<(&'static str, &'static str)> {
        vec![
            ("A", "B"),
            ("A", "C"),
            ("A", "D"),
            ("B", "C"),
            ("B", "D"),
            ("C", "D"),
        ]
    }

    fn both(g: &ConstraintGraph) -> (Diagnosis, Diagnosis) {
        (diagnose_counting(g).unwrap(), diagnose_pebble(g).unwrap())
    }

    #[test]
    fn triangle_is_well() {
        let g = points(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("C", "A")]);
        let (c, p) = both(&g);
        assert_eq!(c, Diagnosis::WellConstrained);
        assert_eq!(p, Diagnosis::WellConstrained);
        assert_eq!(overconstrained_witness(&g).unwrap(), None);
        assert!(is_laman(&g).unwrap());
    }

    #[test]
    fn k4_is_over_with_all_four() {
        let g = points(&["A", "B", "C", "D"], &k4_edges());
        let all: Vec<String> = ["A", "B", "C", "D"].map(String::from).to_vec();
        let (c, p) = both(&g);
        assert_eq!(
            c,
            Diagnosis::OverConstrained {
                witness: all.clone()
            }
        );
        assert_eq!(
            p,
            Diagnosis::OverConstrained {
                witness: all.clone()
            }
        );
        assert_eq!(overconstrained_witness(&g).unwrap(), Some(all));
    }

    #[test]
    fn path_is_under_by_one() {
        let g = points(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        let (c, p) = both(&g);
        assert_eq!(c, Diagnosis::UnderConstrained { deficit: 1 });
        assert_eq!(p, c);
    }

    #[test]
    fn three_angle_lines_count_as_well() {
        let g = ConstraintGraph::new(
            vec![Entity::line("L1"), Entity::line("L2"), Entity::line("L3")],
            vec![
                Constraint::angle("L1", "L2", 1.0),
                Constraint::angle("L2", "L3", 1.2),
                Constraint::angle("L3", "L1", PI - 2.2),
            ],
        )
        .unwrap();
        let (c, p) = both(&g);
        assert_eq!(c, Diagnosis::WellConstrained);
        assert_eq!(p, Diagnosis::WellConstrained);
    }

    #[test]
    fn duplicate_edge_witness_is_the_pair() {
        let g = points(
            &["A", "B", "C"],
            &[("A", "B"), ("B", "C"), ("C", "A"), ("A", "B")],
        );
        let pair: Vec<String> = vec!["A".into(), "B".into()];
        let (c, p) = both(&g);
        assert_eq!(
            c,
            Diagnosis::OverConstrained {
                witness: pair.clone()
            }
        );
        assert_eq!(p, Diagnosis::OverConstrained { witness: pair });
    }

    #[test]
    fn single_edge_is_well() {
        let g = points(&["A", "B"], &[("A", "B")]);
        assert_eq!(diagnose_pebble(&g).unwrap(), Diagnosis::WellConstrained);
        assert_eq!(diagnose_counting(&g).unwrap(), Diagnosis::WellConstrained);
    }

    #[test]
    fn pendant_k4_witness_excludes_pendant() {
        let mut edges = k4_edges();
        edges.insert(0, ("D", "E"));
        let g = points(&["A", "B", "C", "D", "E"], &edges);
        let k4: Vec<String> = ["A", "B", "C", "D"].map(String::from).to_vec();
        assert_eq!(overconstrained_witness(&g).unwrap(), Some(k4.clone()));
        assert_eq!(
            diagnose_counting(&g).unwrap(),
            Diagnosis::OverConstrained { witness: k4 }
        );
    }

    #[test]
    fn four_cycle_is_not_laman() {
        let g = points(
            &["A", "B", "C", "D"],
            &[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")],
        );
        assert!(!is_laman(&g).unwrap());
    }

    #[test]
    fn laman_rejects_non_points() {
        let g = ConstraintGraph::new(
            vec![Entity::point("A"), Entity::line("L")],
            vec![Constraint::incidence("A", "L")],
        )
        .unwrap();
        assert!(matches!(is_laman(&g), Err(GraphError::KindMismatch(_))));
    }

    #[test]
    fn too_small() {
        let g = ConstraintGraph::new(vec![Entity::point("A")], vec![]).unwrap();
        assert_eq!(diagnose_pebble(&g), Err(GraphError::TooSmall(1)));
        assert_eq!(diagnose_counting(&g), Err(GraphError::TooSmall(1)));
        assert_eq!(overconstrained_witness(&g), Err(GraphError::TooSmall(1)));
    }

    #[test]
    fn free_circles_use_three_pebbles() {
        // Two free circles tangent: 3 + 3 - 3 - 1 = 2 left over.
        let g = ConstraintGraph::new(
            vec![Entity::free_circle("K1"), Entity::free_circle("K2")],
            vec![Constraint::tangency("K1", "K2")],
        )
        .unwrap();
        let (c, p) = both(&g);
        assert_eq!(c, Diagnosis::UnderConstrained { deficit: 2 });
        assert_eq!(p, c);
    }

    #[test]
    fn diagnosis_json() {
        let s = |d: &Diagnosis| serde_json::to_string(d).unwrap();
        assert_eq!(s(&Diagnosis::WellConstrained), r#"{"diagnosis":"well"}"#);
        assert_eq!(
            s(&Diagnosis::UnderConstrained { deficit: 2 }),
            r#"{"diagnosis":"under","deficit":2}"#
        );
        assert_eq!(
            s(&Diagnosis::OverConstrained {
                witness: vec!["A".into()]
            }),
            r#"{"diagnosis":"over","witness":["A"]}"#
        );
    }
}
