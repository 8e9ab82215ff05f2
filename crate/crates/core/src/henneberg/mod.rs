//! Henneberg operations on point/distance graphs.
//!
//! Starting from a single edge, the degree-2 attachment ([`extend_h1`]) and the
//! degree-3 attachment with edge split ([`extend_h2`]) generate exactly the
//! minimally rigid graphs. [`reduction_sequence`] runs the process backwards.
//!
//! Structural edges carry the placeholder distance `1.0`.

mod fixtures;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Constraint, ConstraintGraph, ConstraintKind, Entity, GraphError};
use crate::rigidity::is_laman;

pub use fixtures::{fixture, FIXTURE_NAMES};

/// Placeholder value given to edges created by Henneberg steps.
pub const PLACEHOLDER_DISTANCE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum HennebergStep {
    H1 {
        new: String,
        attach: (String, String),
    },
    H2 {
        new: String,
        split_edge: (String, String),
        third: String,
    },
}

impl HennebergStep {
    pub fn apply(&self, g: &ConstraintGraph) -> Result<ConstraintGraph, GraphError> {
        match self {
            HennebergStep::H1 {
                new,
                attach: (u, w),
            } => extend_h1(g, new, u, w),
            HennebergStep::H2 {
                new,
                split_edge: (u, w),
                third,
            } => extend_h2(g, new, (u, w), third),
        }
    }
}

/// A base edge plus the steps, in construction order, that rebuild a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HennebergSequence {
    pub base: (String, String),
    pub steps: Vec<HennebergStep>,
}

impl HennebergSequence {
    pub fn replay(&self) -> Result<ConstraintGraph, GraphError> {
        let (a, b) = &self.base;
        let mut g = ConstraintGraph::new(
            vec![Entity::point(a.as_str()), Entity::point(b.as_str())],
            vec![Constraint::distance(
                a.as_str(),
                b.as_str(),
                PLACEHOLDER_DISTANCE,
            )],
        )?;
        for step in &self.steps {
            g = step.apply(&g)?;
        }
        Ok(g)
    }
}

fn require_point_graph(g: &ConstraintGraph) -> Result<(), GraphError> {
    if g.is_point_distance() {
        Ok(())
    } else {
        Err(GraphError::KindMismatch(
            "Henneberg operations need a graph of points and distances".into(),
        ))
    }
}

fn require_point(g: &ConstraintGraph, id: &str) -> Result<(), GraphError> {
    if g.contains(id) {
        Ok(())
    } else {
        Err(GraphError::UnknownEndpoint(id.to_string()))
    }
}

/// Add `new_id` joined to `u` and `w`.
pub fn extend_h1(
    g: &ConstraintGraph,
    new_id: &str,
    u: &str,
    w: &str,
) -> Result<ConstraintGraph, GraphError> {
    require_point_graph(g)?;
    if g.contains(new_id) {
        return Err(GraphError::DuplicateId(new_id.to_string()));
    }
    require_point(g, u)?;
    require_point(g, w)?;
    let mut entities = g.entities().to_vec();
    entities.push(Entity::point(new_id));
    let mut constraints = g.constraints().to_vec();
    constraints.push(Constraint::distance(new_id, u, PLACEHOLDER_DISTANCE));
    constraints.push(Constraint::distance(new_id, w, PLACEHOLDER_DISTANCE));
    ConstraintGraph::new(entities, constraints)
}

/// Remove edge `(u, w)`, add `new_id` joined to `u`, `w` and `z`.
pub fn extend_h2(
    g: &ConstraintGraph,
    new_id: &str,
    (u, w): (&str, &str),
    z: &str,
) -> Result<ConstraintGraph, GraphError> {
    require_point_graph(g)?;
    if g.contains(new_id) {
        return Err(GraphError::DuplicateId(new_id.to_string()));
    }
    for id in [u, w, z] {
        require_point(g, id)?;
    }
    if z == u || z == w {
        return Err(GraphError::BadValue(format!(
            "third vertex `{z}` must differ from the split edge"
        )));
    }
    let split = g
        .constraints()
        .iter()
        .position(|c| {
            matches!(c.kind, ConstraintKind::Distance(_)) && c.touches(u) && c.other(u) == Some(w)
        })
        .ok_or_else(|| GraphError::MissingEdge(u.to_string(), w.to_string()))?;
    let mut entities = g.entities().to_vec();
    entities.push(Entity::point(new_id));
    let mut constraints = g.constraints().to_vec();
    constraints.remove(split);
    for id in [u, w, z] {
        constraints.push(Constraint::distance(new_id, id, PLACEHOLDER_DISTANCE));
    }
    ConstraintGraph::new(entities, constraints)
}

/// A random minimally rigid graph on `n` points `v0 … v{n-1}`.
///
/// Each new vertex is attached by H2 with probability `p_h2` (when there are
/// at least three vertices) and by H1 otherwise. Deterministic in
/// `(n, seed, p_h2)`.
pub fn random_laman(n: usize, seed: u64, p_h2: f64) -> Result<ConstraintGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadValue(format!("need n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p_h2) {
        return Err(GraphError::BadValue(format!(
            "p_h2 must lie in [0, 1], got {p_h2}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    for v in 2..n {
        if v >= 3 && rng.random_bool(p_h2) {
            let (a, b) = edges.swap_remove(rng.random_range(0..edges.len()));
            let mut z = rng.random_range(0..v - 2);
            // Skip over a and b to pick uniformly among the other vertices.
            for skip in [a.min(b), a.max(b)] {
                if z >= skip {
                    z += 1;
                }
            }
            edges.extend([(v, a), (v, b), (v, z)]);
        } else {
            let a = rng.random_range(0..v);
            let mut b = rng.random_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            edges.extend([(v, a), (v, b)]);
        }
    }
    let name = |i: usize| format!("v{i}");
    ConstraintGraph::new(
        (0..n).map(|i| Entity::point(name(i))).collect(),
        edges
            .into_iter()
            .map(|(a, b)| Constraint::distance(name(a), name(b), PLACEHOLDER_DISTANCE))
            .collect(),
    )
}

/// Recover a Henneberg construction of `g`, or `None` if `g` is not Laman.
///
/// Repeatedly strips a degree-2 vertex (inverse H1) or a degree-3 vertex
/// whose removal plus one new edge between its neighbours stays Laman
/// (inverse H2). Every accepted reduction keeps the graph Laman, and every
/// Laman graph on three or more vertices admits one, so the search never has
/// to backtrack.
pub fn reduction_sequence(g: &ConstraintGraph) -> Result<Option<HennebergSequence>, GraphError> {
    require_point_graph(g)?;
    if g.n() < 2 || !is_laman(g)? {
        return Ok(None);
    }
    let mut ids: Vec<String> = g.entities().iter().map(|e| e.id.clone()).collect();
    let mut edges: Vec<(String, String)> =
        g.constraints().iter().map(|c| c.between.clone()).collect();
    let mut reversed = Vec::new();

    while ids.len() > 2 {
        let Some(step) = reduce_once(&ids, &mut edges)? else {
            return Ok(None);
        };
        let removed = match &step {
            HennebergStep::H1 { new, .. } | HennebergStep::H2 { new, .. } => new.clone(),
        };
        ids.retain(|id| *id != removed);
        reversed.push(step);
    }
    reversed.reverse();
    Ok(Some(HennebergSequence {
        base: (ids[0].clone(), ids[1].clone()),
        steps: reversed,
    }))
}

fn neighbours(edges: &[(String, String)], v: &str) -> Vec<String> {
    edges
        .iter()
        .filter_map(|(a, b)| {
            if a == v {
                Some(b.clone())
            } else if b == v {
                Some(a.clone())
            } else {
                None
            }
        })
        .collect()
}

fn laman_edges(ids: &[String], edges: &[(String, String)]) -> Result<bool, GraphError> {
    let g = ConstraintGraph::new(
        ids.iter().map(|id| Entity::point(id.as_str())).collect(),
        edges
            .iter()
            .map(|(a, b)| Constraint::distance(a.as_str(), b.as_str(), PLACEHOLDER_DISTANCE))
            .collect(),
    )?;
    is_laman(&g)
}

/// Apply one inverse Henneberg step to `edges`, returning the forward step.
fn reduce_once(
    ids: &[String],
    edges: &mut Vec<(String, String)>,
) -> Result<Option<HennebergStep>, GraphError> {
    for v in ids {
        let nb = neighbours(edges, v);
        if nb.len() == 2 && nb[0] != nb[1] {
            edges.retain(|(a, b)| a != v && b != v);
            return Ok(Some(HennebergStep::H1 {
                new: v.clone(),
                attach: (nb[0].clone(), nb[1].clone()),
            }));
        }
    }
    for v in ids {
        let nb = neighbours(edges, v);
        if nb.len() != 3 || nb[0] == nb[1] || nb[1] == nb[2] || nb[0] == nb[2] {
            continue;
        }
        let rest: Vec<String> = ids.iter().filter(|id| *id != v).cloned().collect();
        let without: Vec<(String, String)> = edges
            .iter()
            .filter(|(a, b)| a != v && b != v)
            .cloned()
            .collect();
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let (x, y) = (&nb[i], &nb[j]);
            let present = without
                .iter()
                .any(|(a, b)| (a == x && b == y) || (a == y && b == x));
            if present {
                continue;
            }
            let mut candidate = without.clone();
            candidate.push((x.clone(), y.clone()));
            if laman_edges(&rest, &candidate)? {
                *edges = candidate;
                return Ok(Some(HennebergStep::H2 {
                    new: v.clone(),
                    split_edge: (x.clone(), y.clone()),
                    third: nb[k].clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Unordered endpoint pairs of `g`, sorted; compares graphs as edge multisets.
pub fn edge_multiset(g: &ConstraintGraph) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = g
        .constraints()
        .iter()
        .map(|c| {
            let (a, b) = c.between.clone();
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    out.sort();
    out
}
