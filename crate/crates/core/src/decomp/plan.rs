//! Turning a merge tree into a construction plan.
//!
//! Each cluster of the tree is built in its own local frame. A frame id is
//! the id of the cluster that first created it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{decompose, Cluster, DecompError, Provenance, ReducibilityClass};
use crate::graph::ConstraintGraph;
use crate::rigidity::diagnose_pebble;

/// A distance between two points measured in an already-built frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualDistance {
    pub a: String,
    pub b: String,
    pub frame: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// Canonical placement of a single constraint's two entities.
    Base { frame: usize, constraint: usize },
    /// Place `target` in `frame` on the intersection of the loci imposed by
    /// two constraints against entities already in `frame`.
    PlaceByTwoLoci {
        frame: usize,
        target: String,
        constraints: [usize; 2],
    },
    /// Open `frame` with three points whose pairwise distances are read off
    /// the source frames.
    TriangleMerge {
        frame: usize,
        points: [String; 3],
        distances: [VirtualDistance; 3],
    },
    /// Move frame `from` rigidly onto `into` by matching the shared pair.
    AlignCluster {
        into: usize,
        from: usize,
        pair: (String, String),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub steps: Vec<Step>,
    pub root_frame: usize,
    /// Constraints not used by any step; checked only by verification.
    pub residual: Vec<usize>,
}

impl Plan {
    /// Number of frames opened by the plan.
    pub fn frame_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Base { .. } | Step::TriangleMerge { .. }))
            .count()
    }
}

/// Build a plan for a well-constrained, fully reducible graph.
pub fn extract_plan(g: &ConstraintGraph) -> Result<Plan, DecompError> {
    let diagnosis = diagnose_pebble(g)?;
    if !diagnosis.is_well() {
        return Err(DecompError::NotWellConstrained(diagnosis));
    }
    let result = decompose(g)?;
    if result.class != ReducibilityClass::FullyReducible {
        return Err(DecompError::NotReducible(result.class));
    }
    let clusters = result.all_clusters(g);
    let root = result.final_clusters[0].id;
    let mut builder = Builder {
        g,
        clusters: &clusters,
        steps: Vec::new(),
    };
    let root_frame = builder.build(root)?;

    let mut used = BTreeSet::new();
    for s in &builder.steps {
        match s {
            Step::Base { constraint, .. } => {
                used.insert(*constraint);
            }
            Step::PlaceByTwoLoci { constraints, .. } => used.extend(constraints.iter().copied()),
            _ => {}
        }
    }
    let residual = (0..g.m()).filter(|i| !used.contains(i)).collect();
    Ok(Plan {
        steps: builder.steps,
        root_frame,
        residual,
    })
}

struct Builder<'a> {
    g: &'a ConstraintGraph,
    clusters: &'a BTreeMap<usize, Cluster>,
    steps: Vec<Step>,
}

impl Builder<'_> {
    /// Emit the steps building cluster `id`; returns the frame holding it.
    fn build(&mut self, id: usize) -> Result<usize, DecompError> {
        let cluster = &self.clusters[&id];
        match &cluster.provenance {
            Provenance::Seed { constraint } => {
                self.steps.push(Step::Base {
                    frame: id,
                    constraint: *constraint,
                });
                Ok(id)
            }
            Provenance::MergeR2 {
                clusters: [a, b],
                shared,
            } => {
                let pair = self.align_pair(shared)?;
                let into = self.build(*a)?;
                let from = self.build(*b)?;
                self.steps.push(Step::AlignCluster { into, from, pair });
                Ok(into)
            }
            Provenance::MergeR1 { clusters, shared } => self.build_r1(id, *clusters, shared),
        }
    }

    fn build_r1(
        &mut self,
        id: usize,
        ks: [usize; 3],
        shared: &[String; 3],
    ) -> Result<usize, DecompError> {
        // Shared entity between ks[i] and ks[j], indexed like `shared`.
        let between = |i: usize, j: usize| match (i.min(j), i.max(j)) {
            (0, 1) => &shared[0],
            (0, 2) => &shared[1],
            _ => &shared[2],
        };
        for host in 0..3 {
            let (j, l) = match host {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let seed_of = |k: usize| match self.clusters[&ks[k]].provenance {
                Provenance::Seed { constraint } => Some(constraint),
                _ => None,
            };
            if let (Some(cj), Some(cl)) = (seed_of(j), seed_of(l)) {
                let frame = self.build(ks[host])?;
                let mut constraints = [cj, cl];
                constraints.sort_unstable();
                self.steps.push(Step::PlaceByTwoLoci {
                    frame,
                    target: between(j, l).clone(),
                    constraints,
                });
                return Ok(frame);
            }
        }

        for s in shared {
            if !self.is_point(s) {
                return Err(DecompError::UnsupportedStep(format!(
                    "three-cluster merge through non-point entity '{s}'"
                )));
            }
        }
        let frames = [self.build(ks[0])?, self.build(ks[1])?, self.build(ks[2])?];
        let [p0, p1, p2] = shared.clone();
        let vd = |a: &String, b: &String, frame: usize| VirtualDistance {
            a: a.clone(),
            b: b.clone(),
            frame,
        };
        self.steps.push(Step::TriangleMerge {
            frame: id,
            points: shared.clone(),
            distances: [
                vd(&p0, &p1, frames[0]),
                vd(&p0, &p2, frames[1]),
                vd(&p1, &p2, frames[2]),
            ],
        });
        for (frame, pair) in frames.into_iter().zip([(&p0, &p1), (&p0, &p2), (&p1, &p2)]) {
            self.steps.push(Step::AlignCluster {
                into: id,
                from: frame,
                pair: (pair.0.clone(), pair.1.clone()),
            });
        }
        Ok(id)
    }

    fn is_point(&self, id: &str) -> bool {
        self.g.entity(id).is_some_and(|e| e.kind.is_point())
    }

    fn is_line(&self, id: &str) -> bool {
        self.g.entity(id).is_some_and(|e| e.kind.is_line())
    }

    /// Two shared entities that pin a rigid motion: two points, else a point
    /// and a line.
    fn align_pair(&self, shared: &[String]) -> Result<(String, String), DecompError> {
        let points: Vec<&String> = shared.iter().filter(|s| self.is_point(s)).collect();
        if points.len() >= 2 {
            return Ok((points[0].clone(), points[1].clone()));
        }
        let line = shared.iter().find(|s| self.is_line(s));
        match (points.first(), line) {
            (Some(p), Some(l)) => Ok(((*p).clone(), l.clone())),
            _ => Err(DecompError::UnsupportedStep(format!(
                "cannot align clusters sharing {shared:?}"
            ))),
        }
    }
}
