//! Bottom-up decomposition into rigid clusters.
//!
//! Every constraint starts as its own seed cluster (two entities, one
//! equation). Clusters are then merged to a fixpoint by two rules:
//!
//! * **R2**: two clusters sharing two or more entities become one.
//! * **R1**: three clusters that pairwise share exactly one entity, the three
//!   shared entities being distinct, become one (a triangle of clusters).
//!
//! Only rigid clusters take part in a merge, i.e. clusters whose owned
//! constraints account for all of their internal freedom
//! (`Σ dof − 3 − m ≤ 0`). A seed touching a free-radius circle is not rigid
//! and therefore stays a seed.
//!
//! Candidates are scanned with R2 before R1, each in lexicographic order of
//! their sorted cluster ids, so the result is deterministic.

mod plan;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ConstraintGraph, GraphError};
use crate::rigidity::Diagnosis;

pub use plan::{extract_plan, Plan, Step, VirtualDistance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompError {
    #[error("graph is not fully reducible ({0:?})")]
    NotReducible(ReducibilityClass),
    #[error("graph is not well constrained ({0:?})")]
    NotWellConstrained(Diagnosis),
    #[error("unsupported construction step: {0}")]
    UnsupportedStep(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    Seed {
        constraint: usize,
    },
    /// Inputs in ascending id order; `shared` holds the entities shared by
    /// inputs (0, 1), (0, 2) and (1, 2).
    MergeR1 {
        clusters: [usize; 3],
        shared: [String; 3],
    },
    MergeR2 {
        clusters: [usize; 2],
        shared: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub id: usize,
    pub entities: BTreeSet<String>,
    pub constraints: BTreeSet<usize>,
    pub provenance: Provenance,
}

impl Cluster {
    pub fn is_seed(&self) -> bool {
        matches!(self.provenance, Provenance::Seed { .. })
    }

    /// `Σ dof − 3 − m` over the cluster's entities and owned constraints.
    pub fn deficiency(&self, g: &ConstraintGraph) -> i64 {
        let dof: i64 = self
            .entities
            .iter()
            .map(|id| g.entity(id).map_or(0, |e| e.dof() as i64))
            .sum();
        dof - 3 - self.constraints.len() as i64
    }

    pub fn is_rigid(&self, g: &ConstraintGraph) -> bool {
        self.deficiency(g) <= 0
    }

    fn shared_with<'a>(&'a self, other: &'a Cluster) -> impl Iterator<Item = &'a String> + 'a {
        self.entities.intersection(&other.entities)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeRule {
    R1,
    R2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeRecord {
    pub rule: MergeRule,
    pub inputs: Vec<usize>,
    pub shared: Vec<String>,
    pub result: Cluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ReducibilityClass {
    FullyReducible,
    PartiallyReducible { nontrivial_cluster_count: usize },
    Irreducible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub final_clusters: Vec<Cluster>,
    pub merge_log: Vec<MergeRecord>,
    pub class: ReducibilityClass,
}

impl DecompositionResult {
    /// Every cluster ever formed, keyed by id: seeds plus merge results.
    pub fn all_clusters(&self, g: &ConstraintGraph) -> BTreeMap<usize, Cluster> {
        let mut out: BTreeMap<usize, Cluster> =
            seed_clusters(g).into_iter().map(|c| (c.id, c)).collect();
        for rec in &self.merge_log {
            out.insert(rec.result.id, rec.result.clone());
        }
        out
    }

    /// Re-run the merge log from the seeds and return the surviving clusters.
    pub fn replay(&self, g: &ConstraintGraph) -> Vec<Cluster> {
        let mut live: BTreeMap<usize, Cluster> =
            seed_clusters(g).into_iter().map(|c| (c.id, c)).collect();
        for rec in &self.merge_log {
            for id in &rec.inputs {
                live.remove(id);
            }
            live.insert(rec.result.id, rec.result.clone());
        }
        live.into_values().collect()
    }
}

/// One seed cluster per constraint; seed ids equal constraint indices.
pub fn seed_clusters(g: &ConstraintGraph) -> Vec<Cluster> {
    g.constraints()
        .iter()
        .enumerate()
        .map(|(i, c)| Cluster {
            id: i,
            entities: [c.between.0.clone(), c.between.1.clone()]
                .into_iter()
                .collect(),
            constraints: [i].into_iter().collect(),
            provenance: Provenance::Seed { constraint: i },
        })
        .collect()
}

/// Apply the first applicable merge rule. `clusters` must be sorted by id;
/// the merged cluster gets `next_id`.
pub fn merge_step(
    g: &ConstraintGraph,
    clusters: &[Cluster],
    next_id: usize,
) -> Option<(MergeRecord, Vec<Cluster>)> {
    let rigid: Vec<bool> = clusters.iter().map(|c| c.is_rigid(g)).collect();
    let k = clusters.len();
    let mut shared = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let s = clusters[i].shared_with(&clusters[j]).count();
            shared[i][j] = s;
            shared[j][i] = s;
        }
    }

    for i in 0..k {
        for j in i + 1..k {
            if rigid[i] && rigid[j] && shared[i][j] >= 2 {
                let common: Vec<String> = clusters[i].shared_with(&clusters[j]).cloned().collect();
                let provenance = Provenance::MergeR2 {
                    clusters: [clusters[i].id, clusters[j].id],
                    shared: common.clone(),
                };
                return Some(merge(
                    clusters,
                    &[i, j],
                    common,
                    MergeRule::R2,
                    provenance,
                    next_id,
                ));
            }
        }
    }

    for i in 0..k {
        if !rigid[i] {
            continue;
        }
        for j in i + 1..k {
            if !rigid[j] || shared[i][j] != 1 {
                continue;
            }
            for l in j + 1..k {
                if !rigid[l] || shared[i][l] != 1 || shared[j][l] != 1 {
                    continue;
                }
                let one = |a: usize, b: usize| {
                    clusters[a]
                        .shared_with(&clusters[b])
                        .next()
                        .cloned()
                        .expect("one shared")
                };
                let trio = [one(i, j), one(i, l), one(j, l)];
                if trio[0] == trio[1] || trio[0] == trio[2] || trio[1] == trio[2] {
                    continue;
                }
                let provenance = Provenance::MergeR1 {
                    clusters: [clusters[i].id, clusters[j].id, clusters[l].id],
                    shared: trio.clone(),
                };
                return Some(merge(
                    clusters,
                    &[i, j, l],
                    trio.to_vec(),
                    MergeRule::R1,
                    provenance,
                    next_id,
                ));
            }
        }
    }
    None
}

fn merge(
    clusters: &[Cluster],
    picks: &[usize],
    shared: Vec<String>,
    rule: MergeRule,
    provenance: Provenance,
    id: usize,
) -> (MergeRecord, Vec<Cluster>) {
    let mut entities = BTreeSet::new();
    let mut constraints = BTreeSet::new();
    for &p in picks {
        entities.extend(clusters[p].entities.iter().cloned());
        constraints.extend(clusters[p].constraints.iter().copied());
    }
    let result = Cluster {
        id,
        entities,
        constraints,
        provenance,
    };
    let mut rest: Vec<Cluster> = clusters
        .iter()
        .enumerate()
        .filter(|(i, _)| !picks.contains(i))
        .map(|(_, c)| c.clone())
        .collect();
    rest.push(result.clone());
    let record = MergeRecord {
        rule,
        inputs: picks.iter().map(|&p| clusters[p].id).collect(),
        shared,
        result,
    };
    (record, rest)
}

/// Merge to a fixpoint and classify the outcome.
pub fn decompose(g: &ConstraintGraph) -> Result<DecompositionResult, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::TooSmall(g.n()));
    }
    let mut clusters = seed_clusters(g);
    let seed_count = clusters.len();
    let mut next_id = seed_count;
    let mut merge_log = Vec::new();
    while let Some((record, rest)) = merge_step(g, &clusters, next_id) {
        clusters = rest;
        merge_log.push(record);
        next_id += 1;
    }

    let class = if clusters.len() == 1 && clusters[0].entities.len() == g.n() {
        ReducibilityClass::FullyReducible
    } else if merge_log.is_empty() && seed_count > 1 {
        ReducibilityClass::Irreducible
    } else {
        ReducibilityClass::PartiallyReducible {
            nontrivial_cluster_count: clusters.iter().filter(|c| !c.is_seed()).count(),
        }
    };
    Ok(DecompositionResult {
        final_clusters: clusters,
        merge_log,
        class,
    })
}

pub fn classify(g: &ConstraintGraph) -> Result<ReducibilityClass, GraphError> {
    Ok(decompose(g)?.class)
}
