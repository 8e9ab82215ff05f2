//! Pebble game for (k, 3)-sparsity with per-vertex k ∈ {2, 3}.
//!
//! Each vertex starts with `dof(v)` pebbles. An accepted edge is oriented
//! away from the vertex whose pebble covers it. An edge `(u, v)` is accepted
//! only if four pebbles can be gathered on `u` and `v` together; otherwise the
//! vertices reachable from `{u, v}` span more edges than their count allows.

use crate::graph::{ConstraintGraph, GraphError};

use super::Diagnosis;

/// Required pebbles on an edge's endpoints: ℓ + 1 with ℓ = 3.
const EDGE_PEBBLES: u32 = 4;

pub(crate) struct PebbleGame {
    pebbles: Vec<u32>,
    /// Out-neighbours in the directed pebble graph; multi-edges repeat entries.
    out: Vec<Vec<usize>>,
}

pub(crate) enum Insert {
    Accepted,
    /// The edge is dependent; holds the vertices reachable from its endpoints.
    Rejected(Vec<usize>),
}

impl PebbleGame {
    pub(crate) fn new(dofs: &[u32]) -> Self {
        PebbleGame {
            pebbles: dofs.to_vec(),
            out: vec![Vec::new(); dofs.len()],
        }
    }

    pub(crate) fn free_pebbles(&self) -> u32 {
        self.pebbles.iter().sum()
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize) -> Insert {
        while self.pebbles[u] + self.pebbles[v] < EDGE_PEBBLES {
            if !self.fetch_pebble(u, v) && !self.fetch_pebble(v, u) {
                return Insert::Rejected(self.reach(&[u, v]));
            }
        }
        let tail = if self.pebbles[u] > 0 { u } else { v };
        let head = if tail == u { v } else { u };
        self.pebbles[tail] -= 1;
        self.out[tail].push(head);
        Insert::Accepted
    }

    /// Move one free pebble onto `target` along a directed path that avoids
    /// `keep`, reversing the path. Returns false if none is reachable.
    fn fetch_pebble(&mut self, target: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[target] = true;
        seen[keep] = true;
        let mut stack = vec![target];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(source) = found else {
            return false;
        };
        self.pebbles[source] -= 1;
        let mut y = source;
        while y != target {
            let x = parent[y];
            let slot = self.out[x]
                .iter()
                .position(|&h| h == y)
                .expect("path edge present");
            self.out[x].swap_remove(slot);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[target] += 1;
        true
    }

    fn reach(&self, roots: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack: Vec<usize> = roots.to_vec();
        for &r in roots {
            seen[r] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }
}

/// Diagnose `g` with the pebble game. Runs in O(n·m).
pub fn diagnose_pebble(g: &ConstraintGraph) -> Result<Diagnosis, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::TooSmall(g.n()));
    }
    let mut game = PebbleGame::new(&g.dofs());
    for (u, v) in g.edge_indices() {
        if let Insert::Rejected(reach) = game.insert(u, v) {
            let mut witness: Vec<String> = reach
                .into_iter()
                .map(|i| g.entities()[i].id.clone())
                .collect();
            witness.sort();
            return Ok(Diagnosis::OverConstrained { witness });
        }
    }
    Ok(match game.free_pebbles() {
        3 => Diagnosis::WellConstrained,
        free => Diagnosis::UnderConstrained { deficit: free - 3 },
    })
}
