//! Exhaustive subset-counting diagnosis. Exponential in `n`; used as the
//! reference the pebble game is checked against.

use crate::graph::{ConstraintGraph, GraphError};

use super::Diagnosis;

/// Largest graph the exhaustive oracle accepts.
pub const COUNTING_LIMIT: usize = 30;

/// Diagnose `g` by checking every induced subgraph on two or more entities.
///
/// An over-constrained verdict carries a violating subset of minimum size;
/// among those, the one whose sorted id list is lexicographically smallest.
pub fn diagnose_counting(g: &ConstraintGraph) -> Result<Diagnosis, GraphError> {
    let n = g.n();
    if n < 2 {
        return Err(GraphError::TooSmall(n));
    }
    if n > COUNTING_LIMIT {
        return Err(GraphError::BadValue(format!(
            "counting oracle is limited to {COUNTING_LIMIT} entities, graph has {n}"
        )));
    }

    // Enumerate over entities sorted by id so combination order is id order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.entities()[a].id.cmp(&g.entities()[b].id));
    let mut pos = vec![0usize; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let dofs: Vec<i64> = order
        .iter()
        .map(|&i| g.entities()[i].dof() as i64)
        .collect();
    let edge_masks: Vec<u64> = g
        .edge_indices()
        .into_iter()
        .map(|(a, b)| (1u64 << pos[a]) | (1u64 << pos[b]))
        .collect();

    for size in 2..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u64, |acc, &p| acc | (1 << p));
            let edges = edge_masks.iter().filter(|&&e| e & mask == e).count() as i64;
            let budget: i64 = combo.iter().map(|&p| dofs[p]).sum::<i64>() - 3;
            if edges > budget {
                let mut witness: Vec<String> = combo
                    .iter()
                    .map(|&p| g.entities()[order[p]].id.clone())
                    .collect();
                witness.sort();
                return Ok(Diagnosis::OverConstrained { witness });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }

    let deficiency = g.deficiency()?;
    Ok(if deficiency > 0 {
        Diagnosis::UnderConstrained {
            deficit: deficiency as u32,
        }
    } else {
        Diagnosis::WellConstrained
    })
}

/// Advance `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
