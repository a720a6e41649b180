use alloc::vec::Vec;

use super::{compute_blocks, AVPair, Block, DecisionTable, RoughSetError, RowSet};

/// A family of minimal complexes whose blocks union exactly to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCovering {
    /// Each complex lists its pairs in the order LEM2 selected them.
    pub complexes: Vec<Vec<AVPair>>,
    pub target: RowSet,
}

impl LocalCovering {
    /// `∪ [T]` over the complexes.
    pub fn covered(&self, table: &DecisionTable) -> RowSet {
        let mut out = RowSet::empty(table.n_rows());
        for complex in &self.complexes {
            out.union_with(&table.complex_block(complex));
        }
        out
    }
}

fn block_of(blocks: &[Block], members: &[usize], universe: usize) -> RowSet {
    let mut out = RowSet::full(universe);
    for &b in members {
        out.intersect_with(&blocks[b].members);
    }
    out
}

/// LEM2 local covering of `target`.
///
/// Complexes are grown greedily from the pairs relevant to the uncovered goal:
/// most goal rows first, then the smaller block, then attribute-then-value
/// order. Each complex is pruned to a minimal one (dropping pairs in the order
/// they were added) and, once the goal is empty, redundant complexes are
/// removed in the order they were found.
///
/// `target` should be a concept or one of its approximations; anything else
/// may be uncoverable.
pub fn lem2_local_covering(
    target: &RowSet,
    table: &DecisionTable,
) -> Result<LocalCovering, RoughSetError> {
    if target.is_empty() {
        return Err(RoughSetError::EmptyTarget);
    }
    let n = table.n_rows();
    let blocks = compute_blocks(table);
    let mut found: Vec<(Vec<usize>, RowSet)> = Vec::new();
    let mut covered = RowSet::empty(n);
    let mut goal = target.clone();

    while !goal.is_empty() {
        let mut complex: Vec<usize> = Vec::new();
        let mut complex_block = RowSet::full(n);
        let mut g = goal.clone();
        while complex.is_empty() || !complex_block.is_subset(target) {
            let mut best: Option<(usize, usize, usize)> = None;
            for (index, block) in blocks.iter().enumerate() {
                if complex.contains(&index) {
                    continue;
                }
                let hits = block.members.intersection_len(&g);
                if hits == 0 {
                    continue;
                }
                let size = block.members.len();
                let better = match best {
                    None => true,
                    Some((_, bh, bs)) => hits > bh || (hits == bh && size < bs),
                };
                if better {
                    best = Some((index, hits, size));
                }
            }
            let Some((index, _, _)) = best else {
                return Err(RoughSetError::UncoverableTarget { rows: g.to_vec() });
            };
            complex.push(index);
            complex_block.intersect_with(&blocks[index].members);
            g.intersect_with(&blocks[index].members);
        }

        for pair in complex.clone() {
            if complex.len() == 1 {
                break;
            }
            let without: Vec<usize> = complex.iter().copied().filter(|&b| b != pair).collect();
            let wider = block_of(&blocks, &without, n);
            if wider.is_subset(target) {
                complex = without;
                complex_block = wider;
            }
        }

        covered.union_with(&complex_block);
        found.push((complex, complex_block));
        goal = target.difference(&covered);
    }

    let mut keep = alloc::vec![true; found.len()];
    for i in 0..found.len() {
        let mut others = RowSet::empty(n);
        for (j, (_, block)) in found.iter().enumerate() {
            if j != i && keep[j] {
                others.union_with(block);
            }
        }
        if target.is_subset(&others) {
            keep[i] = false;
        }
    }

    let complexes = found
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((members, _), _)| members.into_iter().map(|b| blocks[b].pair).collect())
        .collect();
    Ok(LocalCovering {
        complexes,
        target: target.clone(),
    })
}
