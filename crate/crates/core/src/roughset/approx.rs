use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{DecisionTable, RoughSetError, RowSet};

/// Rows sharing one decision value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub decision_value: u32,
    pub members: RowSet,
}

/// Concepts of the table, ascending by decision code. They partition `U`.
pub fn concepts(table: &DecisionTable) -> Vec<Concept> {
    table
        .decision_values()
        .into_iter()
        .map(|decision_value| Concept {
            decision_value,
            members: table.concept_rows(decision_value),
        })
        .collect()
}

/// Equivalence classes of rows agreeing on every attribute in `subset`,
/// ordered by their smallest row.
pub fn indiscernibility_classes(
    table: &DecisionTable,
    subset: &[usize],
) -> Result<Vec<RowSet>, RoughSetError> {
    if subset.is_empty() {
        return Err(RoughSetError::EmptyAttributeSubset);
    }
    if let Some(&bad) = subset.iter().find(|&&a| a >= table.n_attributes()) {
        return Err(RoughSetError::UnknownAttribute(bad));
    }
    let n = table.n_rows();
    let mut class_of: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut classes: Vec<RowSet> = Vec::new();
    for row in 0..n {
        let key: Vec<u32> = subset.iter().map(|&a| table.value(row, a)).collect();
        let idx = *class_of.entry(key).or_insert_with(|| {
            classes.push(RowSet::empty(n));
            classes.len() - 1
        });
        classes[idx].insert(row);
    }
    Ok(classes)
}

/// Union of the classes contained in `x`.
pub fn lower_approx(x: &RowSet, partition: &[RowSet]) -> RowSet {
    let mut out = RowSet::empty(x.universe());
    for class in partition.iter().filter(|c| c.is_subset(x)) {
        out.union_with(class);
    }
    out
}

/// Union of the classes meeting `x`.
pub fn upper_approx(x: &RowSet, partition: &[RowSet]) -> RowSet {
    let mut out = RowSet::empty(x.universe());
    for class in partition.iter().filter(|c| c.intersects(x)) {
        out.union_with(class);
    }
    out
}

/// Upper minus lower approximation.
pub fn boundary_region(x: &RowSet, partition: &[RowSet]) -> RowSet {
    upper_approx(x, partition).difference(&lower_approx(x, partition))
}
