//! Rough-set machinery: decision tables, attribute-value blocks,
//! indiscernibility classes, lower/upper approximations and LEM2 local
//! coverings turned into certain and possible rules.

mod approx;
mod lem2;
mod rowset;
mod rules;
mod table;

pub use approx::{boundary_region, concepts, indiscernibility_classes, lower_approx, upper_approx, Concept};
pub use lem2::{lem2_local_covering, LocalCovering};
pub use rowset::RowSet;
pub use rules::{induce_rules, Certainty, Rule};
pub use table::{compute_blocks, AVPair, Block, DecisionTable};

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoughSetError {
    #[error("row {row} has {actual} attribute values, expected {expected}")]
    RowArity { row: usize, expected: usize, actual: usize },
    #[error("decision column has {actual} entries for {expected} rows")]
    DecisionLength { expected: usize, actual: usize },
    #[error("a decision table needs at least one attribute")]
    NoAttributes,
    #[error("attribute subset is empty")]
    EmptyAttributeSubset,
    #[error("attribute index {0} is out of range")]
    UnknownAttribute(usize),
    #[error("attribute {0:?} is not in the table")]
    UnknownAttributeName(String),
    #[error("empty target")]
    EmptyTarget,
    #[error("uncoverable target: rows {rows:?} are indiscernible from rows outside it")]
    UncoverableTarget { rows: alloc::vec::Vec<usize> },
}
