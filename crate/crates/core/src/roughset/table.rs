use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{RoughSetError, RowSet};

/// Examples described by discrete attribute codes plus one decision code.
///
/// Rows are the universe `U`, numbered densely from 0. Identical attribute
/// vectors with different decisions are allowed; they are what makes a table
/// inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    attributes: Vec<String>,
    decision_name: String,
    rows: Vec<Vec<u32>>,
    decisions: Vec<u32>,
    value_labels: Vec<BTreeMap<u32, String>>,
    decision_labels: BTreeMap<u32, String>,
}

impl DecisionTable {
    /// Builds a table from raw codes; every code is labelled by its number.
    pub fn new(
        attributes: Vec<String>,
        rows: Vec<Vec<u32>>,
        decisions: Vec<u32>,
    ) -> Result<Self, RoughSetError> {
        if attributes.is_empty() {
            return Err(RoughSetError::NoAttributes);
        }
        if decisions.len() != rows.len() {
            return Err(RoughSetError::DecisionLength {
                expected: rows.len(),
                actual: decisions.len(),
            });
        }
        for (row, values) in rows.iter().enumerate() {
            if values.len() != attributes.len() {
                return Err(RoughSetError::RowArity {
                    row,
                    expected: attributes.len(),
                    actual: values.len(),
                });
            }
        }
        let mut value_labels = alloc::vec![BTreeMap::new(); attributes.len()];
        for values in &rows {
            for (labels, &v) in value_labels.iter_mut().zip(values) {
                labels.entry(v).or_insert_with(|| v.to_string());
            }
        }
        let decision_labels = decisions.iter().map(|&d| (d, d.to_string())).collect();
        Ok(DecisionTable {
            attributes,
            decision_name: "class".to_string(),
            rows,
            decisions,
            value_labels,
            decision_labels,
        })
    }

    /// Builds a table from string tokens. The last header column is the
    /// decision. Tokens become codes in order of first appearance per column.
    pub fn from_tokens<S: AsRef<str>>(
        header: &[S],
        rows: &[Vec<S>],
    ) -> Result<Self, RoughSetError> {
        if header.len() < 2 {
            return Err(RoughSetError::NoAttributes);
        }
        let n_attr = header.len() - 1;
        let mut codebooks: Vec<BTreeMap<String, u32>> = alloc::vec![BTreeMap::new(); header.len()];
        let mut coded_rows = Vec::with_capacity(rows.len());
        let mut decisions = Vec::with_capacity(rows.len());
        for (row, tokens) in rows.iter().enumerate() {
            if tokens.len() != header.len() {
                return Err(RoughSetError::RowArity {
                    row,
                    expected: n_attr,
                    actual: tokens.len().saturating_sub(1),
                });
            }
            let mut codes: Vec<u32> = tokens
                .iter()
                .zip(codebooks.iter_mut())
                .map(|(tok, book)| {
                    let next = book.len() as u32;
                    *book.entry(tok.as_ref().to_string()).or_insert(next)
                })
                .collect();
            decisions.push(codes.pop().expect("header has a decision column"));
            coded_rows.push(codes);
        }
        let invert = |book: &BTreeMap<String, u32>| -> BTreeMap<u32, String> {
            book.iter().map(|(tok, &code)| (code, tok.clone())).collect()
        };
        let decision_labels = invert(&codebooks[n_attr]);
        let value_labels = codebooks[..n_attr].iter().map(invert).collect();
        Ok(DecisionTable {
            attributes: header[..n_attr].iter().map(|h| h.as_ref().to_string()).collect(),
            decision_name: header[n_attr].as_ref().to_string(),
            rows: coded_rows,
            decisions,
            value_labels,
            decision_labels,
        })
    }

    /// Replaces decision labels; codes without a new label keep their old one.
    pub fn with_decision_labels(mut self, labels: impl IntoIterator<Item = (u32, String)>) -> Self {
        self.decision_labels.extend(labels);
        self
    }

    pub fn with_decision_name(mut self, name: impl Into<String>) -> Self {
        self.decision_name = name.into();
        self
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize, RoughSetError> {
        self.attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| RoughSetError::UnknownAttributeName(name.to_string()))
    }

    pub fn decision_name(&self) -> &str {
        &self.decision_name
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.rows[row]
    }

    pub fn value(&self, row: usize, attribute: usize) -> u32 {
        self.rows[row][attribute]
    }

    pub fn decision(&self, row: usize) -> u32 {
        self.decisions[row]
    }

    pub fn decisions(&self) -> &[u32] {
        &self.decisions
    }

    /// Distinct decision codes, ascending.
    pub fn decision_values(&self) -> Vec<u32> {
        let mut v = self.decisions.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Distinct codes of one attribute, ascending.
    pub fn values_of(&self, attribute: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.iter().map(|r| r[attribute]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn value_label(&self, attribute: usize, value: u32) -> String {
        self.value_labels[attribute]
            .get(&value)
            .cloned()
            .unwrap_or_else(|| value.to_string())
    }

    pub fn decision_label(&self, value: u32) -> String {
        self.decision_labels
            .get(&value)
            .cloned()
            .unwrap_or_else(|| value.to_string())
    }

    pub fn describe_pair(&self, pair: AVPair) -> String {
        format!(
            "{}={}",
            self.attributes[pair.attribute],
            self.value_label(pair.attribute, pair.value)
        )
    }

    pub fn universe(&self) -> RowSet {
        RowSet::full(self.n_rows())
    }

    /// Rows where `pair.attribute` has `pair.value`.
    pub fn block(&self, pair: AVPair) -> RowSet {
        RowSet::from_rows(
            self.n_rows(),
            (0..self.n_rows()).filter(|&r| self.rows[r][pair.attribute] == pair.value),
        )
    }

    /// `[T]`: rows satisfying every pair of `complex`. The empty complex is `U`.
    pub fn complex_block(&self, complex: &[AVPair]) -> RowSet {
        RowSet::from_rows(
            self.n_rows(),
            (0..self.n_rows()).filter(|&r| self.matches(r, complex)),
        )
    }

    pub fn matches(&self, row: usize, complex: &[AVPair]) -> bool {
        complex
            .iter()
            .all(|p| self.rows[row][p.attribute] == p.value)
    }

    /// Rows with decision `value`.
    pub fn concept_rows(&self, value: u32) -> RowSet {
        RowSet::from_rows(
            self.n_rows(),
            (0..self.n_rows()).filter(|&r| self.decisions[r] == value),
        )
    }

    /// True when no two rows share an attribute vector but differ in decision.
    pub fn is_consistent(&self) -> bool {
        let mut seen: BTreeMap<&[u32], u32> = BTreeMap::new();
        for (row, &d) in self.rows.iter().zip(&self.decisions) {
            if *seen.entry(row.as_slice()).or_insert(d) != d {
                return false;
            }
        }
        true
    }
}

/// An attribute-value pair `(a, v)`, ordered by attribute column then value code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AVPair {
    pub attribute: usize,
    pub value: u32,
}

impl AVPair {
    pub const fn new(attribute: usize, value: u32) -> Self {
        AVPair { attribute, value }
    }
}

/// `[t]`: the rows carrying one attribute-value pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub pair: AVPair,
    pub members: RowSet,
}

/// One block per attribute-value pair occurring in the table, in
/// attribute-then-value order.
pub fn compute_blocks(table: &DecisionTable) -> Vec<Block> {
    let n = table.n_rows();
    let mut blocks = Vec::new();
    for attribute in 0..table.n_attributes() {
        let mut by_value: BTreeMap<u32, RowSet> = BTreeMap::new();
        for row in 0..n {
            by_value
                .entry(table.value(row, attribute))
                .or_insert_with(|| RowSet::empty(n))
                .insert(row);
        }
        blocks.extend(by_value.into_iter().map(|(value, members)| Block {
            pair: AVPair { attribute, value },
            members,
        }));
    }
    blocks
}
