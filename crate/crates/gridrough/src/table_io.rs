//! Delimited decision tables: a header row naming the attributes with the
//! decision last, then one example per line. Commas, tabs or runs of spaces
//! separate fields (chosen from the header line); `#` starts a comment line.

use std::fmt::Write as _;

use gridrough_core::roughset::concepts;
use gridrough_core::{induce_rules, indiscernibility_classes, lower_approx, upper_approx};
use gridrough_core::{DecisionTable, RoughSetError, RowSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("table has no header line")]
    Empty,
    #[error("line {line}: expected {expected} fields, got {actual}")]
    Arity {
        line: usize,
        expected: usize,
        actual: usize,
    },
    #[error(transparent)]
    RoughSet(#[from] RoughSetError),
}

fn split(line: &str, delim: Option<char>) -> Vec<&str> {
    match delim {
        Some(d) => line.split(d).map(str::trim).collect(),
        None => line.split_whitespace().collect(),
    }
}

pub fn parse_table(text: &str) -> Result<DecisionTable, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (_, header_line) = lines.next().ok_or(TableError::Empty)?;
    let delim = if header_line.contains(',') {
        Some(',')
    } else if header_line.contains('\t') {
        Some('\t')
    } else {
        None
    };
    let header = split(header_line, delim);
    let mut rows = Vec::new();
    for (k, line) in lines {
        let fields = split(line, delim);
        if fields.len() != header.len() {
            return Err(TableError::Arity {
                line: k + 1,
                expected: header.len(),
                actual: fields.len(),
            });
        }
        rows.push(fields);
    }
    Ok(DecisionTable::from_tokens(&header, &rows)?)
}

fn rows_text(set: &RowSet) -> String {
    let rows: Vec<String> = set.iter().map(|r| (r + 1).to_string()).collect();
    format!("{{{}}}", rows.join(", "))
}

/// Approximations of every concept followed by the induced rules. Rows are
/// numbered from 1 in the order they appear in the file.
pub fn table_report(table: &DecisionTable) -> Result<String, TableError> {
    let mut out = String::new();
    let all: Vec<usize> = (0..table.n_attributes()).collect();
    let partition = indiscernibility_classes(table, &all)?;
    writeln!(out, "examples {}", table.n_rows()).unwrap();
    writeln!(out, "attributes {}", table.attributes().join(" ")).unwrap();
    writeln!(
        out,
        "consistency {}",
        if table.is_consistent() { "consistent" } else { "inconsistent" }
    )
    .unwrap();
    for c in concepts(table) {
        let label = table.decision_label(c.decision_value);
        writeln!(out, "concept {}={} {}", table.decision_name(), label, rows_text(&c.members)).unwrap();
        writeln!(out, "  lower {}", rows_text(&lower_approx(&c.members, &partition))).unwrap();
        writeln!(out, "  upper {}", rows_text(&upper_approx(&c.members, &partition))).unwrap();
    }
    writeln!(out, "rules").unwrap();
    for rule in induce_rules(table)? {
        writeln!(
            out,
            "{} [{}, support={}, strength={}]",
            rule.describe(table),
            rule.certainty,
            rule.support,
            rule.strength
        )
        .unwrap();
    }
    Ok(out)
}
