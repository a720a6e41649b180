use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{concepts, indiscernibility_classes, lem2_local_covering, lower_approx, upper_approx};
use super::{AVPair, DecisionTable, RoughSetError};

/// Whether a rule came from a lower approximation (or a crisp concept) or
/// from an upper approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Certainty {
    Certain,
    Possible,
}

impl Certainty {
    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::Certain => "certain",
            Certainty::Possible => "possible",
        }
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Certainty {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "certain" => Ok(Certainty::Certain),
            "possible" => Ok(Certainty::Possible),
            _ => Err(()),
        }
    }
}

/// `(a₁, v₁) ∧ … ∧ (aₖ, vₖ) → (d, w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub conditions: Vec<AVPair>,
    pub decision: u32,
    pub certainty: Certainty,
    /// Training rows matching every condition and carrying `decision`.
    pub support: usize,
    /// Weight used when votes conflict; equal to `support` for induced rules.
    pub strength: usize,
}

impl Rule {
    pub fn matches(&self, values: &[u32]) -> bool {
        self.conditions.iter().all(|c| values[c.attribute] == c.value)
    }

    pub fn matched_conditions(&self, values: &[u32]) -> usize {
        self.conditions
            .iter()
            .filter(|c| values[c.attribute] == c.value)
            .count()
    }

    /// `IF a=v AND … THEN class=w`, with labels taken from `table`.
    pub fn describe(&self, table: &DecisionTable) -> String {
        let mut out = String::from("IF ");
        for (k, c) in self.conditions.iter().enumerate() {
            if k > 0 {
                out.push_str(" AND ");
            }
            out.push_str(&table.describe_pair(*c));
        }
        out.push_str(" THEN ");
        out.push_str(table.decision_name());
        out.push('=');
        out.push_str(&table.decision_label(self.decision));
        out
    }
}

fn to_rules(
    table: &DecisionTable,
    target: &super::RowSet,
    decision: u32,
    certainty: Certainty,
) -> Result<Vec<Rule>, RoughSetError> {
    let concept = table.concept_rows(decision);
    let cover = lem2_local_covering(target, table)?;
    Ok(cover
        .complexes
        .into_iter()
        .map(|conditions| {
            let support = table.complex_block(&conditions).intersection_len(&concept);
            Rule {
                conditions,
                decision,
                certainty,
                support,
                strength: support,
            }
        })
        .collect())
}

/// Certain and possible rules for every concept, in ascending decision order.
///
/// A crisp concept yields certain rules from the concept itself. Otherwise
/// certain rules come from the lower approximation (when non-empty) and
/// possible rules from the upper approximation.
pub fn induce_rules(table: &DecisionTable) -> Result<Vec<Rule>, RoughSetError> {
    if table.n_rows() == 0 {
        return Ok(Vec::new());
    }
    let all: Vec<usize> = (0..table.n_attributes()).collect();
    let partition = indiscernibility_classes(table, &all)?;
    let mut rules = Vec::new();
    for concept in concepts(table) {
        let lower = lower_approx(&concept.members, &partition);
        if lower == concept.members {
            rules.extend(to_rules(table, &concept.members, concept.decision_value, Certainty::Certain)?);
            continue;
        }
        if !lower.is_empty() {
            rules.extend(to_rules(table, &lower, concept.decision_value, Certainty::Certain)?);
        }
        let upper = upper_approx(&concept.members, &partition);
        rules.extend(to_rules(table, &upper, concept.decision_value, Certainty::Possible)?);
    }
    Ok(rules)
}
