//! Rule files, as readable text lines or as JSON.
//!
//! Text form:
//!
//! ```text
//! # bins=8
//! # attributes=h_bin s_bin i_bin
//! # classes=water land
//! IF h_bin=3 AND s_bin=7 THEN class=water [certain, support=124, strength=124]
//! ```

use gridrough_core::classify::{ATTRIBUTES, DECISION};
use gridrough_core::{AVPair, Certainty, Discretizer, Rule, RuleSet};
use serde::{Deserialize, Serialize};

pub const JSON_FORMAT: &str = "gridrough-rules";
pub const JSON_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RulesError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

pub fn format_text(set: &RuleSet) -> String {
    let mut out = format!(
        "# bins={}\n# attributes={}\n# classes={}\n",
        set.discretizer.bins(),
        set.attributes.join(" "),
        set.classes.join(" ")
    );
    for rule in &set.rules {
        out.push_str(&format!(
            "{} [{}, support={}, strength={}]\n",
            set.describe(rule),
            rule.certainty,
            rule.support,
            rule.strength
        ));
    }
    out
}

pub fn parse_text(text: &str) -> Result<RuleSet, RulesError> {
    let mut bins = None;
    let mut attributes: Vec<String> = ATTRIBUTES.iter().map(|s| s.to_string()).collect();
    let mut classes: Option<Vec<String>> = None;
    let mut rules = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| RulesError::Syntax { line: k + 1, message };
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let Some((key, value)) = header.trim().split_once('=') else {
                continue;
            };
            match key.trim() {
                "bins" => {
                    bins = Some(value.trim().parse::<u32>().map_err(|_| err(format!("bad bins {value:?}")))?)
                }
                "attributes" => attributes = value.split_whitespace().map(String::from).collect(),
                "classes" => classes = Some(value.split_whitespace().map(String::from).collect()),
                _ => {}
            }
            continue;
        }
        let classes = classes
            .as_ref()
            .ok_or_else(|| err("rule before the `# classes=` header".into()))?;
        rules.push(parse_rule_line(line, &attributes, classes).map_err(err)?);
    }
    let bins = bins.ok_or(RulesError::Syntax {
        line: 0,
        message: "missing `# bins=` header".into(),
    })?;
    let set = RuleSet {
        attributes,
        classes: classes.unwrap_or_default(),
        discretizer: Discretizer::new(bins).map_err(|e| RulesError::Invalid(e.to_string()))?,
        rules,
    };
    set.validate().map_err(|e| RulesError::Invalid(e.to_string()))?;
    Ok(set)
}

fn parse_rule_line(line: &str, attributes: &[String], classes: &[String]) -> Result<Rule, String> {
    let body = line
        .strip_prefix("IF ")
        .ok_or_else(|| format!("expected a rule starting with `IF`, got {line:?}"))?;
    let (conds, rest) = body.split_once(" THEN ").ok_or("missing `THEN`")?;
    let (decision, meta) = rest.split_once('[').ok_or("missing `[certainty, support=.., strength=..]`")?;
    let mut conditions = Vec::new();
    for cond in conds.split(" AND ") {
        let (name, value) = cond.trim().split_once('=').ok_or_else(|| format!("bad condition {cond:?}"))?;
        let attribute = attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| format!("unknown attribute {name:?}"))?;
        let value = value.parse::<u32>().map_err(|_| format!("bad value in {cond:?}"))?;
        conditions.push(AVPair { attribute, value });
    }
    let (dname, class) = decision.trim().split_once('=').ok_or("bad decision")?;
    if dname != DECISION {
        return Err(format!("decision must be `{DECISION}`, got {dname:?}"));
    }
    let decision = classes
        .iter()
        .position(|c| c == class)
        .ok_or_else(|| format!("class {class:?} is not in the classes header"))? as u32;
    let meta = meta.trim().strip_suffix(']').ok_or("unterminated `[`")?;
    let mut parts = meta.split(',').map(str::trim);
    let certainty: Certainty = parts
        .next()
        .and_then(|c| c.parse().ok())
        .ok_or("certainty must be `certain` or `possible`")?;
    let mut count = |key: &str| -> Result<usize, String> {
        parts
            .next()
            .and_then(|p| p.strip_prefix(key))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("expected `{key}<n>`"))
    };
    let support = count("support=")?;
    let strength = count("strength=")?;
    Ok(Rule {
        conditions,
        decision,
        certainty,
        support,
        strength,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRuleSet {
    format: String,
    version: u32,
    bins: u32,
    attributes: Vec<String>,
    decision: String,
    classes: Vec<String>,
    rules: Vec<JsonRule>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRule {
    conditions: Vec<JsonCondition>,
    class: String,
    certainty: String,
    support: usize,
    strength: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCondition {
    attribute: String,
    value: u32,
}

pub fn format_json(set: &RuleSet) -> String {
    let doc = JsonRuleSet {
        format: JSON_FORMAT.into(),
        version: JSON_VERSION,
        bins: set.discretizer.bins(),
        attributes: set.attributes.clone(),
        decision: DECISION.into(),
        classes: set.classes.clone(),
        rules: set
            .rules
            .iter()
            .map(|r| JsonRule {
                conditions: r
                    .conditions
                    .iter()
                    .map(|c| JsonCondition {
                        attribute: set.attributes[c.attribute].clone(),
                        value: c.value,
                    })
                    .collect(),
                class: set.classes[r.decision as usize].clone(),
                certainty: r.certainty.to_string(),
                support: r.support,
                strength: r.strength,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("rule sets always serialise");
    text.push('\n');
    text
}

pub fn parse_json(text: &str) -> Result<RuleSet, RulesError> {
    let doc: JsonRuleSet = serde_json::from_str(text).map_err(|e| RulesError::Json(e.to_string()))?;
    let invalid = |m: String| RulesError::Invalid(m);
    if doc.format != JSON_FORMAT || doc.version != JSON_VERSION {
        return Err(invalid(format!("unsupported format {:?} version {}", doc.format, doc.version)));
    }
    if doc.decision != DECISION {
        return Err(invalid(format!("decision must be `{DECISION}`")));
    }
    let mut rules = Vec::with_capacity(doc.rules.len());
    for r in doc.rules {
        let conditions = r
            .conditions
            .iter()
            .map(|c| {
                let attribute = doc
                    .attributes
                    .iter()
                    .position(|a| *a == c.attribute)
                    .ok_or_else(|| invalid(format!("unknown attribute {:?}", c.attribute)))?;
                Ok(AVPair { attribute, value: c.value })
            })
            .collect::<Result<Vec<_>, RulesError>>()?;
        let decision = doc
            .classes
            .iter()
            .position(|c| *c == r.class)
            .ok_or_else(|| invalid(format!("unknown class {:?}", r.class)))? as u32;
        let certainty = r
            .certainty
            .parse()
            .map_err(|_| invalid(format!("bad certainty {:?}", r.certainty)))?;
        rules.push(Rule {
            conditions,
            decision,
            certainty,
            support: r.support,
            strength: r.strength,
        });
    }
    let set = RuleSet {
        attributes: doc.attributes,
        classes: doc.classes,
        discretizer: Discretizer::new(doc.bins).map_err(|e| invalid(e.to_string()))?,
        rules,
    };
    set.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(set)
}

/// Picks the parser from the first non-blank character.
pub fn parse_any(text: &str) -> Result<RuleSet, RulesError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RuleSet {
        RuleSet {
            attributes: ATTRIBUTES.iter().map(|s| s.to_string()).collect(),
            classes: vec!["water".into(), "land".into()],
            discretizer: Discretizer::new(8).unwrap(),
            rules: vec![
                Rule {
                    conditions: vec![AVPair { attribute: 0, value: 3 }, AVPair { attribute: 1, value: 7 }],
                    decision: 0,
                    certainty: Certainty::Certain,
                    support: 124,
                    strength: 124,
                },
                Rule {
                    conditions: vec![AVPair { attribute: 2, value: 0 }],
                    decision: 1,
                    certainty: Certainty::Possible,
                    support: 3,
                    strength: 3,
                },
            ],
        }
    }

    #[test]
    fn text_layout() {
        assert_eq!(
            format_text(&sample()),
            "# bins=8\n# attributes=h_bin s_bin i_bin\n# classes=water land\n\
             IF h_bin=3 AND s_bin=7 THEN class=water [certain, support=124, strength=124]\n\
             IF i_bin=0 THEN class=land [possible, support=3, strength=3]\n"
        );
    }

    #[test]
    fn both_formats_round_trip() {
        let set = sample();
        assert_eq!(parse_any(&format_text(&set)).unwrap(), set);
        assert_eq!(parse_any(&format_json(&set)).unwrap(), set);
    }

    #[test]
    fn empty_rule_list_is_an_error() {
        let mut set = sample();
        set.rules.clear();
        assert!(matches!(parse_any(&format_text(&set)), Err(RulesError::Invalid(_))));
        assert!(matches!(parse_any(&format_json(&set)), Err(RulesError::Invalid(_))));
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let text = "# bins=8\n# classes=a b\nIF h_bin=1 THEN class=c [certain, support=1, strength=1]\n";
        assert_eq!(
            parse_text(text).unwrap_err(),
            RulesError::Syntax {
                line: 3,
                message: "class \"c\" is not in the classes header".into()
            }
        );
        assert!(parse_text("# classes=a\nIF h_bin=1 THEN class=a [certain, support=1, strength=1]\n").is_err());
        assert!(parse_text("# bins=8\n# classes=a\nIF x_bin=1 THEN class=a [certain, support=1, strength=1]\n").is_err());
        assert!(parse_text("# bins=8\n# classes=a\nIF h_bin=1 THEN class=a [sure, support=1, strength=1]\n").is_err());
        assert!(parse_json("{}").is_err());
    }
}
