//! The labels file: one `<cluster_id> <class_name>` pair per line, `#` comments.

use gridrough_core::{ClusterId, LabelsFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LabelsError {
    pub line: usize,
    pub message: String,
}

pub fn parse_labels(text: &str) -> Result<LabelsFile, LabelsError> {
    let mut labels = LabelsFile::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| LabelsError { line: k + 1, message };
        let mut fields = line.split_whitespace();
        let (Some(id), Some(name), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `<cluster_id> <class_name>`, got {line:?}")));
        };
        let id: u32 = id.parse().map_err(|_| err(format!("bad cluster id {id:?}")))?;
        labels.insert(ClusterId(id), name).map_err(|e| err(e.to_string()))?;
    }
    Ok(labels)
}

pub fn format_labels(labels: &LabelsFile) -> String {
    labels.iter().map(|(id, name)| format!("{id} {name}\n")).collect()
}
