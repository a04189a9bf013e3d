//! JSON derivation files.
//!
//! ```json
//! {
//!   "start": "copy ; (id ⊗ discard)",
//!   "goal": "id",
//!   "relation": "=",
//!   "steps": [{"rule": "comonoid.unit"}],
//!   "reverse": []
//! }
//! ```
//!
//! Step fields: `rule`, `direction` (`forward` by default), `metavar`,
//! `widths`, `c1`, `left_pad`, `right_pad`, `c2`. Omitted contexts are
//! identities. A file may also hold a JSON array of such objects.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, DerivationStep, Direction, Relation};
use crate::diagram::{parse_diagram, Diagram, DiagramParseError};
use crate::signature::Signature;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("malformed derivation file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in field `{field}`: {source}")]
    Diagram { field: String, source: DiagramParseError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub rule: String,
    #[serde(default = "forward")]
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metavar: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widths: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    #[serde(default)]
    pub left_pad: usize,
    #[serde(default)]
    pub right_pad: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<String>,
}

fn forward() -> Direction {
    Direction::Forward
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub start: String,
    pub goal: String,
    pub relation: Relation,
    pub steps: Vec<StepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse: Option<Vec<StepFile>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(DerivationFile),
    Many(Vec<DerivationFile>),
}

fn diagram(field: String, text: &str, sig: &Signature) -> Result<Diagram, FileError> {
    parse_diagram(text, sig).map_err(|source| FileError::Diagram { field, source })
}

fn opt_diagram(field: String, text: &Option<String>, sig: &Signature) -> Result<Option<Diagram>, FileError> {
    text.as_deref().map(|t| diagram(field, t, sig)).transpose()
}

impl StepFile {
    fn resolve(&self, prefix: &str, sig: &Signature) -> Result<DerivationStep, FileError> {
        Ok(DerivationStep {
            rule: self.rule.clone(),
            direction: self.direction,
            metavar: opt_diagram(format!("{prefix}.metavar"), &self.metavar, sig)?,
            widths: self.widths.clone(),
            c1: opt_diagram(format!("{prefix}.c1"), &self.c1, sig)?,
            left_pad: self.left_pad,
            right_pad: self.right_pad,
            c2: opt_diagram(format!("{prefix}.c2"), &self.c2, sig)?,
        })
    }
}

impl DerivationFile {
    /// Parses every diagram in the file, returning the derivation and its goal.
    pub fn resolve(&self, sig: &Signature) -> Result<(Derivation, Diagram), FileError> {
        let steps = |chain: &str, list: &[StepFile]| -> Result<Vec<DerivationStep>, FileError> {
            list.iter()
                .enumerate()
                .map(|(i, s)| s.resolve(&format!("{chain}[{i}]"), sig))
                .collect()
        };
        let dv = Derivation {
            start: diagram("start".into(), &self.start, sig)?,
            steps: steps("steps", &self.steps)?,
            relation: self.relation,
            reverse: self.reverse.as_deref().map(|r| steps("reverse", r)).transpose()?,
        };
        Ok((dv, diagram("goal".into(), &self.goal, sig)?))
    }
}

/// Reads a file holding one derivation object or an array of them.
pub fn load_derivations(text: &str) -> Result<Vec<DerivationFile>, FileError> {
    Ok(match serde_json::from_str(text)? {
        OneOrMany::One(d) => vec![d],
        OneOrMany::Many(v) => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::check_derivation;

    #[test]
    fn reads_single_and_array() {
        let sig = Signature::default();
        let one = r#"{"start": "copy ; (id ⊗ discard)", "goal": "id", "relation": "=",
                      "steps": [{"rule": "comonoid.unit"}]}"#;
        let files = load_derivations(one).unwrap();
        assert_eq!(files.len(), 1);
        let (dv, goal) = files[0].resolve(&sig).unwrap();
        assert!(check_derivation(&dv, &goal).accepted);
        let many = format!("[{one}, {one}]");
        assert_eq!(load_derivations(&many).unwrap().len(), 2);
    }

    #[test]
    fn reports_bad_fields() {
        let sig = Signature::default();
        let text = r#"{"start": "copy ;", "goal": "id", "relation": "<=", "steps": []}"#;
        let err = load_derivations(text).unwrap()[0].resolve(&sig).unwrap_err();
        assert!(matches!(err, FileError::Diagram { ref field, .. } if field == "start"));
        assert!(load_derivations(r#"{"start": "id"}"#).is_err());
    }
}
