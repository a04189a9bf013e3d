//! Signatures: function symbols and predicate symbols with arities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or loading a signature.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared both as a function and as a predicate")]
    DuplicateName(String),
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("malformed signature file: {0}")]
    Parse(String),
}

/// Function symbols and predicate symbols with their arities.
///
/// File format: `{"functions": {"f": 1}, "predicates": {"P": 2}}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signature {
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    predicates: BTreeMap<String, usize>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Signature {
    pub fn new<'a>(
        functions: impl IntoIterator<Item = (&'a str, usize)>,
        predicates: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SignatureError> {
        let sig = Signature {
            functions: functions.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
            predicates: predicates.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
        };
        sig.validate()?;
        Ok(sig)
    }

    fn validate(&self) -> Result<(), SignatureError> {
        for name in self.functions.keys().chain(self.predicates.keys()) {
            if !is_identifier(name) {
                return Err(SignatureError::InvalidName(name.clone()));
            }
        }
        if let Some(name) = self.functions.keys().find(|n| self.predicates.contains_key(*n)) {
            return Err(SignatureError::DuplicateName(name.clone()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SignatureError> {
        let sig: Signature =
            serde_json::from_str(text).map_err(|e| SignatureError::Parse(e.to_string()))?;
        sig.validate()?;
        Ok(sig)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signature serializes")
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, a)| (n.as_str(), *a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_format() {
        let sig = Signature::from_json(r#"{"functions": {"f": 1}, "predicates": {"P": 2}}"#).unwrap();
        assert_eq!(sig.function_arity("f"), Some(1));
        assert_eq!(sig.predicate_arity("P"), Some(2));
        assert_eq!(sig.predicate_arity("f"), None);
    }

    #[test]
    fn rejects_shared_names() {
        let err = Signature::from_json(r#"{"functions": {"R": 1}, "predicates": {"R": 2}}"#);
        assert_eq!(err, Err(SignatureError::DuplicateName("R".into())));
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Signature::new([("1f", 1)], []).is_err());
        assert!(Signature::new([("f(", 1)], []).is_err());
    }
}
