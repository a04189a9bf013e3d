//! Finite structures for a signature.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::relation::{decode, encode, tuple_count};
use super::FinRelError;
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunTable {
    pub arity: usize,
    /// Output for each argument tuple, indexed as in [`super::FinRelation`].
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredTable {
    pub arity: usize,
    pub members: Vec<bool>,
}

/// A carrier with a total function per function symbol and a subset per predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinModel {
    carrier: Vec<String>,
    functions: BTreeMap<String, FunTable>,
    predicates: BTreeMap<String, PredTable>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    carrier: Vec<String>,
    #[serde(default)]
    functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    predicates: BTreeMap<String, Vec<Vec<String>>>,
}

impl FinModel {
    /// A model on `{0, .., size-1}` with no symbols interpreted yet.
    pub fn new(size: usize) -> FinModel {
        assert!(size > 0, "carriers are non-empty");
        FinModel {
            carrier: (0..size).map(|i| i.to_string()).collect(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    /// Interprets `name` by a table listing `f(t)` for every tuple `t` in index order.
    pub fn with_function(mut self, name: &str, arity: usize, values: Vec<usize>) -> Result<FinModel, FinRelError> {
        let n = tuple_count(self.size(), arity)?;
        if values.len() != n || values.iter().any(|&v| v >= self.size()) {
            return Err(FinRelError::BadTable(name.into()));
        }
        self.functions.insert(name.into(), FunTable { arity, values });
        Ok(self)
    }

    /// Interprets `name` by the listed tuples.
    pub fn with_predicate(mut self, name: &str, arity: usize, tuples: &[Vec<usize>]) -> Result<FinModel, FinRelError> {
        let n = tuple_count(self.size(), arity)?;
        let mut members = vec![false; n];
        for t in tuples {
            if t.len() != arity || t.iter().any(|&a| a >= self.size()) {
                return Err(FinRelError::BadTable(name.into()));
            }
            members[encode(self.size(), t)] = true;
        }
        self.predicates.insert(name.into(), PredTable { arity, members });
        Ok(self)
    }

    pub(crate) fn with_predicate_members(mut self, name: &str, arity: usize, members: Vec<bool>) -> FinModel {
        self.predicates.insert(name.into(), PredTable { arity, members });
        self
    }

    pub fn function(&self, name: &str) -> Option<&FunTable> {
        self.functions.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredTable> {
        self.predicates.get(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &FunTable)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &PredTable)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Reads the JSON model format, checking tables against the signature.
    pub fn from_json(text: &str, sig: &Signature) -> Result<FinModel, FinRelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| FinRelError::Parse(e.to_string()))?;
        if file.carrier.is_empty() {
            return Err(FinRelError::Parse("the carrier is empty".into()));
        }
        let index: BTreeMap<&str, usize> = file.carrier.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != file.carrier.len() {
            return Err(FinRelError::Parse("the carrier lists an element twice".into()));
        }
        let elem = |s: &str| index.get(s).copied().ok_or_else(|| FinRelError::Parse(format!("`{s}` is not in the carrier")));
        let mut model = FinModel { carrier: file.carrier.clone(), functions: BTreeMap::new(), predicates: BTreeMap::new() };
        let size = model.size();
        for (name, table) in &file.functions {
            let arity = sig.function_arity(name).ok_or_else(|| FinRelError::UninterpretedSymbol(name.clone()))?;
            let n = tuple_count(size, arity)?;
            let mut values = vec![None; n];
            for (key, value) in table {
                let args: Vec<usize> = if arity == 0 {
                    if !key.is_empty() {
                        return Err(FinRelError::BadTable(name.clone()));
                    }
                    vec![]
                } else {
                    key.split(',').map(|s| elem(s.trim())).collect::<Result<_, _>>()?
                };
                if args.len() != arity {
                    return Err(FinRelError::BadTable(name.clone()));
                }
                values[encode(size, &args)] = Some(elem(value)?);
            }
            let values: Option<Vec<usize>> = values.into_iter().collect();
            let values = values.ok_or_else(|| FinRelError::BadTable(name.clone()))?;
            model.functions.insert(name.clone(), FunTable { arity, values });
        }
        for (name, tuples) in &file.predicates {
            let arity = sig.predicate_arity(name).ok_or_else(|| FinRelError::UninterpretedSymbol(name.clone()))?;
            let tuples: Vec<Vec<usize>> = tuples
                .iter()
                .map(|t| t.iter().map(|s| elem(s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?;
            model = model.with_predicate(name, arity, &tuples)?;
        }
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let name = |i: usize| self.carrier[i].clone();
        let size = self.size();
        let functions = self
            .functions
            .iter()
            .map(|(f, t)| {
                let table = t
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let key: Vec<String> = decode(size, t.arity, i).into_iter().map(name).collect();
                        (key.join(","), name(v))
                    })
                    .collect();
                (f.clone(), table)
            })
            .collect();
        let predicates = self
            .predicates
            .iter()
            .map(|(p, t)| {
                let tuples = t
                    .members
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m)
                    .map(|(i, _)| decode(size, t.arity, i).into_iter().map(name).collect())
                    .collect();
                (p.clone(), tuples)
            })
            .collect();
        let file = ModelFile { carrier: self.carrier.clone(), functions, predicates };
        serde_json::to_string_pretty(&file).expect("models serialize")
    }
}
