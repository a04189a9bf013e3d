//! Interpretation of diagrams in a finite model.

use super::relation::{tuple_count, FinRelation};
use super::{FinModel, FinRelError};
use crate::diagram::{Diagram, Generator, Node};

/// Intermediate values: total functions stay tables until they meet a relation.
enum Value {
    Fun { dom: usize, cod: usize, table: Vec<usize> },
    Rel(FinRelation),
}

impl Value {
    fn into_rel(self, size: usize) -> Result<FinRelation, FinRelError> {
        match self {
            Value::Fun { dom, cod, table } => FinRelation::graph(size, dom, cod, &table),
            Value::Rel(r) => Ok(r),
        }
    }
}

fn generator(m: &FinModel, g: &Generator) -> Result<Value, FinRelError> {
    let s = m.size();
    let fun = |dom, cod, table| Ok(Value::Fun { dom, cod, table });
    match g {
        Generator::Id => fun(1, 1, (0..s).collect()),
        Generator::Swap => fun(2, 2, (0..s * s).map(|i| (i % s) * s + i / s).collect()),
        Generator::Copy => fun(1, 2, (0..s).map(|a| a * s + a).collect()),
        Generator::Discard => fun(1, 0, vec![0; s]),
        Generator::Cocopy => {
            let mut r = FinRelation::empty(s, 2, 1)?;
            (0..s).for_each(|a| r.set(a * s + a, a));
            Ok(Value::Rel(r))
        }
        Generator::Codiscard => Ok(Value::Rel(FinRelation::full(s, 0, 1)?)),
        Generator::Func { name, arity } => {
            let t = m.function(name).ok_or_else(|| FinRelError::UninterpretedSymbol(name.to_string()))?;
            if t.arity != *arity {
                return Err(FinRelError::ArityMismatch(name.to_string()));
            }
            fun(*arity, 1, t.values.clone())
        }
        Generator::Pred { name, arity } => {
            let t = m.predicate(name).ok_or_else(|| FinRelError::UninterpretedSymbol(name.to_string()))?;
            if t.arity != *arity {
                return Err(FinRelError::ArityMismatch(name.to_string()));
            }
            let mut r = FinRelation::empty(s, *arity, 0)?;
            t.members.iter().enumerate().filter(|(_, &b)| b).for_each(|(i, _)| r.set(i, 0));
            Ok(Value::Rel(r))
        }
    }
}

fn eval(m: &FinModel, d: &Diagram) -> Result<Value, FinRelError> {
    let s = m.size();
    match d.node() {
        Node::Empty => Ok(Value::Fun { dom: 0, cod: 0, table: vec![0] }),
        Node::Gen(g) => generator(m, g),
        Node::Seq(a, b) => match (eval(m, a)?, eval(m, b)?) {
            (Value::Fun { dom, table: t1, .. }, Value::Fun { cod, table: t2, .. }) => {
                Ok(Value::Fun { dom, cod, table: t1.iter().map(|&j| t2[j]).collect() })
            }
            (Value::Fun { dom, table, .. }, Value::Rel(r)) => Ok(Value::Rel(r.after_function(dom, &table)?)),
            (Value::Rel(r), Value::Fun { cod, table, .. }) => Ok(Value::Rel(r.then_function(cod, &table)?)),
            (Value::Rel(r1), Value::Rel(r2)) => Ok(Value::Rel(r1.compose(&r2)?)),
        },
        Node::Tensor(a, b) => match (eval(m, a)?, eval(m, b)?) {
            (Value::Fun { dom: d1, cod: c1, table: t1 }, Value::Fun { dom: d2, cod: c2, table: t2 }) => {
                let rows2 = tuple_count(s, d2)?;
                let cols2 = tuple_count(s, c2)?;
                let rows = tuple_count(s, d1 + d2)?;
                tuple_count(s, c1 + c2)?;
                let table = (0..rows).map(|i| t1[i / rows2] * cols2 + t2[i % rows2]).collect();
                Ok(Value::Fun { dom: d1 + d2, cod: c1 + c2, table })
            }
            (x, y) => Ok(Value::Rel(x.into_rel(s)?.tensor(&y.into_rel(s)?)?)),
        },
    }
}

/// The relation denoted by `d` in `m`.
pub fn eval_diagram(m: &FinModel, d: &Diagram) -> Result<FinRelation, FinRelError> {
    eval(m, d)?.into_rel(m.size())
}

/// Whether `eval(d1) ⊆ eval(d2)`.
pub fn check_inclusion(m: &FinModel, d1: &Diagram, d2: &Diagram) -> Result<bool, FinRelError> {
    if (d1.dom(), d1.cod()) != (d2.dom(), d2.cod()) {
        return Err(FinRelError::WidthMismatch { left: (d1.dom(), d1.cod()), right: (d2.dom(), d2.cod()) });
    }
    eval_diagram(m, d1)?.is_subset(&eval_diagram(m, d2)?)
}
