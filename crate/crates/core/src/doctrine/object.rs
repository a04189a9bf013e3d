//! Objects of a base category: the unit `I`, atoms, and binary products.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub name: String,
    pub size: usize,
}

#[derive(Debug)]
pub enum ObjKind {
    Unit,
    Atom(usize),
    Prod(Obj, Obj),
}

#[derive(Debug)]
struct ObjNode {
    kind: ObjKind,
    card: usize,
    name: String,
    height: usize,
}

/// A finite set built from atoms by products; its elements are `0..card`.
///
/// The element `(a, b)` of `X × Y` has index `a·|Y| + b`.
#[derive(Clone)]
pub struct Obj(Arc<ObjNode>);

impl Obj {
    pub fn unit() -> Obj {
        Obj(Arc::new(ObjNode { kind: ObjKind::Unit, card: 1, name: "I".into(), height: 0 }))
    }

    pub fn atom(index: usize, atom: &Atom) -> Obj {
        Obj(Arc::new(ObjNode { kind: ObjKind::Atom(index), card: atom.size, name: atom.name.clone(), height: 0 }))
    }

    /// The product, without any size check.
    pub fn prod(x: &Obj, y: &Obj) -> Obj {
        Obj(Arc::new(ObjNode {
            kind: ObjKind::Prod(x.clone(), y.clone()),
            card: x.card() * y.card(),
            name: format!("({}×{})", x.name(), y.name()),
            height: 1 + x.height().max(y.height()),
        }))
    }

    pub fn kind(&self) -> &ObjKind {
        &self.0.kind
    }

    pub fn card(&self) -> usize {
        self.0.card
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.0.kind, ObjKind::Unit)
    }

    /// The two factors of a product.
    pub fn factors(&self) -> Option<(&Obj, &Obj)> {
        match &self.0.kind {
            ObjKind::Prod(x, y) => Some((x, y)),
            _ => None,
        }
    }

    /// Atom indices of the leaves, left to right (unit leaves omitted).
    pub fn atom_leaves(&self) -> Vec<usize> {
        let mut out = vec![];
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.0.kind {
            ObjKind::Unit => {}
            ObjKind::Atom(i) => out.push(*i),
            ObjKind::Prod(x, y) => {
                x.collect_leaves(out);
                y.collect_leaves(out);
            }
        }
    }

    /// Values at the atom leaves of element `e`.
    pub fn leaf_values(&self, e: usize) -> Vec<usize> {
        let mut out = vec![];
        self.collect_values(e, &mut out);
        out
    }

    fn collect_values(&self, e: usize, out: &mut Vec<usize>) {
        match &self.0.kind {
            ObjKind::Unit => {}
            ObjKind::Atom(_) => out.push(e),
            ObjKind::Prod(x, y) => {
                x.collect_values(e / y.card(), out);
                y.collect_values(e % y.card(), out);
            }
        }
    }

    /// Inverse of [`Obj::leaf_values`].
    pub fn from_leaf_values(&self, values: &[usize]) -> usize {
        let mut at = 0;
        self.build_from(values, &mut at)
    }

    fn build_from(&self, values: &[usize], at: &mut usize) -> usize {
        match &self.0.kind {
            ObjKind::Unit => 0,
            ObjKind::Atom(_) => {
                *at += 1;
                values[*at - 1]
            }
            ObjKind::Prod(x, y) => {
                let a = x.build_from(values, at);
                let b = y.build_from(values, at);
                a * y.card() + b
            }
        }
    }

    /// Renders element `e`, e.g. `(1,•)`.
    pub fn show(&self, e: usize) -> String {
        match &self.0.kind {
            ObjKind::Unit => "•".into(),
            ObjKind::Atom(_) => e.to_string(),
            ObjKind::Prod(x, y) => format!("({},{})", x.show(e / y.card()), y.show(e % y.card())),
        }
    }
}

impl PartialEq for Obj {
    fn eq(&self, other: &Obj) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.name == other.0.name
    }
}

impl Eq for Obj {}

impl Hash for Obj {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.name.hash(state);
    }
}

impl PartialOrd for Obj {
    fn partial_cmp(&self, other: &Obj) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Obj {
    fn cmp(&self, other: &Obj) -> Ordering {
        (self.height(), self.card(), self.name()).cmp(&(other.height(), other.card(), other.name()))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.name();
        // Drop the outermost brackets.
        if self.factors().is_some() {
            f.write_str(&n[1..n.len() - 1])
        } else {
            f.write_str(n)
        }
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
