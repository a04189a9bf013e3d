//! Morphisms of the free cartesian bicategory over a signature, as typed
//! composition terms over a fixed set of generators.
//!
//! Objects are natural numbers (wire counts). Equality of terms up to the
//! symmetric monoidal laws is decided through [`PortGraph`] canonical forms;
//! everything else (comonoid laws, Frobenius, adjunctions) is left to the
//! rewrite engine.

mod port_graph;
pub mod random;
mod syntax;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::signature::Signature;

pub use port_graph::{BoxNode, PortGraph, Source, Target};
pub use syntax::{parse_diagram, DiagramParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("generator kind `{0}` needs a symbol")]
    KindRequiresSymbol(String),
    #[error("width mismatch: {0} wires meet {1} wires")]
    WidthMismatch(usize, usize),
}

/// The leaves of a diagram term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// A single wire, `1 -> 1`.
    Id,
    /// The crossing, `2 -> 2`.
    Swap,
    /// Duplication, `1 -> 2`.
    Copy,
    /// Deletion, `1 -> 0`.
    Discard,
    /// Right adjoint of copy, `2 -> 1`.
    Cocopy,
    /// Right adjoint of discard, `0 -> 1`.
    Codiscard,
    /// A function symbol box, `arity -> 1`.
    Func { name: Arc<str>, arity: usize },
    /// A predicate symbol box, `arity -> 0`.
    Pred { name: Arc<str>, arity: usize },
}

impl Generator {
    pub fn func(name: &str, arity: usize) -> Self {
        Generator::Func { name: name.into(), arity }
    }

    pub fn pred(name: &str, arity: usize) -> Self {
        Generator::Pred { name: name.into(), arity }
    }

    pub fn dom(&self) -> usize {
        match self {
            Generator::Id | Generator::Copy | Generator::Discard => 1,
            Generator::Swap | Generator::Cocopy => 2,
            Generator::Codiscard => 0,
            Generator::Func { arity, .. } | Generator::Pred { arity, .. } => *arity,
        }
    }

    pub fn cod(&self) -> usize {
        match self {
            Generator::Id | Generator::Cocopy | Generator::Codiscard | Generator::Func { .. } => 1,
            Generator::Swap | Generator::Copy => 2,
            Generator::Discard | Generator::Pred { .. } => 0,
        }
    }

    /// Whether the generator is pure wiring (dissolved in port graphs).
    pub fn is_wiring(&self) -> bool {
        matches!(self, Generator::Id | Generator::Swap)
    }

    /// Label used for boxes in port graphs and canonical forms.
    pub fn label(&self) -> String {
        match self {
            Generator::Id => "id".into(),
            Generator::Swap => "swap".into(),
            Generator::Copy => "copy".into(),
            Generator::Discard => "discard".into(),
            Generator::Cocopy => "cocopy".into(),
            Generator::Codiscard => "codiscard".into(),
            Generator::Func { name, .. } => format!("f:{name}"),
            Generator::Pred { name, .. } => format!("P:{name}"),
        }
    }
}

/// Generator kinds accepted by [`make_generator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Id,
    Swap,
    Copy,
    Discard,
    Cocopy,
    Codiscard,
    FBox,
    PBox,
}

/// A diagram `dom -> cod`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    dom: usize,
    cod: usize,
    node: Arc<Node>,
}

/// Root of a diagram term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// The empty diagram `0 -> 0`.
    Empty,
    Gen(Generator),
    Seq(Diagram, Diagram),
    Tensor(Diagram, Diagram),
}

/// Builds a single generator, resolving box symbols against `sig`.
pub fn make_generator(
    sig: &Signature,
    kind: GeneratorKind,
    symbol: Option<&str>,
) -> Result<Diagram, DiagramError> {
    let g = match kind {
        GeneratorKind::Id => Generator::Id,
        GeneratorKind::Swap => Generator::Swap,
        GeneratorKind::Copy => Generator::Copy,
        GeneratorKind::Discard => Generator::Discard,
        GeneratorKind::Cocopy => Generator::Cocopy,
        GeneratorKind::Codiscard => Generator::Codiscard,
        GeneratorKind::FBox => {
            let name = symbol.ok_or_else(|| DiagramError::KindRequiresSymbol("fbox".into()))?;
            let arity = sig
                .function_arity(name)
                .ok_or_else(|| DiagramError::UnknownSymbol(name.into()))?;
            Generator::func(name, arity)
        }
        GeneratorKind::PBox => {
            let name = symbol.ok_or_else(|| DiagramError::KindRequiresSymbol("pbox".into()))?;
            let arity = sig
                .predicate_arity(name)
                .ok_or_else(|| DiagramError::UnknownSymbol(name.into()))?;
            Generator::pred(name, arity)
        }
    };
    Ok(Diagram::generator(g))
}

/// Sequential composition `d1 ; d2`.
pub fn compose(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    if d1.cod != d2.dom {
        return Err(DiagramError::WidthMismatch(d1.cod, d2.dom));
    }
    Ok(Diagram { dom: d1.dom, cod: d2.cod, node: Arc::new(Node::Seq(d1.clone(), d2.clone())) })
}

/// Parallel composition `d1 ⊗ d2`.
pub fn tensor(d1: &Diagram, d2: &Diagram) -> Diagram {
    Diagram {
        dom: d1.dom + d2.dom,
        cod: d1.cod + d2.cod,
        node: Arc::new(Node::Tensor(d1.clone(), d2.clone())),
    }
}

/// Intersection of two parallel diagrams: `copy_n ; (d1 ⊗ d2) ; cocopy_m`.
pub fn meet(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    if d1.dom != d2.dom {
        return Err(DiagramError::WidthMismatch(d1.dom, d2.dom));
    }
    if d1.cod != d2.cod {
        return Err(DiagramError::WidthMismatch(d1.cod, d2.cod));
    }
    Ok(Diagram::copy_n(d1.dom)
        .seq(&tensor(d1, d2))
        .seq(&Diagram::cocopy_n(d1.cod)))
}

/// The opposite diagram, obtained by bending both boundaries with cups and caps:
/// `(id_m ⊗ cup_n) ; (id_m ⊗ d ⊗ id_n) ; (cap_m ⊗ id_n)`.
pub fn converse(d: &Diagram) -> Diagram {
    let (n, m) = (d.dom, d.cod);
    let id_m = Diagram::identity(m);
    let id_n = Diagram::identity(n);
    tensor(&id_m, &Diagram::cup(n))
        .seq(&tensor(&tensor(&id_m, d), &id_n))
        .seq(&tensor(&Diagram::cap(m), &id_n))
}

/// Derived families built from the width-one generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    Copy(usize),
    Discard(usize),
    Cocopy(usize),
    Codiscard(usize),
    Swap(usize, usize),
    Cup(usize),
    Cap(usize),
    Top(usize, usize),
    Id(usize),
}

pub fn derived(kind: Derived) -> Diagram {
    match kind {
        Derived::Copy(n) => Diagram::copy_n(n),
        Derived::Discard(n) => Diagram::discard_n(n),
        Derived::Cocopy(n) => Diagram::cocopy_n(n),
        Derived::Codiscard(n) => Diagram::codiscard_n(n),
        Derived::Swap(n, m) => Diagram::swap_nm(n, m),
        Derived::Cup(n) => Diagram::cup(n),
        Derived::Cap(n) => Diagram::cap(n),
        Derived::Top(n, m) => Diagram::top(n, m),
        Derived::Id(n) => Diagram::identity(n),
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram { dom: 0, cod: 0, node: Arc::new(Node::Empty) }
    }

    pub fn generator(g: Generator) -> Self {
        Diagram { dom: g.dom(), cod: g.cod(), node: Arc::new(Node::Gen(g)) }
    }

    pub fn id1() -> Self {
        Self::generator(Generator::Id)
    }

    pub fn swap() -> Self {
        Self::generator(Generator::Swap)
    }

    pub fn copy() -> Self {
        Self::generator(Generator::Copy)
    }

    pub fn discard() -> Self {
        Self::generator(Generator::Discard)
    }

    pub fn cocopy() -> Self {
        Self::generator(Generator::Cocopy)
    }

    pub fn codiscard() -> Self {
        Self::generator(Generator::Codiscard)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// `self ; other`.
    ///
    /// # Panics
    /// Panics when the widths do not match; use [`compose`] for a checked version.
    pub fn seq(&self, other: &Diagram) -> Diagram {
        match compose(self, other) {
            Ok(d) => d,
            Err(e) => panic!("Diagram::seq: {e}"),
        }
    }

    /// `self ⊗ other`.
    pub fn par(&self, other: &Diagram) -> Diagram {
        tensor(self, other)
    }

    /// Tensor of a sequence of diagrams; the empty sequence gives the empty diagram.
    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Diagram::empty(),
            Some(first) => iter.fold(first.clone(), |acc, d| tensor(&acc, d)),
        }
    }

    /// `id_n`: `n` parallel wires.
    pub fn identity(n: usize) -> Diagram {
        Self::repeat(&Self::id1(), n)
    }

    fn repeat(d: &Diagram, n: usize) -> Diagram {
        let copies = vec![d.clone(); n];
        Self::tensor_all(copies.iter())
    }

    /// `copy_n : n -> 2n`, outputs `x1..xn, x1..xn`.
    pub fn copy_n(n: usize) -> Diagram {
        match n {
            0 => Diagram::empty(),
            1 => Diagram::copy(),
            _ => {
                let k = n - 1;
                tensor(&Diagram::copy(), &Diagram::copy_n(k)).seq(&Diagram::tensor_all([
                    &Diagram::id1(),
                    &Diagram::swap_nm(1, k),
                    &Diagram::identity(k),
                ]))
            }
        }
    }

    /// `cocopy_n : 2n -> n`, the mirror image of [`Diagram::copy_n`].
    pub fn cocopy_n(n: usize) -> Diagram {
        match n {
            0 => Diagram::empty(),
            1 => Diagram::cocopy(),
            _ => {
                let k = n - 1;
                Diagram::tensor_all([&Diagram::id1(), &Diagram::swap_nm(k, 1), &Diagram::identity(k)])
                    .seq(&tensor(&Diagram::cocopy(), &Diagram::cocopy_n(k)))
            }
        }
    }

    pub fn discard_n(n: usize) -> Diagram {
        Self::repeat(&Self::discard(), n)
    }

    pub fn codiscard_n(n: usize) -> Diagram {
        Self::repeat(&Self::codiscard(), n)
    }

    /// `swap_{n,m} : n+m -> m+n`, moving the first `n` wires below the last `m`.
    pub fn swap_nm(n: usize, m: usize) -> Diagram {
        if n == 0 || m == 0 {
            return Diagram::identity(n + m);
        }
        if n == 1 {
            if m == 1 {
                return Diagram::swap();
            }
            return tensor(&Diagram::swap(), &Diagram::identity(m - 1))
                .seq(&tensor(&Diagram::id1(), &Diagram::swap_nm(1, m - 1)));
        }
        tensor(&Diagram::identity(n - 1), &Diagram::swap_nm(1, m))
            .seq(&tensor(&Diagram::swap_nm(n - 1, m), &Diagram::id1()))
    }

    /// `cup_n = codiscard_n ; copy_n : 0 -> 2n`.
    pub fn cup(n: usize) -> Diagram {
        Diagram::codiscard_n(n).seq(&Diagram::copy_n(n))
    }

    /// `cap_n = cocopy_n ; discard_n : 2n -> 0`.
    pub fn cap(n: usize) -> Diagram {
        Diagram::cocopy_n(n).seq(&Diagram::discard_n(n))
    }

    /// `top_{n,m} = discard_n ; codiscard_m`.
    pub fn top(n: usize, m: usize) -> Diagram {
        Diagram::discard_n(n).seq(&Diagram::codiscard_n(m))
    }

    /// Pure wiring `n -> perm.len()` whose output `j` is input `perm[j]`.
    ///
    /// # Panics
    /// Panics unless `perm` is a permutation of `0..perm.len()`.
    pub fn permutation(perm: &[usize]) -> Diagram {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation: {perm:?}");
            seen[p] = true;
        }
        // Bubble sort the target order into place, recording adjacent swaps.
        let mut current: Vec<usize> = (0..n).collect();
        let mut result = Diagram::identity(n);
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n.saturating_sub(1) {
                let pos = |v: usize| perm.iter().position(|&p| p == v).unwrap();
                if pos(current[i]) > pos(current[i + 1]) {
                    current.swap(i, i + 1);
                    let layer = Diagram::tensor_all([
                        &Diagram::identity(i),
                        &Diagram::swap(),
                        &Diagram::identity(n - i - 2),
                    ]);
                    result = result.seq(&layer);
                    changed = true;
                }
            }
        }
        result
    }

    /// Generator leaves in left-to-right term order.
    pub fn leaves(&self) -> Vec<&Generator> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Generator>) {
        match &*self.node {
            Node::Empty => {}
            Node::Gen(g) => out.push(g),
            Node::Seq(a, b) | Node::Tensor(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Number of leaves that become boxes (everything except `id` and `swap`).
    pub fn box_count(&self) -> usize {
        self.leaves().iter().filter(|g| !g.is_wiring()).count()
    }

    /// Height of the term tree (generators and the empty diagram have depth 0).
    pub fn depth(&self) -> usize {
        match &*self.node {
            Node::Empty | Node::Gen(_) => 0,
            Node::Seq(a, b) | Node::Tensor(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn to_port_graph(&self) -> PortGraph {
        PortGraph::from_diagram(self)
    }

    /// Canonical string of the port graph; equal exactly for isomorphic diagrams.
    pub fn canonical_form(&self) -> String {
        self.to_port_graph().canonical_form()
    }

    /// Equality up to the symmetric monoidal laws.
    pub fn iso_equal(&self, other: &Diagram) -> bool {
        iso_equal(self, other)
    }

    /// Function and predicate symbols occurring in the term.
    pub fn symbols(&self) -> Vec<(String, usize, bool)> {
        let mut out: Vec<(String, usize, bool)> = self
            .leaves()
            .into_iter()
            .filter_map(|g| match g {
                Generator::Func { name, arity } => Some((name.to_string(), *arity, true)),
                Generator::Pred { name, arity } => Some((name.to_string(), *arity, false)),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Equality up to the symmetric monoidal laws, decided on canonical port graphs.
pub fn iso_equal(d1: &Diagram, d2: &Diagram) -> bool {
    d1.dom == d2.dom && d1.cod == d2.cod && d1.canonical_form() == d2.canonical_form()
}

/// Canonical string of a port graph.
pub fn canonical_form(g: &PortGraph) -> String {
    g.canonical_form()
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({} -> {}: {})", self.dom, self.cod, self)
    }
}
