//! Regular logic: terms, term tuples (morphisms of the Lawvere theory of a
//! signature), formulas over `⊤, P(t..), t = t, ∧, ∃`, their sort checking,
//! and the translation into diagrams.
//!
//! Variables are positional: `x_i` is the `i`-th variable of the context and
//! `∃` in context `n` always binds `x_{n+1}`.

mod parse;
mod theta;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::signature::Signature;

pub use parse::{parse_formula, parse_term, parse_tuple};
pub use theta::{theta, theta_term};

/// Names of the sort inference rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortRule {
    /// `x_i : (n,1)` when `i ≤ n`.
    Var,
    /// `f⟨t..⟩ : (n,1)` from a tuple of sort `(n, ar f)`.
    Fun,
    /// `⟨⟩ : (n,0)`.
    EmptyTuple,
    /// `⟨t1,..,tm⟩ : (n,m)` from `t1 : (n,1)` and `⟨t2..tm⟩ : (n,m-1)`.
    Tuple,
    Top,
    Pred,
    Exists,
    Eq,
    And,
}

impl fmt::Display for SortRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SortRule::Var => "(V)",
            SortRule::Fun => "(Σ)",
            SortRule::EmptyTuple => "(⟨⟩)",
            SortRule::Tuple => "(⟨…⟩)",
            SortRule::Top => "(⊤)",
            SortRule::Pred => "(Pred)",
            SortRule::Exists => "(∃)",
            SortRule::Eq => "(=)",
            SortRule::And => "(∧)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error in rule {rule} at byte {pos}: {msg}")]
    Sort { rule: SortRule, pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("sort mismatch: cannot compose a tuple into {left} with a tuple from {right}")]
    SortMismatch { left: usize, right: usize },
    #[error("symbol `{symbol}` of arity {arity} mapped to a tuple of sort ({dom},{cod})")]
    ArityMismatch { symbol: String, arity: usize, dom: usize, cod: usize },
}

/// A term over positional variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `x_i`, 1-based.
    Var(usize),
    App(Arc<str>, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        assert!(i >= 1, "variables are 1-based");
        Term::Var(i)
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    /// Largest variable index occurring, 0 for closed terms.
    pub fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::App(_, args) => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    /// Height of the syntax tree; variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Simultaneous substitution `self[s1..sm / x1..xm]`.
    ///
    /// # Panics
    /// Panics if the term mentions a variable beyond `subst.len()`.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Var(i) => subst[i - 1].clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(subst)).collect()),
        }
    }

    /// Variable indices (1-based) in left-to-right leaf order.
    pub fn occurrences(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::App(_, args) => args.iter().for_each(|a| a.occurrences(out)),
        }
    }

    /// Checks the term against a signature in context `n`, returning its sort derivation.
    pub fn sort_check(&self, sig: &Signature, n: usize) -> Result<SortTree, LogicError> {
        match self {
            Term::Var(i) => {
                if *i == 0 || *i > n {
                    return Err(LogicError::Sort {
                        rule: SortRule::Var,
                        pos: 0,
                        msg: format!("x{i} is not in context {n}"),
                    });
                }
                Ok(SortTree::leaf(SortRule::Var, n, 1))
            }
            Term::App(f, args) => {
                let arity = sig
                    .function_arity(f)
                    .ok_or_else(|| LogicError::UnknownSymbol { name: f.to_string(), pos: 0 })?;
                if arity != args.len() {
                    return Err(LogicError::Sort {
                        rule: SortRule::Fun,
                        pos: 0,
                        msg: format!("`{f}` has arity {arity} but got {} arguments", args.len()),
                    });
                }
                let tuple = tuple_tree(sig, args, n)?;
                Ok(SortTree { rule: SortRule::Fun, sort: (n, 1), premises: vec![tuple] })
            }
        }
    }
}

fn tuple_tree(sig: &Signature, terms: &[Term], n: usize) -> Result<SortTree, LogicError> {
    match terms.split_first() {
        None => Ok(SortTree::leaf(SortRule::EmptyTuple, n, 0)),
        Some((first, rest)) => {
            let head = first.sort_check(sig, n)?;
            let tail = tuple_tree(sig, rest, n)?;
            Ok(SortTree { rule: SortRule::Tuple, sort: (n, terms.len()), premises: vec![head, tail] })
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A derivation tree for a sort judgement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortTree {
    pub rule: SortRule,
    pub sort: (usize, usize),
    pub premises: Vec<SortTree>,
}

impl SortTree {
    fn leaf(rule: SortRule, n: usize, m: usize) -> SortTree {
        SortTree { rule, sort: (n, m), premises: vec![] }
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(SortTree::size).sum::<usize>()
    }
}

/// A morphism `n -> m` of the Lawvere theory: `⟨t1..tm⟩` over `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermTuple {
    dom: usize,
    terms: Vec<Term>,
}

impl TermTuple {
    /// Builds a tuple, checking that every variable lies in `x1..x_dom`.
    pub fn new(dom: usize, terms: Vec<Term>) -> Result<TermTuple, LogicError> {
        if let Some(t) = terms.iter().find(|t| t.max_var() > dom) {
            return Err(LogicError::Sort {
                rule: SortRule::Var,
                pos: 0,
                msg: format!("`{t}` mentions a variable outside context {dom}"),
            });
        }
        Ok(TermTuple { dom, terms })
    }

    /// Checks symbol arities as well as variables.
    pub fn checked(sig: &Signature, dom: usize, terms: Vec<Term>) -> Result<TermTuple, LogicError> {
        tuple_tree(sig, &terms, dom)?;
        Ok(TermTuple { dom, terms })
    }

    /// `⟨x1..xn⟩ : n -> n`.
    pub fn identity(n: usize) -> TermTuple {
        TermTuple { dom: n, terms: (1..=n).map(Term::Var).collect() }
    }

    /// `⟨x1..xn, x1..xn⟩ : n -> 2n`.
    pub fn duplicator(n: usize) -> TermTuple {
        TermTuple { dom: n, terms: (1..=n).chain(1..=n).map(Term::Var).collect() }
    }

    /// `⟨⟩ : n -> 0`.
    pub fn discharger(n: usize) -> TermTuple {
        TermTuple { dom: n, terms: vec![] }
    }

    /// Projection `n -> |indices|` picking `x_{i}` for each (1-based) index.
    pub fn projection(n: usize, indices: &[usize]) -> Result<TermTuple, LogicError> {
        TermTuple::new(n, indices.iter().map(|&i| Term::Var(i)).collect())
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn sort_tree(&self, sig: &Signature) -> Result<SortTree, LogicError> {
        tuple_tree(sig, &self.terms, self.dom)
    }
}

impl fmt::Display for TermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "> : {} -> {}", self.dom, self.terms.len())
    }
}

/// Composition in diagrammatic order: `t : n -> m` then `s : m -> l`.
pub fn compose_tuples(t: &TermTuple, s: &TermTuple) -> Result<TermTuple, LogicError> {
    if t.cod() != s.dom() {
        return Err(LogicError::SortMismatch { left: t.cod(), right: s.dom() });
    }
    Ok(TermTuple { dom: t.dom, terms: s.terms.iter().map(|u| u.substitute(&t.terms)).collect() })
}

/// `Some(⟨t⟩)` exactly when the pair is `⟨t, t⟩`, i.e. it factors through the diagonal.
pub fn factor_through_diagonal(pair: &TermTuple) -> Option<TermTuple> {
    match pair.terms() {
        [a, b] if a == b => Some(TermTuple { dom: pair.dom, terms: vec![a.clone()] }),
        _ => None,
    }
}

/// A regular formula. Contexts are tracked outside the AST.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Pred(Arc<str>, Vec<Term>),
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    /// Binds the variable one past the current context.
    Exists(Box<Formula>),
}

impl Formula {
    pub fn pred(p: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(p.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(body: Formula) -> Formula {
        Formula::Exists(Box::new(body))
    }

    /// Height of the syntax tree, counting term structure; `⊤` has depth 0 and
    /// an atom is one more than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top => 0,
            Formula::Pred(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            Formula::Eq(a, b) => 1 + a.depth().max(b.depth()),
            Formula::And(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Exists(a) => 1 + a.depth(),
        }
    }

    /// Sort derivation in context `n`.
    pub fn sort_check(&self, sig: &Signature, n: usize) -> Result<SortTree, LogicError> {
        match self {
            Formula::Top => Ok(SortTree::leaf(SortRule::Top, n, 0)),
            Formula::Pred(p, args) => {
                let arity = sig
                    .predicate_arity(p)
                    .ok_or_else(|| LogicError::UnknownSymbol { name: p.to_string(), pos: 0 })?;
                if arity != args.len() {
                    return Err(LogicError::Sort {
                        rule: SortRule::Pred,
                        pos: 0,
                        msg: format!("`{p}` has arity {arity} but got {} arguments", args.len()),
                    });
                }
                let tuple = tuple_tree(sig, args, n)?;
                Ok(SortTree { rule: SortRule::Pred, sort: (n, 0), premises: vec![tuple] })
            }
            Formula::Eq(a, b) => {
                let tuple = tuple_tree(sig, &[a.clone(), b.clone()], n)?;
                Ok(SortTree { rule: SortRule::Eq, sort: (n, 0), premises: vec![tuple] })
            }
            Formula::And(a, b) => Ok(SortTree {
                rule: SortRule::And,
                sort: (n, 0),
                premises: vec![a.sort_check(sig, n)?, b.sort_check(sig, n)?],
            }),
            Formula::Exists(a) => Ok(SortTree {
                rule: SortRule::Exists,
                sort: (n, 0),
                premises: vec![a.sort_check(sig, n + 1)?],
            }),
        }
    }

    /// Substitutes a tuple `t : n -> m` into a formula of context `m`, giving context `n`.
    pub fn substitute(&self, t: &TermTuple) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| a.substitute(&t.terms)).collect()),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(&t.terms), b.substitute(&t.terms)),
            Formula::And(a, b) => Formula::and(a.substitute(t), b.substitute(t)),
            Formula::Exists(a) => {
                let mut terms = t.terms.clone();
                terms.push(Term::Var(t.dom + 1));
                a.substitute(&TermTuple { dom: t.dom + 1, terms }).pipe(Formula::exists)
            }
        }
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, n: usize) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "T"),
            Formula::Pred(p, args) if args.is_empty() => write!(f, "{p}"),
            Formula::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::And(a, b) => {
                // `&` associates to the right and a quantifier body extends as
                // far as possible, so only the left operand may need brackets.
                if matches!(**a, Formula::Exists(_) | Formula::And(..)) {
                    write!(f, "(")?;
                    a.fmt_in(f, n)?;
                    write!(f, ")")?;
                } else {
                    a.fmt_in(f, n)?;
                }
                write!(f, " & ")?;
                b.fmt_in(f, n)
            }
            Formula::Exists(a) => {
                write!(f, "exists x{}. ", n + 1)?;
                a.fmt_in(f, n + 1)
            }
        }
    }

    /// Renders in the concrete syntax for context `n`.
    pub fn display(&self, n: usize) -> FormulaDisplay<'_> {
        FormulaDisplay { formula: self, context: n }
    }
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}

impl<S> Pipe for S {}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    context: usize,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt_in(f, self.context)
    }
}

/// A formula together with its context and sort derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedFormula {
    pub context: usize,
    pub formula: Formula,
    pub derivation: SortTree,
}

impl SortedFormula {
    pub fn new(sig: &Signature, context: usize, formula: Formula) -> Result<SortedFormula, LogicError> {
        let derivation = formula.sort_check(sig, context)?;
        Ok(SortedFormula { context, formula, derivation })
    }
}

impl fmt::Display for SortedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt_in(f, self.context)
    }
}

/// A strict cartesian functor between Lawvere theories induced by sending each
/// function symbol `f` of arity `m` to a term over `x1..xm`.
///
/// Symbols without an image are sent to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TupleFunctor {
    images: BTreeMap<String, Term>,
}

/// Builds a functor from symbol images; each image must have sort `(ar f, 1)`.
pub fn signature_functor(
    source: &Signature,
    mapping: &BTreeMap<String, TermTuple>,
) -> Result<TupleFunctor, LogicError> {
    let mut images = BTreeMap::new();
    for (name, tuple) in mapping {
        let arity = source
            .function_arity(name)
            .ok_or_else(|| LogicError::UnknownSymbol { name: name.clone(), pos: 0 })?;
        if tuple.dom() != arity || tuple.cod() != 1 {
            return Err(LogicError::ArityMismatch {
                symbol: name.clone(),
                arity,
                dom: tuple.dom(),
                cod: tuple.cod(),
            });
        }
        images.insert(name.clone(), tuple.terms()[0].clone());
    }
    Ok(TupleFunctor { images })
}

impl TupleFunctor {
    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(i) => Term::Var(*i),
            Term::App(f, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.apply_term(a)).collect();
                match self.images.get(&**f) {
                    Some(image) => image.substitute(&args),
                    None => Term::App(f.clone(), args),
                }
            }
        }
    }

    pub fn apply(&self, t: &TermTuple) -> TermTuple {
        TermTuple { dom: t.dom, terms: t.terms.iter().map(|u| self.apply_term(u)).collect() }
    }
}
