//! Finite elementary existential doctrines.
//!
//! A doctrine assigns to each object `X` of a finite base category a fiber
//! `P(X)`, to each morphism `f : X → Y` a reindexing `P_f : P(Y) → P(X)`, to
//! each object `A` an equality predicate `δ_A ∈ P(A×A)`, and to each product
//! projection a left adjoint `∃` of its reindexing.

mod base;
mod corrupt;
mod fiber;
mod functor;
mod object;
mod powerset;
pub mod samples;
mod table;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use base::{BaseCategory, CloneBase, CloneOps, Mor, MorphismClass, Operation, DEFAULT_MAX_CARD};
pub use corrupt::CorruptedExists;
pub use fiber::{Elem, Fiber, FinPoset};
pub use functor::{CartesianFunctor, ComposedDoctrine};
pub use object::{Atom, Obj, ObjKind};
pub use powerset::PowersetDoctrine;
pub use table::{doctrine_from_file, export_doctrine, TableDoctrine};
pub use validate::{validate_doctrine, Budget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoctrineError {
    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("object {0} is not available in this base")]
    ObjectOutOfDepth(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing table: {0}")]
    MissingTable(String),
    #[error("reindexing is not monotone: {0}")]
    NonMonotoneReindexing(String),
    #[error("functor is not strict cartesian: {0}")]
    NotStrictCartesian(String),
    #[error("not a morphism of the base: {0}")]
    NotAMorphism(String),
    #[error("element does not belong to the fiber: {0}")]
    FiberMismatch(String),
}

/// Which projection of a product `X×Y`: `π1 : X×Y → X` or `π2 : X×Y → Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::First => "π1",
            Side::Second => "π2",
        })
    }
}

/// An elementary existential doctrine over a finite base.
pub trait Doctrine: Send + Sync {
    fn name(&self) -> String;

    fn base(&self) -> &BaseCategory;

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError>;

    /// `P_f : P(cod f) → P(dom f)`.
    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError>;

    /// `δ_A ∈ P(A×A)`.
    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError>;

    /// `∃` along the projection `side` out of the product object `prod`.
    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError>;

    /// Renders an element of `P(x)`.
    fn show(&self, x: &Obj, a: &Elem) -> String {
        match self.fiber(x) {
            Ok(f) => f.show(a, |i| x.show(i)),
            Err(_) => format!("{a:?}"),
        }
    }
}

/// The factors of a product object, or an error naming it.
pub(crate) fn factors(prod: &Obj) -> Result<(Obj, Obj), DoctrineError> {
    prod.factors()
        .map(|(x, y)| (x.clone(), y.clone()))
        .ok_or_else(|| DoctrineError::ObjectOutOfDepth(format!("{prod} is not a product")))
}

/// `∃_e(α)` for `e = id_X × Δ_A : X×A → X×(A×A)`, given by
/// `P_{⟨π1,π2⟩}(α) ∧ P_{⟨π2,π3⟩}(δ_A)`.
pub fn exists_elementary(p: &dyn Doctrine, x: &Obj, a: &Obj, alpha: &Elem) -> Result<Elem, DoctrineError> {
    let b = p.base();
    let aa = b.product(a, a)?;
    let xaa = b.product(x, &aa)?;
    let xa = b.product(x, a)?;
    let n = a.card();
    let p12 = Mor::from_fn(&xaa, &xa, |i| (i / (n * n)) * n + (i % (n * n)) / n);
    let p23 = b.proj2(x, &aa);
    let fiber = p.fiber(&xaa)?;
    Ok(fiber.meet(&p.reindex(&p12, alpha)?, &p.reindex(&p23, &p.delta(a)?)?))
}

/// `id_X × Δ_A : X×A → X×(A×A)`.
pub fn elementary_map(p: &dyn Doctrine, x: &Obj, a: &Obj) -> Result<Mor, DoctrineError> {
    let b = p.base();
    Ok(b.id(x).times(&b.diagonal(a)))
}

/// `∃_{Δ_A}(α) = P_{π1}(α) ∧ δ_A`.
pub fn exists_diagonal(p: &dyn Doctrine, a: &Obj, alpha: &Elem) -> Result<Elem, DoctrineError> {
    let b = p.base();
    let aa = b.product(a, a)?;
    let fiber = p.fiber(&aa)?;
    Ok(fiber.meet(&p.reindex(&b.proj1(a, a), alpha)?, &p.delta(a)?))
}

/// `∃` along `π_side : X×Y → X` or `Y`, building the product in the base.
pub fn exists_along(p: &dyn Doctrine, x: &Obj, y: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
    let prod = p.base().product(x, y)?;
    p.exists(&prod, side, a)
}
