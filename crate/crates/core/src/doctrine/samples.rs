//! Doctrines over clone bases whose graph functor is not full, or neither
//! full nor faithful.
//!
//! `N` is the clone generated by negation on `{0,1}` and `K` the clone of the
//! Klein group acting on `{0,1,2,3}` by `g1 = x⊕2` and `g2 = x⊕1`. The functor
//! `collapse : K → N` sends both generators to negation, and
//! `lift_i : N → K` sends negation to `g_i`, so `collapse ∘ lift_i = id`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BaseCategory, CartesianFunctor, ComposedDoctrine, Doctrine, DoctrineError, Operation, PowersetDoctrine};

fn op(name: &str, table: Vec<u32>) -> Operation {
    Operation { name: name.into(), arity: 1, table }
}

fn neg() -> Operation {
    op("neg", vec![1, 0])
}

fn g1() -> Operation {
    op("g1", vec![2, 3, 0, 1])
}

fn g2() -> Operation {
    op("g2", vec![1, 0, 3, 2])
}

pub fn negation_clone(depth: usize) -> Result<Arc<BaseCategory>, DoctrineError> {
    Ok(Arc::new(BaseCategory::clone_base(2, vec![neg()], depth, "A")?))
}

pub fn klein_clone(depth: usize) -> Result<Arc<BaseCategory>, DoctrineError> {
    Ok(Arc::new(BaseCategory::clone_base(4, vec![g1(), g2()], depth, "A")?))
}

/// The inclusion of `N` into all functions on `{0,1}`.
pub fn inclusion(depth: usize) -> Result<CartesianFunctor, DoctrineError> {
    let sets = Arc::new(BaseCategory::build(&[2], depth)?);
    let images = BTreeMap::from([("neg".to_string(), neg())]);
    CartesianFunctor::on_generators("incl", negation_clone(depth)?, sets, 0, images)
}

pub fn collapse(source: Arc<BaseCategory>, target: Arc<BaseCategory>) -> Result<CartesianFunctor, DoctrineError> {
    let images = BTreeMap::from([("g1".to_string(), neg()), ("g2".to_string(), neg())]);
    CartesianFunctor::on_generators("collapse", source, target, 0, images)
}

/// `lift_1` or `lift_2`.
pub fn lift(which: usize, source: Arc<BaseCategory>, target: Arc<BaseCategory>) -> Result<CartesianFunctor, DoctrineError> {
    let image = match which {
        1 => g1(),
        2 => g2(),
        _ => return Err(DoctrineError::NotStrictCartesian(format!("no generator g{which}"))),
    };
    let images = BTreeMap::from([("neg".to_string(), Operation { name: "neg".into(), ..image })]);
    CartesianFunctor::on_generators(&format!("lift{which}"), source, target, 0, images)
}

/// Subsets read over `N`: every function on `{0,1}` is a map of its
/// bicategory, but only the identity and negation are base morphisms, so unique
/// choice fails.
pub fn pow_over_negation(depth: usize) -> Result<ComposedDoctrine, DoctrineError> {
    let incl = Arc::new(inclusion(depth)?);
    let pow: Arc<dyn Doctrine> = Arc::new(PowersetDoctrine::new(incl.target().clone()));
    ComposedDoctrine::new(pow, incl)
}

/// [`pow_over_negation`] read over `K` along `collapse`. Γ identifies `g1` and
/// `g2`, and `⟨g1,g2⟩` satisfies equality without factoring through a
/// diagonal.
pub fn pow_over_klein(depth: usize) -> Result<ComposedDoctrine, DoctrineError> {
    let inner = pow_over_negation(depth)?;
    let q = Arc::new(collapse(klein_clone(depth)?, inner.base_arc())?);
    ComposedDoctrine::new(Arc::new(inner), q)
}
