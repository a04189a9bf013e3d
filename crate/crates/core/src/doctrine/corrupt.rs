//! A doctrine with one altered value of `∃`, used as a negative control.

use std::sync::Arc;

use super::{BaseCategory, Doctrine, DoctrineError, Elem, Fiber, Mor, Obj, Side};

/// Behaves like `inner` except that `∃ side` on `product` sends `input` (or
/// every element, when `input` is `None`) to `output`.
pub struct CorruptedExists {
    inner: Arc<dyn Doctrine>,
    product: Obj,
    side: Side,
    input: Option<Elem>,
    output: Elem,
}

impl CorruptedExists {
    pub fn new(inner: Arc<dyn Doctrine>, product: Obj, side: Side, input: Elem, output: Elem) -> CorruptedExists {
        CorruptedExists { inner, product, side, input: Some(input), output }
    }

    pub fn constant(inner: Arc<dyn Doctrine>, product: Obj, side: Side, output: Elem) -> CorruptedExists {
        CorruptedExists { inner, product, side, input: None, output }
    }
}

impl Doctrine for CorruptedExists {
    fn name(&self) -> String {
        format!("{} (∃ {} on {} altered)", self.inner.name(), self.side, self.product)
    }

    fn base(&self) -> &BaseCategory {
        self.inner.base()
    }

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError> {
        self.inner.fiber(x)
    }

    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError> {
        self.inner.reindex(f, a)
    }

    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError> {
        self.inner.delta(a)
    }

    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
        if *prod == self.product && side == self.side && self.input.as_ref().is_none_or(|i| i == a) {
            return Ok(self.output.clone());
        }
        self.inner.exists(prod, side, a)
    }

    fn show(&self, x: &Obj, a: &Elem) -> String {
        self.inner.show(x, a)
    }
}
