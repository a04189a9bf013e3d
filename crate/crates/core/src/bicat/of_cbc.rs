//! The doctrine `R(B) = Hom_B(−, I)` of a finite cartesian bicategory.
//!
//! Its base is the base category of `B`, acting on `B` through the graph
//! functor: reindexing along `f` precomposes with `Γ(f)`. For the relation
//! truncation this is exactly the category of maps.

use super::{Arrow, FinBicat};
use crate::doctrine::{BaseCategory, Doctrine, DoctrineError, Elem, Fiber, Mor, Obj, Side};

#[derive(Debug, Clone)]
pub struct CbcDoctrine {
    bicat: FinBicat,
}

pub fn doctrine_of_cbc(bicat: FinBicat) -> CbcDoctrine {
    CbcDoctrine { bicat }
}

impl CbcDoctrine {
    pub fn bicat(&self) -> &FinBicat {
        &self.bicat
    }

    fn unit(&self) -> Obj {
        self.bicat.base().unit()
    }

    fn arrow(&self, x: &Obj, a: &Elem) -> Arrow {
        Arrow::new(x, &self.unit(), a.clone())
    }
}

impl Doctrine for CbcDoctrine {
    fn name(&self) -> String {
        format!("R({})", self.bicat.name())
    }

    fn base(&self) -> &BaseCategory {
        self.bicat.base()
    }

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError> {
        self.bicat.hom(x, &self.unit())
    }

    /// `Γ(f) ; U`.
    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError> {
        Ok(self.bicat.compose(&self.bicat.graph(f)?, &self.arrow(f.cod(), a))?.elem)
    }

    /// The cap on `A`.
    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError> {
        Ok(self.bicat.cap(a)?.elem)
    }

    /// Precomposes with the codiscard on the eliminated factor:
    /// `Γ(ρ⁻¹_X) ; (id_X ⊗ codiscard_Y) ; U` for `π1`, and
    /// `Γ(λ⁻¹_Y) ; (codiscard_X ⊗ id_Y) ; U` for `π2`.
    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
        let (x, y) = prod.factors().ok_or_else(|| DoctrineError::ObjectOutOfDepth(format!("{prod} is not a product")))?;
        let (b, base) = (&self.bicat, self.bicat.base());
        let (unitor, middle) = match side {
            Side::First => (base.rho_inv(x), b.tensor(&b.identity(x)?, &b.codiscard(y)?)?),
            Side::Second => (base.lambda_inv(y), b.tensor(&b.codiscard(x)?, &b.identity(y)?)?),
        };
        let pre = b.compose(&b.graph(&unitor)?, &middle)?;
        Ok(b.compose(&pre, &self.arrow(prod, a))?.elem)
    }

    fn show(&self, x: &Obj, a: &Elem) -> String {
        self.bicat.show(&self.arrow(x, a))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::doctrine::{validate_doctrine, Budget};

    #[test]
    fn rel_truncation_gives_an_elementary_existential_doctrine() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let r = doctrine_of_cbc(FinBicat::rel_truncation(base.clone()));
        let a = base.atom(0);
        let aa = Obj::prod(&a, &a);
        assert_eq!(r.show(&aa, &r.delta(&a).unwrap()), "{((0,0),•),((1,1),•)}");
        let report = validate_doctrine(&r, &Budget::default());
        assert!(report.passed(), "{}", report.to_text());
    }
}
