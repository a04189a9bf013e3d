//! The powerset doctrine: `P(X)` is the set of subsets of `X`.

use std::sync::Arc;

use super::{factors, BaseCategory, Doctrine, DoctrineError, Elem, Fiber, Mor, Obj, Side};

#[derive(Debug, Clone)]
pub struct PowersetDoctrine {
    base: Arc<BaseCategory>,
}

impl PowersetDoctrine {
    pub fn new(base: Arc<BaseCategory>) -> PowersetDoctrine {
        PowersetDoctrine { base }
    }

    fn check(&self, x: &Obj) -> Result<(), DoctrineError> {
        if self.base.contains(x) {
            Ok(())
        } else {
            Err(DoctrineError::ObjectOutOfDepth(x.to_string()))
        }
    }
}

impl Doctrine for PowersetDoctrine {
    fn name(&self) -> String {
        "pow".into()
    }

    fn base(&self) -> &BaseCategory {
        &self.base
    }

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError> {
        self.check(x)?;
        Ok(Fiber::Powerset { width: x.card() })
    }

    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError> {
        let t = f.table();
        Ok(Elem::from_predicate(t.len(), |x| a.get(t[x] as usize)))
    }

    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError> {
        let aa = self.base.product(a, a)?;
        Ok(Elem::from_bits(aa.card(), (0..a.card()).map(|i| i * a.card() + i)))
    }

    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
        let (x, y) = factors(prod)?;
        let m = y.card();
        Ok(match side {
            Side::First => Elem::from_bits(x.card(), a.ones_iter().map(|i| i / m)),
            Side::Second => Elem::from_bits(m, a.ones_iter().map(|i| i % m)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_and_quantifier() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let p = PowersetDoctrine::new(base.clone());
        let a = base.atom(0);
        let aa = base.product(&a, &a).unwrap();
        let delta = p.delta(&a).unwrap();
        assert_eq!(p.show(&aa, &delta), "{(0,0),(1,1)}");
        // S = {(0,1)} ⊆ X×A, ∃ along π2 gives {1}.
        let s = Elem::from_bits(4, [1]);
        assert_eq!(p.exists(&aa, Side::Second, &s).unwrap(), Elem::from_bits(2, [1]));
        let top_i = p.fiber(&base.unit()).unwrap().top();
        assert_eq!(p.reindex(&base.bang(&a), &top_i).unwrap(), Elem::ones(2));
    }
}
