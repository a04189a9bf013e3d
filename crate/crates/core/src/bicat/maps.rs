//! Maps of `Bicat_P`, unique choice and comprehensive diagonals.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Arrow, FinBicat};
use crate::doctrine::{Budget, Doctrine, DoctrineError, Elem, Mor, Obj, Side};
use crate::report::Report;
use crate::sweep::{sweep, tuples, Dim, Test};

/// Whether `R ∈ P(X×Y)` is a map of `Bicat_P`: `∃_{π1}(R) = ⊤` and
/// `P_{⟨π1,π2⟩}(R) ∧ P_{⟨π1,π3⟩}(R) ≤ P_{⟨π2,π3⟩}(δ_Y)` on `X×(Y×Y)`.
pub fn is_map(p: &dyn Doctrine, x: &Obj, y: &Obj, r: &Elem) -> Result<bool, DoctrineError> {
    let b = p.base();
    let xy = b.product(x, y)?;
    let fx = p.fiber(x)?;
    if !fx.leq(&fx.top(), &p.exists(&xy, Side::First, r)?) {
        return Ok(false);
    }
    let yy = b.product(y, y)?;
    let xyy = b.product(x, &yy)?;
    let n = y.card();
    let p12 = Mor::from_fn(&xyy, &xy, |i| (i / (n * n)) * n + (i % (n * n)) / n);
    let p13 = Mor::from_fn(&xyy, &xy, |i| (i / (n * n)) * n + i % n);
    let p23 = b.proj2(x, &yy);
    let f = p.fiber(&xyy)?;
    let lhs = f.meet(&p.reindex(&p12, r)?, &p.reindex(&p13, r)?);
    Ok(f.leq(&lhs, &p.reindex(&p23, &p.delta(y)?)?))
}

/// All morphisms `x → y`, refusing hom-sets larger than `cap`.
pub(crate) fn hom_list(p: &dyn Doctrine, x: &Obj, y: &Obj, cap: u64) -> Result<Vec<Mor>, DoctrineError> {
    let b = p.base();
    let n = b.hom_count(x, y)?.filter(|&n| n <= cap).ok_or_else(|| {
        DoctrineError::SizeBudgetExceeded(format!("too many morphisms {x} → {y}"))
    })?;
    (0..n).map(|k| b.hom_nth(x, y, k)).collect()
}

/// Graphs of all morphisms `x → y`, with one morphism per graph.
pub(crate) fn graphs(p: &Arc<dyn Doctrine>, x: &Obj, y: &Obj, cap: u64) -> Result<HashMap<Elem, Mor>, DoctrineError> {
    let bicat = FinBicat::of_doctrine(p.clone());
    let mut out = HashMap::new();
    for f in hom_list(&**p, x, y, cap)? {
        out.entry(bicat.graph(&f)?.elem).or_insert(f);
    }
    Ok(out)
}

fn pairs(p: &dyn Doctrine) -> Vec<Vec<Obj>> {
    tuples(p.base().objects(), 2)
}

/// Map detection on the given objects: the maps of `Bicat_P` are exactly the
/// graphs of base morphisms, graphs are maps, and the map condition agrees
/// with the comonoid-homomorphism equations computed in `Bicat_P`.
pub fn check_map_detection(p: &Arc<dyn Doctrine>, objects: &[Obj], budget: &Budget) -> Report {
    let mut report = Report::new(format!("maps of Bicat({})", p.name()));
    let inst = tuples(objects, 2);
    let base = p.base();
    let bicat = FinBicat::of_doctrine(p.clone());
    report.push(sweep("maps.are_graphs", base, &inst, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let g = graphs(p, &x, &y, budget.cap)?;
        let dims = vec![Dim::Fiber(p.fiber(&base.product(&x, &y)?)?)];
        let test: Test = Box::new(move |k| {
            let r = k[0].elem();
            let m = is_map(&**p, &x, &y, r)?;
            Ok((m != g.contains_key(r)).then(|| {
                let what = if m { "a map that is no graph" } else { "a graph that is no map" };
                format!("{}: {what} in Hom({x}, {y})", p.show(&Obj::prod(&x, &y), r))
            }))
        });
        Ok((dims, test))
    }));
    report.push(sweep("maps.graphs_are_maps", base, &inst, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let dims = vec![Dim::Hom(x.clone(), y.clone())];
        let bicat = bicat.clone();
        let test: Test = Box::new(move |k| {
            let f = k[0].mor();
            let g = bicat.graph(f)?;
            Ok((!is_map(&**p, &x, &y, &g.elem)?).then(|| format!("Γ({f}) is not a map")))
        });
        Ok((dims, test))
    }));
    report.push(sweep("maps.comonoid_homomorphisms", base, &inst, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let dims = vec![Dim::Fiber(p.fiber(&base.product(&x, &y)?)?)];
        let bicat = bicat.clone();
        let test: Test = Box::new(move |k| {
            let r = Arrow::new(&x, &y, k[0].elem().clone());
            let (a, b) = (is_map(&**p, &x, &y, &r.elem)?, bicat.is_comonoid_hom(&r)?);
            Ok((a != b).then(|| format!("{}: map condition {a}, comonoid equations {b}", bicat.show(&r))))
        });
        Ok((dims, test))
    }));
    report
}

/// `⊤ ≤ P_{⟨id,f⟩}(R)`.
fn chooses(p: &dyn Doctrine, f: &Mor, r: &Elem) -> Result<bool, DoctrineError> {
    let b = p.base();
    let pair = b.id(f.dom()).pair(f);
    let fx = p.fiber(f.dom())?;
    Ok(fx.leq(&fx.top(), &p.reindex(&pair, r)?))
}

/// Rule of unique choice: every map `R : X → Y` of `Bicat_P` has a base
/// morphism `f` with `⊤ ≤ P_{⟨id,f⟩}(R)`. Also checks that such an `f`
/// exists exactly when `R` is the graph of a base morphism.
pub fn check_ruc(p: &Arc<dyn Doctrine>, budget: &Budget) -> Report {
    let mut report = Report::new(format!("rule of unique choice for {}", p.name()));
    let base = p.base();
    let inst = pairs(&**p);
    let build = |o: &Vec<Obj>, cross: bool| -> Result<(Vec<Dim>, Test<'_>), DoctrineError> {
        let (x, y) = (o[0].clone(), o[1].clone());
        let homs = hom_list(&**p, &x, &y, budget.cap)?;
        let g = if cross { graphs(p, &x, &y, budget.cap)? } else { HashMap::new() };
        let dims = vec![Dim::Fiber(p.fiber(&base.product(&x, &y)?)?)];
        let test: Test = Box::new(move |k| {
            let r = k[0].elem();
            if !is_map(&**p, &x, &y, r)? {
                return Ok(None);
            }
            let mut witness = None;
            for f in &homs {
                if chooses(&**p, f, r)? {
                    witness = Some(f);
                    break;
                }
            }
            let shown = p.show(&Obj::prod(&x, &y), r);
            if !cross {
                return Ok(witness.is_none().then(|| format!("map {shown} : {x} → {y} has no base morphism")));
            }
            Ok((witness.is_some() != g.contains_key(r)).then(|| {
                format!("map {shown}: choice witness {}, graph {}", witness.is_some(), g.contains_key(r))
            }))
        });
        Ok((dims, test))
    };
    report.push(sweep("ruc", base, &inst, budget, |o| build(o, false)));
    report.push(sweep("ruc.choice_iff_graph", base, &inst, budget, |o| build(o, true)));
    report
}

/// Comprehensive diagonals: every `h : Z → A×A` with `⊤ ≤ P_h(δ_A)` is
/// `h' ; Δ_A` for exactly one `h' : Z → A`.
pub fn check_comprehensive_diagonals(p: &Arc<dyn Doctrine>, budget: &Budget) -> Report {
    let mut report = Report::new(format!("comprehensive diagonals for {}", p.name()));
    let base = p.base();
    let inst = pairs(&**p);
    report.push(sweep("comprehensive_diagonals", base, &inst, budget, |o| {
        let (z, a) = (o[0].clone(), o[1].clone());
        let aa = base.product(&a, &a)?;
        let diag = base.diagonal(&a);
        let mut through: HashMap<Mor, usize> = HashMap::new();
        for h in hom_list(&**p, &z, &a, budget.cap)? {
            *through.entry(h.then(&diag)).or_default() += 1;
        }
        let delta = p.delta(&a)?;
        let fz = p.fiber(&z)?;
        let dims = vec![Dim::Hom(z.clone(), aa)];
        let test: Test = Box::new(move |k| {
            let h = k[0].mor();
            if !fz.leq(&fz.top(), &p.reindex(h, &delta)?) {
                return Ok(None);
            }
            let n = through.get(h).copied().unwrap_or(0);
            Ok((n != 1).then(|| format!("{h} satisfies δ_{a} but factors through Δ_{a} in {n} ways")))
        });
        Ok((dims, test))
    }));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::{BaseCategory, PowersetDoctrine};

    fn pow(depth: usize) -> Arc<dyn Doctrine> {
        Arc::new(PowersetDoctrine::new(Arc::new(BaseCategory::build(&[2], depth).unwrap())))
    }

    #[test]
    fn map_condition_on_small_relations() {
        let p = pow(1);
        let a = p.base().atom(0);
        let r = |bits: &[usize]| Elem::from_bits(4, bits.iter().copied());
        // {(0,0),(1,0)} is the constant function 0
        assert!(is_map(&*p, &a, &a, &r(&[0, 2])).unwrap());
        // {(0,0),(0,1)} is not single valued, {(0,0)} is not total
        assert!(!is_map(&*p, &a, &a, &r(&[0, 1])).unwrap());
        assert!(!is_map(&*p, &a, &a, &r(&[0])).unwrap());
    }

    #[test]
    fn powerset_has_unique_choice_and_comprehensive_diagonals() {
        let p = pow(1);
        let b = Budget::default();
        for r in [check_ruc(&p, &b), check_comprehensive_diagonals(&p, &b)] {
            assert!(r.passed(), "{}", r.to_text());
        }
        let objects: Vec<Obj> = p.base().objects().iter().filter(|o| o.card() <= 2).cloned().collect();
        let r = check_map_detection(&p, &objects, &b);
        assert!(r.passed() && r.checks.iter().all(|c| c.exhaustive()), "{}", r.to_text());
    }
}
