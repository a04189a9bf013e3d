//! Checks of the doctrine laws on every listed object of the base.

use super::{exists_diagonal, exists_elementary, elementary_map, Doctrine, DoctrineError, Elem, Mor, Obj, Side};
use crate::report::Report;
use crate::sweep::{sweep, tuples, Dim, Test};

pub use crate::sweep::Budget;

type Built<'a> = Result<(Vec<Dim>, Test<'a>), DoctrineError>;

fn fail(holds: bool, witness: impl FnOnce() -> String) -> Result<Option<String>, DoctrineError> {
    Ok((!holds).then(witness))
}

fn sides(objs: &[Obj], k: usize) -> Vec<(Vec<Obj>, Side)> {
    tuples(objs, k).into_iter().flat_map(|t| [(t.clone(), Side::First), (t, Side::Second)]).collect()
}

/// Checks functoriality, preservation of `⊤` and `∧`, the adjunctions
/// `∃ ⊣ P_π`, the elementary `∃` formulas, Beck-Chevalley, Frobenius
/// reciprocity and the derived laws on equality, over all listed objects.
pub fn validate_doctrine(p: &dyn Doctrine, budget: &Budget) -> Report {
    let base = p.base();
    let objs: Vec<Obj> = base.objects().to_vec();
    let mut report = Report::new(format!("validate doctrine {}", p.name()));
    let sh = |x: &Obj, e: &Elem| p.show(x, e);

    report.push(sweep("functor.identity", base, &tuples(&objs, 1), budget, |t| -> Built<'_> {
        let x = t[0].clone();
        let id = base.id(&x);
        Ok((vec![Dim::Fiber(p.fiber(&x)?)], Box::new(move |k| {
            let a = k[0].elem();
            fail(p.reindex(&id, a)? == *a, || format!("P_id{x}({}) ≠ itself", sh(&x, a)))
        })))
    }));

    report.push(sweep("functor.composition", base, &tuples(&objs, 3), budget, |t| -> Built<'_> {
        let (x, y, z) = (t[0].clone(), t[1].clone(), t[2].clone());
        let dims = vec![Dim::Hom(x.clone(), y.clone()), Dim::Hom(y, z.clone()), Dim::Fiber(p.fiber(&z)?)];
        Ok((dims, Box::new(move |k| {
            let (f, g, c) = (k[0].mor(), k[1].mor(), k[2].elem());
            let lhs = p.reindex(&f.then(g), c)?;
            let rhs = p.reindex(f, &p.reindex(g, c)?)?;
            fail(lhs == rhs, || format!("f = {f}, g = {g}, γ = {}: P_(f;g)γ = {}, P_f P_g γ = {}", sh(&z, c), sh(&x, &lhs), sh(&x, &rhs)))
        })))
    }));

    report.push(sweep("reindex.preserves_top_meet", base, &tuples(&objs, 2), budget, |t| -> Built<'_> {
        let (x, y) = (t[0].clone(), t[1].clone());
        let (fx, fy) = (p.fiber(&x)?, p.fiber(&y)?);
        let dims = vec![Dim::Hom(x.clone(), y.clone()), Dim::Fiber(fy.clone()), Dim::Fiber(fy.clone())];
        Ok((dims, Box::new(move |k| {
            let (f, a, b) = (k[0].mor(), k[1].elem(), k[2].elem());
            if p.reindex(f, &fy.top())? != fx.top() {
                return Ok(Some(format!("P_f(⊤) ≠ ⊤ for f = {f}")));
            }
            let lhs = p.reindex(f, &fy.meet(a, b))?;
            let rhs = fx.meet(&p.reindex(f, a)?, &p.reindex(f, b)?);
            fail(lhs == rhs, || format!("f = {f}, α = {}, β = {}: P_f(α∧β) = {}, P_fα ∧ P_fβ = {}", sh(&y, a), sh(&y, b), sh(&x, &lhs), sh(&x, &rhs)))
        })))
    }));

    report.push(sweep("exists.adjoint", base, &sides(&objs, 2), budget, |(t, side)| -> Built<'_> {
        let (x, y, side) = (t[0].clone(), t[1].clone(), *side);
        let prod = base.product(&x, &y)?;
        let target = if side == Side::First { x.clone() } else { y.clone() };
        let proj = if side == Side::First { base.proj1(&x, &y) } else { base.proj2(&x, &y) };
        let (fp, ft) = (p.fiber(&prod)?, p.fiber(&target)?);
        Ok((vec![Dim::Fiber(fp.clone()), Dim::Fiber(ft.clone())], Box::new(move |k| {
            let (b, a) = (k[0].elem(), k[1].elem());
            let left = ft.leq(&p.exists(&prod, side, b)?, a);
            let right = fp.leq(b, &p.reindex(&proj, a)?);
            fail(left == right, || {
                format!("∃{side} on {prod}: β = {}, α = {}: ∃β ≤ α is {left} but β ≤ P_π α is {right}", sh(&prod, b), sh(&target, a))
            })
        })))
    }));

    report.push(sweep("exists.elementary", base, &tuples(&objs, 2), budget, |t| -> Built<'_> {
        let (x, a) = (t[0].clone(), t[1].clone());
        let xa = base.product(&x, &a)?;
        let xaa = base.product(&x, &base.product(&a, &a)?)?;
        let e = elementary_map(p, &x, &a)?;
        let (fxa, fxaa) = (p.fiber(&xa)?, p.fiber(&xaa)?);
        Ok((vec![Dim::Fiber(fxa.clone()), Dim::Fiber(fxaa.clone())], Box::new(move |k| {
            let (al, be) = (k[0].elem(), k[1].elem());
            let ex = exists_elementary(p, &x, &a, al)?;
            let left = fxaa.leq(&ex, be);
            let right = fxa.leq(al, &p.reindex(&e, be)?);
            fail(left == right, || {
                format!("X = {x}, A = {a}, α = {}, β = {}: ∃_e α = {} ≤ β is {left} but α ≤ P_e β is {right}", sh(&xa, al), sh(&xaa, be), sh(&xaa, &ex))
            })
        })))
    }));

    report.push(sweep("exists.diagonal", base, &tuples(&objs, 1), budget, |t| -> Built<'_> {
        let a = t[0].clone();
        let aa = base.product(&a, &a)?;
        let diag = base.diagonal(&a);
        let (fa, faa) = (p.fiber(&a)?, p.fiber(&aa)?);
        Ok((vec![Dim::Fiber(fa.clone()), Dim::Fiber(faa.clone())], Box::new(move |k| {
            let (al, be) = (k[0].elem(), k[1].elem());
            let ex = exists_diagonal(p, &a, al)?;
            let left = faa.leq(&ex, be);
            let right = fa.leq(al, &p.reindex(&diag, be)?);
            fail(left == right, || {
                format!("A = {a}, α = {}, β = {}: ∃_Δ α = {} ≤ β is {left} but α ≤ P_Δ β is {right}", sh(&a, al), sh(&aa, be), sh(&aa, &ex))
            })
        })))
    }));

    report.push(sweep("exists.diagonal_is_elementary_at_unit", base, &tuples(&objs, 1), budget, |t| -> Built<'_> {
        let a = t[0].clone();
        let i = base.unit();
        let aa = base.product(&a, &a)?;
        base.product(&i, &a)?;
        base.product(&i, &aa)?;
        let (la, laa) = (base.lambda(&a), base.lambda(&aa));
        Ok((vec![Dim::Fiber(p.fiber(&a)?)], Box::new(move |k| {
            let al = k[0].elem();
            let lhs = exists_elementary(p, &i, &a, &p.reindex(&la, al)?)?;
            let rhs = p.reindex(&laa, &exists_diagonal(p, &a, al)?)?;
            fail(lhs == rhs, || format!("A = {a}, α = {}: the two formulas disagree", sh(&a, al)))
        })))
    }));

    report.push(sweep("beck_chevalley", base, &sides(&objs, 3), budget, |(t, side)| -> Built<'_> {
        // Second: X×A' → X×A along id×f, projections onto A' and A.
        // First: A'×X → A×X along f×id, projections onto A' and A.
        let (x, a, a2, side) = (t[0].clone(), t[1].clone(), t[2].clone(), *side);
        let (big, small) = match side {
            Side::Second => (base.product(&x, &a)?, base.product(&x, &a2)?),
            Side::First => (base.product(&a, &x)?, base.product(&a2, &x)?),
        };
        let dims = vec![Dim::Hom(a2.clone(), a.clone()), Dim::Fiber(p.fiber(&big)?)];
        Ok((dims, Box::new(move |k| {
            let (f, b) = (k[0].mor(), k[1].elem());
            let lift = match side {
                Side::Second => base.id(&x).times(f),
                Side::First => f.times(&base.id(&x)),
            };
            let lhs = p.exists(&small, side, &p.reindex(&lift, b)?)?;
            let rhs = p.reindex(f, &p.exists(&big, side, b)?)?;
            fail(lhs == rhs, || {
                format!("∃{side}, f = {f}, β = {}: ∃ P_(lift f) β = {}, P_f ∃ β = {}", sh(&big, b), sh(&a2, &lhs), sh(&a2, &rhs))
            })
        })))
    }));

    report.push(sweep("frobenius", base, &sides(&objs, 2), budget, |(t, side)| -> Built<'_> {
        // Second: π2 : X×A → A; First: π1 : A×X → A.
        let (x, a, side) = (t[0].clone(), t[1].clone(), *side);
        let (prod, proj) = match side {
            Side::Second => (base.product(&x, &a)?, base.proj2(&x, &a)),
            Side::First => (base.product(&a, &x)?, base.proj1(&a, &x)),
        };
        let (fa, fp) = (p.fiber(&a)?, p.fiber(&prod)?);
        Ok((vec![Dim::Fiber(fa.clone()), Dim::Fiber(fp.clone())], Box::new(move |k| {
            let (al, be) = (k[0].elem(), k[1].elem());
            let lhs = p.exists(&prod, side, &fp.meet(&p.reindex(&proj, al)?, be))?;
            let rhs = fa.meet(al, &p.exists(&prod, side, be)?);
            fail(lhs == rhs, || {
                format!(
                    "∃{side} on {prod}, α = {}, β = {}: ∃(P_π α ∧ β) = {}, α ∧ ∃β = {}",
                    sh(&a, al),
                    sh(&prod, be),
                    sh(&a, &lhs),
                    sh(&a, &rhs)
                )
            })
        })))
    }));

    report.push(sweep("delta.least_reflexive", base, &tuples(&objs, 1), budget, |t| -> Built<'_> {
        let a = t[0].clone();
        let aa = base.product(&a, &a)?;
        let diag = base.diagonal(&a);
        let (fa, faa) = (p.fiber(&a)?, p.fiber(&aa)?);
        let delta = p.delta(&a)?;
        let top_a = fa.top();
        let from_formula = exists_diagonal(p, &a, &top_a)?;
        Ok((vec![Dim::Fiber(faa.clone())], Box::new(move |k| {
            let b = k[0].elem();
            if p.reindex(&diag, &delta)? != top_a {
                return Ok(Some(format!("A = {a}: P_Δ(δ) ≠ ⊤")));
            }
            if from_formula != delta {
                return Ok(Some(format!("A = {a}: ∃_Δ(⊤) = {} ≠ δ = {}", sh(&aa, &from_formula), sh(&aa, &delta))));
            }
            let reflexive = fa.leq(&top_a, &p.reindex(&diag, b)?);
            fail(!reflexive || faa.leq(&delta, b), || format!("A = {a}: β = {} has ⊤ ≤ P_Δ β but δ ≰ β", sh(&aa, b)))
        })))
    }));

    report.push(sweep("delta.product", base, &tuples(&objs, 2), budget, |t| -> Built<'_> {
        let (a, b) = (t[0].clone(), t[1].clone());
        let ab = base.product(&a, &b)?;
        let abab = base.product(&ab, &ab)?;
        let (aa, bb) = (base.product(&a, &a)?, base.product(&b, &b)?);
        let nb = b.card();
        let to_aa = Mor::from_fn(&abab, &aa, |i| {
            let (l, r) = (i / ab.card(), i % ab.card());
            (l / nb) * a.card() + r / nb
        });
        let to_bb = Mor::from_fn(&abab, &bb, |i| {
            let (l, r) = (i / ab.card(), i % ab.card());
            (l % nb) * nb + r % nb
        });
        let fabab = p.fiber(&abab)?;
        Ok((vec![], Box::new(move |_| {
            let lhs = p.delta(&ab)?;
            let rhs = fabab.meet(&p.reindex(&to_aa, &p.delta(&a)?)?, &p.reindex(&to_bb, &p.delta(&b)?)?);
            fail(lhs == rhs, || format!("A = {a}, B = {b}: δ_(A×B) = {}, meet of reindexed δs = {}", sh(&abab, &lhs), sh(&abab, &rhs)))
        })))
    }));

    report.push(sweep("lax_square", base, &tuples(&objs, 3), budget, |t| -> Built<'_> {
        // Square π2 : Z×A → A, u×id : Z×A → Z'×A, π2 : Z'×A → A, id_A.
        let (z, z2, a) = (t[0].clone(), t[1].clone(), t[2].clone());
        let (za, z2a) = (base.product(&z, &a)?, base.product(&z2, &a)?);
        let fa = p.fiber(&a)?;
        let dims = vec![Dim::Hom(z.clone(), z2.clone()), Dim::Fiber(p.fiber(&z2a)?)];
        Ok((dims, Box::new(move |k| {
            let (u, c) = (k[0].mor(), k[1].elem());
            let h = u.times(&base.id(&a));
            let lhs = p.exists(&za, Side::Second, &p.reindex(&h, c)?)?;
            let rhs = p.exists(&z2a, Side::Second, c)?;
            fail(fa.leq(&lhs, &rhs), || format!("u = {u}, γ = {}: {} ≰ {}", sh(&z2a, c), sh(&a, &lhs), sh(&a, &rhs)))
        })))
    }));

    report.push(sweep("delta.unit_is_top", base, &tuples(&objs, 1), budget, |t| -> Built<'_> {
        let x = t[0].clone();
        let i = base.unit();
        let ii = base.product(&i, &i)?;
        let bang = Mor::from_fn(&x, &ii, |_| 0);
        let top = p.fiber(&x)?.top();
        Ok((vec![], Box::new(move |_| {
            let got = p.reindex(&bang, &p.delta(&i)?)?;
            fail(got == top, || format!("X = {x}: P_!(δ_I) = {}", sh(&x, &got)))
        })))
    }));

    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::doctrine::{BaseCategory, CorruptedExists, PowersetDoctrine};

    #[test]
    fn powerset_depth_one_passes() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let report = validate_doctrine(&PowersetDoctrine::new(base), &Budget::default());
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.checks.iter().all(|c| c.exhaustive_instances > 0), "{}", report.to_text());
    }

    #[test]
    fn one_point_and_empty_atoms_pass() {
        for size in [0, 1] {
            let base = Arc::new(BaseCategory::build(&[size], 2).unwrap());
            let report = validate_doctrine(&PowersetDoctrine::new(base), &Budget::default());
            assert!(report.passed(), "{}", report.to_text());
        }
    }

    #[test]
    fn corrupted_exists_breaks_frobenius() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let a = base.atom(0);
        let aa = base.product(&a, &a).unwrap();
        let pow = Arc::new(PowersetDoctrine::new(base));
        // ∃π2{(0,0)} should be {0}; make it {0,1}.
        let bad = CorruptedExists::new(pow, aa, Side::Second, Elem::from_bits(4, [0]), Elem::from_bits(2, [0, 1]));
        let report = validate_doctrine(&bad, &Budget::default());
        let frob = report.check("frobenius").unwrap();
        assert!(!frob.passed());
        assert!(frob.witness.as_ref().unwrap().contains("{(0,0)}"), "{}", report.to_text());
    }
}
