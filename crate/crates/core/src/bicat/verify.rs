//! Axioms of finite cartesian bicategories, the graph functor, and agreement
//! with the relation oracles.

use super::{Arrow, FinBicat};
use crate::doctrine::{Budget, DoctrineError, Mor, Obj};
use crate::finrel::{rel_compose, rel_tensor, FinRelation};
use crate::report::{CheckResult, Report};
use crate::sweep::{sweep, tuples, Dim, Test};

pub(crate) type Law<'a> = dyn Fn(&[Obj], &[Arrow]) -> Result<Option<String>, DoctrineError> + Sync + 'a;

/// Sweeps over `arity`-tuples of objects and, for each tuple, over the hom
/// elements `Hom(o[i], o[j])` for each `(i, j)` in `homs`.
pub(crate) fn law(
    id: &str,
    b: &FinBicat,
    objects: &[Obj],
    arity: usize,
    homs: &[(usize, usize)],
    budget: &Budget,
    f: &Law<'_>,
) -> CheckResult {
    let inst = tuples(objects, arity);
    sweep(id, b.base(), &inst, budget, |o: &Vec<Obj>| {
        let dims = homs.iter().map(|&(i, j)| b.hom(&o[i], &o[j]).map(Dim::Fiber)).collect::<Result<_, _>>()?;
        let o = o.clone();
        let test: Test = Box::new(move |picks| {
            let arrows: Vec<Arrow> =
                homs.iter().zip(picks).map(|(&(i, j), k)| Arrow::new(&o[i], &o[j], k.elem().clone())).collect();
            f(&o, &arrows)
        });
        Ok((dims, test))
    })
}

/// Like [`law`] but over base morphisms `o[i] → o[j]`.
pub(crate) fn graph_law(
    id: &str,
    b: &FinBicat,
    objects: &[Obj],
    arity: usize,
    homs: &[(usize, usize)],
    budget: &Budget,
    f: &(dyn Fn(&[Obj], &[Mor]) -> Result<Option<String>, DoctrineError> + Sync),
) -> CheckResult {
    let inst = tuples(objects, arity);
    sweep(id, b.base(), &inst, budget, |o: &Vec<Obj>| {
        let dims = homs.iter().map(|&(i, j)| Dim::Hom(o[i].clone(), o[j].clone())).collect();
        let o = o.clone();
        let test: Test = Box::new(move |picks| {
            let mors: Vec<Mor> = picks.iter().map(|k| k.mor().clone()).collect();
            f(&o, &mors)
        });
        Ok((dims, test))
    })
}

pub(crate) fn equal(b: &FinBicat, what: &str, lhs: &Arrow, rhs: &Arrow) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: {} ≠ {} in Hom({}, {})", b.show(lhs), b.show(rhs), lhs.dom, lhs.cod))
}

pub(crate) fn below(b: &FinBicat, what: &str, lhs: &Arrow, rhs: &Arrow) -> Result<Option<String>, DoctrineError> {
    Ok((!b.leq(lhs, rhs)?).then(|| format!("{what}: {} ≰ {} in Hom({}, {})", b.show(lhs), b.show(rhs), lhs.dom, lhs.cod)))
}

/// Checks the cartesian bicategory axioms with every law quantified over
/// `objects`, enumerating hom elements within `budget` and sampling beyond.
pub fn verify_cbc_axioms(b: &FinBicat, objs: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(format!("cartesian bicategory axioms for {}", b.name()));
    let base = b.base();
    let g = |m: Mor| b.graph(&m);

    r.push(law("hom.top", b, objs, 2, &[], budget, &|o, _| {
        let via = b.compose(&b.discard(&o[0])?, &b.codiscard(&o[1])?)?;
        Ok(equal(b, "discard ; codiscard against ⊤", &via, &b.top(&o[0], &o[1])?))
    }));
    r.push(law("hom.meet", b, objs, 2, &[(0, 1), (0, 1)], budget, &|o, a| {
        let via = b.compose(&b.compose(&b.copy(&o[0])?, &b.tensor(&a[0], &a[1])?)?, &b.cocopy(&o[1])?)?;
        Ok(equal(b, "copy ; (R⊗S) ; cocopy against R ∧ S", &via, &b.meet(&a[0], &a[1])?))
    }));
    r.push(law("category.identity", b, objs, 2, &[(0, 1)], budget, &|o, a| {
        let left = b.compose(&b.identity(&o[0])?, &a[0])?;
        let right = b.compose(&a[0], &b.identity(&o[1])?)?;
        Ok(equal(b, "id ; R", &left, &a[0]).or_else(|| equal(b, "R ; id", &right, &a[0])))
    }));
    r.push(law("category.associativity", b, objs, 4, &[(0, 1), (1, 2), (2, 3)], budget, &|_, a| {
        let left = b.compose(&b.compose(&a[0], &a[1])?, &a[2])?;
        let right = b.compose(&a[0], &b.compose(&a[1], &a[2])?)?;
        Ok(equal(b, "(f;g);h against f;(g;h)", &left, &right))
    }));
    r.push(law("compose.monotone", b, objs, 3, &[(0, 1), (0, 1), (1, 2), (1, 2)], budget, &|_, a| {
        let lo = b.compose(&b.meet(&a[0], &a[1])?, &b.meet(&a[2], &a[3])?)?;
        below(b, "(f∧f');(g∧g') against f';g'", &lo, &b.compose(&a[1], &a[3])?)
    }));
    r.push(law("tensor.monotone", b, objs, 4, &[(0, 1), (0, 1), (2, 3), (2, 3)], budget, &|_, a| {
        let lo = b.tensor(&b.meet(&a[0], &a[1])?, &b.meet(&a[2], &a[3])?)?;
        below(b, "(f∧f')⊗(g∧g') against f'⊗g'", &lo, &b.tensor(&a[1], &a[3])?)
    }));
    r.push(law("tensor.identity", b, objs, 2, &[], budget, &|o, _| {
        let t = b.tensor(&b.identity(&o[0])?, &b.identity(&o[1])?)?;
        Ok(equal(b, "id ⊗ id", &t, &b.identity(&t.dom)?))
    }));
    r.push(law("tensor.interchange", b, objs, 4, &[(0, 1), (1, 0), (2, 3), (3, 2)], budget, &|_, a| {
        let left = b.compose(&b.tensor(&a[0], &a[2])?, &b.tensor(&a[1], &a[3])?)?;
        let right = b.tensor(&b.compose(&a[0], &a[1])?, &b.compose(&a[2], &a[3])?)?;
        Ok(equal(b, "(f⊗g);(f'⊗g') against (f;f')⊗(g;g')", &left, &right))
    }));
    r.push(law("symmetry.natural", b, objs, 4, &[(0, 1), (2, 3)], budget, &|o, a| {
        let left = b.compose(&g(base.swap(&o[0], &o[2]))?, &b.tensor(&a[1], &a[0])?)?;
        let right = b.compose(&b.tensor(&a[0], &a[1])?, &g(base.swap(&o[1], &o[3]))?)?;
        Ok(equal(b, "σ;(g⊗f) against (f⊗g);σ", &left, &right))
    }));
    r.push(law("unitors.natural", b, objs, 2, &[(0, 1)], budget, &|o, a| {
        let id_i = b.identity(&base.unit())?;
        let l1 = b.compose(&g(base.lambda(&o[0]))?, &a[0])?;
        let l2 = b.compose(&b.tensor(&id_i, &a[0])?, &g(base.lambda(&o[1]))?)?;
        let r1 = b.compose(&g(base.rho(&o[0]))?, &a[0])?;
        let r2 = b.compose(&b.tensor(&a[0], &id_i)?, &g(base.rho(&o[1]))?)?;
        Ok(equal(b, "λ;f against (id⊗f);λ", &l1, &l2).or_else(|| equal(b, "ρ;f against (f⊗id);ρ", &r1, &r2)))
    }));
    r.push(law("associator.natural", b, objs, 3, &[(0, 0), (1, 1), (2, 2)], budget, &|o, a| {
        let left = b.compose(&g(base.assoc(&o[0], &o[1], &o[2]))?, &b.tensor(&a[0], &b.tensor(&a[1], &a[2])?)?)?;
        let right = b.compose(&b.tensor(&b.tensor(&a[0], &a[1])?, &a[2])?, &g(base.assoc(&o[0], &o[1], &o[2]))?)?;
        Ok(equal(b, "α;(f⊗(g⊗h)) against ((f⊗g)⊗h);α", &left, &right))
    }));
    r.push(law("comonoid.associativity", b, objs, 1, &[], budget, &|o, _| {
        let x = &o[0];
        let id = b.identity(x)?;
        let copy = b.copy(x)?;
        let left = b.compose(&b.compose(&copy, &b.tensor(&copy, &id)?)?, &g(base.assoc(x, x, x))?)?;
        let right = b.compose(&copy, &b.tensor(&id, &copy)?)?;
        Ok(equal(b, "copy;(copy⊗id);α against copy;(id⊗copy)", &left, &right))
    }));
    r.push(law("comonoid.commutativity", b, objs, 1, &[], budget, &|o, _| {
        let copy = b.copy(&o[0])?;
        Ok(equal(b, "copy;σ against copy", &b.compose(&copy, &g(base.swap(&o[0], &o[0]))?)?, &copy))
    }));
    r.push(law("comonoid.unit", b, objs, 1, &[], budget, &|o, _| {
        let x = &o[0];
        let via = b.compose(&b.compose(&b.copy(x)?, &b.tensor(&b.discard(x)?, &b.identity(x)?)?)?, &g(base.lambda(x))?)?;
        Ok(equal(b, "copy;(discard⊗id);λ against id", &via, &b.identity(x)?))
    }));
    r.push(law("adjoint.copy", b, objs, 1, &[], budget, &|o, _| {
        let x = &o[0];
        let (copy, cocopy) = (b.copy(x)?, b.cocopy(x)?);
        let xx = base.product(x, x)?;
        Ok(below(b, "unit id ≤ copy;cocopy", &b.identity(x)?, &b.compose(&copy, &cocopy)?)?
            .or(below(b, "counit cocopy;copy ≤ id", &b.compose(&cocopy, &copy)?, &b.identity(&xx)?)?))
    }));
    r.push(law("adjoint.discard", b, objs, 1, &[], budget, &|o, _| {
        let x = &o[0];
        let (dis, codis) = (b.discard(x)?, b.codiscard(x)?);
        Ok(below(b, "unit id ≤ discard;codiscard", &b.identity(x)?, &b.compose(&dis, &codis)?)?
            .or(below(b, "counit codiscard;discard ≤ id", &b.compose(&codis, &dis)?, &b.identity(&base.unit())?)?))
    }));
    r.push(law("frobenius", b, objs, 1, &[], budget, &|o, _| {
        let x = &o[0];
        let id = b.identity(x)?;
        let (copy, cocopy) = (b.copy(x)?, b.cocopy(x)?);
        let left = b.compose(&b.compose(&b.tensor(&copy, &id)?, &g(base.assoc(x, x, x))?)?, &b.tensor(&id, &cocopy)?)?;
        Ok(equal(b, "(copy⊗id);α;(id⊗cocopy) against cocopy;copy", &left, &b.compose(&cocopy, &copy)?))
    }));
    r.push(law("lax.copy", b, objs, 2, &[(0, 1)], budget, &|o, a| {
        let lhs = b.compose(&a[0], &b.copy(&o[1])?)?;
        let rhs = b.compose(&b.copy(&o[0])?, &b.tensor(&a[0], &a[0])?)?;
        below(b, "R;copy ≤ copy;(R⊗R)", &lhs, &rhs)
    }));
    r.push(law("lax.discard", b, objs, 2, &[(0, 1)], budget, &|o, a| {
        below(b, "R;discard ≤ discard", &b.compose(&a[0], &b.discard(&o[1])?)?, &b.discard(&o[0])?)
    }));
    r.push(law("coherence.copy", b, objs, 2, &[], budget, &|o, _| {
        let (x, y) = (&o[0], &o[1]);
        let (nx, ny) = (x.card(), y.card());
        let xy = base.product(x, y)?;
        let dom = Obj::prod(&Obj::prod(x, x), &Obj::prod(y, y));
        // ((x,x'),(y,y')) ↦ ((x,y),(x',y'))
        let middle = Mor::from_fn(&dom, &Obj::prod(&xy, &xy), |i| {
            let (l, r) = (i / (ny * ny), i % (ny * ny));
            ((l / nx) * ny + r / ny) * (nx * ny) + (l % nx) * ny + r % ny
        });
        let via = b.compose(&b.tensor(&b.copy(x)?, &b.copy(y)?)?, &g(middle)?)?;
        Ok(equal(b, "(copy⊗copy);(id⊗σ⊗id) against copy", &via, &b.copy(&xy)?))
    }));
    r.push(law("coherence.discard", b, objs, 2, &[], budget, &|o, _| {
        let (x, y) = (&o[0], &o[1]);
        let via = b.compose(&b.tensor(&b.discard(x)?, &b.discard(y)?)?, &g(base.lambda(&base.unit()))?)?;
        Ok(equal(b, "(discard⊗discard);λ against discard", &via, &b.discard(&base.product(x, y)?)?))
    }));
    r.push(law("coherence.unit", b, objs, 0, &[], budget, &|_, _| {
        let i = base.unit();
        Ok(equal(b, "discard on I against id", &b.discard(&i)?, &b.identity(&i)?))
    }));
    r.push(law("opposite.involution", b, objs, 2, &[(0, 1)], budget, &|_, a| {
        Ok(equal(b, "R^op^op", &b.opposite(&b.opposite(&a[0])?)?, &a[0]))
    }));
    r.push(law("opposite.identity", b, objs, 1, &[], budget, &|o, _| {
        let id = b.identity(&o[0])?;
        Ok(equal(b, "id^op", &b.opposite(&id)?, &id))
    }));
    r.push(law("opposite.contravariant", b, objs, 3, &[(0, 1), (1, 2)], budget, &|_, a| {
        let left = b.opposite(&b.compose(&a[0], &a[1])?)?;
        let right = b.compose(&b.opposite(&a[1])?, &b.opposite(&a[0])?)?;
        Ok(equal(b, "(f;g)^op against g^op;f^op", &left, &right))
    }));
    r
}

/// `Γ` is a strict monoidal functor into the maps, each `Γ(f)` having
/// `Γ(f)^op` as right adjoint.
pub fn check_graph_functor(b: &FinBicat, objs: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(format!("graph functor of {}", b.name()));
    let base = b.base();
    r.push(graph_law("graph.identity", b, objs, 1, &[], budget, &|o, _| {
        Ok(equal(b, "Γ(id) against id", &b.graph(&base.id(&o[0]))?, &b.identity(&o[0])?))
    }));
    r.push(graph_law("graph.composition", b, objs, 3, &[(0, 1), (1, 2)], budget, &|_, f| {
        let left = b.graph(&f[0].then(&f[1]))?;
        Ok(equal(b, "Γ(f;g) against Γ(f);Γ(g)", &left, &b.compose(&b.graph(&f[0])?, &b.graph(&f[1])?)?))
    }));
    r.push(graph_law("graph.monoidal", b, objs, 4, &[(0, 1), (2, 3)], budget, &|_, f| {
        let left = b.graph(&f[0].times(&f[1]))?;
        Ok(equal(b, "Γ(f×g) against Γ(f)⊗Γ(g)", &left, &b.tensor(&b.graph(&f[0])?, &b.graph(&f[1])?)?))
    }));
    r.push(graph_law("graph.right_adjoint", b, objs, 2, &[(0, 1)], budget, &|o, f| {
        let gf = b.graph(&f[0])?;
        let op = b.opposite(&gf)?;
        Ok(below(b, "id ≤ Γ(f);Γ(f)^op", &b.identity(&o[0])?, &b.compose(&gf, &op)?)?
            .or(below(b, "Γ(f)^op;Γ(f) ≤ id", &b.compose(&op, &gf)?, &b.identity(&o[1])?)?))
    }));
    r.push(graph_law("graph.lands_in_maps", b, objs, 2, &[(0, 1)], budget, &|_, f| {
        let gf = b.graph(&f[0])?;
        Ok((!b.is_comonoid_hom(&gf)?).then(|| format!("Γ({}) is not a comonoid homomorphism", f[0])))
    }));
    r
}

/// Reads an arrow between objects built from a single atom as a relation
/// between tuples of the atom.
fn as_finrel(b: &FinBicat, r: &Arrow) -> Result<FinRelation, DoctrineError> {
    let size = b.base().atoms()[0].size;
    let (dom, cod) = (r.dom.atom_leaves().len(), r.cod.atom_leaves().len());
    let mut out = FinRelation::empty(size, dom, cod).map_err(|e| DoctrineError::SizeBudgetExceeded(e.to_string()))?;
    let n = r.cod.card();
    for i in r.elem.ones_iter() {
        out.set(i / n, i % n);
    }
    Ok(out)
}

/// Compares composition, tensor and opposite with the relation oracles
/// (`rel_compose`, `rel_tensor`, transpose) on every hom element between the
/// given objects. The base must have a single atom.
pub fn check_oracle_agreement(b: &FinBicat, objects: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(format!("{} against the relation oracles", b.name()));
    let wrap = |e: crate::finrel::FinRelError| DoctrineError::SizeBudgetExceeded(e.to_string());
    if b.base().atoms().len() != 1 {
        r.push(CheckResult::single("oracle.single_atom", false, 0, Some("the base has several atoms".into())));
        return r;
    }
    let differ = |what: &str, got: &Arrow, want: &FinRelation| -> Result<Option<String>, DoctrineError> {
        Ok((as_finrel(b, got)? != *want).then(|| format!("{what}: {} against {want:?}", b.show(got))))
    };
    r.push(law("oracle.compose", b, objects, 3, &[(0, 1), (1, 2)], budget, &|_, a| {
        let want = rel_compose(&as_finrel(b, &a[0])?, &as_finrel(b, &a[1])?).map_err(wrap)?;
        differ("composition", &b.compose(&a[0], &a[1])?, &want)
    }));
    r.push(law("oracle.tensor", b, objects, 4, &[(0, 1), (2, 3)], budget, &|_, a| {
        let want = rel_tensor(&as_finrel(b, &a[0])?, &as_finrel(b, &a[1])?).map_err(wrap)?;
        differ("tensor", &b.tensor(&a[0], &a[1])?, &want)
    }));
    r.push(law("oracle.opposite", b, objects, 2, &[(0, 1)], budget, &|_, a| {
        differ("opposite", &b.opposite(&a[0])?, &as_finrel(b, &a[0])?.transpose())
    }));
    r
}
