//! The adjunction `L ⊣ R` between elementary existential doctrines and
//! cartesian bicategories, on finite instances.
//!
//! `L(P) = Bicat_P` and `R(B) = Hom_B(−, I)`. The counit bends strings:
//! `ε_B(R) = Γ(ρ⁻¹_X) ; (id_X ⊗ cup_Y) ; Γ(α⁻¹) ; (R ⊗ id_Y) ; Γ(λ_Y)` for
//! `R : X×Y → I`, with inverse `ε⁻¹_B(S) = (S ⊗ id_Y) ; cap_Y`. The unit is
//! `η_P = (Γ_P, P_ρ)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::bicat::maps::{graphs, hom_list};
use crate::bicat::verify::{equal, graph_law, law};
use crate::bicat::{check_comprehensive_diagonals, check_ruc, doctrine_of_cbc, is_map, Arrow, Backend, CbcDoctrine, FinBicat};
use crate::doctrine::samples::{lift, pow_over_klein, pow_over_negation};
use crate::doctrine::{Budget, ComposedDoctrine, Doctrine, DoctrineError, Elem, Mor, Obj, Side};
use crate::report::{CheckResult, Report};
use crate::sweep::{sweep, tuples, Dim, Test};

fn split(prod: &Obj) -> Result<(Obj, Obj), DoctrineError> {
    prod.factors()
        .map(|(x, y)| (x.clone(), y.clone()))
        .ok_or_else(|| DoctrineError::ObjectOutOfDepth(format!("{prod} is not a product")))
}

fn unit_cod(b: &FinBicat, r: &Arrow) -> Result<(), DoctrineError> {
    if r.cod != b.base().unit() {
        return Err(DoctrineError::FiberMismatch(format!("{} → {} does not end in I", r.dom, r.cod)));
    }
    Ok(())
}

/// `ε_B : Hom(X×Y, I) → Hom(X, Y)`.
pub fn epsilon(b: &FinBicat, r: &Arrow) -> Result<Arrow, DoctrineError> {
    Counit::new(b.clone()).apply(r)
}

/// Per `(X, Y)`: the bent prefix and `Γ(λ_Y)`.
type PrefixCache = Arc<RwLock<HashMap<(Obj, Obj), (Arrow, Arrow)>>>;

/// `ε_B` with the part of the bent string that does not depend on `R`
/// cached per pair `X, Y`.
#[derive(Clone)]
pub struct Counit {
    b: FinBicat,
    prefix: PrefixCache,
}

impl Counit {
    pub fn new(b: FinBicat) -> Counit {
        Counit { b, prefix: Arc::default() }
    }

    /// `Γ(ρ⁻¹_X) ; (id_X ⊗ cup_Y) ; Γ(α⁻¹) : X → (X×Y)×Y` and `Γ(λ_Y)`.
    fn ends(&self, x: &Obj, y: &Obj) -> Result<(Arrow, Arrow), DoctrineError> {
        let key = (x.clone(), y.clone());
        if let Some(e) = self.prefix.read().expect("cache lock").get(&key) {
            return Ok(e.clone());
        }
        let (b, base) = (&self.b, self.b.base());
        let bent = b.compose(&b.graph(&base.rho_inv(x))?, &b.tensor(&b.identity(x)?, &b.cup(y)?)?)?;
        let regrouped = b.compose(&bent, &b.graph(&base.assoc_inv(x, y, y))?)?;
        let e = (regrouped, b.graph(&base.lambda(y))?);
        self.prefix.write().expect("cache lock").insert(key, e.clone());
        Ok(e)
    }

    pub fn apply(&self, r: &Arrow) -> Result<Arrow, DoctrineError> {
        let b = &self.b;
        unit_cod(b, r)?;
        let (x, y) = split(&r.dom)?;
        let (start, end) = self.ends(&x, &y)?;
        let applied = b.compose(&start, &b.tensor(r, &b.identity(&y)?)?)?;
        b.compose(&applied, &end)
    }
}

/// `ε⁻¹_B : Hom(X, Y) → Hom(X×Y, I)`.
pub fn epsilon_inv(b: &FinBicat, s: &Arrow) -> Result<Arrow, DoctrineError> {
    b.compose(&b.tensor(s, &b.identity(&s.cod)?)?, &b.cap(&s.cod)?)
}

/// The unit `η_P = (Γ_P, P_ρ) : P → R L(P)`.
pub struct Eta {
    p: Arc<dyn Doctrine>,
    bicat: FinBicat,
    rl: CbcDoctrine,
}

impl Eta {
    pub fn new(p: Arc<dyn Doctrine>) -> Eta {
        let bicat = FinBicat::of_doctrine(p.clone());
        Eta { p, rl: doctrine_of_cbc(bicat.clone()), bicat }
    }

    pub fn doctrine(&self) -> &dyn Doctrine {
        &*self.p
    }

    /// `L(P) = Bicat_P`.
    pub fn bicat(&self) -> &FinBicat {
        &self.bicat
    }

    /// `R L(P)`.
    pub fn image(&self) -> &CbcDoctrine {
        &self.rl
    }

    /// `b_X = P_{ρ_X} : P(X) → P(X×I)`.
    pub fn component(&self, x: &Obj, a: &Elem) -> Result<Elem, DoctrineError> {
        self.p.reindex(&self.p.base().rho(x), a)
    }

    /// The base part `Γ_P(f)`.
    pub fn on_morphism(&self, f: &Mor) -> Result<Arrow, DoctrineError> {
        self.bicat.graph(f)
    }
}

/// `η_P` is a morphism of doctrines `P → R L(P)`: each `b_X` preserves `⊤`
/// and `∧`, the family is natural along `Γ_P`, and it preserves `δ` and `∃`.
/// Each `b_X` is also an order isomorphism with inverse `P_{ρ⁻¹_X}`.
pub fn check_eta(p: &Arc<dyn Doctrine>, objects: &[Obj], budget: &Budget) -> Report {
    let eta = Eta::new(p.clone());
    compare("eta", format!("unit of the adjunction at {}", p.name()), p, eta.image(), objects, budget)
}

/// Whether `P_{ρ_X} : P(X) → Q(X)` is an isomorphism of doctrines, for a
/// doctrine `Q` over the same base whose fiber `Q(X)` is encoded like
/// `P(X×I)`, such as `R(Rel)` against the powerset doctrine.
pub fn check_fiberwise_iso(p: &Arc<dyn Doctrine>, q: &dyn Doctrine, objects: &[Obj], budget: &Budget) -> Report {
    compare("iso", format!("{} ≅ {} fiberwise", p.name(), q.name()), p, q, objects, budget)
}

fn compare(prefix: &str, title: String, p: &Arc<dyn Doctrine>, q: &dyn Doctrine, objects: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(title);
    let base = p.base();
    let id = |s: &str| format!("{prefix}.{s}");
    let phi = |x: &Obj, a: &Elem| p.reindex(&base.rho(x), a);
    let psi = |x: &Obj, c: &Elem| p.reindex(&base.rho_inv(x), c);
    let (phi, psi) = (&phi, &psi);
    let singles = tuples(objects, 1);
    let pairs = tuples(objects, 2);
    r.push(sweep(&id("top"), base, &singles, budget, |o| {
        let x = o[0].clone();
        let test: Test = Box::new(move |_| {
            let got = phi(&x, &p.fiber(&x)?.top())?;
            Ok((got != q.fiber(&x)?.top()).then(|| format!("image of ⊤ in {x} is {}", q.show(&x, &got))))
        });
        Ok((vec![Dim::Range(1)], test))
    }));
    r.push(sweep(&id("meet"), base, &singles, budget, |o| {
        let x = o[0].clone();
        let f = p.fiber(&x)?;
        let dims = vec![Dim::Fiber(f.clone()), Dim::Fiber(f.clone())];
        let test: Test = Box::new(move |k| {
            let (a, c) = (k[0].elem(), k[1].elem());
            let lhs = phi(&x, &f.meet(a, c))?;
            let rhs = q.fiber(&x)?.meet(&phi(&x, a)?, &phi(&x, c)?);
            Ok((lhs != rhs).then(|| format!("meet of {} and {} is not preserved", p.show(&x, a), p.show(&x, c))))
        });
        Ok((dims, test))
    }));
    r.push(sweep(&id("inverse"), base, &singles, budget, |o| {
        let x = o[0].clone();
        let dims = vec![Dim::Fiber(p.fiber(&x)?)];
        let test: Test = Box::new(move |k| {
            let a = k[0].elem();
            let image = phi(&x, a)?;
            if !q.fiber(&x)?.contains(&image) {
                return Ok(Some(format!("image of {} leaves the fiber over {x}", p.show(&x, a))));
            }
            Ok((psi(&x, &image)? != *a).then(|| format!("{} does not come back", p.show(&x, a))))
        });
        Ok((dims, test))
    }));
    r.push(sweep(&id("surjective"), base, &singles, budget, |o| {
        let x = o[0].clone();
        let dims = vec![Dim::Fiber(q.fiber(&x)?)];
        let test: Test = Box::new(move |k| {
            let c = k[0].elem();
            let back = psi(&x, c)?;
            if !p.fiber(&x)?.contains(&back) {
                return Ok(Some(format!("{} has no preimage over {x}", q.show(&x, c))));
            }
            Ok((phi(&x, &back)? != *c).then(|| format!("{} is not hit", q.show(&x, c))))
        });
        Ok((dims, test))
    }));
    r.push(sweep(&id("reflects_order"), base, &singles, budget, |o| {
        let x = o[0].clone();
        let g = q.fiber(&x)?;
        let dims = vec![Dim::Fiber(g.clone()), Dim::Fiber(g.clone())];
        let test: Test = Box::new(move |k| {
            let (lower, c) = (g.meet(k[0].elem(), k[1].elem()), k[1].elem());
            let ok = p.fiber(&x)?.leq(&psi(&x, &lower)?, &psi(&x, c)?);
            Ok((!ok).then(|| format!("{} ≤ {} is not reflected", q.show(&x, &lower), q.show(&x, c))))
        });
        Ok((dims, test))
    }));
    r.push(sweep(&id("delta"), base, &singles, budget, |o| {
        let a = o[0].clone();
        let aa = base.product(&a, &a)?;
        let test: Test = Box::new(move |_| {
            let (got, want) = (phi(&aa, &p.delta(&a)?)?, q.delta(&a)?);
            Ok((got != want).then(|| format!("image of δ_{a} is {} but δ is {}", q.show(&aa, &got), q.show(&aa, &want))))
        });
        Ok((vec![Dim::Range(1)], test))
    }));
    r.push(sweep(&id("exists"), base, &pairs, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let xy = base.product(&x, &y)?;
        let dims = vec![Dim::Fiber(p.fiber(&xy)?)];
        let test: Test = Box::new(move |k| {
            let a = k[0].elem();
            let image = phi(&xy, a)?;
            for (side, z) in [(Side::First, &x), (Side::Second, &y)] {
                let lhs = phi(z, &p.exists(&xy, side, a)?)?;
                let rhs = q.exists(&xy, side, &image)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "∃{side} of {}: {} after the comparison, {} before",
                        p.show(&xy, a),
                        q.show(z, &rhs),
                        q.show(z, &lhs)
                    )));
                }
            }
            Ok(None)
        });
        Ok((dims, test))
    }));
    r.push(sweep(&id("natural"), base, &pairs, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let dims = vec![Dim::Hom(x.clone(), y.clone()), Dim::Fiber(p.fiber(&y)?)];
        let test: Test = Box::new(move |k| {
            let (f, a) = (k[0].mor(), k[1].elem());
            let lhs = phi(&x, &p.reindex(f, a)?)?;
            let rhs = q.reindex(f, &phi(&y, a)?)?;
            Ok((lhs != rhs).then(|| format!("reindexing {} along {f} is not preserved", p.show(&y, a))))
        });
        Ok((dims, test))
    }));
    r
}

/// `ε_B` is an order isomorphism `Hom(X×Y, I) ≅ Hom(X, Y)` for all `X, Y` in
/// `objects`. Also compares `ε` with its closed form: reindexing along
/// `ρ⁻¹_{X×Y}` for `Bicat_P`, and the identity on element indices for the
/// relation truncation.
pub fn check_epsilon_iso(b: &FinBicat, objects: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(format!("counit of the adjunction at {}", b.name()));
    let base = b.base();
    let eps = Counit::new(b.clone());
    let eps = &eps;
    let pairs = tuples(objects, 2);
    let bent = |o: &Vec<Obj>, n: usize| -> Result<(Obj, Obj, Obj, Vec<Dim>), DoctrineError> {
        let (x, y) = (o[0].clone(), o[1].clone());
        let xy = base.product(&x, &y)?;
        let unit = base.unit();
        let dims = (0..n).map(|_| b.hom(&xy, &unit).map(Dim::Fiber)).collect::<Result<_, _>>()?;
        Ok((x, y, xy, dims))
    };
    r.push(sweep("epsilon.left_inverse", base, &pairs, budget, |o| {
        let (_, _, xy, dims) = bent(o, 1)?;
        let test: Test = Box::new(move |k| {
            let rr = Arrow::new(&xy, &base.unit(), k[0].elem().clone());
            let back = epsilon_inv(b, &eps.apply(&rr)?)?;
            Ok(equal(b, "ε⁻¹(ε R) against R", &back, &rr))
        });
        Ok((dims, test))
    }));
    r.push(law("epsilon.right_inverse", b, objects, 2, &[(0, 1)], budget, &|_, a| {
        let back = eps.apply(&epsilon_inv(b, &a[0])?)?;
        Ok(equal(b, "ε(ε⁻¹ S) against S", &back, &a[0]))
    }));
    r.push(sweep("epsilon.monotone", base, &pairs, budget, |o| {
        let (_, _, xy, dims) = bent(o, 2)?;
        let test: Test = Box::new(move |k| {
            let unit = base.unit();
            let (r1, r2) = (Arrow::new(&xy, &unit, k[0].elem().clone()), Arrow::new(&xy, &unit, k[1].elem().clone()));
            let lower = b.meet(&r1, &r2)?;
            let (e1, e2) = (eps.apply(&lower)?, eps.apply(&r2)?);
            Ok((!b.leq(&e1, &e2)?).then(|| format!("{} ≤ {} but ε reverses it", b.show(&lower), b.show(&r2))))
        });
        Ok((dims, test))
    }));
    r.push(law("epsilon_inv.monotone", b, objects, 2, &[(0, 1), (0, 1)], budget, &|_, a| {
        let lower = b.meet(&a[0], &a[1])?;
        let (e1, e2) = (epsilon_inv(b, &lower)?, epsilon_inv(b, &a[1])?);
        Ok((!b.leq(&e1, &e2)?).then(|| format!("{} ≤ {} but ε⁻¹ reverses it", b.show(&lower), b.show(&a[1]))))
    }));
    r.push(sweep("epsilon.closed_form", base, &pairs, budget, |o| {
        let (x, y, xy, dims) = bent(o, 1)?;
        let test: Test = Box::new(move |k| {
            let elem = k[0].elem();
            let got = eps.apply(&Arrow::new(&xy, &base.unit(), elem.clone()))?;
            let want = match b.backend() {
                Backend::OfDoctrine(p) => p.reindex(&base.rho_inv(&xy), elem)?,
                Backend::RelTruncation(_) => elem.clone(),
            };
            Ok(equal(b, "bent string against its closed form", &got, &Arrow::new(&x, &y, want)))
        });
        Ok((dims, test))
    }));
    r
}

/// First triangle: `ε_{L(P)} ∘ L(η_P) = id`, i.e. `ε(P_ρ(R)) = R` for every
/// `R ∈ P(X×Y)`.
pub fn check_triangle_left(p: &Arc<dyn Doctrine>, objects: &[Obj], budget: &Budget) -> Report {
    let eta = Eta::new(p.clone());
    let b = eta.bicat();
    let eps = Counit::new(b.clone());
    let eps = &eps;
    let mut r = Report::new(format!("first triangle identity at {}", p.name()));
    let eta = &eta;
    r.push(law("triangle.left", b, objects, 2, &[(0, 1)], budget, &|_, a| {
        let xy = b.base().product(&a[0].dom, &a[0].cod)?;
        let lifted = Arrow::new(&xy, &b.base().unit(), eta.component(&xy, &a[0].elem)?);
        Ok(equal(b, "ε(L(η)(R)) against R", &eps.apply(&lifted)?, &a[0]))
    }));
    r
}

/// Second triangle: `R(ε_B) ∘ η_{R(B)} = id`. On fibers,
/// `ε_B(Γ(ρ_X) ; U) = U` for `U : X → I`; on base morphisms,
/// `ε⁻¹_B(Γ_B f) = Γ_{R(B)}(f)` and `ε_B(Γ_{R(B)} f) = Γ_B f`.
pub fn check_triangle_right(b: &FinBicat, objects: &[Obj], budget: &Budget) -> Report {
    let mut r = Report::new(format!("second triangle identity at {}", b.name()));
    let base = b.base();
    let eps = Counit::new(b.clone());
    let eps = &eps;
    let singles = tuples(objects, 1);
    let lrb = FinBicat::of_doctrine(Arc::new(doctrine_of_cbc(b.clone())));
    r.push(sweep("triangle.right.fibers", base, &singles, budget, |o| {
        let x = o[0].clone();
        let unit = base.unit();
        let dims = vec![Dim::Fiber(b.hom(&x, &unit)?)];
        let test: Test = Box::new(move |k| {
            let u = Arrow::new(&x, &unit, k[0].elem().clone());
            let whiskered = b.compose(&b.graph(&base.rho(&x))?, &u)?;
            let xi = base.product(&x, &unit)?;
            let back = eps.apply(&Arrow::new(&xi, &unit, whiskered.elem))?;
            Ok(equal(b, "ε(Γ(ρ) ; U) against U", &back, &u))
        });
        Ok((dims, test))
    }));
    r.push(graph_law("triangle.right.maps", b, objects, 2, &[(0, 1)], budget, &|_, f| {
        let direct = lrb.graph(&f[0])?;
        let via = epsilon_inv(b, &b.graph(&f[0])?)?;
        let xy = base.product(f[0].dom(), f[0].cod())?;
        if via.elem != direct.elem {
            return Ok(Some(format!(
                "ε⁻¹(Γ {}) = {} but Γ of R(B) gives {}",
                f[0],
                b.show(&via),
                b.show(&Arrow::new(&xy, &base.unit(), direct.elem))
            )));
        }
        let bent = eps.apply(&Arrow::new(&xy, &base.unit(), direct.elem))?;
        Ok(equal(b, "ε(Γ of R(B)) against Γ", &bent, &b.graph(&f[0])?))
    }));
    r
}

/// Whether `Γ_P` is full and faithful, decided on hom-sets directly, and
/// whether the verdicts agree with unique choice and comprehensive
/// diagonals.
pub fn check_eta_iso(p: &Arc<dyn Doctrine>, budget: &Budget) -> Report {
    let mut r = Report::new(format!("invertibility of the unit at {}", p.name()));
    let base = p.base();
    let pairs = tuples(base.objects(), 2);
    let full = sweep("eta_iso.full", base, &pairs, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let g = graphs(p, &x, &y, budget.cap)?;
        let test: Test = Box::new(move |k| {
            let rel = k[0].elem();
            if g.contains_key(rel) || !is_map(&**p, &x, &y, rel)? {
                return Ok(None);
            }
            Ok(Some(format!("{} is a map {x} → {y} but no Γ(f)", p.show(&Obj::prod(&x, &y), rel))))
        });
        Ok((vec![Dim::Fiber(p.fiber(&base.product(&o[0], &o[1])?)?)], test))
    });
    let faithful = sweep("eta_iso.faithful", base, &pairs, budget, |o| {
        let (x, y) = (o[0].clone(), o[1].clone());
        let bicat = FinBicat::of_doctrine(p.clone());
        let mut first: HashMap<Elem, Mor> = HashMap::new();
        for f in hom_list(&**p, &x, &y, budget.cap)? {
            first.entry(bicat.graph(&f)?.elem).or_insert(f);
        }
        let test: Test = Box::new(move |k| {
            let f = k[0].mor();
            let g = &first[&bicat.graph(f)?.elem];
            Ok((g != f).then(|| format!("Γ({f}) = Γ({g})")))
        });
        Ok((vec![Dim::Hom(x.clone(), y.clone())], test))
    });
    let ruc = check_ruc(p, budget);
    let diagonals = check_comprehensive_diagonals(p, budget);
    let agree = |id: &str, ours: &CheckResult, theirs: Option<&CheckResult>| {
        let theirs = theirs.expect("check present");
        let holds = ours.passed() == theirs.passed();
        let witness = (!holds).then(|| {
            format!("{} says {}, {} says {}", ours.id, ours.passed(), theirs.id, theirs.passed())
        });
        CheckResult::single(id, holds, 1, witness)
    };
    let full_vs_ruc = agree("eta_iso.full_vs_ruc", &full, ruc.check("ruc"));
    let faithful_vs_diag = agree("eta_iso.faithful_vs_diagonals", &faithful, diagonals.check("comprehensive_diagonals"));
    r.push(full);
    r.push(faithful);
    r.push(full_vs_ruc);
    r.push(faithful_vs_diag);
    r
}

/// `η_P` is invertible exactly when both Γ checks of [`check_eta_iso`] pass.
pub fn eta_is_iso(report: &Report) -> bool {
    ["eta_iso.full", "eta_iso.faithful"].iter().all(|id| report.check(id).is_some_and(CheckResult::passed))
}

/// `L` is not faithful. `Q = pow∘incl` over the negation clone and
/// `Q' = Q∘collapse` over the Klein clone; `(lift1, id)` and `(lift2, id)`
/// are distinct morphisms `Q → Q'` with the same image under `L`.
pub fn demonstrate_l_not_faithful(depth: usize, budget: &Budget) -> Result<Report, DoctrineError> {
    let q = Arc::new(pow_over_negation(depth)?);
    let q2 = Arc::new(pow_over_klein(depth)?);
    let (n, k) = (q.base_arc(), q2.base_arc());
    let lifts = [1, 2].map(|i| lift(i, n.clone(), k.clone()).map(Arc::new));
    let [l1, l2] = lifts;
    let (l1, l2) = (l1?, l2?);
    let mut r = Report::new("L(lift1, id) = L(lift2, id) with lift1 ≠ lift2".to_string());
    let base = &*n;
    let pairs = tuples(base.objects(), 2);

    let differ = sweep("lifts.distinct", base, &pairs, budget, |o| {
        let (l1, l2) = (l1.clone(), l2.clone());
        let test: Test = Box::new(move |k| {
            let f = k[0].mor();
            Ok((l1.apply(f)? != l2.apply(f)?).then(|| format!("lift1 and lift2 differ on {f}")))
        });
        Ok((vec![Dim::Hom(o[0].clone(), o[1].clone())], test))
    });
    // The sweep "fails" exactly when a separating morphism exists.
    r.push(CheckResult::single("lifts.distinct", !differ.passed(), differ.comparisons, differ.witness.clone()));

    for (i, l) in [(1, &l1), (2, &l2)] {
        let along = ComposedDoctrine::new(q2.clone(), l.clone())?;
        r.push(sweep(&format!("lift{i}.restricts_to_identity"), base, &pairs, budget, |o| {
            let (x, y) = (o[0].clone(), o[1].clone());
            let (q, along) = (q.clone(), &along);
            let xy = base.product(&x, &y)?;
            let dims = vec![Dim::Hom(x.clone(), y.clone()), Dim::Fiber(q.fiber(&y)?), Dim::Fiber(q.fiber(&xy)?)];
            let test: Test = Box::new(move |k| {
                let (f, a, c) = (k[0].mor(), k[1].elem(), k[2].elem());
                if q.reindex(f, a)? != along.reindex(f, a)? {
                    return Ok(Some(format!("reindexing along {f} differs")));
                }
                for side in [Side::First, Side::Second] {
                    if q.exists(&xy, side, c)? != along.exists(&xy, side, c)? {
                        return Ok(Some(format!("∃{side} on {xy} differs")));
                    }
                }
                Ok((q.delta(&x)? != along.delta(&x)?).then(|| format!("δ_{x} differs")))
            });
            Ok((dims, test))
        }));
    }

    // L(lift_i, id) sends R ∈ Hom(X,Y) = Q(X×Y) to R ∈ Hom(lift_i X, lift_i Y).
    let lq = FinBicat::of_doctrine(q.clone());
    r.push(law("l_images.agree", &lq, base.objects(), 2, &[(0, 1)], budget, &|o, a| {
        let image = |l: &Arc<crate::doctrine::CartesianFunctor>| -> Result<Arrow, DoctrineError> {
            Ok(Arrow::new(&l.apply_obj(&o[0])?, &l.apply_obj(&o[1])?, a[0].elem.clone()))
        };
        let (i1, i2) = (image(&l1)?, image(&l2)?);
        Ok((i1 != i2).then(|| format!("images {} → {} and {} → {} differ", i1.dom, i1.cod, i2.dom, i2.cod)))
    }));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::{BaseCategory, CorruptedExists, PowersetDoctrine};

    fn pow(depth: usize) -> (Arc<BaseCategory>, Arc<dyn Doctrine>) {
        let base = Arc::new(BaseCategory::build(&[2], depth).unwrap());
        (base.clone(), Arc::new(PowersetDoctrine::new(base)))
    }

    #[test]
    fn bending_small_relations() {
        let (base, _) = pow(1);
        let rel = FinBicat::rel_truncation(base.clone());
        let a = base.atom(0);
        let aa = Obj::prod(&a, &a);
        let r = Arrow::new(&aa, &base.unit(), Elem::from_bits(4, [1]));
        let s = epsilon(&rel, &r).unwrap();
        assert_eq!(rel.show(&s), "{(0,1)}");
        let id = epsilon_inv(&rel, &rel.identity(&a).unwrap()).unwrap();
        assert_eq!(rel.show(&id), "{((0,0),•),((1,1),•)}");
        let empty = Arrow::new(&aa, &base.unit(), Elem::zeros(4));
        assert_eq!(epsilon(&rel, &empty).unwrap().elem, Elem::zeros(4));
    }

    #[test]
    fn powerset_and_relations_satisfy_both_triangles() {
        let (base, p) = pow(1);
        let objs: Vec<Obj> = base.objects().iter().filter(|o| o.card() <= 2).cloned().collect();
        let b = Budget::default();
        let mut reports = vec![check_eta(&p, &objs, &b), check_triangle_left(&p, &objs, &b)];
        for bicat in [FinBicat::of_doctrine(p.clone()), FinBicat::rel_truncation(base.clone())] {
            reports.push(check_epsilon_iso(&bicat, &objs, &b));
            reports.push(check_triangle_right(&bicat, &objs, &b));
        }
        for r in reports {
            assert!(r.passed() && r.checks.iter().all(|c| c.exhaustive()), "{}", r.to_text());
        }
    }

    #[test]
    fn powerset_matches_relations_fiberwise() {
        let (base, p) = pow(1);
        let rel = doctrine_of_cbc(FinBicat::rel_truncation(base.clone()));
        let r = check_fiberwise_iso(&p, &rel, base.objects(), &Budget::default());
        assert!(r.passed() && r.checks.iter().all(|c| c.exhaustive()), "{}", r.to_text());
        // Altering one ∃ value on A×A breaks the comparison.
        let a = base.atom(0);
        let aa = Obj::prod(&a, &a);
        let skewed: Arc<dyn Doctrine> =
            Arc::new(CorruptedExists::new(p.clone(), aa.clone(), Side::First, Elem::ones(4), Elem::from_bits(2, [0])));
        let r = check_fiberwise_iso(&skewed, &rel, &[a], &Budget::default());
        assert!(!r.check("iso.exists").unwrap().passed(), "{}", r.to_text());
    }

    #[test]
    fn corrupted_quantifier_breaks_the_first_triangle() {
        let (base, p) = pow(1);
        let (i, a) = (base.unit(), base.atom(0));
        // The product on which Γ(ρ⁻¹_A) ; (id ⊗ cup_A) is projected.
        let prod = Obj::prod(&Obj::prod(&a, &i), &Obj::prod(&a, &Obj::prod(&a, &Obj::prod(&a, &a))));
        let bad: Arc<dyn Doctrine> = Arc::new(CorruptedExists::constant(p, prod, Side::Second, Elem::ones(16)));
        let report = check_triangle_left(&bad, &[a], &Budget::default());
        let c = report.check("triangle.left").unwrap();
        assert!(!c.passed(), "{}", report.to_text());
        assert!(c.witness.as_deref().unwrap().contains("ε(L(η)(R))"));
    }

    #[test]
    fn unit_is_invertible_for_powerset_only() {
        let b = Budget::default();
        let (_, p) = pow(1);
        let r = check_eta_iso(&p, &b);
        assert!(eta_is_iso(&r) && r.passed(), "{}", r.to_text());

        let neg: Arc<dyn Doctrine> = Arc::new(pow_over_negation(1).unwrap());
        let r = check_eta_iso(&neg, &b);
        assert!(!r.check("eta_iso.full").unwrap().passed(), "{}", r.to_text());
        assert!(r.check("eta_iso.faithful").unwrap().passed(), "{}", r.to_text());
        assert!(r.check("eta_iso.full_vs_ruc").unwrap().passed(), "{}", r.to_text());
        assert!(r.check("eta_iso.faithful_vs_diagonals").unwrap().passed());

        let klein: Arc<dyn Doctrine> = Arc::new(pow_over_klein(1).unwrap());
        let r = check_eta_iso(&klein, &b);
        assert!(!r.check("eta_iso.full").unwrap().passed());
        let faithful = r.check("eta_iso.faithful").unwrap();
        assert!(!faithful.passed());
        assert!(faithful.witness.as_deref().unwrap().starts_with("Γ("), "{}", r.to_text());
        assert!(r.checks[2..].iter().all(CheckResult::passed), "{}", r.to_text());
    }

    #[test]
    fn l_identifies_the_two_lifts() {
        let r = demonstrate_l_not_faithful(1, &Budget::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
