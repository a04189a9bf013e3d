mod support;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regdiag::adjunction::{epsilon, epsilon_inv};
use regdiag::bicat::{Arrow, FinBicat};
use regdiag::diagram::random::random_diagram_typed;
use regdiag::diagram::{parse_diagram, Diagram};
use regdiag::doctrine::{BaseCategory, Doctrine, Obj, PowersetDoctrine, Side};
use regdiag::finrel::{countermodel_search, eval_diagram};
use regdiag::logic::{factor_through_diagonal, parse_formula, theta, Formula, SortedFormula, Term, TermTuple};
use regdiag::Signature;
use support::*;

fn sig() -> Signature {
    Signature::new([("f", 1), ("h", 2)], [("P", 2), ("Q", 1)]).unwrap()
}

fn unary_sig() -> Signature {
    Signature::new([("f", 1)], [("P", 1)]).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn term(n: usize) -> impl Strategy<Value = Term> {
    let leaf = (1..=n).prop_map(Term::var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("h", vec![a, b])),
        ]
    })
}

fn formula(n: usize, depth: u32) -> BoxedStrategy<Formula> {
    let atoms = prop_oneof![
        Just(Formula::Top),
        (term(n), term(n)).prop_map(|(a, b)| Formula::pred("P", vec![a, b])),
        term(n).prop_map(|a| Formula::pred("Q", vec![a])),
        (term(n), term(n)).prop_map(|(a, b)| Formula::Eq(a, b)),
    ];
    if depth == 0 {
        return atoms.boxed();
    }
    prop_oneof![
        2 => atoms,
        1 => (formula(n, depth - 1), formula(n, depth - 1)).prop_map(|(a, b)| Formula::and(a, b)),
        1 => formula(n + 1, depth - 1).prop_map(Formula::exists),
    ]
    .boxed()
}

fn random_diagram(seed: u64, dom: usize, cod: usize) -> Diagram {
    random_diagram_typed(&sig(), dom, cod, 3, &mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_agrees_with_satisfaction(phi in formula(2, 3), seed in any::<u64>(), size in 1usize..=3) {
        let sig = sig();
        let sorted = SortedFormula::new(&sig, 2, phi).unwrap();
        let m = random_model(&sig, size, &mut rng(seed));
        let got = relation_support(&eval_diagram(&m, &theta(&sorted)).unwrap());
        prop_assert_eq!(got, satisfaction_set(&m, &sorted.formula, 2));
    }

    #[test]
    fn formulas_reparse_from_display(phi in formula(2, 3)) {
        let shown = phi.display(2).to_string();
        let back = parse_formula(&shown, &sig(), 2).unwrap();
        prop_assert_eq!(back.formula, phi);
    }

    #[test]
    fn diagrams_reparse_up_to_iso(seed in any::<u64>(), dom in 0usize..3, cod in 0usize..3) {
        let d = random_diagram(seed, dom, cod);
        let back = parse_diagram(&d.to_string(), &sig()).unwrap();
        prop_assert!(back.iso_equal(&d));
    }

    #[test]
    fn structural_laws_hold_up_to_iso(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (a, b, c) = (random_diagram(s1, 1, 2), random_diagram(s2, 2, 1), random_diagram(s3, 1, 1));
        prop_assert!(a.seq(&b).seq(&c).iso_equal(&a.seq(&b.seq(&c))));
        prop_assert!(Diagram::identity(1).seq(&a).seq(&Diagram::identity(2)).iso_equal(&a));
        prop_assert!(a.par(&b).par(&c).iso_equal(&a.par(&b.par(&c))));
        // Interchange: (a ⊗ c) ; (b ⊗ id) = (a ; b) ⊗ c.
        let lhs = a.par(&c).seq(&b.par(&Diagram::identity(1)));
        prop_assert!(lhs.iso_equal(&a.seq(&b).par(&c)));
        // Naturality of the symmetry.
        let sym = a.par(&c).seq(&Diagram::swap_nm(2, 1));
        prop_assert!(sym.iso_equal(&Diagram::swap_nm(1, 1).seq(&c.par(&a))));
        prop_assert_eq!(a.seq(&b).canonical_form(), a.seq(&b).canonical_form());
    }

    #[test]
    fn evaluation_is_compositional(s1 in any::<u64>(), s2 in any::<u64>(), ms in any::<u64>(), size in 1usize..=3) {
        let (a, b) = (random_diagram(s1, 1, 2), random_diagram(s2, 2, 1));
        let m = random_model(&sig(), size, &mut rng(ms));
        let (ra, rb) = (pair_set(&eval_diagram(&m, &a).unwrap()), pair_set(&eval_diagram(&m, &b).unwrap()));
        prop_assert_eq!(pair_set(&eval_diagram(&m, &a.seq(&b)).unwrap()), naive_compose(&ra, &rb));
        prop_assert_eq!(pair_set(&eval_diagram(&m, &a.par(&b)).unwrap()), naive_tensor(&ra, &rb));
    }

    #[test]
    fn pairs_factor_exactly_when_equal(t in term(2), u in term(2)) {
        let pair = TermTuple::new(2, vec![t.clone(), u.clone()]).unwrap();
        match factor_through_diagonal(&pair) {
            Some(single) => {
                prop_assert_eq!(&t, &u);
                prop_assert_eq!(single.terms(), &[t][..]);
            }
            None => prop_assert_ne!(t, u),
        }
    }

    #[test]
    fn countermodels_refute_the_inclusion(
        hyp in formula(1, 2),
        concl in formula(1, 2),
    ) {
        let sig = unary_sig();
        let lift = |phi: Formula| -> Formula { relabel(&phi) };
        let (h, c) = (SortedFormula::new(&sig, 1, lift(hyp)).unwrap(), SortedFormula::new(&sig, 1, lift(concl)).unwrap());
        let out = countermodel_search(&theta(&h), &theta(&c), 2, 1 << 12, 0).unwrap();
        match out.found {
            Some(cm) => {
                let env = &mut cm.input.clone();
                prop_assert!(satisfies(&cm.model, &h.formula, env));
                prop_assert!(!satisfies(&cm.model, &c.formula, env));
            }
            None => {
                for size in 1..=2 {
                    for m in all_models(&sig, size) {
                        prop_assert!(satisfaction_set(&m, &h.formula, 1).is_subset(&satisfaction_set(&m, &c.formula, 1)));
                    }
                }
            }
        }
    }
}

/// Rewrites a formula over `f, h, P, Q` into one over `f:1, P:1`.
fn relabel(phi: &Formula) -> Formula {
    fn t(x: &Term) -> Term {
        match x {
            Term::Var(i) => Term::Var(*i),
            Term::App(_, args) => Term::app("f", vec![t(&args[0])]),
        }
    }
    match phi {
        Formula::Top => Formula::Top,
        Formula::Pred(_, args) => Formula::pred("P", vec![t(&args[0])]),
        Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
        Formula::And(a, b) => Formula::and(relabel(a), relabel(b)),
        Formula::Exists(a) => Formula::exists(relabel(a)),
    }
}

fn powerset(depth: usize) -> PowersetDoctrine {
    PowersetDoctrine::new(Arc::new(BaseCategory::build(&[2], depth).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exists_is_left_adjoint_to_reindexing(seed in any::<u64>(), x in 0usize..3, y in 0usize..3, second in any::<bool>()) {
        let p = powerset(2);
        let objs: Vec<Obj> = p.base().objects().iter().filter(|o| o.card() <= 4).cloned().collect();
        let (x, y) = (&objs[x % objs.len()], &objs[y % objs.len()]);
        let prod = Obj::prod(x, y);
        let (side, target, proj) = if second {
            (Side::Second, y, p.base().proj2(x, y))
        } else {
            (Side::First, x, p.base().proj1(x, y))
        };
        let mut r = rng(seed);
        let beta = p.fiber(&prod).unwrap().random(&mut r);
        let alpha = p.fiber(target).unwrap().random(&mut r);
        let fiber = p.fiber(&prod).unwrap();
        let lhs = p.fiber(target).unwrap().leq(&p.exists(&prod, side, &beta).unwrap(), &alpha);
        let rhs = fiber.leq(&beta, &p.reindex(&proj, &alpha).unwrap());
        prop_assert_eq!(lhs, rhs);
        // Frobenius reciprocity.
        let gamma = p.fiber(target).unwrap().random(&mut r);
        let left = p.exists(&prod, side, &fiber.meet(&p.reindex(&proj, &gamma).unwrap(), &beta)).unwrap();
        let right = p.fiber(target).unwrap().meet(&gamma, &p.exists(&prod, side, &beta).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn counit_round_trips(seed in any::<u64>(), x in 0usize..3, y in 0usize..3, rel in any::<bool>()) {
        let p: Arc<dyn Doctrine> = Arc::new(powerset(1));
        let b = if rel {
            FinBicat::rel_truncation(Arc::new(p.base().clone()))
        } else {
            FinBicat::of_doctrine(p.clone())
        };
        let objs = [p.base().unit(), p.base().atom(0), Obj::prod(&p.base().atom(0), &p.base().atom(0))];
        let (x, y) = (&objs[x], &objs[y]);
        let s = Arrow::new(x, y, b.hom(x, y).unwrap().random(&mut rng(seed)));
        let r = epsilon_inv(&b, &s).unwrap();
        prop_assert_eq!(epsilon(&b, &r).unwrap(), s);
    }

    #[test]
    fn bicat_composition_is_relational(seed in any::<u64>(), x in 0usize..3, y in 0usize..3, z in 0usize..3) {
        let p: Arc<dyn Doctrine> = Arc::new(powerset(1));
        let b = FinBicat::of_doctrine(p.clone());
        let objs = [p.base().unit(), p.base().atom(0), Obj::prod(&p.base().atom(0), &p.base().atom(0))];
        let (x, y, z) = (&objs[x], &objs[y], &objs[z]);
        let mut r = rng(seed);
        let f = Arrow::new(x, y, b.hom(x, y).unwrap().random(&mut r));
        let g = Arrow::new(y, z, b.hom(y, z).unwrap().random(&mut r));
        let pairs = |a: &Arrow| -> Pairs {
            a.elem.ones_iter().map(|k| (vec![k / a.cod.card()], vec![k % a.cod.card()])).collect()
        };
        prop_assert_eq!(pairs(&b.compose(&f, &g).unwrap()), naive_compose(&pairs(&f), &pairs(&g)));
        prop_assert_eq!(pairs(&b.opposite(&f).unwrap()), naive_converse(&pairs(&f)));
    }
}
