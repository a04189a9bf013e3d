//! One PASS/FAIL line per acceptance criterion. Budgets, object lists and time
//! limits are pinned below.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regdiag::adjunction::{check_epsilon_iso, check_eta_iso, check_fiberwise_iso, check_triangle_left, check_triangle_right, eta_is_iso};
use regdiag::bicat::{
    check_comprehensive_diagonals, check_map_detection, check_oracle_agreement, check_ruc, doctrine_of_cbc, is_map, verify_cbc_axioms,
    Arrow, FinBicat,
};
use regdiag::diagram::Diagram;
use regdiag::doctrine::{doctrine_from_file, samples, validate_doctrine, BaseCategory, Budget, Doctrine, Elem, Obj, PowersetDoctrine};
use regdiag::finrel::{check_axiom_soundness, countermodel_search, eval_diagram, FinModel, FinRelation};
use regdiag::logic::{factor_through_diagonal, parse_formula, theta, SortedFormula, Term, TermTuple};
use regdiag::report::Report;
use regdiag::rewrite::{check_derivation, load_derivations, Relation};
use regdiag::Signature;
use support::*;

/// Enumeration budget for every doctrine and bicategory check.
const BUDGET: Budget = Budget { cap: 1 << 16, samples: 1024, seed: 0 };
/// Candidate models per carrier size in the countermodel search.
const SEARCH_BUDGET: u64 = 1 << 20;
/// Random diagrams per model for the lax rules in the soundness sweep.
const SOUNDNESS_SAMPLES: usize = 8;
const RANDOM_MODELS: usize = 200;
const RANDOM_TERMS: usize = 100;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn timed(limit: Duration, start: Instant, mut o: Outcome) -> Outcome {
    let took = start.elapsed();
    o.detail = format!("{} [{:.2}s, limit {}s]", o.detail, took.as_secs_f64(), limit.as_secs());
    o.ok &= took < limit;
    o
}

fn summary(r: &Report) -> String {
    let ex: u64 = r.checks.iter().map(|c| c.exhaustive_instances).sum();
    let sa: u64 = r.checks.iter().map(|c| c.sampled_instances).sum();
    let sk: u64 = r.checks.iter().map(|c| c.skipped_instances).sum();
    let mut s = format!("{} checks, {ex} exhaustive + {sa} sampled instances, {sk} skipped", r.checks.len());
    if let Some(f) = r.failures().next() {
        s += &format!("; first failure {} ({})", f.id, f.witness.clone().unwrap_or_default());
    }
    s
}

fn fixture_sig() -> Signature {
    Signature::from_json(&fixture("sig.json")).unwrap()
}

fn pow(depth: usize) -> Arc<dyn Doctrine> {
    Arc::new(PowersetDoctrine::new(Arc::new(BaseCategory::build(&[2], depth).unwrap())))
}

/// Objects of the depth-2 base with at most four elements.
fn small_objects(p: &dyn Doctrine) -> Vec<Obj> {
    p.base().objects().iter().filter(|x| x.card() <= 4).cloned().collect()
}

/// `I`, `A` and the unit products, all of size at most two.
fn tiny_objects(p: &dyn Doctrine) -> Vec<Obj> {
    let (i, a) = (p.base().unit(), p.base().atom(0));
    vec![i.clone(), a.clone(), Obj::prod(&a, &i), Obj::prod(&i, &a), Obj::prod(&i, &i)]
}

fn example_round_trip() -> Outcome {
    let start = Instant::now();
    let sig = fixture_sig();
    let (dv, goal) = load_derivations(&fixture("entailment.deriv")).unwrap()[0].resolve(&sig).unwrap();
    let v = check_derivation(&dv, &goal);
    let psi = parse_formula("exists x2. P(x2,x1) & f(x1) = x2", &sig, 1).unwrap();
    let phi = parse_formula("exists x2. P(x2,x1)", &sig, 1).unwrap();
    let forward = countermodel_search(&theta(&psi), &theta(&phi), 3, SEARCH_BUDGET, 0).unwrap();
    let backward = countermodel_search(&theta(&phi), &theta(&psi), 3, SEARCH_BUDGET, 0).unwrap();
    let witness_ok = backward.found.as_ref().is_some_and(|cm| {
        let env = &mut cm.input.clone();
        cm.model.size() == 2 && satisfies(&cm.model, &phi.formula, env) && !satisfies(&cm.model, &psi.formula, env)
    });
    let ok = v.accepted
        && v.established == Some(Relation::Le)
        && forward.found.is_none()
        && forward.exhaustive()
        && witness_ok;
    let detail = format!(
        "derivation {:?}, ψ⊢φ countermodel {}, φ⊢ψ countermodel at size {:?}",
        v.established,
        if forward.found.is_none() { "none" } else { "FOUND" },
        backward.found.as_ref().map(|c| c.model.size()),
    );
    timed(Duration::from_secs(10), start, outcome(ok, detail))
}

fn axiom_soundness() -> Outcome {
    let start = Instant::now();
    let sig = fixture_sig();
    let mut models: Vec<FinModel> = all_models(&sig, 1);
    let two = all_models(&sig, 2);
    assert_eq!(two.len(), 4 * 16);
    models.extend(two);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    models.extend((0..RANDOM_MODELS).map(|_| random_model(&sig, 3, &mut rng)));
    let (mut checks, mut violations) = (0, vec![]);
    for (k, m) in models.iter().enumerate() {
        let r = check_axiom_soundness(m, SOUNDNESS_SAMPLES, k as u64).unwrap();
        checks += r.checks;
        violations.extend(r.violations);
    }
    let detail = format!("{} models, {checks} rule instances, {} violations", models.len(), violations.len());
    timed(Duration::from_secs(60), start, outcome(violations.is_empty(), detail))
}

fn snake_equations() -> Outcome {
    let sig = fixture_sig();
    let files = load_derivations(&fixture("snake.deriv")).unwrap();
    let mut ok = files.len() == 2;
    let mut models = 0;
    for file in &files {
        let (dv, goal) = file.resolve(&sig).unwrap();
        let v = check_derivation(&dv, &goal);
        ok &= v.accepted && v.established == Some(Relation::Eq) && goal == Diagram::id1();
        for size in 1..=3 {
            for m in all_models(&sig, size) {
                models += 1;
                ok &= eval_diagram(&m, &dv.start).unwrap() == FinRelation::identity(size, 1).unwrap();
            }
        }
    }
    outcome(ok, format!("{} derivations accepted with =, snake = id in {models} model evaluations", files.len()))
}

fn pairs_of(_dom: &Obj, y: &Obj, e: &Elem) -> Pairs {
    e.ones_iter().map(|k| (vec![k / y.card()], vec![k % y.card()])).collect()
}

fn bicat_matches_relations() -> Outcome {
    let start = Instant::now();
    let p = pow(1);
    let b = FinBicat::of_doctrine(p.clone());
    let objs = tiny_objects(p.as_ref());
    let report = check_oracle_agreement(&b, &objs, &BUDGET);
    let mut mismatches = 0;
    for x in &objs {
        for y in &objs {
            let hxy: Vec<Elem> = b.hom(x, y).unwrap().elements().collect();
            let op = |r: &Elem| b.opposite(&Arrow::new(x, y, r.clone())).unwrap().elem;
            mismatches += hxy.iter().filter(|r| pairs_of(y, x, &op(r)) != naive_converse(&pairs_of(x, y, r))).count();
            for z in &objs {
                let hyz: Vec<Elem> = b.hom(y, z).unwrap().elements().collect();
                for r in &hxy {
                    for s in &hyz {
                        let c = b.compose(&Arrow::new(x, y, r.clone()), &Arrow::new(y, z, s.clone())).unwrap();
                        mismatches += usize::from(pairs_of(x, z, &c.elem) != naive_compose(&pairs_of(x, y, r), &pairs_of(y, z, s)));
                    }
                }
            }
        }
    }
    // Tensor on A⊗A, indices flattened as in (A×C)×(B×D).
    let a = p.base().atom(0);
    let haa: Vec<Elem> = b.hom(&a, &a).unwrap().elements().collect();
    for r in &haa {
        for s in &haa {
            let t = b.tensor(&Arrow::new(&a, &a, r.clone()), &Arrow::new(&a, &a, s.clone())).unwrap();
            let got: Pairs = t.elem.ones_iter().map(|k| (vec![k / 4 / 2, k / 4 % 2], vec![k % 4 / 2, k % 2])).collect();
            mismatches += usize::from(got != naive_tensor(&pairs_of(&a, &a, r), &pairs_of(&a, &a, s)));
        }
    }
    let ok = report.passed() && mismatches == 0 && haa.len() * haa.len() >= 256;
    let detail = format!("{}; independent pair-set oracle: {mismatches} mismatches, 16×16 pairs per A-hom", summary(&report));
    timed(Duration::from_secs(60), start, outcome(ok, detail))
}

fn powerset_validates() -> Outcome {
    let report = validate_doctrine(pow(2).as_ref(), &BUDGET);
    let bad = doctrine_from_file(&fixture("pow2-bad-exists.doctrine.json")).unwrap();
    let bad_report = validate_doctrine(&bad, &BUDGET);
    let witness = bad_report.failures().find_map(|c| c.witness.clone());
    println!("    corrupted fixture witness: {}", witness.clone().unwrap_or_else(|| "none".into()));
    let ids = ["exists.adjoint", "exists.elementary", "exists.diagonal", "beck_chevalley", "frobenius", "delta.least_reflexive", "lax_square"];
    let covered = ids.iter().all(|id| report.check(id).is_some_and(|c| c.passed()));
    let ok = report.passed() && covered && !bad_report.passed() && witness.is_some();
    outcome(ok, format!("pow depth 2: {}; corrupted fixture fails", summary(&report)))
}

fn cbc_axioms_hold() -> Outcome {
    let p = pow(2);
    let objs = small_objects(p.as_ref());
    let bp = verify_cbc_axioms(&FinBicat::of_doctrine(p.clone()), &objs, &BUDGET);
    let base = Arc::new(p.base().clone());
    let rel = verify_cbc_axioms(&FinBicat::rel_truncation(base), &objs, &BUDGET);
    // hom(A×A, A×A) has 2^32 meet pairs, so on the larger list only ⊤ must be
    // exhaustive; ∧ is exhaustive on the objects of size at most two.
    let tiny = tiny_objects(p.as_ref());
    let bp_tiny = verify_cbc_axioms(&FinBicat::of_doctrine(p.clone()), &tiny, &BUDGET);
    let rel_tiny = verify_cbc_axioms(&FinBicat::rel_truncation(Arc::new(p.base().clone())), &tiny, &BUDGET);
    let exhaustive = |r: &Report, id: &str| r.check(id).is_some_and(|c| c.passed() && c.exhaustive());
    let top_meet = [&bp, &rel].iter().all(|r| exhaustive(r, "hom.top"))
        && [&bp_tiny, &rel_tiny].iter().all(|r| exhaustive(r, "hom.top") && exhaustive(r, "hom.meet"));
    let ok = bp.passed() && rel.passed() && bp_tiny.passed() && rel_tiny.passed() && top_meet;
    let meet = |r: &Report| r.check("hom.meet").map(|c| format!("{}+{}", c.exhaustive_instances, c.sampled_instances)).unwrap_or_default();
    let detail = format!(
        "Bicat(pow): {}; Rel: {}; hom.meet exhaustive+sampled {} / {} on size ≤ 4, exhaustive on size ≤ 2",
        summary(&bp),
        summary(&rel),
        meet(&bp),
        meet(&rel)
    );
    outcome(ok, detail)
}

fn is_function_graph(x: &Obj, y: &Obj, r: &Elem) -> bool {
    (0..x.card()).all(|a| (0..y.card()).filter(|&b| r.get(a * y.card() + b)).count() == 1)
}

fn maps_are_function_graphs() -> Outcome {
    let p = pow(1);
    let objs = tiny_objects(p.as_ref());
    let report = check_map_detection(&p, &objs, &BUDGET);
    let (mut agree, mut total, mut graphs) = (true, 0, 0);
    for x in &objs {
        for y in &objs {
            let fiber = p.fiber(&Obj::prod(x, y)).unwrap();
            let detected: Vec<Elem> = fiber.elements().filter(|r| is_map(p.as_ref(), x, y, r).unwrap()).collect();
            let expected: Vec<Elem> = fiber.elements().filter(|r| is_function_graph(x, y, r)).collect();
            agree &= detected == expected && expected.len() == y.card().pow(x.card() as u32);
            total += fiber.size().unwrap();
            graphs += expected.len();
        }
    }
    outcome(report.passed() && agree, format!("{total} relations, {graphs} maps, equal to the function graphs; {}", summary(&report)))
}

fn adjunction_holds() -> Outcome {
    let p = pow(2);
    let objs = small_objects(p.as_ref());
    let bp = FinBicat::of_doctrine(p.clone());
    let rel = FinBicat::rel_truncation(Arc::new(p.base().clone()));
    let mut r = check_triangle_left(&p, &objs, &BUDGET);
    for b in [&bp, &rel] {
        r.extend(check_triangle_right(b, &objs, &BUDGET));
        r.extend(check_epsilon_iso(b, &objs, &BUDGET));
    }
    let pow_iso = check_eta_iso(&p, &BUDGET);
    let mut verdicts = vec![format!("pow iso={}", eta_is_iso(&pow_iso))];
    let mut ok = r.passed() && pow_iso.passed() && eta_is_iso(&pow_iso);
    let table: Arc<dyn Doctrine> = Arc::new(doctrine_from_file(&fixture("pow2.doctrine.json")).unwrap());
    let shipped: Vec<(&str, Arc<dyn Doctrine>)> = vec![
        ("pow2.json", table),
        ("pow-neg", Arc::new(samples::pow_over_negation(1).unwrap())),
        ("pow-klein", Arc::new(samples::pow_over_klein(1).unwrap())),
    ];
    for (name, q) in shipped {
        let e = check_eta_iso(&q, &BUDGET);
        let (full, faithful) = (e.check("eta_iso.full").unwrap().passed(), e.check("eta_iso.faithful").unwrap().passed());
        let (ruc, diag) = (check_ruc(&q, &BUDGET).passed(), check_comprehensive_diagonals(&q, &BUDGET).passed());
        ok &= full == ruc && faithful == diag;
        ok &= ["eta_iso.full_vs_ruc", "eta_iso.faithful_vs_diagonals"].iter().all(|id| e.check(id).unwrap().passed());
        verdicts.push(format!("{name} full={full}/ruc={ruc} faithful={faithful}/diag={diag}"));
    }
    ok &= verdicts[2].contains("full=false") && verdicts[3].contains("faithful=false");
    outcome(ok, format!("triangles and ε: {}; {}", summary(&r), verdicts.join(", ")))
}

fn relations_recover_powerset() -> Outcome {
    let p = pow(2);
    let objs = small_objects(p.as_ref());
    let q = doctrine_of_cbc(FinBicat::rel_truncation(Arc::new(p.base().clone())));
    let valid = validate_doctrine(&q, &BUDGET);
    let iso = check_fiberwise_iso(&p, &q, &objs, &BUDGET);
    outcome(valid.passed() && iso.passed(), format!("R(Rel) validates: {}; fiberwise iso: {}", summary(&valid), summary(&iso)))
}

fn diagonal_factoring() -> Outcome {
    let sig = Signature::new([("f", 1), ("g1", 1), ("g2", 1), ("h", 2)], [("P", 2)]).unwrap();
    let g = |name: &str| Term::app(name, vec![Term::var(1)]);
    let klein = TermTuple::checked(&sig, 1, vec![g("g1"), g("g2")]).unwrap();
    let mut ok = factor_through_diagonal(&klein).is_none();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..RANDOM_TERMS {
        let n = rng.gen_range(1..=3);
        let t = random_term(&sig, n, 3, &mut rng);
        let pair = TermTuple::checked(&sig, n, vec![t.clone(), t.clone()]).unwrap();
        ok &= factor_through_diagonal(&pair) == Some(TermTuple::checked(&sig, n, vec![t]).unwrap());
    }
    outcome(ok, format!("⟨g1(x1),g2(x1)⟩ does not factor; {RANDOM_TERMS} random ⟨t,t⟩ factor as ⟨t⟩"))
}

fn theta_matches_tarski() -> Outcome {
    let start = Instant::now();
    let sig = Signature::new([("f", 1)], [("P", 1)]).unwrap();
    let models: Vec<FinModel> = (1..=2).flat_map(|k| all_models(&sig, k)).collect();
    let (mut formulas_checked, mut mismatches) = (0, 0);
    for n in 0..=2 {
        for phi in formulas(n, 3) {
            let sorted = SortedFormula::new(&sig, n, phi).unwrap();
            let d = theta(&sorted);
            formulas_checked += 1;
            for m in &models {
                let got = relation_support(&eval_diagram(m, &d).unwrap());
                mismatches += usize::from(got != satisfaction_set(m, &sorted.formula, n));
            }
        }
    }
    let detail = format!("{formulas_checked} formulas (contexts 0..2) × {} models, {mismatches} mismatches", models.len());
    timed(Duration::from_secs(120), start, outcome(mismatches == 0, detail))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("entailment round trip", example_round_trip),
        ("axiom soundness", axiom_soundness),
        ("snake equations", snake_equations),
        ("Bicat(pow) against relation oracle", bicat_matches_relations),
        ("powerset doctrine validates", powerset_validates),
        ("cartesian bicategory axioms", cbc_axioms_hold),
        ("maps are function graphs", maps_are_function_graphs),
        ("adjunction", adjunction_holds),
        ("doctrine of Rel is the powerset doctrine", relations_recover_powerset),
        ("diagonal factoring", diagonal_factoring),
        ("Θ against Tarskian semantics", theta_matches_tarski),
    ];
    let mut failed = vec![];
    println!();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed().as_secs_f64();
        println!("{} {:>2} {name}: {} ({took:.1}s)", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
