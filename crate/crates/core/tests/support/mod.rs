//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's evaluator or relation algebra; models are read through their raw
//! tables only.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use regdiag::finrel::{FinModel, FinRelation};
use regdiag::logic::{Formula, Term};
use regdiag::Signature;

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn index(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * size + a)
}

pub fn tuples(size: usize, width: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..width {
        out = out.into_iter().flat_map(|t| (0..size).map(move |a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Every model of `sig` on a carrier of `size` elements.
pub fn all_models(sig: &Signature, size: usize) -> Vec<FinModel> {
    let mut models = vec![FinModel::new(size)];
    for (f, arity) in sig.functions() {
        let rows = size.pow(arity as u32);
        let tables = tuples(size, rows);
        models = models
            .into_iter()
            .flat_map(|m| tables.iter().map(move |t| m.clone().with_function(f, arity, t.clone()).unwrap()))
            .collect();
    }
    for (p, arity) in sig.predicates() {
        let all = tuples(size, arity);
        let subsets: Vec<Vec<Vec<usize>>> = (0..1u64 << all.len())
            .map(|mask| all.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, t)| t.clone()).collect())
            .collect();
        models = models
            .into_iter()
            .flat_map(|m| subsets.iter().map(move |s| m.clone().with_predicate(p, arity, s).unwrap()))
            .collect();
    }
    models
}

pub fn random_model<R: Rng>(sig: &Signature, size: usize, rng: &mut R) -> FinModel {
    let mut m = FinModel::new(size);
    for (f, arity) in sig.functions() {
        let values = (0..size.pow(arity as u32)).map(|_| rng.gen_range(0..size)).collect();
        m = m.with_function(f, arity, values).unwrap();
    }
    for (p, arity) in sig.predicates() {
        let members: Vec<Vec<usize>> = tuples(size, arity).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        m = m.with_predicate(p, arity, &members).unwrap();
    }
    m
}

pub fn term_value(m: &FinModel, t: &Term, env: &[usize]) -> usize {
    match t {
        Term::Var(i) => env[i - 1],
        Term::App(f, args) => {
            let table = m.function(f).expect("function interpreted");
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, env)).collect();
            table.values[index(m.size(), &vals)]
        }
    }
}

/// Tarskian satisfaction under an assignment of `x1..xn`.
pub fn satisfies(m: &FinModel, phi: &Formula, env: &mut Vec<usize>) -> bool {
    match phi {
        Formula::Top => true,
        Formula::Pred(p, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term_value(m, a, env)).collect();
            m.predicate(p).expect("predicate interpreted").members[index(m.size(), &vals)]
        }
        Formula::Eq(a, b) => term_value(m, a, env) == term_value(m, b, env),
        Formula::And(a, b) => satisfies(m, a, env) && satisfies(m, b, env),
        Formula::Exists(body) => (0..m.size()).any(|v| {
            env.push(v);
            let holds = satisfies(m, body, env);
            env.pop();
            holds
        }),
    }
}

/// The satisfaction set of a formula in context `n`, as a set of tuples.
pub fn satisfaction_set(m: &FinModel, phi: &Formula, n: usize) -> BTreeSet<Vec<usize>> {
    tuples(m.size(), n).into_iter().filter(|a| satisfies(m, phi, &mut a.clone())).collect()
}

/// `{a | (a, ()) ∈ r}` for a relation into the empty tuple.
pub fn relation_support(r: &FinRelation) -> BTreeSet<Vec<usize>> {
    assert_eq!(r.cod(), 0);
    r.pairs().into_iter().map(|(a, _)| a).collect()
}

/// Terms over `x1..xn` of depth at most `d`, unary symbol `f` only.
pub fn unary_terms(n: usize, d: usize) -> Vec<Term> {
    let mut out: Vec<Term> = (1..=n).map(Term::var).collect();
    let mut layer = out.clone();
    for _ in 0..d {
        layer = layer.into_iter().map(|t| Term::app("f", vec![t])).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every formula of depth at most `d` in context `n` over `f:1`, `P:1`.
pub fn formulas(n: usize, d: usize) -> Vec<Formula> {
    if d == 0 {
        return vec![Formula::Top];
    }
    let terms = unary_terms(n, d - 1);
    let smaller = formulas(n, d - 1);
    let mut out = vec![Formula::Top];
    out.extend(terms.iter().map(|t| Formula::pred("P", vec![t.clone()])));
    for a in &terms {
        out.extend(terms.iter().map(|b| Formula::Eq(a.clone(), b.clone())));
    }
    for a in &smaller {
        out.extend(smaller.iter().map(|b| Formula::and(a.clone(), b.clone())));
    }
    out.extend(formulas(n + 1, d - 1).into_iter().map(Formula::exists));
    out
}

/// A random term over `x1..xn` of depth at most `d`.
pub fn random_term<R: Rng>(sig: &Signature, n: usize, d: usize, rng: &mut R) -> Term {
    let symbols: Vec<(&str, usize)> = sig.functions().collect();
    if d == 0 || symbols.is_empty() || rng.gen_bool(0.3) {
        return Term::var(rng.gen_range(1..=n));
    }
    let (f, arity) = symbols[rng.gen_range(0..symbols.len())];
    Term::app(f, (0..arity).map(|_| random_term(sig, n, d - 1, rng)).collect())
}

pub type Pairs = BTreeSet<(Vec<usize>, Vec<usize>)>;

pub fn pair_set(r: &FinRelation) -> Pairs {
    r.pairs().into_iter().collect()
}

pub fn naive_compose(r: &Pairs, s: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for (a, b) in r {
        for (b2, c) in s {
            if b == b2 {
                out.insert((a.clone(), c.clone()));
            }
        }
    }
    out
}

pub fn naive_tensor(r: &Pairs, s: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for (a, b) in r {
        for (c, d) in s {
            out.insert(([a.clone(), c.clone()].concat(), [b.clone(), d.clone()].concat()));
        }
    }
    out
}

pub fn naive_converse(r: &Pairs) -> Pairs {
    r.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
}
