//! Translation of term tuples and formulas into diagrams.
//!
//! A tuple `⟨t1..tm⟩ : n -> m` becomes a wiring layer that copies, discards
//! and permutes the `n` input wires into one wire per variable occurrence,
//! followed by the tensor of the linear parts of the terms.

use super::{Formula, SortedFormula, Term, TermTuple};
use crate::diagram::Diagram;

/// `k` copies of one wire: `discard`, `id`, `copy`, then `copy ; (id ⊗ tree(k-1))`.
fn copy_tree(k: usize) -> Diagram {
    match k {
        0 => Diagram::discard(),
        1 => Diagram::id1(),
        2 => Diagram::copy(),
        _ => Diagram::copy().seq(&Diagram::id1().par(&copy_tree(k - 1))),
    }
}

/// Wiring `n -> occ.len()` whose `j`-th output carries variable `occ[j]` (1-based).
fn wiring(n: usize, occ: &[usize]) -> Diagram {
    if occ.len() == n && occ.iter().enumerate().all(|(j, &v)| v == j + 1) {
        return Diagram::identity(n);
    }
    let mut counts = vec![0usize; n];
    for &v in occ {
        counts[v - 1] += 1;
    }
    let trees: Vec<Diagram> = counts.iter().map(|&k| copy_tree(k)).collect();
    let spread = Diagram::tensor_all(trees.iter());
    // Position of the r-th copy of variable v in the output of `spread`.
    let mut offsets = vec![0usize; n];
    for v in 1..n {
        offsets[v] = offsets[v - 1] + counts[v - 1];
    }
    let mut seen = vec![0usize; n];
    let perm: Vec<usize> = occ
        .iter()
        .map(|&v| {
            let p = offsets[v - 1] + seen[v - 1];
            seen[v - 1] += 1;
            p
        })
        .collect();
    if perm.iter().enumerate().all(|(j, &p)| j == p) {
        spread
    } else {
        spread.seq(&Diagram::permutation(&perm))
    }
}

/// The term with each variable occurrence read from its own wire.
fn linear(t: &Term) -> Diagram {
    match t {
        Term::Var(_) => Diagram::id1(),
        Term::App(f, args) => {
            let gen = Diagram::generator(crate::diagram::Generator::func(f, args.len()));
            if args.iter().all(|a| matches!(a, Term::Var(_))) {
                return gen;
            }
            let parts: Vec<Diagram> = args.iter().map(linear).collect();
            Diagram::tensor_all(parts.iter()).seq(&gen)
        }
    }
}

fn terms_diagram(n: usize, terms: &[Term]) -> Diagram {
    let mut occ = Vec::new();
    for t in terms {
        t.occurrences(&mut occ);
    }
    let w = wiring(n, &occ);
    let parts: Vec<Diagram> = terms.iter().map(linear).collect();
    let body = Diagram::tensor_all(parts.iter());
    if terms.iter().all(|t| matches!(t, Term::Var(_))) {
        w
    } else {
        w.seq(&body)
    }
}

/// Diagram `n -> m` of a tuple.
pub fn theta_term(t: &TermTuple) -> Diagram {
    terms_diagram(t.dom(), t.terms())
}

fn theta_in(phi: &Formula, n: usize) -> Diagram {
    match phi {
        Formula::Top => Diagram::discard_n(n),
        Formula::Pred(p, args) => {
            let gen = Diagram::generator(crate::diagram::Generator::pred(p, args.len()));
            terms_diagram(n, args).seq(&gen)
        }
        Formula::Eq(a, b) => terms_diagram(n, &[a.clone(), b.clone()])
            .seq(&Diagram::cocopy())
            .seq(&Diagram::discard()),
        Formula::And(a, b) => Diagram::copy_n(n).seq(&theta_in(a, n).par(&theta_in(b, n))),
        Formula::Exists(a) => Diagram::identity(n).par(&Diagram::codiscard()).seq(&theta_in(a, n + 1)),
    }
}

/// Diagram `n -> 0` of a formula in context `n`.
pub fn theta(phi: &SortedFormula) -> Diagram {
    theta_in(&phi.formula, phi.context)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_tuple};
    use crate::signature::Signature;

    fn sig() -> Signature {
        Signature::new([("f", 1), ("m", 2)], [("P", 2)]).unwrap()
    }

    fn th(text: &str, n: usize) -> Diagram {
        theta(&parse_formula(text, &sig(), n).unwrap())
    }

    #[test]
    fn existential_over_swapped_predicate() {
        let expected = Diagram::id1()
            .par(&Diagram::codiscard())
            .seq(&Diagram::swap())
            .seq(&Diagram::generator(crate::diagram::Generator::pred("P", 2)));
        assert!(th("exists x2. P(x2,x1)", 1).iso_equal(&expected));
    }

    #[test]
    fn equality_is_a_cap() {
        assert!(th("x1 = x2", 2).iso_equal(&Diagram::cap(1)));
    }

    #[test]
    fn top_discards() {
        assert_eq!(th("T", 3), Diagram::discard_n(3));
    }

    #[test]
    fn tuples_of_variables_are_structural() {
        let s = sig();
        for n in 0..4 {
            let dup = theta_term(&TermTuple::duplicator(n));
            assert!(dup.iso_equal(&Diagram::copy_n(n)), "n = {n}");
            assert!(theta_term(&TermTuple::discharger(n)).iso_equal(&Diagram::discard_n(n)));
            assert_eq!(theta_term(&TermTuple::identity(n)), Diagram::identity(n));
        }
        let t = parse_tuple("<x2, x1>", &s, 2).unwrap();
        assert!(theta_term(&t).iso_equal(&Diagram::swap()));
        let t = parse_tuple("<x1, x1, x1>", &s, 1).unwrap();
        let three = Diagram::copy().seq(&Diagram::id1().par(&Diagram::copy()));
        assert!(theta_term(&t).iso_equal(&three));
    }

    #[test]
    fn nested_terms() {
        let s = sig();
        let t = parse_tuple("<m(f(x1), x1)>", &s, 1).unwrap();
        let f = Diagram::generator(crate::diagram::Generator::func("f", 1));
        let m = Diagram::generator(crate::diagram::Generator::func("m", 2));
        let expected = Diagram::copy().seq(&f.par(&Diagram::id1())).seq(&m);
        assert!(theta_term(&t).iso_equal(&expected));
    }
}
