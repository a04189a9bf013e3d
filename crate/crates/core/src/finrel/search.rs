//! Bounded search for a finite model separating two diagrams.
//!
//! Candidates are ordered by carrier size, then by the concatenated function
//! tables read lexicographically (symbols in name order, entries in tuple
//! order), then by the predicate tables read as a bitmask in which tuple `t`
//! of the first predicate is bit `t`, followed by the next predicate's bits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::relation::{decode, tuple_count};
use super::{eval_diagram, FinModel, FinRelError};
use crate::diagram::Diagram;
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: FinModel,
    /// Input tuple related to `output` by the hypothesis but not the conclusion.
    pub input: Vec<usize>,
    pub output: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeSummary {
    pub carrier_size: usize,
    pub candidates: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<Countermodel>,
    pub sizes: Vec<SizeSummary>,
}

impl SearchOutcome {
    /// Whether every carrier size searched was searched exhaustively.
    pub fn exhaustive(&self) -> bool {
        self.sizes.iter().all(|s| s.exhaustive)
    }
}

/// Every model of a symbol list on a fixed carrier, indexed with function
/// tables outermost and the predicate bitmask innermost.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    size: usize,
    functions: Vec<(String, usize, usize)>,
    predicates: Vec<(String, usize, usize)>,
    fun_digits: usize,
    pred_bits: usize,
}

impl ModelSpace {
    fn new(size: usize, symbols: &[(String, usize, bool)]) -> Result<ModelSpace, FinRelError> {
        let mut functions = vec![];
        let mut predicates = vec![];
        for (name, arity, is_fun) in symbols {
            let entries = tuple_count(size, *arity)?;
            if *is_fun {
                functions.push((name.clone(), *arity, entries));
            } else {
                predicates.push((name.clone(), *arity, entries));
            }
        }
        let fun_digits = functions.iter().map(|f| f.2).sum();
        let pred_bits = predicates.iter().map(|p| p.2).sum();
        Ok(ModelSpace { size, functions, predicates, fun_digits, pred_bits })
    }

    /// The models of every symbol of `sig`.
    pub fn of_signature(sig: &Signature, size: usize) -> Result<ModelSpace, FinRelError> {
        let mut symbols: Vec<(String, usize, bool)> = sig.functions().map(|(n, a)| (n.to_string(), a, true)).collect();
        symbols.extend(sig.predicates().map(|(n, a)| (n.to_string(), a, false)));
        ModelSpace::new(size, &symbols)
    }

    /// Number of candidate models, if it fits in a `u64`.
    pub fn count(&self) -> Option<u64> {
        let mut n: u64 = 1;
        for _ in 0..self.fun_digits {
            n = n.checked_mul(self.size as u64)?;
        }
        for _ in 0..self.pred_bits {
            n = n.checked_mul(2)?;
        }
        Some(n)
    }

    fn build(&self, fun_digits: &[usize], pred_bits: &[bool]) -> FinModel {
        let mut m = FinModel::new(self.size);
        let mut at = 0;
        for (name, arity, entries) in &self.functions {
            m = m
                .with_function(name, *arity, fun_digits[at..at + entries].to_vec())
                .expect("digits lie in the carrier");
            at += entries;
        }
        let mut at = 0;
        for (name, arity, entries) in &self.predicates {
            m = m.with_predicate_members(name, *arity, pred_bits[at..at + entries].to_vec());
            at += entries;
        }
        m
    }

    /// The model at `index < count()`.
    pub fn decode(&self, index: u64) -> FinModel {
        let pred_total = 1u64 << self.pred_bits;
        let (mut fi, pi) = (index / pred_total, index % pred_total);
        let mut digits = vec![0; self.fun_digits];
        for d in digits.iter_mut().rev() {
            *d = (fi % self.size as u64) as usize;
            fi /= self.size as u64;
        }
        let bits: Vec<bool> = (0..self.pred_bits).map(|b| pi >> b & 1 == 1).collect();
        self.build(&digits, &bits)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FinModel {
        let digits: Vec<usize> = (0..self.fun_digits).map(|_| rng.gen_range(0..self.size)).collect();
        let bits: Vec<bool> = (0..self.pred_bits).map(|_| rng.gen_bool(0.5)).collect();
        self.build(&digits, &bits)
    }
}

/// First pair in `eval(hyp) \ eval(concl)`, in index order.
fn separate(m: &FinModel, hyp: &Diagram, concl: &Diagram) -> Result<Option<Countermodel>, FinRelError> {
    let h = eval_diagram(m, hyp)?;
    let c = eval_diagram(m, concl)?;
    let s = m.size();
    let first = h.index_pairs().find(|&(i, j)| !c.get(i, j));
    Ok(first.map(|(i, j)| Countermodel {
        model: m.clone(),
        input: decode(s, hyp.dom(), i),
        output: decode(s, hyp.cod(), j),
    }))
}

fn symbols_of(hyp: &Diagram, concl: &Diagram) -> Result<Vec<(String, usize, bool)>, FinRelError> {
    let mut all = hyp.symbols();
    all.extend(concl.symbols());
    all.sort();
    all.dedup();
    if let Some(w) = all.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(FinRelError::ArityMismatch(w[0].0.clone()));
    }
    Ok(all)
}

const CHUNK: usize = 4096;

/// Looks for a model on `{0..k-1}`, `k ≤ max_carrier`, and a pair related by
/// `hyp` but not by `concl`. Carrier sizes whose candidate space exceeds
/// `budget` are sampled with `budget` random candidates drawn from `seed`.
///
/// The result does not depend on the number of threads.
pub fn countermodel_search(
    hyp: &Diagram,
    concl: &Diagram,
    max_carrier: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome, FinRelError> {
    if (hyp.dom(), hyp.cod()) != (concl.dom(), concl.cod()) {
        return Err(FinRelError::WidthMismatch {
            left: (hyp.dom(), hyp.cod()),
            right: (concl.dom(), concl.cod()),
        });
    }
    let symbols = symbols_of(hyp, concl)?;
    let mut sizes = vec![];
    for k in 1..=max_carrier {
        let layout = ModelSpace::new(k, &symbols)?;
        let count = layout.count().filter(|&c| c <= budget && layout.pred_bits < 64);
        let found = match count {
            Some(total) => {
                sizes.push(SizeSummary { carrier_size: k, candidates: total, exhaustive: true });
                (0..total)
                    .into_par_iter()
                    .map(|i| separate(&layout.decode(i), hyp, concl))
                    .find_first(|r| !matches!(r, Ok(None)))
                    .transpose()?
                    .flatten()
            }
            None => {
                sizes.push(SizeSummary { carrier_size: k, candidates: budget, exhaustive: false });
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).rotate_left(32));
                let mut left = budget;
                let mut found = None;
                while left > 0 && found.is_none() {
                    let n = left.min(CHUNK as u64);
                    left -= n;
                    let batch: Vec<FinModel> = (0..n).map(|_| layout.sample(&mut rng)).collect();
                    found = batch
                        .par_iter()
                        .map(|m| separate(m, hyp, concl))
                        .find_first(|r| !matches!(r, Ok(None)))
                        .transpose()?
                        .flatten();
                }
                found
            }
        };
        if found.is_some() {
            return Ok(SearchOutcome { found, sizes });
        }
    }
    Ok(SearchOutcome { found: None, sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, theta};
    use crate::signature::Signature;

    fn pair() -> (Diagram, Diagram) {
        let s = Signature::new([("f", 1)], [("P", 2)]).unwrap();
        let psi = theta(&parse_formula("exists x2. P(x2,x1) & f(x1) = x2", &s, 1).unwrap());
        let phi = theta(&parse_formula("exists x2. P(x2,x1)", &s, 1).unwrap());
        (psi, phi)
    }

    #[test]
    fn reverse_entailment_fails_on_two_elements() {
        let (psi, phi) = pair();
        let out = countermodel_search(&phi, &psi, 3, 1_000_000, 0).unwrap();
        let cm = out.found.clone().unwrap();
        assert_eq!(cm.model.size(), 2);
        assert_eq!(cm.model.function("f").unwrap().values, vec![0, 0]);
        assert_eq!(cm.model.predicate("P").unwrap().members, vec![false, false, true, false]);
        assert_eq!(cm.input, vec![0]);
        assert!(out.exhaustive());
    }

    #[test]
    fn valid_entailment_has_no_countermodel() {
        let (psi, phi) = pair();
        let out = countermodel_search(&psi, &phi, 3, 1_000_000, 0).unwrap();
        assert!(out.found.is_none());
        assert!(out.exhaustive());
        assert!(countermodel_search(&psi, &psi, 2, 1000, 0).unwrap().found.is_none());
    }

    #[test]
    fn sampling_is_deterministic() {
        let (psi, phi) = pair();
        let a = countermodel_search(&phi, &psi, 3, 5, 11).unwrap();
        let b = countermodel_search(&phi, &psi, 3, 5, 11).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive());
    }
}
