//! Rule-by-rule soundness of the axioms in a given model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rayon::prelude::*;

use super::{eval_diagram, FinModel, FinRelError, ModelSpace};
use crate::diagram::random::{enumerate_small, random_diagram_typed};
use crate::diagram::{Diagram, Generator};
use crate::rewrite::{rule_catalog, Metavar, Relation};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub instance: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub carrier_size: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

fn model_signature(m: &FinModel) -> Signature {
    let fns: Vec<(&str, usize)> = m.functions().map(|(n, t)| (n, t.arity)).collect();
    let preds: Vec<(&str, usize)> = m.predicates().map(|(n, t)| (n, t.arity)).collect();
    Signature::new(fns, preds).expect("model symbols form a signature")
}

/// Checks every catalog rule in `m`.
///
/// Function-box rules are instantiated at every function symbol; the lax rules
/// at every generator, tensor and composite of two generators, plus `samples`
/// random diagrams of up to three layers.
pub fn check_axiom_soundness(m: &FinModel, samples: usize, seed: u64) -> Result<SoundnessReport, FinRelError> {
    let sig = model_signature(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut any: Vec<Diagram> = enumerate_small(&sig);
    for _ in 0..samples {
        let dom = rng.gen_range(0..=2);
        let cod = rng.gen_range(0..=2);
        let layers = rng.gen_range(1..=3);
        any.push(random_diagram_typed(&sig, dom, cod, layers, &mut rng));
    }
    let boxes: Vec<Diagram> =
        sig.functions().map(|(n, a)| Diagram::generator(Generator::func(n, a))).collect();

    let mut report = SoundnessReport { carrier_size: m.size(), checks: 0, violations: vec![] };
    for rule in rule_catalog() {
        let instances: Vec<Option<&Diagram>> = match rule.metavar {
            Metavar::None => vec![None],
            Metavar::FunctionBox => boxes.iter().map(Some).collect(),
            Metavar::Any => any.iter().map(Some).collect(),
        };
        for inst in instances {
            let (lhs, rhs) = rule.instantiate(inst, None).expect("catalog instances are well-typed");
            let (l, r) = (eval_diagram(m, &lhs)?, eval_diagram(m, &rhs)?);
            let holds = match rule.relation {
                Relation::Eq => l == r,
                Relation::Le => l.is_subset(&r)?,
            };
            report.checks += 1;
            if !holds {
                report.violations.push(Violation {
                    rule: rule.id.into(),
                    instance: inst.map(|d| d.to_string()),
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                });
            }
        }
    }
    Ok(report)
}

/// A violation together with the model it occurred in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelViolation {
    pub model: String,
    #[serde(flatten)]
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    /// Carrier sizes enumerated in full.
    pub exhaustive_sizes: Vec<usize>,
    pub exhaustive_models: u64,
    pub random_models: u64,
    pub random_size: usize,
    pub checks: usize,
    pub violations: Vec<ModelViolation>,
}

/// Runs [`check_axiom_soundness`] in every model of `sig` with carrier size up
/// to `max_carrier`, then in `random_models` random models of size
/// `random_size`. Model `k` uses seed `seed + k` for its random diagrams.
pub fn soundness_sweep(
    sig: &Signature,
    max_carrier: usize,
    random_size: usize,
    random_models: u64,
    samples: usize,
    seed: u64,
) -> Result<SweepReport, FinRelError> {
    let mut models: Vec<FinModel> = vec![];
    for k in 1..=max_carrier {
        let space = ModelSpace::of_signature(sig, k)?;
        let count = space.count().filter(|&c| c <= 1 << 20).ok_or(FinRelError::TooLarge { size: k, width: 0 })?;
        models.extend((0..count).map(|i| space.decode(i)));
    }
    let exhaustive_models = models.len() as u64;
    if random_models > 0 {
        let space = ModelSpace::of_signature(sig, random_size)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        models.extend((0..random_models).map(|_| space.sample(&mut rng)));
    }
    let reports: Vec<(usize, SoundnessReport)> = models
        .par_iter()
        .enumerate()
        .map(|(k, m)| check_axiom_soundness(m, samples, seed.wrapping_add(k as u64)).map(|r| (k, r)))
        .collect::<Result<_, _>>()?;
    let mut out = SweepReport {
        exhaustive_sizes: (1..=max_carrier).collect(),
        exhaustive_models,
        random_models,
        random_size,
        checks: 0,
        violations: vec![],
    };
    for (k, r) in reports {
        out.checks += r.checks;
        out.violations.extend(r.violations.into_iter().map(|v| ModelViolation { model: models[k].to_json(), violation: v }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::find_rule;

    #[test]
    fn sound_in_a_small_model() {
        let m = FinModel::new(2)
            .with_function("f", 1, vec![1, 1])
            .unwrap()
            .with_predicate("P", 2, &[vec![0, 1]])
            .unwrap();
        let report = check_axiom_soundness(&m, 20, 3).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert!(report.checks > 100);
    }

    #[test]
    fn lax_discard_is_strict_for_partial_predicates() {
        let m = FinModel::new(2).with_predicate("P", 1, &[vec![0]]).unwrap();
        let p = Diagram::generator(Generator::pred("P", 1));
        let (l, r) = find_rule("lax.discard").unwrap().instantiate(Some(&p), None).unwrap();
        let (l, r) = (eval_diagram(&m, &l).unwrap(), eval_diagram(&m, &r).unwrap());
        assert!(l.is_subset(&r).unwrap());
        assert_ne!(l, r);
    }

    #[test]
    fn sweep_covers_every_small_model() {
        let sig = Signature::new([("f", 1)], [("P", 2)]).unwrap();
        let r = soundness_sweep(&sig, 2, 3, 4, 2, 0).unwrap();
        assert_eq!(r.exhaustive_models, 2 + 4 * 16);
        assert!(r.violations.is_empty());
    }
}
