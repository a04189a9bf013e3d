//! Budgeted enumeration of check instances.
//!
//! A check has a list of instances (tuples of objects). Each instance has a
//! parameter space, the product of some hom-sets, fibers and ranges. Spaces
//! with at most `cap` points are enumerated; larger ones are sampled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::doctrine::{BaseCategory, DoctrineError, Elem, Fiber, Mor, Obj};
use crate::report::{CheckResult, Status};

/// Enumeration limits for the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest parameter space enumerated in full, per instance.
    pub cap: u64,
    /// Random points drawn from a larger space.
    pub samples: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { cap: 1 << 16, samples: 1024, seed: 0 }
    }
}

pub enum Dim {
    Hom(Obj, Obj),
    Fiber(Fiber),
    Range(u64),
}

pub enum Pick {
    Mor(Mor),
    Elem(Elem),
    Index(u64),
}

impl Pick {
    pub fn mor(&self) -> &Mor {
        match self {
            Pick::Mor(m) => m,
            _ => panic!("expected a morphism"),
        }
    }

    pub fn elem(&self) -> &Elem {
        match self {
            Pick::Elem(e) => e,
            _ => panic!("expected a fiber element"),
        }
    }

    pub fn index(&self) -> u64 {
        match self {
            Pick::Index(i) => *i,
            _ => panic!("expected an index"),
        }
    }
}

/// Returns a witness description when the instance fails.
pub type Test<'a> = Box<dyn Fn(&[Pick]) -> Result<Option<String>, DoctrineError> + Send + Sync + 'a>;

fn count(base: &BaseCategory, d: &Dim) -> Result<Option<u64>, DoctrineError> {
    match d {
        Dim::Hom(x, y) => base.hom_count(x, y),
        Dim::Fiber(f) => Ok(f.size()),
        Dim::Range(n) => Ok(Some(*n)),
    }
}

fn nth(base: &BaseCategory, d: &Dim, k: u64) -> Result<Pick, DoctrineError> {
    Ok(match d {
        Dim::Hom(x, y) => Pick::Mor(base.hom_nth(x, y, k)?),
        Dim::Fiber(f) => Pick::Elem(f.element(k)),
        Dim::Range(_) => Pick::Index(k),
    })
}

fn random(base: &BaseCategory, d: &Dim, rng: &mut ChaCha8Rng) -> Result<Pick, DoctrineError> {
    Ok(match d {
        Dim::Hom(x, y) => Pick::Mor(base.hom_random(x, y, rng)?.expect("nonempty hom-set")),
        Dim::Fiber(f) => Pick::Elem(f.random(rng)),
        Dim::Range(n) => Pick::Index(rng.gen_range(0..*n)),
    })
}

enum Outcome {
    Skipped,
    Done { exhaustive: bool, comparisons: u64, witness: Option<String> },
}

fn unavailable(e: &DoctrineError) -> bool {
    matches!(e, DoctrineError::ObjectOutOfDepth(_) | DoctrineError::SizeBudgetExceeded(_))
}

fn run_instance(base: &BaseCategory, dims: &[Dim], test: &Test<'_>, budget: &Budget, seed: u64) -> Result<Outcome, DoctrineError> {
    let counts = dims.iter().map(|d| count(base, d)).collect::<Result<Vec<_>, _>>()?;
    if counts.contains(&Some(0)) {
        return Ok(Outcome::Done { exhaustive: true, comparisons: 0, witness: None });
    }
    let total = counts.iter().try_fold(1u64, |acc, c| c.and_then(|c| acc.checked_mul(c)));
    let (exhaustive, points) = match total.filter(|&t| t <= budget.cap) {
        Some(t) => (true, t),
        None => (false, budget.samples),
    };
    let counts: Vec<u64> = counts.into_iter().map(|c| c.unwrap_or(0)).collect();
    let point = |k: u64| -> Result<Option<String>, DoctrineError> {
        let picks = if exhaustive {
            let mut rest = k;
            let mut picks = Vec::with_capacity(dims.len());
            for (d, &c) in dims.iter().zip(&counts).rev() {
                picks.push(nth(base, d, rest % c)?);
                rest /= c;
            }
            picks.reverse();
            picks
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k.wrapping_mul(0xD1B54A32D192ED03));
            dims.iter().map(|d| random(base, d, &mut rng)).collect::<Result<Vec<_>, _>>()?
        };
        test(&picks)
    };
    let first = (0..points)
        .into_par_iter()
        .map(|k| (k, point(k)))
        .find_first(|(_, r)| !matches!(r, Ok(None)));
    match first {
        None => Ok(Outcome::Done { exhaustive, comparisons: points, witness: None }),
        Some((k, r)) => Ok(Outcome::Done { exhaustive, comparisons: k + 1, witness: r? }),
    }
}

fn mix(seed: u64, id: &str, index: usize) -> u64 {
    let h = id.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    seed ^ h ^ (index as u64).wrapping_mul(0x9E3779B97F4A7C15)
}

/// Runs one check over all instances in parallel. The result, including the
/// reported witness (the first failing instance), does not depend on the
/// number of threads.
pub fn sweep<'a, I: Sync>(
    id: &str,
    base: &BaseCategory,
    instances: &[I],
    budget: &Budget,
    build: impl Fn(&I) -> Result<(Vec<Dim>, Test<'a>), DoctrineError> + Sync,
) -> CheckResult {
    let outcomes: Vec<Outcome> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let result = build(inst).and_then(|(dims, test)| run_instance(base, &dims, &test, budget, mix(budget.seed, id, i)));
            match result {
                Ok(o) => o,
                Err(e) if unavailable(&e) => Outcome::Skipped,
                Err(e) => Outcome::Done { exhaustive: true, comparisons: 0, witness: Some(format!("error: {e}")) },
            }
        })
        .collect();
    let mut res = CheckResult {
        id: id.into(),
        status: Status::Pass,
        exhaustive_instances: 0,
        sampled_instances: 0,
        skipped_instances: 0,
        comparisons: 0,
        witness: None,
    };
    for o in outcomes {
        match o {
            Outcome::Skipped => res.skipped_instances += 1,
            Outcome::Done { exhaustive, comparisons, witness } => {
                if exhaustive {
                    res.exhaustive_instances += 1;
                } else {
                    res.sampled_instances += 1;
                }
                res.comparisons += comparisons;
                if res.witness.is_none() && witness.is_some() {
                    res.witness = witness;
                    res.status = Status::Fail;
                }
            }
        }
    }
    if res.status == Status::Pass && res.exhaustive_instances + res.sampled_instances == 0 {
        res.status = Status::Skipped;
    }
    res
}

/// All `k`-tuples over `items`.
pub fn tuples<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}
