//! Oriented axioms of cartesian bicategories and a checker for derivations
//! `d0 R1 d1 R2 ... dk` in the precongruence they generate.
//!
//! Each step names a rule, an optional metavariable instantiation and an
//! explicit context `c1 ; (id_l ⊗ side ⊗ id_r) ; c2`. The engine only checks
//! that the reconstruction is iso to the current diagram; it never searches.

mod file;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Generator, Node};

pub use file::{load_derivations, DerivationFile, FileError, StepFile};

/// `=` or `≤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=", alias = "≤")]
    Le,
}

impl Relation {
    /// Relation of a chain whose steps have relations `self` then `other`.
    pub fn then(self, other: Relation) -> Relation {
        if self == Relation::Eq && other == Relation::Eq {
            Relation::Eq
        } else {
            Relation::Le
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// Which family of axioms a rule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleGroup {
    /// Cocommutative comonoid laws.
    Comonoid,
    /// Units and counits of `copy ⊣ cocopy` and `discard ⊣ codiscard`.
    Adjoint,
    Frobenius,
    /// Function symbols are comonoid homomorphisms.
    Naturality,
    /// Every morphism is a lax comonoid homomorphism.
    Lax,
}

/// What the metavariable of a rule ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metavar {
    None,
    /// A single function-symbol box.
    FunctionBox,
    /// Any diagram.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` is an inequality and cannot be applied backward")]
    BackwardOnInequality(String),
    #[error("bad instantiation: {0}")]
    BadInstantiation(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
}

/// One axiom, oriented as printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: &'static str,
    pub group: RuleGroup,
    pub relation: Relation,
    pub metavar: Metavar,
    /// Human-readable schema in diagram syntax (`R : n -> m`, `f : n -> 1`).
    pub statement: &'static str,
}

fn id1() -> Diagram {
    Diagram::id1()
}

impl RewriteRule {
    /// Instantiates both sides. Width parameters, when given, must agree with
    /// the metavariable's boundary (`[n, m]`) and are otherwise rejected.
    pub fn instantiate(
        &self,
        metavar: Option<&Diagram>,
        widths: Option<&[usize]>,
    ) -> Result<(Diagram, Diagram), RewriteError> {
        let r = match (self.metavar, metavar) {
            (Metavar::None, Some(_)) => {
                return Err(RewriteError::BadInstantiation(format!("rule `{}` takes no metavariable", self.id)))
            }
            (Metavar::None, None) => None,
            (_, None) => {
                return Err(RewriteError::BadInstantiation(format!("rule `{}` needs a metavariable", self.id)))
            }
            (Metavar::FunctionBox, Some(d)) => match d.node() {
                Node::Gen(Generator::Func { .. }) => Some(d.clone()),
                _ => {
                    return Err(RewriteError::BadInstantiation(format!(
                        "rule `{}` instantiates only at a function symbol, got `{d}`",
                        self.id
                    )))
                }
            },
            (Metavar::Any, Some(d)) => Some(d.clone()),
        };
        if let Some(w) = widths {
            let expected: Vec<usize> = r.iter().flat_map(|d| [d.dom(), d.cod()]).collect();
            if w != expected.as_slice() {
                return Err(RewriteError::BadInstantiation(format!(
                    "widths {w:?} do not match the expected {expected:?}"
                )));
            }
        }
        let copy = Diagram::copy;
        let sides = match self.id {
            "comonoid.assoc" => (copy().seq(&copy().par(&id1())), copy().seq(&id1().par(&copy()))),
            "comonoid.comm" => (copy().seq(&Diagram::swap()), copy()),
            "comonoid.unit" => (copy().seq(&id1().par(&Diagram::discard())), id1()),
            "adj.copy.unit" => (id1(), copy().seq(&Diagram::cocopy())),
            "adj.copy.counit" => (Diagram::cocopy().seq(&copy()), Diagram::identity(2)),
            "adj.discard.unit" => (id1(), Diagram::discard().seq(&Diagram::codiscard())),
            "adj.discard.counit" => (Diagram::codiscard().seq(&Diagram::discard()), Diagram::empty()),
            "frobenius" => (
                copy().par(&id1()).seq(&id1().par(&Diagram::cocopy())),
                id1().par(&copy()).seq(&Diagram::cocopy().par(&id1())),
            ),
            "natcopy" | "lax.copy" => {
                let r = r.expect("checked above");
                (r.seq(&Diagram::copy_n(r.cod())), Diagram::copy_n(r.dom()).seq(&r.par(&r)))
            }
            "natdis" | "lax.discard" => {
                let r = r.expect("checked above");
                (r.seq(&Diagram::discard_n(r.cod())), Diagram::discard_n(r.dom()))
            }
            other => return Err(RewriteError::UnknownRule(other.into())),
        };
        Ok(sides)
    }
}

/// The twelve axioms, in the order they are usually drawn.
pub fn rule_catalog() -> Vec<RewriteRule> {
    use Metavar::*;
    use Relation::*;
    use RuleGroup::*;
    let r = |id, group, relation, metavar, statement| RewriteRule { id, group, relation, metavar, statement };
    vec![
        r("comonoid.assoc", Comonoid, Eq, None, "copy ; (copy ⊗ id) = copy ; (id ⊗ copy)"),
        r("comonoid.comm", Comonoid, Eq, None, "copy ; swap = copy"),
        r("comonoid.unit", Comonoid, Eq, None, "copy ; (id ⊗ discard) = id"),
        r("adj.copy.unit", Adjoint, Le, None, "id <= copy ; cocopy"),
        r("adj.copy.counit", Adjoint, Le, None, "cocopy ; copy <= id[2]"),
        r("adj.discard.unit", Adjoint, Le, None, "id <= discard ; codiscard"),
        r("adj.discard.counit", Adjoint, Le, None, "codiscard ; discard <= empty"),
        r(
            "frobenius",
            Frobenius,
            Eq,
            None,
            "(copy ⊗ id) ; (id ⊗ cocopy) = (id ⊗ copy) ; (cocopy ⊗ id)",
        ),
        r("natcopy", Naturality, Eq, FunctionBox, "f ; copy = copy[n] ; (f ⊗ f)"),
        r("natdis", Naturality, Eq, FunctionBox, "f ; discard = discard[n]"),
        r("lax.copy", Lax, Le, Any, "R ; copy[m] <= copy[n] ; (R ⊗ R)"),
        r("lax.discard", Lax, Le, Any, "R ; discard[m] <= discard[n]"),
    ]
}

pub fn find_rule(id: &str) -> Option<RewriteRule> {
    rule_catalog().into_iter().find(|r| r.id == id)
}

/// A rule application in context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: String,
    pub direction: Direction,
    pub metavar: Option<Diagram>,
    pub widths: Option<Vec<usize>>,
    /// `None` means an identity of the appropriate width.
    pub c1: Option<Diagram>,
    pub left_pad: usize,
    pub right_pad: usize,
    pub c2: Option<Diagram>,
}

impl DerivationStep {
    /// A step with identity contexts and no padding.
    pub fn bare(rule: &str, direction: Direction) -> DerivationStep {
        DerivationStep {
            rule: rule.into(),
            direction,
            metavar: None,
            widths: None,
            c1: None,
            left_pad: 0,
            right_pad: 0,
            c2: None,
        }
    }

    pub fn with_metavar(mut self, d: Diagram) -> Self {
        self.metavar = Some(d);
        self
    }

    pub fn in_context(mut self, c1: Diagram, left_pad: usize, right_pad: usize, c2: Diagram) -> Self {
        self.c1 = Some(c1);
        self.left_pad = left_pad;
        self.right_pad = right_pad;
        self.c2 = Some(c2);
        self
    }
}

/// Applies one step, returning the rewritten diagram and the relation `d R d'` it witnesses.
pub fn apply_step(d: &Diagram, step: &DerivationStep) -> Result<(Diagram, Relation), RewriteError> {
    let rule = find_rule(&step.rule).ok_or_else(|| RewriteError::UnknownRule(step.rule.clone()))?;
    if step.direction == Direction::Backward && rule.relation == Relation::Le {
        return Err(RewriteError::BackwardOnInequality(step.rule.clone()));
    }
    let (lhs, rhs) = rule.instantiate(step.metavar.as_ref(), step.widths.as_deref())?;
    let (from, to) = match step.direction {
        Direction::Forward => (lhs, rhs),
        Direction::Backward => (rhs, lhs),
    };
    let pad = |side: &Diagram| {
        let mut out = side.clone();
        if step.left_pad > 0 {
            out = Diagram::identity(step.left_pad).par(&out);
        }
        if step.right_pad > 0 {
            out = out.par(&Diagram::identity(step.right_pad));
        }
        out
    };
    let (from, to) = (pad(&from), pad(&to));
    let c1 = step.c1.clone().unwrap_or_else(|| Diagram::identity(d.dom()));
    let c2 = step.c2.clone().unwrap_or_else(|| Diagram::identity(from.cod()));
    if c1.dom() != d.dom() || c2.cod() != d.cod() {
        return Err(RewriteError::ContextMismatch(format!(
            "context has boundary {} -> {} but the diagram is {} -> {}",
            c1.dom(),
            c2.cod(),
            d.dom(),
            d.cod()
        )));
    }
    if c1.cod() != from.dom() || from.cod() != c2.dom() {
        return Err(RewriteError::ContextMismatch(format!(
            "widths do not line up: c1 ends at {}, the padded side is {} -> {}, c2 starts at {}",
            c1.cod(),
            from.dom(),
            from.cod(),
            c2.dom()
        )));
    }
    let rebuilt = c1.seq(&from).seq(&c2);
    if !rebuilt.iso_equal(d) {
        return Err(RewriteError::ContextMismatch(format!("`{rebuilt}` is not iso to `{d}`")));
    }
    let mut out = to;
    if let Some(c1) = &step.c1 {
        out = c1.seq(&out);
    }
    if let Some(c2) = &step.c2 {
        out = out.seq(c2);
    }
    Ok((out, rule.relation))
}

/// A chain of steps from `start`, plus an optional chain back from the goal
/// to `start` that turns two inequalities into an equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub start: Diagram,
    pub steps: Vec<DerivationStep>,
    pub relation: Relation,
    pub reverse: Option<Vec<DerivationStep>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chain {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub chain: Chain,
    pub index: usize,
    pub rule: String,
    pub direction: Direction,
    pub relation: Relation,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub chain: Chain,
    /// Failing step, or the chain length when the end does not match.
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub claimed: Relation,
    /// What the checked chains prove, when they all check.
    pub established: Option<Relation>,
    pub trace: Vec<TraceEntry>,
    pub failure: Option<Failure>,
}

fn run_chain(
    chain: Chain,
    start: &Diagram,
    steps: &[DerivationStep],
    target: &Diagram,
    trace: &mut Vec<TraceEntry>,
) -> Result<Relation, Failure> {
    let mut d = start.clone();
    let mut rel = Relation::Eq;
    for (index, step) in steps.iter().enumerate() {
        let (next, r) = apply_step(&d, step).map_err(|e| Failure { chain, index, reason: e.to_string() })?;
        rel = rel.then(r);
        trace.push(TraceEntry {
            chain,
            index,
            rule: step.rule.clone(),
            direction: step.direction,
            relation: r,
            result: next.to_string(),
        });
        d = next;
    }
    if !d.iso_equal(target) {
        return Err(Failure {
            chain,
            index: steps.len(),
            reason: format!("final diagram `{d}` is not iso to `{target}`"),
        });
    }
    Ok(rel)
}

/// Checks a derivation against a goal.
///
/// A claim of `=` is accepted when the forward chain uses only equations,
/// or when a reverse chain from the goal back to the start also checks.
pub fn check_derivation(dv: &Derivation, goal: &Diagram) -> Verdict {
    let mut trace = Vec::new();
    let verdict = |established: Option<Relation>, failure: Option<Failure>, trace: Vec<TraceEntry>| Verdict {
        accepted: failure.is_none(),
        claimed: dv.relation,
        established,
        trace,
        failure,
    };
    if (dv.start.dom(), dv.start.cod()) != (goal.dom(), goal.cod()) {
        let reason = format!(
            "start is {} -> {} but goal is {} -> {}",
            dv.start.dom(),
            dv.start.cod(),
            goal.dom(),
            goal.cod()
        );
        return verdict(None, Some(Failure { chain: Chain::Forward, index: 0, reason }), trace);
    }
    let forward = match run_chain(Chain::Forward, &dv.start, &dv.steps, goal, &mut trace) {
        Ok(r) => r,
        Err(f) => return verdict(None, Some(f), trace),
    };
    let established = match &dv.reverse {
        None => forward,
        Some(steps) => match run_chain(Chain::Reverse, goal, steps, &dv.start, &mut trace) {
            Ok(_) => Relation::Eq,
            Err(f) => return verdict(None, Some(f), trace),
        },
    };
    if dv.relation == Relation::Eq && established == Relation::Le {
        let index = trace.iter().position(|t| t.relation == Relation::Le).unwrap_or(0);
        let reason = "an equation was claimed but the chain uses an inequality and has no reverse chain".to_string();
        return verdict(Some(established), Some(Failure { chain: Chain::Forward, index, reason }), trace);
    }
    verdict(Some(established), None, trace)
}
