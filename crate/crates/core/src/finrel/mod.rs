//! Finite relational semantics: diagrams evaluated as relations between
//! powers of a finite carrier, the rule-by-rule soundness check, and a
//! bounded countermodel search.

mod eval;
mod model;
mod relation;
mod search;
mod soundness;

use thiserror::Error;

pub use eval::{check_inclusion, eval_diagram};
pub use model::{FinModel, FunTable, PredTable};
pub use relation::{decode, encode, rel_compose, rel_tensor, tuple_count, FinRelation};
pub use search::{countermodel_search, Countermodel, ModelSpace, SearchOutcome, SizeSummary};
pub use soundness::{check_axiom_soundness, soundness_sweep, ModelViolation, SoundnessReport, SweepReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinRelError {
    #[error("symbol `{0}` has no interpretation in the model")]
    UninterpretedSymbol(String),
    #[error("symbol `{0}` is used with an arity different from its table")]
    ArityMismatch(String),
    #[error("width mismatch: {left:?} against {right:?}")]
    WidthMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("relations over carriers of sizes {0} and {1}")]
    CarrierMismatch(usize, usize),
    #[error("a relation over {width} wires on a carrier of size {size} is too large")]
    TooLarge { size: usize, width: usize },
    #[error("tuple outside the carrier or of the wrong length")]
    BadTuple,
    #[error("table for `{0}` is not total or mentions unknown elements")]
    BadTable(String),
    #[error("malformed model file: {0}")]
    Parse(String),
}
