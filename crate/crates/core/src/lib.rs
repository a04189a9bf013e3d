//! Regular logic as string diagrams: a free cartesian bicategory over a
//! signature, its finite relational semantics, and the correspondence with
//! finite elementary existential doctrines.

pub mod adjunction;
pub mod bicat;
pub mod diagram;
pub mod doctrine;
pub mod finrel;
pub mod logic;
pub mod report;
pub mod rewrite;
pub mod signature;
pub mod sweep;

pub use diagram::{Diagram, Generator};
pub use signature::Signature;
