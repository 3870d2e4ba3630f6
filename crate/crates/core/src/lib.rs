//! Operator-graph programs and their resource-bounded analysis.
//!
//! Programs are directed labelled graphs built from five operators
//! (composition, juxtaposition, primitive recursion, minimization, and a
//! wire) over a small basic-function vocabulary, extended by addressed
//! library entries and finite oracle tables. The crate provides:
//!
//! * validation and bit-exact text/binary wire formats ([`graph`],
//!   [`text`], [`codec`]);
//! * a fuel-bounded evaluator with observable partiality ([`eval`]);
//! * shortlex enumeration of the program world and prefix-free program
//!   codes ([`codec`]);
//! * slowly growing pair numberings with their rank bounds ([`numbering`]);
//! * resource-bounded descriptive-complexity sweeps and optimal-family
//!   constructions ([`complexity`]);
//! * a truncated algorithmic a-priori mass table with exact dyadic
//!   accounting, sampling, and rank-frequency statistics ([`levin`],
//!   [`zipf`]).

pub mod arity;
pub mod basic;
pub mod bits;
pub mod codec;
pub mod complexity;
pub mod context;
pub mod eval;
pub mod graph;
pub mod levin;
pub mod numbering;
pub mod programs;
pub mod text;
pub mod zipf;

pub use arity::{Arity, Signature};
pub use basic::{BasicFunc, OracleTable};
pub use context::{AdmissibleContext, LibEntry};
pub use graph::{FlagRef, Graft, OpGraph, OpLabel, OpNode, Program, RuleViolation};
