//! Arity labels for partial functions on tuples of positive integers.
//!
//! An `(m, n)`-function maps `m`-tuples of positive integers to `n`-tuples.
//! For `m = 0` a non-empty function is a constant vector; `n = 0` functions
//! produce the empty tuple.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Input/output arity of a function flag: `m` argument components in,
/// `n` result components out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arity {
    pub m: u32,
    pub n: u32,
}

impl Arity {
    pub const fn new(m: u32, n: u32) -> Self {
        Arity { m, n }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.m, self.n)
    }
}

/// Signature of an operator: ordered input arities and ordered output
/// arities. Order is significant and preserved by serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub inputs: Vec<Arity>,
    pub outputs: Vec<Arity>,
}

impl Signature {
    pub fn new(inputs: Vec<Arity>, outputs: Vec<Arity>) -> Self {
        Signature { inputs, outputs }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.inputs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "; ")?;
        for (i, a) in self.outputs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}
