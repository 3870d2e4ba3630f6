//! Basic function leaves: the generating functions that ground an operator
//! graph, plus finite oracle tables.

use crate::arity::Arity;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A basic function usable as a leaf of an operator graph or as a binding
/// entry of a program.
///
/// * `Suc` — successor, `x ↦ x + 1`, a `(1,1)`-function.
/// * `One(m)` — the constant-1 function of `m` arguments, `(m,1)`; `m = 0`
///   gives the constant `1`.
/// * `Proj(m, i)` — projection to the `i`-th of `m` coordinates (1-based),
///   `(m,1)` with `1 ≤ i ≤ m`.
/// * `LibRef(addr)` — reference to a library entry by address (`addr ≥ 1`);
///   its arity is the arity of the addressed entry.
/// * `OracleRef(id)` — reference to a registered finite partial-function
///   table (`id ≥ 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasicFunc {
    Suc,
    One(u32),
    Proj(u32, u32),
    LibRef(u32),
    OracleRef(u32),
}

impl BasicFunc {
    /// Intrinsic arity, when it is determined by the leaf itself.
    /// `LibRef`/`OracleRef` arities live in the resolving context.
    pub fn intrinsic_arity(&self) -> Option<Arity> {
        match *self {
            BasicFunc::Suc => Some(Arity::new(1, 1)),
            BasicFunc::One(m) => Some(Arity::new(m, 1)),
            BasicFunc::Proj(m, _) => Some(Arity::new(m, 1)),
            BasicFunc::LibRef(_) | BasicFunc::OracleRef(_) => None,
        }
    }

    /// Structural well-formedness of the leaf parameters alone.
    pub fn params_valid(&self) -> bool {
        match *self {
            BasicFunc::Suc | BasicFunc::One(_) => true,
            BasicFunc::Proj(m, i) => i >= 1 && i <= m,
            BasicFunc::LibRef(addr) => addr >= 1,
            BasicFunc::OracleRef(id) => id >= 1,
        }
    }
}

impl fmt::Display for BasicFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasicFunc::Suc => write!(f, "suc"),
            BasicFunc::One(m) => write!(f, "one {m}"),
            BasicFunc::Proj(m, i) => write!(f, "pr {m} {i}"),
            BasicFunc::LibRef(a) => write!(f, "lib {a}"),
            BasicFunc::OracleRef(id) => write!(f, "oracle {id}"),
        }
    }
}

/// A finite partial-function table: explicit argument tuples mapped to
/// result tuples. Points absent from the table are undefined, and that
/// undefinedness is finitely witnessed by the table itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTable {
    pub arity: Arity,
    pub entries: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl OracleTable {
    pub fn new(arity: Arity) -> Self {
        OracleTable { arity, entries: BTreeMap::new() }
    }

    /// A table holding the single entry `() ↦ value`: a `(0,1)` constant.
    pub fn constant(value: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Vec::new(), vec![value]);
        OracleTable { arity: Arity::new(0, 1), entries }
    }

    pub fn insert(&mut self, args: Vec<u64>, result: Vec<u64>) {
        debug_assert_eq!(args.len(), self.arity.m as usize);
        debug_assert_eq!(result.len(), self.arity.n as usize);
        self.entries.insert(args, result);
    }

    pub fn lookup(&self, args: &[u64]) -> Option<&Vec<u64>> {
        self.entries.get(args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proj_bounds() {
        assert!(BasicFunc::Proj(3, 1).params_valid());
        assert!(BasicFunc::Proj(3, 3).params_valid());
        assert!(!BasicFunc::Proj(3, 4).params_valid());
        assert!(!BasicFunc::Proj(3, 0).params_valid());
    }

    #[test]
    fn constant_table() {
        let t = OracleTable::constant(42);
        assert_eq!(t.lookup(&[]), Some(&vec![42]));
        assert_eq!(t.arity, Arity::new(0, 1));
    }
}
