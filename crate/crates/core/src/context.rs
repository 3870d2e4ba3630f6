//! Evaluation contexts: an addressed library of reusable programs or
//! tables, plus a registry of finite oracle tables.
//!
//! Library addresses and oracle ids are contiguous from 1. A `LibRef` leaf
//! resolves through the library; an `OracleRef` leaf resolves through the
//! registry. Leaves that resolve to nothing, or whose declared arity
//! disagrees with the resolved entry, denote the empty function.

use crate::arity::Arity;
use crate::basic::OracleTable;
use crate::graph::Program;

#[derive(Debug, Clone, PartialEq)]
pub enum LibEntry {
    Program(Program),
    Table(OracleTable),
}

impl LibEntry {
    pub fn arity(&self) -> Arity {
        match self {
            LibEntry::Program(p) => p.arity(),
            LibEntry::Table(t) => t.arity,
        }
    }
}

/// The context a program is evaluated and enumerated against.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdmissibleContext {
    pub library: Vec<LibEntry>,
    pub oracles: Vec<OracleTable>,
}

impl AdmissibleContext {
    /// The bare context: the elementary basic functions only.
    pub fn bare() -> Self {
        AdmissibleContext::default()
    }

    /// A context whose oracle registry holds the constant tables
    /// `id ↦ {() ↦ id}` for `id = 1..=count`: a numeral vocabulary for the
    /// program world, the finite-table stand-in for oracle-assisted
    /// computation.
    pub fn with_numerals(count: u32) -> Self {
        let oracles = (1..=u64::from(count)).map(OracleTable::constant).collect();
        AdmissibleContext { library: Vec::new(), oracles }
    }

    /// Register a library entry; returns its address.
    pub fn push_library(&mut self, entry: LibEntry) -> u32 {
        assert!(
            match &entry {
                LibEntry::Table(t) => table_is_sane(t),
                LibEntry::Program(_) => true,
            },
            "library table entries must be well-formed"
        );
        self.library.push(entry);
        self.library.len() as u32
    }

    /// Register an oracle table; returns its id.
    pub fn push_oracle(&mut self, table: OracleTable) -> u32 {
        assert!(table_is_sane(&table), "oracle tables must be well-formed");
        self.oracles.push(table);
        self.oracles.len() as u32
    }

    pub fn lib_entry(&self, addr: u32) -> Option<&LibEntry> {
        if addr == 0 {
            return None;
        }
        self.library.get(addr as usize - 1)
    }

    pub fn oracle(&self, id: u32) -> Option<&OracleTable> {
        if id == 0 {
            return None;
        }
        self.oracles.get(id as usize - 1)
    }

    pub fn lib_arity(&self, addr: u32) -> Option<Arity> {
        self.lib_entry(addr).map(LibEntry::arity)
    }

    pub fn oracle_arity(&self, id: u32) -> Option<Arity> {
        self.oracle(id).map(|t| t.arity)
    }
}

fn table_is_sane(t: &OracleTable) -> bool {
    t.entries.iter().all(|(args, vals)| {
        args.len() == t.arity.m as usize
            && vals.len() == t.arity.n as usize
            && args.iter().all(|&x| x >= 1)
            && vals.iter().all(|&x| x >= 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeral_registry() {
        let ctx = AdmissibleContext::with_numerals(10);
        assert_eq!(ctx.oracle_arity(1), Some(Arity::new(0, 1)));
        assert_eq!(ctx.oracle(7).unwrap().lookup(&[]), Some(&vec![7]));
        assert_eq!(ctx.oracle(11), None);
        assert_eq!(ctx.oracle(0), None);
    }
}
