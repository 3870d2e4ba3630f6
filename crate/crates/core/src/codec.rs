//! Canonical prefix-free binary codes for programs, and the shortlex
//! enumeration of the program world.
//!
//! A code is the token stream of the canonical form: the node count, then
//! one token per node in canonical postorder. Tree structure is implicit
//! in the token order (each operator consumes the most recent unconsumed
//! outputs), so a decoder rebuilds the graft list exactly. Arities that
//! are forced by the operator schemas are never spent bits on; leaf
//! parameters are self-delimiting. No valid code is a proper prefix of
//! another valid code, and a decoder reading a longer stream stops exactly
//! at the code boundary.
//!
//! Library addresses and oracle ids are only meaningful against a
//! [`CodeSpace`]; the bare space accepts neither. Token layout:
//!
//! ```text
//! label   bits      parameters
//! gamma   00        —
//! suc     01        —
//! sigma   100       nat(k−1)
//! pr      101       nat(m−1), minimal-binary(i−1; m)
//! one     1100      nat(m)
//! rho     1101      —
//! mu      1110      —
//! oracle  11110     id (canonical registry code)
//! lib     111110    nat(addr−1)
//! iota    111111    —
//! ```

use crate::arity::Arity;
use crate::basic::BasicFunc;
use crate::bits::{
    id_code_len, nat_len, read_minimal_binary, read_nat, write_minimal_binary, write_nat,
    BitReader, BitWriter, CanonicalCode, CodeWord,
};
use crate::context::AdmissibleContext;
use crate::graph::{OpLabel, Program, RuleViolation};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Rank of a program in the shortlex enumeration; ranks are contiguous
/// from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProgramIndex(pub u64);

/// The reference space a binary code is read against: the arities of the
/// addressed library entries and of the registered oracle tables.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    lib: Vec<Arity>,
    oracle: Vec<Arity>,
    oracle_code: Option<CanonicalCode>,
}

impl CodeSpace {
    /// The bare space: no library, no oracle registry.
    pub fn bare() -> Self {
        CodeSpace { lib: Vec::new(), oracle: Vec::new(), oracle_code: None }
    }

    pub fn from_context(ctx: &AdmissibleContext) -> Self {
        let lib = ctx.library.iter().map(|e| e.arity()).collect();
        let oracle: Vec<Arity> = ctx.oracles.iter().map(|t| t.arity).collect();
        let oracle_code = if oracle.is_empty() {
            None
        } else {
            Some(CanonicalCode::new(oracle.len() as u32))
        };
        CodeSpace { lib, oracle, oracle_code }
    }

    pub fn lib_count(&self) -> u32 {
        self.lib.len() as u32
    }

    pub fn oracle_count(&self) -> u32 {
        self.oracle.len() as u32
    }

    pub fn lib_arity(&self, addr: u32) -> Option<Arity> {
        if addr == 0 {
            return None;
        }
        self.lib.get(addr as usize - 1).copied()
    }

    pub fn oracle_arity(&self, id: u32) -> Option<Arity> {
        if id == 0 {
            return None;
        }
        self.oracle.get(id as usize - 1).copied()
    }

    /// Code length in bits of the single-leaf program referencing oracle
    /// table `id`, when it exists in this space.
    pub fn oracle_leaf_len(&self, id: u32) -> Option<usize> {
        self.oracle_arity(id)?;
        Some(nat_len(0) + LABEL_ORACLE.1 + id_code_len(id) as usize)
    }

    /// Code length in bits of the single-leaf program referencing library
    /// address `addr`, when it exists in this space.
    pub fn lib_leaf_len(&self, addr: u32) -> Option<usize> {
        self.lib_arity(addr)?;
        Some(nat_len(0) + LABEL_LIB.1 + nat_len(u64::from(addr) - 1))
    }
}

// label codes: (value, bit count); a complete prefix code over ten labels
const LABEL_GAMMA: (u64, usize) = (0b00, 2);
const LABEL_SUC: (u64, usize) = (0b01, 2);
const LABEL_SIGMA: (u64, usize) = (0b100, 3);
const LABEL_PR: (u64, usize) = (0b101, 3);
const LABEL_ONE: (u64, usize) = (0b1100, 4);
const LABEL_RHO: (u64, usize) = (0b1101, 4);
const LABEL_MU: (u64, usize) = (0b1110, 4);
const LABEL_ORACLE: (u64, usize) = (0b11110, 5);
const LABEL_LIB: (u64, usize) = (0b111110, 6);
const LABEL_IOTA: (u64, usize) = (0b111111, 6);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Gamma,
    Suc,
    Sigma,
    Pr,
    One,
    Rho,
    Mu,
    Oracle,
    Lib,
    Iota,
}

fn write_label(w: &mut BitWriter, label: Label) {
    let (v, n) = match label {
        Label::Gamma => LABEL_GAMMA,
        Label::Suc => LABEL_SUC,
        Label::Sigma => LABEL_SIGMA,
        Label::Pr => LABEL_PR,
        Label::One => LABEL_ONE,
        Label::Rho => LABEL_RHO,
        Label::Mu => LABEL_MU,
        Label::Oracle => LABEL_ORACLE,
        Label::Lib => LABEL_LIB,
        Label::Iota => LABEL_IOTA,
    };
    w.push_bits(v, n);
}

fn read_label(r: &mut BitReader<'_>) -> Option<Label> {
    Some(match r.read_bit()? {
        false => {
            if r.read_bit()? {
                Label::Suc
            } else {
                Label::Gamma
            }
        }
        true => match r.read_bit()? {
            false => {
                if r.read_bit()? {
                    Label::Pr
                } else {
                    Label::Sigma
                }
            }
            true => match r.read_bit()? {
                false => {
                    if r.read_bit()? {
                        Label::Rho
                    } else {
                        Label::One
                    }
                }
                true => match r.read_bit()? {
                    false => Label::Mu,
                    true => match r.read_bit()? {
                        false => Label::Oracle,
                        true => {
                            if r.read_bit()? {
                                Label::Iota
                            } else {
                                Label::Lib
                            }
                        }
                    },
                },
            },
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("program is not well-formed: {0}")]
    Invalid(#[from] RuleViolation),
    #[error("reference unresolved in this code space: {detail}")]
    UnresolvedRef { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not a code: {detail}")]
    NotACode { detail: String },
    #[error("trailing bits after a complete code")]
    TrailingBits,
}

/// Decoder outcome used by exhaustive sweeps: a bit string either decodes
/// completely, stops cleanly inside a code awaiting more bits, or can
/// never begin a valid code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classified {
    Valid { program: Program, consumed: usize },
    NeedsMoreBits,
    Reject,
}

/// Encode a program against a code space. The code is deterministic and
/// self-delimiting.
pub fn encode(program: &Program, space: &CodeSpace) -> Result<CodeWord, EncodeError> {
    program.graph.validate()?;
    let p = program.canonicalize();
    let mut w = BitWriter::new();
    let n = p.graph.nodes.len() as u64;
    write_nat(&mut w, n - 1);
    for node in &p.graph.nodes {
        let out = node.out_flags[0];
        match node.label {
            OpLabel::Comp => write_label(&mut w, Label::Gamma),
            OpLabel::Tuple => {
                write_label(&mut w, Label::Sigma);
                write_nat(&mut w, node.in_flags.len() as u64 - 1);
            }
            OpLabel::PrimRec => write_label(&mut w, Label::Rho),
            OpLabel::MuMin => write_label(&mut w, Label::Mu),
            OpLabel::Wire => write_label(&mut w, Label::Iota),
            OpLabel::Leaf(BasicFunc::Suc) => write_label(&mut w, Label::Suc),
            OpLabel::Leaf(BasicFunc::One(m)) => {
                write_label(&mut w, Label::One);
                write_nat(&mut w, u64::from(m));
            }
            OpLabel::Leaf(BasicFunc::Proj(m, i)) => {
                write_label(&mut w, Label::Pr);
                write_nat(&mut w, u64::from(m) - 1);
                write_minimal_binary(&mut w, u64::from(i) - 1, u64::from(m));
            }
            OpLabel::Leaf(BasicFunc::LibRef(addr)) => {
                let arity = space.lib_arity(addr).ok_or_else(|| EncodeError::UnresolvedRef {
                    detail: format!("library address {addr} not in space"),
                })?;
                if arity != out {
                    return Err(EncodeError::UnresolvedRef {
                        detail: format!("library address {addr} has arity {arity}, leaf says {out}"),
                    });
                }
                write_label(&mut w, Label::Lib);
                write_nat(&mut w, u64::from(addr) - 1);
            }
            OpLabel::Leaf(BasicFunc::OracleRef(id)) => {
                let arity = space.oracle_arity(id).ok_or_else(|| EncodeError::UnresolvedRef {
                    detail: format!("oracle id {id} not in space"),
                })?;
                if arity != out {
                    return Err(EncodeError::UnresolvedRef {
                        detail: format!("oracle id {id} has arity {arity}, leaf says {out}"),
                    });
                }
                write_label(&mut w, Label::Oracle);
                space.oracle_code.as_ref().expect("nonempty registry").write(&mut w, id);
            }
        }
    }
    Ok(w.finish())
}

struct PendingNode {
    bf: Option<BasicFunc>,
    label: OpLabel,
    ins: Vec<Arity>,
    out: Arity,
    children: Vec<usize>,
}

/// Read one code from the front of the bit string.
pub fn classify(bits: &CodeWord, space: &CodeSpace) -> Classified {
    let mut r = bits.reader();
    match decode_stream(&mut r, space) {
        Ok(program) => Classified::Valid { program, consumed: r.pos() },
        Err(Stop::Truncated) => Classified::NeedsMoreBits,
        Err(Stop::Reject(_)) => Classified::Reject,
    }
}

/// Decode a complete code: the whole bit string must be exactly one code.
pub fn decode(bits: &CodeWord, space: &CodeSpace) -> Result<Program, DecodeError> {
    let mut r = bits.reader();
    match decode_stream(&mut r, space) {
        Ok(program) => {
            if r.pos() == bits.len() {
                Ok(program)
            } else {
                Err(DecodeError::TrailingBits)
            }
        }
        Err(Stop::Truncated) => {
            Err(DecodeError::NotACode { detail: "stream ends inside a code".into() })
        }
        Err(Stop::Reject(reason)) => Err(DecodeError::NotACode { detail: reason.into() }),
    }
}

enum Stop {
    Truncated,
    Reject(&'static str),
}

fn arity_u32(v: u64) -> Result<u32, Stop> {
    u32::try_from(v).map_err(|_| Stop::Reject("arity parameter out of range"))
}

fn decode_stream(r: &mut BitReader<'_>, space: &CodeSpace) -> Result<Program, Stop> {
    let n = read_nat(r).ok_or(Stop::Truncated)? + 1;
    if n > (1 << 24) {
        return Err(Stop::Reject("implausible node count"));
    }
    let mut pending: Vec<PendingNode> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for _ in 0..n {
        let label = read_label(r).ok_or(Stop::Truncated)?;
        let node = match label {
            Label::Suc => leaf_node(BasicFunc::Suc, Arity::new(1, 1)),
            Label::One => {
                let m = arity_u32(read_nat(r).ok_or(Stop::Truncated)?)?;
                leaf_node(BasicFunc::One(m), Arity::new(m, 1))
            }
            Label::Pr => {
                let m = arity_u32(read_nat(r).ok_or(Stop::Truncated)?)? as u64 + 1;
                let i = read_minimal_binary(r, m).ok_or(Stop::Truncated)? + 1;
                leaf_node(BasicFunc::Proj(m as u32, i as u32), Arity::new(m as u32, 1))
            }
            Label::Lib => {
                let addr = arity_u32(read_nat(r).ok_or(Stop::Truncated)?)?
                    .checked_add(1)
                    .ok_or(Stop::Reject("library address overflow"))?;
                let arity =
                    space.lib_arity(addr).ok_or(Stop::Reject("library address out of range"))?;
                leaf_node(BasicFunc::LibRef(addr), arity)
            }
            Label::Oracle => {
                let code = space.oracle_code.as_ref().ok_or(Stop::Reject("empty registry"))?;
                let id = match code.read(r) {
                    Ok(Some(id)) => id,
                    Ok(None) => return Err(Stop::Truncated),
                    Err(()) => return Err(Stop::Reject("unassigned oracle code")),
                };
                let arity = space.oracle_arity(id).expect("id from registry code");
                leaf_node(BasicFunc::OracleRef(id), arity)
            }
            Label::Gamma => {
                let (a, b) = pop2(&mut stack, &pending)?;
                let (fa, ga) = (pending[a].out, pending[b].out);
                if fa.n != ga.m {
                    return Err(Stop::Reject("composition arities do not chain"));
                }
                op_node(OpLabel::Comp, vec![fa, ga], Arity::new(fa.m, ga.n), vec![a, b])
            }
            Label::Sigma => {
                let k = read_nat(r).ok_or(Stop::Truncated)? + 1;
                if k > stack.len() as u64 {
                    return Err(Stop::Reject("juxtaposition wider than available outputs"));
                }
                let children: Vec<usize> =
                    stack.drain(stack.len() - k as usize..).collect();
                let flags: Vec<Arity> = children.iter().map(|&c| pending[c].out).collect();
                let m = flags[0].m;
                if flags.iter().any(|a| a.m != m) {
                    return Err(Stop::Reject("juxtaposition inputs disagree on arity"));
                }
                let total: u64 = flags.iter().map(|a| u64::from(a.n)).sum();
                let total = arity_u32(total)?;
                op_node(OpLabel::Tuple, flags, Arity::new(m, total), children)
            }
            Label::Rho => {
                let (a, b) = pop2(&mut stack, &pending)?;
                let (fa, ga) = (pending[a].out, pending[b].out);
                if fa.n != 1 || ga.n != 1 || ga.m != fa.m + 2 {
                    return Err(Stop::Reject("recursion arities do not fit"));
                }
                op_node(OpLabel::PrimRec, vec![fa, ga], Arity::new(fa.m + 1, 1), vec![a, b])
            }
            Label::Mu => {
                let a = pop1(&mut stack)?;
                let fa = pending[a].out;
                if fa.n != 1 || fa.m < 1 {
                    return Err(Stop::Reject("minimization needs an (n+1,1) input"));
                }
                op_node(OpLabel::MuMin, vec![fa], Arity::new(fa.m - 1, 1), vec![a])
            }
            Label::Iota => {
                let a = pop1(&mut stack)?;
                let fa = pending[a].out;
                op_node(OpLabel::Wire, vec![fa], fa, vec![a])
            }
        };
        pending.push(node);
        stack.push(pending.len() - 1);
    }
    if stack.len() != 1 {
        return Err(Stop::Reject("leftover outputs"));
    }
    Ok(assemble(pending, stack[0]))
}

fn leaf_node(bf: BasicFunc, out: Arity) -> PendingNode {
    PendingNode {
        bf: Some(bf),
        label: OpLabel::Leaf(bf),
        ins: Vec::new(),
        out,
        children: Vec::new(),
    }
}

fn op_node(label: OpLabel, ins: Vec<Arity>, out: Arity, children: Vec<usize>) -> PendingNode {
    PendingNode { bf: None, label, ins, out, children }
}

fn pop1(stack: &mut Vec<usize>) -> Result<usize, Stop> {
    stack.pop().ok_or(Stop::Reject("operator with no available input"))
}

fn pop2(stack: &mut Vec<usize>, _pending: &[PendingNode]) -> Result<(usize, usize), Stop> {
    if stack.len() < 2 {
        return Err(Stop::Reject("operator with too few available inputs"));
    }
    let b = stack.pop().unwrap();
    let a = stack.pop().unwrap();
    Ok((a, b))
}

fn assemble(pending: Vec<PendingNode>, root: usize) -> Program {
    use crate::graph::{FlagRef, Graft, OpGraph, OpNode};
    let nodes: Vec<OpNode> = pending
        .iter()
        .map(|p| OpNode::new(p.label, p.ins.clone(), vec![p.out]))
        .collect();
    let mut grafts = Vec::new();
    for (idx, p) in pending.iter().enumerate() {
        debug_assert!(p.bf.is_some() || !p.children.is_empty());
        for (slot, &c) in p.children.iter().enumerate() {
            grafts.push(Graft {
                src: FlagRef { node: c, slot: 0 },
                dst: FlagRef { node: idx, slot },
            });
        }
    }
    grafts.sort_by_key(|g| (g.dst.node, g.dst.slot));
    Program {
        graph: OpGraph {
            nodes,
            grafts,
            open_inputs: Vec::new(),
            open_outputs: vec![FlagRef { node: root, slot: 0 }],
        },
        binding: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Shortlex enumeration
// ---------------------------------------------------------------------------

/// The shortlex enumeration of every valid code of at most `max_bits`
/// bits: a structural numbering of the program world. Ranks are
/// contiguous from 1 and the stream for a smaller bit bound is a prefix
/// of the stream for any larger one.
#[derive(Debug, Clone)]
pub struct Enumeration {
    max_bits: u32,
    items: Vec<(CodeWord, Program)>,
    rank_by_code: HashMap<CodeWord, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rank {rank} exceeds the enumerated horizon {horizon}")]
pub struct RangeExceeded {
    pub rank: u64,
    pub horizon: u64,
}

impl Enumeration {
    pub fn len(&self) -> u64 {
        self.items.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn get(&self, rank: u64) -> Result<&(CodeWord, Program), RangeExceeded> {
        if rank == 0 || rank > self.len() {
            return Err(RangeExceeded { rank, horizon: self.len() });
        }
        Ok(&self.items[rank as usize - 1])
    }

    pub fn unrank(&self, rank: u64) -> Result<&Program, RangeExceeded> {
        Ok(&self.get(rank)?.1)
    }

    /// Rank of a program under this enumeration, when its code fits the
    /// horizon.
    pub fn rank_of(&self, program: &Program, space: &CodeSpace) -> Option<ProgramIndex> {
        let code = encode(program, space).ok()?;
        self.rank_by_code.get(&code).map(|&r| ProgramIndex(r))
    }

    pub fn iter(&self) -> impl Iterator<Item = (ProgramIndex, &CodeWord, &Program)> {
        self.items
            .iter()
            .enumerate()
            .map(|(i, (c, p))| (ProgramIndex(i as u64 + 1), c, p))
    }

    /// Exact Kraft sum of the enumerated codes as `(numerator, log2
    /// denominator)`.
    pub fn kraft(&self) -> (u128, u32) {
        let max = self.items.iter().map(|(c, _)| c.len()).max().unwrap_or(0) as u32;
        let mut num = 0u128;
        for (c, _) in &self.items {
            num += 1u128 << (max - c.len() as u32);
        }
        (num, max)
    }
}

/// Enumerate every valid code of at most `max_bits` bits in shortlex
/// order.
pub fn enumerate(space: &CodeSpace, max_bits: u32) -> Enumeration {
    let mut codes: Vec<CodeWord> = Vec::new();
    let budget = max_bits as usize;
    let mut n = 1u64;
    while nat_len(n - 1) + 2 * n as usize <= budget {
        let mut w = BitWriter::new();
        write_nat(&mut w, n - 1);
        let mut stack: Vec<Arity> = Vec::new();
        walk_tokens(space, budget, n, &mut w, &mut stack, &mut codes);
        n += 1;
    }
    codes.sort_unstable();
    let rank_by_code: HashMap<CodeWord, u64> =
        codes.iter().enumerate().map(|(i, c)| (c.clone(), i as u64 + 1)).collect();
    let items: Vec<(CodeWord, Program)> = codes
        .into_iter()
        .map(|c| {
            let p = decode(&c, space).expect("enumerated code decodes");
            (c, p)
        })
        .collect();
    Enumeration { max_bits, items, rank_by_code }
}

/// Depth-first generation of all completions with `tokens_left` more
/// tokens within the bit budget. Mirrors the decoder exactly.
fn walk_tokens(
    space: &CodeSpace,
    budget: usize,
    tokens_left: u64,
    w: &mut BitWriter,
    stack: &mut Vec<Arity>,
    out: &mut Vec<CodeWord>,
) {
    if tokens_left == 0 {
        if stack.len() == 1 {
            out.push(w.snapshot());
        }
        return;
    }
    // every remaining token costs at least two bits
    let reserve = 2 * (tokens_left as usize - 1);
    if w.len() + 2 + reserve > budget {
        return;
    }
    let room = budget - w.len() - reserve;
    let mark = w.len();
    let emit = |w: &mut BitWriter, stack: &mut Vec<Arity>, pops: usize, push: Arity, out: &mut Vec<CodeWord>| {
        let saved: Vec<Arity> = stack.drain(stack.len() - pops..).collect();
        stack.push(push);
        walk_tokens(space, budget, tokens_left - 1, w, stack, out);
        stack.pop();
        stack.extend(saved);
        w.truncate(mark);
    };

    // suc
    if LABEL_SUC.1 <= room {
        write_label(w, Label::Suc);
        emit(w, stack, 0, Arity::new(1, 1), out);
    }
    // one m
    {
        let mut m = 0u64;
        while LABEL_ONE.1 + nat_len(m) <= room {
            if m <= u64::from(u32::MAX) {
                write_label(w, Label::One);
                write_nat(w, m);
                emit(w, stack, 0, Arity::new(m as u32, 1), out);
            }
            m += 1;
        }
    }
    // pr m i
    {
        let mut m = 1u64;
        while LABEL_PR.1 + nat_len(m - 1) + 1 <= room + 1 {
            // minimal-binary cost varies with i; try all i
            if m <= u64::from(u32::MAX) {
                for i in 1..=m {
                    let cost = LABEL_PR.1
                        + nat_len(m - 1)
                        + crate::bits::minimal_binary_len(i - 1, m);
                    if cost <= room {
                        write_label(w, Label::Pr);
                        write_nat(w, m - 1);
                        write_minimal_binary(w, i - 1, m);
                        emit(w, stack, 0, Arity::new(m as u32, 1), out);
                    }
                }
            }
            m += 1;
            if nat_len(m - 1) + LABEL_PR.1 > room {
                break;
            }
        }
    }
    // lib addr
    for addr in 1..=space.lib_count() {
        let cost = LABEL_LIB.1 + nat_len(u64::from(addr) - 1);
        if cost <= room {
            let arity = space.lib_arity(addr).unwrap();
            write_label(w, Label::Lib);
            write_nat(w, u64::from(addr) - 1);
            emit(w, stack, 0, arity, out);
        }
    }
    // oracle id
    if let Some(code) = &space.oracle_code {
        for (len, _, ids) in code.bands() {
            if LABEL_ORACLE.1 + *len as usize > room {
                continue;
            }
            for &id in ids {
                let arity = space.oracle_arity(id).unwrap();
                write_label(w, Label::Oracle);
                code.write(w, id);
                emit(w, stack, 0, arity, out);
            }
        }
    }
    // gamma
    if stack.len() >= 2 && LABEL_GAMMA.1 <= room {
        let (fa, ga) = (stack[stack.len() - 2], stack[stack.len() - 1]);
        if fa.n == ga.m {
            write_label(w, Label::Gamma);
            emit(w, stack, 2, Arity::new(fa.m, ga.n), out);
        }
    }
    // sigma k
    for k in 1..=stack.len() {
        let cost = LABEL_SIGMA.1 + nat_len(k as u64 - 1);
        if cost > room {
            break;
        }
        let flags = &stack[stack.len() - k..];
        let m = flags[0].m;
        if flags.iter().any(|a| a.m != m) {
            continue;
        }
        let total: u64 = flags.iter().map(|a| u64::from(a.n)).sum();
        if total > u64::from(u32::MAX) {
            continue;
        }
        write_label(w, Label::Sigma);
        write_nat(w, k as u64 - 1);
        emit(w, stack, k, Arity::new(m, total as u32), out);
    }
    // rho
    if stack.len() >= 2 && LABEL_RHO.1 <= room {
        let (fa, ga) = (stack[stack.len() - 2], stack[stack.len() - 1]);
        if fa.n == 1 && ga.n == 1 && ga.m == fa.m + 2 {
            write_label(w, Label::Rho);
            emit(w, stack, 2, Arity::new(fa.m + 1, 1), out);
        }
    }
    // mu
    if !stack.is_empty() && LABEL_MU.1 <= room {
        let fa = stack[stack.len() - 1];
        if fa.n == 1 && fa.m >= 1 {
            write_label(w, Label::Mu);
            emit(w, stack, 1, Arity::new(fa.m - 1, 1), out);
        }
    }
    // iota
    if !stack.is_empty() && LABEL_IOTA.1 <= room {
        let fa = stack[stack.len() - 1];
        write_label(w, Label::Iota);
        emit(w, stack, 1, fa, out);
    }
}
