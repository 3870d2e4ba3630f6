//! Text wire format for programs.
//!
//! The format is s-expression shaped with one node per line, explicit arity
//! annotations on every flag, and an explicit graft list. `serialize`
//! always emits the canonical form (binding inlined, nodes in canonical
//! postorder); `parse` accepts any whitespace between tokens and validates
//! the result.
//!
//! ```text
//! (program
//!   (nodes
//!     (one 0 (out (0 1)))
//!     (suc (out (1 1)))
//!     (gamma (in (0 1) (1 1)) (out (0 1))))
//!   (grafts (0 2 0) (1 2 1))
//!   (inputs)
//!   (outputs (2 0)))
//! ```
//!
//! A graft `(s d i)` connects the output of node `s` to input slot `i` of
//! node `d`. Open inputs and outputs are listed as `(node slot)` pairs. A
//! non-canonical program may carry a `(binding ...)` section pairing the
//! open inputs with basic functions.

use crate::arity::Arity;
use crate::basic::BasicFunc;
use crate::graph::{FlagRef, Graft, OpGraph, OpLabel, OpNode, Program, RuleViolation};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("syntax error at byte {pos}: {detail}")]
    Syntax { pos: usize, detail: String },
    #[error("validation error: {0}")]
    Validation(#[from] RuleViolation),
}

// ---------------------------------------------------------------------------
// Serializer
// ---------------------------------------------------------------------------

fn write_flags(out: &mut String, key: &str, flags: &[Arity]) {
    let _ = write!(out, "({key}");
    for a in flags {
        let _ = write!(out, " {a}");
    }
    let _ = write!(out, ")");
}

fn write_node(out: &mut String, node: &OpNode) {
    let _ = write!(out, "    ({}", node.label.keyword());
    match node.label {
        OpLabel::Leaf(BasicFunc::One(m)) => {
            let _ = write!(out, " {m}");
        }
        OpLabel::Leaf(BasicFunc::Proj(m, i)) => {
            let _ = write!(out, " {m} {i}");
        }
        OpLabel::Leaf(BasicFunc::LibRef(a)) => {
            let _ = write!(out, " {a}");
        }
        OpLabel::Leaf(BasicFunc::OracleRef(id)) => {
            let _ = write!(out, " {id}");
        }
        _ => {}
    }
    if !matches!(node.label, OpLabel::Leaf(_)) {
        let _ = write!(out, " ");
        write_flags(out, "in", &node.in_flags);
    }
    let _ = write!(out, " ");
    write_flags(out, "out", &node.out_flags);
    let _ = write!(out, ")");
}

/// Serialize a program to its canonical text form. The output is
/// deterministic: isomorphic presentations of the same program serialize
/// identically.
pub fn serialize(program: &Program) -> String {
    let p = program.canonicalize();
    let mut out = String::new();
    out.push_str("(program\n  (nodes\n");
    for (i, node) in p.graph.nodes.iter().enumerate() {
        write_node(&mut out, node);
        if i + 1 < p.graph.nodes.len() {
            out.push('\n');
        }
    }
    out.push_str(")\n  (grafts");
    for g in &p.graph.grafts {
        let _ = write!(out, " ({} {} {})", g.src.node, g.dst.node, g.dst.slot);
    }
    out.push_str(")\n  (inputs");
    for f in &p.graph.open_inputs {
        let _ = write!(out, " ({} {})", f.node, f.slot);
    }
    out.push_str(")\n  (outputs");
    for f in &p.graph.open_outputs {
        let _ = write!(out, " ({} {})", f.node, f.slot);
    }
    out.push_str("))\n");
    out
}

/// Single-line rendering of the canonical form, convenient for tables.
pub fn serialize_compact(program: &Program) -> String {
    let s = serialize(program);
    let mut out = String::with_capacity(s.len());
    let mut last_space = true;
    for ch in s.chars() {
        let ch = if ch == '\n' { ' ' } else { ch };
        if ch == ' ' {
            if !last_space {
                out.push(' ');
            }
            last_space = true;
        } else {
            out.push(ch);
            last_space = false;
        }
    }
    out.trim().to_string()
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    LParen,
    RParen,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, Tok<'a>)> {
        let save = self.pos;
        let t = self.next_tok();
        self.pos = save;
        t
    }

    fn next_tok(&mut self) -> Option<(usize, Tok<'a>)> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return None;
        }
        let start = self.pos;
        match self.src[self.pos] {
            b'(' => {
                self.pos += 1;
                Some((start, Tok::LParen))
            }
            b')' => {
                self.pos += 1;
                Some((start, Tok::RParen))
            }
            _ => {
                while self.pos < self.src.len()
                    && !self.src[self.pos].is_ascii_whitespace()
                    && self.src[self.pos] != b'('
                    && self.src[self.pos] != b')'
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
                Some((start, Tok::Atom(text)))
            }
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

type PResult<T> = Result<T, TextError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, detail: impl Into<String>) -> PResult<T> {
        Err(TextError::Syntax { pos, detail: detail.into() })
    }

    fn expect_lparen(&mut self) -> PResult<usize> {
        match self.lex.next_tok() {
            Some((p, Tok::LParen)) => Ok(p),
            Some((p, _)) => self.err(p, "expected '('"),
            None => self.err(self.lex.pos, "expected '(' before end of input"),
        }
    }

    fn expect_rparen(&mut self) -> PResult<()> {
        match self.lex.next_tok() {
            Some((_, Tok::RParen)) => Ok(()),
            Some((p, _)) => self.err(p, "expected ')'"),
            None => self.err(self.lex.pos, "expected ')' before end of input"),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        match self.lex.next_tok() {
            Some((_, Tok::Atom(a))) if a == kw => Ok(()),
            Some((p, _)) => self.err(p, format!("expected '{kw}'")),
            None => self.err(self.lex.pos, format!("expected '{kw}' before end of input")),
        }
    }

    fn expect_num(&mut self) -> PResult<u64> {
        match self.lex.next_tok() {
            Some((p, Tok::Atom(a))) => {
                a.parse::<u64>().map_err(|_| TextError::Syntax {
                    pos: p,
                    detail: format!("expected a number, found '{a}'"),
                })
            }
            Some((p, _)) => self.err(p, "expected a number"),
            None => self.err(self.lex.pos, "expected a number before end of input"),
        }
    }

    fn expect_num_u32(&mut self) -> PResult<u32> {
        let pos = self.lex.pos;
        let v = self.expect_num()?;
        u32::try_from(v).map_err(|_| TextError::Syntax {
            pos,
            detail: format!("number {v} out of range"),
        })
    }

    fn at_rparen(&mut self) -> bool {
        matches!(self.lex.peek(), Some((_, Tok::RParen)))
    }

    fn parse_arity(&mut self) -> PResult<Arity> {
        self.expect_lparen()?;
        let m = self.expect_num_u32()?;
        let n = self.expect_num_u32()?;
        self.expect_rparen()?;
        Ok(Arity::new(m, n))
    }

    fn parse_flag_list(&mut self, key: &str) -> PResult<Vec<Arity>> {
        self.expect_lparen()?;
        self.expect_keyword(key)?;
        let mut flags = Vec::new();
        while !self.at_rparen() {
            flags.push(self.parse_arity()?);
        }
        self.expect_rparen()?;
        Ok(flags)
    }

    fn parse_leaf_body(&mut self, kw: &str, pos: usize) -> PResult<BasicFunc> {
        match kw {
            "suc" => Ok(BasicFunc::Suc),
            "one" => Ok(BasicFunc::One(self.expect_num_u32()?)),
            "pr" => {
                let m = self.expect_num_u32()?;
                let i = self.expect_num_u32()?;
                Ok(BasicFunc::Proj(m, i))
            }
            "lib" => Ok(BasicFunc::LibRef(self.expect_num_u32()?)),
            "oracle" => Ok(BasicFunc::OracleRef(self.expect_num_u32()?)),
            other => self.err(pos, format!("unknown node label '{other}'")),
        }
    }

    fn parse_node(&mut self) -> PResult<OpNode> {
        self.expect_lparen()?;
        let (pos, kw) = match self.lex.next_tok() {
            Some((p, Tok::Atom(a))) => (p, a),
            Some((p, _)) => return self.err(p, "expected a node label"),
            None => return self.err(self.lex.pos, "expected a node label"),
        };
        let node = match kw {
            "gamma" | "sigma" | "rho" | "mu" | "iota" => {
                let label = match kw {
                    "gamma" => OpLabel::Comp,
                    "sigma" => OpLabel::Tuple,
                    "rho" => OpLabel::PrimRec,
                    "mu" => OpLabel::MuMin,
                    _ => OpLabel::Wire,
                };
                let ins = self.parse_flag_list("in")?;
                let outs = self.parse_flag_list("out")?;
                OpNode::new(label, ins, outs)
            }
            _ => {
                let bf = self.parse_leaf_body(kw, pos)?;
                let outs = self.parse_flag_list("out")?;
                OpNode::new(OpLabel::Leaf(bf), Vec::new(), outs)
            }
        };
        self.expect_rparen()?;
        Ok(node)
    }

    fn parse_binding_leaf(&mut self) -> PResult<BasicFunc> {
        self.expect_lparen()?;
        let (pos, kw) = match self.lex.next_tok() {
            Some((p, Tok::Atom(a))) => (p, a),
            Some((p, _)) => return self.err(p, "expected a basic-function label"),
            None => return self.err(self.lex.pos, "expected a basic-function label"),
        };
        let bf = self.parse_leaf_body(kw, pos)?;
        self.expect_rparen()?;
        Ok(bf)
    }

    fn parse_program(&mut self) -> PResult<Program> {
        self.expect_lparen()?;
        self.expect_keyword("program")?;

        self.expect_lparen()?;
        self.expect_keyword("nodes")?;
        let mut nodes = Vec::new();
        while !self.at_rparen() {
            nodes.push(self.parse_node()?);
        }
        self.expect_rparen()?;

        self.expect_lparen()?;
        self.expect_keyword("grafts")?;
        let mut grafts = Vec::new();
        while !self.at_rparen() {
            self.expect_lparen()?;
            let src = self.expect_num()? as usize;
            let dst = self.expect_num()? as usize;
            let slot = self.expect_num()? as usize;
            self.expect_rparen()?;
            grafts.push(Graft {
                src: FlagRef { node: src, slot: 0 },
                dst: FlagRef { node: dst, slot },
            });
        }
        self.expect_rparen()?;

        self.expect_lparen()?;
        self.expect_keyword("inputs")?;
        let mut open_inputs = Vec::new();
        while !self.at_rparen() {
            self.expect_lparen()?;
            let node = self.expect_num()? as usize;
            let slot = self.expect_num()? as usize;
            self.expect_rparen()?;
            open_inputs.push(FlagRef { node, slot });
        }
        self.expect_rparen()?;

        self.expect_lparen()?;
        self.expect_keyword("outputs")?;
        let mut open_outputs = Vec::new();
        while !self.at_rparen() {
            self.expect_lparen()?;
            let node = self.expect_num()? as usize;
            let slot = self.expect_num()? as usize;
            self.expect_rparen()?;
            open_outputs.push(FlagRef { node, slot });
        }
        self.expect_rparen()?;

        let mut binding = Vec::new();
        if let Some((_, Tok::LParen)) = self.lex.peek() {
            let save = self.lex.pos;
            self.expect_lparen()?;
            match self.lex.peek() {
                Some((_, Tok::Atom("binding"))) => {
                    self.expect_keyword("binding")?;
                    while !self.at_rparen() {
                        binding.push(self.parse_binding_leaf()?);
                    }
                    self.expect_rparen()?;
                }
                _ => {
                    self.lex.pos = save;
                }
            }
        }

        self.expect_rparen()?;
        if let Some((p, _)) = self.lex.next_tok() {
            return self.err(p, "trailing input after program");
        }

        let graph = OpGraph { nodes, grafts, open_inputs, open_outputs };
        Ok(Program::with_binding(graph, binding)?)
    }
}

/// Parse a program from its text form. Rejects non-well-formed strings
/// with a byte position; structurally parseable but invalid graphs are
/// rejected with the violated rule.
pub fn parse(src: &str) -> Result<Program, TextError> {
    Parser { lex: Lexer::new(src) }.parse_program()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const2() -> Program {
        Program::compose(
            Program::leaf(BasicFunc::One(0)).unwrap(),
            Program::leaf(BasicFunc::Suc).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_identity() {
        let p = const2();
        let s = serialize(&p);
        let q = parse(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(serialize(&q), s);
    }

    #[test]
    fn empty_string_rejects_at_zero() {
        match parse("") {
            Err(TextError::Syntax { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn whitespace_variants_parse_to_same_program() {
        let p = const2();
        let s = serialize(&p);
        let squashed = serialize_compact(&p);
        assert_eq!(parse(&squashed).unwrap(), p);
        assert_eq!(parse(&s).unwrap(), p);
    }

    #[test]
    fn arity_token_mismatch_is_validation_error() {
        let p = const2();
        let s = serialize(&p);
        // (suc (out (1 1))) -> (suc (out (2 1))): intrinsic arity broken
        let bad = s.replacen("(suc (out (1 1)))", "(suc (out (2 1)))", 1);
        assert_ne!(bad, s);
        match parse(&bad) {
            Err(TextError::Validation(RuleViolation::ArityMismatch { .. })) => {}
            other => panic!("expected ArityMismatch, got {other:?}"),
        }
    }

    #[test]
    fn binding_section_round_trips_through_canonical_form() {
        let text = "(program (nodes (gamma (in (0 1) (1 1)) (out (0 1)))) (grafts) \
                    (inputs (0 0) (0 1)) (outputs (0 0)) (binding (one 0) (suc)))";
        let p = parse(text).unwrap();
        assert_eq!(p.canonicalize(), const2());
    }

    #[test]
    fn trailing_garbage_rejects() {
        let s = serialize(&const2());
        let bad = format!("{s} x");
        assert!(matches!(parse(&bad), Err(TextError::Syntax { .. })));
    }
}
