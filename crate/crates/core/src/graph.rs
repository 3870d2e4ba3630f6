//! Operator graphs: directed labelled graphs whose vertices are operator
//! corollas and whose leaves are basic functions.
//!
//! A node carries an operator label and ordered, arity-labelled input and
//! output flags. Grafting connects an output flag to an input flag of equal
//! label; ungrafted flags are the open inputs/outputs of the whole graph.
//! Graphs are immutable after construction and never contain oriented
//! loops.

use crate::arity::Arity;
use crate::basic::BasicFunc;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Operator label of a node.
///
/// The five operators and their signature schemas:
///
/// * `Comp` — composition, `[(m,n),(n,q); (m,q)]`; slot 0 is the inner
///   function, slot 1 the outer.
/// * `Tuple` — juxtaposition, `[(m,n_1),…,(m,n_k); (m, n_1+…+n_k)]`, `k ≥ 1`.
/// * `PrimRec` — primitive recursion, `[(m,1),(m+2,1); (m+1,1)]`.
/// * `MuMin` — minimization, `[(n+1,1); (n,1)]`.
/// * `Wire` — identity on functions, `[(m,n); (m,n)]`.
/// * `Leaf` — a basic function, `[; (m,n)]` (no inputs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpLabel {
    Comp,
    Tuple,
    PrimRec,
    MuMin,
    Wire,
    Leaf(BasicFunc),
}

impl OpLabel {
    pub fn keyword(&self) -> &'static str {
        match self {
            OpLabel::Comp => "gamma",
            OpLabel::Tuple => "sigma",
            OpLabel::PrimRec => "rho",
            OpLabel::MuMin => "mu",
            OpLabel::Wire => "iota",
            OpLabel::Leaf(BasicFunc::Suc) => "suc",
            OpLabel::Leaf(BasicFunc::One(_)) => "one",
            OpLabel::Leaf(BasicFunc::Proj(..)) => "pr",
            OpLabel::Leaf(BasicFunc::LibRef(_)) => "lib",
            OpLabel::Leaf(BasicFunc::OracleRef(_)) => "oracle",
        }
    }
}

/// One vertex of an operator graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpNode {
    pub label: OpLabel,
    pub in_flags: Vec<Arity>,
    pub out_flags: Vec<Arity>,
}

impl OpNode {
    pub fn new(label: OpLabel, in_flags: Vec<Arity>, out_flags: Vec<Arity>) -> Self {
        OpNode { label, in_flags, out_flags }
    }
}

/// Reference to one flag of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagRef {
    pub node: usize,
    pub slot: usize,
}

/// A grafting of an output flag onto an input flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graft {
    pub src: FlagRef,
    pub dst: FlagRef,
}

/// A directed labelled operator graph with totally ordered open flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpGraph {
    pub nodes: Vec<OpNode>,
    pub grafts: Vec<Graft>,
    pub open_inputs: Vec<FlagRef>,
    pub open_outputs: Vec<FlagRef>,
}

/// First violated well-formedness rule of a candidate graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleViolation {
    #[error("arity mismatch at node {node}: {detail}")]
    ArityMismatch { node: usize, detail: String },
    #[error("cycle through node {node}")]
    CycleDetected { node: usize },
    #[error("dangling graft #{graft}: {detail}")]
    DanglingGraft { graft: usize, detail: String },
    #[error("flag grafted more than once at graft #{graft}: {detail}")]
    DuplicateGraft { graft: usize, detail: String },
    #[error("open flag list does not match ungrafted flags: {detail}")]
    OpenListMismatch { detail: String },
    #[error("program structure: {detail}")]
    BadProgram { detail: String },
}

fn check_node_schema(idx: usize, node: &OpNode) -> Result<(), RuleViolation> {
    let err = |detail: String| Err(RuleViolation::ArityMismatch { node: idx, detail });
    let ins = &node.in_flags;
    let outs = &node.out_flags;
    if outs.len() != 1 {
        return err(format!("expected exactly one output flag, found {}", outs.len()));
    }
    let out = outs[0];
    match node.label {
        OpLabel::Comp => {
            if ins.len() != 2 {
                return err(format!("gamma expects 2 inputs, found {}", ins.len()));
            }
            let (f, g) = (ins[0], ins[1]);
            if f.n != g.m {
                return err(format!("gamma inner output {} != outer input {}", f.n, g.m));
            }
            if out != Arity::new(f.m, g.n) {
                return err(format!("gamma output {out} != ({} {})", f.m, g.n));
            }
        }
        OpLabel::Tuple => {
            if ins.is_empty() {
                return err("sigma expects at least one input".into());
            }
            let m = ins[0].m;
            if ins.iter().any(|a| a.m != m) {
                return err("sigma inputs must share the argument arity".into());
            }
            let total: u32 = ins.iter().map(|a| a.n).sum();
            if out != Arity::new(m, total) {
                return err(format!("sigma output {out} != ({m} {total})"));
            }
        }
        OpLabel::PrimRec => {
            if ins.len() != 2 {
                return err(format!("rho expects 2 inputs, found {}", ins.len()));
            }
            let (f, g) = (ins[0], ins[1]);
            if f.n != 1 || g.n != 1 {
                return err("rho inputs must produce single components".into());
            }
            if g.m != f.m + 2 {
                return err(format!("rho step arity {} != base arity {} + 2", g.m, f.m));
            }
            if out != Arity::new(f.m + 1, 1) {
                return err(format!("rho output {out} != ({} 1)", f.m + 1));
            }
        }
        OpLabel::MuMin => {
            if ins.len() != 1 {
                return err(format!("mu expects 1 input, found {}", ins.len()));
            }
            let f = ins[0];
            if f.n != 1 || f.m < 1 {
                return err(format!("mu input must be (n+1 1) with n >= 0, found {f}"));
            }
            if out != Arity::new(f.m - 1, 1) {
                return err(format!("mu output {out} != ({} 1)", f.m - 1));
            }
        }
        OpLabel::Wire => {
            if ins.len() != 1 {
                return err(format!("iota expects 1 input, found {}", ins.len()));
            }
            if out != ins[0] {
                return err(format!("iota output {out} != input {}", ins[0]));
            }
        }
        OpLabel::Leaf(bf) => {
            if !ins.is_empty() {
                return err("leaf admits no inputs".into());
            }
            if !bf.params_valid() {
                return err(format!("invalid leaf parameters: {bf}"));
            }
            if let Some(a) = bf.intrinsic_arity() {
                if out != a {
                    return err(format!("leaf {bf} output {out} != {a}"));
                }
            }
        }
    }
    Ok(())
}

impl OpGraph {
    /// Decide well-formedness. Total and terminating on arbitrary node and
    /// graft lists; rejection names the first violated rule.
    pub fn validate(&self) -> Result<(), RuleViolation> {
        for (idx, node) in self.nodes.iter().enumerate() {
            check_node_schema(idx, node)?;
        }
        let mut out_taken: Vec<Vec<bool>> =
            self.nodes.iter().map(|n| vec![false; n.out_flags.len()]).collect();
        let mut in_taken: Vec<Vec<bool>> =
            self.nodes.iter().map(|n| vec![false; n.in_flags.len()]).collect();
        for (gi, g) in self.grafts.iter().enumerate() {
            let src_arity = self
                .nodes
                .get(g.src.node)
                .and_then(|n| n.out_flags.get(g.src.slot))
                .copied()
                .ok_or_else(|| RuleViolation::DanglingGraft {
                    graft: gi,
                    detail: format!("source flag {}:{} does not exist", g.src.node, g.src.slot),
                })?;
            let dst_arity = self
                .nodes
                .get(g.dst.node)
                .and_then(|n| n.in_flags.get(g.dst.slot))
                .copied()
                .ok_or_else(|| RuleViolation::DanglingGraft {
                    graft: gi,
                    detail: format!("target flag {}:{} does not exist", g.dst.node, g.dst.slot),
                })?;
            if src_arity != dst_arity {
                return Err(RuleViolation::ArityMismatch {
                    node: g.dst.node,
                    detail: format!(
                        "graft labels differ: output {src_arity} vs input {dst_arity}"
                    ),
                });
            }
            if out_taken[g.src.node][g.src.slot] {
                return Err(RuleViolation::DuplicateGraft {
                    graft: gi,
                    detail: format!("output flag {}:{}", g.src.node, g.src.slot),
                });
            }
            if in_taken[g.dst.node][g.dst.slot] {
                return Err(RuleViolation::DuplicateGraft {
                    graft: gi,
                    detail: format!("input flag {}:{}", g.dst.node, g.dst.slot),
                });
            }
            out_taken[g.src.node][g.src.slot] = true;
            in_taken[g.dst.node][g.dst.slot] = true;
        }
        self.check_acyclic()?;
        self.check_open_lists(&out_taken, &in_taken)?;
        Ok(())
    }

    fn check_acyclic(&self) -> Result<(), RuleViolation> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for g in &self.grafts {
            adj[g.src.node].push(g.dst.node);
            indegree[g.dst.node] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &w in &adj[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if seen != n {
            let culprit = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(RuleViolation::CycleDetected { node: culprit });
        }
        Ok(())
    }

    fn check_open_lists(
        &self,
        out_taken: &[Vec<bool>],
        in_taken: &[Vec<bool>],
    ) -> Result<(), RuleViolation> {
        let mut expect_in: Vec<FlagRef> = Vec::new();
        let mut expect_out: Vec<FlagRef> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for s in 0..node.in_flags.len() {
                if !in_taken[i][s] {
                    expect_in.push(FlagRef { node: i, slot: s });
                }
            }
            for s in 0..node.out_flags.len() {
                if !out_taken[i][s] {
                    expect_out.push(FlagRef { node: i, slot: s });
                }
            }
        }
        let mut given_in = self.open_inputs.clone();
        let mut given_out = self.open_outputs.clone();
        given_in.sort_by_key(|f| (f.node, f.slot));
        given_out.sort_by_key(|f| (f.node, f.slot));
        if given_in != expect_in {
            return Err(RuleViolation::OpenListMismatch {
                detail: "open inputs differ from ungrafted input flags".into(),
            });
        }
        if given_out != expect_out {
            return Err(RuleViolation::OpenListMismatch {
                detail: "open outputs differ from ungrafted output flags".into(),
            });
        }
        Ok(())
    }

    /// Arity of a flag, if it exists.
    pub fn input_arity(&self, f: FlagRef) -> Option<Arity> {
        self.nodes.get(f.node).and_then(|n| n.in_flags.get(f.slot)).copied()
    }

    pub fn output_arity(&self, f: FlagRef) -> Option<Arity> {
        self.nodes.get(f.node).and_then(|n| n.out_flags.get(f.slot)).copied()
    }
}

/// A program: an operator graph together with an ordered binding of basic
/// functions filling all of its open inputs. Canonical programs keep the
/// binding inlined as leaf nodes; the split constructor is retained so a
/// graph can be paired with different bindings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub graph: OpGraph,
    pub binding: Vec<BasicFunc>,
}

impl Program {
    /// Pair a graph with a binding and validate the result. Requires the
    /// bound graph to denote a single function: exactly one open output.
    pub fn with_binding(graph: OpGraph, binding: Vec<BasicFunc>) -> Result<Self, RuleViolation> {
        graph.validate()?;
        if binding.len() != graph.open_inputs.len() {
            return Err(RuleViolation::BadProgram {
                detail: format!(
                    "binding length {} != open input count {}",
                    binding.len(),
                    graph.open_inputs.len()
                ),
            });
        }
        for (bf, flag) in binding.iter().zip(&graph.open_inputs) {
            if !bf.params_valid() {
                return Err(RuleViolation::BadProgram {
                    detail: format!("invalid bound function {bf}"),
                });
            }
            let want = graph.input_arity(*flag).expect("validated flag");
            if let Some(a) = bf.intrinsic_arity() {
                if a != want {
                    return Err(RuleViolation::ArityMismatch {
                        node: flag.node,
                        detail: format!("bound {bf} has arity {a}, flag wants {want}"),
                    });
                }
            }
        }
        if graph.open_outputs.len() != 1 {
            return Err(RuleViolation::BadProgram {
                detail: format!(
                    "a program denotes one function; found {} open outputs",
                    graph.open_outputs.len()
                ),
            });
        }
        Ok(Program { graph, binding })
    }

    /// Arity of the denoted function.
    pub fn arity(&self) -> Arity {
        let root = self.graph.open_outputs[0];
        self.graph.output_arity(root).expect("validated program")
    }

    pub fn node_count(&self) -> usize {
        self.graph.nodes.len()
    }

    /// Root node index (the node carrying the open output).
    pub fn root(&self) -> usize {
        self.graph.open_outputs[0].node
    }

    /// Inline the binding as leaf nodes and renumber nodes into canonical
    /// order: the postorder traversal from the open output, children in
    /// slot order. The result is structurally identical for any two
    /// isomorphic presentations of the same program.
    pub fn canonicalize(&self) -> Program {
        let mut nodes = self.graph.nodes.clone();
        let mut grafts = self.graph.grafts.clone();
        for (bf, flag) in self.binding.iter().zip(&self.graph.open_inputs) {
            let arity = self.graph.input_arity(*flag).expect("validated flag");
            let leaf_idx = nodes.len();
            nodes.push(OpNode::new(OpLabel::Leaf(*bf), Vec::new(), vec![arity]));
            grafts.push(Graft {
                src: FlagRef { node: leaf_idx, slot: 0 },
                dst: *flag,
            });
        }
        // source node of each input flag
        let mut src_of: Vec<Vec<Option<usize>>> =
            nodes.iter().map(|n| vec![None; n.in_flags.len()]).collect();
        for g in &grafts {
            src_of[g.dst.node][g.dst.slot] = Some(g.src.node);
        }
        // iterative postorder from the root
        let root = self.graph.open_outputs[0].node;
        let mut order: Vec<usize> = Vec::with_capacity(nodes.len());
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some((v, child)) = stack.pop() {
            if child < src_of[v].len() {
                stack.push((v, child + 1));
                let c = src_of[v][child].expect("fully bound program");
                stack.push((c, 0));
            } else {
                order.push(v);
            }
        }
        let mut renumber = vec![usize::MAX; nodes.len()];
        for (new_idx, &old) in order.iter().enumerate() {
            renumber[old] = new_idx;
        }
        let new_nodes: Vec<OpNode> = order.iter().map(|&old| nodes[old].clone()).collect();
        let mut new_grafts: Vec<Graft> = grafts
            .iter()
            .map(|g| Graft {
                src: FlagRef { node: renumber[g.src.node], slot: g.src.slot },
                dst: FlagRef { node: renumber[g.dst.node], slot: g.dst.slot },
            })
            .collect();
        new_grafts.sort_by_key(|g| (g.dst.node, g.dst.slot));
        Program {
            graph: OpGraph {
                nodes: new_nodes,
                grafts: new_grafts,
                open_inputs: Vec::new(),
                open_outputs: vec![FlagRef { node: renumber[root], slot: 0 }],
            },
            binding: Vec::new(),
        }
    }

    /// Whether the program is already in canonical form.
    pub fn is_canonical(&self) -> bool {
        self.binding.is_empty()
            && self.graph.open_inputs.is_empty()
            && *self == self.canonicalize()
    }
}

// ---------------------------------------------------------------------------
// Tree constructors. Each takes already-built programs as children and
// produces the canonical program for the combined tree.
// ---------------------------------------------------------------------------

fn combine(label: OpLabel, children: Vec<Program>, out: Arity) -> Program {
    let mut nodes: Vec<OpNode> = Vec::new();
    let mut grafts: Vec<Graft> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for child in &children {
        let c = child.canonicalize();
        let offset = nodes.len();
        nodes.extend(c.graph.nodes.iter().cloned());
        grafts.extend(c.graph.grafts.iter().map(|g| Graft {
            src: FlagRef { node: g.src.node + offset, slot: g.src.slot },
            dst: FlagRef { node: g.dst.node + offset, slot: g.dst.slot },
        }));
        roots.push(c.graph.open_outputs[0].node + offset);
    }
    let in_flags: Vec<Arity> = children.iter().map(|c| c.arity()).collect();
    let new_idx = nodes.len();
    nodes.push(OpNode::new(label, in_flags, vec![out]));
    for (slot, &r) in roots.iter().enumerate() {
        grafts.push(Graft {
            src: FlagRef { node: r, slot: 0 },
            dst: FlagRef { node: new_idx, slot },
        });
    }
    grafts.sort_by_key(|g| (g.dst.node, g.dst.slot));
    Program {
        graph: OpGraph {
            nodes,
            grafts,
            open_inputs: Vec::new(),
            open_outputs: vec![FlagRef { node: new_idx, slot: 0 }],
        },
        binding: Vec::new(),
    }
}

impl Program {
    /// A single-leaf program for a basic function with intrinsic arity.
    pub fn leaf(bf: BasicFunc) -> Result<Program, RuleViolation> {
        let arity = bf.intrinsic_arity().ok_or_else(|| RuleViolation::BadProgram {
            detail: format!("{bf} needs an explicit arity"),
        })?;
        Program::leaf_with_arity(bf, arity)
    }

    /// A single-leaf program with an explicitly declared arity; required
    /// for library and oracle references.
    pub fn leaf_with_arity(bf: BasicFunc, arity: Arity) -> Result<Program, RuleViolation> {
        if let Some(a) = bf.intrinsic_arity() {
            if a != arity {
                return Err(RuleViolation::ArityMismatch {
                    node: 0,
                    detail: format!("leaf {bf} has arity {a}, not {arity}"),
                });
            }
        }
        if !bf.params_valid() {
            return Err(RuleViolation::ArityMismatch {
                node: 0,
                detail: format!("invalid leaf parameters: {bf}"),
            });
        }
        let graph = OpGraph {
            nodes: vec![OpNode::new(OpLabel::Leaf(bf), Vec::new(), vec![arity])],
            grafts: Vec::new(),
            open_inputs: Vec::new(),
            open_outputs: vec![FlagRef { node: 0, slot: 0 }],
        };
        Ok(Program { graph, binding: Vec::new() })
    }

    /// `outer ∘ inner`: pipe the inner program's output tuple into the
    /// outer program.
    pub fn compose(inner: Program, outer: Program) -> Result<Program, RuleViolation> {
        let (fa, ga) = (inner.arity(), outer.arity());
        if fa.n != ga.m {
            return Err(RuleViolation::ArityMismatch {
                node: 0,
                detail: format!("compose: inner {fa} does not feed outer {ga}"),
            });
        }
        let out = Arity::new(fa.m, ga.n);
        Ok(combine(OpLabel::Comp, vec![inner, outer], out))
    }

    /// Juxtaposition `(f_1, …, f_k)` of programs sharing the input arity.
    pub fn tuple(parts: Vec<Program>) -> Result<Program, RuleViolation> {
        if parts.is_empty() {
            return Err(RuleViolation::BadProgram { detail: "tuple of no parts".into() });
        }
        let m = parts[0].arity().m;
        if parts.iter().any(|p| p.arity().m != m) {
            return Err(RuleViolation::ArityMismatch {
                node: 0,
                detail: "tuple parts must share the argument arity".into(),
            });
        }
        let total: u32 = parts.iter().map(|p| p.arity().n).sum();
        let out = Arity::new(m, total);
        Ok(combine(OpLabel::Tuple, parts, out))
    }

    /// Primitive recursion from a base `(m,1)` and a step `(m+2,1)`.
    pub fn prim_rec(base: Program, step: Program) -> Result<Program, RuleViolation> {
        let (fa, ga) = (base.arity(), step.arity());
        if fa.n != 1 || ga.n != 1 || ga.m != fa.m + 2 {
            return Err(RuleViolation::ArityMismatch {
                node: 0,
                detail: format!("prim_rec: base {fa} and step {ga} do not fit"),
            });
        }
        let out = Arity::new(fa.m + 1, 1);
        Ok(combine(OpLabel::PrimRec, vec![base, step], out))
    }

    /// Minimization over the last argument of an `(n+1,1)` predicate.
    pub fn mu_min(pred: Program) -> Result<Program, RuleViolation> {
        let fa = pred.arity();
        if fa.n != 1 || fa.m < 1 {
            return Err(RuleViolation::ArityMismatch {
                node: 0,
                detail: format!("mu_min: predicate arity {fa} must be (n+1 1)"),
            });
        }
        let out = Arity::new(fa.m - 1, 1);
        Ok(combine(OpLabel::MuMin, vec![pred], out))
    }

    /// Identity wire around a program.
    pub fn wire(p: Program) -> Result<Program, RuleViolation> {
        let out = p.arity();
        Ok(combine(OpLabel::Wire, vec![p], out))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::serialize(self))
    }
}
