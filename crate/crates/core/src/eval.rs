//! Fuel-bounded big-step evaluation of programs.
//!
//! Each program denotes a partial `(m,n)`-function. Partiality is made
//! observable: an evaluation either produces a value, proves the point
//! undefined from a finite witness (an oracle-table miss, or a
//! minimization hitting an undefined inner call), or runs out of fuel.
//! Running out of fuel is a resource statement, never a semantic one.
//!
//! Evaluation is pure given `(program, args, fuel, context)`: identical
//! inputs yield identical outcomes, and a `Defined` outcome at budget `B`
//! stays `Defined` with the same value at every larger budget.

use crate::arity::Arity;
use crate::basic::BasicFunc;
use crate::context::{AdmissibleContext, LibEntry};
use crate::graph::{OpLabel, Program};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Value(Vec<u64>);

impl Value {
    pub fn new(components: Vec<u64>) -> Result<Self, EvalError> {
        if components.iter().any(|&c| c == 0) {
            return Err(EvalError::NonPositiveComponent);
        }
        Ok(Value(components))
    }

    /// The empty tuple, the single point of the 0-ary domain.
    pub fn empty() -> Self {
        Value(Vec::new())
    }

    pub fn single(x: u64) -> Self {
        assert!(x >= 1);
        Value(vec![x])
    }

    pub fn components(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

/// Resource bounds for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fuel {
    /// Total step budget; one step per node application, plus one per
    /// recursion or minimization iteration.
    pub budget: u64,
    /// Upper bound on any intermediate component.
    pub value_cap: u64,
}

impl Fuel {
    pub fn new(budget: u64, value_cap: u64) -> Self {
        assert!(budget >= 1 && value_cap >= 1);
        Fuel { budget, value_cap }
    }

    pub fn with_budget(budget: u64) -> Self {
        Fuel::new(budget, (1u64 << 63) - 1)
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::with_budget(10_000)
    }
}

/// Why an evaluation stopped without an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FuelCause {
    Budget,
    ValueCap,
    Depth,
}

/// Outcome of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalOutcome {
    Defined(Value),
    UndefinedProven,
    FuelExhausted { steps_used: u64, cause: FuelCause },
}

impl EvalOutcome {
    pub fn is_defined(&self) -> bool {
        matches!(self, EvalOutcome::Defined(_))
    }

    pub fn defined(&self) -> Option<&Value> {
        match self {
            EvalOutcome::Defined(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("argument count {found} does not match program argument arity {want}")]
    ArityError { want: u32, found: usize },
    #[error("value components must be positive")]
    NonPositiveComponent,
}

const MAX_CALL_DEPTH: u32 = 8192;

struct EvalState<'c> {
    remaining: u64,
    budget: u64,
    cap: u64,
    depth: u32,
    ctx: &'c AdmissibleContext,
}

enum Stop {
    Fuel(FuelCause),
    Undefined,
}

type Step<T> = Result<T, Stop>;

impl<'c> EvalState<'c> {
    fn charge(&mut self) -> Step<()> {
        if self.remaining == 0 {
            return Err(Stop::Fuel(FuelCause::Budget));
        }
        self.remaining -= 1;
        Ok(())
    }

    fn steps_used(&self) -> u64 {
        self.budget - self.remaining
    }

    fn check_component(&self, c: u64) -> Step<u64> {
        if c == 0 {
            // malformed table data behaves as an absent entry
            return Err(Stop::Undefined);
        }
        if c > self.cap {
            return Err(Stop::Fuel(FuelCause::ValueCap));
        }
        Ok(c)
    }
}

/// Tree view of a canonical program: per-node input sources and the root.
struct TreeView<'p> {
    program: &'p Program,
    child: Vec<Vec<usize>>,
    root: usize,
}

impl<'p> TreeView<'p> {
    fn new(program: &'p Program) -> Self {
        let n = program.graph.nodes.len();
        let mut child: Vec<Vec<usize>> = program
            .graph
            .nodes
            .iter()
            .map(|nd| vec![usize::MAX; nd.in_flags.len()])
            .collect();
        for g in &program.graph.grafts {
            child[g.dst.node][g.dst.slot] = g.src.node;
        }
        debug_assert!(child.iter().all(|row| row.iter().all(|&c| c < n)));
        TreeView { program, child, root: program.root() }
    }

    fn node_label(&self, idx: usize) -> OpLabel {
        self.program.graph.nodes[idx].label
    }

    fn out_arity(&self, idx: usize) -> Arity {
        self.program.graph.nodes[idx].out_flags[0]
    }
}

fn eval_node(tree: &TreeView<'_>, idx: usize, args: &[u64], st: &mut EvalState<'_>) -> Step<Vec<u64>> {
    st.charge()?;
    st.depth += 1;
    if st.depth > MAX_CALL_DEPTH {
        st.depth -= 1;
        return Err(Stop::Fuel(FuelCause::Depth));
    }
    let result = eval_node_inner(tree, idx, args, st);
    st.depth -= 1;
    result
}

fn eval_node_inner(
    tree: &TreeView<'_>,
    idx: usize,
    args: &[u64],
    st: &mut EvalState<'_>,
) -> Step<Vec<u64>> {
    match tree.node_label(idx) {
        OpLabel::Leaf(bf) => eval_leaf(bf, tree.out_arity(idx), args, st),
        OpLabel::Wire => eval_node(tree, tree.child[idx][0], args, st),
        OpLabel::Comp => {
            let mid = eval_node(tree, tree.child[idx][0], args, st)?;
            eval_node(tree, tree.child[idx][1], &mid, st)
        }
        OpLabel::Tuple => {
            let mut out = Vec::new();
            for &c in &tree.child[idx] {
                out.extend(eval_node(tree, c, args, st)?);
            }
            Ok(out)
        }
        OpLabel::PrimRec => {
            let (head, y) = args.split_at(args.len() - 1);
            let y = y[0];
            let mut acc = eval_node(tree, tree.child[idx][0], head, st)?;
            let mut step_args = Vec::with_capacity(head.len() + 2);
            for k in 1..y {
                st.charge()?;
                step_args.clear();
                step_args.extend_from_slice(head);
                step_args.push(k);
                step_args.push(acc[0]);
                acc = eval_node(tree, tree.child[idx][1], &step_args, st)?;
            }
            Ok(acc)
        }
        OpLabel::MuMin => {
            let mut probe = Vec::with_capacity(args.len() + 1);
            let mut cand = 1u64;
            loop {
                st.charge()?;
                if cand > st.cap {
                    return Err(Stop::Fuel(FuelCause::ValueCap));
                }
                probe.clear();
                probe.extend_from_slice(args);
                probe.push(cand);
                let v = eval_node(tree, tree.child[idx][0], &probe, st)?;
                if v[0] == 1 {
                    return Ok(vec![cand]);
                }
                cand += 1;
            }
        }
    }
}

fn eval_leaf(bf: BasicFunc, declared: Arity, args: &[u64], st: &mut EvalState<'_>) -> Step<Vec<u64>> {
    match bf {
        BasicFunc::Suc => {
            let next = args[0].checked_add(1).ok_or(Stop::Fuel(FuelCause::ValueCap))?;
            Ok(vec![st.check_component(next)?])
        }
        BasicFunc::One(_) => Ok(vec![1]),
        BasicFunc::Proj(_, i) => Ok(vec![args[i as usize - 1]]),
        BasicFunc::LibRef(addr) => match st.ctx.lib_entry(addr) {
            None => Err(Stop::Undefined),
            Some(LibEntry::Table(t)) => eval_table(t, declared, args, st),
            Some(LibEntry::Program(p)) => {
                if p.arity() != declared {
                    // signature mismatch denotes the empty function
                    return Err(Stop::Undefined);
                }
                let prepared = p.canonicalize();
                let view = TreeView::new(&prepared);
                eval_node(&view, view.root, args, st)
            }
        },
        BasicFunc::OracleRef(id) => match st.ctx.oracle(id) {
            None => Err(Stop::Undefined),
            Some(t) => eval_table(t, declared, args, st),
        },
    }
}

fn eval_table(t: &crate::basic::OracleTable, declared: Arity, args: &[u64], st: &mut EvalState<'_>) -> Step<Vec<u64>> {
    if t.arity != declared {
        return Err(Stop::Undefined);
    }
    match t.lookup(args) {
        None => Err(Stop::Undefined),
        Some(vals) => vals.iter().map(|&v| st.check_component(v)).collect(),
    }
}

/// Evaluate a program on an argument tuple under the given fuel.
pub fn eval(
    program: &Program,
    args: &Value,
    fuel: Fuel,
    ctx: &AdmissibleContext,
) -> Result<EvalOutcome, EvalError> {
    Ok(eval_traced(program, args, fuel, ctx)?.0)
}

/// As `eval`, also reporting the steps consumed.
pub fn eval_traced(
    program: &Program,
    args: &Value,
    fuel: Fuel,
    ctx: &AdmissibleContext,
) -> Result<(EvalOutcome, u64), EvalError> {
    let want = program.arity().m;
    if args.len() != want as usize {
        return Err(EvalError::ArityError { want, found: args.len() });
    }
    let prepared;
    let canonical = if program.binding.is_empty() && program.graph.open_inputs.is_empty() {
        program
    } else {
        prepared = program.canonicalize();
        &prepared
    };
    let view = TreeView::new(canonical);
    let mut st = EvalState {
        remaining: fuel.budget,
        budget: fuel.budget,
        cap: fuel.value_cap,
        depth: 0,
        ctx,
    };
    let outcome = match eval_node(&view, view.root, args.components(), &mut st) {
        Ok(components) => EvalOutcome::Defined(Value(components)),
        Err(Stop::Undefined) => EvalOutcome::UndefinedProven,
        Err(Stop::Fuel(cause)) => EvalOutcome::FuelExhausted { steps_used: st.steps_used(), cause },
    };
    Ok((outcome, st.steps_used()))
}

// ---------------------------------------------------------------------------
// Finite-box tabulation
// ---------------------------------------------------------------------------

/// A rectangle of the argument space: per-dimension inclusive ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainBox {
    pub ranges: Vec<(u64, u64)>,
}

impl DomainBox {
    pub fn new(ranges: Vec<(u64, u64)>) -> Self {
        DomainBox { ranges }
    }

    /// The 0-dimensional box: a single empty point.
    pub fn point() -> Self {
        DomainBox { ranges: Vec::new() }
    }

    /// Uniform box `1..=hi` in every one of `dims` dimensions.
    pub fn cube(dims: u32, hi: u64) -> Self {
        DomainBox { ranges: vec![(1, hi); dims as usize] }
    }

    pub fn dims(&self) -> u32 {
        self.ranges.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.iter().any(|&(lo, hi)| lo > hi)
    }

    pub fn contains(&self, point: &[u64]) -> bool {
        point.len() == self.ranges.len()
            && point.iter().zip(&self.ranges).all(|(&x, &(lo, hi))| lo <= x && x <= hi)
    }

    /// All points of the box in lexicographic order.
    pub fn points(&self) -> Vec<Vec<u64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.ranges.iter().map(|&(lo, _)| lo).collect::<Vec<u64>>()];
        loop {
            let last = out.last().unwrap().clone();
            let mut next = last;
            let mut dim = self.ranges.len();
            loop {
                if dim == 0 {
                    return out;
                }
                dim -= 1;
                if next[dim] < self.ranges[dim].1 {
                    next[dim] += 1;
                    for d in dim + 1..self.ranges.len() {
                        next[d] = self.ranges[d].0;
                    }
                    break;
                }
            }
            out.push(next);
        }
    }
}

/// Tabulated behavior of a program over a finite box. Points where the
/// evaluation did not finish are kept apart from proven-undefined points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnBehavior {
    pub arity: Arity,
    pub domain: DomainBox,
    pub defined: BTreeMap<Vec<u64>, Vec<u64>>,
    pub undefined: BTreeSet<Vec<u64>>,
    pub unresolved: BTreeSet<Vec<u64>>,
}

/// Tabulate the program over a finite box, one fuel budget per point.
pub fn denote(
    program: &Program,
    domain: &DomainBox,
    fuel: Fuel,
    ctx: &AdmissibleContext,
) -> Result<FnBehavior, EvalError> {
    let arity = program.arity();
    if domain.dims() != arity.m {
        return Err(EvalError::ArityError { want: arity.m, found: domain.dims() as usize });
    }
    let mut defined = BTreeMap::new();
    let mut undefined = BTreeSet::new();
    let mut unresolved = BTreeSet::new();
    for point in domain.points() {
        let args = Value::new(point.clone()).map_err(|_| EvalError::NonPositiveComponent)?;
        match eval(program, &args, fuel, ctx)? {
            EvalOutcome::Defined(v) => {
                defined.insert(point, v.into_vec());
            }
            EvalOutcome::UndefinedProven => {
                undefined.insert(point);
            }
            EvalOutcome::FuelExhausted { .. } => {
                unresolved.insert(point);
            }
        }
    }
    Ok(FnBehavior { arity, domain: domain.clone(), defined, undefined, unresolved })
}

/// A target behavior on a finite box: the listed points are defined with
/// the listed values, every other point of the box is required undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxTable {
    pub arity: Arity,
    pub domain: DomainBox,
    pub defined: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl BoxTable {
    pub fn total(arity: Arity, domain: DomainBox, f: impl Fn(&[u64]) -> Vec<u64>) -> Self {
        let defined = domain.points().into_iter().map(|p| {
            let v = f(&p);
            (p, v)
        });
        BoxTable { arity, domain, defined: defined.collect() }
    }
}

/// Result of comparing a tabulated behavior against a target table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agrees,
    Disagrees,
    /// Some point of the box ran out of fuel; agreement is undecided.
    Unresolved,
}

/// Box-equality of a tabulated behavior with a target table.
pub fn agreement(behavior: &FnBehavior, target: &BoxTable) -> Agreement {
    if behavior.arity != target.arity || behavior.domain != target.domain {
        return Agreement::Disagrees;
    }
    for (point, want) in &target.defined {
        match behavior.defined.get(point) {
            Some(got) if got == want => {}
            Some(_) => return Agreement::Disagrees,
            None => {
                if behavior.undefined.contains(point) {
                    return Agreement::Disagrees;
                }
                return Agreement::Unresolved;
            }
        }
    }
    for point in behavior.defined.keys() {
        if !target.defined.contains_key(point) {
            return Agreement::Disagrees;
        }
    }
    if behavior.unresolved.is_empty() {
        Agreement::Agrees
    } else {
        // all listed points matched, but some required-undefined point is
        // still unresolved
        if behavior
            .unresolved
            .iter()
            .any(|p| !target.defined.contains_key(p))
        {
            Agreement::Unresolved
        } else {
            Agreement::Agrees
        }
    }
}
