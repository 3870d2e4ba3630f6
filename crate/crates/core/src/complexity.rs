//! Resource-bounded descriptive complexity of integers and of finite-box
//! behaviors, and the reindexing construction that turns an ample program
//! family into a complexity-optimal one.
//!
//! Complexity here is always horizon-certified: a sweep inspects every
//! program up to an enumeration horizon under a fixed fuel, so a reported
//! value is the exact minimum over the inspected world. Programs that ran
//! out of fuel below the witness leave the value flagged as an upper
//! bound; that flag is the honest rendering of the undecidable cases.

use crate::arity::Arity;
use crate::codec::{enumerate, CodeSpace, Enumeration, ProgramIndex};
use crate::context::AdmissibleContext;
use crate::eval::{agreement, denote, eval, Agreement, BoxTable, EvalOutcome, Fuel, Value};
use crate::graph::Program;
use crate::numbering::{PairNumbering, SeqKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Enumeration cutoff for a sweep: a code-length bound and a rank bound,
/// whichever is hit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horizon {
    pub max_bits: u32,
    pub max_ranks: u64,
}

impl Horizon {
    pub fn bits(max_bits: u32) -> Self {
        Horizon { max_bits, max_ranks: u64::MAX }
    }

    pub fn new(max_bits: u32, max_ranks: u64) -> Self {
        Horizon { max_bits, max_ranks }
    }
}

impl Default for Horizon {
    fn default() -> Self {
        Horizon { max_bits: 28, max_ranks: 100_000 }
    }
}

/// Whether a complexity value is the exact minimum over the inspected
/// world, or only an upper bound because some earlier program was left
/// unresolved by the fuel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    ExactAtHorizon,
    UpperBoundOnly,
}

/// A complexity measurement: the witness program's enumeration rank (the
/// exponential-scale index form) and its code length in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityValue {
    pub index_form: u64,
    pub bits_form: u32,
    pub witness: ProgramIndex,
    pub status: Exactness,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("no witness within the horizon (scanned {scanned} programs)")]
    NotFoundWithinHorizon { scanned: u64 },
}

/// One shared enumeration prepared for repeated sweeps against a context.
pub struct SweepWorld {
    pub space: CodeSpace,
    pub enumeration: Enumeration,
    pub horizon: Horizon,
}

impl SweepWorld {
    pub fn prepare(ctx: &AdmissibleContext, horizon: Horizon) -> Self {
        let space = CodeSpace::from_context(ctx);
        let enumeration = enumerate(&space, horizon.max_bits);
        SweepWorld { space, enumeration, horizon }
    }

    pub fn scan_len(&self) -> u64 {
        self.enumeration.len().min(self.horizon.max_ranks)
    }
}

// ---------------------------------------------------------------------------
// Complexity of integers: minimal (0,1)-program producing the value
// ---------------------------------------------------------------------------

/// Sweep result over the nullary single-output programs of a world: for
/// every produced integer, the minimal-rank witness.
#[derive(Debug, Clone)]
pub struct ValueComplexityTable {
    pub fuel: Fuel,
    pub horizon: Horizon,
    pub scanned: u64,
    entries: BTreeMap<u64, ComplexityValue>,
    unresolved_ranks: Vec<u64>,
}

/// Sweep every `(0,1)`-program of the world in rank order and record the
/// first witness of each output value. The shortlex ranks refine code
/// length, so the first witness is also a minimal-length one.
pub fn value_complexity_table(
    world: &SweepWorld,
    ctx: &AdmissibleContext,
    fuel: Fuel,
) -> ValueComplexityTable {
    value_complexity_table_parallel(world, ctx, fuel, 1)
}

/// As [`value_complexity_table`], split into `workers` contiguous rank
/// chunks evaluated on separate threads. The chunk merge is order-fixed,
/// so the result is identical for every worker count.
pub fn value_complexity_table_parallel(
    world: &SweepWorld,
    ctx: &AdmissibleContext,
    fuel: Fuel,
    workers: usize,
) -> ValueComplexityTable {
    let workers = workers.max(1);
    let scan = world.scan_len();
    let nullary = Arity::new(0, 1);
    let programs: Vec<(u64, u32, &Program)> = world
        .enumeration
        .iter()
        .take(scan as usize)
        .filter(|(_, _, p)| p.arity() == nullary)
        .map(|(rank, code, p)| (rank.0, code.len() as u32, p))
        .collect();
    let chunk_size = programs.len().div_ceil(workers).max(1);
    let chunks: Vec<&[(u64, u32, &Program)]> = programs.chunks(chunk_size).collect();
    type Partial = (BTreeMap<u64, ComplexityValue>, Vec<u64>);
    let partials: Vec<Partial> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut entries: BTreeMap<u64, ComplexityValue> = BTreeMap::new();
                    let mut unresolved = Vec::new();
                    for &(rank, bits, program) in chunk {
                        match eval(program, &Value::empty(), fuel, ctx).expect("nullary arity") {
                            EvalOutcome::Defined(v) => {
                                let x = v.components()[0];
                                entries.entry(x).or_insert(ComplexityValue {
                                    index_form: rank,
                                    bits_form: bits,
                                    witness: ProgramIndex(rank),
                                    status: Exactness::ExactAtHorizon,
                                });
                            }
                            EvalOutcome::UndefinedProven => {}
                            EvalOutcome::FuelExhausted { .. } => unresolved.push(rank),
                        }
                    }
                    (entries, unresolved)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut entries: BTreeMap<u64, ComplexityValue> = BTreeMap::new();
    let mut unresolved_ranks = Vec::new();
    // chunks are rank-ascending, so first insertion wins the minimum
    for (partial, unresolved) in partials {
        for (x, cv) in partial {
            entries.entry(x).or_insert(cv);
        }
        unresolved_ranks.extend(unresolved);
    }
    let mut table = ValueComplexityTable {
        fuel,
        horizon: world.horizon,
        scanned: scan,
        entries,
        unresolved_ranks,
    };
    table.mark_upper_bounds();
    table
}

impl ValueComplexityTable {
    fn mark_upper_bounds(&mut self) {
        for cv in self.entries.values_mut() {
            let earlier = self.unresolved_ranks.partition_point(|&r| r < cv.index_form);
            if earlier > 0 {
                cv.status = Exactness::UpperBoundOnly;
            }
        }
    }

    /// Minimal-rank complexity of the integer `x`.
    pub fn khat(&self, x: u64) -> Result<ComplexityValue, ComplexityError> {
        self.entries
            .get(&x)
            .copied()
            .ok_or(ComplexityError::NotFoundWithinHorizon { scanned: self.scanned })
    }

    /// Prefix-code complexity of the integer `x`. The witness is the same
    /// program as for `khat`: the shortlex order refines code length, so
    /// the minimal-rank witness is also minimal-length, and `bits_form`
    /// carries the prefix-code measurement.
    pub fn kphat(&self, x: u64) -> Result<ComplexityValue, ComplexityError> {
        self.khat(x)
    }

    pub fn values(&self) -> impl Iterator<Item = (&u64, &ComplexityValue)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn unresolved_count(&self) -> usize {
        self.unresolved_ranks.len()
    }

    /// Exact Kraft sum of `2^(-bits_form)` over all found values, as
    /// `(numerator, log2 denominator)`. Distinct values have distinct
    /// witnesses in a prefix-free code, so the sum never exceeds one.
    pub fn kraft(&self) -> (u128, u32) {
        let max = self.entries.values().map(|cv| cv.bits_form).max().unwrap_or(0);
        let mut num = 0u128;
        for cv in self.entries.values() {
            num += 1u128 << (max - cv.bits_form);
        }
        (num, max)
    }
}

// ---------------------------------------------------------------------------
// Complexity of finite-box behaviors
// ---------------------------------------------------------------------------

/// Minimal-rank program whose tabulated behavior agrees with the target
/// on its box. Box-equality stands in for function equality. When the
/// context carries a library, programs may spend a library-address leaf
/// instead of rebuilding the behavior, which is what makes reuse cheap.
pub fn behavior_complexity(
    target: &BoxTable,
    world: &SweepWorld,
    ctx: &AdmissibleContext,
    fuel: Fuel,
) -> Result<ComplexityValue, ComplexityError> {
    let scan = world.scan_len();
    let mut undecided_before = false;
    for (rank, code, program) in world.enumeration.iter() {
        if rank.0 > scan {
            break;
        }
        if program.arity() != target.arity {
            continue;
        }
        let behavior = denote(program, &target.domain, fuel, ctx).expect("arity matches");
        match agreement(&behavior, target) {
            Agreement::Agrees => {
                return Ok(ComplexityValue {
                    index_form: rank.0,
                    bits_form: code.len() as u32,
                    witness: rank,
                    status: if undecided_before {
                        Exactness::UpperBoundOnly
                    } else {
                        Exactness::ExactAtHorizon
                    },
                });
            }
            Agreement::Unresolved => undecided_before = true,
            Agreement::Disagrees => {}
        }
    }
    Err(ComplexityError::NotFoundWithinHorizon { scanned: scan })
}

// ---------------------------------------------------------------------------
// Ample families and the optimal construction
// ---------------------------------------------------------------------------

/// The programs of one arity, contiguously reindexed from the shortlex
/// enumeration. Every enumerated program of the arity appears, which is
/// the ampleness of the family over its horizon.
#[derive(Debug, Clone)]
pub struct ProgramFamily {
    pub arity: Arity,
    members: Vec<(ProgramIndex, Program)>,
}

pub fn arity_family(enumeration: &Enumeration, arity: Arity) -> ProgramFamily {
    let members = enumeration
        .iter()
        .filter(|(_, _, p)| p.arity() == arity)
        .map(|(rank, _, p)| (rank, p.clone()))
        .collect();
    ProgramFamily { arity, members }
}

impl ProgramFamily {
    pub fn len(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member by family index (1-based).
    pub fn member(&self, index: u64) -> Option<&Program> {
        if index == 0 {
            return None;
        }
        self.members.get(index as usize - 1).map(|(_, p)| p)
    }

    pub fn global_rank(&self, index: u64) -> Option<ProgramIndex> {
        if index == 0 {
            return None;
        }
        self.members.get(index as usize - 1).map(|(r, _)| *r)
    }

    /// Family index of a program, by canonical structural identity.
    pub fn index_of(&self, program: &Program) -> Option<u64> {
        let canon = program.canonicalize();
        self.members
            .iter()
            .position(|(_, p)| *p == canon)
            .map(|i| i as u64 + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Program)> {
        self.members.iter().enumerate().map(|(i, (_, p))| (i as u64 + 1, p))
    }
}

/// A family reindexed through a pair numbering: slice `k` of the new
/// family is member `b` of the base family evaluated at index `a`, where
/// `(a, b)` is the pair of rank `k`. When the reciprocal rate sums stay
/// below `c`, the new family is complexity-optimal with the bound
/// `c_{u,v} ≤ φ(K_U(v))`, `φ(j) = 2c·R_j`.
pub struct OptimalFamily<'a> {
    pub base: &'a ProgramFamily,
    pub theta: &'a PairNumbering,
}

/// Outcome of one slice of an optimal family on the empty argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceOutcome {
    Value(u64),
    Undefined,
    Unresolved,
    /// The pair points beyond the materialized base family.
    BeyondBase,
}

/// Pair a base family of `(m+1,1)`-programs with a pair numbering.
pub fn build_optimal<'a>(base: &'a ProgramFamily, theta: &'a PairNumbering) -> OptimalFamily<'a> {
    assert!(base.arity.m >= 1 && base.arity.n == 1, "base family must be (m+1,1)");
    OptimalFamily { base, theta }
}

impl<'a> OptimalFamily<'a> {
    pub fn len(&self) -> u64 {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// The pair `(a, b)` behind slice `k`, when inside the horizon.
    pub fn slice_pair(&self, k: u64) -> Option<(u64, u64)> {
        self.theta.unrank(k).ok()
    }

    /// Evaluate slice `k` of a `(1,1)`-base family as a `(0,1)` behavior.
    pub fn slice_value(&self, k: u64, ctx: &AdmissibleContext, fuel: Fuel) -> SliceOutcome {
        assert_eq!(self.base.arity, Arity::new(1, 1));
        let Some((a, b)) = self.slice_pair(k) else {
            return SliceOutcome::BeyondBase;
        };
        let Some(program) = self.base.member(b) else {
            return SliceOutcome::BeyondBase;
        };
        match eval(program, &Value::single(a), fuel, ctx).expect("arity 1") {
            EvalOutcome::Defined(v) => SliceOutcome::Value(v.components()[0]),
            EvalOutcome::UndefinedProven => SliceOutcome::Undefined,
            EvalOutcome::FuelExhausted { .. } => SliceOutcome::Unresolved,
        }
    }
}

/// First-hit table of an optimal family: for each produced value, the
/// least slice index producing it.
#[derive(Debug, Clone)]
pub struct OptimalSweep {
    pub k_max: u64,
    first: BTreeMap<u64, u64>,
    pub unresolved: u64,
    pub beyond_base: u64,
}

pub fn optimal_sweep(
    family: &OptimalFamily<'_>,
    ctx: &AdmissibleContext,
    fuel: Fuel,
    k_max: u64,
) -> OptimalSweep {
    let k_max = k_max.min(family.len());
    let mut first = BTreeMap::new();
    let mut unresolved = 0u64;
    let mut beyond_base = 0u64;
    for k in 1..=k_max {
        match family.slice_value(k, ctx, fuel) {
            SliceOutcome::Value(x) => {
                first.entry(x).or_insert(k);
            }
            SliceOutcome::Undefined => {}
            SliceOutcome::Unresolved => unresolved += 1,
            SliceOutcome::BeyondBase => beyond_base += 1,
        }
    }
    OptimalSweep { k_max, first, unresolved, beyond_base }
}

impl OptimalSweep {
    /// Least slice index of the family producing `x`, within the sweep.
    pub fn k_of(&self, x: u64) -> Option<u64> {
        self.first.get(&x).copied()
    }

    pub fn values(&self) -> impl Iterator<Item = (&u64, &u64)> {
        self.first.iter()
    }

    pub fn found(&self) -> usize {
        self.first.len()
    }
}

/// Least index `a ≤ a_max` with `v(a)` defined and equal to `x`: the
/// complexity of `x` in the family presented by the single `(1,1)`
/// program `v`.
pub fn k_in_program_family(
    v: &Program,
    x: u64,
    ctx: &AdmissibleContext,
    fuel: Fuel,
    a_max: u64,
) -> Option<u64> {
    assert_eq!(v.arity(), Arity::new(1, 1));
    for a in 1..=a_max {
        if let EvalOutcome::Defined(val) = eval(v, &Value::single(a), fuel, ctx).expect("arity 1") {
            if val.components()[0] == x {
                return Some(a);
            }
        }
    }
    None
}

/// The factor `φ(j) = 2c·R_j` from the linear rank bound of a convergent
/// rate sequence: slice `θ(a, j)` sits at rank at most `c(a·R_j + 1) ≤
/// a·φ(j)`.
pub fn phi_factor(theta: &PairNumbering, j: u64) -> u128 {
    match theta.seq().kind() {
        SeqKind::Convergent { c } => 2 * u128::from(c) * theta.seq().value(j),
        SeqKind::Divergent => panic!("phi factor needs a convergent rate sequence"),
    }
}

/// Largest ratio `rank_A(p) / rank_B(p)` over every pair `p` inside both
/// tables with both product values at most `window`, as an exact
/// fraction. Together with its mirror this bounds the two optimal
/// families built from the two numberings against each other on the
/// shared window.
pub fn table_ratio_bound(a: &PairNumbering, b: &PairNumbering, window: u128) -> (u64, u64) {
    let mut best = (0u64, 1u64);
    for &(k, l) in a.pairs() {
        let key_a = u128::from(k) * a.seq().value(l);
        let key_b = u128::from(k) * b.seq().value(l);
        if key_a > window || key_b > window {
            continue;
        }
        let (ra, rb) = match (a.rank(k, l), b.rank(k, l)) {
            (Ok(ra), Ok(rb)) => (ra, rb),
            _ => continue,
        };
        if u128::from(ra) * u128::from(best.1) > u128::from(best.0) * u128::from(rb) {
            best = (ra, rb);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Report rows
// ---------------------------------------------------------------------------

/// Comparison row for the index-form complexity against the exponentiated
/// prefix form. Report-only: the relation holds up to untracked constant
/// factors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KpComparisonRow {
    pub x: u64,
    pub k_index: u64,
    pub kp_bits: u32,
    pub kp_exp: f64,
    pub k_upper_envelope: f64,
}

/// Rows pairing each found value's index complexity with the prefix-code
/// scale and the envelope `K·log₂(K)^(1+ε)`.
pub fn k_vs_kp_report(
    table: &ValueComplexityTable,
    epsilon: f64,
    max_x: u64,
) -> Vec<KpComparisonRow> {
    let mut rows = Vec::new();
    for (&x, cv) in table.values() {
        if x > max_x {
            continue;
        }
        let k = cv.index_form as f64;
        let envelope = k * (k.max(2.0)).log2().powf(1.0 + epsilon);
        rows.push(KpComparisonRow {
            x,
            k_index: cv.index_form,
            kp_bits: cv.bits_form,
            kp_exp: (cv.bits_form as f64).exp2(),
            k_upper_envelope: envelope,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basic::BasicFunc;
    use crate::numbering::RateSequence;
    use crate::programs;

    fn bare_world(bits: u32) -> (AdmissibleContext, SweepWorld) {
        let ctx = AdmissibleContext::bare();
        let world = SweepWorld::prepare(&ctx, Horizon::bits(bits));
        (ctx, world)
    }

    #[test]
    fn khat_of_one_is_the_nullary_one_leaf() {
        let (ctx, world) = bare_world(16);
        let table = value_complexity_table(&world, &ctx, Fuel::with_budget(200));
        let cv = table.khat(1).unwrap();
        let witness = world.enumeration.unrank(cv.witness.0).unwrap();
        assert_eq!(witness, &Program::leaf(BasicFunc::One(0)).unwrap());
        // the sweep itself is the exhaustive check that nothing smaller
        // produced 1; the nullary one-leaf code is six bits
        assert_eq!(cv.bits_form, 6);
    }

    #[test]
    fn khat_of_two_is_suc_after_one() {
        let (ctx, world) = bare_world(16);
        let table = value_complexity_table(&world, &ctx, Fuel::with_budget(200));
        let cv = table.khat(2).unwrap();
        let witness = world.enumeration.unrank(cv.witness.0).unwrap();
        assert_eq!(witness, &programs::const_program(2));
    }

    #[test]
    fn khat_not_found_beyond_reach() {
        let (ctx, world) = bare_world(16);
        let table = value_complexity_table(&world, &ctx, Fuel::with_budget(200));
        assert!(matches!(
            table.khat(1_000_000),
            Err(ComplexityError::NotFoundWithinHorizon { .. })
        ));
    }

    #[test]
    fn kraft_of_value_table_at_most_one() {
        let (ctx, world) = bare_world(20);
        let table = value_complexity_table(&world, &ctx, Fuel::with_budget(500));
        let (num, scale) = table.kraft();
        assert!(num <= 1u128 << scale);
    }

    #[test]
    fn anti_monotone_in_resources() {
        let (ctx, world_small) = bare_world(16);
        let (_, world_large) = bare_world(20);
        let t_small = value_complexity_table(&world_small, &ctx, Fuel::with_budget(100));
        let t_large = value_complexity_table(&world_large, &ctx, Fuel::with_budget(1_000));
        for (&x, small) in t_small.values() {
            let large = t_large.khat(x).unwrap();
            assert!(large.index_form <= small.index_form, "regression at {x}");
            assert!(large.bits_form <= small.bits_form);
        }
    }

    #[test]
    fn behavior_complexity_finds_suc_table() {
        let (ctx, world) = bare_world(14);
        let target = BoxTable::total(
            Arity::new(1, 1),
            crate::eval::DomainBox::cube(1, 10),
            |p| vec![p[0] + 1],
        );
        let cv = behavior_complexity(&target, &world, &ctx, Fuel::with_budget(500)).unwrap();
        let witness = world.enumeration.unrank(cv.witness.0).unwrap();
        assert_eq!(witness, &Program::leaf(BasicFunc::Suc).unwrap());
    }

    #[test]
    fn behavior_complexity_empty_box_vacuous() {
        let (ctx, world) = bare_world(10);
        let target = BoxTable {
            arity: Arity::new(1, 1),
            domain: crate::eval::DomainBox::new(vec![(1, 0)]),
            defined: BTreeMap::new(),
        };
        let cv = behavior_complexity(&target, &world, &ctx, Fuel::with_budget(100)).unwrap();
        // vacuous agreement: the minimal (1,1)-program of the world wins
        assert_eq!(cv.index_form, 1);
    }

    #[test]
    fn family_is_ample_over_horizon() {
        let (_, world) = bare_world(18);
        let fam = arity_family(&world.enumeration, Arity::new(1, 1));
        for (_, _, p) in world.enumeration.iter() {
            if p.arity() == Arity::new(1, 1) {
                assert!(fam.index_of(p).is_some());
            }
        }
    }

    #[test]
    fn optimal_family_definition_unfolds() {
        let (ctx, world) = bare_world(18);
        let fam = arity_family(&world.enumeration, Arity::new(1, 1));
        let theta = PairNumbering::build(RateSequence::Square, 2_000);
        let u = build_optimal(&fam, &theta);
        let fuel = Fuel::with_budget(300);
        for k in [1u64, 2, 5, 17, 101] {
            let (a, b) = u.slice_pair(k).unwrap();
            if let Some(p) = fam.member(b) {
                let direct = eval(p, &Value::single(a), fuel, &ctx).unwrap();
                let via = u.slice_value(k, &ctx, fuel);
                match direct {
                    EvalOutcome::Defined(v) => {
                        assert_eq!(via, SliceOutcome::Value(v.components()[0]))
                    }
                    EvalOutcome::UndefinedProven => assert_eq!(via, SliceOutcome::Undefined),
                    EvalOutcome::FuelExhausted { .. } => {
                        assert_eq!(via, SliceOutcome::Unresolved)
                    }
                }
            }
        }
    }

    #[test]
    fn optimality_bound_against_member_families() {
        // K_u(x) <= K_v(x) · φ(b) for v the b-th (1,1)-program, with
        // φ(j) = 2c·j² for the square rate sequence
        let (ctx, world) = bare_world(18);
        let fam = arity_family(&world.enumeration, Arity::new(1, 1));
        let theta = PairNumbering::build(RateSequence::Square, 40_000);
        let u = build_optimal(&fam, &theta);
        let fuel = Fuel::with_budget(300);
        let sweep = optimal_sweep(&u, &ctx, fuel, u.len());
        let mut checked = 0;
        for b in 1..=fam.len().min(6) {
            let v = fam.member(b).unwrap();
            for a in 1..=12u64 {
                if let EvalOutcome::Defined(val) = eval(v, &Value::single(a), fuel, &ctx).unwrap()
                {
                    let x = val.components()[0];
                    let kv = k_in_program_family(v, x, &ctx, fuel, 40).unwrap();
                    let ku = sweep.k_of(x).expect("covered by construction");
                    let bound = u128::from(kv) * phi_factor(&theta, b);
                    assert!(
                        u128::from(ku) <= bound,
                        "x={x} b={b}: K_u={ku} > {kv}·φ({b})={bound}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked >= 30, "only {checked} pairs checked");
    }
}
