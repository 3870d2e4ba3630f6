//! Truncated algorithmic a-priori mass over the positive integers.
//!
//! Every halting nullary single-output program of code length at most `L`
//! contributes `2^(-|code|)` to the mass of its output value. Because the
//! codes are prefix-free, the total mass never exceeds one (Kraft), and
//! because only the prefix code enters the accounting, the masses define
//! a semimeasure; the index-form complexity is deliberately kept out of
//! the mass definition, since its reciprocals do not sum.
//!
//! Masses are exact dyadic rationals end to end. Sampling uses a named
//! 64-bit generator (splitmix64) and exact integer arithmetic, so a seed
//! pins the corpus bit for bit.

use crate::complexity::SweepWorld;
use crate::context::AdmissibleContext;
use crate::eval::{eval, EvalOutcome, Fuel, Value};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// An exact non-negative dyadic rational `num / 2^exp`, kept normalized
/// (odd numerator or zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    /// `2^(-bits)`.
    pub fn power_of_two_reciprocal(bits: u32) -> Dyadic {
        Dyadic { num: 1, exp: bits }
    }

    pub fn new(num: u128, exp: u32) -> Dyadic {
        Dyadic { num, exp }.normalized()
    }

    fn normalized(mut self) -> Dyadic {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(self, other: Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        Dyadic { num: a.checked_add(b).expect("dyadic overflow"), exp }.normalized()
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Dyadic) -> std::cmp::Ordering {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        a.cmp(&b)
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        self.cmp_exact(other) != std::cmp::Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (self.exp as f64).exp2()
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Numerator after rescaling to denominator `2^exp`; panics if the
    /// value does not fit that scale exactly or overflows.
    pub fn numerator_at(&self, exp: u32) -> u128 {
        assert!(exp >= self.exp);
        self.num << (exp - self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

/// Per-value mass entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassEntry {
    pub mass: Dyadic,
    /// Length of the shortest contributing code.
    pub min_bits: u32,
    /// Number of contributing halting programs.
    pub witnesses: u64,
}

/// Identifier of the sampling generator recorded in output metadata.
pub const GENERATOR_ID: &str = "splitmix64";

/// The truncated a-priori mass table of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct MassTable {
    pub max_bits: u32,
    pub fuel: Fuel,
    pub scanned: u64,
    pub halting: u64,
    entries: BTreeMap<u64, MassEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MassError {
    #[error("mass table has no entries")]
    EmptyTable,
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
}

/// Build the mass table by sweeping every nullary single-output program
/// of the world. `workers` contiguous chunks are evaluated on separate
/// threads; the chunk merge is order-fixed, so the result is identical
/// for every worker count.
pub fn mass_table_parallel(
    world: &SweepWorld,
    ctx: &AdmissibleContext,
    fuel: Fuel,
    workers: usize,
) -> MassTable {
    let workers = workers.max(1);
    let nullary: Vec<(u32, &crate::graph::Program)> = world
        .enumeration
        .iter()
        .take(world.scan_len() as usize)
        .filter(|(_, _, p)| p.arity() == crate::arity::Arity::new(0, 1))
        .map(|(_, code, p)| (code.len() as u32, p))
        .collect();
    let chunk_size = nullary.len().div_ceil(workers).max(1);
    let chunks: Vec<&[(u32, &crate::graph::Program)]> = nullary.chunks(chunk_size).collect();
    let partials: Vec<(BTreeMap<u64, MassEntry>, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut entries: BTreeMap<u64, MassEntry> = BTreeMap::new();
                    let mut halting = 0u64;
                    for &(bits, program) in chunk {
                        match eval(program, &Value::empty(), fuel, ctx).expect("nullary") {
                            EvalOutcome::Defined(v) => {
                                halting += 1;
                                let x = v.components()[0];
                                let w = Dyadic::power_of_two_reciprocal(bits);
                                entries
                                    .entry(x)
                                    .and_modify(|e| {
                                        e.mass = e.mass.add(w);
                                        e.min_bits = e.min_bits.min(bits);
                                        e.witnesses += 1;
                                    })
                                    .or_insert(MassEntry { mass: w, min_bits: bits, witnesses: 1 });
                            }
                            _ => {}
                        }
                    }
                    (entries, halting)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut entries: BTreeMap<u64, MassEntry> = BTreeMap::new();
    let mut halting = 0u64;
    for (partial, h) in partials {
        halting += h;
        for (x, e) in partial {
            entries
                .entry(x)
                .and_modify(|acc| {
                    acc.mass = acc.mass.add(e.mass);
                    acc.min_bits = acc.min_bits.min(e.min_bits);
                    acc.witnesses += e.witnesses;
                })
                .or_insert(e);
        }
    }
    MassTable {
        max_bits: world.enumeration.max_bits(),
        fuel,
        scanned: nullary.len() as u64,
        halting,
        entries,
    }
}

/// Single-threaded construction.
pub fn mass_table(ctx: &AdmissibleContext, max_bits: u32, fuel: Fuel) -> MassTable {
    let world = SweepWorld::prepare(ctx, crate::complexity::Horizon::bits(max_bits));
    mass_table_parallel(&world, ctx, fuel, 1)
}

impl MassTable {
    pub fn mass(&self, x: u64) -> Dyadic {
        self.entries.get(&x).map(|e| e.mass).unwrap_or(Dyadic::ZERO)
    }

    pub fn entry(&self, x: u64) -> Option<&MassEntry> {
        self.entries.get(&x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &MassEntry)> {
        self.entries.iter()
    }

    /// Exact total mass.
    pub fn total(&self) -> Dyadic {
        self.entries.values().fold(Dyadic::ZERO, |acc, e| acc.add(e.mass))
    }

    /// Keep only the values satisfying the predicate.
    pub fn restrict(&self, keep: impl Fn(u64) -> bool) -> MassTable {
        MassTable {
            max_bits: self.max_bits,
            fuel: self.fuel,
            scanned: self.scanned,
            halting: self.halting,
            entries: self.entries.iter().filter(|(&x, _)| keep(x)).map(|(&x, &e)| (x, e)).collect(),
        }
    }

    /// The `limit` heaviest values, ties broken toward smaller values;
    /// this is the sampling support.
    pub fn top_support(&self, limit: usize) -> Vec<(u64, MassEntry)> {
        let mut all: Vec<(u64, MassEntry)> = self.entries.iter().map(|(&x, &e)| (x, e)).collect();
        all.sort_by(|a, b| b.1.mass.cmp_exact(&a.1.mass).then(a.0.cmp(&b.0)));
        all.truncate(limit);
        all
    }

    /// Serialize as a TSV table with a header row; metadata rides in
    /// leading comment lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# max_bits\t{}\n", self.max_bits));
        out.push_str(&format!("# fuel_budget\t{}\n", self.fuel.budget));
        out.push_str(&format!("# value_cap\t{}\n", self.fuel.value_cap));
        out.push_str(&format!("# scanned\t{}\n# halting\t{}\n", self.scanned, self.halting));
        out.push_str("value\tmass_num\tmass_exp2\tmass\tmin_bits\twitnesses\n");
        for (x, e) in &self.entries {
            out.push_str(&format!(
                "{x}\t{}\t{}\t{:.12e}\t{}\t{}\n",
                e.mass.numerator(),
                e.mass.exponent(),
                e.mass.to_f64(),
                e.min_bits,
                e.witnesses
            ));
        }
        out
    }

    /// Parse the TSV form back; malformed lines are hard errors carrying
    /// their line number.
    pub fn from_tsv(text: &str) -> Result<MassTable, MassError> {
        let mut max_bits = 0u32;
        let mut budget = 1u64;
        let mut cap = (1u64 << 63) - 1;
        let mut scanned = 0u64;
        let mut halting = 0u64;
        let mut entries = BTreeMap::new();
        let mut saw_header = false;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# ") {
                let mut parts = rest.split('\t');
                let key = parts.next().unwrap_or("");
                if matches!(key, "max_bits" | "fuel_budget" | "value_cap" | "scanned" | "halting") {
                    let val = parts.next().unwrap_or("");
                    let parsed: u64 = val.parse().map_err(|_| MassError::Malformed {
                        line: lineno,
                        detail: format!("bad metadata value for {key}"),
                    })?;
                    match key {
                        "max_bits" => max_bits = parsed as u32,
                        "fuel_budget" => budget = parsed,
                        "value_cap" => cap = parsed,
                        "scanned" => scanned = parsed,
                        "halting" => halting = parsed,
                        _ => unreachable!(),
                    }
                }
                continue;
            }
            if !saw_header {
                if line != "value\tmass_num\tmass_exp2\tmass\tmin_bits\twitnesses" {
                    return Err(MassError::Malformed {
                        line: lineno,
                        detail: "expected the mass-table header row".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(MassError::Malformed {
                    line: lineno,
                    detail: format!("expected 6 columns, found {}", cols.len()),
                });
            }
            let parse_err = |what: &str| MassError::Malformed {
                line: lineno,
                detail: format!("bad {what}"),
            };
            let x: u64 = cols[0].parse().map_err(|_| parse_err("value"))?;
            let num: u128 = cols[1].parse().map_err(|_| parse_err("mass numerator"))?;
            let exp: u32 = cols[2].parse().map_err(|_| parse_err("mass exponent"))?;
            let min_bits: u32 = cols[4].parse().map_err(|_| parse_err("min_bits"))?;
            let witnesses: u64 = cols[5].parse().map_err(|_| parse_err("witnesses"))?;
            if entries
                .insert(x, MassEntry { mass: Dyadic::new(num, exp), min_bits, witnesses })
                .is_some()
            {
                return Err(MassError::Malformed {
                    line: lineno,
                    detail: format!("duplicate value {x}"),
                });
            }
        }
        if !saw_header {
            return Err(MassError::Malformed { line: 1, detail: "missing header row".into() });
        }
        Ok(MassTable {
            max_bits,
            fuel: Fuel::new(budget.max(1), cap.max(1)),
            scanned,
            halting,
            entries,
        })
    }
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// The splitmix64 generator: a tiny, portable, named algorithm, so the
/// metadata line pins sampling across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, bound)` by rejection; exact.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1);
        let span = bound.next_power_of_two();
        let mask = span - 1;
        loop {
            let r = self.next_u64() & mask;
            if r < bound {
                return r;
            }
        }
    }
}

/// Draw `n` values i.i.d. from the table masses renormalized over the
/// given support. Returns the multiset of drawn values as counts.
pub fn sample(
    support: &[(u64, MassEntry)],
    n: u64,
    seed: u64,
) -> Result<BTreeMap<u64, u64>, MassError> {
    if support.is_empty() {
        return Err(MassError::EmptyTable);
    }
    let exp = support.iter().map(|(_, e)| e.mass.exponent()).max().unwrap();
    let weights: Vec<u128> = support.iter().map(|(_, e)| e.mass.numerator_at(exp)).collect();
    let total: u128 = weights.iter().sum();
    assert!(total >= 1 && total <= u128::from(u64::MAX), "sampling scale out of range");
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0u128;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let mut rng = SplitMix64::new(seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..n {
        let r = u128::from(rng.below(total as u64));
        let idx = cumulative.partition_point(|&c| c <= r);
        *counts.entry(support[idx].0).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Rows of the round-value peak report: the mass at `2^k` against its
/// two integer neighbours.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakRow {
    pub k: u32,
    pub below_mass: f64,
    pub at_mass: f64,
    pub above_mass: f64,
    pub peak_over_below: bool,
    pub peak_over_above: bool,
}

pub fn power_peak_report(table: &MassTable, ks: impl Iterator<Item = u32>) -> Vec<PeakRow> {
    ks.map(|k| {
        let p = 1u64 << k;
        let below = table.mass(p - 1);
        let at = table.mass(p);
        let above = table.mass(p + 1);
        PeakRow {
            k,
            below_mass: below.to_f64(),
            at_mass: at.to_f64(),
            above_mass: above.to_f64(),
            peak_over_below: below.cmp_exact(&at) == std::cmp::Ordering::Less,
            peak_over_above: above.cmp_exact(&at) == std::cmp::Ordering::Less,
        }
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_arithmetic() {
        let a = Dyadic::power_of_two_reciprocal(3);
        let b = Dyadic::power_of_two_reciprocal(3);
        let s = a.add(b);
        assert_eq!(s, Dyadic::power_of_two_reciprocal(2));
        assert!(s.le(&Dyadic::ONE));
        assert_eq!(Dyadic::new(8, 5), Dyadic::new(1, 2));
    }

    #[test]
    fn mass_table_bare_small() {
        let ctx = AdmissibleContext::bare();
        let t = mass_table(&ctx, 16, Fuel::with_budget(300));
        // the nullary one-leaf halts, so 1 carries mass at any truncation
        // admitting its six-bit code
        assert!(!t.mass(1).is_zero());
        assert!(t.total().le(&Dyadic::ONE));
        assert_eq!(t.entry(1).unwrap().min_bits, 6);
    }

    #[test]
    fn masses_monotone_in_truncation_and_fuel() {
        let ctx = AdmissibleContext::bare();
        let small = mass_table(&ctx, 14, Fuel::with_budget(100));
        let larger = mass_table(&ctx, 18, Fuel::with_budget(100));
        let more_fuel = mass_table(&ctx, 14, Fuel::with_budget(2_000));
        for (&x, e) in small.iter() {
            assert!(e.mass.le(&larger.mass(x)), "truncation regression at {x}");
            assert!(e.mass.le(&more_fuel.mass(x)), "fuel regression at {x}");
        }
    }

    #[test]
    fn parallel_merge_is_worker_count_independent() {
        let ctx = AdmissibleContext::with_numerals(64);
        let world =
            SweepWorld::prepare(&ctx, crate::complexity::Horizon::bits(16));
        let fuel = Fuel::with_budget(200);
        let one = mass_table_parallel(&world, &ctx, fuel, 1);
        let four = mass_table_parallel(&world, &ctx, fuel, 4);
        let eight = mass_table_parallel(&world, &ctx, fuel, 8);
        assert_eq!(one, four);
        assert_eq!(one, eight);
        assert_eq!(one.to_tsv(), eight.to_tsv());
    }

    #[test]
    fn tsv_round_trip() {
        let ctx = AdmissibleContext::with_numerals(32);
        let t = mass_table(&ctx, 14, Fuel::with_budget(100));
        let text = t.to_tsv();
        let back = MassTable::from_tsv(&text).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn tsv_malformed_line_reports_number() {
        let err = MassTable::from_tsv("value\tmass_num\tmass_exp2\tmass\tmin_bits\twitnesses\nbroken line\n")
            .unwrap_err();
        assert!(matches!(err, MassError::Malformed { line: 2, .. }));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let ctx = AdmissibleContext::with_numerals(64);
        let t = mass_table(&ctx, 18, Fuel::with_budget(200));
        let support = t.top_support(512);
        let a = sample(&support, 10_000, 42).unwrap();
        let b = sample(&support, 10_000, 42).unwrap();
        let c = sample(&support, 10_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.values().sum::<u64>(), 10_000);
    }

    #[test]
    fn sampling_matches_masses_in_distribution() {
        let ctx = AdmissibleContext::with_numerals(16);
        let t = mass_table(&ctx, 16, Fuel::with_budget(200));
        let support = t.top_support(16);
        let n = 200_000u64;
        let counts = sample(&support, n, 7).unwrap();
        let exp = support.iter().map(|(_, e)| e.mass.exponent()).max().unwrap();
        let total: u128 = support.iter().map(|(_, e)| e.mass.numerator_at(exp)).sum();
        // chi-square-style sanity: relative error small on heavy values
        for (x, e) in &support {
            let p = e.mass.numerator_at(exp) as f64 / total as f64;
            if p < 0.01 {
                continue;
            }
            let got = *counts.get(x).unwrap_or(&0) as f64 / n as f64;
            assert!(
                (got - p).abs() < 0.01 + 0.2 * p,
                "value {x}: empirical {got:.4} vs mass {p:.4}"
            );
        }
    }

    #[test]
    fn empty_support_rejected() {
        assert!(matches!(sample(&[], 5, 1), Err(MassError::EmptyTable)));
    }
}
