//! Rank-frequency statistics: corpus ingestion, power-law fitting by
//! log-log least squares and by discrete maximum likelihood, deviation
//! scores, and numeral profiles against a mass table.

use crate::levin::MassTable;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// A corpus ranked by strictly decreasing count, ties broken
/// lexicographically on the token; rank 1 is the most frequent token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedCorpus {
    /// `tokens[r-1]` is the token of rank `r` with its count.
    pub tokens: Vec<(String, u64)>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus has no tokens")]
    EmptyCorpus,
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
}

/// Rank a token-count table.
pub fn rank_frequency(counts: &BTreeMap<String, u64>) -> Result<RankedCorpus, CorpusError> {
    if counts.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut tokens: Vec<(String, u64)> =
        counts.iter().map(|(t, &c)| (t.clone(), c)).collect();
    tokens.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total = tokens.iter().map(|(_, c)| c).sum();
    Ok(RankedCorpus { tokens, total })
}

impl RankedCorpus {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn rank_of(&self, token: &str) -> Option<usize> {
        self.tokens.iter().position(|(t, _)| t == token).map(|i| i + 1)
    }

    pub fn count_at(&self, rank: usize) -> u64 {
        self.tokens[rank - 1].1
    }

    pub fn count_of(&self, token: &str) -> u64 {
        self.tokens
            .iter()
            .find(|(t, _)| t == token)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// TSV rendering: `token<TAB>count<TAB>rank` with a header row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("token\tcount\trank\n");
        for (i, (t, c)) in self.tokens.iter().enumerate() {
            out.push_str(&format!("{t}\t{c}\t{}\n", i + 1));
        }
        out
    }
}

/// Parse a `token<TAB>count` corpus file. Malformed lines, zero counts,
/// and duplicate tokens are hard errors carrying their line number.
pub fn parse_corpus_tsv(text: &str) -> Result<BTreeMap<String, u64>, CorpusError> {
    let mut counts = BTreeMap::new();
    let mut seen_data = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line == "token\tcount" {
            continue;
        }
        seen_data = true;
        let mut parts = line.split('\t');
        let token = parts.next().unwrap_or("");
        let count_txt = parts.next().ok_or(CorpusError::Malformed {
            line: lineno,
            detail: "expected token<TAB>count".into(),
        })?;
        // a trailing rank column (as emitted by rank-frequency output) is
        // tolerated; anything further is an error
        let extra: Vec<&str> = parts.collect();
        if extra.len() > 1 {
            return Err(CorpusError::Malformed {
                line: lineno,
                detail: "too many columns".into(),
            });
        }
        if token.is_empty() {
            return Err(CorpusError::Malformed { line: lineno, detail: "empty token".into() });
        }
        let count: u64 = count_txt.parse().map_err(|_| CorpusError::Malformed {
            line: lineno,
            detail: format!("bad count '{count_txt}'"),
        })?;
        if count == 0 {
            return Err(CorpusError::Malformed {
                line: lineno,
                detail: "counts must be positive".into(),
            });
        }
        if counts.insert(token.to_string(), count).is_some() {
            return Err(CorpusError::Malformed {
                line: lineno,
                detail: format!("duplicate token '{token}'"),
            });
        }
    }
    Ok(counts)
}

// ---------------------------------------------------------------------------
// Power-law fitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    /// Least squares on log count against log rank.
    LsLogLog,
    /// Discrete maximum likelihood over the bounded rank range, with a
    /// Kolmogorov-Smirnov goodness statistic.
    DiscreteMle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub method: FitMethod,
    pub r_min: usize,
    pub r_max: usize,
    pub ks_stat: f64,
    /// Log-scale amplitude of the fitted law `count ≈ A·r^(-s)`.
    pub log_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("fit range [{r_min},{r_max}] holds fewer than 10 ranks")]
    RangeTooSmall { r_min: usize, r_max: usize },
    #[error("all counts in the fit range are equal")]
    DegenerateCounts,
}

/// Fit a power law to the ranked counts over `[r_min, r_max]`.
pub fn fit_power_law(
    ranked: &RankedCorpus,
    method: FitMethod,
    r_min: usize,
    r_max: usize,
) -> Result<PowerLawFit, FitError> {
    let r_max = r_max.min(ranked.len());
    if r_min < 1 || r_max < r_min || r_max - r_min + 1 < 10 {
        return Err(FitError::RangeTooSmall { r_min, r_max });
    }
    let counts: Vec<u64> = (r_min..=r_max).map(|r| ranked.count_at(r)).collect();
    if counts.iter().all(|&c| c == counts[0]) {
        return Err(FitError::DegenerateCounts);
    }
    let exponent = match method {
        FitMethod::LsLogLog => ls_exponent(&counts, r_min),
        FitMethod::DiscreteMle => mle_exponent(&counts, r_min, r_max),
    };
    let log_amplitude = amplitude(&counts, r_min, exponent);
    let ks_stat = ks_statistic(&counts, r_min, r_max, exponent);
    Ok(PowerLawFit { exponent, method, r_min, r_max, ks_stat, log_amplitude })
}

/// Clauset-style automatic head cut: try each `r_min` candidate, fit,
/// and keep the fit with the smallest Kolmogorov-Smirnov distance.
pub fn fit_power_law_auto(
    ranked: &RankedCorpus,
    method: FitMethod,
) -> Result<PowerLawFit, FitError> {
    let n = ranked.len();
    let mut best: Option<PowerLawFit> = None;
    let max_cut = (n / 4).clamp(1, 64);
    for r_min in 1..=max_cut {
        let Ok(fit) = fit_power_law(ranked, method, r_min, n) else { continue };
        let better = match &best {
            None => true,
            Some(b) => fit.ks_stat < b.ks_stat,
        };
        if better {
            best = Some(fit);
        }
    }
    best.ok_or(FitError::RangeTooSmall { r_min: 1, r_max: n })
}

fn ls_exponent(counts: &[u64], r_min: usize) -> f64 {
    let n = counts.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        let x = ((r_min + i) as f64).ln();
        let y = (c as f64).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    -slope
}

/// Discrete bounded-range power-law likelihood: counts are multiplicities
/// of the ranks. Maximized by golden-section search; the likelihood is
/// unimodal in the exponent.
fn mle_exponent(counts: &[u64], r_min: usize, r_max: usize) -> f64 {
    let total: f64 = counts.iter().map(|&c| c as f64).sum();
    let sum_log: f64 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 * ((r_min + i) as f64).ln())
        .sum();
    let neg_log_like = |alpha: f64| -> f64 {
        let h: f64 = (r_min..=r_max).map(|r| (r as f64).powf(-alpha)).sum();
        alpha * sum_log + total * h.ln()
    };
    golden_min(neg_log_like, 0.01, 12.0, 1e-7)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while (hi - lo).abs() > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

fn amplitude(counts: &[u64], r_min: usize, exponent: f64) -> f64 {
    let n = counts.len() as f64;
    let mut acc = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        acc += (c as f64).ln() + exponent * ((r_min + i) as f64).ln();
    }
    acc / n
}

fn ks_statistic(counts: &[u64], r_min: usize, r_max: usize, exponent: f64) -> f64 {
    let total: f64 = counts.iter().map(|&c| c as f64).sum();
    let h: f64 = (r_min..=r_max).map(|r| (r as f64).powf(-exponent)).sum();
    let mut emp = 0.0;
    let mut fit = 0.0;
    let mut d: f64 = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        emp += c as f64 / total;
        fit += ((r_min + i) as f64).powf(-exponent) / h;
        d = d.max((emp - fit).abs());
    }
    d
}

/// Residual summary of a corpus against a fitted law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationScore {
    pub max_abs_log_residual: f64,
    pub mean_abs_log_residual: f64,
}

/// Absolute log-residuals of the counts from the fitted law over the fit
/// range.
pub fn zipf_deviation(ranked: &RankedCorpus, fit: &PowerLawFit) -> DeviationScore {
    let mut max_abs: f64 = 0.0;
    let mut sum_abs = 0.0;
    let mut n = 0.0;
    for r in fit.r_min..=fit.r_max.min(ranked.len()) {
        let c = ranked.count_at(r) as f64;
        let predicted = fit.log_amplitude - fit.exponent * (r as f64).ln();
        let resid = (c.ln() - predicted).abs();
        max_abs = max_abs.max(resid);
        sum_abs += resid;
        n += 1.0;
    }
    DeviationScore { max_abs_log_residual: max_abs, mean_abs_log_residual: sum_abs / n }
}

// ---------------------------------------------------------------------------
// Numeral profiles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumeralRow {
    pub token: String,
    pub value: u64,
    pub count: u64,
    pub frequency: f64,
    pub corpus_rank: Option<usize>,
    pub mass: f64,
    pub mass_exact: Option<String>,
    pub min_code_bits: Option<u32>,
    pub is_peak: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumeralReport {
    pub peak_factor: f64,
    pub rows: Vec<NumeralRow>,
    /// Kendall rank correlation between corpus frequency order and the
    /// inverse order of the minimal code lengths, over numerals present
    /// in both the corpus and the mass table.
    pub kendall_tau_freq_vs_simplicity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumeralError {
    #[error("no numeral tokens found in the corpus")]
    NoNumeralsFound,
}

/// Compare numeral frequencies in a corpus with the a-priori masses. A
/// numeral is a peak when its count exceeds `peak_factor` times the
/// counts of both integer neighbours (missing neighbours count zero).
pub fn numeral_profile(
    ranked: &RankedCorpus,
    numeral_map: &BTreeMap<String, u64>,
    table: &MassTable,
    peak_factor: f64,
) -> Result<NumeralReport, NumeralError> {
    let mut count_by_value: BTreeMap<u64, u64> = BTreeMap::new();
    for (token, &value) in numeral_map {
        let c = ranked.count_of(token);
        if c > 0 {
            *count_by_value.entry(value).or_insert(0) += c;
        }
    }
    if count_by_value.is_empty() {
        return Err(NumeralError::NoNumeralsFound);
    }
    let mut rows = Vec::new();
    for (token, &value) in numeral_map {
        let count = ranked.count_of(token);
        if count == 0 {
            continue;
        }
        let below = value.checked_sub(1).and_then(|v| count_by_value.get(&v)).copied().unwrap_or(0);
        let above = count_by_value.get(&(value + 1)).copied().unwrap_or(0);
        let is_peak = (count as f64) > peak_factor * (below as f64)
            && (count as f64) > peak_factor * (above as f64);
        let entry = table.entry(value);
        rows.push(NumeralRow {
            token: token.clone(),
            value,
            count,
            frequency: count as f64 / ranked.total as f64,
            corpus_rank: ranked.rank_of(token),
            mass: table.mass(value).to_f64(),
            mass_exact: entry.map(|e| e.mass.to_string()),
            min_code_bits: entry.map(|e| e.min_bits),
            is_peak,
        });
    }
    let paired: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.min_code_bits.map(|b| (r.count as f64, -(b as f64))))
        .collect();
    let tau = if paired.len() >= 2 { Some(kendall_tau(&paired)) } else { None };
    Ok(NumeralReport { peak_factor, rows, kendall_tau_freq_vs_simplicity: tau })
}

/// Kendall rank correlation of paired observations, with the `b` variant
/// tie correction.
pub fn kendall_tau(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    let mut ties_x = 0i64;
    let mut ties_y = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let dx = pairs[i].0 - pairs[j].0;
            let dy = pairs[i].1 - pairs[j].1;
            if dx == 0.0 && dy == 0.0 {
                ties_x += 1;
                ties_y += 1;
            } else if dx == 0.0 {
                ties_x += 1;
            } else if dy == 0.0 {
                ties_y += 1;
            } else if dx * dy > 0.0 {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    let denom = ((n0 - ties_x as f64) * (n0 - ties_y as f64)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (concordant - discordant) as f64 / denom
}

/// Exact synthetic counts `c_r = ⌊scale / r^s⌋` for `r = 1..=ranks`,
/// with zero counts dropped.
pub fn synthetic_power_counts(ranks: usize, exponent: f64, scale: f64) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for r in 1..=ranks {
        let c = (scale / (r as f64).powf(exponent)).floor() as u64;
        if c >= 1 {
            counts.insert(format!("t{r:06}"), c);
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_and_ties() {
        let mut counts = BTreeMap::new();
        counts.insert("a".to_string(), 3);
        counts.insert("b".to_string(), 1);
        let ranked = rank_frequency(&counts).unwrap();
        assert_eq!(ranked.rank_of("a"), Some(1));
        assert_eq!(ranked.rank_of("b"), Some(2));

        let mut tied = BTreeMap::new();
        tied.insert("b".to_string(), 2);
        tied.insert("a".to_string(), 2);
        let ranked = rank_frequency(&tied).unwrap();
        assert_eq!(ranked.rank_of("a"), Some(1), "lexicographic tie-break");
        assert_eq!(ranked.rank_of("b"), Some(2));
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(rank_frequency(&BTreeMap::new()), Err(CorpusError::EmptyCorpus)));
    }

    #[test]
    fn synthetic_ranks_reproduce_construction() {
        // c_r = floor(1000 / r): the rank order must reproduce r
        let mut counts = BTreeMap::new();
        for r in 1..=100u64 {
            counts.insert(format!("w{r:03}"), 1000 / r);
        }
        let ranked = rank_frequency(&counts).unwrap();
        for r in 1..=100usize {
            let (token, _) = &ranked.tokens[r - 1];
            // ties in floor(1000/r) are broken lexicographically, which
            // coincides with increasing r for equal counts
            let expect_count = 1000 / (token[1..].parse::<u64>().unwrap());
            assert_eq!(ranked.count_at(r), expect_count);
        }
        assert_eq!(ranked.tokens[0].0, "w001");
    }

    #[test]
    fn exact_power_law_recovered_by_both_methods() {
        for s in [0.8f64, 1.0, 1.2] {
            let counts = synthetic_power_counts(500, s, 1_000_000.0);
            let ranked = rank_frequency(&counts).unwrap();
            let ls = fit_power_law(&ranked, FitMethod::LsLogLog, 1, 500).unwrap();
            let mle = fit_power_law(&ranked, FitMethod::DiscreteMle, 1, 500).unwrap();
            assert!((ls.exponent - s).abs() < 0.05, "LS got {} for {s}", ls.exponent);
            assert!((mle.exponent - s).abs() < 0.05, "MLE got {} for {s}", mle.exponent);
        }
    }

    #[test]
    fn ls_exponent_near_one_for_floor_zipf() {
        let counts = synthetic_power_counts(500, 1.0, 1_000_000.0);
        let ranked = rank_frequency(&counts).unwrap();
        let fit = fit_power_law(&ranked, FitMethod::LsLogLog, 1, 500).unwrap();
        assert!((fit.exponent - 1.0).abs() < 0.02);
    }

    #[test]
    fn degenerate_and_small_ranges_rejected() {
        let mut counts = BTreeMap::new();
        for r in 1..=30u64 {
            counts.insert(format!("w{r}"), 7);
        }
        let ranked = rank_frequency(&counts).unwrap();
        assert!(matches!(
            fit_power_law(&ranked, FitMethod::LsLogLog, 1, 30),
            Err(FitError::DegenerateCounts)
        ));
        assert!(matches!(
            fit_power_law(&ranked, FitMethod::LsLogLog, 1, 5),
            Err(FitError::RangeTooSmall { .. })
        ));
    }

    #[test]
    fn deviation_grows_under_perturbation() {
        let counts = synthetic_power_counts(200, 1.0, 100_000.0);
        let ranked = rank_frequency(&counts).unwrap();
        let fit = fit_power_law(&ranked, FitMethod::LsLogLog, 1, 200).unwrap();
        let clean = zipf_deviation(&ranked, &fit);
        assert!(clean.mean_abs_log_residual < 0.05);

        let mut perturbed = counts.clone();
        let victim = perturbed.keys().nth(50).unwrap().clone();
        *perturbed.get_mut(&victim).unwrap() *= 100;
        let ranked_p = rank_frequency(&perturbed).unwrap();
        let fit_p = fit_power_law(&ranked_p, FitMethod::LsLogLog, 1, 200).unwrap();
        let dirty = zipf_deviation(&ranked_p, &fit_p);
        assert!(dirty.max_abs_log_residual > clean.max_abs_log_residual);
    }

    #[test]
    fn corpus_tsv_parsing_errors_carry_line_numbers() {
        assert!(parse_corpus_tsv("alpha\t3\nbeta\t2\n").is_ok());
        let e = parse_corpus_tsv("alpha\t3\nbeta\tx\n").unwrap_err();
        assert!(matches!(e, CorpusError::Malformed { line: 2, .. }));
        let e = parse_corpus_tsv("alpha\t0\n").unwrap_err();
        assert!(matches!(e, CorpusError::Malformed { line: 1, .. }));
        let e = parse_corpus_tsv("alpha\t3\nalpha\t2\n").unwrap_err();
        assert!(matches!(e, CorpusError::Malformed { line: 2, .. }));
    }

    #[test]
    fn kendall_tau_signs() {
        let inc: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, i as f64)).collect();
        let dec: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -(i as f64))).collect();
        assert!((kendall_tau(&inc) - 1.0).abs() < 1e-12);
        assert!((kendall_tau(&dec) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn numeral_peak_detection() {
        use crate::context::AdmissibleContext;
        use crate::eval::Fuel;
        let ctx = AdmissibleContext::with_numerals(1100);
        let table = crate::levin::mass_table(&ctx, 14, Fuel::with_budget(50));
        let mut counts = BTreeMap::new();
        counts.insert("nine-nine-nine".to_string(), 4u64);
        counts.insert("thousand".to_string(), 40u64);
        counts.insert("thousand-one".to_string(), 3u64);
        let ranked = rank_frequency(&counts).unwrap();
        let mut map = BTreeMap::new();
        map.insert("nine-nine-nine".to_string(), 999u64);
        map.insert("thousand".to_string(), 1000u64);
        map.insert("thousand-one".to_string(), 1001u64);
        let report = numeral_profile(&ranked, &map, &table, 2.0).unwrap();
        let peak_row = report.rows.iter().find(|r| r.value == 1000).unwrap();
        assert!(peak_row.is_peak);
        let non_peak = report.rows.iter().find(|r| r.value == 999).unwrap();
        assert!(!non_peak.is_peak);
    }

    #[test]
    fn numeral_profile_requires_numerals() {
        use crate::context::AdmissibleContext;
        use crate::eval::Fuel;
        let ctx = AdmissibleContext::bare();
        let table = crate::levin::mass_table(&ctx, 10, Fuel::with_budget(50));
        let mut counts = BTreeMap::new();
        counts.insert("word".to_string(), 5u64);
        let ranked = rank_frequency(&counts).unwrap();
        let empty = BTreeMap::new();
        assert!(matches!(
            numeral_profile(&ranked, &empty, &table, 2.0),
            Err(NumeralError::NoNumeralsFound)
        ));
    }
}
