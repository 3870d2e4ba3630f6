//! Bit strings and the self-delimiting integer codes used by the binary
//! program format.
//!
//! Three codes live here:
//!
//! * `nat` — unary length, then binary payload: a natural `n ≥ 0` is coded
//!   as `k = n + 1` with bit-length `ℓ`, written as `ℓ−1` one-bits, a
//!   zero, then the `ℓ−1` payload bits of `k` below its leading one.
//!   Every bit stream decodes to at most one natural, and every natural
//!   has exactly one code, so the code is prefix-free and complete.
//! * minimal binary — the optimal prefix-free code for a known bound `u`,
//!   used where an upper bound is available from context.
//! * [`CanonicalCode`] — a canonical prefix code over a finite id range
//!   with a prescribed length profile, used for oracle-table ids.

use std::cmp::Ordering;
use std::fmt;

/// An immutable bit string; bit 0 is the first bit of the stream and is
/// stored at the most significant position of the first word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeWord {
    len: usize,
    words: Vec<u64>,
}

impl CodeWord {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (63 - (i % 64))) & 1 == 1
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { words: &self.words, len: self.len, pos: 0 }
    }

    /// Parse from an ASCII `0`/`1` string.
    pub fn from_bit_str(s: &str) -> Option<CodeWord> {
        let mut w = BitWriter::new();
        for ch in s.chars() {
            match ch {
                '0' => w.push_bit(false),
                '1' => w.push_bit(true),
                _ => return None,
            }
        }
        Some(w.finish())
    }

    /// The `i`-th bit string of length `len` in lexicographic order.
    pub fn from_value(value: u128, len: usize) -> CodeWord {
        assert!(len <= 128);
        let mut w = BitWriter::new();
        for i in (0..len).rev() {
            w.push_bit((value >> i) & 1 == 1);
        }
        w.finish()
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl Ord for CodeWord {
    /// Shortlex: by length, then lexicographic on bits.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for CodeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Append-only bit buffer with backtracking support.
#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    len: usize,
    words: Vec<u64>,
}

impl BitWriter {
    pub fn new() -> Self {
        BitWriter::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_bit(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            let w = self.words.last_mut().unwrap();
            *w |= 1u64 << (63 - (self.len % 64));
        }
        self.len += 1;
    }

    /// Append the `count` low bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, count: usize) {
        debug_assert!(count <= 64);
        for i in (0..count).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    /// Drop every bit from position `to_len` on.
    pub fn truncate(&mut self, to_len: usize) {
        debug_assert!(to_len <= self.len);
        self.len = to_len;
        let keep_words = (to_len + 63) / 64;
        self.words.truncate(keep_words);
        if to_len % 64 != 0 {
            if let Some(w) = self.words.last_mut() {
                let keep = to_len % 64;
                *w &= !0u64 << (64 - keep);
            }
        }
    }

    pub fn finish(self) -> CodeWord {
        CodeWord { len: self.len, words: self.words }
    }

    pub fn snapshot(&self) -> CodeWord {
        CodeWord { len: self.len, words: self.words.clone() }
    }
}

/// Sequential bit reader over a code word or shared word slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    words: &'a [u64],
    len: usize,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.len - self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos >= self.len {
            return None;
        }
        let b = (self.words[self.pos / 64] >> (63 - (self.pos % 64))) & 1 == 1;
        self.pos += 1;
        Some(b)
    }

    pub fn read_bits(&mut self, count: usize) -> Option<u64> {
        debug_assert!(count <= 64);
        let mut v = 0u64;
        for _ in 0..count {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Some(v)
    }
}

// ---------------------------------------------------------------------------
// nat: unary-length-then-binary
// ---------------------------------------------------------------------------

fn bit_length(k: u64) -> u32 {
    64 - k.leading_zeros()
}

/// Code length of `nat(n)` in bits.
pub fn nat_len(n: u64) -> usize {
    (2 * bit_length(n + 1) - 1) as usize
}

pub fn write_nat(w: &mut BitWriter, n: u64) {
    let k = n + 1;
    let l = bit_length(k);
    for _ in 0..l - 1 {
        w.push_bit(true);
    }
    w.push_bit(false);
    if l > 1 {
        w.push_bits(k & !(1u64 << (l - 1)), (l - 1) as usize);
    }
}

/// Decode a `nat`; `None` means the stream ended inside the code.
pub fn read_nat(r: &mut BitReader<'_>) -> Option<u64> {
    let mut ones = 0u32;
    loop {
        match r.read_bit()? {
            true => ones += 1,
            false => break,
        }
        if ones > 62 {
            // unreachable for codes we emit; treat as truncation
            return None;
        }
    }
    let payload = r.read_bits(ones as usize)?;
    Some(((1u64 << ones) | payload) - 1)
}

// ---------------------------------------------------------------------------
// minimal (truncated) binary with known bound
// ---------------------------------------------------------------------------

/// Code length of `v` under the minimal binary code with bound `u`.
pub fn minimal_binary_len(v: u64, u: u64) -> usize {
    debug_assert!(v < u && u >= 1);
    if u == 1 {
        return 0;
    }
    let s = bit_length(u - 1);
    let limit = (1u64 << s) - u;
    if v < limit {
        (s - 1) as usize
    } else {
        s as usize
    }
}

pub fn write_minimal_binary(w: &mut BitWriter, v: u64, u: u64) {
    debug_assert!(v < u && u >= 1);
    if u == 1 {
        return;
    }
    let s = bit_length(u - 1);
    let limit = (1u64 << s) - u;
    if v < limit {
        w.push_bits(v, (s - 1) as usize);
    } else {
        w.push_bits(v + limit, s as usize);
    }
}

pub fn read_minimal_binary(r: &mut BitReader<'_>, u: u64) -> Option<u64> {
    debug_assert!(u >= 1);
    if u == 1 {
        return Some(0);
    }
    let s = bit_length(u - 1);
    let limit = (1u64 << s) - u;
    let prefix = r.read_bits((s - 1) as usize)?;
    if prefix < limit {
        Some(prefix)
    } else {
        let low = u64::from(r.read_bit()?);
        Some(((prefix << 1) | low) - limit)
    }
}

// ---------------------------------------------------------------------------
// canonical prefix code over a finite id range
// ---------------------------------------------------------------------------

/// A canonical prefix code over ids `1..=count` with the length profile
/// `ℓ(id) = ⌈log₂ id⌉ + 5 − min(v₂(id), 4)`, where `v₂` is the 2-adic
/// valuation. Ids divisible by high powers of two get strictly shorter
/// codes than their odd neighbours, so the id code prices round ids the
/// way the operator language prices small ones. The profile keeps the
/// Kraft sum below one for every `count`, which the constructor verifies.
#[derive(Debug, Clone)]
pub struct CanonicalCode {
    count: u32,
    /// per id (1-based): (length, codeword value)
    enc: Vec<(u32, u64)>,
    /// per length: (first code value at this length, ids in canonical order)
    bands: Vec<(u32, u64, Vec<u32>)>,
}

/// Length profile of the id code.
pub fn id_code_len(id: u32) -> u32 {
    debug_assert!(id >= 1);
    let ceil_log2 = 32 - (id - 1).leading_zeros();
    ceil_log2 + 5 - id.trailing_zeros().min(4)
}

impl CanonicalCode {
    pub fn new(count: u32) -> CanonicalCode {
        let mut by_len: Vec<(u32, u32)> = (1..=count).map(|id| (id_code_len(id), id)).collect();
        by_len.sort_unstable();
        let mut enc = vec![(0u32, 0u64); count as usize + 1];
        let mut bands: Vec<(u32, u64, Vec<u32>)> = Vec::new();
        let mut next_code = 0u64;
        let mut cur_len = 0u32;
        for (len, id) in by_len {
            if len > cur_len {
                next_code <<= len - cur_len;
                cur_len = len;
            }
            assert!(next_code < (1u64 << cur_len), "length profile violates the Kraft bound");
            enc[id as usize] = (cur_len, next_code);
            match bands.last_mut() {
                Some((blen, _, ids)) if *blen == cur_len => ids.push(id),
                _ => bands.push((cur_len, next_code, vec![id])),
            }
            next_code += 1;
        }
        CanonicalCode { count, enc, bands }
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn len_of(&self, id: u32) -> Option<usize> {
        if id == 0 || id > self.count {
            return None;
        }
        Some(self.enc[id as usize].0 as usize)
    }

    pub fn write(&self, w: &mut BitWriter, id: u32) {
        let (len, code) = self.enc[id as usize];
        w.push_bits(code, len as usize);
    }

    /// Decode one id. `Ok(None)` means the stream ended inside a possible
    /// code; `Err(())` means no assigned codeword starts with these bits.
    pub fn read(&self, r: &mut BitReader<'_>) -> Result<Option<u32>, ()> {
        let mut acc = 0u64;
        let mut len = 0u32;
        for (blen, first, ids) in &self.bands {
            while len < *blen {
                match r.read_bit() {
                    Some(b) => acc = (acc << 1) | u64::from(b),
                    None => return Ok(None),
                }
                len += 1;
            }
            if acc >= *first && acc - *first < ids.len() as u64 {
                return Ok(Some(ids[(acc - *first) as usize]));
            }
            if acc < *first {
                return Err(());
            }
        }
        Err(())
    }

    /// All ids at each code length, for enumeration and mass accounting.
    pub fn bands(&self) -> &[(u32, u64, Vec<u32>)] {
        &self.bands
    }

    /// Exact Kraft sum numerator at denominator `2^max_len`.
    pub fn kraft_numerator(&self) -> (u128, u32) {
        let max_len = self.bands.last().map(|b| b.0).unwrap_or(0);
        let mut num = 0u128;
        for (len, _, ids) in &self.bands {
            num += (ids.len() as u128) << (max_len - len);
        }
        (num, max_len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_round_trip() {
        for n in 0..2000u64 {
            let mut w = BitWriter::new();
            write_nat(&mut w, n);
            let cw = w.finish();
            assert_eq!(cw.len(), nat_len(n));
            let mut r = cw.reader();
            assert_eq!(read_nat(&mut r), Some(n));
            assert_eq!(r.remaining(), 0);
        }
    }

    #[test]
    fn nat_small_lengths() {
        assert_eq!(nat_len(0), 1);
        assert_eq!(nat_len(1), 3);
        assert_eq!(nat_len(2), 3);
        assert_eq!(nat_len(3), 5);
        assert_eq!(nat_len(6), 5);
        assert_eq!(nat_len(7), 7);
    }

    #[test]
    fn minimal_binary_round_trip_and_completeness() {
        for u in 1..40u64 {
            for v in 0..u {
                let mut w = BitWriter::new();
                write_minimal_binary(&mut w, v, u);
                let cw = w.finish();
                assert_eq!(cw.len(), minimal_binary_len(v, u));
                let mut r = cw.reader();
                assert_eq!(read_minimal_binary(&mut r, u), Some(v));
                assert_eq!(r.remaining(), 0);
            }
            // completeness: Kraft sum is exactly one
            let total: f64 = (0..u).map(|v| 0.5f64.powi(minimal_binary_len(v, u) as i32)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn id_code_prices_round_ids_below_neighbours() {
        assert_eq!(id_code_len(1), 5);
        assert_eq!(id_code_len(1024), 11);
        assert_eq!(id_code_len(1023), 15);
        assert_eq!(id_code_len(1025), 16);
        for k in 5..=10u32 {
            let p = 1u32 << k;
            assert!(id_code_len(p) < id_code_len(p - 1));
            assert!(id_code_len(p) < id_code_len(p + 1));
        }
    }

    #[test]
    fn canonical_code_round_trip_and_kraft() {
        for count in [1u32, 2, 3, 17, 100, 4096] {
            let code = CanonicalCode::new(count);
            let (num, max_len) = code.kraft_numerator();
            assert!(num <= 1u128 << max_len, "Kraft violated at count {count}");
            for id in 1..=count {
                let mut w = BitWriter::new();
                code.write(&mut w, id);
                let cw = w.finish();
                assert_eq!(cw.len(), code.len_of(id).unwrap());
                let mut r = cw.reader();
                assert_eq!(code.read(&mut r), Ok(Some(id)));
                assert_eq!(r.remaining(), 0);
            }
        }
    }

    #[test]
    fn truncate_clears_tail_bits() {
        let mut w = BitWriter::new();
        w.push_bits(0b1111_1111, 8);
        w.truncate(3);
        w.push_bit(false);
        let cw = w.finish();
        assert_eq!(cw.to_string(), "1110");
    }

    #[test]
    fn shortlex_order() {
        let a = CodeWord::from_bit_str("1").unwrap();
        let b = CodeWord::from_bit_str("00").unwrap();
        let c = CodeWord::from_bit_str("01").unwrap();
        assert!(a < b && b < c);
    }
}
