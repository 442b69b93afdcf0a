//! Bit-packed truth tables for functions in `B_n`.
//!
//! Position `i` of a table holds `f(x)` where `i = Σ x_j · 2^(j-1)`, so `x_1`
//! is the least significant bit of the index. Variables are addressed with
//! 0-based indices in the API (`0` is `x_1`).

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported variable count (a 16 MiB table).
pub const MAX_VARS: usize = 24;

const VAR_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Word `word` of the projection table of variable `var` (0-based).
#[inline]
pub(crate) fn var_word(var: usize, word: usize) -> u64 {
    if var < 6 {
        VAR_PATTERNS[var]
    } else if (word >> (var - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the valid bits in the last (only) word of a table with `n < 6`.
#[inline]
pub(crate) fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

pub(crate) fn check_vars(module: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::cap(module, "n", n, cap))
    } else {
        Ok(())
    }
}

/// A point `x ∈ F_2^n`, stored as `(x_1, ..., x_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn zero(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// The assignment whose table index is `index`.
    pub fn from_index(n: usize, index: usize) -> Self {
        Assignment((0..n).map(|j| (index >> j) & 1 == 1).collect())
    }

    /// Parses a string like `"101"` as `(x_1, x_2, x_3) = (1, 0, 1)`.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("illegal assignment character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    pub fn index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | (usize::from(b) << j))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn xor(&self, other: &Assignment) -> Result<Assignment> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Assignment(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The truth table of a function in `B_n`, `0 ≤ n ≤ MAX_VARS`.
///
/// Immutable once built. Bits beyond position `2^n - 1` in the storage word
/// are always zero, so derived equality is equality of functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    fn zeroed(n: usize) -> Self {
        TruthTable {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub(crate) fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(n));
        if n < 6 {
            words[0] &= tail_mask(n);
        }
        TruthTable { n, words }
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        let fill = if value { u64::MAX } else { 0 };
        Ok(Self::from_words(n, vec![fill; word_count(n)]))
    }

    /// Projection onto variable `var` (0-based), i.e. `f(x) = x_{var+1}`.
    pub fn variable(n: usize, var: usize) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        if var >= n {
            return Err(Error::VariableOutOfRange { index: var, n });
        }
        Ok(Self::from_words(
            n,
            (0..word_count(n)).map(|w| var_word(var, w)).collect(),
        ))
    }

    /// Builds a table by evaluating `f` at every index.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        let mut t = Self::zeroed(n);
        for i in 0..(1usize << n) {
            if f(i) {
                t.words[i >> 6] |= 1 << (i & 63);
            }
        }
        Ok(t)
    }

    /// Table of a function with at most 6 variables given as raw bits.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        check_vars("truth_table", n, 6)?;
        Ok(Self::from_words(n, vec![bits]))
    }

    /// The affine function `a·x ⊕ c`, with `a` given coefficient by coefficient.
    pub fn affine(a: &[bool], c: bool, n: usize) -> Result<Self> {
        if a.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: a.len(),
            });
        }
        let mask = a
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << j));
        Self::affine_mask(n, mask, c)
    }

    /// The affine function `a·x ⊕ c` where bit `j` of `mask` is `a_{j+1}`.
    pub fn affine_mask(n: usize, mask: usize, c: bool) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        if n < usize::BITS as usize && mask >> n != 0 {
            return Err(Error::Invalid(format!(
                "coefficient mask {mask:#x} has bits beyond {n} variables"
            )));
        }
        let fill = if c { u64::MAX } else { 0 };
        let words = (0..word_count(n))
            .map(|w| {
                (0..n)
                    .filter(|j| (mask >> j) & 1 == 1)
                    .fold(fill, |acc, j| acc ^ var_word(j, w))
            })
            .collect();
        Ok(Self::from_words(n, words))
    }

    /// A uniformly random table drawn from a ChaCha8 stream seeded with
    /// `seed`. Bits are consumed in index order, 64 per generator word.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self::random_with(n, &mut rng))
    }

    pub(crate) fn random_with(n: usize, rng: &mut impl RngCore) -> Self {
        let words = (0..word_count(n)).map(|_| rng.next_u64()).collect();
        Self::from_words(n, words)
    }

    /// Parses the binary (`2^n` characters) or compact hex (`2^n / 4`
    /// nibbles, `n ≥ 2`) text form. Hex nibble `k` covers positions
    /// `4k..4k+3`, position `i` contributing `2^(i mod 4)`.
    pub fn from_text(s: &str, n: usize) -> Result<Self> {
        check_vars("truth_table", n, MAX_VARS)?;
        let s = s.trim();
        let len = 1usize << n;
        let count = s.chars().count();
        let mut t = Self::zeroed(n);
        if count == len {
            for (i, ch) in s.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => t.words[i >> 6] |= 1 << (i & 63),
                    other => {
                        return Err(Error::Parse(format!(
                            "illegal character {other:?} in binary truth table"
                        )))
                    }
                }
            }
            Ok(t)
        } else if n >= 2 && count == len / 4 {
            for (k, ch) in s.chars().enumerate() {
                let nibble = ch.to_digit(16).ok_or_else(|| {
                    Error::Parse(format!("illegal character {ch:?} in hex truth table"))
                })? as u64;
                let pos = 4 * k;
                t.words[pos >> 6] |= nibble << (pos & 63);
            }
            Ok(t)
        } else {
            Err(Error::Parse(format!(
                "truth table of {n} variables needs {len} binary characters{}, got {count}",
                if n >= 2 {
                    format!(" or {} hex digits", len / 4)
                } else {
                    String::new()
                }
            )))
        }
    }

    /// Parses a record of the form `n:<int> tt:<string>`.
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut n = None;
        let mut tt = None;
        for field in line.split_whitespace() {
            if let Some(v) = field.strip_prefix("n:") {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad variable count {v:?}: {e}")))?,
                );
            } else if let Some(v) = field.strip_prefix("tt:") {
                tt = Some(v);
            } else {
                return Err(Error::Parse(format!("unexpected field {field:?}")));
            }
        }
        match (n, tt) {
            (Some(n), Some(tt)) => Self::from_text(tt, n),
            _ => Err(Error::Parse(format!(
                "expected `n:<int> tt:<string>`, got {line:?}"
            ))),
        }
    }

    pub fn to_line(&self) -> String {
        format!("n:{} tt:{}", self.n, self)
    }

    /// Compact hex form; `None` for `n < 2`.
    pub fn to_hex(&self) -> Option<String> {
        if self.n < 2 {
            return None;
        }
        let nibbles = (1usize << self.n) / 4;
        Some(
            (0..nibbles)
                .map(|k| {
                    let pos = 4 * k;
                    let v = (self.words[pos >> 6] >> (pos & 63)) & 0xF;
                    char::from_digit(v as u32, 16).unwrap()
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Raw bits for `n ≤ 6`.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.get(x.index()))
    }

    /// Number of ones.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn complement(&self) -> Self {
        Self::from_words(self.n, self.words.iter().map(|w| !w).collect())
    }

    pub fn xor(&self, other: &TruthTable) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self::from_words(
            self.n,
            self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        ))
    }

    fn same_n(&self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn hamming_distance(&self, other: &TruthTable) -> Result<u64> {
        self.same_n(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum())
    }

    /// Fixes the given variables (0-based index, value) and returns the
    /// table over the remaining variables, renumbered in ascending order.
    pub fn restrict(&self, fixed: &[(usize, bool)]) -> Result<Self> {
        let mut assigned = vec![None; self.n];
        for &(var, value) in fixed {
            if var >= self.n {
                return Err(Error::VariableOutOfRange {
                    index: var,
                    n: self.n,
                });
            }
            if assigned[var].replace(value).is_some() {
                return Err(Error::DuplicateAssignment(var));
            }
        }
        let base = assigned
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Some(true))
            .fold(0usize, |acc, (j, _)| acc | (1 << j));
        let free: Vec<usize> = (0..self.n).filter(|&j| assigned[j].is_none()).collect();

        // Fixing a trailing block of variables is a prefix slice.
        let k = free.len();
        if free.iter().enumerate().all(|(i, &j)| i == j) {
            let offset = base;
            return Self::from_fn(k, |i| self.get(offset | i));
        }
        Self::from_fn(k, |i| {
            let idx = free
                .iter()
                .enumerate()
                .fold(base, |acc, (bit, &var)| acc | (((i >> bit) & 1) << var));
            self.get(idx)
        })
    }
}

impl fmt::Display for TruthTable {
    /// Canonical binary form, position 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(s: &str, n: usize) -> TruthTable {
        TruthTable::from_text(s, n).unwrap()
    }

    #[test]
    fn parse_and_index_convention() {
        let and2 = tt("0001", 2);
        assert!(and2.get(3));
        assert_eq!(and2.weight(), 1);
        assert_eq!(tt("8", 2), and2);
        let xor2 = tt("0110", 2);
        assert_eq!(xor2, TruthTable::affine(&[true, true], false, 2).unwrap());
        assert_eq!(tt("6", 2), xor2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(TruthTable::from_text("000", 2), Err(Error::Parse(_))));
        assert!(matches!(TruthTable::from_text("0021", 2), Err(Error::Parse(_))));
        assert!(matches!(TruthTable::from_text("g", 2), Err(Error::Parse(_))));
        assert!(matches!(
            TruthTable::from_text("0", 25),
            Err(Error::SizeCap { .. })
        ));
        // Hex is not available below two variables.
        assert!(TruthTable::from_text("", 1).is_err());
    }

    #[test]
    fn hex_round_trip() {
        let t = tt("0110100110010110", 4);
        assert_eq!(t.to_hex().unwrap(), "6996");
        assert_eq!(tt("6996", 4), t);
        assert_eq!(tt("1", 0).to_hex(), None);
    }

    #[test]
    fn evaluate_examples() {
        let and2 = tt("0001", 2);
        let xor2 = tt("0110", 2);
        let a = |s| Assignment::parse(s).unwrap();
        assert!(and2.evaluate(&a("11")).unwrap());
        assert!(!and2.evaluate(&a("10")).unwrap());
        assert!(xor2.evaluate(&a("01")).unwrap());
        assert_eq!(
            and2.evaluate(&a("1")),
            Err(Error::Dimension {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn restrict_examples() {
        let and2 = tt("0001", 2);
        assert_eq!(and2.restrict(&[(1, true)]).unwrap(), tt("01", 1));
        assert_eq!(and2.restrict(&[(1, false)]).unwrap(), tt("00", 1));
        // x1 x2 ⊕ x3, fix x3 = 0
        let f = TruthTable::from_fn(3, |i| ((i & 1) & (i >> 1) & 1) ^ ((i >> 2) & 1) == 1).unwrap();
        assert_eq!(f.restrict(&[(2, false)]).unwrap(), and2);
        // fixing a leading variable uses the scattered path
        assert_eq!(f.restrict(&[(0, true)]).unwrap(), tt("0110", 2));
        assert_eq!(
            and2.restrict(&[(2, true)]),
            Err(Error::VariableOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(
            and2.restrict(&[(0, true), (0, false)]),
            Err(Error::DuplicateAssignment(0))
        );
    }

    #[test]
    fn hamming_examples() {
        let and2 = tt("0001", 2);
        assert_eq!(and2.hamming_distance(&and2).unwrap(), 0);
        assert_eq!(and2.hamming_distance(&tt("0000", 2)).unwrap(), 1);
        // 0001 vs 0110 differ at positions 1, 2 and 3
        assert_eq!(and2.hamming_distance(&tt("0110", 2)).unwrap(), 3);
        assert!(and2.hamming_distance(&tt("01", 1)).is_err());
    }

    #[test]
    fn affine_examples() {
        assert_eq!(TruthTable::affine(&[false, false], false, 2).unwrap(), tt("0000", 2));
        assert_eq!(TruthTable::affine(&[true, true], false, 2).unwrap(), tt("0110", 2));
        assert_eq!(TruthTable::affine(&[true, false], true, 2).unwrap(), tt("1010", 2));
        assert!(TruthTable::affine(&[true], true, 2).is_err());
        // wide tables exercise the per-word variable patterns
        let t = TruthTable::affine_mask(9, 0b1_0100_0001, true).unwrap();
        let direct = TruthTable::from_fn(9, |i| (i & 0b1_0100_0001).count_ones() % 2 == 0).unwrap();
        assert_eq!(t, direct);
    }

    #[test]
    fn random_tables() {
        assert_eq!(TruthTable::random(7, 3).unwrap(), TruthTable::random(7, 3).unwrap());
        assert_eq!(TruthTable::random(0, 99).unwrap().len(), 1);
        let differing = (0..200u64)
            .filter(|&s| TruthTable::random(3, 2 * s).unwrap() != TruthTable::random(3, 2 * s + 1).unwrap())
            .count();
        // two independent 8-bit tables collide with probability 1/256
        assert!(differing >= 190, "{differing}");
        assert!(TruthTable::random(25, 0).is_err());
    }

    #[test]
    fn line_format() {
        let t = TruthTable::parse_line("n:2 tt:0001").unwrap();
        assert_eq!(t.to_line(), "n:2 tt:0001");
        assert_eq!(TruthTable::parse_line("tt:8 n:2").unwrap(), t);
        assert!(TruthTable::parse_line("n:2").unwrap_err().is_parse());
    }
}
