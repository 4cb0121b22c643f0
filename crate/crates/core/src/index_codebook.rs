//! Index selector: maps `p1` index bits to the set `I_A` of subcarriers
//! that carry mode-A symbols. Subcarrier positions are 1-based.

use crate::{bits, Error, Result};
use itertools::Itertools;
use std::fmt;

/// Sorted set of `k` distinct subcarrier positions in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexPattern {
    indices: Vec<usize>,
}

impl IndexPattern {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        let valid = n <= 64
            && indices.iter().all(|&i| (1..=n).contains(&i))
            && indices.windows(2).all(|w| w[0] < w[1]);
        if !valid {
            return Err(Error::InvalidPattern { indices, n });
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Whether 1-based position `pos` belongs to the pattern.
    pub fn contains(&self, pos: usize) -> bool {
        self.indices.binary_search(&pos).is_ok()
    }

    /// Bit `pos - 1` is set for every member position.
    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    /// The positions of `1..=n` not in the pattern (the `I_B` set).
    pub fn complement(&self, n: usize) -> Self {
        Self {
            indices: (1..=n).filter(|i| !self.contains(*i)).collect(),
        }
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices.iter().join(","))
    }
}

/// Free-function form of [`IndexPattern::complement`].
pub fn complement(pattern: &IndexPattern, n: usize) -> IndexPattern {
    pattern.complement(n)
}

/// Bijection between `p1`-bit words and `2^p1` distinct index patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexCodebook {
    n: usize,
    k: usize,
    p1: usize,
    patterns: Vec<IndexPattern>,
    masks: Vec<u64>,
}

/// `floor(log2(C(n, k)))`, or `None` if the binomial overflows `u128`.
pub fn index_bits(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n.saturating_sub(k));
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(127 - c.leading_zeros() as usize)
}

// Codebooks are materialised, so keep them to a sane size.
const MAX_INDEX_BITS: usize = 20;

impl IndexCodebook {
    /// Builds a codebook from an explicit word-ordered pattern list:
    /// `patterns[w]` is the pattern for index word `w`.
    pub fn from_patterns(n: usize, k: usize, patterns: Vec<Vec<usize>>) -> Result<Self> {
        Self::check_params(n, k)?;
        let p1 = index_bits(n, k).expect("checked above");
        if patterns.len() != 1 << p1 {
            return Err(Error::InvalidIndexParams {
                n,
                k,
                reason: format!("expected {} patterns, got {}", 1usize << p1, patterns.len()),
            });
        }
        let patterns = patterns
            .into_iter()
            .map(|p| {
                let p = IndexPattern::new(p, n)?;
                if p.len() != k {
                    return Err(Error::InvalidPattern {
                        indices: p.indices,
                        n,
                    });
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        if !patterns.iter().all_unique() {
            return Err(Error::InvalidIndexParams {
                n,
                k,
                reason: "duplicate pattern".into(),
            });
        }
        let masks = patterns.iter().map(IndexPattern::mask).collect();
        Ok(Self {
            n,
            k,
            p1,
            patterns,
            masks,
        })
    }

    /// The `n = 4, k = 2` table used in the simulations:
    /// `00 -> {1,2}`, `01 -> {2,4}`, `10 -> {1,3}`, `11 -> {3,4}`.
    pub fn n4_k2() -> Self {
        Self::from_patterns(4, 2, vec![vec![1, 2], vec![2, 4], vec![1, 3], vec![3, 4]])
            .expect("valid table")
    }

    /// First `2^p1` k-subsets of `1..=n` in lexicographic order; word `w`
    /// maps to the `w`-th subset.
    pub fn combinadic(n: usize, k: usize) -> Result<Self> {
        Self::check_params(n, k)?;
        let p1 = index_bits(n, k).expect("checked above");
        let patterns = (1..=n).combinations(k).take(1 << p1).collect();
        Self::from_patterns(n, k, patterns)
    }

    fn check_params(n: usize, k: usize) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidIndexParams {
                n,
                k,
                reason: reason.into(),
            })
        };
        if n > 64 {
            return fail("n must not exceed 64");
        }
        if k == 0 || k >= n {
            return fail("k must lie in [1, n-1]");
        }
        match index_bits(n, k) {
            Some(p1) if p1 > MAX_INDEX_BITS => fail("too many index bits"),
            Some(_) => Ok(()),
            None => fail("binomial coefficient overflows"),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p1(&self) -> usize {
        self.p1
    }

    pub fn patterns(&self) -> &[IndexPattern] {
        &self.patterns
    }

    /// Membership masks in codebook order (see [`IndexPattern::mask`]).
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn encode_index_bits(&self, bits: &[u8]) -> Result<&IndexPattern> {
        if bits.len() != self.p1 {
            return Err(Error::BitLength {
                expected: self.p1,
                got: bits.len(),
            });
        }
        bits::validate(bits)?;
        Ok(&self.patterns[bits::to_word(bits) as usize])
    }

    /// Codebook position of `pattern`.
    pub fn word_of(&self, pattern: &IndexPattern) -> Result<usize> {
        self.patterns
            .iter()
            .position(|p| p == pattern)
            .ok_or_else(|| Error::PatternNotFound(pattern.indices.clone()))
    }

    pub fn decode_index_pattern(&self, pattern: &IndexPattern) -> Result<Vec<u8>> {
        Ok(bits::from_word(self.word_of(pattern)? as u32, self.p1))
    }

    /// Two-column `bits pattern` table, tab separated.
    pub fn to_table(&self) -> String {
        let mut out = String::from("bits\tpattern\n");
        for (w, p) in self.patterns.iter().enumerate() {
            out.push_str(&bits::to_string(&bits::from_word(w as u32, self.p1)));
            out.push('\t');
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }
}
