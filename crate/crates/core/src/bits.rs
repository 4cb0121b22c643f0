//! Bit-string helpers. Words are read MSB first.

use crate::{Error, Result};

/// Checks that every entry is a 0 or a 1.
pub fn validate(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidBit(b)),
        None => Ok(()),
    }
}

/// Reads `bits` as an unsigned integer, first bit most significant.
pub fn to_word(bits: &[u8]) -> u32 {
    debug_assert!(bits.len() <= 32);
    bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1))
}

/// Writes the low `width` bits of `word` into `out`, MSB first.
pub fn push_word(word: u32, width: usize, out: &mut Vec<u8>) {
    for i in (0..width).rev() {
        out.push(((word >> i) & 1) as u8);
    }
}

pub fn from_word(word: u32, width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(width);
    push_word(word, width, &mut out);
    out
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Parses a string such as `"1011"`; whitespace and `_` are ignored.
pub fn parse(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidParameter(format!("not a bit character: {c:?}"))),
        })
        .collect()
}

pub fn to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
