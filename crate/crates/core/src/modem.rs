//! Bit mapping, ML detection and demapping for one group of `n`
//! subcarriers.
//!
//! Two bit mappings are supported:
//!
//! - [`BitMapping::Conventional`]: after the `p1` index bits, the next
//!   `k log2 M_A` bits fill the mode-A positions (increasing position
//!   order) and the remaining bits fill the mode-B positions.
//! - [`BitMapping::Proposed`]: the payload is cut into `n` consecutive
//!   `log2 M` substreams and substream `α` is sent on subcarrier `α`
//!   through `M_A` or `M_B` depending on whether `α ∈ I_A`. A wrong index
//!   decision then only disturbs the swapped subcarriers, and with a pair
//!   sharing one Gray labeling those mostly decode to nearby labels.
//!
//! Detection minimises `Σ_α |y(α) − X(α) h(α)|²` over every legal group
//! `X`. [`detect_exhaustive_ml`] enumerates all candidates and is kept as
//! a reference; [`detect_low_complexity_ml`] separates the metric per
//! subcarrier and only searches over index patterns. Ties go to the first
//! pattern in codebook order and then to the lowest label per subcarrier.

use crate::bits;
use crate::constellation::{Constellation, ConstellationPair};
use crate::index_codebook::{IndexCodebook, IndexPattern};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitMapping {
    Conventional,
    Proposed,
}

/// Full description of a DM-OFDM-IM scheme for one group.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pair: ConstellationPair,
    codebook: IndexCodebook,
    mapping: BitMapping,
    p2a: usize,
    p2b: usize,
}

impl SchemeConfig {
    pub fn new(pair: ConstellationPair, codebook: IndexCodebook, mapping: BitMapping) -> Result<Self> {
        if mapping == BitMapping::Proposed && pair.a.order() != pair.b.order() {
            return Err(Error::InvalidScheme(format!(
                "positional bit mapping needs M_A = M_B (got {} and {})",
                pair.a.order(),
                pair.b.order()
            )));
        }
        let (n, k) = (codebook.n(), codebook.k());
        Ok(Self {
            p2a: k * pair.a.bits_per_symbol(),
            p2b: (n - k) * pair.b.bits_per_symbol(),
            pair,
            codebook,
            mapping,
        })
    }

    pub fn n(&self) -> usize {
        self.codebook.n()
    }

    pub fn k(&self) -> usize {
        self.codebook.k()
    }

    pub fn pair(&self) -> &ConstellationPair {
        &self.pair
    }

    pub fn codebook(&self) -> &IndexCodebook {
        &self.codebook
    }

    pub fn mapping(&self) -> BitMapping {
        self.mapping
    }

    pub fn p1(&self) -> usize {
        self.codebook.p1()
    }

    pub fn p2a(&self) -> usize {
        self.p2a
    }

    pub fn p2b(&self) -> usize {
        self.p2b
    }

    /// `p = p1 + p2A + p2B`.
    pub fn bits_per_group(&self) -> usize {
        self.p1() + self.p2a + self.p2b
    }

    pub fn energy_per_bit(&self) -> f64 {
        self.pair
            .energy_per_bit(self.n(), self.k(), self.bits_per_group())
            .expect("p > 0 for a valid scheme")
    }

    /// `2^p1 · M_A^k · M_B^(n−k)`, saturating.
    pub fn search_space_size(&self) -> u128 {
        let (n, k) = (self.n() as u32, self.k() as u32);
        let a = (self.pair.a.order() as u128).saturating_pow(k);
        let b = (self.pair.b.order() as u128).saturating_pow(n - k);
        (1u128 << self.p1()).saturating_mul(a).saturating_mul(b)
    }

    fn constellation_at(&self, pattern_mask: u64, pos: usize) -> &Constellation {
        if pattern_mask >> pos & 1 == 1 {
            &self.pair.a
        } else {
            &self.pair.b
        }
    }
}

/// The `p` source bits of one group: `b1` (index bits) then `b2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBits {
    bits: Vec<u8>,
    p1: usize,
}

impl GroupBits {
    pub fn new(bits: Vec<u8>, cfg: &SchemeConfig) -> Result<Self> {
        if bits.len() != cfg.bits_per_group() {
            return Err(Error::BitLength {
                expected: cfg.bits_per_group(),
                got: bits.len(),
            });
        }
        bits::validate(&bits)?;
        Ok(Self { bits, p1: cfg.p1() })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn b1(&self) -> &[u8] {
        &self.bits[..self.p1]
    }

    pub fn b2(&self) -> &[u8] {
        &self.bits[self.p1..]
    }
}

/// One group's frequency-domain symbols and the pattern `I_A` they follow.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSymbols {
    pub x: Vec<Complex64>,
    pub pattern: IndexPattern,
}

impl GroupSymbols {
    /// Checks the mode membership: `x(α) ∈ M_A` for `α ∈ pattern`,
    /// `x(α) ∈ M_B` otherwise.
    pub fn new(x: Vec<Complex64>, pattern: IndexPattern, cfg: &SchemeConfig) -> Result<Self> {
        if x.len() != cfg.n() {
            return Err(Error::LengthMismatch {
                expected: cfg.n(),
                got: x.len(),
            });
        }
        let mask = pattern.mask();
        for (pos, &v) in x.iter().enumerate() {
            if !cfg.constellation_at(mask, pos).contains(v) {
                return Err(Error::PointNotFound(v));
            }
        }
        Ok(Self { x, pattern })
    }
}

/// The concatenation of `G` groups.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSymbols {
    pub groups: Vec<GroupSymbols>,
}

impl FrameSymbols {
    /// Splits `stream` into groups and modulates each one.
    pub fn modulate(stream: &[u8], cfg: &SchemeConfig, groups: usize) -> Result<Self> {
        let groups = split_bits(stream, cfg, groups)?
            .iter()
            .map(|b| modulate(b, cfg))
            .collect::<Result<_>>()?;
        Ok(Self { groups })
    }

    /// `N = G·n` frequency-domain symbols.
    pub fn samples(&self) -> Vec<Complex64> {
        self.groups.iter().flat_map(|g| g.x.iter().copied()).collect()
    }
}

/// Partitions `m = groups·p` bits into consecutive groups of `p` bits.
pub fn split_bits(stream: &[u8], cfg: &SchemeConfig, groups: usize) -> Result<Vec<GroupBits>> {
    let p = cfg.bits_per_group();
    if groups == 0 || stream.len() != groups * p {
        return Err(Error::InvalidParameter(format!(
            "{} bits cannot be split into {groups} groups of {p}",
            stream.len()
        )));
    }
    stream
        .chunks(p)
        .map(|c| GroupBits::new(c.to_vec(), cfg))
        .collect()
}

pub fn modulate(b: &GroupBits, cfg: &SchemeConfig) -> Result<GroupSymbols> {
    match cfg.mapping {
        BitMapping::Conventional => modulate_conventional(b, cfg),
        BitMapping::Proposed => modulate_proposed(b, cfg),
    }
}

pub fn modulate_conventional(b: &GroupBits, cfg: &SchemeConfig) -> Result<GroupSymbols> {
    if cfg.mapping != BitMapping::Conventional {
        return Err(Error::InvalidScheme("scheme uses the positional bit mapping".into()));
    }
    let pattern = cfg.codebook.encode_index_bits(b.b1())?.clone();
    let (wa, wb) = (cfg.pair.a.bits_per_symbol(), cfg.pair.b.bits_per_symbol());
    let (b2a, b2b) = b.b2().split_at(cfg.p2a);
    let mut a_words = b2a.chunks(wa.max(1)).map(bits::to_word);
    let mut b_words = b2b.chunks(wb.max(1)).map(bits::to_word);
    let x = (1..=cfg.n())
        .map(|pos| {
            if pattern.contains(pos) {
                cfg.pair.a.point_for_label(if wa == 0 { 0 } else { a_words.next().unwrap() })
            } else {
                cfg.pair.b.point_for_label(if wb == 0 { 0 } else { b_words.next().unwrap() })
            }
        })
        .collect();
    Ok(GroupSymbols { x, pattern })
}

pub fn modulate_proposed(b: &GroupBits, cfg: &SchemeConfig) -> Result<GroupSymbols> {
    if cfg.mapping != BitMapping::Proposed {
        return Err(Error::InvalidScheme("scheme uses the conventional bit mapping".into()));
    }
    let pattern = cfg.codebook.encode_index_bits(b.b1())?.clone();
    let mask = pattern.mask();
    let w = cfg.pair.a.bits_per_symbol();
    let x = b
        .b2()
        .chunks(w)
        .enumerate()
        .map(|(pos, chunk)| cfg.constellation_at(mask, pos).point_for_label(bits::to_word(chunk)))
        .collect();
    Ok(GroupSymbols { x, pattern })
}

fn check_lengths(y: &[Complex64], h: &[Complex64], n: usize) {
    assert_eq!(y.len(), n, "received vector length");
    assert_eq!(h.len(), n, "channel vector length");
}

/// Largest search space [`detect_exhaustive_ml`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 28;

/// Reference ML detector: evaluates `Σ_α |y(α) − X(α) h(α)|²` for every
/// legal group and returns the first minimiser, together with the number
/// of candidates visited.
///
/// # Panics
///
/// Panics if `y` or `h` do not have length `n`, or if the search space
/// exceeds [`EXHAUSTIVE_LIMIT`].
pub fn detect_exhaustive_ml_counted(
    y: &[Complex64],
    h: &[Complex64],
    cfg: &SchemeConfig,
) -> (GroupSymbols, u64) {
    let n = cfg.n();
    check_lengths(y, h, n);
    assert!(
        cfg.search_space_size() <= EXHAUSTIVE_LIMIT,
        "search space too large for exhaustive detection"
    );

    let mut best_cost = f64::INFINITY;
    let mut best_pattern = 0;
    let mut best_labels = vec![0u32; n];
    let mut visited = 0u64;

    let mut labels = vec![0u32; n];
    // partial[i] = metric of positions 0..i under the current labels
    let mut partial = vec![0.0f64; n + 1];
    let mut radix = vec![0u32; n];
    // per-position residual energies for every symbol of the position's
    // constellation under the current pattern
    let mut residual: Vec<Vec<f64>> = vec![Vec::new(); n];

    for (pi, &mask) in cfg.codebook.masks().iter().enumerate() {
        for pos in 0..n {
            let cst = cfg.constellation_at(mask, pos);
            radix[pos] = cst.order() as u32;
            residual[pos] = cst.points().iter().map(|s| (y[pos] - s * h[pos]).norm_sqr()).collect();
        }
        labels.iter_mut().for_each(|l| *l = 0);
        for pos in 0..n {
            partial[pos + 1] = partial[pos] + residual[pos][0];
        }
        loop {
            visited += 1;
            if partial[n] < best_cost {
                best_cost = partial[n];
                best_pattern = pi;
                best_labels.copy_from_slice(&labels);
            }
            // odometer, last position fastest
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                labels[pos] += 1;
                if labels[pos] < radix[pos] {
                    break;
                }
                labels[pos] = 0;
            }
            if labels.iter().all(|&l| l == 0) {
                break;
            }
            for p in pos..n {
                partial[p + 1] = partial[p] + residual[p][labels[p] as usize];
            }
        }
    }

    let mask = cfg.codebook.masks()[best_pattern];
    let x = best_labels
        .iter()
        .enumerate()
        .map(|(pos, &l)| cfg.constellation_at(mask, pos).point_for_label(l))
        .collect();
    let pattern = cfg.codebook.patterns()[best_pattern].clone();
    (GroupSymbols { x, pattern }, visited)
}

/// See [`detect_exhaustive_ml_counted`].
pub fn detect_exhaustive_ml(y: &[Complex64], h: &[Complex64], cfg: &SchemeConfig) -> GroupSymbols {
    detect_exhaustive_ml_counted(y, h, cfg).0
}

/// Smallest `|y − s h|²` over `cst` and the label achieving it.
fn best_symbol(y: Complex64, h: Complex64, cst: &Constellation) -> (f64, u32) {
    let mut best = (f64::INFINITY, 0);
    for (label, s) in cst.points().iter().enumerate() {
        let d = (y - s * h).norm_sqr();
        if d < best.0 {
            best = (d, label as u32);
        }
    }
    best
}

/// Low-complexity ML detector with `O(n (M_A + M_B))` metric evaluations
/// plus one cost sum per codebook pattern.
///
/// For each subcarrier the best mode-A and mode-B symbols are found
/// independently; the cost of a pattern is the sum of the mode-A metrics
/// on its positions and the mode-B metrics elsewhere. Because the ML metric
/// separates per subcarrier once the pattern is fixed, this returns the
/// same decision as [`detect_exhaustive_ml`].
///
/// # Panics
///
/// Panics if `y` or `h` do not have length `n`.
pub fn detect_low_complexity_ml(y: &[Complex64], h: &[Complex64], cfg: &SchemeConfig) -> GroupSymbols {
    let n = cfg.n();
    check_lengths(y, h, n);
    let best_a: Vec<(f64, u32)> = (0..n).map(|i| best_symbol(y[i], h[i], &cfg.pair.a)).collect();
    let best_b: Vec<(f64, u32)> = (0..n).map(|i| best_symbol(y[i], h[i], &cfg.pair.b)).collect();

    let mut best = (f64::INFINITY, 0usize);
    for (pi, &mask) in cfg.codebook.masks().iter().enumerate() {
        let cost = (0..n).fold(0.0, |acc, pos| {
            acc + if mask >> pos & 1 == 1 {
                best_a[pos].0
            } else {
                best_b[pos].0
            }
        });
        if cost < best.0 {
            best = (cost, pi);
        }
    }

    let mask = cfg.codebook.masks()[best.1];
    let x = (0..n)
        .map(|pos| {
            if mask >> pos & 1 == 1 {
                cfg.pair.a.point_for_label(best_a[pos].1)
            } else {
                cfg.pair.b.point_for_label(best_b[pos].1)
            }
        })
        .collect();
    GroupSymbols {
        x,
        pattern: cfg.codebook.patterns()[best.1].clone(),
    }
}

/// Symbol decisions under a fixed pattern: each subcarrier is hard-decided
/// within the constellation the pattern assigns to it.
pub fn detect_with_pattern(
    y: &[Complex64],
    h: &[Complex64],
    pattern: &IndexPattern,
    cfg: &SchemeConfig,
) -> Result<GroupSymbols> {
    let n = cfg.n();
    if y.len() != n || h.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: if y.len() != n { y.len() } else { h.len() },
        });
    }
    if pattern.len() != cfg.k() || pattern.indices().iter().any(|&i| i > n) {
        return Err(Error::InvalidPattern {
            indices: pattern.indices().to_vec(),
            n,
        });
    }
    let mask = pattern.mask();
    let x = (0..n)
        .map(|pos| {
            let cst = cfg.constellation_at(mask, pos);
            cst.point_for_label(best_symbol(y[pos], h[pos], cst).1)
        })
        .collect();
    Ok(GroupSymbols {
        x,
        pattern: pattern.clone(),
    })
}

pub fn demap(x: &GroupSymbols, cfg: &SchemeConfig) -> Result<GroupBits> {
    match cfg.mapping {
        BitMapping::Conventional => demap_conventional(x, cfg),
        BitMapping::Proposed => demap_proposed(x, cfg),
    }
}

fn index_bits_of(x: &GroupSymbols, cfg: &SchemeConfig) -> Result<Vec<u8>> {
    if x.x.len() != cfg.n() {
        return Err(Error::LengthMismatch {
            expected: cfg.n(),
            got: x.x.len(),
        });
    }
    let mut out = Vec::with_capacity(cfg.bits_per_group());
    out.extend(cfg.codebook.decode_index_pattern(&x.pattern)?);
    Ok(out)
}

/// `b̂1` from the pattern, then the mode-A labels in position order, then
/// the mode-B labels in position order.
pub fn demap_conventional(x: &GroupSymbols, cfg: &SchemeConfig) -> Result<GroupBits> {
    let mut out = index_bits_of(x, cfg)?;
    let (a, b) = (&cfg.pair.a, &cfg.pair.b);
    for (pos, &v) in x.x.iter().enumerate() {
        if x.pattern.contains(pos + 1) {
            bits::push_word(a.label_of(v)?, a.bits_per_symbol(), &mut out);
        }
    }
    for (pos, &v) in x.x.iter().enumerate() {
        if !x.pattern.contains(pos + 1) {
            bits::push_word(b.label_of(v)?, b.bits_per_symbol(), &mut out);
        }
    }
    Ok(GroupBits { bits: out, p1: cfg.p1() })
}

/// `b̂1` from the pattern, then one label per subcarrier in position order,
/// read through `M_A` or `M_B` according to the detected pattern.
pub fn demap_proposed(x: &GroupSymbols, cfg: &SchemeConfig) -> Result<GroupBits> {
    if cfg.pair.a.order() != cfg.pair.b.order() {
        return Err(Error::InvalidScheme("positional demapping needs M_A = M_B".into()));
    }
    let mut out = index_bits_of(x, cfg)?;
    let mask = x.pattern.mask();
    for (pos, &v) in x.x.iter().enumerate() {
        let cst = cfg.constellation_at(mask, pos);
        bits::push_word(cst.label_of(v)?, cst.bits_per_symbol(), &mut out);
    }
    Ok(GroupBits { bits: out, p1: cfg.p1() })
}

/// A group-wise transceiver usable by the Monte Carlo engine.
pub trait Modem: Send + Sync {
    /// Subcarriers per group.
    fn subcarriers(&self) -> usize;
    fn bits_per_group(&self) -> usize;
    /// Average transmitted energy per information bit.
    fn energy_per_bit(&self) -> f64;
    fn modulate_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>>;
    /// ML detection followed by demapping.
    fn detect_bits(&self, y: &[Complex64], h: &[Complex64]) -> Result<Vec<u8>>;

    /// Bits per subcarrier, in bits/s/Hz.
    fn spectral_efficiency(&self) -> f64 {
        self.bits_per_group() as f64 / self.subcarriers() as f64
    }
}

impl Modem for SchemeConfig {
    fn subcarriers(&self) -> usize {
        self.n()
    }

    fn bits_per_group(&self) -> usize {
        SchemeConfig::bits_per_group(self)
    }

    fn energy_per_bit(&self) -> f64 {
        SchemeConfig::energy_per_bit(self)
    }

    fn modulate_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        Ok(modulate(&GroupBits::new(bits.to_vec(), self)?, self)?.x)
    }

    fn detect_bits(&self, y: &[Complex64], h: &[Complex64]) -> Result<Vec<u8>> {
        let x = detect_low_complexity_ml(y, h, self);
        Ok(demap(&x, self)?.into_bits())
    }
}

/// OFDM-IM baseline: `n = 4`, two active subcarriers carrying Gray 16QAM
/// on the `{±1, ±3}` grid, inactive subcarriers at zero, and the same
/// index table as the DM schemes. Modelled as a scheme whose mode-B
/// alphabet is the single point `0`.
pub fn ofdm_im_modem() -> SchemeConfig {
    let pair = ConstellationPair::new(Constellation::qam16(), Constellation::null())
        .expect("0 is not a 16QAM point");
    SchemeConfig::new(pair, IndexCodebook::n4_k2(), BitMapping::Conventional)
        .expect("valid OFDM-IM scheme")
}

/// Plain OFDM baseline: every subcarrier carries one symbol of the same
/// constellation, detected subcarrier by subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmModem {
    n: usize,
    constellation: Constellation,
}

impl OfdmModem {
    pub fn new(n: usize, constellation: Constellation) -> Self {
        Self { n, constellation }
    }

    /// Four subcarriers of Gray 16QAM.
    pub fn qam16() -> Self {
        Self::new(4, Constellation::qam16())
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Per-subcarrier decision minimising `|y − s h|²`.
    pub fn detect(&self, y: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
        check_lengths(y, h, self.n);
        y.iter()
            .zip(h)
            .map(|(&yi, &hi)| {
                self.constellation
                    .point_for_label(best_symbol(yi, hi, &self.constellation).1)
            })
            .collect()
    }
}

impl Modem for OfdmModem {
    fn subcarriers(&self) -> usize {
        self.n
    }

    fn bits_per_group(&self) -> usize {
        self.n * self.constellation.bits_per_symbol()
    }

    fn energy_per_bit(&self) -> f64 {
        self.n as f64 * self.constellation.average_energy() / self.bits_per_group() as f64
    }

    fn modulate_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        if bits.len() != self.bits_per_group() {
            return Err(Error::BitLength {
                expected: self.bits_per_group(),
                got: bits.len(),
            });
        }
        bits.chunks(self.constellation.bits_per_symbol())
            .map(|c| self.constellation.map_bits(c))
            .collect()
    }

    fn detect_bits(&self, y: &[Complex64], h: &[Complex64]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(self.bits_per_group());
        for s in self.detect(y, h) {
            bits::push_word(
                self.constellation.label_of(s)?,
                self.constellation.bits_per_symbol(),
                &mut out,
            );
        }
        Ok(out)
    }
}
