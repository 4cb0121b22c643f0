//! Labeled constellations and DM-OFDM-IM constellation pairs.
//!
//! A [`Constellation`] is a list of complex points with a bit label per
//! point. Points are stored in label order, so a point's index equals its
//! integer label, and nearest-neighbour ties go to the lowest index (that
//! is, the lowest label).
//!
//! Base labelings:
//!
//! - QPSK is listed as `[1+j, 1-j, -1+j, -1-j]` with the Gray labels
//!   `00 -> 1+j`, `01 -> -1+j`, `11 -> -1-j`, `10 -> 1-j`.
//! - 16QAM uses two Gray-coded 4-PAM axes (`00 -> -3`, `01 -> -1`,
//!   `11 -> +1`, `10 -> +3`); the first two label bits select the real
//!   level and the last two the imaginary level.
//!
//! The conventional mode-B sets carry the label sequence of the mode-A
//! listing, position by position. The offset pairs copy the labels of
//! their base constellation.

use crate::{bits, Complex64, Error, Result};
use std::fmt::Write as _;

/// Coordinate tolerance used for membership and disjointness checks.
pub const COORD_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn same_point(a: Complex64, b: Complex64) -> bool {
    (a.re - b.re).abs() <= COORD_TOL && (a.im - b.im).abs() <= COORD_TOL
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    labels: Vec<u32>,
    bits_per_symbol: usize,
}

impl Constellation {
    /// Builds a constellation from points and their integer labels
    /// (`labels[i]` labels `points[i]`, read MSB first). The result is
    /// reordered by label.
    pub fn new(points: Vec<Complex64>, labels: Vec<u32>) -> Result<Self> {
        let m = points.len();
        if m == 0 || !m.is_power_of_two() {
            return Err(Error::InvalidConstellation(format!(
                "number of points {m} is not a power of two"
            )));
        }
        if labels.len() != m {
            return Err(Error::InvalidConstellation(format!(
                "{} labels for {m} points",
                labels.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(Error::InvalidConstellation(format!("non-finite point {p}")));
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| same_point(*a, *b)) {
                return Err(Error::InvalidConstellation(format!("duplicate point {a}")));
            }
        }
        let mut by_label: Vec<Option<Complex64>> = vec![None; m];
        for (&p, &l) in points.iter().zip(&labels) {
            let slot = by_label.get_mut(l as usize).ok_or_else(|| {
                Error::InvalidConstellation(format!("label {l} out of range for {m} points"))
            })?;
            if slot.replace(p).is_some() {
                return Err(Error::InvalidConstellation(format!("label {l} used twice")));
            }
        }
        Ok(Self {
            bits_per_symbol: m.trailing_zeros() as usize,
            points: by_label.into_iter().map(|p| p.expect("labels are a bijection")).collect(),
            labels: (0..m as u32).collect(),
        })
    }

    /// QPSK `{±1±j}` with the module's Gray labeling.
    pub fn qpsk() -> Self {
        let points = vec![c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 1.0), c(-1.0, -1.0)];
        let labels = points.iter().map(|p| qpsk_label(*p)).collect();
        Self::new(points, labels).expect("valid QPSK")
    }

    /// Square 16QAM on the `{±1, ±3}` grid with Gray-coded axes.
    pub fn qam16() -> Self {
        let points = qam16_listing();
        let labels = points.iter().map(|p| qam16_label(*p)).collect();
        Self::new(points, labels).expect("valid 16QAM")
    }

    /// The single point `0` with an empty label. Used for the inactive
    /// subcarriers of OFDM-IM.
    pub fn null() -> Self {
        Self::new(vec![c(0.0, 0.0)], vec![0]).expect("valid null constellation")
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// The point carrying integer label `label`.
    ///
    /// # Panics
    ///
    /// Panics if `label >= self.order()`.
    pub fn point_for_label(&self, label: u32) -> Complex64 {
        self.points[label as usize]
    }

    pub fn map_bits(&self, bits: &[u8]) -> Result<Complex64> {
        if bits.len() != self.bits_per_symbol {
            return Err(Error::BitLength {
                expected: self.bits_per_symbol,
                got: bits.len(),
            });
        }
        crate::bits::validate(bits)?;
        Ok(self.point_for_label(bits::to_word(bits)))
    }

    /// Index of `point` in this constellation, within [`COORD_TOL`].
    pub fn index_of(&self, point: Complex64) -> Option<usize> {
        self.points.iter().position(|p| same_point(*p, point))
    }

    pub fn contains(&self, point: Complex64) -> bool {
        self.index_of(point).is_some()
    }

    /// Integer label of a member point. No nearest-neighbour fallback.
    pub fn label_of(&self, point: Complex64) -> Result<u32> {
        self.index_of(point)
            .map(|i| self.labels[i])
            .ok_or(Error::PointNotFound(point))
    }

    /// Bit label of a member point. No nearest-neighbour fallback.
    pub fn demap_exact(&self, point: Complex64) -> Result<Vec<u8>> {
        let label = self.label_of(point)?;
        Ok(bits::from_word(label, self.bits_per_symbol))
    }

    /// Index of the point nearest to `z`; ties go to the lowest index.
    pub fn nearest_index(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Minimum distance between two distinct points; infinite when the
    /// constellation has a single point.
    pub fn min_intra_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }

    /// Every point translated by `offset`, labels unchanged.
    pub fn shifted(&self, offset: Complex64) -> Self {
        Self {
            points: self.points.iter().map(|p| p + offset).collect(),
            ..self.clone()
        }
    }

    /// Scales every point by `factor`, labels unchanged.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p * factor).collect(),
            ..self.clone()
        }
    }

    /// Plain-text `label re im` table, tab separated, with a header line.
    pub fn to_table(&self) -> String {
        let mut out = String::from("label\tre\tim\n");
        for (p, &l) in self.points.iter().zip(&self.labels) {
            let label = bits::to_string(&bits::from_word(l, self.bits_per_symbol));
            let _ = writeln!(out, "{label}\t{}\t{}", sig12(p.re), sig12(p.im));
        }
        out
    }
}

/// Maps `bits` through `from`'s mapper, hard-decides to the nearest point
/// of `to` (ties to lowest index) and returns that point's label.
pub fn cross_demap(from: &Constellation, to: &Constellation, bits: &[u8]) -> Result<Vec<u8>> {
    if from.bits_per_symbol != to.bits_per_symbol {
        return Err(Error::BitLength {
            expected: to.bits_per_symbol,
            got: from.bits_per_symbol,
        });
    }
    let z = from.map_bits(bits)?;
    let i = to.nearest_index(z);
    Ok(bits::from_word(to.labels[i], to.bits_per_symbol))
}

/// Renders `x` with 12 significant digits in plain decimal notation.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn qpsk_label(p: Complex64) -> u32 {
    // 00 -> 1+j, 01 -> -1+j, 11 -> -1-j, 10 -> 1-j
    let imag_bit = u32::from(p.im < 0.0);
    let real_bit = u32::from(p.re < 0.0);
    (imag_bit << 1) | real_bit
}

fn pam4_gray(level: f64) -> u32 {
    match level as i32 {
        -3 => 0b00,
        -1 => 0b01,
        1 => 0b11,
        3 => 0b10,
        _ => unreachable!("not a 4-PAM level: {level}"),
    }
}

fn qam16_label(p: Complex64) -> u32 {
    (pam4_gray(p.re) << 2) | pam4_gray(p.im)
}

/// `{±1±j, ±1±3j, ±3±j, ±3±3j}` expanded in listing order.
fn qam16_listing() -> Vec<Complex64> {
    let mut out = Vec::with_capacity(16);
    for (a, b) in [(1.0, 1.0), (1.0, 3.0), (3.0, 1.0), (3.0, 3.0)] {
        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            out.push(c(sa * a, sb * b));
        }
    }
    out
}

/// The two-constellation alphabet of a DM-OFDM-IM scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationPair {
    pub a: Constellation,
    pub b: Constellation,
}

impl ConstellationPair {
    /// Pairs two constellations, rejecting any shared point.
    pub fn new(a: Constellation, b: Constellation) -> Result<Self> {
        if let Some(p) = a.points.iter().find(|p| b.contains(**p)) {
            return Err(Error::OverlappingPair(*p));
        }
        Ok(Self { a, b })
    }

    /// The pairs of Mao et al.'s original DM-OFDM-IM: QPSK against a
    /// rotated cross of radius `1+√3`, or 16QAM against a 16-point ring on
    /// the `±5` border.
    pub fn conventional(order: usize) -> Result<Self> {
        match order {
            4 => {
                let a = Constellation::qpsk();
                let r = 1.0 + 3f64.sqrt();
                let b_points = vec![c(-r, 0.0), c(0.0, -r), c(r, 0.0), c(0.0, r)];
                let b = Constellation::new(b_points, a.labels.clone())?;
                Self::new(a, b)
            }
            16 => {
                let a = Constellation::qam16();
                let mut b_points = Vec::with_capacity(16);
                for x in [-3.0, -1.0, 1.0, 3.0] {
                    b_points.push(c(x, 5.0));
                    b_points.push(c(x, -5.0));
                }
                for y in [-3.0, -1.0, 1.0, 3.0] {
                    b_points.push(c(5.0, y));
                    b_points.push(c(-5.0, y));
                }
                let b = Constellation::new(b_points, a.labels.clone())?;
                Self::new(a, b)
            }
            other => Err(Error::UnsupportedOrder(other)),
        }
    }

    /// The base QPSK / 16QAM shifted by `+0.5+0.5j` (mode A) and
    /// `-0.5-0.5j` (mode B), sharing one labeling.
    pub fn proposed(order: usize) -> Result<Self> {
        let base = match order {
            4 => Constellation::qpsk(),
            16 => Constellation::qam16(),
            other => return Err(Error::UnsupportedOrder(other)),
        };
        Self::offset(&base, c(0.5, 0.5))
    }

    /// `a = base + offset`, `b = base - offset`, labels copied from `base`.
    pub fn offset(base: &Constellation, offset: Complex64) -> Result<Self> {
        Self::new(base.shifted(offset), base.shifted(-offset))
    }

    /// Minimum distance between a mode-A and a mode-B point.
    pub fn min_inter_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for sa in &self.a.points {
            for sb in &self.b.points {
                best = best.min((sa - sb).norm());
            }
        }
        best
    }

    /// Average energy per bit of a group with `k` mode-A and `n - k`
    /// mode-B subcarriers carrying `p` bits in total.
    pub fn energy_per_bit(&self, n: usize, k: usize, p: usize) -> Result<f64> {
        if p == 0 {
            return Err(Error::InvalidParameter("bits per group must be positive".into()));
        }
        if k > n {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
        }
        let total = k as f64 * self.a.average_energy() + (n - k) as f64 * self.b.average_energy();
        Ok(total / p as f64)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            a: self.a.scaled(factor),
            b: self.b.scaled(factor),
        }
    }
}
