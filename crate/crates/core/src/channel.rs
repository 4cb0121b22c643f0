//! Frequency-domain channel: i.i.d. Rayleigh CFR and complex AWGN.
//!
//! Every random draw comes from an explicit generator. [`stream_rng`]
//! derives independent ChaCha streams from a master seed, a grid-point
//! index, a block index and a [`Stream`] purpose, so that a simulation is
//! reproducible no matter how its blocks are scheduled.

use crate::{Complex64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::FRAC_1_SQRT_2;

/// Per-subcarrier complex gains of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Vec<Complex64>,
}

/// Total variance `N0` of each complex noise sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    n0: f64,
}

impl NoiseSpec {
    pub fn new(n0: f64) -> Result<Self> {
        if !(n0 > 0.0 && n0.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise power must be positive, got {n0}")));
        }
        Ok(Self { n0 })
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }
}

/// One `CN(0, variance)` sample.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sigma = (variance * 0.5).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * sigma, im * sigma)
}

/// `n` i.i.d. `CN(0, 1)` gains.
pub fn sample_cfr<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ChannelRealization {
    let h = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        })
        .collect();
    ChannelRealization { h }
}

/// `n` i.i.d. `CN(0, N0)` noise samples.
pub fn sample_awgn<R: Rng + ?Sized>(n: usize, spec: &NoiseSpec, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng, spec.n0)).collect()
}

/// `y(α) = x(α) h(α) + w(α)`.
pub fn apply_channel(x: &[Complex64], h: &ChannelRealization, w: &[Complex64]) -> Result<Vec<Complex64>> {
    for len in [h.h.len(), w.len()] {
        if len != x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: len,
            });
        }
    }
    Ok(x.iter().zip(&h.h).zip(w).map(|((x, h), w)| x * h + w).collect())
}

/// `N0 = Eb / 10^(Eb/N0 [dB] / 10)`.
pub fn n0_from_ebn0(eb: f64, ebn0_db: f64) -> Result<NoiseSpec> {
    if !(eb > 0.0 && eb.is_finite()) {
        return Err(Error::InvalidParameter(format!("energy per bit must be positive, got {eb}")));
    }
    NoiseSpec::new(eb / 10f64.powf(ebn0_db / 10.0))
}

/// Logical random streams used per simulation block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Bits = 0,
    Channel = 1,
    Noise = 2,
}

const POINT_BITS: u32 = 20;
const BLOCK_BITS: u32 = 42;

/// Generator for `(seed, point, block, stream)`. The ChaCha key comes from
/// the seed and the 64-bit stream id packs the other three fields.
///
/// # Panics
///
/// Panics if `point >= 2^20` or `block >= 2^42`.
pub fn stream_rng(seed: u64, point: u64, block: u64, stream: Stream) -> ChaCha8Rng {
    assert!(point < 1 << POINT_BITS, "grid point index out of range");
    assert!(block < 1 << BLOCK_BITS, "block index out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(point << (BLOCK_BITS + 2) | block << 2 | stream as u64);
    rng
}
