//! Monte Carlo BER engine and the reproduction surface around it.
//!
//! A [`SimulationPlan`] names a registered [`SchemeId`], an Eb/N0 grid and
//! stopping rules. Each grid point is simulated group by group: random
//! bits are modulated, passed through an i.i.d. Rayleigh channel with AWGN,
//! detected with the low-complexity ML detector and demapped; the Hamming
//! distance over all `p` bits of the group is accumulated.
//!
//! Groups are processed in fixed-size blocks. Block `b` of grid point `i`
//! draws from the streams `(seed, i, b, ·)`, and blocks are accumulated in
//! block order, so the early-stop decision and every count depend only on
//! the plan and never on the worker count.

mod config;
mod records;
pub mod verify;

pub use config::{config_text, format_grid, load_config, parse_config, parse_grid, write_config};
pub use records::{parse_csv, read_csv, to_csv, write_csv, CSV_HEADER};

use crate::channel::{n0_from_ebn0, sample_awgn, sample_cfr, stream_rng, Stream};
use crate::constellation::ConstellationPair;
use crate::index_codebook::IndexCodebook;
use crate::modem::{ofdm_im_modem, BitMapping, Modem, OfdmModem, SchemeConfig};
use crate::{bits, Complex64, Error, Result};
use rand::Rng;
use rayon::prelude::*;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

/// Groups simulated per random-stream block.
pub const BLOCK_GROUPS: u64 = 2_000;

/// Default early-stop threshold in bit errors.
pub const DEFAULT_TARGET_ERRORS: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    DmQpskConvConstConvMap,
    DmQpskPropConstConvMap,
    DmQpskPropConstPropMap,
    Dm16QamConvConstConvMap,
    Dm16QamPropConstConvMap,
    Dm16QamPropConstPropMap,
    OfdmIm16Qam,
    Ofdm16Qam,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::DmQpskConvConstConvMap,
        SchemeId::DmQpskPropConstConvMap,
        SchemeId::DmQpskPropConstPropMap,
        SchemeId::Dm16QamConvConstConvMap,
        SchemeId::Dm16QamPropConstConvMap,
        SchemeId::Dm16QamPropConstPropMap,
        SchemeId::OfdmIm16Qam,
        SchemeId::Ofdm16Qam,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::DmQpskConvConstConvMap => "dm-qpsk-conv-const-conv-map",
            SchemeId::DmQpskPropConstConvMap => "dm-qpsk-prop-const-conv-map",
            SchemeId::DmQpskPropConstPropMap => "dm-qpsk-prop-const-prop-map",
            SchemeId::Dm16QamConvConstConvMap => "dm-16qam-conv-const-conv-map",
            SchemeId::Dm16QamPropConstConvMap => "dm-16qam-prop-const-conv-map",
            SchemeId::Dm16QamPropConstPropMap => "dm-16qam-prop-const-prop-map",
            SchemeId::OfdmIm16Qam => "ofdm-im-16qam",
            SchemeId::Ofdm16Qam => "ofdm-16qam",
        }
    }

    /// The DM-OFDM-IM configuration, or `None` for the plain OFDM baseline.
    pub fn scheme_config(self) -> Option<SchemeConfig> {
        use SchemeId::*;
        let dm = |order, proposed_pair: bool, mapping| {
            let pair = if proposed_pair {
                ConstellationPair::proposed(order)
            } else {
                ConstellationPair::conventional(order)
            }
            .expect("shipped order");
            SchemeConfig::new(pair, IndexCodebook::n4_k2(), mapping).expect("valid scheme")
        };
        Some(match self {
            DmQpskConvConstConvMap => dm(4, false, BitMapping::Conventional),
            DmQpskPropConstConvMap => dm(4, true, BitMapping::Conventional),
            DmQpskPropConstPropMap => dm(4, true, BitMapping::Proposed),
            Dm16QamConvConstConvMap => dm(16, false, BitMapping::Conventional),
            Dm16QamPropConstConvMap => dm(16, true, BitMapping::Conventional),
            Dm16QamPropConstPropMap => dm(16, true, BitMapping::Proposed),
            OfdmIm16Qam => ofdm_im_modem(),
            Ofdm16Qam => return None,
        })
    }

    pub fn modem(self) -> Box<dyn Modem> {
        match self.scheme_config() {
            Some(cfg) => Box::new(cfg),
            None => Box::new(OfdmModem::qam16()),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// `p / n` in bits/s/Hz.
pub fn spectral_efficiency(scheme: SchemeId) -> f64 {
    scheme.modem().spectral_efficiency()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub scheme: SchemeId,
    /// Eb/N0 grid in dB, strictly ascending.
    pub ebn0_db: Vec<f64>,
    pub max_groups: u64,
    /// Stop a point once this many bit errors are seen; `0` disables.
    pub target_errors: u64,
    pub seed: u64,
    pub workers: usize,
    /// Skip the AWGN entirely.
    pub noiseless: bool,
    /// Record wall-clock time; when off `elapsed_s` is written as 0 so the
    /// CSV is a pure function of the plan.
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl Default for SimulationPlan {
    fn default() -> Self {
        Self {
            scheme: SchemeId::DmQpskPropConstPropMap,
            ebn0_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            max_groups: 100_000,
            target_errors: DEFAULT_TARGET_ERRORS,
            seed: 1,
            workers: 1,
            noiseless: false,
            timing: true,
            out: None,
        }
    }
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::InvalidParameter("Eb/N0 grid is empty".into()));
        }
        if self.ebn0_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Eb/N0 grid has non-finite values".into()));
        }
        if self.ebn0_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("Eb/N0 grid must be strictly ascending".into()));
        }
        if self.max_groups == 0 {
            return Err(Error::InvalidParameter("max groups must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

/// One measured (scheme, Eb/N0) point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: SchemeId,
    pub ebn0_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub groups: u64,
    pub seed: u64,
    pub elapsed_s: f64,
}

impl BerRecord {
    /// No errors were observed, so `ber = 0` is only an upper-bound hint.
    pub fn censored(&self) -> bool {
        self.errors == 0
    }

    /// Binomial standard error of the BER estimate.
    pub fn std_error(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        (self.ber * (1.0 - self.ber) / self.bits as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BlockCount {
    groups: u64,
    bits: u64,
    errors: u64,
}

fn run_block(
    modem: &dyn Modem,
    plan: &SimulationPlan,
    point: usize,
    block: u64,
    n0: f64,
) -> Result<BlockCount> {
    let start = block * BLOCK_GROUPS;
    let groups = BLOCK_GROUPS.min(plan.max_groups - start);
    let mut bit_rng = stream_rng(plan.seed, point as u64, block, Stream::Bits);
    let mut channel_rng = stream_rng(plan.seed, point as u64, block, Stream::Channel);
    let mut noise_rng = stream_rng(plan.seed, point as u64, block, Stream::Noise);
    let noise = crate::channel::NoiseSpec::new(n0)?;
    let (n, p) = (modem.subcarriers(), modem.bits_per_group());

    let mut count = BlockCount::default();
    let mut source = vec![0u8; p];
    for _ in 0..groups {
        source.iter_mut().for_each(|b| *b = bit_rng.random_range(0..2));
        let x = modem.modulate_bits(&source)?;
        let h = sample_cfr(n, &mut channel_rng);
        let w = if plan.noiseless {
            vec![Complex64::new(0.0, 0.0); n]
        } else {
            sample_awgn(n, &noise, &mut noise_rng)
        };
        let y = crate::channel::apply_channel(&x, &h, &w)?;
        let decided = modem.detect_bits(&y, &h.h)?;
        count.groups += 1;
        count.bits += p as u64;
        count.errors += bits::hamming(&source, &decided) as u64;
    }
    Ok(count)
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn simulate_point(plan: &SimulationPlan, point: usize) -> Result<BerRecord> {
    let started = Instant::now();
    let ebn0_db = plan.ebn0_db[point];
    let modem = plan.scheme.modem();
    let n0 = n0_from_ebn0(modem.energy_per_bit(), ebn0_db)?.n0();
    let blocks = plan.max_groups.div_ceil(BLOCK_GROUPS);
    // blocks past the stopping point are computed and discarded
    let wave = (2 * plan.workers as u64).max(1);

    let mut total = BlockCount::default();
    let mut next = 0;
    'outer: while next < blocks {
        let end = (next + wave).min(blocks);
        let counts: Vec<Result<BlockCount>> = (next..end)
            .into_par_iter()
            .map(|b| run_block(modem.as_ref(), plan, point, b, n0))
            .collect();
        for c in counts {
            let c = c?;
            total.groups += c.groups;
            total.bits += c.bits;
            total.errors += c.errors;
            if plan.target_errors > 0 && total.errors >= plan.target_errors {
                break 'outer;
            }
        }
        next = end;
    }

    Ok(BerRecord {
        scheme: plan.scheme,
        ebn0_db,
        bits: total.bits,
        errors: total.errors,
        ber: total.errors as f64 / total.bits as f64,
        groups: total.groups,
        seed: plan.seed,
        elapsed_s: if plan.timing {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        },
    })
}

/// Simulates grid point `point` of `plan` (its Eb/N0 is
/// `plan.ebn0_db[point]`; the index also selects the random streams).
pub fn run_point(plan: &SimulationPlan, point: usize) -> Result<BerRecord> {
    plan.validate()?;
    if point >= plan.ebn0_db.len() {
        return Err(Error::InvalidParameter(format!(
            "grid point {point} out of range ({} points)",
            plan.ebn0_db.len()
        )));
    }
    with_pool(plan.workers, || simulate_point(plan, point))?
}

/// One record per grid point, in grid order.
pub fn run_sweep(plan: &SimulationPlan) -> Result<Vec<BerRecord>> {
    plan.validate()?;
    with_pool(plan.workers, || {
        (0..plan.ebn0_db.len())
            .map(|i| simulate_point(plan, i))
            .collect::<Result<Vec<_>>>()
    })?
}
