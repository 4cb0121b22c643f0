//! Dual-mode OFDM with index modulation (DM-OFDM-IM).
//!
//! The crate covers the whole frequency-domain link for one subblock
//! ("group") of `n` subcarriers:
//!
//! - [`constellation`]: labeled signal sets and the conventional / offset
//!   constellation pairs, plus distance and energy metrics.
//! - [`index_codebook`]: bijection between index bits and the set of
//!   subcarriers carrying mode-A symbols.
//! - [`modem`]: conventional and positional bit mapping, exhaustive and
//!   low-complexity ML detection, demapping, and the OFDM-IM / OFDM
//!   baselines.
//! - [`channel`]: i.i.d. Rayleigh CFR, complex AWGN, Eb/N0 conversion.
//! - [`analysis`]: conditional pairwise error probability and worst-case
//!   distance reports for constellation pairs.
//! - [`harness`]: scheme registry, Monte Carlo BER engine, CSV and config
//!   files, and the self-verification suite behind `sim verify`.
//!
//! Bits are represented as `u8` values that are either `0` or `1`. When a
//! bit string is read as an unsigned integer the first bit is the most
//! significant one.

pub mod analysis;
pub mod bits;
pub mod channel;
pub mod constellation;
pub mod error;
pub mod harness;
pub mod index_codebook;
pub mod modem;

pub use error::{Error, Result};
pub use num_complex::Complex64;
