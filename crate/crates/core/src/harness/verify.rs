//! Self-checks run by `sim verify`: reference constants, detector
//! equivalence, noiseless round trips, the wrong-pattern toy example and
//! sampler calibration.

use super::SchemeId;
use crate::analysis::{cpep_paper, design_criterion_check, q_function, shipped_pairs, worst_case_report};
use crate::channel::{n0_from_ebn0, sample_awgn, sample_cfr, stream_rng, NoiseSpec, Stream};
use crate::constellation::{cross_demap, ConstellationPair};
use crate::index_codebook::{IndexCodebook, IndexPattern};
use crate::modem::{
    demap, detect_exhaustive_ml, detect_low_complexity_ml, detect_with_pattern, modulate, BitMapping,
    GroupBits, SchemeConfig,
};
use crate::{bits, Complex64, Result};
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Eb within 1e-3 and δ factors within 1e-9 of the reference values.
pub fn check_reference_constants() -> Result<Check> {
    let expected = [
        ("conv-qpsk", 2.0, 2.0, 1.8928),
        ("prop-qpsk", 2.0, 2f64.sqrt(), 1.0),
        ("conv-16qam", 2.0, 2.0, 4.444),
        ("prop-16qam", 2.0, 2f64.sqrt(), 2.3333),
    ];
    let mut failures = Vec::new();
    for np in shipped_pairs() {
        let (_, d1, d2, eb) = expected.iter().find(|e| e.0 == np.name).copied().expect("listed");
        let r = worst_case_report(&np.pair, np.n, np.k, np.p)?;
        if (r.delta1_factor - d1).abs() > 1e-9 || (r.delta2_factor - d2).abs() > 1e-9 || (r.eb - eb).abs() > 1e-3 {
            failures.push(format!("{}: {r:?}", np.name));
        }
        if design_criterion_check(&np.pair) != (np.name != "conv-qpsk") {
            failures.push(format!("{}: design criterion", np.name));
        }
    }
    Ok(Check::new(
        "reference constants",
        failures.is_empty(),
        if failures.is_empty() {
            "Eb and distance factors of all four pairs match".into()
        } else {
            failures.join("; ")
        },
    ))
}

fn dm_configs() -> Vec<(SchemeId, SchemeConfig)> {
    SchemeId::ALL
        .into_iter()
        .filter_map(|id| id.scheme_config().map(|c| (id, c)))
        .collect()
}

/// Compares both detectors on `trials` noisy groups per scheme, spread
/// evenly over 0, 10, 20 and 30 dB.
pub fn check_detector_equivalence(trials: usize, seed: u64) -> Result<Check> {
    const SNRS: [f64; 4] = [0.0, 10.0, 20.0, 30.0];
    let mut mismatches = 0;
    let mut total = 0;
    for (si, (_, cfg)) in dm_configs().iter().enumerate() {
        let eb = cfg.energy_per_bit();
        for (pi, &snr) in SNRS.iter().enumerate() {
            let noise = n0_from_ebn0(eb, snr)?;
            let block = (si * SNRS.len() + pi) as u64;
            let mut bit_rng = stream_rng(seed, 0, block, Stream::Bits);
            let mut ch_rng = stream_rng(seed, 0, block, Stream::Channel);
            let mut noise_rng = stream_rng(seed, 0, block, Stream::Noise);
            for _ in 0..trials.div_ceil(SNRS.len()) {
                let b: Vec<u8> = (0..cfg.bits_per_group()).map(|_| bit_rng.random_range(0..2)).collect();
                let x = modulate(&GroupBits::new(b, cfg)?, cfg)?;
                let h = sample_cfr(cfg.n(), &mut ch_rng).h;
                let w = sample_awgn(cfg.n(), &noise, &mut noise_rng);
                let y: Vec<Complex64> = (0..cfg.n()).map(|i| x.x[i] * h[i] + w[i]).collect();
                if detect_low_complexity_ml(&y, &h, cfg) != detect_exhaustive_ml(&y, &h, cfg) {
                    mismatches += 1;
                }
                total += 1;
            }
        }
    }
    Ok(Check::new(
        "detector equivalence",
        mismatches == 0,
        format!("{mismatches} mismatches in {total} trials"),
    ))
}

/// `groups` random groups per scheme through a random channel, no noise.
pub fn check_noiseless_round_trips(groups: usize, seed: u64) -> Result<Check> {
    let mut failures = Vec::new();
    for (si, id) in SchemeId::ALL.into_iter().enumerate() {
        let modem = id.modem();
        let mut rng = stream_rng(seed, 1, si as u64, Stream::Bits);
        let mut ch_rng = stream_rng(seed, 1, si as u64, Stream::Channel);
        let mut errors = 0;
        for _ in 0..groups {
            let b: Vec<u8> = (0..modem.bits_per_group()).map(|_| rng.random_range(0..2)).collect();
            let x = modem.modulate_bits(&b)?;
            let h = sample_cfr(modem.subcarriers(), &mut ch_rng).h;
            let y: Vec<Complex64> = x.iter().zip(&h).map(|(a, b)| a * b).collect();
            errors += bits::hamming(&b, &modem.detect_bits(&y, &h)?);
        }
        if errors > 0 {
            failures.push(format!("{id}: {errors} bit errors"));
        }
    }
    Ok(Check::new(
        "noiseless round trips",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{groups} groups per scheme, zero errors")
        } else {
            failures.join("; ")
        },
    ))
}

/// Outcome of the wrong-pattern example for one bit mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyOutcome {
    pub x: Vec<Complex64>,
    pub b2_hat: Vec<u8>,
    pub bit_errors: usize,
}

/// `I_A = {1,3}`, `b1 = 10`, `b2 = 1011 0000 1111 0111` on the proposed
/// 16QAM pair, decided noiselessly under the wrong pattern `{1,2}`.
/// Returns the conventional and positional outcomes in that order.
pub fn toy_example() -> Result<(ToyOutcome, ToyOutcome)> {
    let source = bits::parse("10 1011 0000 1111 0111")?;
    let forced = IndexPattern::new(vec![1, 2], 4)?;
    let unit = vec![Complex64::new(1.0, 0.0); 4];
    let run = |mapping| -> Result<ToyOutcome> {
        let cfg = SchemeConfig::new(ConstellationPair::proposed(16)?, IndexCodebook::n4_k2(), mapping)?;
        let x = modulate(&GroupBits::new(source.clone(), &cfg)?, &cfg)?;
        let decided = detect_with_pattern(&x.x, &unit, &forced, &cfg)?;
        let b_hat = demap(&decided, &cfg)?;
        Ok(ToyOutcome {
            x: x.x,
            b2_hat: b_hat.b2().to_vec(),
            bit_errors: bits::hamming(b_hat.bits(), &source),
        })
    };
    Ok((run(BitMapping::Conventional)?, run(BitMapping::Proposed)?))
}

pub fn check_toy_example() -> Result<Check> {
    let (conv, prop) = toy_example()?;
    let pair = ConstellationPair::proposed(16)?;
    let (a, b) = (&pair.a, &pair.b);
    let m = |c: &crate::constellation::Constellation, s: &str| c.map_bits(&bits::parse(s).unwrap());
    let x_conv = vec![m(a, "1011")?, m(b, "1111")?, m(a, "0000")?, m(b, "0111")?];
    let x_prop = vec![m(a, "1011")?, m(b, "0000")?, m(a, "1111")?, m(b, "0111")?];
    let cross = |from, to, s: &str| cross_demap(from, to, &bits::parse(s).unwrap());
    let expected_conv = [bits::parse("1011")?, cross(b, a, "1111")?, cross(a, b, "0000")?, bits::parse("0111")?].concat();
    let expected_prop = [bits::parse("1011")?, cross(b, a, "0000")?, cross(a, b, "1111")?, bits::parse("0111")?].concat();
    let passed = conv.x == x_conv
        && prop.x == x_prop
        && conv.b2_hat == expected_conv
        && prop.b2_hat == expected_prop
        && prop.bit_errors <= conv.bit_errors;
    Ok(Check::new(
        "wrong-pattern toy example",
        passed,
        format!(
            "bit errors: conventional mapping {}, positional mapping {}",
            conv.bit_errors, prop.bit_errors
        ),
    ))
}

/// Sample second moments at 10^6 draws, `Q(0)`, CPEP monotonicity.
pub fn check_calibration(seed: u64) -> Result<Check> {
    const N: usize = 1_000_000;
    let h = sample_cfr(N, &mut stream_rng(seed, 2, 0, Stream::Channel)).h;
    let cfr_power = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / N as f64;
    let n0 = 0.25;
    let w = sample_awgn(N, &NoiseSpec::new(n0)?, &mut stream_rng(seed, 2, 0, Stream::Noise));
    let noise_power = w.iter().map(|x| x.norm_sqr()).sum::<f64>() / N as f64 / n0;
    let q0 = (q_function(0.0) - 0.5).abs() <= 1e-12;
    let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
    let mut monotone = true;
    for pair in grid.windows(2) {
        monotone &= cpep_paper(pair[1], 1.0, 1.0)? < cpep_paper(pair[0], 1.0, 1.0)?;
        monotone &= cpep_paper(1.0, pair[1], 1.0)? < cpep_paper(1.0, pair[0], 1.0)?;
        monotone &= cpep_paper(1.0, 1.0, 0.1 + pair[1])? > cpep_paper(1.0, 1.0, 0.1 + pair[0])?;
    }
    let passed = (cfr_power - 1.0).abs() < 0.01 && (noise_power - 1.0).abs() < 0.01 && q0 && monotone;
    Ok(Check::new(
        "sampler calibration",
        passed,
        format!("E|H|^2 = {cfr_power:.5}, E|W|^2/N0 = {noise_power:.5}, Q(0) ok = {q0}, CPEP monotone = {monotone}"),
    ))
}

/// Everything `sim verify` runs.
pub fn run_all(equivalence_trials: usize, seed: u64) -> Result<Vec<Check>> {
    Ok(vec![
        check_reference_constants()?,
        check_detector_equivalence(equivalence_trials, seed)?,
        check_noiseless_round_trips(1_000, seed)?,
        check_toy_example()?,
        check_calibration(seed)?,
    ])
}
