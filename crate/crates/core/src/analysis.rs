//! Pairwise-error metrics for constellation pairs.
//!
//! The worst symbol-error event scales with the smaller of the two
//! intra-constellation minimum distances (`δ1`), the worst index-error
//! event with the minimum distance between a mode-A and a mode-B point
//! (`δ2`). Both are reported as channel-free factors and normalised by
//! `Eb`, the quantity that sets [`cpep_paper`] at a fixed SNR, so that
//! pairs with different energies can be compared.

use crate::bits;
use crate::constellation::{cross_demap, ConstellationPair};
use crate::{Error, Result};
use std::fmt::Write as _;

/// Gaussian tail probability `Q(x) = erfc(x / √2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Conditional pairwise error probability in the form `Q(δ · SNR / Eb)`.
///
/// Note the argument is linear in both `δ` and the linear SNR, unlike the
/// textbook `Q(δ / √(2 N0))`. The BER engine never uses this; it is kept
/// for comparing pairs.
pub fn cpep_paper(delta: f64, snr_linear: f64, eb: f64) -> Result<f64> {
    if !(eb > 0.0) {
        return Err(Error::InvalidParameter(format!("energy per bit must be positive, got {eb}")));
    }
    if delta < 0.0 || snr_linear < 0.0 {
        return Err(Error::InvalidParameter("delta and SNR must be non-negative".into()));
    }
    Ok(q_function(delta * snr_linear / eb))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub delta1_factor: f64,
    pub delta2_factor: f64,
    pub eb: f64,
    pub normalized_d1: f64,
    pub normalized_d2: f64,
}

pub fn worst_case_report(pair: &ConstellationPair, n: usize, k: usize, p: usize) -> Result<PairReport> {
    let delta1_factor = pair.a.min_intra_distance().min(pair.b.min_intra_distance());
    let delta2_factor = pair.min_inter_distance();
    let eb = pair.energy_per_bit(n, k, p)?;
    Ok(PairReport {
        delta1_factor,
        delta2_factor,
        eb,
        normalized_d1: delta1_factor / eb,
        normalized_d2: delta2_factor / eb,
    })
}

/// True when both constellations have the same minimum distance (to 1e-9).
pub fn design_criterion_check(pair: &ConstellationPair) -> bool {
    (pair.a.min_intra_distance() - pair.b.min_intra_distance()).abs() <= 1e-9
}

/// Mean Hamming distance between a label and its cross-demapped label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossDemapStats {
    /// Mapped through `M_A`, decided in `M_B`.
    pub a_to_b: f64,
    /// Mapped through `M_B`, decided in `M_A`.
    pub b_to_a: f64,
}

pub fn cross_demap_statistics(pair: &ConstellationPair) -> Result<CrossDemapStats> {
    if pair.a.order() != pair.b.order() {
        return Err(Error::InvalidParameter("cross demapping needs M_A = M_B".into()));
    }
    let width = pair.a.bits_per_symbol();
    let m = pair.a.order();
    let mean = |from, to| -> Result<f64> {
        let mut total = 0;
        for label in 0..m as u32 {
            let b = bits::from_word(label, width);
            total += bits::hamming(&b, &cross_demap(from, to, &b)?);
        }
        Ok(total as f64 / m as f64)
    };
    Ok(CrossDemapStats {
        a_to_b: mean(&pair.a, &pair.b)?,
        b_to_a: mean(&pair.b, &pair.a)?,
    })
}

/// A shipped pair with the group parameters it is evaluated under.
#[derive(Debug, Clone)]
pub struct NamedPair {
    pub name: &'static str,
    pub pair: ConstellationPair,
    pub n: usize,
    pub k: usize,
    pub p: usize,
}

/// The conventional and proposed QPSK and 16QAM pairs at `n = 4, k = 2`.
pub fn shipped_pairs() -> Vec<NamedPair> {
    let make = |name, pair: Result<ConstellationPair>, p| NamedPair {
        name,
        pair: pair.expect("shipped pair"),
        n: 4,
        k: 2,
        p,
    };
    vec![
        make("conv-qpsk", ConstellationPair::conventional(4), 10),
        make("prop-qpsk", ConstellationPair::proposed(4), 10),
        make("conv-16qam", ConstellationPair::conventional(16), 18),
        make("prop-16qam", ConstellationPair::proposed(16), 18),
    ]
}

const COLUMNS: [&str; 8] = [
    "pair",
    "delta1_factor",
    "delta2_factor",
    "eb",
    "normalized_d1",
    "normalized_d2",
    "criterion",
    "cross_hamming",
];

fn report_rows() -> Result<Vec<[String; 8]>> {
    shipped_pairs()
        .into_iter()
        .map(|np| {
            let r = worst_case_report(&np.pair, np.n, np.k, np.p)?;
            let cross = cross_demap_statistics(&np.pair)?;
            Ok([
                np.name.to_string(),
                format!("{:.6}", r.delta1_factor),
                format!("{:.6}", r.delta2_factor),
                format!("{:.6}", r.eb),
                format!("{:.6}", r.normalized_d1),
                format!("{:.6}", r.normalized_d2),
                design_criterion_check(&np.pair).to_string(),
                format!("{:.6}", (cross.a_to_b + cross.b_to_a) / 2.0),
            ])
        })
        .collect()
}

/// The report for [`shipped_pairs`] as CSV.
pub fn report_csv() -> Result<String> {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for row in report_rows()? {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// The report for [`shipped_pairs`] as an aligned text table.
pub fn report_text() -> Result<String> {
    let rows = report_rows()?;
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| rows.iter().map(|r| r[c].len()).chain([COLUMNS[c].len()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(COLUMNS.to_vec(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str) -> PairReport {
        let np = shipped_pairs().into_iter().find(|p| p.name == name).unwrap();
        worst_case_report(&np.pair, np.n, np.k, np.p).unwrap()
    }

    #[test]
    fn q_function_values() {
        assert_eq!(q_function(0.0), 0.5);
        // reference values from scipy.stats.norm.sf
        assert!((q_function(1.0) - 0.158_655_253_931_457_07).abs() < 1e-12);
        assert!((q_function(3.0) - 1.349_898_031_630_093_3e-3).abs() < 1e-15);
        assert!((q_function(-1.0) - 0.841_344_746_068_543).abs() < 1e-12);
    }

    #[test]
    fn cpep_values() {
        assert_eq!(cpep_paper(0.0, 10.0, 2.0).unwrap(), 0.5);
        assert!((cpep_paper(1.0, 1.0, 1.0).unwrap() - 0.158_655).abs() < 1e-6);
        assert!(cpep_paper(1.0, 1.0, 0.0).is_err());
        assert!(cpep_paper(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cpep_monotone() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        for w in grid.windows(2) {
            assert!(cpep_paper(w[1], 1.0, 1.0).unwrap() < cpep_paper(w[0], 1.0, 1.0).unwrap());
            assert!(cpep_paper(1.0, w[1], 1.0).unwrap() < cpep_paper(1.0, w[0], 1.0).unwrap());
            let eb = |x: f64| 0.1 + x;
            assert!(cpep_paper(1.0, 1.0, eb(w[1])).unwrap() > cpep_paper(1.0, 1.0, eb(w[0])).unwrap());
        }
    }

    #[test]
    fn conventional_qpsk_report() {
        let r = report("conv-qpsk");
        assert!((r.delta1_factor - 2.0).abs() < 1e-9);
        assert!((r.delta2_factor - 2.0).abs() < 1e-9);
        assert!((r.eb - 1.8928).abs() < 1e-3);
    }

    #[test]
    fn proposed_qpsk_report() {
        let r = report("prop-qpsk");
        assert!((r.delta1_factor - 2.0).abs() < 1e-9);
        assert!((r.delta2_factor - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.eb, 1.0);
    }

    #[test]
    fn sixteen_qam_reports() {
        let conv = report("conv-16qam");
        assert!((conv.delta1_factor - 2.0).abs() < 1e-9);
        assert!((conv.delta2_factor - 2.0).abs() < 1e-9);
        assert!((conv.eb - 4.444).abs() < 1e-3);
        let prop = report("prop-16qam");
        assert!((prop.delta1_factor - 2.0).abs() < 1e-9);
        assert!((prop.delta2_factor - 2f64.sqrt()).abs() < 1e-9);
        assert!((prop.eb - 2.3333).abs() < 1e-3);
    }

    #[test]
    fn proposed_normalized_factors_dominate() {
        for (conv, prop) in [("conv-qpsk", "prop-qpsk"), ("conv-16qam", "prop-16qam")] {
            let (c, p) = (report(conv), report(prop));
            assert!(p.normalized_d1 > c.normalized_d1, "{prop} d1");
            assert!(p.normalized_d2 > c.normalized_d2, "{prop} d2");
        }
    }

    #[test]
    fn design_criterion() {
        // conventional 16QAM: the outer ring keeps spacing 2, like M_A
        for (name, expected) in [("conv-qpsk", false), ("prop-qpsk", true), ("conv-16qam", true), ("prop-16qam", true)] {
            let np = shipped_pairs().into_iter().find(|p| p.name == name).unwrap();
            assert_eq!(design_criterion_check(&np.pair), expected, "{name}");
        }
        let q = crate::constellation::Constellation::qpsk();
        let self_pair = ConstellationPair { a: q.clone(), b: q };
        assert!(design_criterion_check(&self_pair));
    }

    #[test]
    fn cross_demap_proposed_below_conventional() {
        for (conv, prop) in [("conv-qpsk", "prop-qpsk"), ("conv-16qam", "prop-16qam")] {
            let get = |name| {
                let np = shipped_pairs().into_iter().find(|p| p.name == name).unwrap();
                cross_demap_statistics(&np.pair).unwrap()
            };
            let (c, p) = (get(conv), get(prop));
            assert!(p.a_to_b < c.a_to_b, "{conv}: {c:?} vs {p:?}");
            assert!(p.b_to_a < c.b_to_a, "{conv}: {c:?} vs {p:?}");
            for s in [c, p] {
                let bound = if conv.contains("qpsk") { 2.0 } else { 4.0 };
                assert!(s.a_to_b <= bound && s.b_to_a <= bound);
            }
        }
    }

    #[test]
    fn cross_demap_identity_pair() {
        let q = crate::constellation::Constellation::qam16();
        let s = cross_demap_statistics(&ConstellationPair { a: q.clone(), b: q }).unwrap();
        assert_eq!((s.a_to_b, s.b_to_a), (0.0, 0.0));
        let null = ConstellationPair::new(
            crate::constellation::Constellation::qam16(),
            crate::constellation::Constellation::null(),
        )
        .unwrap();
        assert!(cross_demap_statistics(&null).is_err());
    }

    #[test]
    fn report_tables() {
        let csv = report_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("pair,delta1_factor"));
        assert!(lines[2].starts_with("prop-qpsk,2.000000,1.414214,1.000000"));
        let text = report_text().unwrap();
        assert_eq!(text.lines().count(), 5);
    }
}
