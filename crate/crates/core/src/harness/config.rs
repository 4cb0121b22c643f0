//! Flat `key = value` configuration for `sim ber`. Keys are the long CLI
//! flag names; `#` starts a comment.

use super::{SchemeId, SimulationPlan};
use crate::{Error, Result};
use std::fs;
use std::path::{Path, PathBuf};

const KEYS: [&str; 9] = [
    "scheme",
    "ebn0",
    "max-groups",
    "target-errors",
    "seed",
    "workers",
    "noiseless",
    "timing",
    "out",
];

/// Parses an Eb/N0 grid: `start:step:stop` (inclusive), a single value, or
/// a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |reason: String| Error::InvalidParameter(format!("Eb/N0 grid {s:?}: {reason}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(e.to_string()));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || stop < start {
                return Err(bad("need step > 0 and stop >= start".into()));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        [list] => list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(num)
            .collect(),
        _ => Err(bad("expected start:step:stop or a list".into())),
    }
}

/// Comma-separated grid in shortest round-trip form.
pub fn format_grid(grid: &[f64]) -> String {
    grid.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config {
            key: key.into(),
            reason: format!("not a boolean: {v:?}"),
        }),
    }
}

/// Applies `key = value` lines on top of the default plan.
pub fn parse_config(text: &str) -> Result<SimulationPlan> {
    let mut plan = SimulationPlan::default();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config {
                key: line.into(),
                reason: "expected key = value".into(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let wrap = |e: Error| Error::Config {
            key: key.into(),
            reason: e.to_string(),
        };
        let int = |v: &str| {
            v.parse::<u64>().map_err(|e| Error::Config {
                key: key.into(),
                reason: e.to_string(),
            })
        };
        match key {
            "scheme" => plan.scheme = value.parse().map_err(wrap)?,
            "ebn0" => plan.ebn0_db = parse_grid(value).map_err(wrap)?,
            "max-groups" => plan.max_groups = int(value)?,
            "target-errors" => plan.target_errors = int(value)?,
            "seed" => plan.seed = int(value)?,
            "workers" => plan.workers = int(value)? as usize,
            "noiseless" => plan.noiseless = parse_bool(key, value)?,
            "timing" => plan.timing = parse_bool(key, value)?,
            "out" => plan.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            _ => {
                return Err(Error::Config {
                    key: key.into(),
                    reason: format!("unknown key (expected one of {})", KEYS.join(", ")),
                })
            }
        }
    }
    Ok(plan)
}

pub fn load_config(path: &Path) -> Result<SimulationPlan> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn config_text(plan: &SimulationPlan) -> String {
    let mut out = String::from("# sim ber configuration\n");
    let scheme: &str = SchemeId::as_str(plan.scheme);
    let values = [
        scheme.to_string(),
        format_grid(&plan.ebn0_db),
        plan.max_groups.to_string(),
        plan.target_errors.to_string(),
        plan.seed.to_string(),
        plan.workers.to_string(),
        plan.noiseless.to_string(),
        plan.timing.to_string(),
        plan.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
    ];
    for (key, value) in KEYS.iter().zip(values) {
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}

pub fn write_config(plan: &SimulationPlan, path: &Path) -> Result<()> {
    fs::write(path, config_text(plan))?;
    Ok(())
}
