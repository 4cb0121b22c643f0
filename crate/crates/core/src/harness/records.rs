//! BER results as CSV: `scheme,ebn0_db,bits,errors,ber,groups,seed,elapsed_s`.
//!
//! Floats are written in Rust's shortest round-trip form, so parsing a
//! file back yields bit-identical records. Lines end in `\n`.

use super::{BerRecord, SchemeId};
use crate::{Error, Result};
use std::fs;
use std::path::Path;

pub const CSV_HEADER: &str = "scheme,ebn0_db,bits,errors,ber,groups,seed,elapsed_s";

pub fn to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.scheme, r.ebn0_db, r.bits, r.errors, r.ber, r.groups, r.seed, r.elapsed_s
        ));
    }
    out
}

pub fn write_csv(records: &[BerRecord], path: &Path) -> Result<()> {
    fs::write(path, to_csv(records))?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<BerRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                reason: format!("expected header {CSV_HEADER:?}"),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let line_no = i + 1;
            let err = |reason: String| Error::Csv { line: line_no, reason };
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 8 {
                return Err(err(format!("expected 8 fields, got {}", fields.len())));
            }
            let float = |s: &str| s.parse::<f64>().map_err(|e| err(format!("{s:?}: {e}")));
            let int = |s: &str| s.parse::<u64>().map_err(|e| err(format!("{s:?}: {e}")));
            Ok(BerRecord {
                scheme: fields[0].parse::<SchemeId>().map_err(|e| err(e.to_string()))?,
                ebn0_db: float(fields[1])?,
                bits: int(fields[2])?,
                errors: int(fields[3])?,
                ber: float(fields[4])?,
                groups: int(fields[5])?,
                seed: int(fields[6])?,
                elapsed_s: float(fields[7])?,
            })
        })
        .collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<BerRecord>> {
    parse_csv(&fs::read_to_string(path)?)
}
