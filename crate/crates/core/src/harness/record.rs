//! Per-instance sweep records, stored one JSON object per line.
//!
//! Field order is fixed:
//! `model, params, n, instance_id, seed, status, error_class, error, delta,
//! inverse_delta, s_star, lambda0, lambda1, solver`.
//! Absent values are `null`. `status` is `"ok"` or `"error"`; error rows carry
//! the failure class in `error_class` and leave the numeric fields `null`.
//! Wall time is kept out of this file so that it is byte-reproducible; see
//! [`RunRecord::wall_time`].

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const STATUS_OK: &str = "ok";
pub const STATUS_ERROR: &str = "error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: String,
    pub params: String,
    pub n: usize,
    pub instance_id: usize,
    pub seed: u64,
    pub status: String,
    pub error_class: Option<String>,
    pub error: Option<String>,
    pub delta: Option<f64>,
    pub inverse_delta: Option<f64>,
    pub s_star: Option<f64>,
    pub lambda0: Option<f64>,
    pub lambda1: Option<f64>,
    pub solver: String,
    /// Seconds spent on the instance. Written to the timings sidecar, not to
    /// the records file; zero for records loaded from disk.
    #[serde(skip)]
    pub wall_time: f64,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    pub fn key(&self) -> (usize, usize) {
        (self.n, self.instance_id)
    }

    pub fn to_line(&self) -> Result<String> {
        let mut s = serde_json::to_string(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes records in the given order.
pub fn write_records<W: Write>(records: &[RunRecord], mut w: W) -> Result<()> {
    for r in records {
        w.write_all(r.to_line()?.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a records file. A truncated final line (an interrupted append) is
/// dropped; malformed lines elsewhere are errors.
pub fn read_records<R: BufRead>(reader: R, origin: &Path) -> Result<Vec<RunRecord>> {
    let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let last = lines.iter().rposition(|l| !l.trim().is_empty());
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(line) {
            Ok(r) => out.push(r),
            Err(_) if Some(i) == last => break,
            Err(e) => {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    message: format!("line {}: {e}", i + 1),
                })
            }
        }
    }
    Ok(out)
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>> {
    let f = std::fs::File::open(path)?;
    read_records(std::io::BufReader::new(f), path)
}
