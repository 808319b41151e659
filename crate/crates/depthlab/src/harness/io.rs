//! Experiment persistence: append-only match log, report JSON, summary CSV.
//!
//! The log's first line pins the config hash; every later line is one
//! match record keyed by its seed. Reruns reload the log, replay-check each
//! record, and only play what is missing. The CSV is formatted with fixed
//! precision so identical runs produce identical bytes.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{MatchRecord, PlcReport};

pub(crate) const LOG_NAME: &str = "matches.jsonl";
pub(crate) const REPORT_NAME: &str = "report.json";
pub(crate) const CSV_NAME: &str = "summary.csv";

#[derive(Serialize, Deserialize)]
struct LogHeader {
    config_hash: String,
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CorruptLog { path: path.to_path_buf(), reason: reason.into() }
}

/// Loads a match log, checking the header against `config_hash`. `None`
/// means no usable log exists and a header must be written; otherwise the
/// records come back keyed by seed.
pub(crate) fn load_log(dir: &Path, config_hash: &str) -> Result<Option<HashMap<u64, MatchRecord>>> {
    let path = dir.join(LOG_NAME);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(&path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    let header_line = match lines.next() {
        None => return Ok(None),
        Some(line) => line.map_err(|e| Error::io(&path, e))?,
    };
    let header: LogHeader = serde_json::from_str(&header_line)
        .map_err(|e| corrupt(&path, format!("unreadable header: {e}")))?;
    if header.config_hash != config_hash {
        return Err(corrupt(
            &path,
            format!(
                "log belongs to config {}, current config is {}; use a fresh output directory",
                header.config_hash, config_hash
            ),
        ));
    }
    let mut records = HashMap::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(&path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: MatchRecord = serde_json::from_str(&line)
            .map_err(|e| corrupt(&path, format!("line {}: {e}", lineno + 2)))?;
        if records.insert(record.seed, record).is_some() {
            return Err(corrupt(&path, format!("line {}: duplicate seed", lineno + 2)));
        }
    }
    Ok(Some(records))
}

/// Opens the log for appending, writing the header if the file is new.
pub(crate) struct LogWriter {
    writer: BufWriter<File>,
    path: PathBuf,
}

impl LogWriter {
    pub(crate) fn open(dir: &Path, config_hash: &str, fresh: bool) -> Result<LogWriter> {
        let path = dir.join(LOG_NAME);
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let mut w = LogWriter { writer: BufWriter::new(file), path };
        if fresh {
            let header = serde_json::to_string(&LogHeader { config_hash: config_hash.into() })
                .expect("header serializes");
            w.line(&header)?;
        }
        Ok(w)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        self.writer
            .write_all(s.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .map_err(|e| Error::io(&self.path, e))
    }

    pub(crate) fn append(&mut self, record: &MatchRecord) -> Result<()> {
        let line = serde_json::to_string(record).expect("record serializes");
        self.line(&line)
    }

    pub(crate) fn flush(&mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

pub(crate) fn write_report(dir: &Path, report: &PlcReport) -> Result<()> {
    let path = dir.join(REPORT_NAME);
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::json(&path, e))?;
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e))
}

/// Fixed-precision summary: one row per rule variant. Fixed formatting keeps
/// reruns byte-identical; infinities print as `inf`.
pub(crate) fn write_csv(dir: &Path, report: &PlcReport) -> Result<()> {
    let path = dir.join(CSV_NAME);
    let mut out = String::from("rule,plc_eq1,plc_eq2,depth_frac,depth_int,ci_low,ci_high\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.name,
            csv_num(row.plc_eq1),
            csv_num(row.plc_eq2),
            csv_num(row.depth_fractional),
            row.depth_integer,
            csv_num(row.ci_low),
            csv_num(row.ci_high),
        ));
    }
    std::fs::write(&path, out).map_err(|e| Error::io(&path, e))
}

fn csv_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
