use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use minatar_agents::AgentKind;
use minatar_core::GameId;
use serde::{Deserialize, Serialize};

use crate::run::RunRecord;
use crate::stats::AlphaSummary;

/// One line per record.
pub fn write_records_jsonl<W: Write>(mut w: W, records: &[RunRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn save_records(path: &Path, records: &[RunRecord]) -> io::Result<()> {
    write_records_jsonl(BufWriter::new(File::create(path)?), records)
}

pub fn read_records_jsonl<R: BufRead>(r: R) -> io::Result<Vec<RunRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1))
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn load_records(path: &Path) -> io::Result<Vec<RunRecord>> {
    read_records_jsonl(BufReader::new(File::open(path)?))
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SummaryRow {
    pub game: GameId,
    pub agent: AgentKind,
    pub alpha_exp: i32,
    pub alpha: f64,
    pub mean: f64,
    pub stderr: f64,
    pub seeds: usize,
}

pub fn write_summary_csv<W: Write>(
    w: W,
    game: GameId,
    agent: AgentKind,
    rows: &[AlphaSummary],
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(SummaryRow {
            game,
            agent,
            alpha_exp: r.alpha_exp,
            alpha: r.alpha,
            mean: r.mean,
            stderr: r.stderr,
            seeds: r.seeds,
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: io::Read>(r: R) -> csv::Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(r).deserialize().collect()
}
