//! CSV and JSON emission for trajectories, sweeps and decay records.
//!
//! Column layouts:
//! * trajectory: `t, mass, observed_mass`
//! * sweep: `lambda, M_best, feasible` (`M_best` empty when infeasible)
//! * decay: `t, mass, energy, observed`

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hum::TrajectorySample;
use crate::nls::DecayRecord;
use crate::resolvent::SweepPoint;

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn write_trajectory_csv<W: Write>(out: W, samples: &[TrajectorySample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "mass", "observed_mass"]).map_err(csv_err)?;
    for s in samples {
        w.write_record([fmt(s.t), fmt(s.mass), fmt(s.observed_mass)]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "M_best", "feasible"]).map_err(csv_err)?;
    for p in points {
        let (m, feasible) = match p.m_best {
            Some(v) => (fmt(v), "true"),
            None => (String::new(), "false"),
        };
        w.write_record([fmt(p.lambda), m, feasible.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_decay_csv<W: Write>(out: W, record: &DecayRecord) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "mass", "energy", "observed"]).map_err(csv_err)?;
    for i in 0..record.len() {
        w.write_record([
            fmt(record.times[i]),
            fmt(record.mass[i]),
            fmt(record.energy[i]),
            fmt(record.observed[i]),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Creates (truncating) a buffered file.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_csv_marks_infeasible_points() {
        let pts = [
            SweepPoint { lambda: -1.0, m_best: Some(0.5) },
            SweepPoint { lambda: 0.0, m_best: None },
        ];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,M_best,feasible");
        assert!(lines[1].ends_with(",true"));
        assert!(lines[2].ends_with(",,false"));
    }

    #[test]
    fn decay_csv_round_trips_values() {
        let rec = DecayRecord {
            times: vec![0.0, 0.5],
            mass: vec![1.0, 0.25],
            energy: vec![2.0, 2.0],
            observed: vec![0.1, 0.05],
            gamma_fit: None,
        };
        let mut buf = Vec::new();
        write_decay_csv(&mut buf, &rec).unwrap();
        let mut r = csv::Reader::from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.25);
    }
}
