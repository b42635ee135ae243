//! CSV and JSON writers. Column order is fixed and floats use Rust's
//! shortest round-trip formatting, so identical inputs give identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::collision::{CollisionTrace, CrossingEvent};
use crate::error::Result;
use crate::qops::ComplexMatrix;
use crate::thermo::ThermoRecord;

pub const TRACE_HEADER: [&str; 7] = [
    "step",
    "site_j",
    "site_k",
    "lambda",
    "E_system_peV",
    "E_mean_peV",
    "E_smoothed_peV",
];
pub const CROSSINGS_HEADER: [&str; 3] = ["step", "direction", "margin_peV"];
pub const DENSITY_HEADER: [&str; 4] = ["row", "col", "re", "im"];

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(File::create(path)?))
}

pub fn write_thermo_csv(path: &Path, records: &[ThermoRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(ThermoRecord::CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_values().map(num))?;
    }
    w.flush()?;
    Ok(())
}

/// One row per collision; the initial record is not written.
pub fn write_trace_csv(path: &Path, trace: &CollisionTrace) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(TRACE_HEADER)?;
    let smoothed = trace.smoothed_system_energy();
    let n = trace.n_sites as f64;
    for (r, s) in trace.records.iter().zip(&smoothed).skip(1) {
        let (j, k) = r.pair.map_or((String::new(), String::new()), |(j, k)| (j.to_string(), k.to_string()));
        w.write_record([
            r.step.to_string(),
            j,
            k,
            num(r.lambda),
            num(r.e_system),
            num(r.e_sites.iter().sum::<f64>() / n),
            num(*s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_crossings_csv(path: &Path, events: &[CrossingEvent]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(CROSSINGS_HEADER)?;
    for e in events {
        w.write_record([e.step.to_string(), e.direction.as_str().to_string(), num(e.margin)])?;
    }
    w.flush()?;
    Ok(())
}

/// Full matrix as (row, col, re, im) rows.
pub fn write_density_csv(path: &Path, m: &ComplexMatrix) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(DENSITY_HEADER)?;
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            w.write_record([i.to_string(), j.to_string(), num(z.re), num(z.im)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
