//! File format for discretized processes.
//!
//! A process is stored as a CSV file with header `t,atom0,atom1,...` (one
//! column per atom function) plus a sidecar JSON file `{"probs": [...],
//! "a": <f>}` at the same path with the extension replaced by `json`.
//! Numbers are written as 17-significant-digit decimals, so an `f64`
//! round-trips bit-stably. This layer works on `f64` processes, the form
//! the command line exchanges.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::simulation::{GridFunction, GridProcess};

/// Largest deviation from the equispaced layout tolerated when reading a
/// grid back in.
const EQUISPACING_TOL: f64 = 1e-14;

#[derive(Deserialize)]
struct Sidecar {
    probs: Vec<f64>,
    a: f64,
}

/// 17-significant-digit decimal form of `x`; parses back to the same bits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The sidecar JSON path belonging to a process CSV path.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes the process to `path` (CSV) and its sidecar JSON.
pub fn write_process(path: &Path, p: &GridProcess<f64>) -> Result<()> {
    let n = p.cells();
    let mut csv = String::from("t");
    for i in 0..p.atoms().len() {
        csv.push_str(&format!(",atom{i}"));
    }
    csv.push('\n');
    for j in 0..=n {
        csv.push_str(&format_f64(p.atoms()[0].time(j)));
        for f in p.atoms() {
            csv.push(',');
            csv.push_str(&format_f64(f.values()[j]));
        }
        csv.push('\n');
    }
    fs::write(path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;

    let mut json = String::from("{\"probs\": [");
    for (i, &q) in p.probs().iter().enumerate() {
        if i > 0 {
            json.push_str(", ");
        }
        json.push_str(&format_f64(q));
    }
    json.push_str(&format!("], \"a\": {}}}\n", format_f64(p.domain())));
    let side = sidecar_path(path);
    fs::write(&side, json).map_err(|e| Error::Io(format!("{}: {e}", side.display())))
}

/// Reads a process written by [`write_process`], checking the header, the
/// column count and the equispaced grid layout.
pub fn read_process(path: &Path) -> Result<GridProcess<f64>> {
    let side = sidecar_path(path);
    let side_text =
        fs::read_to_string(&side).map_err(|e| Error::Io(format!("{}: {e}", side.display())))?;
    let sidecar: Sidecar = serde_json::from_str(&side_text)
        .map_err(|e| Error::Parse(format!("{}: {e}", side.display())))?;

    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty process file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"t") || cols.len() < 2 {
        return Err(Error::Parse(format!("bad process header: {header}")));
    }
    for (i, col) in cols[1..].iter().enumerate() {
        if *col != format!("atom{i}") {
            return Err(Error::Parse(format!("bad process header column: {col}")));
        }
    }
    let n_atoms = cols.len() - 1;
    if n_atoms != sidecar.probs.len() {
        return Err(Error::Parse(format!(
            "{} atom columns but {} probabilities in the sidecar",
            n_atoms,
            sidecar.probs.len()
        )));
    }

    let mut times = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n_atoms];
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse(format!(
                "row {}: wrong field count",
                lineno + 2
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))
        };
        times.push(parse(fields[0])?);
        for (col, field) in columns.iter_mut().zip(&fields[1..]) {
            col.push(parse(field)?);
        }
    }
    if times.len() < 2 {
        return Err(Error::Parse(
            "a process needs at least two grid rows".into(),
        ));
    }

    let n = times.len() - 1;
    for (j, &t) in times.iter().enumerate() {
        let expect = if j == n {
            sidecar.a
        } else {
            sidecar.a * (j as f64 / n as f64)
        };
        if (t - expect).abs() > EQUISPACING_TOL * sidecar.a.max(1.0) {
            return Err(Error::Validation(format!(
                "grid is not equispaced at row {}: found {t}, expected {expect}",
                j + 2
            )));
        }
    }

    let atoms = columns
        .into_iter()
        .map(|values| GridFunction::new(sidecar.a, values))
        .collect::<Result<Vec<_>>>()?;
    GridProcess::new(sidecar.probs, atoms)
}
