//! Compact text descriptors for the command-line surfaces.
//!
//! * modulus: `linear:K=<f>`, `hoelder:K=<f>,alpha=<f>`,
//!   `pwl:<t0>,<w0>;<t1>,<w1>;...`, `table:<path.csv>` (two-column CSV
//!   with header `t,omega`);
//! * random time: `srv:<v1>@<p1>,<v2>@<p2>,...` or `det:<v>`;
//! * envelope: `<m>,<M>`;
//! * schedule: `<t1>,<t2>,...` with `t1 = 0`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::recovery::OffsetSchedule;
use crate::stochastic::{Envelope, SimpleRandomVariable};

fn num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: expected a number, got '{s}'")))
}

fn keyed(field: &str, key: &str) -> Result<f64> {
    match field.trim().split_once('=') {
        Some((k, v)) if k.trim() == key => num(v, key),
        _ => Err(Error::Parse(format!("expected '{key}=<f>', got '{field}'"))),
    }
}

/// Parses a modulus descriptor.
pub fn parse_modulus(spec: &str) -> Result<Modulus<f64>> {
    let (family, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("modulus spec needs a family prefix, got '{spec}'")))?;
    match family.trim() {
        "linear" => Modulus::linear(keyed(rest, "K")?),
        "hoelder" => {
            let (k, alpha) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse("hoelder needs 'K=<f>,alpha=<f>'".into()))?;
            Modulus::hoelder(keyed(k, "K")?, keyed(alpha, "alpha")?)
        }
        "pwl" => Modulus::piecewise_linear(parse_pairs(rest)?),
        "table" => {
            let samples = read_modulus_table(Path::new(rest.trim()))?;
            Modulus::tabulated(samples)
        }
        other => Err(Error::Parse(format!("unknown modulus family '{other}'"))),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(';')
        .map(|pair| {
            let (t, w) = pair
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected '<t>,<w>', got '{pair}'")))?;
            Ok((num(t, "breakpoint time")?, num(w, "breakpoint value")?))
        })
        .collect()
}

fn read_modulus_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("t,omega") => {}
        other => {
            return Err(Error::Parse(format!(
                "modulus table must start with header 't,omega', got '{}'",
                other.unwrap_or("")
            )))
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (t, w) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("table row '{line}' is not '<t>,<omega>'")))?;
            Ok((num(t, "table time")?, num(w, "table value")?))
        })
        .collect()
}

/// Parses a random-time descriptor over `[0, domain]`.
pub fn parse_srv(spec: &str, domain: f64) -> Result<SimpleRandomVariable<f64>> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("time spec needs 'det:' or 'srv:', got '{spec}'")))?;
    match kind.trim() {
        "det" => SimpleRandomVariable::deterministic(num(rest, "time value")?, domain),
        "srv" => {
            let atoms = rest
                .split(',')
                .map(|atom| {
                    let (v, p) = atom
                        .split_once('@')
                        .ok_or_else(|| Error::Parse(format!("expected '<v>@<p>', got '{atom}'")))?;
                    Ok((num(v, "atom value")?, num(p, "atom probability")?))
                })
                .collect::<Result<Vec<_>>>()?;
            SimpleRandomVariable::new(atoms, domain)
        }
        other => Err(Error::Parse(format!("unknown time spec kind '{other}'"))),
    }
}

/// Parses an envelope `<m>,<M>` on `[0, 1]`.
pub fn parse_envelope(spec: &str) -> Result<Envelope<f64>> {
    let (lo, hi) = spec
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("envelope spec must be '<m>,<M>', got '{spec}'")))?;
    Envelope::new(
        num(lo, "envelope infimum")?,
        num(hi, "envelope supremum")?,
        1.0,
    )
}

/// Parses a comma-separated offset schedule starting at 0.
pub fn parse_schedule(spec: &str) -> Result<OffsetSchedule<f64>> {
    let offsets = spec
        .split(',')
        .map(|t| num(t, "offset"))
        .collect::<Result<Vec<_>>>()?;
    OffsetSchedule::new(offsets)
}
