//! Plain-text grid snapshots.
//!
//! Layout:
//!
//! ```text
//! M=<points> components=<1|2> time=<float>
//! <row j2 = 0 of component 0: M comma-separated values>
//! ...
//! <row j2 = M-1 of component 0>
//! <rows of component 1, if present>
//! ```
//!
//! Row `j2` holds the samples at `y = j2·2π/M` for `x = j1·2π/M`,
//! `j1 = 0..M`. Values are written with 17 significant digits so a
//! read-back reproduces them exactly.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Result, SolverError};
use crate::spectral::{PhysicalField, PhysicalGrid};

pub fn write_snapshot<W: Write>(mut w: W, field: &PhysicalField, time: f64) -> Result<()> {
    let m = field.grid().points();
    writeln!(w, "M={} components={} time={:e}", m, field.num_components(), time)?;
    let mut line = String::with_capacity(m * 24);
    for c in field.components() {
        for row in c.chunks(m) {
            line.clear();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{v:.16e}"));
            }
            writeln!(w, "{line}")?;
        }
    }
    Ok(())
}

pub fn save_snapshot(path: impl AsRef<Path>, field: &PhysicalField, time: f64) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_snapshot(&mut w, field, time)?;
    w.flush()?;
    Ok(())
}

fn header_value<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| SolverError::Format(format!("expected '{key}=...' in header")))
}

/// Reads a snapshot back; returns the field and its time stamp.
pub fn read_snapshot<R: BufRead>(r: R) -> Result<(PhysicalField, f64)> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| SolverError::Format("empty snapshot".into()))??;
    let mut tokens = header.split_whitespace();
    let m: usize = header_value(tokens.next(), "M")?
        .parse()
        .map_err(|_| SolverError::Format("bad M".into()))?;
    let comps: usize = header_value(tokens.next(), "components")?
        .parse()
        .map_err(|_| SolverError::Format("bad components".into()))?;
    let time: f64 = header_value(tokens.next(), "time")?
        .parse()
        .map_err(|_| SolverError::Format("bad time".into()))?;
    if !(1..=2).contains(&comps) {
        return Err(SolverError::Format(format!("components must be 1 or 2, got {comps}")));
    }
    let grid = PhysicalGrid::new(m)?;
    let mut components = Vec::with_capacity(comps);
    for c in 0..comps {
        let mut values = Vec::with_capacity(m * m);
        for row in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| SolverError::Format(format!("missing row {row} of component {c}")))??;
            let before = values.len();
            for cell in line.split(',') {
                values.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| SolverError::Format(format!("bad value '{cell}' in row {row}")))?,
                );
            }
            if values.len() - before != m {
                return Err(SolverError::Format(format!(
                    "row {row} of component {c} has {} values, expected {m}",
                    values.len() - before
                )));
            }
        }
        components.push(values);
    }
    Ok((PhysicalField::new(grid, components)?, time))
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<(PhysicalField, f64)> {
    let f = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_exact(values in proptest::collection::vec(-1e6f64..1e6, 32), time in 0.0f64..100.0) {
            let g = PhysicalGrid::new(4).unwrap();
            let f = PhysicalField::new(g, vec![values[..16].to_vec(), values[16..].to_vec()]).unwrap();
            let mut buf = Vec::new();
            write_snapshot(&mut buf, &f, time).unwrap();
            let (back, t) = read_snapshot(&buf[..]).unwrap();
            prop_assert_eq!(back, f);
            prop_assert_eq!(t, time);
        }
    }

    #[test]
    fn header_format() {
        let g = PhysicalGrid::new(4).unwrap();
        let f = PhysicalField::from_fn(g, |x, _| x).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 0.5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("M=4 components=1 time=5e-1\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn malformed_input() {
        assert!(read_snapshot("".as_bytes()).is_err());
        assert!(read_snapshot("M=4 components=3 time=0\n".as_bytes()).is_err());
        assert!(read_snapshot("M=4 components=1 time=0\n1,2,3,4\n".as_bytes()).is_err());
        assert!(read_snapshot("M=4 components=1 time=0\n1,2,3\n1,2,3,4\n1,2,3,4\n1,2,3,4\n".as_bytes()).is_err());
    }
}
