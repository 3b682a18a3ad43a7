//! Plain-text field dumps.
//!
//! Phase-space fields use `TFGRID v1`:
//!
//! ```text
//! TFGRID v1
//! # created unix=1700000000        (optional)
//! N 128
//! Lx 2.0000000000000000e1
//! Lp 4.0212385965949352e1
//! hbar 1.0000000000000000e0
//! 0 0 <re> <im>
//! 0 1 <re> <im>
//! ...
//! ```
//!
//! with one line per sample in row-major order. Configuration-space fields
//! use `TFCFG v1`, the same layout without `Lp` and with lines `j re im`.
//! Reals are written with 17 significant digits, so text round trips are
//! bit-exact. Lines starting with `#` are comments.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;

use crate::field::{ConfigField, Field, PhaseField};
use crate::grid::GridSpec;
use crate::{Error, Result};

pub const PHASE_MAGIC: &str = "TFGRID v1";
pub const CONFIG_MAGIC: &str = "TFCFG v1";

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn timestamp_line(w: &mut impl Write, timestamp: bool) -> io::Result<()> {
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "# created unix={secs}")?;
    }
    Ok(())
}

pub fn write_phase_dump(w: &mut impl Write, psi: &PhaseField, timestamp: bool) -> io::Result<()> {
    let g = psi.grid();
    writeln!(w, "{PHASE_MAGIC}")?;
    timestamp_line(w, timestamp)?;
    writeln!(w, "N {}", g.n())?;
    writeln!(w, "Lx {}", real(g.lx()))?;
    writeln!(w, "Lp {}", real(g.lp()))?;
    writeln!(w, "hbar {}", real(g.hbar()))?;
    let n = g.n();
    for (idx, v) in psi.values().iter().enumerate() {
        writeln!(w, "{} {} {} {}", idx / n, idx % n, real(v.re), real(v.im))?;
    }
    Ok(())
}

pub fn write_config_dump(w: &mut impl Write, psi: &ConfigField, timestamp: bool) -> io::Result<()> {
    let g = psi.grid();
    writeln!(w, "{CONFIG_MAGIC}")?;
    timestamp_line(w, timestamp)?;
    writeln!(w, "N {}", g.n())?;
    writeln!(w, "Lx {}", real(g.lx()))?;
    writeln!(w, "hbar {}", real(g.hbar()))?;
    for (j, v) in psi.values().iter().enumerate() {
        writeln!(w, "{j} {} {}", real(v.re), real(v.im))?;
    }
    Ok(())
}

/// Non-comment lines with their 1-based line numbers.
struct Lines<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self { inner: r.lines(), line: 0 }
    }

    fn next(&mut self) -> Result<Option<(usize, String)>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some((self.line, t.to_string())));
        }
        Ok(None)
    }

    fn expect(&mut self) -> Result<(usize, String)> {
        self.next()?.ok_or_else(|| bad(self.line + 1, "unexpected end of file"))
    }

    fn header(&mut self, key: &str) -> Result<String> {
        let (line, text) = self.expect()?;
        let mut parts = text.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(v), None) if k == key => Ok(v.to_string()),
            _ => Err(bad(line, format!("expected `{key} <value>`"))),
        }
    }
}

fn bad(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedDump { line, reason: reason.into() }
}

fn parse<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| bad(line, format!("cannot parse {what} from `{s}`")))
}

fn magic<R: BufRead>(lines: &mut Lines<R>, want: &str) -> Result<()> {
    let (line, text) = lines.expect()?;
    if text != want {
        return Err(bad(line, format!("expected `{want}` header")));
    }
    Ok(())
}

/// Reads `count` sample lines whose leading integer fields must equal `index(i)`.
fn samples<R: BufRead>(
    lines: &mut Lines<R>,
    count: usize,
    index: impl Fn(usize) -> Vec<usize>,
) -> Result<Vec<Complex64>> {
    let mut values = Vec::with_capacity(count);
    for i in 0..count {
        let (line, text) = lines.expect()?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        let want = index(i);
        if parts.len() != want.len() + 2 {
            return Err(bad(line, format!("expected {} fields", want.len() + 2)));
        }
        for (p, w) in parts.iter().zip(&want) {
            if parse::<usize>(p, line, "index")? != *w {
                return Err(bad(line, format!("expected index {want:?}")));
            }
        }
        let re: f64 = parse(parts[want.len()], line, "real part")?;
        let im: f64 = parse(parts[want.len() + 1], line, "imaginary part")?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(bad(line, "non-finite value"));
        }
        values.push(Complex64::new(re, im));
    }
    if let Some((line, _)) = lines.next()? {
        return Err(bad(line, "trailing data"));
    }
    Ok(values)
}

fn grid_error(line: usize, e: Error) -> Error {
    bad(line, e.to_string())
}

pub fn read_phase_dump(r: impl BufRead) -> Result<PhaseField> {
    let mut lines = Lines::new(r);
    magic(&mut lines, PHASE_MAGIC)?;
    let n: usize = parse(&lines.header("N")?, lines.line, "N")?;
    let lx: f64 = parse(&lines.header("Lx")?, lines.line, "Lx")?;
    let lp: f64 = parse(&lines.header("Lp")?, lines.line, "Lp")?;
    let hbar: f64 = parse(&lines.header("hbar")?, lines.line, "hbar")?;
    let grid = GridSpec::from_parts(n, lx, lp, hbar).map_err(|e| grid_error(lines.line, e))?;
    let values = samples(&mut lines, n * n, |i| vec![i / n, i % n])?;
    PhaseField::from_values(grid, values)
}

pub fn read_config_dump(r: impl BufRead) -> Result<ConfigField> {
    let mut lines = Lines::new(r);
    magic(&mut lines, CONFIG_MAGIC)?;
    let n: usize = parse(&lines.header("N")?, lines.line, "N")?;
    let lx: f64 = parse(&lines.header("Lx")?, lines.line, "Lx")?;
    let hbar: f64 = parse(&lines.header("hbar")?, lines.line, "hbar")?;
    let grid = GridSpec::new(n, lx, hbar).map_err(|e| grid_error(lines.line, e))?;
    let values = samples(&mut lines, n, |i| vec![i])?;
    ConfigField::from_values(grid, values)
}

pub fn save_phase(path: impl AsRef<Path>, psi: &PhaseField, timestamp: bool) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_phase_dump(&mut w, psi, timestamp)?;
    w.flush()?;
    Ok(())
}

pub fn save_config(path: impl AsRef<Path>, psi: &ConfigField, timestamp: bool) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_config_dump(&mut w, psi, timestamp)?;
    w.flush()?;
    Ok(())
}

pub fn load_phase(path: impl AsRef<Path>) -> Result<PhaseField> {
    read_phase_dump(BufReader::new(File::open(path)?))
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ConfigField> {
    read_config_dump(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> PhaseField {
        let g = GridSpec::new(8, 5.0, 0.7).unwrap();
        PhaseField::from_fn(g, |x, p| Complex64::new((x * 1.1).sin() / 3.0, -(p * 0.3).exp() * 1e-7))
    }

    #[test]
    fn phase_round_trip_is_bit_exact() {
        let psi = field();
        let mut buf = Vec::new();
        write_phase_dump(&mut buf, &psi, true).unwrap();
        let back = read_phase_dump(buf.as_slice()).unwrap();
        assert_eq!(back, psi);
        let mut again = Vec::new();
        write_phase_dump(&mut again, &back, false).unwrap();
        let text = String::from_utf8(again).unwrap();
        assert!(text.starts_with("TFGRID v1\nN 8\n"));
        assert_eq!(text.lines().count(), 5 + 64);
    }

    #[test]
    fn config_round_trip_is_bit_exact() {
        let g = GridSpec::new(16, 12.0, 1.0).unwrap();
        let psi = ConfigField::from_fn(g, |x| Complex64::new(x.cos() / 7.0, -x / 3.0));
        let mut buf = Vec::new();
        write_config_dump(&mut buf, &psi, false).unwrap();
        assert_eq!(read_config_dump(buf.as_slice()).unwrap(), psi);
    }

    #[test]
    fn malformed_dumps_report_lines() {
        let mut buf = Vec::new();
        write_phase_dump(&mut buf, &field(), false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let broken = text.replacen("3 4 ", "3 5 ", 1);
        assert!(matches!(
            read_phase_dump(broken.as_bytes()),
            Err(Error::MalformedDump { .. })
        ));
        let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            read_phase_dump(truncated.as_bytes()),
            Err(Error::MalformedDump { .. })
        ));
        assert!(matches!(
            read_phase_dump("TFGRID v2\n".as_bytes()),
            Err(Error::MalformedDump { line: 1, .. })
        ));
        let bad_lp = text.replacen("Lp ", "Lp 1", 1);
        assert!(read_phase_dump(bad_lp.as_bytes()).is_err());
    }
}
