//! Coefficient snapshots: a matrix dump of Ĉ_{m,n} with a small header, in a
//! binary and a text flavor, both loss-free for `f64`.
//!
//! Binary layout (all little-endian): magic `HKSNAP01`, `u32` n_max, `u32`
//! m_max, `f64` lx, `f64` t, then (2·m_max+1)·(n_max+1) entries as `f64`
//! (re, im) pairs, rows ordered by m = −M..M ascending with n = 0..N inside
//! each row.
//!
//! Text layout: `#`-prefixed header lines carrying the same four fields,
//! then one `m n re im` line per entry. Floats use Rust's shortest
//! round-trip formatting, so text snapshots also restore states bitwise.
//! [`load`] auto-detects the flavor by the magic bytes.

use crate::{CliError, CliResult};
use hermite_kinetics::CoefficientField;
use num_complex::Complex64;
use std::fmt::Write;
use std::path::Path;

pub const MAGIC: &[u8; 8] = b"HKSNAP01";

pub struct Snapshot {
    pub field: CoefficientField,
    pub t: f64,
}

pub fn write_binary(path: &Path, field: &CoefficientField, t: f64) -> CliResult<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(field.n_max() as u32).to_le_bytes());
    buf.extend_from_slice(&(field.m_max() as u32).to_le_bytes());
    buf.extend_from_slice(&field.lx().to_le_bytes());
    buf.extend_from_slice(&t.to_le_bytes());
    let m_top = field.m_max() as i64;
    for m in -m_top..=m_top {
        for n in 0..=field.n_max() {
            let c = field.get(m, n);
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::Solver(format!("cannot write snapshot {}: {e}", path.display())))
}

pub fn write_text(path: &Path, field: &CoefficientField, t: f64) -> CliResult<()> {
    let mut out = String::new();
    out.push_str("# hermkin snapshot 1\n");
    out.push_str(&format!("# n_max {}\n", field.n_max()));
    out.push_str(&format!("# m_max {}\n", field.m_max()));
    out.push_str(&format!("# lx {}\n", field.lx()));
    out.push_str(&format!("# t {}\n", t));
    out.push_str("# columns: m n re im\n");
    let m_top = field.m_max() as i64;
    for m in -m_top..=m_top {
        for n in 0..=field.n_max() {
            let c = field.get(m, n);
            let _ = writeln!(out, "{m} {n} {} {}", c.re, c.im);
        }
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::Solver(format!("cannot write snapshot {}: {e}", path.display())))
}

fn bad(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("snapshot {}: {what}", path.display()))
}

/// Loads either flavor and checks the state is finite and conjugate-symmetric
/// (a real-valued distribution), so a corrupted file fails here rather than
/// deep inside a run.
pub fn load(path: &Path) -> CliResult<Snapshot> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Validation(format!("cannot read snapshot {}: {e}", path.display())))?;
    let snap = if bytes.len() >= MAGIC.len() && &bytes[..MAGIC.len()] == MAGIC {
        load_binary(path, &bytes)?
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| bad(path, "neither the binary magic nor valid UTF-8 text"))?;
        load_text(path, text)?
    };
    if !snap.field.is_finite() || !snap.t.is_finite() {
        return Err(bad(path, "contains non-finite values"));
    }
    let mut max_abs = 0.0_f64;
    let m_top = snap.field.m_max() as i64;
    for m in -m_top..=m_top {
        for n in 0..=snap.field.n_max() {
            max_abs = max_abs.max(snap.field.get(m, n).norm());
        }
    }
    if snap.field.hermitian_asymmetry() > 1e-10 * max_abs.max(1.0) {
        return Err(bad(
            path,
            "is not conjugate-symmetric (would reconstruct a complex-valued distribution)",
        ));
    }
    Ok(snap)
}

fn load_binary(path: &Path, bytes: &[u8]) -> CliResult<Snapshot> {
    let header = MAGIC.len() + 4 + 4 + 8 + 8;
    if bytes.len() < header {
        return Err(bad(path, "truncated header"));
    }
    let mut at = MAGIC.len();
    let mut take = |len: usize| {
        let s = &bytes[at..at + len];
        at += len;
        s
    };
    let n_max = u32::from_le_bytes(take(4).try_into().unwrap()) as usize;
    let m_max = u32::from_le_bytes(take(4).try_into().unwrap()) as usize;
    let lx = f64::from_le_bytes(take(8).try_into().unwrap());
    let t = f64::from_le_bytes(take(8).try_into().unwrap());
    let entries = (2 * m_max + 1) * (n_max + 1);
    if bytes.len() != header + entries * 16 {
        return Err(bad(
            path,
            format!(
                "payload is {} bytes, expected {} for N={n_max}, M={m_max}",
                bytes.len() - header,
                entries * 16
            ),
        ));
    }
    let mut field = CoefficientField::zeros(n_max, m_max, lx)
        .map_err(|e| bad(path, format!("invalid header dimensions: {e}")))?;
    let m_top = m_max as i64;
    for m in -m_top..=m_top {
        for n in 0..=n_max {
            let re = f64::from_le_bytes(take(8).try_into().unwrap());
            let im = f64::from_le_bytes(take(8).try_into().unwrap());
            field.set(m, n, Complex64::new(re, im));
        }
    }
    Ok(Snapshot { field, t })
}

fn load_text(path: &Path, text: &str) -> CliResult<Snapshot> {
    let mut n_max: Option<usize> = None;
    let mut m_max: Option<usize> = None;
    let mut lx: Option<f64> = None;
    let mut t: Option<f64> = None;
    let mut rows: Vec<(i64, usize, f64, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("n_max"), Some(v)) => n_max = v.parse().ok(),
                (Some("m_max"), Some(v)) => m_max = v.parse().ok(),
                (Some("lx"), Some(v)) => lx = v.parse().ok(),
                (Some("t"), Some(v)) => t = v.parse().ok(),
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad(path, format!("line {}: expected `m n re im`", idx + 1)));
        }
        let parse_err = |what: &str| bad(path, format!("line {}: bad {what}", idx + 1));
        rows.push((
            fields[0].parse().map_err(|_| parse_err("m"))?,
            fields[1].parse().map_err(|_| parse_err("n"))?,
            fields[2].parse().map_err(|_| parse_err("re"))?,
            fields[3].parse().map_err(|_| parse_err("im"))?,
        ));
    }
    let n_max = n_max.ok_or_else(|| bad(path, "missing `# n_max` header"))?;
    let m_max = m_max.ok_or_else(|| bad(path, "missing `# m_max` header"))?;
    let lx = lx.ok_or_else(|| bad(path, "missing `# lx` header"))?;
    let t = t.ok_or_else(|| bad(path, "missing `# t` header"))?;
    let expected = (2 * m_max + 1) * (n_max + 1);
    if rows.len() != expected {
        return Err(bad(
            path,
            format!("has {} entries, expected {expected}", rows.len()),
        ));
    }
    let mut field = CoefficientField::zeros(n_max, m_max, lx)
        .map_err(|e| bad(path, format!("invalid header dimensions: {e}")))?;
    let m_top = m_max as i64;
    for (m, n, re, im) in rows {
        if m < -m_top || m > m_top || n > n_max {
            return Err(bad(path, format!("entry ({m}, {n}) is out of range")));
        }
        field.set(m, n, Complex64::new(re, im));
    }
    Ok(Snapshot { field, t })
}
