//! Plain-text table inputs for initial conditions.
//!
//! Three formats, all with `#` comment lines and blank lines ignored:
//!
//! * **Coefficient list** — one number per line; line order is the mode
//!   index n = 0, 1, …, in the plain (un-normalized) coefficient
//!   convention. This is exactly what `project-ic` writes, so its output
//!   feeds straight into `advect ic=table`.
//! * **Velocity profile** — two columns `v f(v)` with strictly ascending v.
//!   Evaluation is linear interpolation inside the tabulated range and zero
//!   outside it.
//! * **Phase-space table** — first data line `nx nv`, then a line of nx
//!   x-values (strictly ascending, inside [0, lx)), a line of nv v-values
//!   (strictly ascending), then nx lines of nv values of f(x, v).
//!   Evaluation is bilinear, periodic in x with period lx, zero outside the
//!   v range.

use crate::{CliError, CliResult};
use std::path::Path;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read table {}: {e}", path.display())))
}

fn bad(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("table {}: {what}", path.display()))
}

/// Data lines (comment/blank lines dropped), each with its 1-based line number.
fn data_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_numbers(path: &Path, line_no: usize, line: &str) -> CliResult<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| bad(path, format!("line {line_no}: `{tok}` is not a number")))
        })
        .collect()
}

pub fn load_coefficients(path: &Path) -> CliResult<Vec<f64>> {
    let text = read(path)?;
    let mut values = Vec::new();
    for (line_no, line) in data_lines(&text) {
        let nums = parse_numbers(path, line_no, line)?;
        if nums.len() != 1 {
            return Err(bad(path, format!("line {line_no}: expected one value per line")));
        }
        if !nums[0].is_finite() {
            return Err(bad(path, format!("line {line_no}: non-finite value")));
        }
        values.push(nums[0]);
    }
    if values.is_empty() {
        return Err(bad(path, "contains no coefficients"));
    }
    Ok(values)
}

/// Tabulated f(v), linearly interpolated, zero outside the tabulated range.
pub struct VelocityProfile {
    v: Vec<f64>,
    f: Vec<f64>,
}

impl VelocityProfile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read(path)?;
        let mut v = Vec::new();
        let mut f = Vec::new();
        for (line_no, line) in data_lines(&text) {
            let nums = parse_numbers(path, line_no, line)?;
            if nums.len() != 2 {
                return Err(bad(path, format!("line {line_no}: expected `v f` columns")));
            }
            if !nums.iter().all(|x| x.is_finite()) {
                return Err(bad(path, format!("line {line_no}: non-finite value")));
            }
            v.push(nums[0]);
            f.push(nums[1]);
        }
        if v.len() < 2 {
            return Err(bad(path, "needs at least two rows to interpolate"));
        }
        if !v.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad(path, "v column must be strictly ascending"));
        }
        Ok(Self { v, f })
    }

    pub fn eval(&self, v: f64) -> f64 {
        let (first, last) = (self.v[0], *self.v.last().unwrap());
        if v < first || v > last {
            return 0.0;
        }
        let hi = self.v.partition_point(|&node| node < v).min(self.v.len() - 1).max(1);
        let (v0, v1) = (self.v[hi - 1], self.v[hi]);
        let w = (v - v0) / (v1 - v0);
        self.f[hi - 1] * (1.0 - w) + self.f[hi] * w
    }
}

/// Tabulated f(x, v) on a rectangular grid, bilinearly interpolated,
/// periodic in x with period lx, zero outside the v range.
pub struct PhaseSpaceTable {
    x: Vec<f64>,
    v: Vec<f64>,
    values: Vec<Vec<f64>>,
    lx: f64,
}

impl PhaseSpaceTable {
    pub fn load(path: &Path, lx: f64) -> CliResult<Self> {
        let text = read(path)?;
        let lines = data_lines(&text);
        if lines.is_empty() {
            return Err(bad(path, "is empty"));
        }
        let header = parse_numbers(path, lines[0].0, lines[0].1)?;
        if header.len() != 2 || header.iter().any(|&h| h < 2.0 || h.fract() != 0.0) {
            return Err(bad(
                path,
                format!("line {}: first data line must be `nx nv` (integers >= 2)", lines[0].0),
            ));
        }
        let (nx, nv) = (header[0] as usize, header[1] as usize);
        if lines.len() != 3 + nx {
            return Err(bad(
                path,
                format!("expected {} data lines for nx={nx}, found {}", 3 + nx, lines.len()),
            ));
        }
        let x = parse_numbers(path, lines[1].0, lines[1].1)?;
        let v = parse_numbers(path, lines[2].0, lines[2].1)?;
        if x.len() != nx {
            return Err(bad(path, format!("line {}: expected {nx} x-values", lines[1].0)));
        }
        if v.len() != nv {
            return Err(bad(path, format!("line {}: expected {nv} v-values", lines[2].0)));
        }
        if !x.windows(2).all(|w| w[0] < w[1]) || !v.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad(path, "x and v grids must be strictly ascending"));
        }
        if x[0] < 0.0 || *x.last().unwrap() >= lx {
            return Err(bad(path, format!("x grid must lie inside [0, lx) with lx={lx}")));
        }
        let mut values = Vec::with_capacity(nx);
        for (line_no, line) in &lines[3..] {
            let row = parse_numbers(path, *line_no, line)?;
            if row.len() != nv {
                return Err(bad(path, format!("line {line_no}: expected {nv} f-values")));
            }
            if !row.iter().all(|x| x.is_finite()) {
                return Err(bad(path, format!("line {line_no}: non-finite value")));
            }
            values.push(row);
        }
        Ok(Self { x, v, values, lx })
    }

    pub fn eval(&self, x: f64, v: f64) -> f64 {
        let (v_first, v_last) = (self.v[0], *self.v.last().unwrap());
        if v < v_first || v > v_last {
            return 0.0;
        }
        let vi = self.v.partition_point(|&node| node < v).min(self.v.len() - 1).max(1);
        let wv = (v - self.v[vi - 1]) / (self.v[vi] - self.v[vi - 1]);

        let x = x.rem_euclid(self.lx);
        let nx = self.x.len();
        // Cells between consecutive x nodes, plus the wrap-around cell from
        // the last node back to the first (width lx − x_last + x_first).
        let (i0, i1, wx) = if x < self.x[0] || x >= *self.x.last().unwrap() {
            let width = self.lx - self.x[nx - 1] + self.x[0];
            let offset = if x >= *self.x.last().unwrap() { x - self.x[nx - 1] } else { x + self.lx - self.x[nx - 1] };
            (nx - 1, 0, offset / width)
        } else {
            let hi = self.x.partition_point(|&node| node <= x).min(nx - 1).max(1);
            let w = (x - self.x[hi - 1]) / (self.x[hi] - self.x[hi - 1]);
            (hi - 1, hi, w)
        };
        let lerp_v = |col: usize| self.values[col][vi - 1] * (1.0 - wv) + self.values[col][vi] * wv;
        lerp_v(i0) * (1.0 - wx) + lerp_v(i1) * wx
    }
}
