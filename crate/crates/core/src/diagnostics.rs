//! Conserved-quantity diagnostics, per-step records, and CSV/summary output.
//!
//! # Velocity moments
//!
//! Physical moments of an asymmetrically-weighted expansion reduce to sparse
//! linear functionals of the coefficients: with f = Σ Cₙ Hₙ e^{−v²},
//!
//! ```text
//! ∫ vᵐ f dv = Σₙ Cₙ·T_m[n],     T_m[n] = ∫ vᵐ Hₙ e^{−v²} dv,
//! ```
//!
//! and the overlap table follows from v·Hₙ = n H_{n−1} + ½H_{n+1}:
//!
//! ```text
//! T_0[n] = √π δ_{n,0},        T_m[n] = n·T_{m−1}[n−1] + ½·T_{m−1}[n+1].
//! ```
//!
//! Only degrees n ≤ m with matching parity contribute, which is why damping
//! operators whose kernel spans degrees 0..k−1 conserve the first k moments
//! exactly. Symmetrically-weighted expansions have no such finite
//! representation of plain moments (their natural invariants carry an extra
//! e^{−v²/2} weight), so moment requests on SW data are rejected rather than
//! silently misinterpreted.
//!
//! For space-dependent states, integrating e^{iκ_m x} over the period kills
//! every mode but m = 0, so field moments are L_x times the m = 0 row's
//! moment.

use crate::basis::{weighted_norm_sq, BasisKind, CoefficientVector, Convention};
use crate::error::{Error, Result};
use crate::trapezoid::{stability_norm_y, StabilityWeights};
use crate::vlasov::{
    field_max_estimate, gauss_residual, stability_bounds, CoefficientField, ElectricField,
};
use std::f64::consts::PI;
use std::io::{self, Write};

/// Overlap table T_m[n] = ∫ vᵐ Hₙ e^{−v²} dv for n = 0..n_max.
pub fn moment_overlaps(order: usize, n_max: usize) -> Vec<f64> {
    // Pad the working length so truncation at the top never reaches the
    // degrees we return: each recursion step consumes one index from above.
    let len = n_max + order + 2;
    let mut table = vec![0.0_f64; len];
    table[0] = PI.sqrt();
    for _ in 0..order {
        let mut next = vec![0.0_f64; len];
        for (n, slot) in next.iter_mut().enumerate() {
            let lower = if n > 0 { n as f64 * table[n - 1] } else { 0.0 };
            let upper = if n + 1 < len { 0.5 * table[n + 1] } else { 0.0 };
            *slot = lower + upper;
        }
        table = next;
    }
    table.truncate(n_max + 1);
    table
}

/// m-th velocity moment ∫ vᵐ f dv of a single asymmetrically-weighted
/// coefficient vector. Errors with [`Error::UnsupportedBasis`] for SW input.
pub fn velocity_moment(c: &CoefficientVector, order: usize) -> Result<f64> {
    if c.basis().kind() != BasisKind::Aw {
        return Err(Error::UnsupportedBasis {
            operation: "velocity moment",
            got: c.basis().kind(),
        });
    }
    let poly = c.to_convention(Convention::PolynomialC);
    let table = moment_overlaps(order, c.n_max());
    Ok(poly
        .values()
        .iter()
        .zip(&table)
        .map(|(cv, t)| cv * t)
        .sum())
}

/// m-th phase-space moment ∫∫ vᵐ f dv dx of a Fourier–Hermite state:
/// L_x times the moment of the spatially-uniform (m = 0) component.
pub fn moment(state: &CoefficientField, order: usize) -> Result<f64> {
    let table = moment_overlaps(order, state.n_max());
    let row = state.mode_coefficients(0);
    Ok(state.lx()
        * row
            .iter()
            .zip(&table)
            .map(|(c, t)| c.re * t)
            .sum::<f64>())
}

/// Weighted squared norm 𝓗 = ∫∫ f² e^{+v²} dv dx
/// = L_x·Σ_{m,n} |Ĉ_{m,n}|²·√π·2ⁿ·n!, the Lyapunov functional of the
/// stabilized dynamics and the norm entering the a-priori field bound.
pub fn hermite_weighted_h(state: &CoefficientField) -> f64 {
    let mut total = 0.0;
    for m in -(state.m_max() as i64)..=state.m_max() as i64 {
        let row = state.mode_coefficients(m);
        for (n, c) in row.iter().enumerate() {
            total += c.norm_sqr() * state.basis().norm_sq(n);
        }
    }
    state.lx() * total
}

/// Electrostatic energy ½∫E² dx = (L_x/2)·Σ_m |Ê_m|² (Parseval).
pub fn field_energy(field: &ElectricField) -> f64 {
    0.5 * field.lx() * field.modes().iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// Per-step diagnostics of a Vlasov–Poisson run.
#[derive(Debug, Clone)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    /// ∫∫ f (should be invariant for every k).
    pub mass: f64,
    /// ∫∫ v f (invariant for k ≥ 2).
    pub momentum: f64,
    /// ∫∫ v² f (its sum with 2·field_energy is invariant for k ≥ 3).
    pub moment2: f64,
    /// ½∫E².
    pub field_energy: f64,
    /// Worst per-mode Gauss-law residual of the recorded field.
    pub gauss_residual: f64,
    /// Weighted norm 𝓗.
    pub weighted_l2: f64,
    /// Damped-advection stability functional, when one applies (not used by
    /// Vlasov–Poisson records).
    pub stability_y: Option<f64>,
    /// Field amplitude 𝓜 = max|2E| (direct estimate).
    pub m_field: f64,
    /// Picard sweeps the step took.
    pub picard_iterations: usize,
    /// Advisory damping-limited step bound 16ν/𝓜².
    pub dt_visc: f64,
    /// Advisory resolution-limited step bound 4/(𝓜√(2N)).
    pub dt_spec: f64,
}

impl DiagnosticsRecord {
    /// Twice the total energy: second moment plus twice the field energy.
    pub fn total_energy(&self) -> f64 {
        self.moment2 + 2.0 * self.field_energy
    }
}

/// Assembles the full record for one Vlasov–Poisson step. `nu` feeds the
/// advisory time-step bounds. Fails with [`Error::NonFinite`] if any
/// diagnostic is not a finite number — a blown-up run should fail loudly, not
/// write NaN rows.
pub fn vp_record(
    step: usize,
    t: f64,
    state: &CoefficientField,
    field: &ElectricField,
    picard_iterations: usize,
    nu: f64,
) -> Result<DiagnosticsRecord> {
    let weighted_l2 = hermite_weighted_h(state);
    let m_field = field_max_estimate(field, weighted_l2)?.direct;
    let bounds = stability_bounds(m_field, nu, state.n_max().max(1))?;
    let record = DiagnosticsRecord {
        step,
        t,
        mass: moment(state, 0)?,
        momentum: moment(state, 1)?,
        moment2: moment(state, 2)?,
        field_energy: field_energy(field),
        gauss_residual: gauss_residual(&state.density_row(), field)?,
        weighted_l2,
        stability_y: None,
        m_field,
        picard_iterations,
        dt_visc: bounds.dt_visc,
        dt_spec: bounds.dt_spec,
    };
    // Infinite advisory bounds (quiescent field) are legitimate; everything
    // else must be finite.
    let finite = [
        record.t,
        record.mass,
        record.momentum,
        record.moment2,
        record.field_energy,
        record.gauss_residual,
        record.weighted_l2,
        record.m_field,
    ];
    if finite.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!(
            "diagnostics at step {step} contain non-finite values"
        )));
    }
    Ok(record)
}

/// Per-step diagnostics of a damped-advection run.
#[derive(Debug, Clone)]
pub struct AdvectRecord {
    pub step: usize,
    pub t: f64,
    /// Weighted squared norm of the coefficient vector.
    pub weighted_l2: f64,
    /// Stability functional Y (AW runs with weights available).
    pub stability_y: Option<f64>,
    /// Polynomial-convention coefficients C_0..C_N.
    pub coefficients: Vec<f64>,
}

/// Assembles the record for one advection step.
pub fn advect_record(
    step: usize,
    t: f64,
    c: &CoefficientVector,
    weights: Option<&StabilityWeights>,
) -> Result<AdvectRecord> {
    let weighted_l2 = weighted_norm_sq(c);
    let stability_y = weights.map(|w| stability_norm_y(c, w));
    let poly = c.to_convention(Convention::PolynomialC);
    if !weighted_l2.is_finite() || poly.values().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!(
            "diagnostics at step {step} contain non-finite values"
        )));
    }
    Ok(AdvectRecord {
        step,
        t,
        weighted_l2,
        stability_y,
        coefficients: poly.values().to_vec(),
    })
}

const VP_SCHEMA: &str = "# schema: vp-diagnostics/1";
const ADVECT_SCHEMA: &str = "# schema: advect-diagnostics/1";

/// Writes the schema comment and column header of a Vlasov–Poisson
/// diagnostics CSV.
pub fn write_vp_csv_header(w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{VP_SCHEMA}")?;
    writeln!(
        w,
        "step,t,mass,momentum,moment2,field_energy,gauss_residual,picard_iters,m_field,dt_visc,dt_spec"
    )
}

/// Writes one Vlasov–Poisson CSV row.
pub fn write_vp_csv_row(w: &mut impl Write, r: &DiagnosticsRecord) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.step,
        r.t,
        r.mass,
        r.momentum,
        r.moment2,
        r.field_energy,
        r.gauss_residual,
        r.picard_iterations,
        r.m_field,
        r.dt_visc,
        r.dt_spec
    )
}

/// Writes the schema comment and column header of an advection diagnostics
/// CSV (one coefficient column per Hermite degree).
pub fn write_advect_csv_header(w: &mut impl Write, n_max: usize) -> io::Result<()> {
    writeln!(w, "{ADVECT_SCHEMA}")?;
    write!(w, "step,t,weighted_l2,stability_y")?;
    for n in 0..=n_max {
        write!(w, ",c_{n}")?;
    }
    writeln!(w)
}

/// Writes one advection CSV row. An absent stability functional leaves its
/// cell empty.
pub fn write_advect_csv_row(w: &mut impl Write, r: &AdvectRecord) -> io::Result<()> {
    write!(w, "{},{},{},", r.step, r.t, r.weighted_l2)?;
    if let Some(y) = r.stability_y {
        write!(w, "{y}")?;
    }
    for c in &r.coefficients {
        write!(w, ",{c}")?;
    }
    writeln!(w)
}

/// First/last/extreme values and drift of one tracked quantity.
#[derive(Debug, Clone, Copy)]
pub struct QuantitySummary {
    pub first: f64,
    pub last: f64,
    pub min: f64,
    pub max: f64,
    /// max_j |x_j − x_0|.
    pub max_abs_drift: f64,
    /// max_abs_drift scaled by max(1, |x_0|).
    pub relative_drift: f64,
}

impl QuantitySummary {
    fn of(values: impl Iterator<Item = f64>) -> Option<Self> {
        let mut out: Option<QuantitySummary> = None;
        for x in values {
            out = Some(match out {
                None => QuantitySummary {
                    first: x,
                    last: x,
                    min: x,
                    max: x,
                    max_abs_drift: 0.0,
                    relative_drift: 0.0,
                },
                Some(mut s) => {
                    s.last = x;
                    s.min = s.min.min(x);
                    s.max = s.max.max(x);
                    s.max_abs_drift = s.max_abs_drift.max((x - s.first).abs());
                    s.relative_drift = s.max_abs_drift / s.first.abs().max(1.0);
                    s
                }
            });
        }
        out
    }
}

/// Whole-run conservation summary.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    pub mass: QuantitySummary,
    pub momentum: QuantitySummary,
    pub moment2: QuantitySummary,
    pub field_energy: QuantitySummary,
    /// moment2 + 2·field_energy (twice the total energy).
    pub total_energy: QuantitySummary,
    pub gauss_residual_max: f64,
    pub picard_iterations_max: usize,
}

/// Reduces a record sequence to its conservation summary. Empty input has no
/// summary.
pub fn summarize(records: &[DiagnosticsRecord]) -> Option<RunSummary> {
    let last = records.last()?;
    Some(RunSummary {
        steps: last.step,
        t_final: last.t,
        mass: QuantitySummary::of(records.iter().map(|r| r.mass))?,
        momentum: QuantitySummary::of(records.iter().map(|r| r.momentum))?,
        moment2: QuantitySummary::of(records.iter().map(|r| r.moment2))?,
        field_energy: QuantitySummary::of(records.iter().map(|r| r.field_energy))?,
        total_energy: QuantitySummary::of(records.iter().map(|r| r.total_energy()))?,
        gauss_residual_max: records.iter().map(|r| r.gauss_residual).fold(0.0, f64::max),
        picard_iterations_max: records.iter().map(|r| r.picard_iterations).max()?,
    })
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "null".to_string()
    }
}

fn json_quantity(q: &QuantitySummary) -> String {
    format!(
        "{{\"first\":{},\"last\":{},\"min\":{},\"max\":{},\"max_abs_drift\":{},\"relative_drift\":{}}}",
        json_number(q.first),
        json_number(q.last),
        json_number(q.min),
        json_number(q.max),
        json_number(q.max_abs_drift),
        json_number(q.relative_drift)
    )
}

impl RunSummary {
    /// Renders the summary as a stable, human-diffable JSON document.
    pub fn render_text(&self) -> String {
        format!(
            "{{\n  \"steps\": {},\n  \"t_final\": {},\n  \"mass\": {},\n  \"momentum\": {},\n  \"moment2\": {},\n  \"field_energy\": {},\n  \"total_energy\": {},\n  \"gauss_residual_max\": {},\n  \"picard_iterations_max\": {}\n}}\n",
            self.steps,
            json_number(self.t_final),
            json_quantity(&self.mass),
            json_quantity(&self.momentum),
            json_quantity(&self.moment2),
            json_quantity(&self.field_energy),
            json_quantity(&self.total_energy),
            json_number(self.gauss_residual_max),
            self.picard_iterations_max
        )
    }
}
