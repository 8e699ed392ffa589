//! `vp`: drive the periodic Vlasov–Poisson system with the implicit
//! midpoint step, writing per-step diagnostics CSV, optional state
//! snapshots, and a conservation summary.
//!
//! Config keys (defaults in parentheses):
//!
//! * `n_max` (32), `m_max` (8) — Hermite and Fourier truncations.
//! * `k` (1), `nu` (1) — stabilization half-order and collision strength.
//! * `dt` — time step; defaults to the damping heuristic 1/(2·nu·N).
//! * `t_final` (1) — run length (additional time when restarting from a
//!   snapshot); the driver takes round(t_final/dt) steps.
//! * `lx` (4π) — spatial period.
//! * `picard_tol` (1e-12), `picard_max` (100) — implicit-step iteration.
//! * `dealias` (`two_thirds`) — `two_thirds` or `none`.
//! * `field_treatment` (`midpoint`) — `midpoint` or `explicit`.
//! * `ic` (`landau`) — `landau` (Maxwellian with a cosine density
//!   perturbation; see `ic_amplitude`, `ic_mode`), `table` (phase-space grid
//!   file at `ic_path`, projected spectrally), or `snapshot` (reload a state
//!   written by a previous run from `ic_path`; resumes at its recorded time).
//! * `ic_amplitude` (0.01), `ic_mode` (1) — the `landau` perturbation.
//! * `snapshot_every` (0 = off) — write the state every that many steps
//!   (plus the initial and final states) under `out/snapshots/`.
//! * `snapshot_format` (`binary`) — `binary` or `text`.

use crate::config::{ConfigMap, Resolved};
use crate::{outdir, snapshot, tables, CliError, CliResult, RunArgs};
use hermite_kinetics::{
    field_max_estimate, hermite_weighted_h, poisson_solve, stability_bounds, vp_record, vp_step,
    CoefficientField, Dealias, FieldTreatment, QuadratureRule, VpConfig,
    NEUTRALITY_WARN_THRESHOLD,
};
use std::path::{Path, PathBuf};

const KEYS: &[&str] = &[
    "n_max",
    "m_max",
    "k",
    "nu",
    "dt",
    "t_final",
    "lx",
    "picard_tol",
    "picard_max",
    "dealias",
    "field_treatment",
    "ic",
    "ic_amplitude",
    "ic_mode",
    "ic_path",
    "snapshot_every",
    "snapshot_format",
];

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn solver(e: impl std::fmt::Display) -> CliError {
    CliError::Solver(e.to_string())
}

enum SnapshotFormat {
    Binary,
    Text,
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let mut map = ConfigMap::from_file(&args.config)?;
    map.apply_overrides(&args.set)?;
    map.ensure_known(KEYS)?;

    let defaults = VpConfig::default();
    let n_max = map.usize_or("n_max", defaults.n_max)?;
    let nu = map.f64_or("nu", defaults.nu)?;
    let dt_default = if nu > 0.0 && nu.is_finite() && n_max > 0 {
        hermite_kinetics::time_step_heuristic(nu, n_max)
    } else {
        defaults.dt
    };
    let dealias_name = map.str_or("dealias", "two_thirds");
    let treatment_name = map.str_or("field_treatment", "midpoint");
    let cfg = VpConfig {
        n_max,
        m_max: map.usize_or("m_max", defaults.m_max)?,
        k: map.usize_or("k", defaults.k)?,
        nu,
        dt: map.f64_or("dt", dt_default)?,
        t_final: map.f64_or("t_final", defaults.t_final)?,
        lx: map.f64_or("lx", defaults.lx)?,
        picard_tol: map.f64_or("picard_tol", defaults.picard_tol)?,
        picard_max: map.usize_or("picard_max", defaults.picard_max)?,
        dealias: dealias_name.parse::<Dealias>().map_err(validation)?,
        field_treatment: treatment_name.parse::<FieldTreatment>().map_err(validation)?,
    };
    cfg.validate().map_err(validation)?;
    let lb = cfg.build_lb().map_err(validation)?;

    // Initial state: built during validation so every failure precedes any
    // write to the output directory.
    let ic = map.str_or("ic", "landau");
    let ic_amplitude = map.f64_or("ic_amplitude", 0.01)?;
    let ic_mode = map.usize_or("ic_mode", 1)?;
    let (state0, t0) = match ic.as_str() {
        "landau" => {
            if !(ic_amplitude >= 0.0 && ic_amplitude.is_finite()) {
                return Err(CliError::Validation(format!(
                    "ic_amplitude must be nonnegative and finite, got {ic_amplitude}"
                )));
            }
            let state = CoefficientField::maxwellian_with_cosine_perturbation(
                cfg.n_max,
                cfg.m_max,
                cfg.lx,
                ic_amplitude,
                ic_mode,
            )
            .map_err(validation)?;
            (state, 0.0)
        }
        "table" => {
            let path = map.require_str("ic_path")?.to_string();
            let table = tables::PhaseSpaceTable::load(Path::new(&path), cfg.lx)?;
            let x_samples = (4 * cfg.m_max + 2).max(64);
            let quad = QuadratureRule::gauss_hermite(2 * cfg.n_max + 32).map_err(validation)?;
            let state = CoefficientField::from_function(
                cfg.n_max,
                cfg.m_max,
                cfg.lx,
                x_samples,
                &quad,
                |x, v| table.eval(x, v),
            )
            .map_err(validation)?;
            (state, 0.0)
        }
        "snapshot" => {
            let path = map.require_str("ic_path")?.to_string();
            let snap = snapshot::load(Path::new(&path))?;
            if snap.field.n_max() != cfg.n_max
                || snap.field.m_max() != cfg.m_max
                || snap.field.lx() != cfg.lx
            {
                return Err(CliError::Validation(format!(
                    "snapshot {path} has n_max = {}, m_max = {}, lx = {}, but the config requires n_max = {}, m_max = {}, lx = {}",
                    snap.field.n_max(),
                    snap.field.m_max(),
                    snap.field.lx(),
                    cfg.n_max,
                    cfg.m_max,
                    cfg.lx
                )));
            }
            (snap.field, snap.t)
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown ic {other:?}; expected \"landau\", \"table\", or \"snapshot\""
            )))
        }
    };

    let snapshot_every = map.usize_or("snapshot_every", 0)?;
    let format_name = map.str_or("snapshot_format", "binary");
    let snapshot_format = match format_name.as_str() {
        "binary" => SnapshotFormat::Binary,
        "text" => SnapshotFormat::Text,
        other => {
            return Err(CliError::Validation(format!(
                "unknown snapshot_format {other:?}; expected \"binary\" or \"text\""
            )))
        }
    };

    // Validation is complete; now the output directory may be touched.
    outdir::prepare(&args.out, args.force)?;
    let mut resolved = Resolved::default();
    resolved.put("n_max", cfg.n_max);
    resolved.put("m_max", cfg.m_max);
    resolved.put("k", cfg.k);
    resolved.put("nu", cfg.nu);
    resolved.put("dt", cfg.dt);
    resolved.put("t_final", cfg.t_final);
    resolved.put("lx", cfg.lx);
    resolved.put("picard_tol", cfg.picard_tol);
    resolved.put("picard_max", cfg.picard_max);
    resolved.put("dealias", cfg.dealias);
    resolved.put("field_treatment", cfg.field_treatment);
    resolved.put("ic", &ic);
    match ic.as_str() {
        "landau" => {
            resolved.put("ic_amplitude", ic_amplitude);
            resolved.put("ic_mode", ic_mode);
        }
        _ => resolved.put("ic_path", map.require_str("ic_path")?),
    }
    resolved.put("snapshot_every", snapshot_every);
    resolved.put("snapshot_format", &format_name);
    outdir::write_manifest(&args.out, "vp", args.seed, args.deterministic, &resolved)?;

    let start = poisson_solve(&state0.density_row(), cfg.lx).map_err(solver)?;
    if start.neutrality_defect > NEUTRALITY_WARN_THRESHOLD {
        eprintln!(
            "warning: initial density is not charge-neutral (defect {:.3e}); the uniform background subtracts only the nominal unit density",
            start.neutrality_defect
        );
    }
    let h0 = hermite_weighted_h(&state0);
    let m0 = field_max_estimate(&start.field, h0).map_err(solver)?.direct;
    let bounds = stability_bounds(m0.max(f64::MIN_POSITIVE), cfg.nu, cfg.n_max).map_err(solver)?;
    let dt_cap = bounds.dt_visc.min(bounds.dt_spec);
    if cfg.dt > dt_cap {
        eprintln!(
            "advisory: dt = {} exceeds the stability bounds for the initial field (dt_visc = {}, dt_spec = {}); consider nu >= {}",
            cfg.dt, bounds.dt_visc, bounds.dt_spec, bounds.nu_suggested
        );
    }

    let steps = cfg.step_count();
    let snap_dir = args.out.join("snapshots");
    let write_snap = |step: usize, state: &CoefficientField, t: f64| -> CliResult<PathBuf> {
        std::fs::create_dir_all(&snap_dir)
            .map_err(|e| CliError::Solver(format!("cannot create {}: {e}", snap_dir.display())))?;
        let path = match snapshot_format {
            SnapshotFormat::Binary => snap_dir.join(format!("snapshot_{step:06}.bin")),
            SnapshotFormat::Text => snap_dir.join(format!("snapshot_{step:06}.txt")),
        };
        match snapshot_format {
            SnapshotFormat::Binary => snapshot::write_binary(&path, state, t)?,
            SnapshotFormat::Text => snapshot::write_text(&path, state, t)?,
        }
        Ok(path)
    };

    let mut csv: Vec<u8> = Vec::new();
    hermite_kinetics::write_vp_csv_header(&mut csv).map_err(solver)?;
    let mut records = Vec::with_capacity(steps + 1);
    let first = vp_record(0, t0, &state0, &start.field, 0, cfg.nu).map_err(solver)?;
    hermite_kinetics::write_vp_csv_row(&mut csv, &first).map_err(solver)?;
    records.push(first);
    if snapshot_every > 0 {
        write_snap(0, &state0, t0)?;
    }

    let mut state = state0;
    for step in 1..=steps {
        let (next, field, stats) = vp_step(&state, &cfg, Some(&lb)).map_err(solver)?;
        state = next;
        let t = t0 + step as f64 * cfg.dt;
        let rec = vp_record(step, t, &state, &field, stats.iterations, cfg.nu).map_err(solver)?;
        hermite_kinetics::write_vp_csv_row(&mut csv, &rec).map_err(solver)?;
        records.push(rec);
        if snapshot_every > 0 && (step % snapshot_every == 0 || step == steps) {
            write_snap(step, &state, t)?;
        }
    }
    let csv = String::from_utf8(csv).expect("CSV writers emit UTF-8");
    outdir::write_file(&args.out.join("diagnostics.csv"), &csv)?;

    let summary = hermite_kinetics::summarize(&records)
        .expect("run always has the initial record");
    outdir::write_file(&args.out.join("summary.json"), &(summary.render_text() + "\n"))?;

    println!(
        "vp: {} steps to t = {} written to {}",
        steps,
        t0 + steps as f64 * cfg.dt,
        args.out.display()
    );
    Ok(())
}
