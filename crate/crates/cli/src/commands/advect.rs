//! `advect`: drive the 1-D velocity-advection model with the implicit
//! trapezoidal integrator, writing per-step diagnostics CSV and a summary.
//!
//! Config keys (defaults in parentheses):
//!
//! * `basis` (`aw`) — `aw` or `sw`.
//! * `n_max` (32) — highest Hermite degree.
//! * `nu` (0) — collision strength; 0 runs collisionless with no
//!   stabilization operator attached.
//! * `k` (1) — stabilization half-order (used only when nu > 0).
//! * `dt` — time step; defaults to the damping heuristic 1/(2·nu·N) when
//!   nu > 0 and to 0.01 (documented fallback) when collisionless.
//! * `t_final` (1) — run length; the driver takes round(t_final/dt) steps.
//! * `ic` (`coefficients`) — `coefficients` (inline list), `table`
//!   (coefficient file, see `ic_path`), or `random` (uniform draw in the
//!   normalized convention; requires `--seed`).
//! * `ic_values` — whitespace/comma-separated plain-convention coefficients
//!   for `ic=coefficients`; shorter lists are zero-padded to N+1.
//! * `ic_path` — coefficient file for `ic=table` (one value per line).
//! * `ic_scale` (1) — half-width of the uniform draw for `ic=random`.

use crate::config::{ConfigMap, Resolved};
use crate::{outdir, tables, CliError, CliResult, RunArgs};
use hermite_kinetics::{
    advect_record, time_step_heuristic, trap_step, AdvectionSystem, BasisKind, CoefficientVector,
    Convention, HermiteBasis, LbOperator, StabilityWeights, TrapState, MAX_TRUNCATION,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const KEYS: &[&str] = &[
    "basis", "n_max", "nu", "k", "dt", "t_final", "ic", "ic_values", "ic_path", "ic_scale",
];

const DEFAULT_COLLISIONLESS_DT: f64 = 0.01;

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::from_file(&args.config)?;
    cfg.apply_overrides(&args.set)?;
    cfg.ensure_known(KEYS)?;

    let basis_name = cfg.str_or("basis", "aw");
    let kind = crate::commands::lb_table::parse_basis(&basis_name)?;
    let n_max = cfg.usize_or("n_max", 32)?;
    if n_max == 0 || n_max > MAX_TRUNCATION {
        return Err(CliError::Validation(format!(
            "n_max must be in 1..={MAX_TRUNCATION}, got {n_max}"
        )));
    }
    let nu = cfg.f64_or("nu", 0.0)?;
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(CliError::Validation(format!(
            "nu must be nonnegative and finite, got {nu}"
        )));
    }
    let k = cfg.usize_or("k", 1)?;
    let dt_default = if nu > 0.0 {
        time_step_heuristic(nu, n_max)
    } else {
        DEFAULT_COLLISIONLESS_DT
    };
    let dt = cfg.f64_or("dt", dt_default)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Validation(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    let t_final = cfg.f64_or("t_final", 1.0)?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(CliError::Validation(format!(
            "t_final must be nonnegative and finite, got {t_final}"
        )));
    }

    let lb = if nu > 0.0 {
        Some(LbOperator::new(kind, k, nu, n_max).map_err(validation)?)
    } else {
        None
    };

    let basis = HermiteBasis::new(kind, n_max).map_err(validation)?;
    let ic = cfg.str_or("ic", "coefficients");
    let ic_scale = cfg.f64_or("ic_scale", 1.0)?;
    let initial: CoefficientVector = match ic.as_str() {
        "coefficients" => {
            let text = cfg.require_str("ic_values")?;
            let mut values: Vec<f64> = Vec::new();
            for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                values.push(tok.parse().map_err(|_| {
                    CliError::Validation(format!("ic_values: `{tok}` is not a number"))
                })?);
            }
            if values.len() > n_max + 1 {
                return Err(CliError::Validation(format!(
                    "ic_values lists {} coefficients but n_max = {n_max} admits only {}",
                    values.len(),
                    n_max + 1
                )));
            }
            values.resize(n_max + 1, 0.0);
            CoefficientVector::new(basis.clone(), Convention::PolynomialC, values)
                .map_err(validation)?
        }
        "table" => {
            let path = cfg.require_str("ic_path")?;
            let mut values = tables::load_coefficients(std::path::Path::new(&path))?;
            if values.len() > n_max + 1 {
                return Err(CliError::Validation(format!(
                    "{path} lists {} coefficients but n_max = {n_max} admits only {}",
                    values.len(),
                    n_max + 1
                )));
            }
            values.resize(n_max + 1, 0.0);
            CoefficientVector::new(basis.clone(), Convention::PolynomialC, values)
                .map_err(validation)?
        }
        "random" => {
            let seed = args.seed.ok_or_else(|| {
                CliError::Validation("ic=random requires --seed for a reproducible draw".into())
            })?;
            if !(ic_scale > 0.0 && ic_scale.is_finite()) {
                return Err(CliError::Validation(format!(
                    "ic_scale must be positive and finite, got {ic_scale}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<f64> = (0..=n_max)
                .map(|_| rng.gen_range(-ic_scale..=ic_scale))
                .collect();
            // Draw in the normalized convention so every mode carries
            // comparable weighted-norm content, then convert.
            CoefficientVector::new(basis.clone(), Convention::NormalizedCstar, values)
                .map_err(validation)?
                .to_convention(Convention::PolynomialC)
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown ic {other:?}; expected \"coefficients\", \"table\", or \"random\""
            )))
        }
    };

    let steps = (t_final / dt).round().max(0.0) as usize;

    outdir::prepare(&args.out, args.force)?;
    let mut resolved = Resolved::default();
    resolved.put("basis", &basis_name);
    resolved.put("n_max", n_max);
    resolved.put("nu", nu);
    if nu > 0.0 {
        resolved.put("k", k);
    }
    resolved.put("dt", dt);
    resolved.put("t_final", t_final);
    resolved.put("ic", &ic);
    match ic.as_str() {
        "coefficients" => resolved.put("ic_values", cfg.require_str("ic_values")?),
        "table" => resolved.put("ic_path", cfg.require_str("ic_path")?),
        "random" => resolved.put("ic_scale", ic_scale),
        _ => unreachable!(),
    }
    outdir::write_manifest(&args.out, "advect", args.seed, args.deterministic, &resolved)?;

    // The decay functional Y is defined for stabilized AW runs of order 2
    // (k = 1); its weights come from the collision strength alone.
    let weights = if kind == BasisKind::Aw && nu > 0.0 && k == 1 {
        Some(StabilityWeights::new(nu, n_max).map_err(validation)?)
    } else {
        None
    };

    let system = AdvectionSystem::new(initial.clone(), lb).map_err(validation)?;
    let mut state = TrapState::new(initial, dt).map_err(validation)?;

    let solver = |e: &dyn std::fmt::Display| CliError::Solver(e.to_string());
    let mut csv: Vec<u8> = Vec::new();
    let mut records = Vec::with_capacity(steps + 1);
    hermite_kinetics::write_advect_csv_header(&mut csv, n_max).map_err(|e| solver(&e))?;
    let first =
        advect_record(0, 0.0, state.coefficients(), weights.as_ref()).map_err(|e| solver(&e))?;
    hermite_kinetics::write_advect_csv_row(&mut csv, &first).map_err(|e| solver(&e))?;
    records.push(first);
    for step in 1..=steps {
        state = trap_step(&state, &system).map_err(|e| solver(&e))?;
        let rec = advect_record(step, state.t(), state.coefficients(), weights.as_ref())
            .map_err(|e| solver(&e))?;
        hermite_kinetics::write_advect_csv_row(&mut csv, &rec).map_err(|e| solver(&e))?;
        records.push(rec);
    }
    let csv = String::from_utf8(csv).expect("CSV writers emit UTF-8");
    outdir::write_file(&args.out.join("diagnostics.csv"), &csv)?;

    let summary = summarize_records(&records);
    outdir::write_file(
        &args.out.join("summary.json"),
        &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    )?;

    println!(
        "advect: {} steps to t = {} written to {}",
        steps,
        steps as f64 * dt,
        args.out.display()
    );
    Ok(())
}

fn quantity_summary(values: impl Iterator<Item = f64> + Clone) -> serde_json::Value {
    let first = values.clone().next().expect("at least the initial record");
    let last = values.clone().last().unwrap();
    let min = values.clone().fold(f64::INFINITY, f64::min);
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let max_abs_drift = values.fold(0.0_f64, |acc, v| acc.max((v - first).abs()));
    json!({
        "first": first,
        "last": last,
        "min": min,
        "max": max,
        "max_abs_drift": max_abs_drift,
        "relative_drift": if first != 0.0 { max_abs_drift / first.abs() } else { max_abs_drift },
    })
}

fn summarize_records(records: &[hermite_kinetics::AdvectRecord]) -> serde_json::Value {
    let last = records.last().expect("at least the initial record");
    let mut out = json!({
        "steps": last.step,
        "t_final": last.t,
        "weighted_l2": quantity_summary(records.iter().map(|r| r.weighted_l2)),
    });
    if records.iter().all(|r| r.stability_y.is_some()) {
        out["stability_y"] = quantity_summary(records.iter().map(|r| r.stability_y.unwrap()));
    }
    out
}
