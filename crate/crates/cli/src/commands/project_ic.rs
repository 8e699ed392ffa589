//! `project-ic`: project a velocity profile onto a Hermite basis and write
//! the coefficient list (plain convention, one value per line) plus the run
//! manifest. The output file is directly consumable by `advect ic=table`.

use crate::commands::lb_table::parse_basis;
use crate::config::{ConfigMap, Resolved};
use crate::tables::VelocityProfile;
use crate::{outdir, CliError, CliResult, RunArgs};
use hermite_kinetics::{project, HermiteBasis, QuadratureRule, MAX_TRUNCATION};
use std::fmt::Write as _;

const KEYS: &[&str] = &["basis", "n_max", "source", "shift", "path", "quad_points"];

pub fn run(args: &RunArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::from_file(&args.config)?;
    cfg.apply_overrides(&args.set)?;
    cfg.ensure_known(KEYS)?;

    let basis_name = cfg.str_or("basis", "aw");
    let kind = parse_basis(&basis_name)?;
    let n_max = cfg.require_usize("n_max")?;
    if n_max == 0 || n_max > MAX_TRUNCATION {
        return Err(CliError::Validation(format!(
            "n_max must be in 1..={MAX_TRUNCATION}, got {n_max}"
        )));
    }
    let source = cfg.str_or("source", "gaussian_shift");
    let shift = cfg.f64_or("shift", 0.0)?;
    if !shift.is_finite() {
        return Err(CliError::Validation(format!("shift must be finite, got {shift}")));
    }
    let quad_points = cfg.usize_or("quad_points", 2 * n_max + 32)?;
    if quad_points <= n_max {
        return Err(CliError::Validation(format!(
            "quad_points ({quad_points}) must exceed n_max ({n_max}) for a well-posed projection"
        )));
    }

    // The profile to project, loaded during validation so failures precede
    // any filesystem writes.
    enum Source {
        GaussianShift(f64),
        Table(VelocityProfile),
    }
    let profile = match source.as_str() {
        "gaussian_shift" => Source::GaussianShift(shift),
        "table" => {
            let path = cfg.require_str("path")?;
            Source::Table(VelocityProfile::load(std::path::Path::new(&path))?)
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown source {other:?}; expected \"gaussian_shift\" or \"table\""
            )))
        }
    };

    let basis = HermiteBasis::new(kind, n_max).map_err(|e| CliError::Validation(e.to_string()))?;
    let quad =
        QuadratureRule::gauss_hermite(quad_points).map_err(|e| CliError::Validation(e.to_string()))?;

    outdir::prepare(&args.out, args.force)?;
    let mut resolved = Resolved::default();
    resolved.put("basis", &basis_name);
    resolved.put("n_max", n_max);
    resolved.put("source", &source);
    if let Source::GaussianShift(u) = &profile {
        resolved.put("shift", u);
    }
    if let Some(path) = cfg.get_str("path") {
        resolved.put("path", path);
    }
    resolved.put("quad_points", quad_points);
    outdir::write_manifest(&args.out, "project-ic", args.seed, args.deterministic, &resolved)?;

    let coeffs = match &profile {
        Source::GaussianShift(u) => {
            let u = *u;
            project(move |v| (-(v - u) * (v - u)).exp(), &basis, &quad)
        }
        Source::Table(table) => project(|v| table.eval(v), &basis, &quad),
    }
    .map_err(|e| CliError::Solver(e.to_string()))?;

    let mut out = String::new();
    let _ = writeln!(out, "# hermite coefficients, plain convention, one per line (n = 0..{n_max})");
    let _ = writeln!(out, "# basis {basis_name}");
    for c in coeffs.values() {
        let _ = writeln!(out, "{c}");
    }
    let path = args.out.join("coefficients.txt");
    outdir::write_file(&path, &out)?;
    println!("wrote {} coefficients to {}", n_max + 1, path.display());
    Ok(())
}
