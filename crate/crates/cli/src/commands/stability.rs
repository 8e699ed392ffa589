//! `stability-calc`: print the advisory time-step bounds for a field
//! amplitude 𝓜, collision strength ν, and Hermite truncation N.

use crate::{CliResult, CliError, StabilityArgs};
use hermite_kinetics::stability_bounds;

pub fn run(args: &StabilityArgs) -> CliResult<()> {
    let bounds = stability_bounds(args.m_field, args.nu, args.n_max)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    println!("dt_visc={}", bounds.dt_visc);
    println!("dt_spec={}", bounds.dt_spec);
    println!("nu_suggested={}", bounds.nu_suggested);
    Ok(())
}
