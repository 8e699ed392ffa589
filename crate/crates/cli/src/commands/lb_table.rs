//! `lb-table`: print the eigenvalue spectrum of a collisional stabilization
//! operator as CSV rows with a short explanatory header.

use crate::{CliError, CliResult, LbTableArgs};
use hermite_kinetics::{BasisKind, LbOperator};

pub fn parse_basis(s: &str) -> CliResult<BasisKind> {
    match s {
        "aw" => Ok(BasisKind::Aw),
        "sw" => Ok(BasisKind::Sw),
        other => Err(CliError::Validation(format!(
            "unknown basis {other:?}; expected \"aw\" or \"sw\""
        ))),
    }
}

pub fn run(args: &LbTableArgs) -> CliResult<()> {
    let kind = parse_basis(&args.basis)?;
    // ν scales every eigenvalue uniformly and is factored out of the table.
    let op = LbOperator::new(kind, args.k, 1.0, args.n_max)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    println!(
        "# lenard-bernstein spectrum: basis={} k={} N={}",
        args.basis, args.k, args.n_max
    );
    println!("# collision term: dC_n/dt += -nu*|lambda_n|*C_n; rows with lambda_n=0 are undamped");
    match op.annihilated_moments() {
        Ok(moments) => {
            let list: Vec<String> = moments.iter().map(|m| m.to_string()).collect();
            println!("# annihilated velocity moments: {}", list.join(","));
        }
        Err(_) => {
            println!("# velocity moments are not representable in this weighting; no moment statement applies");
        }
    }
    println!("n,lambda_n,marker");
    for n in 0..=args.n_max {
        let lambda = op.eigenvalue(n);
        let marker = if !lambda.is_finite() {
            "overflow"
        } else if n < args.k {
            "conserved"
        } else {
            ""
        };
        if lambda.is_finite() {
            println!("{n},{lambda},{marker}");
        } else {
            println!("{n},,{marker}");
        }
    }
    Ok(())
}
