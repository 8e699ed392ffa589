//! Implicit trapezoidal (Crank–Nicolson) stepping for the 1-D coefficient
//! systems, per-mode amplification factors, and the ν-weighted stability norm.
//!
//! One step of the scheme on dC/dt = A·C reads
//!
//! ```text
//! (Cʲ − Cʲ⁻¹)/Δt = A·(Cʲ + Cʲ⁻¹)/2
//! ```
//!
//! For the AW family A is strictly lower-bidiagonal plus a non-negative
//! diagonal decay, so the update solves by forward substitution in O(N); for
//! the SW family A is tridiagonal and the update solves by a partial-pivoted
//! tridiagonal elimination. Diagonal modes evolve by the amplification factor
//! χₙ = (1 − ½νΛₙΔt)/(1 + ½νΛₙΔt), strictly inside the unit interval for any
//! positive ν, Λₙ, Δt — the scheme is unconditionally stable.
//!
//! The monitored stability functional is Y = Σ_{n≥1} wₙCₙ² − (2/ν²)w₁C₀², with
//! weights defined by the recursion w₁ = 1, w_{n+1} = ν²(n+1)(n−½)wₙ. For
//! initial data with C₀ = 0 the weighted sum Σ wₙ(Cₙʲ)² is non-increasing at
//! every step for every Δt > 0: the underlying operator satisfies the matrix
//! inequality AᵀW + WA ⪯ −(ν/2)W, and a trapezoidal step changes any quadratic
//! form V by Δt·mᵀ(AᵀW + WA)m evaluated at the midpoint m, which is ≤ 0.

use crate::advection::AdvectionSystem;
use crate::basis::{BasisKind, CoefficientVector, Convention};
use crate::error::{Error, Result};
use crate::solver::solve_tridiagonal_f64;

/// State advanced by [`trap_step`]: coefficients plus uniform-step bookkeeping
/// (t = step_index · Δt).
#[derive(Debug, Clone)]
pub struct TrapState {
    c: CoefficientVector,
    dt: f64,
    step_index: usize,
}

impl TrapState {
    pub fn new(initial: CoefficientVector, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive (got {dt})"
            )));
        }
        Ok(Self {
            c: initial,
            dt,
            step_index: 0,
        })
    }

    pub fn coefficients(&self) -> &CoefficientVector {
        &self.c
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn t(&self) -> f64 {
        self.step_index as f64 * self.dt
    }
}

/// Advances one trapezoidal step of the advection system.
///
/// AW update, row by row (forward substitution; Λ from the attached
/// stabilization, 0 without one):
///
/// ```text
/// C₀ʲ = C₀ʲ⁻¹
/// Cₙʲ (1 + ½νΛₙΔt) = Cₙʲ⁻¹ (1 − ½νΛₙΔt) − (Δt/2)(C_{n−1}ʲ + C_{n−1}ʲ⁻¹)
/// ```
///
/// SW systems assemble the tridiagonal update matrix and solve it with
/// partial pivoting. State coefficients are kept in the polynomial
/// convention internally; inputs in the normalized convention are converted
/// on entry and the output restores the input convention.
pub fn trap_step(state: &TrapState, system: &AdvectionSystem) -> Result<TrapState> {
    if system.basis_kind() != state.c.basis().kind() || system.n_max() != state.c.n_max() {
        return Err(Error::BasisMismatch {
            expected: system.basis_kind(),
            expected_n: system.n_max(),
            got: state.c.basis().kind(),
            got_n: state.c.n_max(),
        });
    }
    let convention = state.c.convention();
    let poly = state.c.to_convention(Convention::PolynomialC);
    let dt = state.dt;
    let old = poly.values();
    let n_max = poly.n_max();
    let decay = |n: usize| -> f64 {
        system
            .lb()
            .map_or(0.0, |op| op.nu() * op.magnitude(n))
    };

    let new_values = match system.basis_kind() {
        BasisKind::Aw => {
            let mut new = vec![0.0; n_max + 1];
            new[0] = old[0];
            for n in 1..=n_max {
                let a = 0.5 * decay(n) * dt;
                let denom = 1.0 + a;
                if denom == 0.0 {
                    return Err(Error::SingularUpdate("trapezoidal AW row"));
                }
                new[n] = (old[n] * (1.0 - a) - 0.5 * dt * (new[n - 1] + old[n - 1])) / denom;
            }
            new
        }
        BasisKind::Sw => {
            // A·c rows: (n+1)c_{n+1} − ½c_{n−1} − Λ̃ₙcₙ. Solve
            // (I − (Δt/2)A)·new = (I + (Δt/2)A)·old.
            let mut sub = vec![0.0; n_max + 1]; // entry (n, n−1)
            let mut diag = vec![0.0; n_max + 1];
            let mut sup = vec![0.0; n_max + 1]; // entry (n, n+1)
            let mut rhs = vec![0.0; n_max + 1];
            for n in 0..=n_max {
                let a_sub = if n > 0 { -0.5 } else { 0.0 };
                let a_sup = if n < n_max { (n + 1) as f64 } else { 0.0 };
                let a_diag = -decay(n);
                sub[n] = -0.5 * dt * a_sub;
                diag[n] = 1.0 - 0.5 * dt * a_diag;
                sup[n] = -0.5 * dt * a_sup;
                rhs[n] = old[n] * (1.0 + 0.5 * dt * a_diag)
                    + if n > 0 { 0.5 * dt * a_sub * old[n - 1] } else { 0.0 }
                    + if n < n_max { 0.5 * dt * a_sup * old[n + 1] } else { 0.0 };
            }
            solve_tridiagonal_f64(&sub, &diag, &sup, &rhs)
                .ok_or(Error::SingularUpdate("trapezoidal SW tridiagonal solve"))?
        }
    };
    let c =
        CoefficientVector::new(poly.basis().clone(), Convention::PolynomialC, new_values)?
            .to_convention(convention);
    Ok(TrapState {
        c,
        dt,
        step_index: state.step_index + 1,
    })
}

/// Per-mode amplification factor of the trapezoidal scheme on the k = 1
/// stabilized AW diagonal: χₙ = (1 − ½νnΔt)/(1 + ½νnΔt). Satisfies |χₙ| < 1
/// for every n ≥ 1, ν > 0, Δt > 0.
pub fn chi(n: usize, nu: f64, dt: f64) -> f64 {
    let a = 0.5 * nu * n as f64 * dt;
    (1.0 - a) / (1.0 + a)
}

/// The ν-weighted mode weights wₙ of the stability functional, defined by the
/// recursion w₁ = 1, w_{n+1} = ν²(n+1)(n−½)wₙ (normative definition; a closed
/// form is not used — see the crate README's notes on the weight sequence).
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityWeights {
    nu: f64,
    /// w[i] holds w_{i+1}; weights carry indices 1..=n_max.
    w: Vec<f64>,
}

impl StabilityWeights {
    pub fn new(nu: f64, n_max: usize) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stability weights need positive viscosity (got {nu})"
            )));
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter(
                "stability weights are defined for n ≥ 1".to_string(),
            ));
        }
        let mut w = Vec::with_capacity(n_max);
        let mut wn = 1.0_f64;
        w.push(wn);
        for n in 1..n_max {
            wn *= nu * nu * (n + 1) as f64 * (n as f64 - 0.5);
            if !wn.is_finite() {
                return Err(Error::Overflow {
                    what: format!("stability weight w_{}", n + 1),
                });
            }
            w.push(wn);
        }
        Ok(Self { nu, w })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_max(&self) -> usize {
        self.w.len()
    }

    /// wₙ for 1 ≤ n ≤ n_max.
    pub fn weight(&self, n: usize) -> f64 {
        self.w[n - 1]
    }

    /// Σ_{n≥1} wₙCₙ² over the polynomial-convention coefficients.
    pub fn weighted_sum(&self, c: &CoefficientVector) -> f64 {
        let poly = c.to_convention(Convention::PolynomialC);
        poly.values()
            .iter()
            .enumerate()
            .skip(1)
            .take(self.w.len())
            .map(|(n, &cn)| self.weight(n) * cn * cn)
            .sum()
    }
}

/// The monitored stability functional Y = Σ_{n≥1} wₙCₙ² − (2/ν²)w₁C₀².
///
/// For C₀ = 0 this is the plain weighted sum, non-increasing along
/// trapezoidal trajectories; the C₀ correction makes Y the quantity whose
/// continuous-time decay rate is −ν/2.
pub fn stability_norm_y(c: &CoefficientVector, weights: &StabilityWeights) -> f64 {
    let (sum, correction) = stability_norm_y_parts(c, weights);
    sum - correction
}

/// The two parts of Y: (Σ_{n≥1} wₙCₙ², (2/ν²)w₁C₀²).
pub fn stability_norm_y_parts(
    c: &CoefficientVector,
    weights: &StabilityWeights,
) -> (f64, f64) {
    let poly = c.to_convention(Convention::PolynomialC);
    let c0 = poly.value(0);
    let nu = weights.nu();
    (
        weights.weighted_sum(&poly),
        2.0 / (nu * nu) * weights.weight(1) * c0 * c0,
    )
}

/// Practical step-size choice νNΔt ≈ ½, i.e. Δt = 1/(2νN): large enough that
/// the stabilized high modes are strongly damped per step, small enough to
/// resolve the low-mode dynamics.
pub fn time_step_heuristic(nu: f64, n_max: usize) -> f64 {
    1.0 / (2.0 * nu * n_max as f64)
}
