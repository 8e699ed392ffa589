//! 1-D model problem: velocity advection ∂f/∂t − ∂f/∂v = −(−1)ᵏ ν L*ᵏLᵏ f.
//!
//! Expanding f in either Hermite family turns the PDE into a linear ODE system
//! for the coefficients (polynomial convention; C₋₁ and C_{N+1} read as 0 —
//! Galerkin truncation closure):
//!
//! ```text
//! SW:  dCₙ/dt = (n+1)C_{n+1} − ½C_{n−1} − νΛₙCₙ          (n = 0..N)
//! AW:  dC₀/dt = 0,  dCₙ/dt = −C_{n−1} − νΛₙCₙ            (n = 1..N)
//! ```
//!
//! with Λₙ the dissipation magnitudes from [`crate::lb`] (zero when no
//! stabilization is attached). The SW n = 0 equation is dC₀/dt = C₁: the
//! lowest SW mode is not invariant under advection, and the full SW system in
//! the normalized convention is antisymmetric — which is exactly why the SW
//! weighted norm is conserved. The AW pure-advection system is nilpotent
//! lower-triangular: coefficients grow polynomially in t, the signature
//! filamentation of the unstabilized expansion.
//!
//! Two exact solutions provide oracle values: the drifting Gaussians
//! f = e^{−(v+t)²/2} (SW) and f = e^{−(v+t)²} (AW), whose projections have the
//! closed normalized-coefficient forms implemented by [`exact_coeffs_sw`] and
//! [`exact_coeffs_aw`]. For the k = 1 stabilized AW system the coefficients
//! are finite combinations of e^{−ℓνt}, implemented by [`closed_form_aw`].

use crate::basis::{BasisKind, CoefficientVector, Convention};
use crate::error::{Error, Result};
use crate::lb::LbOperator;

/// The 1-D advection model: basis family, optional stabilization, and initial
/// coefficients.
#[derive(Debug, Clone)]
pub struct AdvectionSystem {
    basis_kind: BasisKind,
    n_max: usize,
    lb: Option<LbOperator>,
    initial: CoefficientVector,
}

impl AdvectionSystem {
    /// Builds the system. When `lb` is present its family and truncation must
    /// match the initial coefficients'.
    pub fn new(initial: CoefficientVector, lb: Option<LbOperator>) -> Result<Self> {
        let basis_kind = initial.basis().kind();
        let n_max = initial.n_max();
        if let Some(op) = &lb {
            if op.basis_kind() != basis_kind || op.n_max() != n_max {
                return Err(Error::BasisMismatch {
                    expected: basis_kind,
                    expected_n: n_max,
                    got: op.basis_kind(),
                    got_n: op.n_max(),
                });
            }
        }
        Ok(Self {
            basis_kind,
            n_max,
            lb,
            initial,
        })
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lb(&self) -> Option<&LbOperator> {
        self.lb.as_ref()
    }

    pub fn initial(&self) -> &CoefficientVector {
        &self.initial
    }

    /// Time derivative of the coefficient vector (dispatches on the family).
    pub fn rhs(&self, c: &CoefficientVector) -> Result<CoefficientVector> {
        match self.basis_kind {
            BasisKind::Sw => rhs_sw(c, self.lb.as_ref()),
            BasisKind::Aw => rhs_aw(c, self.lb.as_ref()),
        }
    }
}

/// SW advection right-hand side: dCₙ/dt = (n+1)C_{n+1} − ½C_{n−1} − νΛₙCₙ.
///
/// The recursion holds for n = 0 too (the C_{n−1} term drops out, leaving
/// dC₀/dt = C₁). C_{N+1} is read as zero (Galerkin truncation closure).
/// Input may be in either convention; the derivative is returned in the same
/// convention.
pub fn rhs_sw(c: &CoefficientVector, lb: Option<&LbOperator>) -> Result<CoefficientVector> {
    if c.basis().kind() != BasisKind::Sw {
        return Err(Error::UnsupportedBasis {
            operation: "rhs_sw",
            got: c.basis().kind(),
        });
    }
    if let Some(op) = lb {
        check_lb(c, op)?;
    }
    let convention = c.convention();
    let poly = c.to_convention(Convention::PolynomialC);
    let n_max = poly.n_max();
    let v = poly.values();
    let mut out = vec![0.0; n_max + 1];
    for n in 0..=n_max {
        let feed_up = if n < n_max { (n + 1) as f64 * v[n + 1] } else { 0.0 };
        let feed_down = if n > 0 { 0.5 * v[n - 1] } else { 0.0 };
        let decay = lb.map_or(0.0, |op| op.nu() * op.magnitude(n) * v[n]);
        out[n] = feed_up - feed_down - decay;
    }
    let d = CoefficientVector::new(poly.basis().clone(), Convention::PolynomialC, out)?;
    Ok(d.to_convention(convention))
}

/// AW advection right-hand side: dC₀/dt = 0 and, for n ≥ 1,
/// dCₙ/dt = −C_{n−1} − νΛₙCₙ (Λ from the attached stabilization, else 0).
///
/// Input may be in either convention; the derivative is returned in the same
/// convention.
pub fn rhs_aw(c: &CoefficientVector, lb: Option<&LbOperator>) -> Result<CoefficientVector> {
    if c.basis().kind() != BasisKind::Aw {
        return Err(Error::UnsupportedBasis {
            operation: "rhs_aw",
            got: c.basis().kind(),
        });
    }
    if let Some(op) = lb {
        check_lb(c, op)?;
    }
    let convention = c.convention();
    let poly = c.to_convention(Convention::PolynomialC);
    let n_max = poly.n_max();
    let v = poly.values();
    let mut out = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let decay = lb.map_or(0.0, |op| op.nu() * op.magnitude(n) * v[n]);
        out[n] = -v[n - 1] - decay;
    }
    let d = CoefficientVector::new(poly.basis().clone(), Convention::PolynomialC, out)?;
    Ok(d.to_convention(convention))
}

fn check_lb(c: &CoefficientVector, op: &LbOperator) -> Result<()> {
    if op.basis_kind() != c.basis().kind() || op.n_max() != c.n_max() {
        return Err(Error::BasisMismatch {
            expected: c.basis().kind(),
            expected_n: c.n_max(),
            got: op.basis_kind(),
            got_n: op.n_max(),
        });
    }
    Ok(())
}

/// Exact solution of the k = 1 stabilized AW system
/// dCₙ/dt = −C_{n−1} − νnCₙ, as a finite exponential sum
/// Cₙ(t) = Σ_{ℓ=0}^{n} αₗ⁽ⁿ⁾ e^{−ℓνt} with
///
/// ```text
/// α₀⁽⁰⁾ = C₀,₀
/// αₗ⁽ⁿ⁾ = −αₗ⁽ⁿ⁻¹⁾ / (ν(n−ℓ))        for ℓ < n
/// αₙ⁽ⁿ⁾ = Cₙ,₀ − Σ_{ℓ<n} αₗ⁽ⁿ⁾        (initial-condition matching)
/// ```
///
/// In particular C₁(t) = (C₁,₀ + C₀,₀/ν)e^{−νt} − C₀,₀/ν. Only k = 1 has this
/// closed form; other orders return [`Error::UnsupportedOrder`]. The result is
/// returned in the convention of `initial`.
pub fn closed_form_aw(
    initial: &CoefficientVector,
    nu: f64,
    k: usize,
    t: f64,
) -> Result<CoefficientVector> {
    if k != 1 {
        return Err(Error::UnsupportedOrder { k });
    }
    if initial.basis().kind() != BasisKind::Aw {
        return Err(Error::UnsupportedBasis {
            operation: "closed_form_aw",
            got: initial.basis().kind(),
        });
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "closed_form_aw needs positive viscosity (got {nu})"
        )));
    }
    let convention = initial.convention();
    let poly = initial.to_convention(Convention::PolynomialC);
    let n_max = poly.n_max();
    let c0 = poly.values();

    // alphas[l] holds αₗ⁽ⁿ⁾ of the current degree n.
    let mut alphas = vec![0.0_f64; n_max + 1];
    alphas[0] = c0[0];
    let mut values = vec![0.0; n_max + 1];
    values[0] = c0[0]; // C₀(t) = C₀,₀ for all t
    for n in 1..=n_max {
        // Carry αₗ⁽ⁿ⁻¹⁾ → αₗ⁽ⁿ⁾ for ℓ < n (descending order not needed: the
        // update for slot ℓ only reads slot ℓ of the previous degree).
        let mut partial_sum = 0.0;
        for l in 0..n {
            alphas[l] = -alphas[l] / (nu * (n - l) as f64);
            partial_sum += alphas[l];
        }
        alphas[n] = c0[n] - partial_sum;
        values[n] = alphas[..=n]
            .iter()
            .enumerate()
            .map(|(l, &a)| a * (-(l as f64) * nu * t).exp())
            .sum();
    }
    let out = CoefficientVector::new(poly.basis().clone(), Convention::PolynomialC, values)?;
    Ok(out.to_convention(convention))
}

/// Normalized coefficients of the exact SW advection solution
/// f(v, t) = e^{−(v+t)²/2}:
///
/// ```text
/// Cₙ*(t) = √π 2ⁿ γₙ^{SW} (−t/2)ⁿ e^{−t²/4}
/// ```
///
/// so C₀*(0) = π^{1/4}. Evaluated by running products (no factorials).
pub fn exact_coeffs_sw(t: f64, n: usize) -> f64 {
    // Ratio between consecutive degrees: 2·(γₙ/γₙ₋₁)·(−t/2) = −t/√(2n).
    let mut value = std::f64::consts::PI.powf(0.25);
    for j in 1..=n {
        value *= -t / (2.0 * j as f64).sqrt();
    }
    value * (-t * t / 4.0).exp()
}

/// Normalized coefficients of the exact AW advection solution
/// f(v, t) = e^{−(v+t)²}:
///
/// ```text
/// Cₙ*(t) = √π 2ⁿ γ̃ₙ^{AW} (−t)ⁿ = (−t)ⁿ √(π 2ⁿ/n!)
/// ```
///
/// so C₀*(0) = √π. The dual normalization γ̃ₙ appears because the projection
/// integral ∫ e^{−(v+t)²} Hₙ(v) dv = √π (−2t)ⁿ gives polynomial coefficients
/// Cₙ = (−t)ⁿ/n!, and Cₙ* = Cₙ/γₙ^{AW} = √π 2ⁿ γ̃ₙ^{AW} (−t)ⁿ.
pub fn exact_coeffs_aw(t: f64, n: usize) -> f64 {
    // Ratio between consecutive degrees: 2·(γ̃ₙ/γ̃ₙ₋₁)·(−t) = −t·√(2/n).
    let mut value = std::f64::consts::PI.sqrt();
    for j in 1..=n {
        value *= -t * (2.0 / j as f64).sqrt();
    }
    value
}
