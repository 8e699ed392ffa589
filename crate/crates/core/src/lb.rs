//! Collisional stabilization operators of order 2k, diagonal on the Hermite
//! modes.
//!
//! Each basis family carries a pair of first-order ladder operators
//!
//! ```text
//! AW: L = ½ ∂/∂v + v𝕀       L* = ∂/∂v
//! SW: L = ∂/∂v + v𝕀          L* = ∂/∂v − v𝕀
//! ```
//!
//! whose k-fold composition L*ᵏLᵏ acts diagonally on the basis functions:
//!
//! ```text
//! AW: L*ᵏLᵏ ψₙ = (−1)ᵏ n!/(n−k)! ψₙ          (0 for n < k)
//! SW: L*ᵏLᵏ ψₙ = (−1)ᵏ 2ᵏ n!/(n−k)! ψₙ      (0 for n < k)
//! ```
//!
//! The stabilized equations add the term −(−1)ᵏ ν L*ᵏLᵏ f to the right-hand
//! side, which multiplies mode n by −ν·Λₙ with Λₙ = (−1)ᵏλₙ = |λₙ| ≥ 0 — a pure
//! decay. Exactly the first k modes are annihilated, which for the AW family
//! translates into exact conservation of the velocity moments of order < k.

use crate::basis::{BasisKind, CoefficientVector};
use crate::error::{Error, Result};

/// Diagonalized dissipation operator: basis family, order parameter k,
/// viscosity ν, and the eigenvalue table λ₀..λ_N of L*ᵏLᵏ.
#[derive(Debug, Clone, PartialEq)]
pub struct LbOperator {
    basis_kind: BasisKind,
    k: usize,
    nu: f64,
    eigenvalues: Vec<f64>,
}

impl LbOperator {
    /// Builds the eigenvalue table for modes 0..=n_max.
    ///
    /// The products n!/(n−k)! are evaluated as running products of k
    /// consecutive integers; [`Error::Overflow`] reports the first mode whose
    /// eigenvalue leaves `f64` range.
    pub fn new(basis_kind: BasisKind, k: usize, nu: f64, n_max: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(
                "dissipation order parameter k must be ≥ 1".to_string(),
            ));
        }
        if !(nu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "viscosity must be positive (got {nu})"
            )));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let family_scale = match basis_kind {
            BasisKind::Aw => 1.0,
            BasisKind::Sw => 2.0_f64.powi(k as i32),
        };
        let mut eigenvalues = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n < k {
                eigenvalues.push(0.0);
                continue;
            }
            // n·(n−1)···(n−k+1)
            let mut falling = 1.0_f64;
            for j in 0..k {
                falling *= (n - j) as f64;
            }
            let lambda = sign * family_scale * falling;
            if !lambda.is_finite() {
                return Err(Error::Overflow {
                    what: format!("dissipation eigenvalue at mode n = {n}, k = {k}"),
                });
            }
            eigenvalues.push(lambda);
        }
        Ok(Self {
            basis_kind,
            k,
            nu,
            eigenvalues,
        })
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_max(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    /// Raw eigenvalue λₙ of L*ᵏLᵏ (sign (−1)ᵏ).
    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.eigenvalues[n]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Decay rate multiplier Λₙ = (−1)ᵏ λₙ = |λₙ| ≥ 0. The stabilized
    /// right-hand side contributes −ν·Λₙ·Cₙ on mode n.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.eigenvalues[n].abs()
    }

    /// Applies the diagonal map Cₙ ↦ λₙCₙ.
    ///
    /// Stated in the normalized convention; the polynomial convention gives the
    /// identical result because a diagonal action commutes with the diagonal
    /// convention rescaling. The output keeps the input's convention.
    pub fn apply(&self, c: &CoefficientVector) -> Result<CoefficientVector> {
        if c.basis().kind() != self.basis_kind || c.n_max() != self.n_max() {
            return Err(Error::BasisMismatch {
                expected: self.basis_kind,
                expected_n: self.n_max(),
                got: c.basis().kind(),
                got_n: c.n_max(),
            });
        }
        let values = c
            .values()
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&cn, &lambda)| lambda * cn)
            .collect();
        CoefficientVector::new(c.basis().clone(), c.convention(), values)
    }

    /// Velocity-moment orders exactly conserved under the stabilized AW
    /// dynamics: {0, 1, ..., k−1}.
    ///
    /// Errors with [`Error::UnsupportedBasis`] for SW, which conserves only
    /// e^{−v²/2}-weighted integrals, not physical moments — an explicit signal
    /// rather than an empty list, so conservation dashboards cannot silently
    /// misread it.
    pub fn annihilated_moments(&self) -> Result<Vec<usize>> {
        match self.basis_kind {
            BasisKind::Aw => Ok((0..self.k).collect()),
            BasisKind::Sw => Err(Error::UnsupportedBasis {
                operation: "annihilated_moments",
                got: BasisKind::Sw,
            }),
        }
    }
}
