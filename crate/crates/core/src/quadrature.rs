//! Gauss–Hermite quadrature for integrals against the weight e^{−v²}.
//!
//! Nodes and weights come from the Golub–Welsch construction: the recurrence
//! coefficients of the (monic) Hermite orthogonal-polynomial family form a
//! symmetric tridiagonal Jacobi matrix with zero diagonal and off-diagonal
//! entries βᵢ = √(i/2); its eigenvalues are the quadrature nodes and the
//! squared first components of the normalized eigenvectors, scaled by
//! μ₀ = ∫ e^{−v²} dv = √π, are the weights. A Q-point rule integrates
//! v^p e^{−v²} exactly for every p ≤ 2Q − 1.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// A Gauss–Hermite rule: ∫ g(v) e^{−v²} dv ≈ Σᵢ wᵢ g(vᵢ).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the Q-point Gauss–Hermite rule by Golub–Welsch.
    pub fn gauss_hermite(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter(
                "quadrature rule needs at least one node".to_string(),
            ));
        }
        let mut jacobi = DMatrix::<f64>::zeros(q, q);
        for i in 1..q {
            let beta = (i as f64 / 2.0).sqrt();
            jacobi[(i - 1, i)] = beta;
            jacobi[(i, i - 1)] = beta;
        }
        let eigen = SymmetricEigen::new(jacobi);
        let mu0 = std::f64::consts::PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = (0..q)
            .map(|i| {
                let node = eigen.eigenvalues[i];
                let first = eigen.eigenvectors[(0, i)];
                (node, mu0 * first * first)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    /// Default rule for projecting onto a degree-`n_max` basis: Q = N + 8
    /// (exactness degree 2Q − 1 comfortably covers Hₙ·Hₘ products plus smooth
    /// non-polynomial residuals).
    pub fn default_for(n_max: usize) -> Result<Self> {
        Self::gauss_hermite(n_max + 8)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫ g(v) e^{−v²} dv ≈ Σ wᵢ g(vᵢ). The weight is supplied by the rule;
    /// `g` is the de-weighted integrand.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * g(v))
            .sum()
    }
}
