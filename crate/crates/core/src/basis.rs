//! Physicists' Hermite polynomials and the two weighted basis families used by
//! the solvers.
//!
//! Both families expand a velocity distribution in Hermite polynomials Hₙ
//! against a Gaussian envelope:
//!
//! * **AW** (asymmetrically weighted): trial functions ψₙ(v) = γₙ Hₙ(v) e^{−v²}
//!   paired with unweighted dual functions ψⁿ(v) = γ̃ₙ Hₙ(v). Velocity moments
//!   of the distribution are finite combinations of the low coefficients, which
//!   is what makes discrete conservation laws available.
//! * **SW** (symmetrically weighted): ψₙ(v) = γₙ Hₙ(v) e^{−v²/2}, orthonormal in
//!   plain L² and self-dual. Advection becomes skew-adjoint, giving
//!   unconditional L² stability but no exact physical conservation laws.
//!
//! Normalization constants (⟨ψₙ, ψᵐ⟩ = δₙₘ in the pairing of each family):
//!
//! ```text
//! SW: γₙ = γ̃ₙ = (√π 2ⁿ n!)^{−1/2}
//! AW: γₙ = (π 2ⁿ n!)^{−1/2},   γ̃ₙ = (2ⁿ n!)^{−1/2}
//! ```
//!
//! Coefficients are carried in one of two explicit conventions:
//!
//! * [`Convention::PolynomialC`] — f = Σ Cₙ Hₙ(v) · weight(v). The solver
//!   recursions in this crate are written in this convention.
//! * [`Convention::NormalizedCstar`] — f = Σ Cₙ* ψₙ(v), with Cₙ* = Cₙ/γₙ.
//!
//! All factorial-bearing constants are evaluated as running products so that
//! overflow is delayed to the documented truncation cap [`MAX_TRUNCATION`].

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

/// Largest supported Hermite truncation degree. √π·2ⁿ·n! ≈ 2.3·10²⁵⁴ at
/// n = 128 is still representable in `f64`; shortly past n ≈ 150 it is not.
pub const MAX_TRUNCATION: usize = 128;

/// Basis family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Asymmetrically weighted: Hₙ(v)·e^{−v²} trial functions, unweighted duals.
    Aw,
    /// Symmetrically weighted: Hₙ(v)·e^{−v²/2}, orthonormal and self-dual.
    Sw,
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisKind::Aw => write!(f, "AW"),
            BasisKind::Sw => write!(f, "SW"),
        }
    }
}

/// Coefficient convention marker. See the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Coefficients of the raw Hermite polynomials (times the family weight).
    PolynomialC,
    /// Coefficients of the normalized basis functions ψₙ; Cₙ* = Cₙ/γₙ.
    NormalizedCstar,
}

/// A truncated Hermite basis: family, degree, and normalization tables.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    kind: BasisKind,
    n_max: usize,
    gammas: Vec<f64>,
    dual_gammas: Vec<f64>,
    norm_sqs: Vec<f64>,
}

impl HermiteBasis {
    /// Builds the basis for degrees 0..=n_max.
    ///
    /// Errors with [`Error::TruncationTooLarge`] past [`MAX_TRUNCATION`].
    pub fn new(kind: BasisKind, n_max: usize) -> Result<Self> {
        if n_max > MAX_TRUNCATION {
            return Err(Error::TruncationTooLarge {
                n: n_max,
                max: MAX_TRUNCATION,
            });
        }
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut gammas = Vec::with_capacity(n_max + 1);
        let mut dual_gammas = Vec::with_capacity(n_max + 1);
        let mut norm_sqs = Vec::with_capacity(n_max + 1);
        // Running-product recurrences: each constant at degree n differs from
        // degree n−1 by a factor involving only 2n, so no factorials appear.
        let (mut gamma, mut dual_gamma) = match kind {
            BasisKind::Aw => (1.0 / sqrt_pi, 1.0),
            BasisKind::Sw => {
                let g = 1.0 / std::f64::consts::PI.powf(0.25);
                (g, g)
            }
        };
        let mut norm_sq = sqrt_pi; // ∫ H₀² e^{−v²} dv = √π
        for n in 0..=n_max {
            if n > 0 {
                let r = (2.0 * n as f64).sqrt();
                gamma /= r;
                dual_gamma /= r;
                norm_sq *= 2.0 * n as f64;
            }
            gammas.push(gamma);
            dual_gammas.push(dual_gamma);
            norm_sqs.push(norm_sq);
        }
        Ok(Self {
            kind,
            n_max,
            gammas,
            dual_gammas,
            norm_sqs,
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Highest retained Hermite degree N.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of retained modes, N + 1.
    pub fn len(&self) -> usize {
        self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Trial-function normalization γₙ.
    pub fn gamma(&self, n: usize) -> f64 {
        self.gammas[n]
    }

    /// Dual-function normalization γ̃ₙ (equals γₙ for SW).
    pub fn dual_gamma(&self, n: usize) -> f64 {
        self.dual_gammas[n]
    }

    /// ∫ Hₙ² e^{−v²} dv = √π 2ⁿ n!, precomputed for every retained degree.
    pub fn norm_sq(&self, n: usize) -> f64 {
        self.norm_sqs[n]
    }
}

/// Evaluates the physicists' Hermite polynomial Hₙ(v) by the forward
/// three-term recursion H₀ = 1, H₁ = 2v, H_{n+1} = 2v·Hₙ − 2n·H_{n−1}.
///
/// Total function: every (n, v) input returns a value (possibly ±∞ for inputs
/// far outside the supported range, since the recursion itself never fails).
pub fn hermite_eval(n: usize, v: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut h_prev = 1.0; // H₀
    let mut h = 2.0 * v; // H₁
    for j in 1..n {
        let h_next = 2.0 * v * h - 2.0 * j as f64 * h_prev;
        h_prev = h;
        h = h_next;
    }
    h
}

/// Evaluates H₀(v)..H_{n_max}(v) in one recursion pass.
pub fn hermite_eval_all(n_max: usize, v: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * v);
    for j in 1..n_max {
        let h_next = 2.0 * v * out[j] - 2.0 * j as f64 * out[j - 1];
        out.push(h_next);
    }
    out
}

/// ∫ Hₙ² e^{−v²} dv = √π 2ⁿ n!, via a running product.
///
/// Errors with [`Error::Overflow`] once the value leaves `f64` range.
pub fn hermite_norm_sq(n: usize) -> Result<f64> {
    let mut value = std::f64::consts::PI.sqrt();
    for j in 1..=n {
        value *= 2.0 * j as f64;
        if !value.is_finite() {
            return Err(Error::Overflow {
                what: format!("Hermite norm √π 2ⁿ n! at n = {j}"),
            });
        }
    }
    Ok(value)
}

/// The factor mapping Hₙ to its m-th derivative: H₍ₙ₎⁽ᵐ⁾ = 2ᵐ n!/(n−m)! · H_{n−m},
/// and 0 when n < m (differentiating past the degree).
///
/// Computed as a running product of m consecutive integers times 2ᵐ.
pub fn hermite_derivative_coeffs(n: usize, m: usize) -> Result<f64> {
    if n < m {
        return Ok(0.0);
    }
    let mut value = 1.0_f64;
    for j in 0..m {
        value *= 2.0 * (n - j) as f64;
        if !value.is_finite() {
            return Err(Error::Overflow {
                what: format!("derivative factor 2ᵐ n!/(n−m)! at n = {n}, m = {m}"),
            });
        }
    }
    Ok(value)
}

/// Coefficients of a truncated Hermite expansion in one of the two documented
/// conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    basis: HermiteBasis,
    convention: Convention,
    values: Vec<f64>,
}

impl CoefficientVector {
    /// Wraps a coefficient slice; `values.len()` must equal `basis.len()`.
    pub fn new(basis: HermiteBasis, convention: Convention, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            basis,
            convention,
            values,
        })
    }

    /// All-zero coefficients.
    pub fn zeros(basis: HermiteBasis, convention: Convention) -> Self {
        let n = basis.len();
        Self {
            basis,
            convention,
            values: vec![0.0; n],
        }
    }

    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn n_max(&self) -> usize {
        self.basis.n_max()
    }

    /// Converts between the polynomial (Cₙ) and normalized (Cₙ* = Cₙ/γₙ)
    /// conventions. The round trip is exact to machine precision because the
    /// conversion is a diagonal scaling by the stored γₙ.
    pub fn to_convention(&self, target: Convention) -> CoefficientVector {
        if target == self.convention {
            return self.clone();
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, &c)| match target {
                // Cₙ* = Cₙ / γₙ
                Convention::NormalizedCstar => c / self.basis.gamma(n),
                // Cₙ = γₙ · Cₙ*
                Convention::PolynomialC => c * self.basis.gamma(n),
            })
            .collect();
        CoefficientVector {
            basis: self.basis.clone(),
            convention: target,
            values,
        }
    }

    /// Checks that `other` was built over the same basis family and degree.
    pub fn check_same_basis(&self, other: &CoefficientVector) -> Result<()> {
        if self.basis.kind() != other.basis.kind() || self.basis.n_max() != other.basis.n_max() {
            return Err(Error::BasisMismatch {
                expected: self.basis.kind(),
                expected_n: self.basis.n_max(),
                got: other.basis.kind(),
                got_n: other.basis.n_max(),
            });
        }
        Ok(())
    }
}

/// Squared weighted L² norm of the polynomial part:
/// ∫ φ² e^{−v²} dv = Σₙ Cₙ² √π 2ⁿ n! where φ = Σ Cₙ Hₙ.
///
/// Normalized-convention input is converted first, so the value refers to the
/// same function either way.
pub fn weighted_norm_sq(c: &CoefficientVector) -> f64 {
    let poly = c.to_convention(Convention::PolynomialC);
    poly.values()
        .iter()
        .enumerate()
        .map(|(n, &cn)| cn * cn * poly.basis().norm_sq(n))
        .sum()
}

/// Coefficients of the m-th derivative of the polynomial part: if
/// φ = Σₙ Cₙ Hₙ then φ⁽ᵐ⁾ = Σⱼ Cⱼ₊ₘ · 2ᵐ (j+m)!/j! · Hⱼ.
///
/// Input and output are in the polynomial convention over the same basis
/// (top m coefficient slots of the output are zero).
pub fn polynomial_derivative(c: &CoefficientVector, m: usize) -> Result<CoefficientVector> {
    let poly = c.to_convention(Convention::PolynomialC);
    let n_max = poly.n_max();
    let mut values = vec![0.0; n_max + 1];
    for j in 0..=n_max {
        if j + m <= n_max {
            values[j] = poly.value(j + m) * hermite_derivative_coeffs(j + m, m)?;
        }
    }
    CoefficientVector::new(poly.basis().clone(), Convention::PolynomialC, values)
}

/// Projects a function of v onto the truncated basis by Gauss–Hermite
/// quadrature, returning polynomial-convention coefficients:
///
/// ```text
/// AW: Cₙ = (√π 2ⁿ n!)^{−1} ∫ f(v) Hₙ(v) dv
/// SW: Cₙ = (√π 2ⁿ n!)^{−1} ∫ f(v) Hₙ(v) e^{−v²/2} dv
/// ```
///
/// The quadrature weight e^{−v²} is factored out of the integrand, so `f`
/// must decay fast enough that f·e^{+v²} (AW) or f·e^{+v²/2} (SW) stays
/// polynomial-bounded on the node range.
///
/// Errors with [`Error::InsufficientQuadrature`] when `quad` has too few
/// nodes to resolve degree `basis.n_max()` (Q must exceed N).
pub fn project(
    f: impl Fn(f64) -> f64,
    basis: &HermiteBasis,
    quad: &QuadratureRule,
) -> Result<CoefficientVector> {
    let n_max = basis.n_max();
    if quad.len() <= n_max {
        return Err(Error::InsufficientQuadrature {
            q: quad.len(),
            n_max,
        });
    }
    let mut values = vec![0.0; n_max + 1];
    for (&v, &w) in quad.nodes().iter().zip(quad.weights()) {
        // Gauss–Hermite computes ∫ g(v) e^{−v²} dv; de-weight the integrand so
        // that the full family-specific integral is recovered.
        let deweighted = match basis.kind() {
            BasisKind::Aw => f(v) * (v * v).exp(),
            BasisKind::Sw => f(v) * (0.5 * v * v).exp(),
        };
        let h = hermite_eval_all(n_max, v);
        for n in 0..=n_max {
            values[n] += w * deweighted * h[n];
        }
    }
    for (n, value) in values.iter_mut().enumerate() {
        *value /= basis.norm_sq(n);
    }
    CoefficientVector::new(basis.clone(), Convention::PolynomialC, values)
}
