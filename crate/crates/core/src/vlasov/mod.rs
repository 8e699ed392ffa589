//! Fourier–Hermite discretization of the periodic electrostatic
//! Vlasov–Poisson system with velocity-space stabilization.
//!
//! The electron distribution f(x, v, t) on x ∈ [0, L_x) (ions a fixed neutral
//! background) is expanded as
//!
//! ```text
//! f(x, v, t) = Σ_{m=−M..M} Σ_{n=0..N} Ĉ_{m,n}(t) e^{iκ_m x} Hₙ(v) e^{−v²},
//! κ_m = 2πm/L_x,
//! ```
//!
//! i.e. each Fourier mode carries an asymmetrically-weighted Hermite
//! coefficient vector in the polynomial convention. Substituting into
//!
//! ```text
//! ∂ₜf + v ∂ₓf − E ∂ᵥf = 0,    ∂ₓE = 1 − ∫ f dv,
//! ```
//!
//! and using v·Hₙ = n·H_{n−1} + ½H_{n+1} and ∂ᵥ(Hₙe^{−v²}) = −H_{n+1}e^{−v²}
//! gives the coefficient system
//!
//! ```text
//! dĈ_{m,n}/dt = −iκ_m [(n+1) Ĉ_{m,n+1} + ½ Ĉ_{m,n−1}]
//!               − (Ê ∗ Ĉ_{·,n−1})_m  −  ν Λₙ Ĉ_{m,n},
//! ```
//!
//! where ∗ is the truncated convolution over Fourier modes and νΛₙ is the
//! diagonal damping of the order-2k stabilization operator (Λₙ = 0 for
//! n < k, so the first k velocity moments are untouched). Poisson's equation
//! closes the system mode-by-mode:
//!
//! ```text
//! iκ_m Ê_m = −√π Ĉ_{m,0}   (m ≠ 0),        Ê₀ = 0 (zero-mean gauge).
//! ```
//!
//! # Time discretization
//!
//! [`vp_step`] advances one implicit trapezoidal step. Because the streaming
//! and damping terms are linear in Ĉ, averaging their endpoint evaluations is
//! identical to evaluating them at the midpoint state, so the scheme is the
//! implicit midpoint rule with the quadratic acceleration term evaluated as
//! −(Ê_mid ∗ Ĉ_mid): both factors are midpoint averages. That structure is
//! what the conservation properties lean on:
//!
//! * Ĉ_{0,0} is exactly invariant (mass), for every k ≥ 1.
//! * For k ≥ 2 the total momentum is exactly invariant: the m = 0 momentum
//!   row couples only to Σ_p Ê_p Ĉ_{−p,0}, which the midpoint Gauss law turns
//!   into an odd sum Σ κ_p |Ê_p|² = 0.
//! * For k ≥ 3 the combination (second velocity moment + 2·field energy),
//!   i.e. twice the total energy, is exactly invariant: combining the n = 0
//!   update row with the Poisson closure yields a discrete Ampère relation
//!   (Ê^j_m − Ê^{j−1}_m)/Δt = √π Ĉ^mid_{m,1} whose work term cancels the
//!   discrete kinetic-energy flux exactly.
//!
//! The nonlinear midpoint equations are solved by Picard (fixed-point)
//! iteration; each sweep solves, independently per Fourier mode, one complex
//! tridiagonal system in the Hermite direction with the acceleration term
//! frozen from the previous sweep.

mod fourier;

pub use fourier::Dealias;

use crate::basis::{BasisKind, HermiteBasis, MAX_TRUNCATION};
use crate::error::{Error, Result};
use crate::lb::LbOperator;
use crate::quadrature::QuadratureRule;
use crate::solver::solve_tridiagonal;
use fourier::SpectralProduct;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Charge-neutrality defects |1 − √π·Ĉ_{0,0}| at or above this threshold are
/// worth surfacing to the user; they indicate an initial condition whose mean
/// density does not cancel the ion background. The defect is reported, never
/// fatal: the m = 0 Fourier mode doesn't enter Poisson's equation, so the
/// solve itself is well-posed either way.
pub const NEUTRALITY_WARN_THRESHOLD: f64 = 1e-8;

/// How the electric field enters the acceleration term of one implicit step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTreatment {
    /// E at the temporal midpoint, (E_old + E_new)/2 — the conservative
    /// default; required for the exact momentum/energy invariants.
    Midpoint,
    /// E frozen at the step start. Cheaper per Picard sweep and useful for
    /// comparisons, but the exact invariants degrade to O(Δt²) drift.
    Explicit,
}

impl fmt::Display for FieldTreatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTreatment::Midpoint => write!(f, "midpoint"),
            FieldTreatment::Explicit => write!(f, "explicit"),
        }
    }
}

impl FromStr for FieldTreatment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(FieldTreatment::Midpoint),
            "explicit" => Ok(FieldTreatment::Explicit),
            other => Err(Error::InvalidParameter(format!(
                "unknown field treatment {other:?}; expected \"midpoint\" or \"explicit\""
            ))),
        }
    }
}

impl fmt::Display for Dealias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dealias::None => write!(f, "none"),
            Dealias::TwoThirds => write!(f, "two_thirds"),
        }
    }
}

impl FromStr for Dealias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Dealias::None),
            "two_thirds" => Ok(Dealias::TwoThirds),
            other => Err(Error::InvalidParameter(format!(
                "unknown dealias mode {other:?}; expected \"none\" or \"two_thirds\""
            ))),
        }
    }
}

/// Parameters of a Vlasov–Poisson run.
#[derive(Debug, Clone)]
pub struct VpConfig {
    /// Highest Hermite degree N.
    pub n_max: usize,
    /// Highest retained Fourier mode M (modes −M..M).
    pub m_max: usize,
    /// Half-order of the stabilization operator (dissipation order 2k).
    pub k: usize,
    /// Collision strength ν.
    pub nu: f64,
    /// Time step.
    pub dt: f64,
    /// Final time of the run (drivers step ⌈T/Δt⌉ times).
    pub t_final: f64,
    /// Spatial period L_x.
    pub lx: f64,
    /// Picard convergence tolerance on max |ΔĈ| per sweep.
    pub picard_tol: f64,
    /// Maximum Picard sweeps before a step is declared non-convergent.
    pub picard_max: usize,
    /// Aliasing control for the E·f product.
    pub dealias: Dealias,
    /// Field evaluation inside the implicit step.
    pub field_treatment: FieldTreatment,
}

impl Default for VpConfig {
    fn default() -> Self {
        Self {
            n_max: 32,
            m_max: 8,
            k: 1,
            nu: 1.0,
            dt: 1.0 / 64.0,
            t_final: 1.0,
            lx: 4.0 * PI,
            picard_tol: 1e-12,
            picard_max: 100,
            dealias: Dealias::TwoThirds,
            field_treatment: FieldTreatment::Midpoint,
        }
    }
}

impl VpConfig {
    /// Validates a full run configuration. Step-level helpers apply looser
    /// checks (e.g. [`vp_step`] accepts Δt = 0, which is a useful identity
    /// case, while a run requires Δt > 0).
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 || self.n_max > MAX_TRUNCATION {
            return Err(Error::InvalidParameter(format!(
                "n_max must be in 1..={MAX_TRUNCATION}, got {}",
                self.n_max
            )));
        }
        if self.m_max == 0 {
            return Err(Error::InvalidParameter(
                "m_max must be at least 1".to_string(),
            ));
        }
        if self.k == 0 || self.k > self.n_max {
            return Err(Error::InvalidParameter(format!(
                "stabilization half-order k must satisfy 1 <= k <= n_max, got k = {}",
                self.k
            )));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "nu must be positive and finite, got {}",
                self.nu
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_final must be nonnegative and finite, got {}",
                self.t_final
            )));
        }
        if !(self.lx > 0.0 && self.lx.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lx must be positive and finite, got {}",
                self.lx
            )));
        }
        if !(self.picard_tol > 0.0 && self.picard_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "picard_tol must be positive and finite, got {}",
                self.picard_tol
            )));
        }
        if self.picard_max == 0 {
            return Err(Error::InvalidParameter(
                "picard_max must be at least 1".to_string(),
            ));
        }
        Ok(())
    }

    /// Builds the stabilization operator described by this configuration.
    pub fn build_lb(&self) -> Result<LbOperator> {
        LbOperator::new(BasisKind::Aw, self.k, self.nu, self.n_max)
    }

    /// Number of steps a driver takes to reach `t_final` (last step may
    /// overshoot by less than Δt is avoided by rounding to the nearest count).
    pub fn step_count(&self) -> usize {
        if self.dt <= 0.0 {
            return 0;
        }
        (self.t_final / self.dt).round().max(0.0) as usize
    }
}

/// Fourier–Hermite coefficient table Ĉ_{m,n}, m = −M..M, n = 0..N.
///
/// Velocity basis: asymmetrically-weighted Hermite in the polynomial
/// convention, so the represented distribution is
/// f(x, v) = Σ Ĉ_{m,n} e^{iκ_m x} Hₙ(v) e^{−v²}. Real distributions
/// correspond to Hermitian tables, Ĉ_{−m,n} = conj(Ĉ_{m,n}).
///
/// Storage is mode-major: the Hermite vector of each Fourier mode is
/// contiguous ([`Self::mode_coefficients`]).
#[derive(Debug, Clone)]
pub struct CoefficientField {
    basis: HermiteBasis,
    m_max: usize,
    lx: f64,
    data: Vec<Complex64>,
}

impl CoefficientField {
    /// All-zero table.
    pub fn zeros(n_max: usize, m_max: usize, lx: f64) -> Result<Self> {
        if m_max == 0 {
            return Err(Error::InvalidParameter(
                "m_max must be at least 1".to_string(),
            ));
        }
        if !(lx > 0.0 && lx.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lx must be positive and finite, got {lx}"
            )));
        }
        let basis = HermiteBasis::new(BasisKind::Aw, n_max)?;
        let data = vec![Complex64::new(0.0, 0.0); (2 * m_max + 1) * (n_max + 1)];
        Ok(Self {
            basis,
            m_max,
            lx,
            data,
        })
    }

    /// Spatially uniform Maxwellian of unit density, (1/√π)e^{−v²}, with a
    /// relative cosine density perturbation:
    /// f(x, v) = (1/√π) e^{−v²} (1 + amplitude·cos(κ_mode·x)).
    pub fn maxwellian_with_cosine_perturbation(
        n_max: usize,
        m_max: usize,
        lx: f64,
        amplitude: f64,
        mode: usize,
    ) -> Result<Self> {
        if mode == 0 || mode > m_max {
            return Err(Error::InvalidParameter(format!(
                "perturbation mode must be in 1..=m_max ({m_max}), got {mode}"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "perturbation amplitude must be finite, got {amplitude}"
            )));
        }
        let mut field = Self::zeros(n_max, m_max, lx)?;
        let sqrt_pi = PI.sqrt();
        field.set(0, 0, Complex64::new(1.0 / sqrt_pi, 0.0));
        let half = Complex64::new(0.5 * amplitude / sqrt_pi, 0.0);
        field.set(mode as i64, 0, half);
        field.set(-(mode as i64), 0, half);
        Ok(field)
    }

    /// Projects a pointwise distribution f(x, v) onto the table: Hermite
    /// projection in v by Gauss–Hermite quadrature at `x_samples` equispaced
    /// spatial points, then a discrete Fourier transform of the sampled
    /// coefficient profiles. Exact (up to quadrature) when f is band-limited
    /// to |m| ≤ M in x and polynomial degree ≤ quadrature exactness in v;
    /// approximate otherwise. Requires `x_samples ≥ 2M + 1`.
    pub fn from_function(
        n_max: usize,
        m_max: usize,
        lx: f64,
        x_samples: usize,
        quad: &QuadratureRule,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        if x_samples < 2 * m_max + 1 {
            return Err(Error::InvalidParameter(format!(
                "x_samples ({x_samples}) must be at least 2*m_max + 1 = {}",
                2 * m_max + 1
            )));
        }
        let mut field = Self::zeros(n_max, m_max, lx)?;
        let basis = field.basis.clone();
        // Hermite coefficients at each spatial sample.
        let mut profiles: Vec<Vec<f64>> = Vec::with_capacity(x_samples);
        for j in 0..x_samples {
            let x = lx * j as f64 / x_samples as f64;
            let slice = crate::basis::project(|v| f(x, v), &basis, quad)?;
            profiles.push(slice.values().to_vec());
        }
        // Direct DFT over the spatial samples (sample counts are small).
        let g = x_samples as f64;
        for m in -(m_max as i64)..=m_max as i64 {
            for n in 0..=n_max {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, profile) in profiles.iter().enumerate() {
                    let phase = -2.0 * PI * (m as f64) * (j as f64) / g;
                    acc += Complex64::from_polar(profile[n] / g, phase);
                }
                field.set(m, n, acc);
            }
        }
        Ok(field)
    }

    fn idx(&self, m: i64, n: usize) -> usize {
        let mm = self.m_max as i64;
        assert!(
            -mm <= m && m <= mm,
            "Fourier mode {m} out of range -{mm}..={mm}"
        );
        assert!(
            n <= self.basis.n_max(),
            "Hermite degree {n} out of range 0..={}",
            self.basis.n_max()
        );
        (m + mm) as usize * (self.basis.n_max() + 1) + n
    }

    pub fn n_max(&self) -> usize {
        self.basis.n_max()
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }

    /// κ_m = 2πm/L_x.
    pub fn kappa(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.lx
    }

    /// Coefficient Ĉ_{m,n}. Panics if (m, n) is out of range.
    pub fn get(&self, m: i64, n: usize) -> Complex64 {
        self.data[self.idx(m, n)]
    }

    /// Sets Ĉ_{m,n}. Panics if (m, n) is out of range.
    pub fn set(&mut self, m: i64, n: usize, value: Complex64) {
        let i = self.idx(m, n);
        self.data[i] = value;
    }

    /// Contiguous Hermite coefficient row of one Fourier mode.
    pub fn mode_coefficients(&self, m: i64) -> &[Complex64] {
        let start = self.idx(m, 0);
        &self.data[start..start + self.basis.n_max() + 1]
    }

    /// Density coefficients Ĉ_{·,0} in centered mode order (the Poisson
    /// source).
    pub fn density_row(&self) -> Vec<Complex64> {
        (-(self.m_max as i64)..=self.m_max as i64)
            .map(|m| self.get(m, 0))
            .collect()
    }

    /// One Hermite column Ĉ_{·,n} in centered mode order.
    pub fn hermite_column(&self, n: usize) -> Vec<Complex64> {
        (-(self.m_max as i64)..=self.m_max as i64)
            .map(|m| self.get(m, n))
            .collect()
    }

    /// Largest entry-wise modulus difference to another table of identical
    /// shape.
    pub fn max_abs_diff(&self, other: &CoefficientField) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest violation of the Hermitian symmetry Ĉ_{−m,n} = conj(Ĉ_{m,n});
    /// zero for tables representing real distributions.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 0..=self.basis.n_max() {
            worst = worst.max(self.get(0, n).im.abs());
            for m in 1..=self.m_max as i64 {
                worst = worst.max((self.get(-m, n) - self.get(m, n).conj()).norm());
            }
        }
        worst
    }

    /// Pointwise reconstruction f(x, v) (real part; exact for Hermitian
    /// tables).
    pub fn reconstruct(&self, x: f64, v: f64) -> f64 {
        let h = crate::basis::hermite_eval_all(self.basis.n_max(), v);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in -(self.m_max as i64)..=self.m_max as i64 {
            let row = self.mode_coefficients(m);
            let mut radial = Complex64::new(0.0, 0.0);
            for (hn, c) in h.iter().zip(row) {
                radial += c * hn;
            }
            acc += radial * Complex64::from_polar(1.0, self.kappa(m) * x);
        }
        acc.re * (-v * v).exp()
    }

    fn check_same_shape(&self, other: &CoefficientField) -> Result<()> {
        if self.basis.n_max() != other.basis.n_max() || self.m_max != other.m_max {
            return Err(Error::LengthMismatch {
                expected: self.data.len(),
                got: other.data.len(),
            });
        }
        if self.lx != other.lx {
            return Err(Error::InvalidParameter(format!(
                "domain length mismatch: {} vs {}",
                self.lx, other.lx
            )));
        }
        Ok(())
    }

    /// True when every entry is finite — useful for validating states loaded
    /// from external files before handing them to a solver.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Electric field in centered Fourier modes: E(x) = Σ_m Ê_m e^{iκ_m x}.
#[derive(Debug, Clone)]
pub struct ElectricField {
    m_max: usize,
    lx: f64,
    modes: Vec<Complex64>,
}

impl ElectricField {
    pub fn new(modes: Vec<Complex64>, lx: f64) -> Result<Self> {
        if modes.is_empty() || modes.len() % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "mode vector must have odd length 2M+1, got {}",
                modes.len()
            )));
        }
        if !(lx > 0.0 && lx.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lx must be positive and finite, got {lx}"
            )));
        }
        Ok(Self {
            m_max: (modes.len() - 1) / 2,
            lx,
            modes,
        })
    }

    pub fn zeros(m_max: usize, lx: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); 2 * m_max + 1], lx)
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    /// Centered spectrum, index m + M.
    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    /// Single mode Ê_m. Panics if |m| > M.
    pub fn mode(&self, m: i64) -> Complex64 {
        let mm = self.m_max as i64;
        assert!(-mm <= m && m <= mm, "mode {m} out of range -{mm}..={mm}");
        self.modes[(m + mm) as usize]
    }

    pub fn kappa(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.lx
    }

    /// Pointwise field value (real part; exact for Hermitian spectra).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in -(self.m_max as i64)..=self.m_max as i64 {
            acc += self.mode(m) * Complex64::from_polar(1.0, self.kappa(m) * x);
        }
        acc.re
    }

    fn is_finite(&self) -> bool {
        self.modes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Result of a Poisson solve: the field and the charge-neutrality defect of
/// the source, |1 − √π·Ĉ_{0,0}|.
#[derive(Debug, Clone)]
pub struct PoissonSolution {
    pub field: ElectricField,
    pub neutrality_defect: f64,
}

/// Solves iκ_m Ê_m = −√π Ĉ_{m,0} for m ≠ 0 with the zero-mean gauge Ê₀ = 0.
///
/// `density_row` is the centered vector of zeroth Hermite coefficients
/// Ĉ_{−M..M, 0}. The m = 0 component never enters the field; its deviation
/// from the neutralizing background is reported as `neutrality_defect`.
pub fn poisson_solve(density_row: &[Complex64], lx: f64) -> Result<PoissonSolution> {
    if density_row.is_empty() || density_row.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "density row must have odd length 2M+1, got {}",
            density_row.len()
        )));
    }
    if !(lx > 0.0 && lx.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lx must be positive and finite, got {lx}"
        )));
    }
    let m_max = (density_row.len() - 1) / 2;
    let sqrt_pi = PI.sqrt();
    let mut modes = vec![Complex64::new(0.0, 0.0); density_row.len()];
    for (j, &c0) in density_row.iter().enumerate() {
        let m = j as i64 - m_max as i64;
        if m == 0 {
            continue;
        }
        let kappa = 2.0 * PI * m as f64 / lx;
        // Ê_m = −√π Ĉ_{m,0} / (iκ_m) = i √π Ĉ_{m,0} / κ_m.
        modes[j] = Complex64::new(0.0, sqrt_pi / kappa) * c0;
    }
    let c00 = density_row[m_max];
    let neutrality_defect = (Complex64::new(1.0, 0.0) - sqrt_pi * c00).norm();
    Ok(PoissonSolution {
        field: ElectricField::new(modes, lx)?,
        neutrality_defect,
    })
}

/// Largest residual of the discrete Gauss law over the driven modes:
/// max_{m ≠ 0} |iκ_m Ê_m + √π Ĉ_{m,0}|.
pub fn gauss_residual(density_row: &[Complex64], field: &ElectricField) -> Result<f64> {
    if density_row.len() != field.modes().len() {
        return Err(Error::LengthMismatch {
            expected: field.modes().len(),
            got: density_row.len(),
        });
    }
    let m_max = field.m_max() as i64;
    let sqrt_pi = PI.sqrt();
    let mut worst: f64 = 0.0;
    for m in -m_max..=m_max {
        if m == 0 {
            continue;
        }
        let c0 = density_row[(m + m_max) as usize];
        let residual = Complex64::new(0.0, field.kappa(m)) * field.mode(m) + sqrt_pi * c0;
        worst = worst.max(residual.norm());
    }
    Ok(worst)
}

fn check_lb(lb: &LbOperator, n_max: usize) -> Result<()> {
    if lb.basis_kind() != BasisKind::Aw || lb.n_max() != n_max {
        return Err(Error::BasisMismatch {
            expected: BasisKind::Aw,
            expected_n: n_max,
            got: lb.basis_kind(),
            got_n: lb.n_max(),
        });
    }
    Ok(())
}

fn check_state_config(state: &CoefficientField, cfg: &VpConfig) -> Result<()> {
    if state.n_max() != cfg.n_max || state.m_max() != cfg.m_max {
        return Err(Error::InvalidParameter(format!(
            "state shape (n_max {}, m_max {}) does not match config (n_max {}, m_max {})",
            state.n_max(),
            state.m_max(),
            cfg.n_max,
            cfg.m_max
        )));
    }
    if state.lx() != cfg.lx {
        return Err(Error::InvalidParameter(format!(
            "state domain length {} does not match config lx {}",
            state.lx(),
            cfg.lx
        )));
    }
    Ok(())
}

/// Evaluates the coefficient-space right-hand side
/// dĈ_{m,n}/dt = −iκ_m[(n+1)Ĉ_{m,n+1} + ½Ĉ_{m,n−1}] − (Ê∗Ĉ_{·,n−1})_m − νΛₙĈ_{m,n}
/// for a given field Ê (the field is an explicit input so callers can probe
/// the coupling terms independently; pass the Poisson solution of `state` for
/// the self-consistent rate). `lb = None` drops the damping term.
pub fn vlasov_rhs(
    state: &CoefficientField,
    field: &ElectricField,
    lb: Option<&LbOperator>,
    cfg: &VpConfig,
) -> Result<CoefficientField> {
    check_state_config(state, cfg)?;
    if let Some(op) = lb {
        check_lb(op, state.n_max())?;
    }
    if field.modes().len() != 2 * state.m_max() + 1 {
        return Err(Error::LengthMismatch {
            expected: 2 * state.m_max() + 1,
            got: field.modes().len(),
        });
    }
    let n_max = state.n_max();
    let m_top = state.m_max() as i64;
    let sp = SpectralProduct::new(state.m_max(), cfg.dealias);
    // Acceleration columns: accel_{m,n} = −(Ê ∗ Ĉ_{·,n−1})_m for n ≥ 1.
    let mut accel: Vec<Vec<Complex64>> = Vec::with_capacity(n_max + 1);
    accel.push(vec![Complex64::new(0.0, 0.0); 2 * state.m_max() + 1]);
    for n in 1..=n_max {
        accel.push(sp.multiply(field.modes(), &state.hermite_column(n - 1)));
    }
    let mut out = CoefficientField::zeros(n_max, state.m_max(), state.lx())?;
    for m in -m_top..=m_top {
        let kappa = state.kappa(m);
        let ik = Complex64::new(0.0, kappa);
        let row = state.mode_coefficients(m);
        for n in 0..=n_max {
            let up = if n + 1 <= n_max {
                (n as f64 + 1.0) * row[n + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let down = if n > 0 {
                0.5 * row[n - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let mut rate = -ik * (up + down) - accel[n][(m + m_top) as usize];
            if let Some(op) = lb {
                rate -= op.nu() * op.magnitude(n) * row[n];
            }
            out.set(m, n, rate);
        }
    }
    Ok(out)
}

/// Convergence report of one implicit step.
#[derive(Debug, Clone, Copy)]
pub struct PicardStats {
    /// Picard sweeps performed (1 = converged on the first sweep).
    pub iterations: usize,
    /// Final sweep-to-sweep residual max |ΔĈ|.
    pub residual: f64,
    /// Neutrality defect |1 − √π Ĉ_{0,0}| of the step's starting state.
    pub neutrality_defect: f64,
}

/// One implicit trapezoidal / midpoint step of the Vlasov–Poisson system.
///
/// Solves, by Picard iteration, the coupled midpoint equations
///
/// ```text
/// (I − ½Δt·A_m) Ĉ^j_m  =  (I + ½Δt·A_m) Ĉ^{j−1}_m  −  Δt·(Ê_mid ∗ Ĉ_mid,{n−1})_m,
/// Ê^j = Poisson(Ĉ^j),   Ê_mid = ½(Ê^{j−1} + Ê^j),   Ĉ_mid = ½(Ĉ^{j−1} + Ĉ^j),
/// ```
///
/// where A_m is the per-mode tridiagonal streaming + damping operator. Each
/// sweep freezes the acceleration term from the previous iterate and solves
/// the resulting per-mode complex tridiagonal systems exactly, then refreshes
/// the field from the new density. Returns the new state, its
/// self-consistent field, and convergence statistics.
///
/// With `lb = None` the damping term is dropped (pure Vlasov–Poisson).
/// Δt = 0 returns the state unchanged after one sweep.
pub fn vp_step(
    state: &CoefficientField,
    cfg: &VpConfig,
    lb: Option<&LbOperator>,
) -> Result<(CoefficientField, ElectricField, PicardStats)> {
    check_state_config(state, cfg)?;
    if let Some(op) = lb {
        check_lb(op, state.n_max())?;
        if op.k() != cfg.k || op.nu() != cfg.nu {
            return Err(Error::InvalidParameter(format!(
                "stabilization operator (k = {}, nu = {}) disagrees with config (k = {}, nu = {})",
                op.k(),
                op.nu(),
                cfg.k,
                cfg.nu
            )));
        }
    }
    if !(cfg.dt >= 0.0 && cfg.dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be nonnegative and finite, got {}",
            cfg.dt
        )));
    }
    if cfg.picard_max == 0 {
        return Err(Error::InvalidParameter(
            "picard_max must be at least 1".to_string(),
        ));
    }
    let n_max = state.n_max();
    let m_top = state.m_max() as i64;
    let width = 2 * state.m_max() + 1;
    let nn = n_max + 1;
    let dt = cfg.dt;
    let half_dt = 0.5 * dt;
    let damping: Vec<f64> = match lb {
        Some(op) => (0..=n_max).map(|n| op.nu() * op.magnitude(n)).collect(),
        None => vec![0.0; nn],
    };

    let sp = SpectralProduct::new(state.m_max(), cfg.dealias);
    let start = poisson_solve(&state.density_row(), state.lx())?;
    let e_old = start.field;
    let neutrality_defect = start.neutrality_defect;

    // Per-mode implicit bands of (I − ½Δt·A_m) and the fixed explicit part
    // (I + ½Δt·A_m)·Ĉ^{j−1}; both are Picard-sweep invariants.
    let zero = Complex64::new(0.0, 0.0);
    let mut bands: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> =
        Vec::with_capacity(width);
    let mut rhs_base: Vec<Vec<Complex64>> = Vec::with_capacity(width);
    for m in -m_top..=m_top {
        let kappa = state.kappa(m);
        let ik = Complex64::new(0.0, kappa);
        let row = state.mode_coefficients(m);
        let mut sub = vec![zero; nn];
        let mut diag = vec![zero; nn];
        let mut sup = vec![zero; nn];
        let mut base = vec![zero; nn];
        for n in 0..nn {
            diag[n] = Complex64::new(1.0 + half_dt * damping[n], 0.0);
            if n > 0 {
                sub[n] = half_dt * ik * 0.5;
            }
            if n + 1 < nn {
                sup[n] = half_dt * ik * (n as f64 + 1.0);
            }
            let up = if n + 1 < nn {
                (n as f64 + 1.0) * row[n + 1]
            } else {
                zero
            };
            let down = if n > 0 { 0.5 * row[n - 1] } else { zero };
            base[n] = (1.0 - half_dt * damping[n]) * row[n] - half_dt * ik * (up + down);
        }
        bands.push((sub, diag, sup));
        rhs_base.push(base);
    }

    let mut c_new = state.clone();
    let mut e_new = e_old.clone();
    let mut residual = f64::INFINITY;
    for sweep in 1..=cfg.picard_max {
        let e_mid: Vec<Complex64> = match cfg.field_treatment {
            FieldTreatment::Midpoint => e_old
                .modes()
                .iter()
                .zip(e_new.modes())
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
            FieldTreatment::Explicit => e_old.modes().to_vec(),
        };
        // Midpoint coefficient columns feeding the acceleration term.
        let mut accel: Vec<Vec<Complex64>> = Vec::with_capacity(nn);
        accel.push(vec![zero; width]);
        for n in 1..=n_max {
            let mid_column: Vec<Complex64> = (-m_top..=m_top)
                .map(|m| 0.5 * (state.get(m, n - 1) + c_new.get(m, n - 1)))
                .collect();
            accel.push(sp.multiply(&e_mid, &mid_column));
        }
        let mut next = CoefficientField::zeros(n_max, state.m_max(), state.lx())?;
        let mut worst: f64 = 0.0;
        for (j, m) in (-m_top..=m_top).enumerate() {
            let (sub, diag, sup) = &bands[j];
            let rhs: Vec<Complex64> = (0..nn)
                .map(|n| rhs_base[j][n] - dt * accel[n][j])
                .collect();
            let solved = solve_tridiagonal(sub, diag, sup, &rhs)
                .ok_or(Error::SingularUpdate("implicit Vlasov–Poisson step"))?;
            for (n, &value) in solved.iter().enumerate() {
                worst = worst.max((value - c_new.get(m, n)).norm());
                next.set(m, n, value);
            }
        }
        c_new = next;
        e_new = poisson_solve(&c_new.density_row(), state.lx())?.field;
        residual = worst;
        if !residual.is_finite() {
            return Err(Error::NonFinite(format!(
                "Picard residual became non-finite on sweep {sweep}"
            )));
        }
        if residual <= cfg.picard_tol {
            if !c_new.is_finite() || !e_new.is_finite() {
                return Err(Error::NonFinite(
                    "implicit step produced non-finite coefficients".to_string(),
                ));
            }
            return Ok((
                c_new,
                e_new,
                PicardStats {
                    iterations: sweep,
                    residual,
                    neutrality_defect,
                },
            ));
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.picard_max,
        residual,
        tolerance: cfg.picard_tol,
    })
}

/// Advisory time-step and collision-strength bounds derived from the field
/// amplitude 𝓜 = max_x |2E(x)|, the collision strength ν, and the Hermite
/// truncation N.
#[derive(Debug, Clone, Copy)]
pub struct StabilityBounds {
    /// Δt ≤ 16ν/𝓜² — damping must absorb the field-driven coefficient growth.
    pub dt_visc: f64,
    /// Δt ≤ 4/(𝓜√(2N)) — resolves the fastest field-coupled Hermite rotation.
    pub dt_spec: f64,
    /// ν ≥ 𝓜/(4√(2N)) makes the two bounds coincide; suggested minimum
    /// collision strength for the given field level.
    pub nu_suggested: f64,
}

/// Computes [`StabilityBounds`]. A quiescent field (𝓜 = 0) leaves the time
/// step unconstrained (infinite bounds) and suggests no collisionality.
pub fn stability_bounds(m_field: f64, nu: f64, n_max: usize) -> Result<StabilityBounds> {
    if !(m_field >= 0.0 && m_field.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "field amplitude must be nonnegative and finite, got {m_field}"
        )));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "nu must be positive and finite, got {nu}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter(
            "n_max must be at least 1".to_string(),
        ));
    }
    let root = (2.0 * n_max as f64).sqrt();
    if m_field == 0.0 {
        return Ok(StabilityBounds {
            dt_visc: f64::INFINITY,
            dt_spec: f64::INFINITY,
            nu_suggested: 0.0,
        });
    }
    Ok(StabilityBounds {
        dt_visc: 16.0 * nu / (m_field * m_field),
        dt_spec: 4.0 / (m_field * root),
        nu_suggested: m_field / (4.0 * root),
    })
}

/// Field-amplitude estimate used by the advisory bounds.
#[derive(Debug, Clone, Copy)]
pub struct FieldMaxEstimate {
    /// max_x |2E(x)| sampled on a fine uniform grid of the reconstruction.
    pub direct: f64,
    /// A-priori bound 8·L_x + √π·𝓗 from the weighted distribution norm 𝓗
    /// (valid for any state with that norm; typically far above `direct`).
    pub bound: f64,
}

/// Estimates the field amplitude 𝓜 two ways: directly from the spectral
/// reconstruction of E, and from the a-priori bound 8L_x + √π𝓗 where
/// `weighted_h` is the e^{v²}-weighted squared norm of the distribution
/// (`hermite_weighted_h`).
pub fn field_max_estimate(field: &ElectricField, weighted_h: f64) -> Result<FieldMaxEstimate> {
    if !(weighted_h >= 0.0 && weighted_h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weighted norm must be nonnegative and finite, got {weighted_h}"
        )));
    }
    // Fine enough that the grid max of the band-limited field is within
    // O((M/G)²) of the true max.
    let grid = (16 * (2 * field.m_max() + 1)).next_power_of_two().max(1024);
    let mut peak: f64 = 0.0;
    for j in 0..grid {
        let x = field.lx() * j as f64 / grid as f64;
        peak = peak.max(field.eval(x).abs());
    }
    Ok(FieldMaxEstimate {
        direct: 2.0 * peak,
        bound: 8.0 * field.lx() + PI.sqrt() * weighted_h,
    })
}
