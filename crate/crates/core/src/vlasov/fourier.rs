//! Pseudo-spectral products of periodic fields.
//!
//! Spectra are carried in centered order m = −M..M (vector index m + M) with
//! the convention g(x) = Σ_m ĝ_m e^{iκ_m x}, κ_m = 2πm/L_x. A product of two
//! such fields is evaluated by transforming both to a physical grid,
//! multiplying pointwise, and transforming back — with the grid size chosen so
//! that the retained output modes are exact:
//!
//! * `TwoThirds` (default): grid G ≥ 3M + 1. Output frequencies of the
//!   quadratic product reach 2M; aliased images land at |m| ≥ G − 2M > M and
//!   are discarded by the mode extraction, so the retained |m| ≤ M modes carry
//!   the exact truncated convolution. (Padding the grid to 3M and keeping M is
//!   the same filter as the classical two-thirds mask applied to a G-point
//!   spectrum.)
//! * `None`: grid G ≥ 2M + 2. Cheaper, but quadratic aliases can fold back
//!   onto retained modes with |m| ≥ G − 2M; only the modes near m = 0 are
//!   alias-free.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Aliasing control for quadratic products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    /// Minimal grid; aliased contributions may pollute the highest modes.
    None,
    /// Padded grid making every retained product mode alias-free (default).
    TwoThirds,
}

pub(crate) struct SpectralProduct {
    m_max: usize,
    grid: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl SpectralProduct {
    pub fn new(m_max: usize, dealias: Dealias) -> Self {
        let min_grid = match dealias {
            Dealias::TwoThirds => 3 * m_max + 1,
            Dealias::None => 2 * m_max + 2,
        };
        let grid = min_grid.next_power_of_two().max(8);
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid);
        let inv = planner.plan_fft_inverse(grid);
        Self {
            m_max,
            grid,
            fwd,
            inv,
        }
    }

    #[cfg(test)]
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Evaluates the truncated series on the G-point uniform grid,
    /// x_g = g·L_x/G: returns g ↦ Σ_m ĝ_m e^{2πi m g/G}.
    pub fn to_grid(&self, modes: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(modes.len(), 2 * self.m_max + 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.grid];
        for (j, &value) in modes.iter().enumerate() {
            let m = j as i64 - self.m_max as i64;
            let bin = m.rem_euclid(self.grid as i64) as usize;
            buf[bin] = value;
        }
        self.inv.process(&mut buf);
        buf
    }

    /// Forward transform of grid values, returning the centered modes
    /// |m| ≤ M (with the 1/G normalization matching [`Self::to_grid`]).
    pub fn to_modes(&self, grid_values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(grid_values.len(), self.grid);
        let mut buf: Vec<Complex64> = grid_values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.grid as f64;
        (-(self.m_max as i64)..=self.m_max as i64)
            .map(|m| buf[m.rem_euclid(self.grid as i64) as usize] * scale)
            .collect()
    }

    /// Product of two real periodic fields given by their centered spectra.
    /// The physical-space factors take the real part (the inputs are
    /// Hermitian-symmetric, so the imaginary residue is roundoff), and the
    /// output spectrum is re-symmetrized so ĝ_{−m} = conj(ĝ_m) holds exactly:
    /// a product of real fields is real, and enforcing that structurally keeps
    /// downstream states real-valued over arbitrarily long runs instead of
    /// accumulating rounding-level imaginary drift.
    pub fn multiply(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let ga = self.to_grid(a);
        let gb = self.to_grid(b);
        let product: Vec<f64> = ga.iter().zip(&gb).map(|(x, y)| x.re * y.re).collect();
        let mut modes = self.to_modes(&product);
        let mm = self.m_max;
        for m in 1..=mm {
            let avg = 0.5 * (modes[mm + m] + modes[mm - m].conj());
            modes[mm + m] = avg;
            modes[mm - m] = avg.conj();
        }
        modes[mm] = Complex64::new(modes[mm].re, 0.0);
        modes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centered(m_max: usize, entries: &[(i64, Complex64)]) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 2 * m_max + 1];
        for &(m, z) in entries {
            v[(m + m_max as i64) as usize] = z;
        }
        v
    }

    #[test]
    fn grid_sizing_respects_alias_margin() {
        assert_eq!(SpectralProduct::new(6, Dealias::TwoThirds).grid(), 32); // ≥ 19
        assert_eq!(SpectralProduct::new(6, Dealias::None).grid(), 16); // ≥ 14
        assert_eq!(SpectralProduct::new(1, Dealias::None).grid(), 8); // floor
    }

    #[test]
    fn round_trip_preserves_band_limited_spectra() {
        let m_max = 5;
        let sp = SpectralProduct::new(m_max, Dealias::TwoThirds);
        let modes: Vec<Complex64> = (0..=2 * m_max)
            .map(|j| {
                let m = j as i64 - m_max as i64;
                // Hermitian pairs (value a function of |m|) so the grid
                // values are real.
                let a = m.unsigned_abs() as f64;
                let z = Complex64::new(0.1 * a, 0.05 * a * a);
                if m < 0 {
                    z.conj()
                } else if m == 0 {
                    Complex64::new(0.7, 0.0)
                } else {
                    z
                }
            })
            .collect();
        let grid = sp.to_grid(&modes);
        assert!(grid.iter().all(|z| z.im.abs() < 1e-12));
        let back = sp.to_modes(&grid.iter().map(|z| z.re).collect::<Vec<_>>());
        for (x, y) in back.iter().zip(&modes) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn product_of_cosines_matches_trig_identity() {
        // cos(κx)·cos(2κx) = ½cos(κx) + ½cos(3κx); spectra of cos(jκx) are
        // ½ at ±j.
        let m_max = 4;
        let half = Complex64::new(0.5, 0.0);
        let a = centered(m_max, &[(1, half), (-1, half)]);
        let b = centered(m_max, &[(2, half), (-2, half)]);
        let sp = SpectralProduct::new(m_max, Dealias::TwoThirds);
        let p = sp.multiply(&a, &b);
        let expect = centered(
            m_max,
            &[
                (1, Complex64::new(0.25, 0.0)),
                (-1, Complex64::new(0.25, 0.0)),
                (3, Complex64::new(0.25, 0.0)),
                (-3, Complex64::new(0.25, 0.0)),
            ],
        );
        for (x, y) in p.iter().zip(&expect) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn padded_product_equals_direct_convolution() {
        let m_max = 6;
        let mk = |seed: u64| -> Vec<Complex64> {
            // Hermitian spectrum from a simple deterministic sequence.
            let mut v = vec![Complex64::new(0.0, 0.0); 2 * m_max + 1];
            for m in 0..=m_max as i64 {
                let s = seed as f64 + m as f64;
                let z = if m == 0 {
                    Complex64::new((s * 0.37).sin(), 0.0)
                } else {
                    Complex64::new((s * 0.37).sin(), (s * 0.61).cos())
                };
                v[(m + m_max as i64) as usize] = z;
                v[(-m + m_max as i64) as usize] = z.conj();
            }
            v
        };
        let a = mk(3);
        let b = mk(11);
        let sp = SpectralProduct::new(m_max, Dealias::TwoThirds);
        let fast = sp.multiply(&a, &b);
        // Direct truncated convolution.
        let mm = m_max as i64;
        for m in -mm..=mm {
            let mut acc = Complex64::new(0.0, 0.0);
            for mp in -mm..=mm {
                let r = m - mp;
                if r.abs() <= mm {
                    acc += a[(mp + mm) as usize] * b[(r + mm) as usize];
                }
            }
            let got = fast[(m + mm) as usize];
            assert!((got - acc).norm() < 1e-12, "m = {m}: {got} vs {acc}");
        }
    }
}
