//! Finite-difference Poisson oracle: integrates ∂ₓE = ρ on a fine periodic
//! grid by cumulative Simpson quadrature and removes the mean, independent of
//! the spectral mode-division solver under test.

/// Antiderivative of `rho` on the uniform periodic grid (zero-mean gauge).
/// `rho` must have even length and integrate to ~0 over the period (a
/// neutral source); the result satisfies E' = ρ to O(h⁴).
pub fn cumulative_simpson_zero_mean(rho: &[f64], lx: f64) -> Vec<f64> {
    let g = rho.len();
    assert!(g >= 8 && g % 2 == 0, "need an even, reasonably fine grid");
    let h = lx / g as f64;
    let mut e = vec![0.0_f64; g];
    // Even points by composite Simpson, odd points by the 3-point
    // Newton–Cotes half-panel rule; the wrap uses periodicity.
    let mut i = 0;
    while i + 2 <= g {
        let r0 = rho[i];
        let r1 = rho[i + 1];
        let r2 = rho[(i + 2) % g];
        e[i + 1] = e[i] + h / 12.0 * (5.0 * r0 + 8.0 * r1 - r2);
        if i + 2 < g {
            e[i + 2] = e[i] + h / 3.0 * (r0 + 4.0 * r1 + r2);
        }
        i += 2;
    }
    let mean = e.iter().sum::<f64>() / g as f64;
    for v in &mut e {
        *v -= mean;
    }
    e
}
