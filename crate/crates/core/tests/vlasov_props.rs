//! Vlasov–Poisson properties checked against independent discretizations:
//! a finite-difference Poisson solve, pointwise collocation of the kinetic
//! equation, quadrature for the weighted norm, and the midpoint fixed-point
//! equations for the implicit step.

mod support;

use hermite_kinetics::{
    field_max_estimate, gauss_residual, hermite_weighted_h, poisson_solve, vlasov_rhs, vp_step,
    CoefficientField, Dealias, ElectricField, FieldTreatment, LbOperator, QuadratureRule, VpConfig,
};
use num_complex::Complex64;
use support::{colloc, poisson_fd, rng};

const SQRT_PI: f64 = 1.772_453_850_905_516_f64;

fn test_config(n_max: usize, m_max: usize, lx: f64, dt: f64, k: usize, nu: f64) -> VpConfig {
    VpConfig {
        n_max,
        m_max,
        k,
        nu,
        dt,
        t_final: dt,
        lx,
        picard_tol: 1e-13,
        picard_max: 200,
        dealias: Dealias::TwoThirds,
        field_treatment: FieldTreatment::Midpoint,
    }
}

#[test]
fn difference_stencils_match_textbook_values() {
    // Sanity-check the stencil generator the collocation oracle relies on.
    let w3 = colloc::fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
    for (got, want) in w3[1].iter().zip(&[-0.5, 0.0, 0.5]) {
        assert!((got - want).abs() < 1e-14);
    }
    for (got, want) in w3[2].iter().zip(&[1.0, -2.0, 1.0]) {
        assert!((got - want).abs() < 1e-14);
    }
    let w5 = colloc::fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
    let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
    for (got, want) in w5[1].iter().zip(&d1) {
        assert!((got - want).abs() < 1e-13);
    }
    for (got, want) in w5[2].iter().zip(&d2) {
        assert!((got - want).abs() < 1e-13);
    }
}

#[test]
fn poisson_solution_matches_finite_difference_integration() {
    // Independent route to E: sample the charge density 1 − ∫f dv on a fine
    // grid and integrate ∂ₓE = ρ with a cumulative Simpson rule under the
    // same zero-mean gauge.
    let lx = 4.0 * std::f64::consts::PI;
    let mut state =
        CoefficientField::maxwellian_with_cosine_perturbation(8, 4, lx, 0.08, 2).unwrap();
    // Add a second, asymmetric density mode to make the test non-trivial.
    let extra = Complex64::new(0.013, -0.028);
    state.set(1, 0, extra);
    state.set(-1, 0, extra.conj());
    let solution = poisson_solve(&state.density_row(), lx).unwrap();
    assert!(solution.neutrality_defect < 1e-15);

    let grid = 4096;
    let density_row = state.density_row();
    let m_top = state.m_max() as i64;
    let rho: Vec<f64> = (0..grid)
        .map(|j| {
            let x = lx * j as f64 / grid as f64;
            let mut f_density = 0.0;
            for m in -m_top..=m_top {
                let kappa = state.kappa(m);
                let z = density_row[(m + m_top) as usize];
                f_density += (z * Complex64::from_polar(1.0, kappa * x)).re;
            }
            1.0 - SQRT_PI * f_density
        })
        .collect();
    let e_fd = poisson_fd::cumulative_simpson_zero_mean(&rho, lx);
    let mut worst = 0.0_f64;
    for (j, e_ref) in e_fd.iter().enumerate() {
        let x = lx * j as f64 / grid as f64;
        worst = worst.max((solution.field.eval(x) - e_ref).abs());
    }
    assert!(worst < 1e-9, "max |E_spectral − E_fd| = {worst}");
    assert!(gauss_residual(&density_row, &solution.field).unwrap() < 1e-14);
}

#[test]
fn rhs_matches_collocation_on_a_smooth_state() {
    // One modest state cross-checked against the pointwise oracle (the
    // acceptance suite sweeps many); catches sign or factor slips in the
    // streaming / acceleration / damping assembly.
    let n_max = 6;
    let m_max = 3;
    let lx = 5.0;
    let k = 1;
    let nu = 0.8;
    let cfg = test_config(n_max, m_max, lx, 0.01, k, nu);
    let mut r = rng::rng(0x0701);
    let state = rng::hermitian_field(&mut r, n_max, m_max, lx, 0.1);
    let field = ElectricField::new(rng::hermitian_spectrum(&mut r, m_max, 0.2), lx).unwrap();
    let lb = LbOperator::new(hermite_kinetics::BasisKind::Aw, k, nu, n_max).unwrap();
    let implementation = vlasov_rhs(&state, &field, Some(&lb), &cfg).unwrap();
    let oracle = colloc::CollocationOracle::new(64, 2 * k);
    let reference = oracle.rhs(&state, &field, Some((k, nu)));
    let diff = implementation.max_abs_diff(&reference).unwrap();
    assert!(diff < 1e-7, "collocation mismatch: {diff}");
}

#[test]
fn implicit_step_satisfies_the_midpoint_equations() {
    // Feed the converged step back through the independent rhs evaluation at
    // the midpoint state and field: Ĉʲ − Ĉʲ⁻¹ must equal Δt times that rate
    // to within the Picard tolerance.
    let n_max = 12;
    let m_max = 4;
    let lx = 4.0 * std::f64::consts::PI;
    let cfg = test_config(n_max, m_max, lx, 0.02, 1, 1.0);
    let mut state =
        CoefficientField::maxwellian_with_cosine_perturbation(n_max, m_max, lx, 0.05, 1).unwrap();
    let mut r = rng::rng(0x0702);
    let noise = rng::hermitian_field(&mut r, n_max, m_max, lx, 0.01);
    for m in -(m_max as i64)..=m_max as i64 {
        for n in 0..=n_max {
            state.set(m, n, state.get(m, n) + noise.get(m, n));
        }
    }
    let lb = cfg.build_lb().unwrap();
    let (next, e_new, stats) = vp_step(&state, &cfg, Some(&lb)).unwrap();
    assert!(stats.residual <= cfg.picard_tol);

    let mut mid = CoefficientField::zeros(n_max, m_max, lx).unwrap();
    for m in -(m_max as i64)..=m_max as i64 {
        for n in 0..=n_max {
            mid.set(m, n, 0.5 * (state.get(m, n) + next.get(m, n)));
        }
    }
    let e_old = poisson_solve(&state.density_row(), lx).unwrap().field;
    let e_mid_modes: Vec<Complex64> = e_old
        .modes()
        .iter()
        .zip(e_new.modes())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let e_mid = ElectricField::new(e_mid_modes, lx).unwrap();
    let rate = vlasov_rhs(&mid, &e_mid, Some(&lb), &cfg).unwrap();

    let mut worst = 0.0_f64;
    for m in -(m_max as i64)..=m_max as i64 {
        for n in 0..=n_max {
            let residual = next.get(m, n) - state.get(m, n) - cfg.dt * rate.get(m, n);
            worst = worst.max(residual.norm());
        }
    }
    assert!(
        worst < 100.0 * cfg.picard_tol,
        "midpoint equations violated by {worst}"
    );
    // The returned field is the Poisson solution of the returned state.
    let e_check = poisson_solve(&next.density_row(), lx).unwrap().field;
    for (a, b) in e_new.modes().iter().zip(e_check.modes()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn weighted_norm_matches_two_dimensional_quadrature() {
    let n_max = 10;
    let m_max = 3;
    let lx = 5.0;
    let mut r = rng::rng(0x0703);
    let state = rng::hermitian_field(&mut r, n_max, m_max, lx, 0.4);
    let lib = hermite_weighted_h(&state);

    // Oracle: 𝓗 = ∫∫ f² e^{v²} dv dx. With f = p(x,v)e^{−v²} this is
    // ∫∫ p² e^{−v²}: Gauss–Hermite in v (p has degree ≤ 2N) and a uniform
    // trapezoid in x (exact for trigonometric polynomials of band < grid).
    let quad = QuadratureRule::gauss_hermite(24).unwrap();
    let x_grid = 64;
    let mut total = 0.0;
    for j in 0..x_grid {
        let x = lx * j as f64 / x_grid as f64;
        total += quad.integrate(|v| {
            let p = state.reconstruct(x, v) * (v * v).exp();
            p * p
        });
    }
    total *= lx / x_grid as f64;
    assert!(
        ((lib - total) / total).abs() < 1e-11,
        "weighted norm {lib} vs quadrature {total}"
    );
}

#[test]
fn field_amplitude_estimates_are_consistent() {
    let lx = 7.0;
    let mut r = rng::rng(0x0704);
    let field = ElectricField::new(rng::hermitian_spectrum(&mut r, 5, 0.3), lx).unwrap();
    let est = field_max_estimate(&field, 2.5).unwrap();
    // Dense scan of the same reconstruction.
    let mut peak = 0.0_f64;
    for j in 0..100_000 {
        let x = lx * j as f64 / 100_000.0;
        peak = peak.max(field.eval(x).abs());
    }
    assert!(
        (est.direct - 2.0 * peak).abs() < 1e-4 * (2.0 * peak),
        "direct {} vs dense {}",
        est.direct,
        2.0 * peak
    );
    assert!((est.bound - (8.0 * lx + SQRT_PI * 2.5)).abs() < 1e-12);
    assert!(est.bound > est.direct);
}

#[test]
fn long_run_keeps_reality_and_gauss_law() {
    // 50 implicit steps of a perturbed Maxwellian: the coefficient table must
    // remain exactly Hermitian (reality is structural, not approximate), the
    // Gauss law must hold every step, and the mass mode must be bit-frozen.
    let cfg = VpConfig {
        n_max: 16,
        m_max: 4,
        k: 2,
        nu: 1.0,
        dt: 1.0 / 32.0,
        t_final: 50.0 / 32.0,
        lx: 4.0 * std::f64::consts::PI,
        picard_tol: 1e-13,
        picard_max: 100,
        dealias: Dealias::TwoThirds,
        field_treatment: FieldTreatment::Midpoint,
    };
    let lb = cfg.build_lb().unwrap();
    let mut state = CoefficientField::maxwellian_with_cosine_perturbation(
        cfg.n_max, cfg.m_max, cfg.lx, 0.02, 1,
    )
    .unwrap();
    let mass_mode = state.get(0, 0);
    for step in 0..50 {
        let (next, field, _stats) = vp_step(&state, &cfg, Some(&lb)).unwrap();
        state = next;
        assert_eq!(state.hermitian_asymmetry(), 0.0, "step {step}");
        let residual = gauss_residual(&state.density_row(), &field).unwrap();
        assert!(residual < 1e-12, "step {step}: Gauss residual {residual}");
        assert_eq!(state.get(0, 0), mass_mode, "step {step}: mass mode moved");
    }
}

#[test]
fn explicit_field_treatment_also_converges() {
    let cfg = VpConfig {
        field_treatment: FieldTreatment::Explicit,
        ..test_config(10, 3, 4.0 * std::f64::consts::PI, 1.0 / 64.0, 1, 1.0)
    };
    let lb = cfg.build_lb().unwrap();
    let state = CoefficientField::maxwellian_with_cosine_perturbation(
        cfg.n_max, cfg.m_max, cfg.lx, 0.01, 1,
    )
    .unwrap();
    let (next, _field, stats) = vp_step(&state, &cfg, Some(&lb)).unwrap();
    assert!(stats.residual <= cfg.picard_tol);
    assert!(next.is_finite());
    // The lagged-field variant solves different midpoint equations, so it
    // should differ from the midpoint-field step at O(Δt²·amplitude) — small
    // but nonzero.
    let cfg_mid = VpConfig {
        field_treatment: FieldTreatment::Midpoint,
        ..cfg
    };
    let (next_mid, _f2, _s2) = vp_step(&state, &cfg_mid, Some(&lb)).unwrap();
    let diff = next.max_abs_diff(&next_mid).unwrap();
    assert!(diff > 0.0, "field treatments produced identical states");
    assert!(diff < 1e-4, "field treatments diverged: {diff}");
}

#[test]
fn non_neutral_states_are_reported_not_rejected() {
    let cfg = test_config(6, 2, 2.0 * std::f64::consts::PI, 0.01, 1, 1.0);
    let mut state =
        CoefficientField::maxwellian_with_cosine_perturbation(6, 2, cfg.lx, 0.01, 1).unwrap();
    // Inflate total density by 1%: the neutrality defect must be surfaced.
    state.set(0, 0, state.get(0, 0) * 1.01);
    let (_next, _field, stats) = vp_step(&state, &cfg, Some(&cfg.build_lb().unwrap())).unwrap();
    assert!(stats.neutrality_defect > 1e-3);
}
