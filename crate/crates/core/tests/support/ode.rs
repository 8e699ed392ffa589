//! Reference ODE integration for oracle trajectories: an adaptive
//! Dormand–Prince 5(4) pair, independent of every integrator in the library
//! under test.

/// Integrates dy/dt = rhs(t, y) from `t0` to `t1` and returns y(t1).
///
/// Classic embedded 5(4) pair with FSAL and a standard step controller.
/// Tolerances are combined per component as atol + rtol·|y|.
pub fn dopri5(
    rhs: &dyn Fn(f64, &[f64]) -> Vec<f64>,
    y0: &[f64],
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
) -> Vec<f64> {
    assert!(t1 >= t0, "backward integration not supported");
    let mut y = y0.to_vec();
    if t1 == t0 {
        return y;
    }
    let dim = y.len();
    let span = t1 - t0;
    let mut t = t0;
    let mut h = (span * 1e-3).clamp(1e-10, 0.1);
    let mut k1 = rhs(t, &y);

    // Stage coefficients.
    const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [&[f64]; 6] = [
        &[0.2],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
        &[
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
        ],
        &[
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
        ],
        &[
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    // Difference between the 5th-order and embedded 4th-order weights.
    const E: [f64; 7] = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];

    let mut steps = 0usize;
    while t < t1 {
        steps += 1;
        assert!(steps < 10_000_000, "reference integrator exceeded step budget");
        if t + h > t1 {
            h = t1 - t;
        }
        let mut stages: Vec<Vec<f64>> = Vec::with_capacity(7);
        stages.push(k1.clone());
        for (s, row) in A.iter().enumerate() {
            let mut ys = y.clone();
            for (w, stage) in row.iter().zip(&stages) {
                for i in 0..dim {
                    ys[i] += h * w * stage[i];
                }
            }
            stages.push(rhs(t + C[s] * h, &ys));
        }
        // 5th-order solution is the last stage's argument (A row 6 = weights).
        let mut y_new = y.clone();
        for (w, stage) in A[5].iter().zip(&stages) {
            for i in 0..dim {
                y_new[i] += h * w * stage[i];
            }
        }
        // Embedded error estimate.
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (w, stage) in E.iter().zip(&stages) {
                e += w * stage[i];
            }
            e *= h;
            let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / dim as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = stages[6].clone(); // FSAL
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= grow;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    y
}
