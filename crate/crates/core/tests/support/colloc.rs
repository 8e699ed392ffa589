//! Independent collocation oracle for the Fourier–Hermite right-hand side.
//!
//! The library computes coefficient rates through ladder maps and spectral
//! convolutions. This oracle never touches that machinery: it reconstructs
//! the distribution pointwise on a fine (x, v) grid, evaluates the PDE
//!
//!     ∂ₜf = −v ∂ₓf + E ∂ᵥf − ν(−1)ᵏ (L*)ᵏLᵏ f
//!
//! and Galerkin-projects the result back onto coefficients by trapezoid
//! quadrature in v and a direct DFT in x. The acceleration term uses
//! finite-difference velocity derivatives (13-point stencils via the
//! Fornberg weight algorithm). The collision term is projected by moving
//! the operator onto the polynomial test function through integration by
//! parts — its adjoint (−½D + v·)ᵏ(−D)ᵏ is composed with plain product-rule
//! calculus on monomial coefficients — because finite differences of order
//! 2k ≥ 4 amplify function-evaluation roundoff by h^(−2k) and cannot reach
//! the comparison tolerance in double precision. No ladder identity or
//! eigenvalue table enters anywhere, so agreement with the library remains
//! a genuine two-path check of the discretized equations.

use hermite_kinetics::{hermite_eval_all, CoefficientField, ElectricField};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Finite-difference weights on arbitrary nodes (Fornberg's algorithm):
/// returns w[order][node] such that f⁽ᵒʳᵈᵉʳ⁾(z) ≈ Σᵢ w[order][i]·f(nodes[i]).
pub fn fd_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    assert!(n > max_order, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0_f64; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for s in (1..=mn).rev() {
                    c[s][i] = c1 * (s as f64 * c[s - 1][i - 1] - c5 * c[s][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for s in (1..=mn).rev() {
                c[s][j] = (c4 * c[s][j] - s as f64 * c[s - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Polynomial in v by coefficient list, lowest degree first.
#[derive(Clone, Debug)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    fn zero() -> Self {
        Poly(vec![])
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * v + c)
    }

    fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, &c)| p as f64 * c)
                .collect(),
        )
    }

    fn times_v(&self) -> Poly {
        if self.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    fn axpy(&mut self, a: f64, other: &Poly) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (slot, &c) in self.0.iter_mut().zip(&other.0) {
            *slot += a * c;
        }
    }
}

/// A differential operator Σⱼ pⱼ(v)·Dʲ as its coefficient polynomials.
pub type OperatorPoly = Vec<Poly>;

/// Left-composes the first-order operator a·D + b·(v·) onto `op`:
/// D∘(pDʲ) = p′Dʲ + pDʲ⁺¹ and (v·)∘(pDʲ) = (vp)Dʲ.
fn compose_first_order(a: f64, b: f64, op: &OperatorPoly) -> OperatorPoly {
    let mut out: OperatorPoly = vec![Poly::zero(); op.len() + 1];
    for (j, p) in op.iter().enumerate() {
        if a != 0.0 {
            out[j].axpy(a, &p.derivative());
            out[j + 1].axpy(a, p);
        }
        if b != 0.0 {
            out[j].axpy(b, &p.times_v());
        }
    }
    out
}

/// Operator polynomial of (L*)ᵏLᵏ for the asymmetrically-weighted family:
/// L = ½∂ᵥ + v·, L* = ∂ᵥ.
pub fn aw_dissipation_poly(k: usize) -> OperatorPoly {
    let mut op: OperatorPoly = vec![Poly(vec![1.0])];
    for _ in 0..k {
        op = compose_first_order(0.5, 1.0, &op); // L
    }
    for _ in 0..k {
        op = compose_first_order(1.0, 0.0, &op); // L*
    }
    op
}

/// Monomial coefficients of H₀..H_{n_max} from the three-term recurrence
/// H_{n+1} = 2v·Hₙ − 2n·H_{n−1}.
fn hermite_monomials(n_max: usize) -> Vec<Poly> {
    let mut h = vec![Poly(vec![1.0])];
    if n_max >= 1 {
        h.push(Poly(vec![0.0, 2.0]));
    }
    for n in 1..n_max {
        let mut next = h[n].times_v();
        for c in &mut next.0 {
            *c *= 2.0;
        }
        next.axpy(-2.0 * n as f64, &h[n - 1]);
        h.push(next);
    }
    h
}

/// Adjoint of (L*)ᵏLᵏ with respect to plain dv, applied to each test
/// polynomial Hₙ: since D† = −D and (v·)† = v·, the adjoint factors as
/// (−½D + v·)ᵏ ∘ (−D)ᵏ. Composing it on Hₙ needs only product-rule
/// calculus on monomial coefficients, so ∫(Kf)·Hₙ dv = ∫f·(K†Hₙ) dv is
/// computable without differentiating the reconstructed distribution.
pub fn adjoint_dissipation_polys(k: usize, n_max: usize) -> Vec<Poly> {
    hermite_monomials(n_max)
        .into_iter()
        .map(|hn| {
            let mut q = hn;
            for _ in 0..k {
                let mut d = q.derivative();
                for c in &mut d.0 {
                    *c = -*c;
                }
                q = d;
            }
            for _ in 0..k {
                let mut out = q.times_v();
                out.axpy(-0.5, &q.derivative());
                q = out;
            }
            q
        })
        .collect()
}

/// Collocation grid and reusable tables.
pub struct CollocationOracle {
    x_points: usize,
    v_nodes: Vec<f64>,
    /// Per derivative order 1..=max_order: per node, (start index, weights).
    stencils: Vec<Vec<(usize, Vec<f64>)>>,
    max_order: usize,
}

const STENCIL: usize = 13;
const V_EXTENT: f64 = 10.0;
const V_POINTS: usize = 6001;

impl CollocationOracle {
    /// `max_order`: highest v-derivative needed (2k for the dissipation
    /// operator; at least 1 for the acceleration term).
    pub fn new(x_points: usize, max_order: usize) -> Self {
        let h = 2.0 * V_EXTENT / (V_POINTS - 1) as f64;
        let v_nodes: Vec<f64> = (0..V_POINTS).map(|i| -V_EXTENT + i as f64 * h).collect();
        let mut stencils = Vec::with_capacity(max_order);
        for order in 1..=max_order {
            let mut per_node = Vec::with_capacity(V_POINTS);
            for i in 0..V_POINTS {
                let start = i
                    .saturating_sub(STENCIL / 2)
                    .min(V_POINTS - STENCIL);
                let window: Vec<f64> = v_nodes[start..start + STENCIL].to_vec();
                let w = fd_weights(v_nodes[i], &window, order);
                per_node.push((start, w[order].clone()));
            }
            stencils.push(per_node);
        }
        Self {
            x_points,
            v_nodes,
            stencils,
            max_order,
        }
    }

    fn derivative(&self, values: &[f64], order: usize) -> Vec<f64> {
        assert!(order >= 1 && order <= self.max_order);
        let per_node = &self.stencils[order - 1];
        (0..values.len())
            .map(|i| {
                let (start, w) = &per_node[i];
                w.iter()
                    .zip(&values[*start..start + STENCIL])
                    .map(|(wi, fi)| wi * fi)
                    .sum()
            })
            .collect()
    }

    /// Evaluates the PDE right-hand side for the distribution described by
    /// `state` under the field `field`, with optional dissipation
    /// (half-order k, strength ν), and projects it back onto a coefficient
    /// table of the same shape.
    pub fn rhs(
        &self,
        state: &CoefficientField,
        field: &ElectricField,
        dissipation: Option<(usize, f64)>,
    ) -> CoefficientField {
        let n_max = state.n_max();
        let m_top = state.m_max() as i64;
        let lx = state.lx();
        let g = self.x_points;
        assert!(
            g >= 4 * state.m_max() + 2,
            "x grid too coarse for exact quadratic products"
        );
        let p = self.v_nodes.len();
        let h = self.v_nodes[1] - self.v_nodes[0];

        // Hermite table H[n][i] and weight e^{−v²}.
        let hermite: Vec<Vec<f64>> = {
            let mut per_v: Vec<Vec<f64>> = Vec::with_capacity(p);
            for &v in &self.v_nodes {
                per_v.push(hermite_eval_all(n_max, v));
            }
            (0..=n_max)
                .map(|n| per_v.iter().map(|row| row[n]).collect())
                .collect()
        };
        let weight: Vec<f64> = self.v_nodes.iter().map(|&v| (-v * v).exp()).collect();

        // Radial profiles per Fourier mode: ρ_m(v) = Σ_n Ĉ_{m,n} Hₙ(v) e^{−v²}.
        let profiles: Vec<Vec<Complex64>> = (-m_top..=m_top)
            .map(|m| {
                let row = state.mode_coefficients(m);
                (0..p)
                    .map(|i| {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (n, c) in row.iter().enumerate() {
                            s += c * hermite[n][i];
                        }
                        s * weight[i]
                    })
                    .collect()
            })
            .collect();

        // For the collision term, tabulate q̃ₙ(vᵢ) = −ν(−1)ᵏ·(K†Hₙ)(vᵢ)/normₙ
        // so the per-x projection only needs Σᵢ trapz·f(vᵢ)·q̃ₙ(vᵢ)·h.
        let dissipation_tables: Option<Vec<Vec<f64>>> = dissipation.map(|(k, nu)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            adjoint_dissipation_polys(k, n_max)
                .iter()
                .enumerate()
                .map(|(n, q)| {
                    let norm = PI.sqrt() * 2f64.powi(n as i32) * (1..=n).product::<usize>() as f64;
                    self.v_nodes
                        .iter()
                        .map(|&v| -nu * sign * q.eval(v) / norm)
                        .collect()
                })
                .collect()
        });

        // Accumulators for the v-projected integrands per (x, n).
        let norms: Vec<f64> = {
            let mut out = Vec::with_capacity(n_max + 1);
            let mut norm = PI.sqrt();
            for n in 0..=n_max {
                if n > 0 {
                    norm *= 2.0 * n as f64;
                }
                out.push(norm);
            }
            out
        };
        let mut projected: Vec<Vec<f64>> = vec![vec![0.0; n_max + 1]; g];

        for gx in 0..g {
            let x = lx * gx as f64 / g as f64;
            // f(x, ·) and ∂ₓf(x, ·) from the mode profiles.
            let mut f_row = vec![0.0_f64; p];
            let mut fx_row = vec![0.0_f64; p];
            for (jm, m) in (-m_top..=m_top).enumerate() {
                let kappa = 2.0 * PI * m as f64 / lx;
                let phase = Complex64::from_polar(1.0, kappa * x);
                let ik_phase = Complex64::new(0.0, kappa) * phase;
                for i in 0..p {
                    f_row[i] += (profiles[jm][i] * phase).re;
                    fx_row[i] += (profiles[jm][i] * ik_phase).re;
                }
            }
            let e_val = field.eval(x);
            let d1 = self.derivative(&f_row, 1);
            let rate: Vec<f64> = (0..p)
                .map(|i| -self.v_nodes[i] * fx_row[i] + e_val * d1[i])
                .collect();
            // Trapezoid projection ∫ rate·Hₙ dv / (√π 2ⁿ n!), plus the
            // adjoint-projected collision term ∫ f·q̃ₙ dv.
            for n in 0..=n_max {
                let mut acc = 0.0;
                for i in 0..p {
                    let trapz = if i == 0 || i == p - 1 { 0.5 } else { 1.0 };
                    acc += trapz * rate[i] * hermite[n][i] / norms[n];
                    if let Some(tables) = &dissipation_tables {
                        acc += trapz * f_row[i] * tables[n][i];
                    }
                }
                projected[gx][n] = acc * h;
            }
        }

        // Direct DFT in x.
        let mut out = CoefficientField::zeros(n_max, state.m_max(), lx).unwrap();
        for m in -m_top..=m_top {
            for n in 0..=n_max {
                let mut acc = Complex64::new(0.0, 0.0);
                for (gx, row) in projected.iter().enumerate() {
                    let phase = -2.0 * PI * (m as f64) * (gx as f64) / g as f64;
                    acc += Complex64::from_polar(row[n] / g as f64, phase);
                }
                out.set(m, n, acc);
            }
        }
        out
    }
}

