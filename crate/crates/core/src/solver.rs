//! Tridiagonal linear solves with partial pivoting.
//!
//! Both implicit integrators reduce each step to tridiagonal systems: real
//! ones for the SW advection update, complex ones (per spatial Fourier mode)
//! for the Vlasov streaming update. Partial pivoting keeps the elimination
//! robust for strongly off-diagonal systems (large κ·Δt), at the cost of one
//! extra superdiagonal of fill-in.

use num_complex::Complex64;

/// Scalar interface needed by the banded elimination.
pub(crate) trait PivotScalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    const ZERO: Self;
    /// Magnitude used for pivot comparison (any monotone proxy works).
    fn pivot_size(self) -> f64;
}

impl PivotScalar for f64 {
    const ZERO: Self = 0.0;
    fn pivot_size(self) -> f64 {
        self.abs()
    }
}

impl PivotScalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn pivot_size(self) -> f64 {
        self.norm_sqr()
    }
}

/// Solves A·x = rhs for a tridiagonal A given in row-aligned bands:
/// `sub[i]` = A[i][i−1] (entry 0 ignored), `diag[i]` = A[i][i],
/// `sup[i]` = A[i][i+1] (last entry ignored). Returns `None` on a singular
/// pivot. Gaussian elimination with row swaps between the two candidate rows
/// of each column (partial pivoting for tridiagonal structure).
pub(crate) fn solve_tridiagonal<T: PivotScalar>(
    sub: &[T],
    diag: &[T],
    sup: &[T],
    rhs: &[T],
) -> Option<Vec<T>> {
    let n = diag.len();
    assert_eq!(sub.len(), n);
    assert_eq!(sup.len(), n);
    assert_eq!(rhs.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    // dl[i] = A[i+1][i], d[i] = A[i][i], du[i] = A[i][i+1], du2 = fill-in.
    let dl: Vec<T> = (0..n.saturating_sub(1)).map(|i| sub[i + 1]).collect();
    let mut d: Vec<T> = diag.to_vec();
    let mut du: Vec<T> = (0..n.saturating_sub(1)).map(|i| sup[i]).collect();
    let mut du2: Vec<T> = vec![T::ZERO; n.saturating_sub(2)];
    let mut b: Vec<T> = rhs.to_vec();

    for i in 0..n - 1 {
        if d[i].pivot_size() >= dl[i].pivot_size() {
            // No interchange.
            if d[i].pivot_size() == 0.0 {
                return None;
            }
            let fact = dl[i] / d[i];
            d[i + 1] = d[i + 1] - fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
            if i + 2 < n {
                du2[i] = T::ZERO;
            }
        } else {
            // Interchange rows i and i+1.
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = T::ZERO - fact * du2[i];
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i];
        }
    }
    if d[n - 1].pivot_size() == 0.0 {
        return None;
    }

    // Back substitution over the (at most) three stored upper bands.
    let mut x = b;
    x[n - 1] = x[n - 1] / d[n - 1];
    if n > 1 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Some(x)
}

pub(crate) fn solve_tridiagonal_f64(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &[f64],
) -> Option<Vec<f64>> {
    solve_tridiagonal(sub, diag, sup, rhs)
}
