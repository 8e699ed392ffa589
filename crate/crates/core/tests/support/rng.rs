//! Seeded random inputs for property tests: deterministic across runs and
//! platforms (ChaCha-based, never thread_rng).

use hermite_kinetics::{BasisKind, CoefficientField, CoefficientVector, Convention, HermiteBasis};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    r.gen_range(lo..hi)
}

/// Random coefficient vector with entries uniform in [−scale, scale].
pub fn coeff_vector(
    r: &mut ChaCha8Rng,
    kind: BasisKind,
    convention: Convention,
    n_max: usize,
    scale: f64,
) -> CoefficientVector {
    let basis = HermiteBasis::new(kind, n_max).unwrap();
    let values = (0..=n_max).map(|_| r.gen_range(-scale..scale)).collect();
    CoefficientVector::new(basis, convention, values).unwrap()
}

/// Random Hermitian-symmetric coefficient table (a real distribution):
/// entries for m > 0 are uniform complex, the m = 0 row is real, and
/// negative modes mirror by conjugation.
pub fn hermitian_field(
    r: &mut ChaCha8Rng,
    n_max: usize,
    m_max: usize,
    lx: f64,
    scale: f64,
) -> CoefficientField {
    let mut field = CoefficientField::zeros(n_max, m_max, lx).unwrap();
    for n in 0..=n_max {
        field.set(0, n, Complex64::new(r.gen_range(-scale..scale), 0.0));
        for m in 1..=m_max as i64 {
            let z = Complex64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale));
            field.set(m, n, z);
            field.set(-m, n, z.conj());
        }
    }
    field
}

/// Random Hermitian electric-field spectrum with the zero-mean gauge Ê₀ = 0.
pub fn hermitian_spectrum(r: &mut ChaCha8Rng, m_max: usize, scale: f64) -> Vec<Complex64> {
    let mut modes = vec![Complex64::new(0.0, 0.0); 2 * m_max + 1];
    for m in 1..=m_max {
        let z = Complex64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale));
        modes[m_max + m] = z;
        modes[m_max - m] = z.conj();
    }
    modes
}
