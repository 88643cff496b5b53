//! Characteristic polynomial by the Faddeev–LeVerrier recursion.
//!
//! The recursion produces exact coefficient structure (elementary symmetric
//! functions of the spectrum), which is what the secular-coefficient
//! identities need; root-finding accuracy is not the point here.

use crate::matrix::{C64, ComplexMatrix, ONE};

/// Coefficients c_0..c_N of det(M − λ·1), so c_N = (−1)^N and c_0 = det M.
pub fn char_poly(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.dim();
    // Faddeev–LeVerrier for p(λ) = det(λ·1 − M) = Σ_k a_k λ^k, a_N = 1.
    let mut a = vec![C64::new(0.0, 0.0); n + 1];
    a[n] = ONE;
    let mut aux = ComplexMatrix::identity(n);
    for k in 1..=n {
        let x = m.mul(&aux);
        let coeff = -x.trace() / C64::new(k as f64, 0.0);
        a[n - k] = coeff;
        aux = x;
        for d in 0..n {
            aux.set(d, d, aux.get(d, d) + coeff);
        }
    }
    // det(M − λ·1) = (−1)^N det(λ·1 − M)
    if n % 2 == 1 {
        for c in a.iter_mut() {
            *c = -*c;
        }
    }
    a
}

/// Evaluate a coefficient list at λ.
pub fn poly_eval(coeffs: &[C64], lambda: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * lambda + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli, ZERO, I};

    #[test]
    fn identity_two_by_two() {
        // det(1 − λ) = (1 − λ)² = λ² − 2λ + 1
        let c = char_poly(&ComplexMatrix::identity(2));
        assert!((c[0] - ONE).norm() < 1e-15);
        assert!((c[1] + C64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((c[2] - ONE).norm() < 1e-15);
    }

    #[test]
    fn constant_term_is_determinant() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.0, 2.0), C64::new(0.5, -0.25), ZERO],
            vec![I, C64::new(-1.0, 0.0), C64::new(2.0, 2.0)],
            vec![C64::new(0.0, -0.5), ONE, C64::new(3.0, 1.0)],
        ])
        .unwrap();
        let c = char_poly(&m);
        assert!((c[0] - m.det()).norm() < 1e-12);
        // N=3 leading coefficient is (−1)³
        assert!((c[3] + ONE).norm() < 1e-15);
    }

    #[test]
    fn roots_of_pauli_z() {
        let c = char_poly(&pauli::sigma_z());
        for lambda in [ONE, -ONE] {
            assert!(poly_eval(&c, lambda).norm() < 1e-14);
        }
    }
}
