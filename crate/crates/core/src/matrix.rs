//! Dense complex linear algebra for small dimensions.
//!
//! Matrices are stored row-major as flat `Vec<Complex64>`. Everything here is
//! immutable after construction and cheap to clone at the dimensions this
//! crate targets (N ≤ 16).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

pub type C64 = Complex64;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);
pub const I: C64 = Complex64::new(0.0, 1.0);

/// Dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build from a flat row-major buffer. Rejects wrong lengths and
    /// non-finite entries.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape);
        }
        for (i, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: i / dim,
                    col: i % dim,
                });
            }
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadShape);
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let dim = entries.len();
        let mut m = Self::zeros(dim);
        for (k, z) in entries.iter().enumerate() {
            m.data[k * dim + k] = *z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, factor: C64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.data[k * self.dim + k]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of the difference.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum (operator 1-norm).
    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, col: usize) -> ComplexVector {
        ComplexVector::from_iter((0..self.dim).map(|i| self.data[i * self.dim + col]))
    }

    pub fn set_column(&mut self, col: usize, v: &ComplexVector) {
        assert_eq!(v.dim(), self.dim);
        for i in 0..self.dim {
            self.data[i * self.dim + col] = v.data[i];
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "matrix apply dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let mut acc = ZERO;
            for j in 0..n {
                acc += self.data[i * n + j] * v.data[j];
            }
            out[i] = acc;
        }
        ComplexVector { data: out }
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim, rhs.dim);
        let dim = n * m;
        let mut out = ComplexMatrix::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        out.data[(i * m + p) * dim + (j * m + q)] = a * rhs.data[p * m + q];
                    }
                }
            }
        }
        out
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> LuFactors {
        LuFactors::new(self)
    }

    pub fn det(&self) -> C64 {
        self.lu().det()
    }

    /// ‖U†U − 1‖_max.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// ‖M − M†‖_max.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

/// Complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        ComplexVector { data }
    }

    pub fn from_iter(it: impl Iterator<Item = C64>) -> Self {
        ComplexVector { data: it.collect() }
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            data: vec![ZERO; dim],
        }
    }

    /// Computational basis state |index⟩.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize) -> C64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, value: C64) {
        self.data[i] = value;
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> ComplexVector {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, factor: C64) -> ComplexVector {
        ComplexVector {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim());
        ComplexVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim());
        ComplexVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// |self⟩⟨self| as a matrix.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.data[i] * self.data[j].conj());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// LU factorization with partial pivoting of a square complex matrix.
pub struct LuFactors {
    dim: usize,
    lu: Vec<C64>,
    pivots: Vec<usize>,
    sign_flips: usize,
    singular: bool,
}

impl LuFactors {
    fn new(m: &ComplexMatrix) -> Self {
        let n = m.dim;
        let mut lu = m.data.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0usize;
        let mut singular = false;
        for k in 0..n {
            let mut pivot_row = k;
            let mut best = lu[k * n + k].norm();
            for r in (k + 1)..n {
                let mag = lu[r * n + k].norm();
                if mag > best {
                    best = mag;
                    pivot_row = r;
                }
            }
            if best == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot_row * n + c);
                }
                pivots.swap(k, pivot_row);
                sign_flips += 1;
            }
            let inv = ONE / lu[k * n + k];
            for r in (k + 1)..n {
                let factor = lu[r * n + k] * inv;
                lu[r * n + k] = factor;
                for c in (k + 1)..n {
                    let sub = factor * lu[k * n + c];
                    lu[r * n + c] -= sub;
                }
            }
        }
        LuFactors {
            dim: n,
            lu,
            pivots,
            sign_flips,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> C64 {
        if self.singular {
            return ZERO;
        }
        let mut d = if self.sign_flips % 2 == 0 { ONE } else { -ONE };
        for k in 0..self.dim {
            d *= self.lu[k * self.dim + k];
        }
        d
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &ComplexVector) -> Result<ComplexVector> {
        if self.singular {
            return Err(Error::ConvergenceFailure { residual: f64::INFINITY });
        }
        let n = self.dim;
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
        let mut x: Vec<C64> = self.pivots.iter().map(|&p| b.data[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        Ok(ComplexVector { data: x })
    }

    /// Solve A X = B column by column.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for col in 0..n {
            let x = self.solve(&b.column(col))?;
            out.set_column(col, &x);
        }
        Ok(out)
    }
}

/// Unitary matrix: ‖U†U − 1‖_max and ||det U| − 1| both within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let policy = NumericPolicy::standard();
        let residual = m.unitarity_residual();
        if residual >= policy.structural_tol {
            return Err(Error::NotUnitary { deviation: residual });
        }
        let det_dev = (m.det().norm() - 1.0).abs();
        if det_dev >= policy.structural_tol {
            return Err(Error::NotUnitary { deviation: det_dev });
        }
        Ok(UnitaryMatrix { m })
    }

    /// Wrap a matrix known unitary by construction (products and adjoints of
    /// validated unitaries). Debug builds still check.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        debug_assert!(m.unitarity_residual() < 1e-8);
        UnitaryMatrix { m }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix {
            m: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            m: self.m.adjoint(),
        }
    }

    pub fn mul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix {
            m: self.m.mul(&rhs.m),
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        self.m.apply(v)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m.get(row, col)
    }
}

/// Hermitian matrix: ‖H − H†‖_max within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let deviation = m.hermiticity_residual();
        if deviation >= NumericPolicy::standard().hermitian_tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianMatrix { m })
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        debug_assert!(m.hermiticity_residual() < 1e-9);
        HermitianMatrix { m }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix {
            m: ComplexMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn scale(&self, factor: f64) -> HermitianMatrix {
        HermitianMatrix {
            m: self.m.scale(C64::new(factor, 0.0)),
        }
    }

    /// ⟨v|H|v⟩, real for Hermitian H.
    pub fn expectation(&self, v: &ComplexVector) -> f64 {
        v.inner(&self.m.apply(v)).re
    }
}

/// Matrix exponential of a skew-Hermitian generator.
///
/// The result of exponentiating an exactly skew-Hermitian matrix through the
/// diagonal Padé approximant is unitary in exact arithmetic, so the output
/// satisfies the `UnitaryMatrix` invariants up to roundoff.
pub fn expm_skew(generator: &ComplexMatrix) -> Result<UnitaryMatrix> {
    let policy = NumericPolicy::standard();
    let deviation = generator.max_abs_diff(&generator.adjoint().scale(-ONE));
    if deviation >= policy.hermitian_tol {
        return Err(Error::NotSkewHermitian { deviation });
    }
    let n = generator.dim();

    // Exact shortcut for diagonal generators.
    let mut diagonal = true;
    'outer: for i in 0..n {
        for j in 0..n {
            if i != j && generator.get(i, j) != ZERO {
                diagonal = false;
                break 'outer;
            }
        }
    }
    if diagonal {
        let entries: Vec<C64> = (0..n).map(|k| generator.get(k, k).exp()).collect();
        return Ok(UnitaryMatrix::new_unchecked(ComplexMatrix::diagonal(
            &entries,
        )));
    }

    Ok(UnitaryMatrix::new_unchecked(expm_pade(generator)))
}

// Scaling-and-squaring with diagonal Padé(13); theta from Higham's table.
fn expm_pade(a: &ComplexMatrix) -> ComplexMatrix {
    const THETA_13: f64 = 5.371920351148152;
    let norm = a.one_norm();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let (u, v) = pade13_parts(&scaled);
    let numer = v.add(&u);
    let denom = v.sub(&u);
    let mut result = denom
        .lu()
        .solve_matrix(&numer)
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    result
}

fn pade13_parts(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a.mul(a);
    let a4 = a2.mul(&a2);
    let a6 = a4.mul(&a2);

    let c = |k: usize| C64::new(B[k], 0.0);
    let w = a6
        .scale(c(13))
        .add(&a4.scale(c(11)))
        .add(&a2.scale(c(9)));
    let u_inner = a6
        .mul(&w)
        .add(&a6.scale(c(7)))
        .add(&a4.scale(c(5)))
        .add(&a2.scale(c(3)))
        .add(&id.scale(c(1)));
    let u = a.mul(&u_inner);

    let z = a6
        .scale(c(12))
        .add(&a4.scale(c(10)))
        .add(&a2.scale(c(8)));
    let v = a6
        .mul(&z)
        .add(&a6.scale(c(6)))
        .add(&a4.scale(c(4)))
        .add(&a2.scale(c(2)))
        .add(&id.scale(c(0)));
    (u, v)
}

/// Pauli matrices and common qubit states.
pub mod pauli {
    use super::{C64, ComplexMatrix, ONE, ZERO, I};

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    /// n·σ for a 3-vector n (not necessarily unit).
    pub fn dot(n: [f64; 3]) -> ComplexMatrix {
        let (nx, ny, nz) = (n[0], n[1], n[2]);
        ComplexMatrix::new(
            2,
            vec![
                C64::new(nz, 0.0),
                C64::new(nx, -ny),
                C64::new(nx, ny),
                C64::new(-nz, 0.0),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn diag_skew(phases: &[f64]) -> ComplexMatrix {
        ComplexMatrix::diagonal(
            &phases
                .iter()
                .map(|&p| C64::new(0.0, p))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let u = expm_skew(&ComplexMatrix::zeros(3)).unwrap();
        assert!(u.matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn expm_diagonal_shortcut() {
        // G = −i·diag(1, −1) → diag(e^{−i}, e^{i})
        let g = diag_skew(&[-1.0, 1.0]);
        let u = expm_skew(&g).unwrap();
        let expected = ComplexMatrix::diagonal(&[C64::from_polar(1.0, -1.0), C64::from_polar(1.0, 1.0)]);
        assert!(u.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn expm_pauli_rotation() {
        // exp(−i(π/2)σ_x) = −iσ_x
        let g = pauli::sigma_x().scale(C64::new(0.0, -FRAC_PI_2));
        let u = expm_skew(&g).unwrap();
        let expected = pauli::sigma_x().scale(-I);
        assert!(u.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn expm_rejects_non_skew() {
        let err = expm_skew(&pauli::sigma_z()).unwrap_err();
        assert!(matches!(err, Error::NotSkewHermitian { .. }));
    }

    #[test]
    fn lu_det_and_solve() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            vec![C64::new(1.0, 0.0), C64::new(3.0, 0.5)],
        ])
        .unwrap();
        let det = m.det();
        let expected = C64::new(2.0, 1.0) * C64::new(3.0, 0.5) - C64::new(0.0, -1.0);
        assert!((det - expected).norm() < 1e-14);

        let b = ComplexVector::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
        let x = m.lu().solve(&b).unwrap();
        let back = m.apply(&x);
        assert!(back.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn kron_of_identities() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(a.kron(&b).max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexMatrix::diagonal(&[ONE, C64::new(2.0, 0.0)]);
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let m = ComplexMatrix::new(2, vec![ONE, ZERO, C64::new(f64::NAN, 0.0), ONE]);
        assert!(m.is_err());
    }
}
