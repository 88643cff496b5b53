//! Holonomy data of a parallel-transporting family: the overlap matrix
//! σ_kl = ⟨ψ_k|U(1)|ψ_l⟩, its gauge-invariant cyclic products γ^(l), the
//! eigenphase spectrum (defined for every unitary σ, with no nodal points),
//! gauge transformations, and the relation between eigenphases and the
//! cyclic geometric phases of the eigenvectors.

use num_complex::Complex64;

use crate::eig::{eig_unitary_matrix, EigUnitary};
use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ComplexVector};
use crate::policy::{principal_angle, NumericPolicy};
use crate::transport::{Basis, TransportResult};

/// Overlap matrix of a final unitary in a transported basis.
#[derive(Debug, Clone)]
pub struct SigmaMatrix {
    m: ComplexMatrix,
}

/// Direction in which a γ index chain multiplies σ entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// σ_{j₁jₗ}·σ_{jₗjₗ₋₁}···σ_{j₂j₁}: each factor σ_{ab} is the amplitude
    /// for ψ_b → ψ_a, so the chain steps through the cycle j₁→j₂→…→jₗ→j₁.
    Literal,
    /// The transposed chain σ_{j₁j₂}·σ_{j₂j₃}···σ_{jₗj₁}.
    Reversed,
}

/// Gauge-invariant cyclic product over distinct basis indices.
#[derive(Debug, Clone)]
pub struct GammaValue {
    pub indices: Vec<usize>,
    pub value: C64,
}

impl GammaValue {
    pub fn order(&self) -> usize {
        self.indices.len()
    }
}

/// Per-basis-vector phase angles of a gauge transformation
/// |ψ_k⟩ → e^{iα_k}|ψ_k⟩.
#[derive(Debug, Clone)]
pub struct GaugePhases(pub Vec<f64>);

/// Eigenphases of a σ-matrix with the source it came from.
#[derive(Debug, Clone)]
pub struct Spectrum {
    phases: Vec<f64>,
    vectors: ComplexMatrix,
    source: ComplexMatrix,
}

impl Spectrum {
    /// Eigenphases in (−π, π], canonically ordered.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Eigenvector columns, same order as the phases.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn source(&self) -> &ComplexMatrix {
        &self.source
    }

    pub fn reconstruction_residual(&self) -> f64 {
        EigUnitary {
            phases: self.phases.clone(),
            vectors: self.vectors.clone(),
        }
        .reconstruction_residual(&self.source)
    }

    /// |Στ_k − arg det σ| on the circle; consistency of phases with the
    /// determinant.
    pub fn phase_sum_vs_det(&self) -> f64 {
        let sum: f64 = self.phases.iter().sum();
        let det_arg = self.source.det().arg();
        crate::policy::angle_distance(sum, det_arg)
    }
}

impl SigmaMatrix {
    /// σ_kl = ⟨ψ_k|U|ψ_l⟩ for a final unitary whose family the caller attests
    /// is parallel-transporting.
    pub fn from_unitary(
        final_unitary: &crate::matrix::UnitaryMatrix,
        basis: &Basis,
    ) -> Result<Self> {
        if basis.dim() != final_unitary.dim() {
            return Err(Error::DimensionMismatch {
                expected: final_unitary.dim(),
                got: basis.dim(),
            });
        }
        let m = basis
            .matrix()
            .adjoint()
            .mul(final_unitary.matrix())
            .mul(basis.matrix());
        Self::validated(m)
    }

    /// Build from a transport result, verifying the parallel-transport
    /// residual first.
    pub fn from_transport(result: &TransportResult, basis: &Basis) -> Result<Self> {
        let residual = result.pt_residual(basis);
        if residual >= NumericPolicy::standard().transport_tol {
            return Err(Error::NotParallelTransported { residual });
        }
        Self::from_unitary(result.final_unitary(), basis)
    }

    /// Wrap an explicit matrix (tests and synthetic σ's); checks unitarity.
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::validated(m)
    }

    fn validated(m: ComplexMatrix) -> Result<Self> {
        let residual = m.unitarity_residual();
        if residual >= 1e-9 {
            return Err(Error::NotUnitary { deviation: residual });
        }
        let det_dev = (m.det().norm() - 1.0).abs();
        if det_dev >= 1e-9 {
            return Err(Error::NotUnitary { deviation: det_dev });
        }
        Ok(SigmaMatrix { m })
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn entry(&self, k: usize, l: usize) -> C64 {
        self.m.get(k, l)
    }

    /// γ over the given distinct indices, literal chain orientation.
    /// Order 1 returns the diagonal entry σ_jj.
    pub fn gamma(&self, indices: &[usize]) -> Result<GammaValue> {
        self.gamma_oriented(indices, Orientation::Literal)
    }

    pub fn gamma_oriented(&self, indices: &[usize], orientation: Orientation) -> Result<GammaValue> {
        let n = self.dim();
        let mut seen = vec![false; n];
        for &j in indices {
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, dim: n });
            }
            if seen[j] {
                return Err(Error::RepeatedIndex { index: j });
            }
            seen[j] = true;
        }
        if indices.is_empty() {
            return Err(Error::BadShape);
        }
        let l = indices.len();
        let value = if l == 1 {
            self.m.get(indices[0], indices[0])
        } else {
            let mut acc = Complex64::new(1.0, 0.0);
            match orientation {
                Orientation::Literal => {
                    // σ_{j₁jₗ}·σ_{jₗjₗ₋₁}···σ_{j₂j₁}
                    acc *= self.m.get(indices[0], indices[l - 1]);
                    for step in (1..l).rev() {
                        acc *= self.m.get(indices[step], indices[step - 1]);
                    }
                }
                Orientation::Reversed => {
                    // σ_{j₁j₂}·σ_{j₂j₃}···σ_{jₗj₁}
                    for step in 0..l - 1 {
                        acc *= self.m.get(indices[step], indices[step + 1]);
                    }
                    acc *= self.m.get(indices[l - 1], indices[0]);
                }
            }
            acc
        };
        Ok(GammaValue {
            indices: indices.to_vec(),
            value,
        })
    }

    /// Eigenphase spectrum of σ. Total: succeeds on every unitary σ,
    /// including the ones where all low-order γ vanish.
    pub fn nodal_free_spectrum(&self) -> Result<Spectrum> {
        let eig = eig_unitary_matrix(&self.m)?;
        Ok(Spectrum {
            phases: eig.phases,
            vectors: eig.vectors,
            source: self.m.clone(),
        })
    }

    /// σ_kl → σ_kl·e^{−i(α_k − α_l)}, i.e. V σ V† with V = diag(e^{−iα_k}).
    /// Applied entrywise, so each entry transforms by exactly that factor.
    pub fn gauge_transform(&self, alphas: &GaugePhases) -> Result<SigmaMatrix> {
        let n = self.dim();
        if alphas.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alphas.0.len(),
            });
        }
        let w: Vec<C64> = alphas.0.iter().map(|&a| C64::from_polar(1.0, -a)).collect();
        let mut m = ComplexMatrix::zeros(n);
        for k in 0..n {
            for l in 0..n {
                m.set(k, l, self.m.get(k, l) * w[k] * w[l].conj());
            }
        }
        Ok(SigmaMatrix { m })
    }
}

/// Φ[z] = z/|z| for z away from the nodal tolerance; at or below it the
/// phase factor is undefined and the error is the signal.
pub fn phi_of(z: C64) -> Result<C64> {
    phi_of_with_tol(z, NumericPolicy::standard().nodal_tol)
}

pub fn phi_of_with_tol(z: C64, nodal_tol: f64) -> Result<C64> {
    let magnitude = z.norm();
    if magnitude <= nodal_tol {
        return Err(Error::NodalPoint { magnitude });
    }
    Ok(z / C64::new(magnitude, 0.0))
}

/// Cyclic geometric phase β_k of the k-th eigenvector of U(1):
/// β_k = τ_k + ∫₀¹⟨φ_k(s)|H(s)|φ_k(s)⟩ds, reduced to (−π, π].
///
/// Eigenvectors here are those of the final unitary in the ambient space;
/// the eigenphases match the σ-matrix spectrum for the transported basis.
pub fn aa_cyclic_phase(result: &TransportResult, eigvec_index: usize) -> Result<f64> {
    let eig = crate::eig::eig_unitary(result.final_unitary())?;
    if eigvec_index >= eig.phases.len() {
        return Err(Error::IndexOutOfRange {
            index: eigvec_index,
            dim: eig.phases.len(),
        });
    }
    let tau = eig.phases[eigvec_index];
    let phi_k = eig.vector(eigvec_index).normalized();
    let dyn_phase = result.dynamical_phase(&phi_k)?;
    Ok(principal_angle(tau + dyn_phase))
}

/// Discrete Bargmann-invariant evaluation of the same cyclic phase.
///
/// The eigenvector ray path is closed because U(1)φ_k = λ_kφ_k, so the chain
/// of consecutive overlaps, closed with the conjugate-eigenvalue correction,
/// is projectively invariant and converges to β_k as the grid refines.
/// Independent of the dynamical-phase integration route.
pub fn pancharatnam_phase(result: &TransportResult, eigvec_index: usize) -> Result<f64> {
    let eig = crate::eig::eig_unitary(result.final_unitary())?;
    if eigvec_index >= eig.phases.len() {
        return Err(Error::IndexOutOfRange {
            index: eigvec_index,
            dim: eig.phases.len(),
        });
    }
    pancharatnam_phase_of_state(result, &eig.vector(eigvec_index).normalized())
}

/// Discrete geometric phase of any state whose ray path closes under the
/// family, via the normalized overlap chain
/// β = −arg[∏_j⟨φ(s_j)|φ(s_{j+1})⟩·⟨φ(1)|φ(0)⟩].
pub fn pancharatnam_phase_of_state(
    result: &TransportResult,
    state: &ComplexVector,
) -> Result<f64> {
    let norm = state.norm();
    if (norm - 1.0).abs() >= NumericPolicy::standard().structural_tol {
        return Err(Error::StateNotNormalized { norm });
    }
    // Ray closure: |⟨φ|U(1)|φ⟩| must be 1 for the chain to be projectively
    // closed.
    let closure_overlap = state.inner(&result.final_unitary().apply(state)).norm();
    if (closure_overlap - 1.0).abs() > 1e-6 {
        return Err(Error::InvariantViolation {
            what: format!(
                "state ray is not cyclic under the family (|⟨φ|U(1)|φ⟩| = {closure_overlap})"
            ),
        });
    }

    let mut product = C64::new(1.0, 0.0);
    let mut prev = state.clone();
    for u in result.unitaries().iter().skip(1) {
        let cur = u.apply(state);
        let overlap = prev.inner(&cur);
        let magnitude = overlap.norm();
        if magnitude < 1e-6 {
            return Err(Error::VanishingOverlap { magnitude });
        }
        product *= overlap / C64::new(magnitude, 0.0);
        prev = cur;
    }
    // Close the chain: ⟨φ(1)|φ(0)⟩ has unit modulus by the cyclicity check.
    let closing = prev.inner(state);
    product *= closing / C64::new(closing.norm(), 0.0);
    Ok(principal_angle(-product.arg()))
}
