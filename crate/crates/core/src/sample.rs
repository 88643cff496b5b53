//! Seeded random objects for sweeps, property tests and the verification
//! suite: unitaries, Hermitian generators, bases, states, and
//! parallel-transporting families.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{expm_skew, C64, ComplexMatrix, ComplexVector, HermitianMatrix, UnitaryMatrix};
use crate::transport::{Basis, HamiltonianFamily};

pub fn standard_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Random skew-Hermitian matrix with N(0,1) off-diagonal parts and
/// imaginary diagonal.
pub fn random_skew_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        g.set(i, i, C64::new(0.0, normal(rng)));
        for j in 0..i {
            let z = C64::new(normal(rng), normal(rng));
            g.set(i, j, z);
            g.set(j, i, -z.conj());
        }
    }
    g
}

/// Haar-ish random unitary via the exponential of a random skew generator.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> UnitaryMatrix {
    expm_skew(&random_skew_hermitian(rng, dim)).expect("random generator is skew-Hermitian")
}

/// Random Hermitian matrix with N(0,1) entries.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianMatrix {
    let mut h = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        h.set(i, i, C64::new(normal(rng), 0.0));
        for j in 0..i {
            let z = C64::new(normal(rng), normal(rng));
            h.set(i, j, z);
            h.set(j, i, z.conj());
        }
    }
    HermitianMatrix::new(h).expect("construction is Hermitian")
}

/// Random orthonormal basis (columns of a random unitary).
pub fn random_basis(rng: &mut ChaCha8Rng, dim: usize) -> Basis {
    Basis::new(random_unitary(rng, dim).into_matrix()).expect("unitary columns are orthonormal")
}

/// Random normalized state.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> ComplexVector {
    ComplexVector::new(
        (0..dim)
            .map(|_| C64::new(normal(rng), normal(rng)))
            .collect(),
    )
    .normalized()
}

/// Random phase angles in [0, 2π).
pub fn random_angles(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI))
        .collect()
}

/// Constant-Hamiltonian family that parallel-transports `basis` exactly:
/// a random Hermitian generator with its diagonal (in that basis) removed.
pub fn random_transporting_family(
    rng: &mut ChaCha8Rng,
    dim: usize,
    basis: &Basis,
) -> HamiltonianFamily {
    let h = random_hermitian(rng, dim);
    let coords = basis.matrix().adjoint().mul(h.matrix()).mul(basis.matrix());
    let mut cleaned = coords;
    for k in 0..dim {
        cleaned.set(k, k, C64::new(0.0, 0.0));
    }
    let ambient = basis.matrix().mul(&cleaned).mul(&basis.matrix().adjoint());
    HamiltonianFamily::constant(HermitianMatrix::new(ambient).expect("Hermitian by construction"))
        .expect("single positive-duration segment")
}

/// Multi-segment random family (not generally parallel-transporting).
pub fn random_segmented_family(
    rng: &mut ChaCha8Rng,
    dim: usize,
    segments: usize,
) -> HamiltonianFamily {
    let segs = (0..segments.max(1))
        .map(|_| {
            (
                random_hermitian(rng, dim),
                rng.gen_range(0.5..1.5),
            )
        })
        .collect();
    HamiltonianFamily::new(segs).expect("positive durations, equal dims")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transporting_family_has_zero_residual() {
        let mut rng = standard_rng(42);
        for dim in [2usize, 3, 4] {
            let basis = random_basis(&mut rng, dim);
            let fam = random_transporting_family(&mut rng, dim, &basis);
            let r = fam.evolve(32).unwrap();
            assert!(r.pt_residual(&basis) < 1e-12);
        }
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let a = random_unitary(&mut standard_rng(7), 3);
        let b = random_unitary(&mut standard_rng(7), 3);
        assert!(a.matrix().max_abs_diff(b.matrix()) == 0.0);
    }
}
