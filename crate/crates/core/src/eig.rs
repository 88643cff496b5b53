//! Eigendecomposition of unitary (normal) matrices.
//!
//! Strategy: a unitary U splits as U = A + iK with A = (U + U†)/2 and
//! K = (U − U†)/(2i), both Hermitian and commuting. Jacobi-diagonalize A,
//! then diagonalize K restricted to each near-degenerate eigenspace of A.
//! The pair (cos τ, sin τ) separates every distinct unitary eigenvalue, so
//! this resolves all branches without a general nonsymmetric solver.
//! Rayleigh-quotient iteration polishes any pair whose residual survives.

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ComplexVector, UnitaryMatrix, ZERO};
use crate::policy::NumericPolicy;

/// Eigenphases in (−π, π] with matching orthonormal eigenvector columns,
/// canonically ordered.
#[derive(Debug, Clone)]
pub struct EigUnitary {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigUnitary {
    /// ‖U·V − V·diag(e^{iτ})‖_max.
    pub fn reconstruction_residual(&self, u: &ComplexMatrix) -> f64 {
        let lambda =
            ComplexMatrix::diagonal(&self.phases.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>());
        u.mul(&self.vectors)
            .max_abs_diff(&self.vectors.mul(&lambda))
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi for Hermitian matrices. Returns ascending eigenvalues and
/// eigenvector columns.
pub(crate) fn jacobi_hermitian(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs().max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m.get(p, q).norm());
            }
        }
        if off <= tol {
            let (vals, vecs) = sort_eigh(&m, &v);
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                // Phase e makes the pivot effectively real; then a real
                // Jacobi rotation annihilates it.
                let e = apq / C64::new(r, 0.0);
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns transform: col_p ← c·col_p − s·conj(e)... applied
                // as J with J[p][p]=c, J[q][p]=-s·e*, J[p][q]=s·e, J[q][q]=c.
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0) * e;
                let jqp = C64::new(-s, 0.0) * e.conj();
                let jqq = C64::new(c, 0.0);
                // m ← J† m J
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * jpp + mkq * jqp);
                    m.set(k, q, mkp * jpq + mkq * jqq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, jpp.conj() * mpk + jqp.conj() * mqk);
                    m.set(q, k, jpq.conj() * mpk + jqq.conj() * mqk);
                }
                m.set(p, q, ZERO);
                m.set(q, p, ZERO);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
            }
        }
    }
    let mut off = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            off = off.max(m.get(p, q).norm());
        }
    }
    Err(Error::ConvergenceFailure { residual: off })
}

fn sort_eigh(m: &ComplexMatrix, v: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.partial_cmp(&m.get(j, j).re).unwrap());
    let vals = order.iter().map(|&k| m.get(k, k).re).collect();
    let mut vecs = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &v.column(src));
    }
    (vals, vecs)
}

/// Eigendecomposition of a unitary matrix.
///
/// Phases are principal arguments in (−π, π], sorted ascending; ties are
/// broken by lexicographic comparison of the phase-fixed eigenvectors.
pub fn eig_unitary(u: &UnitaryMatrix) -> Result<EigUnitary> {
    eig_unitary_matrix(u.matrix())
}

/// Same as [`eig_unitary`] for a raw matrix attested unitary by the caller.
pub(crate) fn eig_unitary_matrix(um: &ComplexMatrix) -> Result<EigUnitary> {
    let policy = NumericPolicy::standard();
    let n = um.dim();
    let adj = um.adjoint();
    let herm = um.add(&adj).scale(C64::new(0.5, 0.0));
    let skew = um.sub(&adj).scale(C64::new(0.0, -0.5)); // (U − U†)/(2i), Hermitian

    let (avals, mut vecs) = jacobi_hermitian(&herm)?;

    // Chained clustering of the cos-part spectrum; diagonalize the sin part
    // within each cluster to split conjugate branches.
    const CLUSTER_GAP: f64 = 1e-8;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && avals[end] - avals[end - 1] <= CLUSTER_GAP {
            end += 1;
        }
        let size = end - start;
        if size > 1 {
            let cols: Vec<ComplexVector> = (start..end).map(|c| vecs.column(c)).collect();
            let mut kp = ComplexMatrix::zeros(size);
            for (i, ci) in cols.iter().enumerate() {
                let kc = skew.apply(ci);
                for (j, cj) in cols.iter().enumerate() {
                    kp.set(j, i, cj.inner(&kc));
                }
            }
            let (_, w) = jacobi_hermitian(&kp)?;
            for j in 0..size {
                let mut newcol = ComplexVector::zeros(n);
                for (i, ci) in cols.iter().enumerate() {
                    newcol = newcol.add(&ci.scale(w.get(i, j)));
                }
                vecs.set_column(start + j, &newcol);
            }
        }
        start = end;
    }

    // Rayleigh quotients give the unitary eigenvalues; polish stragglers.
    let mut phases = Vec::with_capacity(n);
    let mut columns: Vec<ComplexVector> = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = vecs.column(k).normalized();
        let mut lambda = x.inner(&um.apply(&x));
        let mut residual = um.apply(&x).sub(&x.scale(lambda)).norm();
        if residual > 1e-12 {
            for _ in 0..4 {
                let shift = lambda * C64::new(1.0 + 1e-13, 0.0);
                let mut shifted = um.clone();
                for d in 0..n {
                    shifted.set(d, d, shifted.get(d, d) - shift);
                }
                match shifted.lu().solve(&x) {
                    Ok(y) => x = y.normalized(),
                    Err(_) => break,
                }
                lambda = x.inner(&um.apply(&x));
                residual = um.apply(&x).sub(&x.scale(lambda)).norm();
                if residual <= 1e-13 {
                    break;
                }
            }
        }
        phases.push(principal_phase_of(lambda));
        columns.push(x);
    }

    // Refinement may disturb orthogonality inside degenerate eigenspaces;
    // re-orthonormalize within groups of equal phase.
    orthonormalize_within_groups(&mut columns, &phases);

    for col in columns.iter_mut() {
        phase_fix(col);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        phases[i]
            .partial_cmp(&phases[j])
            .unwrap()
            .then_with(|| lex_compare(&columns[i], &columns[j]))
    });
    let phases_sorted: Vec<f64> = order.iter().map(|&k| phases[k]).collect();
    let mut vmat = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vmat.set_column(dst, &columns[src]);
    }

    let out = EigUnitary {
        phases: phases_sorted,
        vectors: vmat,
    };
    let residual = out.reconstruction_residual(um);
    if residual >= policy.structural_tol {
        return Err(Error::ConvergenceFailure { residual });
    }
    Ok(out)
}

fn principal_phase_of(z: C64) -> f64 {
    let t = z.arg();
    if t <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        t
    }
}

fn orthonormalize_within_groups(columns: &mut [ComplexVector], phases: &[f64]) {
    let n = columns.len();
    for i in 0..n {
        for j in 0..i {
            if crate::policy::angle_distance(phases[i], phases[j]) < 1e-9 {
                let overlap = columns[j].inner(&columns[i]);
                let proj = columns[j].scale(overlap);
                columns[i] = columns[i].sub(&proj);
            }
        }
        columns[i] = columns[i].normalized();
    }
}

/// Rotate the global phase so the largest-magnitude component is real
/// positive. Eigenvectors are ray-defined; this picks a representative.
pub(crate) fn phase_fix(v: &mut ComplexVector) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for i in 0..v.dim() {
        let mag = v.get(i).norm();
        if mag > best_mag + 1e-12 {
            best_mag = mag;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let z = v.get(best);
        let rot = (z / C64::new(z.norm(), 0.0)).conj();
        *v = v.scale(rot);
    }
}

fn lex_compare(a: &ComplexVector, b: &ComplexVector) -> std::cmp::Ordering {
    for i in 0..a.dim() {
        let (za, zb) = (a.get(i), b.get(i));
        match za.re.partial_cmp(&zb.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
        match za.im.partial_cmp(&zb.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{expm_skew, pauli, I, ONE};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn diagonal_input() {
        let u = UnitaryMatrix::new(ComplexMatrix::diagonal(&[I, -I])).unwrap();
        let eig = eig_unitary(&u).unwrap();
        assert!((eig.phases[0] + FRAC_PI_2).abs() < 1e-14);
        assert!((eig.phases[1] - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn minus_i_sigma_x() {
        // −iσ_x has eigenvalues ∓i attached to the ±1 branches of σ_x.
        let u = UnitaryMatrix::new(pauli::sigma_x().scale(-I)).unwrap();
        let eig = eig_unitary(&u).unwrap();
        assert!((eig.phases[0] + FRAC_PI_2).abs() < 1e-12);
        assert!((eig.phases[1] - FRAC_PI_2).abs() < 1e-12);
        assert!(eig.reconstruction_residual(u.matrix()) < 1e-12);
    }

    #[test]
    fn four_cycle_with_phase() {
        // e^{−iπ/4}·C₄ → phases at the odd multiples of π/4.
        let mut c = ComplexMatrix::zeros(4);
        for k in 0..4 {
            c.set(k, (k + 1) % 4, ONE);
        }
        let u = UnitaryMatrix::new(c.scale(C64::from_polar(1.0, -FRAC_PI_4))).unwrap();
        let eig = eig_unitary(&u).unwrap();
        let expected = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
        for (p, e) in eig.phases.iter().zip(expected) {
            assert!((p - e).abs() < 1e-12, "phase {p} vs {e}");
        }
    }

    #[test]
    fn scalar_unitary_is_fully_degenerate() {
        let theta = 0.7;
        let u =
            UnitaryMatrix::new(ComplexMatrix::identity(3).scale(C64::from_polar(1.0, theta)))
                .unwrap();
        let eig = eig_unitary(&u).unwrap();
        for p in &eig.phases {
            assert!((p - theta).abs() < 1e-14);
        }
        assert!(eig.reconstruction_residual(u.matrix()) < 1e-13);
    }

    #[test]
    fn random_unitaries_reconstruct() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 5, 8] {
            for _ in 0..25 {
                let mut g = ComplexMatrix::zeros(n);
                for i in 0..n {
                    for j in 0..=i {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        if i == j {
                            g.set(i, i, C64::new(0.0, im));
                        } else {
                            let z = C64::new(re, im);
                            g.set(i, j, z);
                            g.set(j, i, -z.conj());
                        }
                    }
                }
                let u = expm_skew(&g).unwrap();
                let eig = eig_unitary(&u).unwrap();
                assert!(eig.reconstruction_residual(u.matrix()) < 1e-10);
                // phases sorted ascending in (−π, π]
                for w in eig.phases.windows(2) {
                    assert!(w[0] <= w[1] + 1e-15);
                }
                for p in &eig.phases {
                    assert!(*p > -PI && *p <= PI);
                }
            }
        }
    }
}
