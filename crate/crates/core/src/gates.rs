//! Diagonal phase gates from N-cycle parallel-transporting families.
//!
//! An N-cycle family ends on U(1) = e^{−iπ/N}·C_N in the transported basis
//! (C_N the cyclic shift), whose eigenphases are the odd multiples of π/N.
//! Labelling the eigenvectors with computational bit strings turns the
//! spectrum into a diagonal gate; an exhaustive assignment search decides
//! when the gate factorizes into given per-qubit phase multisets.

use crate::eig::eig_unitary_matrix;
use crate::error::{Error, Result};
use crate::holonomy::Spectrum;
use crate::matrix::{C64, ComplexMatrix, HermitianMatrix, UnitaryMatrix, ONE, ZERO};
use crate::policy::{angle_distance, NumericPolicy};
use crate::transport::{Basis, HamiltonianFamily};

use std::f64::consts::{FRAC_PI_4, PI};

/// Map from eigenvector index to a computational label (mixed-radix digits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<Vec<u8>>,
    factor_dims: Vec<usize>,
}

impl Assignment {
    /// Bit-string labels for a power-of-two dimension, e.g.
    /// `["00", "01", "11", "10"]`; entry k is the label of eigenvector k.
    pub fn from_bit_strings(labels: &[&str]) -> Result<Self> {
        let n = labels.len();
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::NotPowerOfTwo { dim: n });
        }
        let q = n.trailing_zeros() as usize;
        let mut digit_labels = Vec::with_capacity(n);
        for l in labels {
            if l.len() != q || l.chars().any(|c| c != '0' && c != '1') {
                return Err(Error::InvariantViolation {
                    what: format!("label {l:?} is not a {q}-bit string"),
                });
            }
            digit_labels.push(l.bytes().map(|b| b - b'0').collect());
        }
        Self::from_labels(digit_labels, vec![2; q])
    }

    /// General mixed-radix labels; `factor_dims` are the per-factor sizes.
    pub fn from_labels(labels: Vec<Vec<u8>>, factor_dims: Vec<usize>) -> Result<Self> {
        let n: usize = factor_dims.iter().product();
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        let asg = Assignment {
            labels,
            factor_dims,
        };
        let mut seen = vec![false; n];
        for k in 0..n {
            let s = asg.slot(k)?;
            if seen[s] {
                return Err(Error::InvariantViolation {
                    what: format!("assignment maps two eigenvectors to slot {s}"),
                });
            }
            seen[s] = true;
        }
        Ok(asg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    /// Computational-basis index of eigenvector k's label.
    pub fn slot(&self, k: usize) -> Result<usize> {
        let label = &self.labels[k];
        if label.len() != self.factor_dims.len() {
            return Err(Error::InvariantViolation {
                what: format!("label {label:?} has wrong digit count"),
            });
        }
        let mut idx = 0usize;
        for (digit, dim) in label.iter().zip(&self.factor_dims) {
            if *digit as usize >= *dim {
                return Err(Error::IndexOutOfRange {
                    index: *digit as usize,
                    dim: *dim,
                });
            }
            idx = idx * dim + *digit as usize;
        }
        Ok(idx)
    }

    pub fn label_string(&self, k: usize) -> String {
        self.labels[k].iter().map(|d| (d + b'0') as char).collect()
    }
}

/// Diagonal gate in the computational basis with its label provenance.
#[derive(Debug, Clone)]
pub struct GateMatrix {
    matrix: UnitaryMatrix,
    slot_phases: Vec<f64>,
    labels: Vec<String>,
}

impl GateMatrix {
    pub fn matrix(&self) -> &UnitaryMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Phase of each computational slot, in slot order.
    pub fn slot_phases(&self) -> &[f64] {
        &self.slot_phases
    }

    /// Label assigned to eigenvector k, in eigenvector order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Constant-Hamiltonian family realizing the N-cycle holonomy.
///
/// The generator is the principal logarithm of the cyclic shift with its
/// uniform diagonal removed (a circulant logarithm has constant diagonal),
/// expressed in the given basis. The diagonal removal makes the transport
/// condition hold exactly and puts the endpoint in SU(N):
/// U(1) = e^{−iπ/N}·C_N in that basis.
pub fn cycle_family(n: usize, basis: &Basis) -> Result<HamiltonianFamily> {
    if n < 2 {
        return Err(Error::BadShape);
    }
    if basis.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: basis.dim(),
        });
    }
    let mut shift = ComplexMatrix::zeros(n);
    for k in 0..n {
        shift.set(k, (k + 1) % n, ONE);
    }
    let eig = eig_unitary_matrix(&shift)?;
    // K = Σ iθ_m |v_m⟩⟨v_m|, then drop the uniform diagonal tr(K)/n.
    let mut log_shift = ComplexMatrix::zeros(n);
    for m in 0..n {
        let proj = eig.vector(m).projector();
        log_shift = log_shift.add(&proj.scale(C64::new(0.0, eig.phases[m])));
    }
    let mean = log_shift.trace() / C64::new(n as f64, 0.0);
    let traceless = log_shift.sub(&ComplexMatrix::identity(n).scale(mean));
    // H = i·K′ is Hermitian; conjugate into the requested basis.
    let h_cycle = traceless.scale(C64::new(0.0, 1.0));
    let h_ambient = basis.matrix().mul(&h_cycle).mul(&basis.matrix().adjoint());
    HamiltonianFamily::constant(HermitianMatrix::new(h_ambient)?)
}

/// Σ_k e^{iτ_k}|label(k)⟩⟨label(k)| as a diagonal matrix in the
/// computational basis.
pub fn build_gate(spectrum: &Spectrum, assignment: &Assignment) -> Result<GateMatrix> {
    let n = spectrum.dim();
    if assignment.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: assignment.dim(),
        });
    }
    let mut slot_phases = vec![0.0f64; n];
    let mut diag = vec![ZERO; n];
    for k in 0..n {
        let slot = assignment.slot(k)?;
        slot_phases[slot] = spectrum.phases()[k];
        diag[slot] = C64::from_polar(1.0, spectrum.phases()[k]);
    }
    let matrix = UnitaryMatrix::new(ComplexMatrix::diagonal(&diag))?;
    Ok(GateMatrix {
        matrix,
        slot_phases,
        labels: (0..n).map(|k| assignment.label_string(k)).collect(),
    })
}

/// Whether a = e^{iθ}·b within tolerance; θ is read off the first entry of
/// `b` with appreciable modulus.
pub fn equal_up_to_global_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> (bool, f64) {
    if a.dim() != b.dim() {
        return (false, 0.0);
    }
    let tol = NumericPolicy::standard().gate_tol;
    let n = a.dim();
    let mut theta = None;
    'scan: for i in 0..n {
        for j in 0..n {
            if b.get(i, j).norm() > 1e-8 {
                if a.get(i, j).norm() <= 1e-8 {
                    return (false, 0.0);
                }
                theta = Some((a.get(i, j) / b.get(i, j)).arg());
                break 'scan;
            }
        }
    }
    let theta = match theta {
        Some(t) => t,
        None => return (a.max_abs() <= tol, 0.0),
    };
    let aligned = b.scale(C64::from_polar(1.0, theta));
    (a.max_abs_diff(&aligned) < tol, theta)
}

/// Exhaustive search for an assignment that makes the spectrum's gate a
/// tensor product whose q-th factor has the given diagonal phase multiset.
///
/// Permutations are scanned in lexicographic order of the slot sequence, so
/// the first valid assignment is returned deterministically. Dimensions
/// above 8 are rejected.
pub fn find_product_assignment(
    spectrum: &Spectrum,
    factor_phases: &[Vec<f64>],
) -> Result<Option<Assignment>> {
    let n = spectrum.dim();
    if n > 8 {
        return Err(Error::SearchSpaceTooLarge { dim: n });
    }
    let dims: Vec<usize> = factor_phases.iter().map(|f| f.len()).collect();
    let product: usize = dims.iter().product();
    if product != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: product,
        });
    }
    const TOL: f64 = 1e-8;

    // Every factor-value arrangement yields the same multiset of slot sums,
    // so a single multiset comparison prunes impossible factor sets.
    let arrangements: Vec<Vec<Vec<f64>>> = factor_phases
        .iter()
        .map(|phases| distinct_permutations(phases))
        .collect();
    let slot_sums_of = |combo: &[&Vec<f64>]| -> Vec<f64> {
        (0..n)
            .map(|slot| {
                let mut digits = Vec::with_capacity(dims.len());
                let mut rest = slot;
                for &d in dims.iter().rev() {
                    digits.push(rest % d);
                    rest /= d;
                }
                digits.reverse();
                digits
                    .iter()
                    .zip(combo.iter())
                    .map(|(&dig, f)| f[dig])
                    .sum()
            })
            .collect()
    };

    let first_combo: Vec<&Vec<f64>> = arrangements.iter().map(|a| &a[0]).collect();
    if !multisets_match_mod_2pi(spectrum.phases(), &slot_sums_of(&first_combo), TOL) {
        return Ok(None);
    }

    // Precompute slot sums for every arrangement combination.
    let mut combos: Vec<Vec<f64>> = Vec::new();
    let mut combo_idx = vec![0usize; arrangements.len()];
    loop {
        let combo: Vec<&Vec<f64>> = combo_idx
            .iter()
            .zip(&arrangements)
            .map(|(&i, a)| &a[i])
            .collect();
        combos.push(slot_sums_of(&combo));
        let mut q = arrangements.len();
        loop {
            if q == 0 {
                break;
            }
            q -= 1;
            combo_idx[q] += 1;
            if combo_idx[q] < arrangements[q].len() {
                break;
            }
            combo_idx[q] = 0;
            if q == 0 {
                combo_idx = vec![usize::MAX; arrangements.len()];
                break;
            }
        }
        if combo_idx.first() == Some(&usize::MAX) {
            break;
        }
    }

    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for sums in &combos {
            if (0..n).all(|k| angle_distance(sums[perm[k]], spectrum.phases()[k]) < TOL) {
                let labels = perm
                    .iter()
                    .map(|&slot| {
                        let mut digits = vec![0u8; dims.len()];
                        let mut rest = slot;
                        for (pos, &d) in dims.iter().enumerate().rev() {
                            digits[pos] = (rest % d) as u8;
                            rest /= d;
                        }
                        digits
                    })
                    .collect();
                return Ok(Some(Assignment::from_labels(labels, dims.clone())?));
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// Exhaustive search for an assignment whose gate equals `target` up to a
/// global phase. Permutations are scanned in lexicographic slot order.
pub fn find_assignment_for_target(
    spectrum: &Spectrum,
    target: &ComplexMatrix,
) -> Result<Option<Assignment>> {
    let n = spectrum.dim();
    if n > 8 {
        return Err(Error::SearchSpaceTooLarge { dim: n });
    }
    if target.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: target.dim(),
        });
    }
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { dim: n });
    }
    let q = n.trailing_zeros() as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut diag = vec![ZERO; n];
        for k in 0..n {
            diag[perm[k]] = C64::from_polar(1.0, spectrum.phases()[k]);
        }
        let gate = ComplexMatrix::diagonal(&diag);
        if equal_up_to_global_phase(&gate, target).0 {
            let labels = perm
                .iter()
                .map(|&slot| {
                    (0..q)
                        .rev()
                        .map(|bit| ((slot >> bit) & 1) as u8)
                        .collect::<Vec<u8>>()
                })
                .collect();
            return Ok(Some(Assignment::from_labels(labels, vec![2; q])?));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn distinct_permutations(values: &[f64]) -> Vec<Vec<f64>> {
    let mut current: Vec<f64> = values.to_vec();
    current.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<Vec<f64>> = vec![current.clone()];
    // next_permutation over sorted values enumerates each distinct ordering
    // once when duplicates compare equal bit-for-bit
    let mut idx: Vec<usize> = (0..values.len()).collect();
    while next_permutation(&mut idx) {
        let candidate: Vec<f64> = idx.iter().map(|&i| current[i]).collect();
        if !out.iter().any(|seen| {
            seen.iter()
                .zip(&candidate)
                .all(|(a, b)| (a - b).abs() < 1e-12)
        }) {
            out.push(candidate);
        }
    }
    out
}

fn next_permutation(seq: &mut [usize]) -> bool {
    let n = seq.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

fn multisets_match_mod_2pi(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for &x in a {
        let mut found = false;
        for (i, &y) in b.iter().enumerate() {
            if !used[i] && angle_distance(x, y) < tol {
                used[i] = true;
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Reference gates for comparisons: Z, S, T, the conditional gate B, and the
/// product targets Z⊗S, Z⊗S⊗T.
pub fn named_gate(name: &str) -> Option<ComplexMatrix> {
    let z = ComplexMatrix::diagonal(&[ONE, -ONE]);
    let s = ComplexMatrix::diagonal(&[ONE, C64::new(0.0, 1.0)]);
    let t = ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, FRAC_PI_4)]);
    match name {
        "Z" => Some(z),
        "S" => Some(s),
        "T" => Some(t),
        "B" => Some(ComplexMatrix::diagonal(&[
            C64::from_polar(1.0, FRAC_PI_4),
            C64::from_polar(1.0, 3.0 * FRAC_PI_4),
            C64::from_polar(1.0, 7.0 * FRAC_PI_4),
            C64::from_polar(1.0, 5.0 * FRAC_PI_4),
        ])),
        "ZxS" => Some(z.kron(&s)),
        "ZxSxT" => Some(z.kron(&s).kron(&t)),
        _ => None,
    }
}

/// The Z, S and T diagonal phase multisets used by the product searches.
pub fn standard_factor_phases(name: &str) -> Option<Vec<f64>> {
    match name {
        "Z" => Some(vec![0.0, PI]),
        "S" => Some(vec![FRAC_PI_4, 3.0 * FRAC_PI_4]),
        "T" => Some(vec![PI / 8.0, 7.0 * PI / 8.0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::SigmaMatrix;
    use std::f64::consts::FRAC_PI_2;

    fn cycle_spectrum(n: usize) -> (Spectrum, SigmaMatrix) {
        let basis = Basis::standard(n);
        let fam = cycle_family(n, &basis).unwrap();
        let r = fam.evolve(32).unwrap();
        assert!(r.pt_residual(&basis) < 1e-12);
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        (spec, sigma)
    }

    #[test]
    fn cycle_four_has_odd_quarter_phases() {
        let (spec, sigma) = cycle_spectrum(4);
        let expected = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
        for (p, e) in spec.phases().iter().zip(expected) {
            assert!((p - e).abs() < 1e-11, "{p} vs {e}");
        }
        // single-cycle sparsity: only σ_{k,k+1} entries nonzero
        for i in 0..4 {
            for j in 0..4 {
                let mag = sigma.entry(i, j).norm();
                if j == (i + 1) % 4 {
                    assert!((mag - 1.0).abs() < 1e-11);
                } else {
                    assert!(mag < 1e-11, "entry ({i},{j}) = {mag}");
                }
            }
        }
        // det = 1 and the full-cycle γ over the populated chain is −1
        assert!((sigma.matrix().det() - ONE).norm() < 1e-11);
        let gamma = sigma
            .gamma_oriented(&[0, 1, 2, 3], crate::holonomy::Orientation::Reversed)
            .unwrap();
        assert!((gamma.value - -ONE).norm() < 1e-11);
        // the literal chain reads the transposed positions, which are empty
        let literal = sigma.gamma(&[0, 1, 2, 3]).unwrap();
        assert!(literal.value.norm() < 1e-11);
    }

    #[test]
    fn cycle_two_is_bit_flip() {
        let (spec, _) = cycle_spectrum(2);
        assert!((spec.phases()[0] + FRAC_PI_2).abs() < 1e-12);
        assert!((spec.phases()[1] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn cycle_eight_has_odd_eighth_phases() {
        let (spec, sigma) = cycle_spectrum(8);
        for (k, p) in spec.phases().iter().enumerate() {
            let expected = -PI + (2.0 * k as f64 + 1.0) * PI / 8.0;
            assert!((p - expected).abs() < 1e-11, "{p} vs {expected}");
        }
        // all γ of order < 8 over contiguous index chains vanish, yet the
        // spectrum is total
        let g2 = sigma.gamma(&[0, 1]).unwrap();
        assert!(g2.value.norm() < 1e-11);
        let g3 = sigma
            .gamma_oriented(&[0, 1, 2], crate::holonomy::Orientation::Reversed)
            .unwrap();
        assert!(g3.value.norm() < 1e-11);
    }

    #[test]
    fn eq11_conditional_gate() {
        let (spec, _) = cycle_spectrum(4);
        // phases ascending: −3π/4 → 11, −π/4 → 10, π/4 → 00, 3π/4 → 01
        let asg = Assignment::from_bit_strings(&["11", "10", "00", "01"]).unwrap();
        let gate = build_gate(&spec, &asg).unwrap();
        let (eq, theta) = equal_up_to_global_phase(gate.matrix().matrix(), &named_gate("B").unwrap());
        assert!(eq, "gate is not B up to phase");
        assert!(theta.abs() < 1e-9, "theta = {theta}");
    }

    #[test]
    fn eq12_product_gate() {
        let (spec, _) = cycle_spectrum(4);
        // π/4 → 00, 3π/4 → 01, 5π/4 → 10, 7π/4 → 11 as slot phases
        let asg = Assignment::from_bit_strings(&["10", "11", "00", "01"]).unwrap();
        let gate = build_gate(&spec, &asg).unwrap();
        let (eq, theta) = equal_up_to_global_phase(gate.matrix().matrix(), &named_gate("ZxS").unwrap());
        assert!(eq, "gate is not Z⊗S up to phase");
        assert!((theta - FRAC_PI_4).abs() < 1e-9, "theta = {theta}");
    }

    #[test]
    fn product_search_finds_eq12() {
        let (spec, _) = cycle_spectrum(4);
        let factors = vec![
            standard_factor_phases("Z").unwrap(),
            standard_factor_phases("S").unwrap(),
        ];
        let asg = find_product_assignment(&spec, &factors).unwrap().unwrap();
        let gate = build_gate(&spec, &asg).unwrap();
        let (eq, _) = equal_up_to_global_phase(gate.matrix().matrix(), &named_gate("ZxS").unwrap());
        assert!(eq, "first product assignment must realize Z⊗S up to phase");
    }

    #[test]
    fn product_search_rejects_z_z() {
        let (spec, _) = cycle_spectrum(4);
        // {0,π}⊕{0,π} gives multiples of π, never odd multiples of π/4
        let factors = vec![
            standard_factor_phases("Z").unwrap(),
            standard_factor_phases("Z").unwrap(),
        ];
        assert!(find_product_assignment(&spec, &factors)
            .unwrap()
            .is_none());
    }

    #[test]
    fn three_qubit_pi8_assignment_exists() {
        let (spec, _) = cycle_spectrum(8);
        // the multiset search certifies a product structure exists
        let factors = vec![
            standard_factor_phases("Z").unwrap(),
            standard_factor_phases("S").unwrap(),
            standard_factor_phases("T").unwrap(),
        ];
        let asg = find_product_assignment(&spec, &factors).unwrap().unwrap();
        let gate = build_gate(&spec, &asg).unwrap();
        // verify the factorization directly: slot phase differences along
        // each qubit axis must be independent of the other digits
        let phases = gate.slot_phases();
        for bit in 0..3usize {
            let stride = 1usize << (2 - bit);
            let mut reference = None;
            for x in 0..8usize {
                if x & stride != 0 {
                    continue;
                }
                let delta = crate::policy::principal_angle(phases[x + stride] - phases[x]);
                match reference {
                    None => reference = Some(delta),
                    Some(r) => assert!(angle_distance(delta, r) < 1e-9),
                }
            }
        }
        // the named target is reachable by some assignment
        let asg_t = find_assignment_for_target(&spec, &named_gate("ZxSxT").unwrap())
            .unwrap()
            .expect("an assignment realizing Z⊗S⊗T must exist");
        let gate_t = build_gate(&spec, &asg_t).unwrap();
        let (eq, theta) =
            equal_up_to_global_phase(gate_t.matrix().matrix(), &named_gate("ZxSxT").unwrap());
        assert!(eq);
        // any global phase ≡ π/8 (mod π/4) maps the π/4-lattice onto the
        // odd multiples of π/8
        let residue = crate::policy::principal_angle(8.0 * (theta - PI / 8.0));
        assert!(residue.abs() < 1e-8, "theta = {theta}");
    }

    #[test]
    fn gate_equality_examples() {
        let z = named_gate("Z").unwrap();
        let iz = z.scale(C64::new(0.0, 1.0));
        let (eq, theta) = equal_up_to_global_phase(&iz, &z);
        assert!(eq);
        assert!((theta - FRAC_PI_2).abs() < 1e-12);
        let x = crate::matrix::pauli::sigma_x();
        assert!(!equal_up_to_global_phase(&z, &x).0);
    }

    #[test]
    fn assignment_validation() {
        assert!(matches!(
            Assignment::from_bit_strings(&["0", "1", "2"]),
            Err(Error::NotPowerOfTwo { .. })
        ));
        assert!(Assignment::from_bit_strings(&["00", "00", "01", "10"]).is_err());
        let asg = Assignment::from_bit_strings(&["00", "01", "11", "10"]).unwrap();
        assert_eq!(asg.slot(2).unwrap(), 3);
        assert_eq!(asg.label_string(2), "11");
    }

    #[test]
    fn search_space_guard() {
        let basis = Basis::standard(16);
        let fam = cycle_family(16, &basis).unwrap();
        let r = fam.evolve(8).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        let factors = vec![vec![0.0, PI]; 4];
        assert!(matches!(
            find_product_assignment(&spec, &factors),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn next_permutation_is_lexicographic() {
        let mut p = vec![0usize, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }
}
