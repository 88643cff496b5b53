//! The verification suite: one runner per release criterion, each with its
//! tolerance pinned in code. `run_all` is what both the `acceptance`
//! integration test target and the CLI `verify-all` scenario execute.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::Rng;

use crate::bloch::{
    bit_flip_family, closed_form_spectrum, equatorial_azimuth, extract_invariants,
    extract_invariants_with_closure, orange_slice_family, solid_angle, truncated_slice_family,
    BlochPath,
};
use crate::charpoly::char_poly;
use crate::error::Error;
use crate::gates::{
    build_gate, cycle_family, equal_up_to_global_phase, find_assignment_for_target,
    find_product_assignment, named_gate, standard_factor_phases, Assignment,
};
use crate::holonomy::{
    aa_cyclic_phase, pancharatnam_phase, phi_of, GaugePhases, Orientation, SigmaMatrix,
};
use crate::interferometer::{default_restarts, extract_phases, interference_fn};
use crate::io::format_f64;
use crate::matrix::{C64, ONE};
use crate::policy::angle_distance;
use crate::sample;
use crate::transport::Basis;

/// Result of one criterion run.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed discrepancy, in the units of the criterion.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} (worst {:.3e}, tol {:.1e}) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.detail,
        )
    }
}

/// Run every criterion with sub-seeds derived from `seed`.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    vec![
        closed_form_vs_transport(seed ^ 0x01),
        paper_exact_values(seed ^ 0x02),
        gauge_invariance(seed ^ 0x03),
        secular_coefficients_n3(seed ^ 0x04),
        special_unitary_property(seed ^ 0x05),
        cyclic_phase_relation(seed ^ 0x06),
        interferometer_protocol(seed ^ 0x07),
        gate_synthesis(seed ^ 0x08),
        figure_paths(seed ^ 0x09),
        output_determinism(seed ^ 0x0a),
    ]
}

fn outcome(
    id: usize,
    name: &'static str,
    worst: f64,
    tolerance: f64,
    detail: String,
) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed: worst < tolerance,
        worst,
        tolerance,
        detail,
    }
}

// Criterion 1: closed-form qubit spectrum vs numerical transport on a
// 20×20 (η, Ω) grid; max eigenphase discrepancy below 1e-6.
pub fn closed_form_vs_transport(_seed: u64) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    let basis = Basis::standard(2);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for i in 0..20 {
        let eta_target = i as f64 / 19.0;
        let kappa = 2.0 * eta_target.clamp(0.0, 1.0).acos();
        for j in 0..20 {
            let omega_target = j as f64 * 2.0 * PI / 20.0;
            let fam = truncated_slice_family(omega_target, kappa)
                .expect("grid parameters are in range");
            let r = fam.evolve(96).expect("evolution succeeds");
            let inv = match extract_invariants(&r, &basis) {
                Ok(inv) => inv,
                Err(Error::GeodesicAmbiguous) => {
                    extract_invariants_with_closure(&r, &basis, [0.0, 1.0, 0.0])
                        .expect("explicit closure resolves the antipodal case")
                }
                Err(e) => panic!("invariant extraction failed: {e}"),
            };
            let closed = closed_form_spectrum(&inv).expect("measured invariants are admissible");
            let sigma = SigmaMatrix::from_transport(&r, &basis).expect("slice transports σ_z");
            let spec = sigma.nodal_free_spectrum().expect("spectrum is total");
            for (c, n) in closed.iter().zip(spec.phases()) {
                worst = worst.max((c - n).abs());
            }
            count += 1;
        }
    }
    outcome(
        1,
        "closed-form vs numerical eigenphases",
        worst,
        TOL,
        format!("{count} grid points"),
    )
}

// Criterion 2: the exact qubit values — λ = ±i at η = 0; λ = cos(Ω/2) ±
// i|sin(Ω/2)| at η = 1; γ₁₂ = η² − 1; Φ[γ₁₂] = −1 for η < 1 and a nodal
// point at η = 1 — all within 1e-8.
pub fn paper_exact_values(_seed: u64) -> CriterionOutcome {
    const TOL: f64 = 1e-8;
    let basis = Basis::standard(2);
    let mut worst = 0.0f64;

    // η = 0 via flip families
    for step in 0..12 {
        let alpha = step as f64 * 2.0 * PI / 12.0;
        let r = bit_flip_family(alpha).unwrap().evolve(64).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        worst = worst.max((spec.phases()[0] + FRAC_PI_2).abs());
        worst = worst.max((spec.phases()[1] - FRAC_PI_2).abs());
        worst = worst.max(sigma.entry(0, 0).norm());
    }

    // η = 1 via orange slices
    for step in 0..16 {
        let omega = step as f64 * 2.0 * PI / 16.0;
        let r = orange_slice_family(omega).unwrap().evolve(96).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        let x = (omega / 2.0).cos();
        let y = (omega / 2.0).sin().abs();
        let lambda_plus = C64::from_polar(1.0, spec.phases()[1]);
        let lambda_minus = C64::from_polar(1.0, spec.phases()[0]);
        worst = worst.max((lambda_plus - C64::new(x, y)).norm());
        worst = worst.max((lambda_minus - C64::new(x, -y)).norm());
        // nodal point of Φ[γ₁₂] at η = 1
        let g12 = sigma.gamma(&[0, 1]).unwrap().value;
        match phi_of(g12) {
            Err(Error::NodalPoint { .. }) => {}
            other => panic!("expected nodal point at η = 1, got {other:?}"),
        }
    }

    // γ₁₂ = η² − 1 and Φ[γ₁₂] = −1 across the η range
    for i in 0..12 {
        let eta_target = i as f64 / 12.0; // strictly below 1
        let kappa = 2.0 * eta_target.acos();
        let r = truncated_slice_family(1.1, kappa)
            .unwrap()
            .evolve(96)
            .unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let eta = sigma.entry(0, 0).norm();
        let g12 = sigma.gamma(&[0, 1]).unwrap().value;
        worst = worst.max((g12 - C64::new(eta * eta - 1.0, 0.0)).norm());
        let phi = phi_of(g12).expect("γ₁₂ is away from the nodal tolerance for η < 1");
        worst = worst.max((phi - -ONE).norm());
    }

    outcome(2, "exact qubit phase values", worst, TOL, String::new())
}

// Criterion 3: 1000 random (σ, α) gauge trials; eigenphase multisets
// preserved below 1e-10 and entries transforming entrywise by
// e^{−i(α_k−α_l)} below 1e-12.
pub fn gauge_invariance(seed: u64) -> CriterionOutcome {
    const TOL_PHASES: f64 = 1e-10;
    const TOL_ENTRIES: f64 = 1e-12;
    let mut rng = sample::standard_rng(seed);
    let mut worst_phase = 0.0f64;
    let mut worst_entry = 0.0f64;
    for trial in 0..1000 {
        let dim = 2 + trial % 3;
        let u = sample::random_unitary(&mut rng, dim);
        let sigma = SigmaMatrix::from_matrix(u.matrix().clone()).unwrap();
        let alphas = GaugePhases(sample::random_angles(&mut rng, dim));
        let transformed = sigma.gauge_transform(&alphas).unwrap();

        let p0 = sigma.nodal_free_spectrum().unwrap();
        let p1 = transformed.nodal_free_spectrum().unwrap();
        let mut used = vec![false; dim];
        for &a in p0.phases() {
            let mut best: Option<(usize, f64)> = None;
            for (i, &b) in p1.phases().iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = angle_distance(a, b);
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            let (i, d) = best.unwrap();
            used[i] = true;
            worst_phase = worst_phase.max(d);
        }
        for k in 0..dim {
            for l in 0..dim {
                let expected =
                    sigma.entry(k, l) * C64::from_polar(1.0, -(alphas.0[k] - alphas.0[l]));
                worst_entry = worst_entry.max((transformed.entry(k, l) - expected).norm());
            }
        }
    }
    let worst = worst_phase.max(worst_entry * (TOL_PHASES / TOL_ENTRIES));
    outcome(
        3,
        "gauge invariance of the spectrum",
        worst,
        TOL_PHASES,
        format!(
            "1000 trials, phases {}, entries {}",
            format_f64(worst_phase),
            format_f64(worst_entry)
        ),
    )
}

// Criterion 4: the N = 3 secular expansion — coefficients assembled from the
// γ products equal the recursion coefficients below 1e-10 on 200 random
// parallel-transported families.
pub fn secular_coefficients_n3(seed: u64) -> CriterionOutcome {
    const TOL: f64 = 1e-10;
    let mut rng = sample::standard_rng(seed);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let basis = sample::random_basis(&mut rng, 3);
        let sigma = if trial % 10 == 0 {
            // exercise the numerical parallelization route
            let fam = sample::random_segmented_family(&mut rng, 3, 3);
            let r = fam.evolve(64).unwrap();
            let p = r.parallelize(&basis).unwrap();
            SigmaMatrix::from_transport(&p, &basis).unwrap()
        } else {
            let fam = sample::random_transporting_family(&mut rng, 3, &basis);
            let r = fam.evolve(32).unwrap();
            SigmaMatrix::from_transport(&r, &basis).unwrap()
        };

        let g1: Vec<C64> = (0..3).map(|j| sigma.gamma(&[j]).unwrap().value).collect();
        let g2_01 = sigma.gamma(&[0, 1]).unwrap().value;
        let g2_12 = sigma.gamma(&[1, 2]).unwrap().value;
        let g2_20 = sigma.gamma(&[2, 0]).unwrap().value;
        let g3_012 = sigma.gamma(&[0, 1, 2]).unwrap().value;
        let g3_021 = sigma.gamma(&[0, 2, 1]).unwrap().value;

        let c2 = g1[0] + g1[1] + g1[2];
        let c1 = -(g1[0] * g1[1] + g1[1] * g1[2] + g1[2] * g1[0] - g2_01 - g2_12 - g2_20);
        let c0 = g3_012 + g3_021 - g2_01 * g1[2] - g2_12 * g1[0] - g2_20 * g1[1]
            + g1[0] * g1[1] * g1[2];

        let poly = char_poly(sigma.matrix());
        worst = worst.max((poly[3] + ONE).norm());
        worst = worst.max((poly[2] - c2).norm());
        worst = worst.max((poly[1] - c1).norm());
        worst = worst.max((poly[0] - c0).norm());
    }
    outcome(
        4,
        "order-3 secular coefficient identity",
        worst,
        TOL,
        "200 families".into(),
    )
}

// Criterion 5: transported families stay special-unitary along the path
// (|det U(s) − 1| < 1e-7) and the constant secular coefficient keeps unit
// modulus (< 1e-9).
pub fn special_unitary_property(seed: u64) -> CriterionOutcome {
    const TOL_DET: f64 = 1e-7;
    const TOL_COEFF: f64 = 1e-9;
    let mut rng = sample::standard_rng(seed);
    let mut worst_det = 0.0f64;
    let mut worst_coeff = 0.0f64;
    let mut families: Vec<(crate::transport::TransportResult, Basis)> = Vec::new();

    let standard2 = Basis::standard(2);
    for phi in [0.4, 2.0, 5.5] {
        families.push((
            orange_slice_family(phi).unwrap().evolve(64).unwrap(),
            standard2.clone(),
        ));
    }
    families.push((
        bit_flip_family(1.0).unwrap().evolve(64).unwrap(),
        standard2.clone(),
    ));
    for n in [2usize, 4, 8] {
        let basis = Basis::standard(n);
        families.push((
            cycle_family(n, &basis).unwrap().evolve(32).unwrap(),
            basis,
        ));
    }
    for n in [2usize, 3, 4] {
        let basis = sample::random_basis(&mut rng, n);
        families.push((
            sample::random_transporting_family(&mut rng, n, &basis)
                .evolve(48)
                .unwrap(),
            basis,
        ));
    }
    for n in [2usize, 4] {
        let basis = sample::random_basis(&mut rng, n);
        let fam = sample::random_segmented_family(&mut rng, n, 3);
        families.push((
            fam.evolve(64).unwrap().parallelize(&basis).unwrap(),
            basis,
        ));
    }

    for (result, basis) in &families {
        let residual = result.pt_residual(basis);
        assert!(
            residual < 1e-8,
            "test family must parallel-transport (residual {residual})"
        );
        for u in result.unitaries() {
            worst_det = worst_det.max((u.matrix().det() - ONE).norm());
        }
        let sigma = SigmaMatrix::from_transport(result, basis).unwrap();
        let coeffs = char_poly(sigma.matrix());
        worst_coeff = worst_coeff.max((coeffs[0].norm() - 1.0).abs());
    }
    let worst = worst_det.max(worst_coeff * (TOL_DET / TOL_COEFF));
    outcome(
        5,
        "special-unitary transport property",
        worst,
        TOL_DET,
        format!(
            "{} families, det {}, coeff {}",
            families.len(),
            format_f64(worst_det),
            format_f64(worst_coeff)
        ),
    )
}

// Criterion 6: the cyclic-phase relation — integral route vs discrete
// overlap route below 1e-4 on 100 random transporting families (qubit and
// four-level) at 10⁴ grid points.
pub fn cyclic_phase_relation(seed: u64) -> CriterionOutcome {
    const TOL: f64 = 1e-4;
    const GRID: usize = 10_000;
    let mut rng = sample::standard_rng(seed);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for n in [2usize, 4] {
        for trial in 0..50 {
            let basis = sample::random_basis(&mut rng, n);
            let result = if trial % 2 == 0 {
                sample::random_transporting_family(&mut rng, n, &basis)
                    .evolve(GRID)
                    .unwrap()
            } else {
                let fam = sample::random_segmented_family(&mut rng, n, 2);
                fam.evolve(GRID / 2).unwrap().parallelize(&basis).unwrap()
            };
            for k in 0..n {
                let a = aa_cyclic_phase(&result, k).unwrap();
                let b = pancharatnam_phase(&result, k).unwrap();
                worst = worst.max(angle_distance(a, b));
            }
            count += 1;
        }
    }
    outcome(
        6,
        "cyclic-phase relation (integral vs overlap chain)",
        worst,
        TOL,
        format!("{count} families at {GRID} grid points"),
    )
}

// Criterion 7: interferometer identities — F is the eigenvalue convex
// combination below 1e-10, and the eigensolver-blind visibility search
// recovers every distinct phase below 1e-3 for N ∈ {2, 4}.
pub fn interferometer_protocol(seed: u64) -> CriterionOutcome {
    const TOL_CONVEX: f64 = 1e-10;
    const TOL_PHASE: f64 = 1e-3;
    let mut rng = sample::standard_rng(seed);
    let mut worst_convex = 0.0f64;
    for trial in 0..1000 {
        let n = 2 + trial % 3;
        let u = sample::random_unitary(&mut rng, n);
        let state = sample::random_state(&mut rng, n);
        let record = interference_fn(&u, &state).unwrap();
        let eig = crate::eig::eig_unitary(&u).unwrap();
        let mut reconstructed = C64::new(0.0, 0.0);
        for k in 0..n {
            let w = eig.vector(k).inner(&state).norm_sqr();
            reconstructed += C64::from_polar(w, eig.phases[k]);
        }
        worst_convex = worst_convex.max((record.interference - reconstructed).norm());
    }

    let mut worst_phase = 0.0f64;
    let mut extraction_failures = 0usize;
    for n in [2usize, 4] {
        for trial in 0..50u64 {
            let u = sample::random_unitary(&mut rng, n);
            match extract_phases(&u, seed ^ (trial + 17 * n as u64), default_restarts(n)) {
                Ok(found) => {
                    let eig = crate::eig::eig_unitary(&u).unwrap();
                    for f in &found {
                        let nearest = eig
                            .phases
                            .iter()
                            .map(|&p| angle_distance(p, f.phase))
                            .fold(f64::MAX, f64::min);
                        worst_phase = worst_phase.max(nearest);
                    }
                }
                Err(_) => extraction_failures += 1,
            }
        }
    }
    let worst = worst_convex
        .max(worst_phase * (TOL_CONVEX / TOL_PHASE))
        .max(extraction_failures as f64);
    outcome(
        7,
        "interference decomposition and phase extraction",
        worst,
        TOL_CONVEX,
        format!(
            "convex {}, phases {}, failures {}",
            format_f64(worst_convex),
            format_f64(worst_phase),
            extraction_failures
        ),
    )
}

// Criterion 8: gate synthesis — the 4-cycle spectrum sits on the odd
// multiples of π/4 with full-cycle γ = −1 (both below 1e-9); explicit
// assignments reproduce the conditional gate B and the product gate Z⊗S up
// to a global phase (below 1e-8); the 8-cycle admits a Z⊗S⊗T assignment;
// the flip-gate qubit equals Z up to the phase ±π/2.
pub fn gate_synthesis(_seed: u64) -> CriterionOutcome {
    const TOL_SPEC: f64 = 1e-9;
    const TOL_GATE: f64 = 1e-8;
    let mut worst_spec = 0.0f64;
    let mut worst_gate = 0.0f64;

    let basis4 = Basis::standard(4);
    let r4 = cycle_family(4, &basis4).unwrap().evolve(32).unwrap();
    let sigma4 = SigmaMatrix::from_transport(&r4, &basis4).unwrap();
    let spec4 = sigma4.nodal_free_spectrum().unwrap();
    let expected4 = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
    for (p, e) in spec4.phases().iter().zip(expected4) {
        worst_spec = worst_spec.max((p - e).abs());
    }
    let g4 = sigma4
        .gamma_oriented(&[0, 1, 2, 3], Orientation::Reversed)
        .unwrap()
        .value;
    worst_spec = worst_spec.max((g4 - -ONE).norm());
    worst_spec = worst_spec.max((char_poly(sigma4.matrix())[0] - ONE).norm());

    let asg_b = Assignment::from_bit_strings(&["11", "10", "00", "01"]).unwrap();
    let gate_b = build_gate(&spec4, &asg_b).unwrap();
    let (eq_b, theta_b) =
        equal_up_to_global_phase(gate_b.matrix().matrix(), &named_gate("B").unwrap());
    if !eq_b {
        worst_gate = worst_gate.max(1.0);
    }
    worst_gate = worst_gate.max(theta_b.abs());

    let asg_zs = Assignment::from_bit_strings(&["10", "11", "00", "01"]).unwrap();
    let gate_zs = build_gate(&spec4, &asg_zs).unwrap();
    let (eq_zs, theta_zs) =
        equal_up_to_global_phase(gate_zs.matrix().matrix(), &named_gate("ZxS").unwrap());
    if !eq_zs {
        worst_gate = worst_gate.max(1.0);
    }
    worst_gate = worst_gate.max((theta_zs - FRAC_PI_4).abs());

    // the multiset search also lands on Z⊗S up to a global phase
    let found = find_product_assignment(
        &spec4,
        &[
            standard_factor_phases("Z").unwrap(),
            standard_factor_phases("S").unwrap(),
        ],
    )
    .unwrap()
    .expect("4-cycle factorizes into Z and S phase multisets");
    let gate_found = build_gate(&spec4, &found).unwrap();
    if !equal_up_to_global_phase(gate_found.matrix().matrix(), &named_gate("ZxS").unwrap()).0 {
        worst_gate = worst_gate.max(1.0);
    }

    let basis8 = Basis::standard(8);
    let r8 = cycle_family(8, &basis8).unwrap().evolve(32).unwrap();
    let sigma8 = SigmaMatrix::from_transport(&r8, &basis8).unwrap();
    let spec8 = sigma8.nodal_free_spectrum().unwrap();
    for (k, p) in spec8.phases().iter().enumerate() {
        let expected = -PI + (2.0 * k as f64 + 1.0) * PI / 8.0;
        worst_spec = worst_spec.max((p - expected).abs());
    }
    match find_assignment_for_target(&spec8, &named_gate("ZxSxT").unwrap()).unwrap() {
        Some(asg) => {
            let gate = build_gate(&spec8, &asg).unwrap();
            if !equal_up_to_global_phase(gate.matrix().matrix(), &named_gate("ZxSxT").unwrap()).0 {
                worst_gate = worst_gate.max(1.0);
            }
        }
        None => worst_gate = worst_gate.max(1.0),
    }

    // flip-gate qubit: spectrum ±i, computational labels 0 ↔ λ₋
    let basis2 = Basis::standard(2);
    let r2 = bit_flip_family(0.9).unwrap().evolve(64).unwrap();
    let sigma2 = SigmaMatrix::from_transport(&r2, &basis2).unwrap();
    let spec2 = sigma2.nodal_free_spectrum().unwrap();
    let asg2 = Assignment::from_bit_strings(&["0", "1"]).unwrap();
    let gate2 = build_gate(&spec2, &asg2).unwrap();
    let (eq_z, theta_z) =
        equal_up_to_global_phase(gate2.matrix().matrix(), &named_gate("Z").unwrap());
    if !eq_z {
        worst_gate = worst_gate.max(1.0);
    }
    worst_gate = worst_gate.max((theta_z.abs() - FRAC_PI_2).abs());

    let worst = worst_spec.max(worst_gate * (TOL_SPEC / TOL_GATE));
    outcome(
        8,
        "cycle-family gate synthesis",
        worst,
        TOL_SPEC,
        format!(
            "spectra {}, gates {}",
            format_f64(worst_spec),
            format_f64(worst_gate)
        ),
    )
}

// Criterion 9: the figure paths — the slice sweep satisfies Ω = φ below
// 1e-6; the flip sweep keeps the gate at Z-up-to-phase while the
// computational-basis azimuths move affinely with the pulse azimuth; the
// concatenated two-ray loop encloses 2π so arg γ₁₂ = π.
pub fn figure_paths(_seed: u64) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    const TOL_LOOP: f64 = 1e-4;
    let basis = Basis::standard(2);
    let mut worst = 0.0f64;

    for step in 1..63 {
        let phi = step as f64 * 0.1;
        let r = orange_slice_family(phi).unwrap().evolve(96).unwrap();
        let inv = extract_invariants(&r, &basis).unwrap();
        worst = worst.max((inv.omega - phi).abs());
        worst = worst.max((inv.eta - 1.0).abs());
    }

    let mut azimuth_offsets = Vec::new();
    for step in 0..24 {
        let alpha = step as f64 * 2.0 * PI / 24.0;
        let r = bit_flip_family(alpha).unwrap().evolve(64).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        let asg = Assignment::from_bit_strings(&["0", "1"]).unwrap();
        let gate = build_gate(&spec, &asg).unwrap();
        let (eq, theta) =
            equal_up_to_global_phase(gate.matrix().matrix(), &named_gate("Z").unwrap());
        if !eq {
            worst = worst.max(1.0);
        }
        worst = worst.max(((theta.abs() - FRAC_PI_2).abs()) * (TOL / 1e-8));
        // computational-basis rays sit on the equator; their azimuth moves
        // affinely with the pulse azimuth
        let az = equatorial_azimuth(&spec.vector(0)).unwrap();
        azimuth_offsets.push(crate::policy::principal_angle(az - alpha));
    }
    for w in azimuth_offsets.windows(2) {
        worst = worst.max(angle_distance(w[0], w[1]));
    }

    // concatenated loop of both transported rays
    let mut worst_loop = 0.0f64;
    for alpha in [0.0, 0.9, 2.5, 4.4] {
        let r = bit_flip_family(alpha).unwrap().evolve(256).unwrap();
        let p1 = BlochPath::from_transport(&r, &basis.vector(0)).unwrap();
        let p2 = BlochPath::from_transport(&r, &basis.vector(1)).unwrap();
        let omega = solid_angle(&p1.concatenate(&p2).unwrap()).unwrap();
        worst_loop = worst_loop.max((omega.abs() - 2.0 * PI).abs());
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let g12 = sigma.gamma(&[0, 1]).unwrap().value;
        worst_loop = worst_loop.max(angle_distance(g12.arg(), PI));
    }
    let worst = worst.max(worst_loop * (TOL / TOL_LOOP));
    outcome(
        9,
        "figure path geometry",
        worst,
        TOL,
        format!("loop worst {}", format_f64(worst_loop)),
    )
}

// Criterion 10: determinism — the same seed produces byte-identical
// serialized sweep output.
pub fn output_determinism(seed: u64) -> CriterionOutcome {
    let a = representative_sweep_bytes(seed);
    let b = representative_sweep_bytes(seed);
    let worst = if a == b { 0.0 } else { 1.0 };
    outcome(
        10,
        "seeded output determinism",
        worst,
        0.5,
        format!("{} bytes", a.len()),
    )
}

/// A small deterministic sweep rendered to CSV; used by the determinism
/// criterion and available to callers that need a reproducibility probe.
pub fn representative_sweep_bytes(seed: u64) -> Vec<u8> {
    let mut rng = sample::standard_rng(seed);
    let basis = Basis::standard(2);
    let mut out = String::from("eta,omega,tau_plus,tau_minus,gamma2_re,gamma2_im\r\n");
    for _ in 0..12 {
        let eta = rng.gen_range(0.0..1.0f64);
        let omega = rng.gen_range(0.0..2.0 * PI);
        let kappa = 2.0 * eta.acos();
        let r = truncated_slice_family(omega, kappa)
            .unwrap()
            .evolve(48)
            .unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        let g12 = sigma.gamma(&[0, 1]).unwrap().value;
        out.push_str(&format!(
            "{},{},{},{},{},{}\r\n",
            format_f64(eta),
            format_f64(omega),
            format_f64(spec.phases()[1]),
            format_f64(spec.phases()[0]),
            format_f64(g12.re),
            format_f64(g12.im),
        ));
    }
    out.into_bytes()
}
