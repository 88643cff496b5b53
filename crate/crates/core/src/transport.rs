//! Piecewise-constant Hamiltonian families, the unitary paths they generate,
//! and the parallel-transport machinery.
//!
//! A family is a list of (Hermitian generator, duration) segments. Durations
//! are normalized so the path parameter s runs over [0, 1]; generators are
//! rescaled accordingly, which keeps per-segment propagation exact:
//! U(s) = exp(−i(s − s_seg)·H_seg)·U(s_seg).
//!
//! Residuals never finite-difference U̇; they use U†U̇ = −iU†HU throughout.

use crate::error::{Error, Result};
use crate::matrix::{expm_skew, C64, ComplexMatrix, ComplexVector, HermitianMatrix, UnitaryMatrix};
use crate::policy::NumericPolicy;

/// Segment input: a Hamiltonian with its physical duration.
pub type HermitianPair = (HermitianMatrix, f64);

/// One normalized segment: `generator` is the s-parametrized Hermitian
/// generator (already scaled by the total duration), `width` its share of
/// [0, 1].
#[derive(Debug, Clone)]
pub struct Segment {
    generator: HermitianMatrix,
    width: f64,
}

impl Segment {
    pub fn generator(&self) -> &HermitianMatrix {
        &self.generator
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

/// Piecewise-constant Hamiltonian family H(s), s ∈ [0, 1].
#[derive(Debug, Clone)]
pub struct HamiltonianFamily {
    segments: Vec<Segment>,
    dim: usize,
}

impl HamiltonianFamily {
    /// Build from (Hamiltonian, physical duration) pairs. The total unitary
    /// is unchanged by the normalization: each generator is scaled by the
    /// total duration so that exp(−i·width·generator) = exp(−i·duration·h).
    pub fn new(segments: Vec<(HermitianMatrix, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let dim = segments[0].0.dim();
        let mut total = 0.0;
        for (h, d) in &segments {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.dim(),
                });
            }
            if !(*d > 0.0) || !d.is_finite() {
                return Err(Error::NonPositiveDuration { duration: *d });
            }
            total += d;
        }
        let scaled = segments
            .into_iter()
            .map(|(h, d)| Segment {
                generator: h.scale(total),
                width: d / total,
            })
            .collect();
        Ok(HamiltonianFamily {
            segments: scaled,
            dim,
        })
    }

    pub fn constant(h: HermitianMatrix) -> Result<Self> {
        Self::new(vec![(h, 1.0)])
    }

    /// Qubit pulse sequence: each pulse rotates the Bloch vector by `angle`
    /// about `axis`, i.e. H = (angle/duration)·(n·σ)/2 for that segment.
    pub fn qubit_pulses(pulses: &[QubitPulse]) -> Result<Self> {
        let mut segments = Vec::with_capacity(pulses.len());
        for p in pulses {
            let norm = (p.axis[0].powi(2) + p.axis[1].powi(2) + p.axis[2].powi(2)).sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::InvariantViolation {
                    what: "pulse axis must be a nonzero finite vector".into(),
                });
            }
            let n = [p.axis[0] / norm, p.axis[1] / norm, p.axis[2] / norm];
            let h = crate::matrix::pauli::dot(n).scale(C64::new(p.angle / p.duration / 2.0, 0.0));
            segments.push((HermitianMatrix::new(h)?, p.duration));
        }
        Self::new(segments)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Evolve the family into a sampled unitary path.
    ///
    /// The grid contains s = 0, every segment boundary, and
    /// `samples_per_segment` equally spaced points inside each segment.
    /// Propagation is exact per segment up to the accuracy of the matrix
    /// exponential, so refining the grid does not move U(1).
    pub fn evolve(&self, samples_per_segment: usize) -> Result<TransportResult> {
        let m = samples_per_segment.max(1);
        let mut grid = Vec::with_capacity(1 + m * self.segments.len());
        let mut unitaries = Vec::with_capacity(1 + m * self.segments.len());
        let mut interval_segment = Vec::with_capacity(m * self.segments.len());
        grid.push(0.0);
        unitaries.push(UnitaryMatrix::identity(self.dim));

        let mut s_start = 0.0;
        for (idx, seg) in self.segments.iter().enumerate() {
            let step = seg.width / m as f64;
            let gen_step = seg
                .generator
                .matrix()
                .scale(C64::new(0.0, -step));
            let propagator = expm_skew(&gen_step)?;
            for j in 1..=m {
                let u_prev = unitaries.last().unwrap();
                unitaries.push(propagator.mul(u_prev));
                let s = if idx + 1 == self.segments.len() && j == m {
                    1.0
                } else {
                    s_start + step * j as f64
                };
                grid.push(s);
                interval_segment.push(idx);
            }
            s_start += seg.width;
        }

        Ok(TransportResult {
            grid,
            unitaries,
            interval_segment,
            family: self.clone(),
            correction: None,
        })
    }
}

/// Axis-angle qubit pulse.
#[derive(Debug, Clone, Copy)]
pub struct QubitPulse {
    pub axis: [f64; 3],
    pub angle: f64,
    pub duration: f64,
}

impl QubitPulse {
    pub fn new(axis: [f64; 3], angle: f64) -> Self {
        QubitPulse {
            axis,
            angle,
            duration: 1.0,
        }
    }
}

/// Orthonormal basis given by matrix columns.
#[derive(Debug, Clone)]
pub struct Basis {
    columns: ComplexMatrix,
}

impl Basis {
    pub fn new(columns: ComplexMatrix) -> Result<Self> {
        let gram = columns.adjoint().mul(&columns);
        let deviation = gram.max_abs_diff(&ComplexMatrix::identity(columns.dim()));
        if deviation >= NumericPolicy::standard().structural_tol {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Basis { columns })
    }

    pub fn standard(dim: usize) -> Self {
        Basis {
            columns: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.dim()
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.columns.column(k)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.columns
    }
}

// Per-segment transport-correction rates produced by `parallelize`:
// rates[i][k] is the (constant) value of ⟨ψ_k(s)|H_i|ψ_k(s)⟩ on segment i.
// The effective generator of the corrected family is
// H(s) − Σ_k rates[seg(s)][k]·|ψ_k(s)⟩⟨ψ_k(s)|.
#[derive(Debug, Clone)]
struct PtCorrection {
    basis: Basis,
    rates: Vec<Vec<f64>>,
}

/// A sampled unitary path U(s_j) with its generating family.
#[derive(Debug, Clone)]
pub struct TransportResult {
    grid: Vec<f64>,
    unitaries: Vec<UnitaryMatrix>,
    // interval j spans [grid[j], grid[j+1]] and belongs to this segment
    interval_segment: Vec<usize>,
    family: HamiltonianFamily,
    correction: Option<PtCorrection>,
}

impl TransportResult {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix] {
        &self.unitaries
    }

    pub fn unitary(&self, j: usize) -> &UnitaryMatrix {
        &self.unitaries[j]
    }

    pub fn final_unitary(&self) -> &UnitaryMatrix {
        self.unitaries.last().unwrap()
    }

    pub fn family(&self) -> &HamiltonianFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn num_intervals(&self) -> usize {
        self.interval_segment.len()
    }

    /// Index of the family segment that interval `interval` belongs to.
    pub fn interval_segment_index(&self, interval: usize) -> usize {
        self.interval_segment[interval]
    }

    pub fn is_parallelized(&self) -> bool {
        self.correction.is_some()
    }

    /// Effective generator governing interval `interval`, evaluated at sample
    /// `sample` (one of the interval's endpoints). For raw families this is
    /// the segment Hamiltonian; parallelized families subtract the rate-
    /// weighted projectors onto the transported basis rays.
    pub fn generator_at(&self, interval: usize, sample: usize) -> HermitianMatrix {
        let seg = self.interval_segment[interval];
        let base = self.family.segments[seg].generator.clone();
        match &self.correction {
            None => base,
            Some(corr) => {
                let mut m = base.matrix().clone();
                for k in 0..self.dim() {
                    let psi_s = self.unitaries[sample].apply(&corr.basis.vector(k));
                    let proj = psi_s.projector();
                    m = m.sub(&proj.scale(C64::new(corr.rates[seg][k], 0.0)));
                }
                HermitianMatrix::new_unchecked(m)
            }
        }
    }

    /// Max over basis vectors and grid points of |⟨ψ_k|U†(s)H(s)U(s)|ψ_k⟩|.
    ///
    /// Zero (within tolerance) exactly when the family parallel-transports
    /// the basis on the sample grid. Both one-sided limits of H are checked
    /// at segment boundaries.
    pub fn pt_residual(&self, basis: &Basis) -> f64 {
        assert_eq!(basis.dim(), self.dim(), "basis dimension mismatch");
        let n = self.dim();
        let mut worst = 0.0f64;
        for interval in 0..self.num_intervals() {
            for sample in [interval, interval + 1] {
                let gen = self.generator_at(interval, sample);
                for k in 0..n {
                    let moved = self.unitaries[sample].apply(&basis.vector(k));
                    worst = worst.max(gen.expectation(&moved).abs());
                }
            }
        }
        worst
    }

    /// ∫₀¹ ⟨φ(s)|H(s)|φ(s)⟩ ds with φ(s) = U(s)·state.
    ///
    /// Composite trapezoid per interval with the interval's own generator at
    /// both ends. For piecewise-constant generators the integrand is
    /// conserved inside each segment, so the rule is exact there; corrected
    /// (parallelized) families are integrated at second order.
    pub fn dynamical_phase(&self, state: &ComplexVector) -> Result<f64> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: state.dim(),
            });
        }
        let norm = state.norm();
        if (norm - 1.0).abs() >= NumericPolicy::standard().structural_tol {
            return Err(Error::StateNotNormalized { norm });
        }
        let mut acc = 0.0;
        for interval in 0..self.num_intervals() {
            let dt = self.grid[interval + 1] - self.grid[interval];
            let left = {
                let gen = self.generator_at(interval, interval);
                gen.expectation(&self.unitaries[interval].apply(state))
            };
            let right = {
                let gen = self.generator_at(interval, interval + 1);
                gen.expectation(&self.unitaries[interval + 1].apply(state))
            };
            acc += 0.5 * (left + right) * dt;
        }
        Ok(acc)
    }

    /// Convert the path into one that parallel-transports `basis` by removing
    /// the accumulated local phases: U∥(s) = U(s)·D(s) with D diagonal in the
    /// basis and phases φ_k(s) = ∫₀ˢ ⟨ψ_k(s′)|H(s′)|ψ_k(s′)⟩ ds′.
    ///
    /// Each output column stays proportional to the input column (the rays
    /// are untouched), and the output satisfies the transport condition at
    /// every sample point. Idempotent.
    pub fn parallelize(&self, basis: &Basis) -> Result<TransportResult> {
        if basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: basis.dim(),
            });
        }
        let n = self.dim();
        let num_segments = self.family.segments.len();

        // ⟨ψ_k(s)|H_eff(s)|ψ_k(s)⟩ is conserved inside each segment (any
        // state's generator expectation is constant under evolution by that
        // same constant generator; corrected generators vanish there by
        // construction), so one evaluation per segment fixes the rate.
        let mut new_rates = vec![vec![0.0f64; n]; num_segments];
        let mut seg_start_sample = vec![0usize; num_segments];
        for interval in 0..self.num_intervals() {
            let seg = self.interval_segment[interval];
            if interval == 0 || self.interval_segment[interval - 1] != seg {
                seg_start_sample[seg] = interval;
            }
        }
        for seg in 0..num_segments {
            let sample = seg_start_sample[seg];
            // locate the first interval of this segment to evaluate its generator
            let interval = self
                .interval_segment
                .iter()
                .position(|&s| s == seg)
                .unwrap();
            let gen = self.generator_at(interval, sample);
            for k in 0..n {
                let moved = self.unitaries[sample].apply(&basis.vector(k));
                new_rates[seg][k] = gen.expectation(&moved);
            }
        }

        // Accumulate the piecewise-linear phases and apply D(s).
        let mut phases = vec![0.0f64; n];
        let mut unitaries = Vec::with_capacity(self.unitaries.len());
        unitaries.push(self.unitaries[0].clone());
        let basis_mat = basis.matrix();
        let basis_adj = basis_mat.adjoint();
        for interval in 0..self.num_intervals() {
            let seg = self.interval_segment[interval];
            let dt = self.grid[interval + 1] - self.grid[interval];
            for k in 0..n {
                phases[k] += new_rates[seg][k] * dt;
            }
            let d_entries: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
            let d = basis_mat
                .mul(&ComplexMatrix::diagonal(&d_entries))
                .mul(&basis_adj);
            let u = self.unitaries[interval + 1].matrix().mul(&d);
            unitaries.push(UnitaryMatrix::new_unchecked(u));
        }

        // Total correction is relative to the family generators.
        let rates = match &self.correction {
            None => new_rates,
            Some(old) => {
                let mut combined = old.rates.clone();
                for seg in 0..num_segments {
                    for k in 0..n {
                        combined[seg][k] += new_rates[seg][k];
                    }
                }
                combined
            }
        };

        let out = TransportResult {
            grid: self.grid.clone(),
            unitaries,
            interval_segment: self.interval_segment.clone(),
            family: self.family.clone(),
            correction: Some(PtCorrection {
                basis: basis.clone(),
                rates,
            }),
        };
        let residual = out.pt_residual(basis);
        if residual >= NumericPolicy::standard().transport_tol {
            return Err(Error::IntegrationTooCoarse { residual });
        }
        Ok(out)
    }

    /// Max step mismatch ‖U(s_{j+1}) − exp(−iΔs·H)·U(s_j)‖_max using each
    /// interval's effective generator at its left end.
    pub fn step_consistency(&self) -> f64 {
        let mut worst = 0.0f64;
        for interval in 0..self.num_intervals() {
            let dt = self.grid[interval + 1] - self.grid[interval];
            let gen = self.generator_at(interval, interval);
            let step = gen.matrix().scale(C64::new(0.0, -dt));
            let prop = match expm_skew(&step) {
                Ok(p) => p,
                Err(_) => return f64::INFINITY,
            };
            let predicted = prop.matrix().mul(self.unitaries[interval].matrix());
            worst = worst.max(predicted.max_abs_diff(self.unitaries[interval + 1].matrix()));
        }
        worst
    }
}
