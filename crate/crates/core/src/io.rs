//! Shared file formats: matrix/vector literals, Hamiltonian-family files,
//! and the spectrum/gate export schemas.
//!
//! All floating-point JSON goes through serde_json's shortest-round-trip
//! encoding, so exports re-parse to bit-identical values and identical data
//! serializes to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::holonomy::{SigmaMatrix, Spectrum};
use crate::matrix::{C64, ComplexMatrix, ComplexVector};
use crate::transport::{HamiltonianFamily, HermitianPair, QubitPulse};

/// Row-major matrix literal: {"dim": N, "entries": [[[re,im], ...], ...]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixLiteral {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        MatrixLiteral {
            dim: n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.dim {
            return Err(Error::BadShape);
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for row in &self.entries {
            if row.len() != self.dim {
                return Err(Error::BadShape);
            }
            for &[re, im] in row {
                data.push(C64::new(re, im));
            }
        }
        ComplexMatrix::new(self.dim, data)
    }
}

/// Complex vector literal: [[re,im], ...].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorLiteral(pub Vec<[f64; 2]>);

impl VectorLiteral {
    pub fn from_vector(v: &ComplexVector) -> Self {
        VectorLiteral(v.entries().iter().map(|z| [z.re, z.im]).collect())
    }

    pub fn to_vector(&self) -> Result<ComplexVector> {
        for (i, &[re, im]) in self.0.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: 0 });
            }
        }
        Ok(ComplexVector::new(
            self.0.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        ))
    }
}

/// One family segment: either an explicit Hermitian matrix with a duration,
/// or the qubit shorthand H = (angle/duration)·(n·σ)/2.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SegmentSpec {
    Matrix {
        h: MatrixLiteral,
        duration: f64,
    },
    Pulse {
        axis: [f64; 3],
        angle: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration: Option<f64>,
    },
}

/// Hamiltonian-family file: {"segments": [...]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub segments: Vec<SegmentSpec>,
}

impl FamilySpec {
    pub fn to_family(&self) -> Result<HamiltonianFamily> {
        let mut matrix_segments: Vec<HermitianPair> = Vec::new();
        let mut pulses: Vec<QubitPulse> = Vec::new();
        let all_pulses = self
            .segments
            .iter()
            .all(|s| matches!(s, SegmentSpec::Pulse { .. }));
        for seg in &self.segments {
            match seg {
                SegmentSpec::Matrix { h, duration } => {
                    let m = h.to_matrix()?;
                    matrix_segments.push((crate::matrix::HermitianMatrix::new(m)?, *duration));
                }
                SegmentSpec::Pulse {
                    axis,
                    angle,
                    duration,
                } => {
                    let d = duration.unwrap_or(1.0);
                    if all_pulses {
                        pulses.push(QubitPulse {
                            axis: *axis,
                            angle: *angle,
                            duration: d,
                        });
                    } else {
                        // mixed files: expand the pulse to its matrix form
                        let norm =
                            (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
                        if norm == 0.0 || !norm.is_finite() {
                            return Err(Error::InvariantViolation {
                                what: "pulse axis must be a nonzero finite vector".into(),
                            });
                        }
                        let n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
                        let h = crate::matrix::pauli::dot(n)
                            .scale(C64::new(angle / d / 2.0, 0.0));
                        matrix_segments.push((crate::matrix::HermitianMatrix::new(h)?, d));
                    }
                }
            }
        }
        if all_pulses && !pulses.is_empty() {
            HamiltonianFamily::qubit_pulses(&pulses)
        } else {
            HamiltonianFamily::new(matrix_segments)
        }
    }
}

/// One exported γ value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaExport {
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// Spectrum export: phases, eigenvector columns, and the γ values of orders
/// 1 and 2 plus the full-cycle chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumExport {
    pub phases: Vec<f64>,
    pub eigenvectors: MatrixLiteral,
    pub gammas: Vec<GammaExport>,
}

impl SpectrumExport {
    pub fn from_spectrum(spectrum: &Spectrum, sigma: &SigmaMatrix) -> Result<Self> {
        let n = sigma.dim();
        let mut gammas = Vec::new();
        for j in 0..n {
            let g = sigma.gamma(&[j])?;
            gammas.push(GammaExport {
                indices: vec![j],
                re: g.value.re,
                im: g.value.im,
            });
        }
        for j in 0..n {
            for k in (j + 1)..n {
                let g = sigma.gamma(&[j, k])?;
                gammas.push(GammaExport {
                    indices: vec![j, k],
                    re: g.value.re,
                    im: g.value.im,
                });
            }
        }
        if n > 2 {
            let full: Vec<usize> = (0..n).collect();
            let g = sigma.gamma(&full)?;
            gammas.push(GammaExport {
                indices: full,
                re: g.value.re,
                im: g.value.im,
            });
        }
        Ok(SpectrumExport {
            phases: spectrum.phases().to_vec(),
            eigenvectors: MatrixLiteral::from_matrix(spectrum.vectors()),
            gammas,
        })
    }
}

/// Gate export: labels and phases in eigenvector order plus the matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateExport {
    pub labels: Vec<String>,
    pub phases: Vec<f64>,
    pub matrix: MatrixLiteral,
}

impl GateExport {
    pub fn from_gate(gate: &GateMatrix) -> Self {
        GateExport {
            labels: gate.labels().to_vec(),
            phases: gate.slot_phases().to_vec(),
            matrix: MatrixLiteral::from_matrix(gate.matrix().matrix()),
        }
    }
}

/// Fixed 17-significant-digit float rendering for CSV output.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::transport::Basis;

    #[test]
    fn matrix_literal_round_trip() {
        let m = pauli::sigma_y().scale(C64::new(0.25, -0.125));
        let lit = MatrixLiteral::from_matrix(&m);
        let json = serde_json::to_string(&lit).unwrap();
        let back: MatrixLiteral = serde_json::from_str(&json).unwrap();
        assert!(back.to_matrix().unwrap().max_abs_diff(&m) == 0.0);
    }

    #[test]
    fn literal_rejects_bad_shape() {
        let lit = MatrixLiteral {
            dim: 2,
            entries: vec![vec![[1.0, 0.0]]],
        };
        assert!(lit.to_matrix().is_err());
    }

    #[test]
    fn family_file_with_pulses() {
        let json = r#"{"segments": [
            {"axis": [0.0, 1.0, 0.0], "angle": 1.5707963267948966},
            {"h": {"dim": 2, "entries": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]]}, "duration": 0.5}
        ]}"#;
        let spec: FamilySpec = serde_json::from_str(json).unwrap();
        let fam = spec.to_family().unwrap();
        assert_eq!(fam.segments().len(), 2);
        assert_eq!(fam.dim(), 2);
    }

    #[test]
    fn family_file_rejects_non_finite() {
        let json = r#"{"segments": [
            {"h": {"dim": 1, "entries": [[[1e999,0.0]]]}, "duration": 1.0}
        ]}"#;
        assert!(serde_json::from_str::<FamilySpec>(json).is_err());
    }

    #[test]
    fn spectrum_export_includes_gamma_orders() {
        let basis = Basis::standard(4);
        let fam = crate::gates::cycle_family(4, &basis).unwrap();
        let r = fam.evolve(16).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let spec = sigma.nodal_free_spectrum().unwrap();
        let export = SpectrumExport::from_spectrum(&spec, &sigma).unwrap();
        // 4 order-1, 6 order-2, 1 full cycle
        assert_eq!(export.gammas.len(), 11);
        let json = serde_json::to_string_pretty(&export).unwrap();
        let back: SpectrumExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.phases, export.phases);
    }
}
