//! Parallel-transporting unitary families and their holonomy data.
//!
//! The crate builds unitary paths U(s) from piecewise-constant Hamiltonian
//! families, converts any family into a parallel-transporting one, computes
//! the overlap matrix σ_kl = ⟨ψ_k|U(1)|ψ_l⟩ together with its gauge-invariant
//! cyclic products γ^(l), extracts the eigenphase spectrum of σ (defined for
//! every evolution, cyclic or not), simulates the two-beam interferometric
//! readout of those phases, and synthesizes diagonal phase gates from
//! N-cycle families.

pub mod error;
pub mod policy;
pub mod matrix;
pub mod eig;
pub mod charpoly;
pub mod transport;
pub mod holonomy;
pub mod bloch;
pub mod gates;
pub mod interferometer;
pub mod io;
pub mod sample;
pub mod acceptance;

pub use bloch::{
    bit_flip_family, bloch_vector, closed_form_spectrum, equatorial_azimuth, extract_invariants,
    extract_invariants_with_closure, orange_slice_family, solid_angle, truncated_slice_family,
    BlochPath, GeodesicClosure, QubitInvariants,
};
pub use charpoly::{char_poly, poly_eval};
pub use gates::{
    build_gate, cycle_family, equal_up_to_global_phase, find_product_assignment, named_gate,
    standard_factor_phases, Assignment, GateMatrix,
};
pub use holonomy::{
    aa_cyclic_phase, pancharatnam_phase, pancharatnam_phase_of_state, phi_of, phi_of_with_tol,
    GammaValue, GaugePhases, Orientation, SigmaMatrix, Spectrum,
};
pub use interferometer::{
    default_restarts, extract_phases, intensity_curve, interference_fn, ExtractedPhase,
    InterferenceRecord,
};
pub use eig::{eig_unitary, EigUnitary};
pub use error::{Error, Result};
pub use matrix::{expm_skew, C64, ComplexMatrix, ComplexVector, HermitianMatrix, UnitaryMatrix};
pub use policy::{angle_distance, principal_angle, NumericPolicy};
pub use transport::{Basis, HamiltonianFamily, QubitPulse, Segment, TransportResult};
