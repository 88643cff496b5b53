//! Central numeric policy: every tolerance used by the library in one place.

/// Tolerances shared across the crate.
///
/// Structural tolerances guard invariants of constructed objects (unitarity,
/// hermiticity, orthonormality). Integration-level tolerances apply to
/// quantities obtained by quadrature or iterative search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Residual bound for structural identities (U†U = 1, eigen reconstruction).
    pub structural_tol: f64,
    /// Max-norm bound on H − H† for Hermitian inputs.
    pub hermitian_tol: f64,
    /// Parallel-transport residual below which a family counts as transporting.
    pub transport_tol: f64,
    /// Accuracy target for integrated quantities (dynamical phases, solid angles).
    pub integration_tol: f64,
    /// |γ| at or below this is a nodal point: Φ[γ] is reported undefined.
    pub nodal_tol: f64,
    /// Max-norm tolerance for gate comparisons after global-phase alignment.
    pub gate_tol: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            structural_tol: 1e-10,
            hermitian_tol: 1e-12,
            transport_tol: 1e-8,
            integration_tol: 1e-6,
            nodal_tol: 1e-12,
            gate_tol: 1e-8,
        }
    }
}

impl NumericPolicy {
    pub const fn standard() -> Self {
        NumericPolicy {
            structural_tol: 1e-10,
            hermitian_tol: 1e-12,
            transport_tol: 1e-8,
            integration_tol: 1e-6,
            nodal_tol: 1e-12,
            gate_tol: 1e-8,
        }
    }
}

/// Reduce an angle to the principal branch (−π, π].
pub fn principal_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t <= -std::f64::consts::PI {
        t += two_pi;
    } else if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// Absolute distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    principal_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn principal_branch_is_half_open() {
        assert_eq!(principal_angle(PI), PI);
        assert_eq!(principal_angle(-PI), PI);
        assert!((principal_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((principal_angle(-2.5 * PI) + 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn angle_distance_wraps() {
        assert!((angle_distance(PI - 0.01, -PI + 0.01) - 0.02).abs() < 1e-12);
    }
}
