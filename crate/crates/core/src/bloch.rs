//! Qubit-specific geometry: Bloch paths traced by transported rays, oriented
//! solid angles of closed spherical polygons, the pulse families behind the
//! phase-shift and phase-flip constructions, and the closed-form qubit
//! spectrum in terms of the degree of cyclicity η and the geodesically
//! closed solid angle Ω.

use crate::error::{Error, Result};
use crate::holonomy::SigmaMatrix;
use crate::matrix::ComplexVector;
use crate::policy::principal_angle;
use crate::transport::{Basis, HamiltonianFamily, QubitPulse, TransportResult};

use std::f64::consts::{FRAC_PI_2, PI};

/// Bloch vector ⟨ψ|σ|ψ⟩ of a normalized qubit state.
pub fn bloch_vector(state: &ComplexVector) -> Result<[f64; 3]> {
    if state.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.dim(),
        });
    }
    let (a, b) = (state.get(0), state.get(1));
    let cross = a.conj() * b;
    Ok([
        2.0 * cross.re,
        2.0 * cross.im,
        a.norm_sqr() - b.norm_sqr(),
    ])
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale3(a: [f64; 3], f: f64) -> [f64; 3] {
    [a[0] * f, a[1] * f, a[2] * f]
}

fn normalize3(a: [f64; 3]) -> [f64; 3] {
    scale3(a, 1.0 / norm3(a))
}

/// Ordered unit vectors on the sphere with the sample indices at which field
/// pulses switch.
#[derive(Debug, Clone)]
pub struct BlochPath {
    points: Vec<[f64; 3]>,
    segment_markers: Vec<usize>,
}

impl BlochPath {
    /// Build from explicit points; enforces unit norm and a maximum angular
    /// step of 0.1 rad between consecutive points.
    pub fn new(points: Vec<[f64; 3]>, segment_markers: Vec<usize>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if (norm3(*p) - 1.0).abs() >= 1e-10 {
                return Err(Error::InvariantViolation {
                    what: format!("path point {i} is not unit norm"),
                });
            }
        }
        for i in 0..points.len().saturating_sub(1) {
            let angle = dot3(points[i], points[i + 1]).clamp(-1.0, 1.0).acos();
            if angle >= 0.1 {
                return Err(Error::PathTooCoarse {
                    index: i,
                    next: i + 1,
                    angle,
                });
            }
        }
        Ok(BlochPath {
            points,
            segment_markers,
        })
    }

    /// Path traced by U(s)·state on the Bloch sphere.
    pub fn from_transport(result: &TransportResult, state: &ComplexVector) -> Result<Self> {
        let mut points = Vec::with_capacity(result.unitaries().len());
        for u in result.unitaries() {
            points.push(bloch_vector(&u.apply(state))?);
        }
        let mut markers = Vec::new();
        for interval in 1..result.num_intervals() {
            if result.interval_segment_index(interval) != result.interval_segment_index(interval - 1)
            {
                markers.push(interval);
            }
        }
        Self::new(points, markers)
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn segment_markers(&self) -> &[usize] {
        &self.segment_markers
    }

    pub fn first(&self) -> [f64; 3] {
        self.points[0]
    }

    pub fn last(&self) -> [f64; 3] {
        *self.points.last().unwrap()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        norm3(sub3(self.first(), self.last())) < tol
    }

    /// Join two paths; the second must start where the first ends.
    pub fn concatenate(&self, other: &BlochPath) -> Result<BlochPath> {
        let gap = norm3(sub3(self.last(), other.first()));
        if gap >= 1e-8 {
            return Err(Error::PathNotClosed { gap });
        }
        let offset = self.points.len() - 1;
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        let mut markers = self.segment_markers.clone();
        markers.push(offset);
        markers.extend(other.segment_markers.iter().map(|m| m + offset));
        Ok(BlochPath {
            points,
            segment_markers: markers,
        })
    }

    /// CSV export: s, nx, ny, nz, segment_id. `grid` must match the points.
    pub fn to_csv(&self, grid: &[f64]) -> Result<String> {
        if grid.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: grid.len(),
            });
        }
        let mut out = String::from("s,nx,ny,nz,segment_id\r\n");
        let mut seg = 0usize;
        let mut next_marker = 0usize;
        for (i, (s, p)) in grid.iter().zip(&self.points).enumerate() {
            while next_marker < self.segment_markers.len()
                && i >= self.segment_markers[next_marker]
            {
                seg += 1;
                next_marker += 1;
            }
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{}\r\n",
                s, p[0], p[1], p[2], seg
            ));
        }
        Ok(out)
    }
}

/// Oriented solid angle of a closed path via the turning-angle form of the
/// spherical excess: Ω = 2π − Σ exterior angles, reported in (−2π, 2π].
///
/// The polygon through the sample points is exact for piecewise
/// great-circle paths; for general smooth paths the error is O(step²).
pub fn solid_angle(path: &BlochPath) -> Result<f64> {
    let mut pts = path.points.clone();
    let gap = norm3(sub3(pts[0], *pts.last().unwrap()));
    if gap >= 1e-8 {
        return Err(Error::PathNotClosed { gap });
    }
    // treat the duplicated closure point as implicit
    pts.pop();
    solid_angle_of_vertices(&pts)
}

fn solid_angle_of_vertices(pts: &[[f64; 3]]) -> Result<f64> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::BadShape);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let chord = norm3(sub3(pts[i], pts[j]));
        if chord < 1e-12 {
            return Err(Error::DegenerateVertex { index: i });
        }
        if dot3(pts[i], pts[j]) < -1.0 + 1e-12 {
            return Err(Error::InvariantViolation {
                what: format!("adjacent path points {i}, {j} are antipodal"),
            });
        }
    }
    let mut turning = 0.0f64;
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let here = pts[i];
        let next = pts[(i + 1) % n];
        // tangents of the incoming and outgoing geodesics at `here`
        let t_in = normalize3(sub3(scale3(here, dot3(prev, here)), prev));
        let t_out = normalize3(sub3(next, scale3(here, dot3(here, next))));
        // a full reversal (retraced edge) has an ill-signed atan2; fix the
        // branch so a zero-area spike cancels to zero
        let ext = if dot3(t_in, t_out) < -1.0 + 1e-9 {
            PI
        } else {
            f64::atan2(dot3(here, cross3(t_in, t_out)), dot3(t_in, t_out))
        };
        turning += ext;
    }
    let mut omega = 2.0 * PI - turning;
    while omega > 2.0 * PI {
        omega -= 4.0 * PI;
    }
    while omega <= -2.0 * PI {
        omega += 4.0 * PI;
    }
    Ok(omega)
}

/// Degree of cyclicity and geodesically closed solid angle of a qubit path.
#[derive(Debug, Clone)]
pub struct QubitInvariants {
    /// |σ_11| ∈ [0, 1]; 1 is cyclic evolution, 0 a bit flip.
    pub eta: f64,
    /// Oriented solid angle enclosed by the Bloch path and its geodesic
    /// closure.
    pub omega: f64,
    /// Which closure produced Ω.
    pub closure: GeodesicClosure,
}

/// How an open Bloch path was closed before measuring its solid angle.
#[derive(Debug, Clone, PartialEq)]
pub enum GeodesicClosure {
    /// Path already closed; no geodesic needed.
    AlreadyClosed,
    /// Unique shortest geodesic between the endpoints.
    Shortest,
    /// Antipodal endpoints closed through an explicitly chosen waypoint.
    Waypoint([f64; 3]),
}

/// Measure (η, Ω) of a parallel-transporting qubit family.
///
/// Errors with `GeodesicAmbiguous` when the endpoints are antipodal (η = 0):
/// every great semicircle closes the path and they enclose different solid
/// angles, so the caller must pick one via
/// [`extract_invariants_with_closure`].
pub fn extract_invariants(result: &TransportResult, basis: &Basis) -> Result<QubitInvariants> {
    extract_invariants_impl(result, basis, None)
}

/// Same, but close antipodal endpoints through the great semicircle that
/// passes the given waypoint (projected perpendicular to the start point).
pub fn extract_invariants_with_closure(
    result: &TransportResult,
    basis: &Basis,
    waypoint: [f64; 3],
) -> Result<QubitInvariants> {
    extract_invariants_impl(result, basis, Some(waypoint))
}

fn extract_invariants_impl(
    result: &TransportResult,
    basis: &Basis,
    waypoint: Option<[f64; 3]>,
) -> Result<QubitInvariants> {
    if result.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: result.dim(),
        });
    }
    let sigma = SigmaMatrix::from_transport(result, basis)?;
    let eta = sigma.entry(0, 0).norm().min(1.0);

    let path = BlochPath::from_transport(result, &basis.vector(0))?;
    let start = path.first();
    let end = path.last();
    let mut pts = path.points().to_vec();

    let (omega, closure) = if norm3(sub3(start, end)) < 1e-8 {
        pts.pop();
        (solid_angle_of_vertices(&pts)?, GeodesicClosure::AlreadyClosed)
    } else if dot3(start, end) < -1.0 + 1e-10 {
        match waypoint {
            None => return Err(Error::GeodesicAmbiguous),
            Some(w) => {
                // project the waypoint onto the equator of the endpoint axis
                let mut wp = sub3(w, scale3(start, dot3(w, start)));
                let n = norm3(wp);
                if n < 1e-8 {
                    return Err(Error::InvariantViolation {
                        what: "closure waypoint is parallel to the path endpoints".into(),
                    });
                }
                wp = scale3(wp, 1.0 / n);
                pts.push(wp);
                (solid_angle_of_vertices(&pts)?, GeodesicClosure::Waypoint(wp))
            }
        }
    } else {
        // the implicit polygon edge from end to start is the unique shortest
        // geodesic
        (solid_angle_of_vertices(&pts)?, GeodesicClosure::Shortest)
    };

    Ok(QubitInvariants {
        eta,
        omega,
        closure,
    })
}

/// Closed-form qubit eigenphases: λ_± = ηcos(Ω/2) ± i√(1 − η²cos²(Ω/2)),
/// returned ascending as [−arccos(x), +arccos(x)] with x = ηcos(Ω/2).
pub fn closed_form_spectrum(inv: &QubitInvariants) -> Result<[f64; 2]> {
    let x = inv.eta * (inv.omega / 2.0).cos();
    if x * x > 1.0 + 1e-12 {
        return Err(Error::InvariantViolation {
            what: format!("η²cos²(Ω/2) = {} exceeds 1", x * x),
        });
    }
    let tau = x.clamp(-1.0, 1.0).acos();
    Ok([-tau, tau])
}

/// Phase-shift-gate path family: pole → equator along meridian 0, along the
/// equator by `azimuth`, then back to the pole along the final meridian.
/// Parallel-transports the σ_z eigenbasis exactly and is cyclic (η = 1) with
/// Ω equal to `azimuth`.
pub fn orange_slice_family(azimuth: f64) -> Result<HamiltonianFamily> {
    truncated_slice_family(azimuth, 0.0)
}

/// Slice family whose final meridian leg stops at polar angle `final_polar`
/// (0 = north pole, π/2 = equator, π = south pole). Covers the full
/// invariant range: η = cos(final_polar/2), Ω = azimuth.
pub fn truncated_slice_family(azimuth: f64, final_polar: f64) -> Result<HamiltonianFamily> {
    if !(0.0..2.0 * PI).contains(&azimuth) {
        return Err(Error::InvariantViolation {
            what: format!("azimuth {azimuth} outside [0, 2π)"),
        });
    }
    if !(0.0..=PI).contains(&final_polar) {
        return Err(Error::InvariantViolation {
            what: format!("final polar angle {final_polar} outside [0, π]"),
        });
    }
    let mut pulses = vec![QubitPulse::new([0.0, 1.0, 0.0], FRAC_PI_2)];
    if azimuth > 0.0 {
        pulses.push(QubitPulse::new([0.0, 0.0, 1.0], azimuth));
    }
    let ascent = FRAC_PI_2 - final_polar;
    if ascent.abs() > 0.0 {
        pulses.push(QubitPulse::new(
            [azimuth.sin(), -azimuth.cos(), 0.0],
            ascent,
        ));
    }
    // durations proportional to rotation angles keep the field magnitude
    // uniform across pulses
    for p in pulses.iter_mut() {
        p.duration = p.angle.abs().max(1e-3);
    }
    HamiltonianFamily::qubit_pulses(&pulses)
}

/// Phase-flip-gate family: a single π rotation about the equatorial axis at
/// `azimuth`. Parallel-transports the σ_z eigenbasis, has η = 0, and its
/// spectrum is ±i independent of the azimuth.
pub fn bit_flip_family(azimuth: f64) -> Result<HamiltonianFamily> {
    if !(0.0..2.0 * PI).contains(&azimuth) {
        return Err(Error::InvariantViolation {
            what: format!("azimuth {azimuth} outside [0, 2π)"),
        });
    }
    HamiltonianFamily::qubit_pulses(&[QubitPulse::new([azimuth.cos(), azimuth.sin(), 0.0], PI)])
}

/// Equatorial azimuth of a qubit state's Bloch vector, in (−π, π].
pub fn equatorial_azimuth(state: &ComplexVector) -> Result<f64> {
    let v = bloch_vector(state)?;
    Ok(principal_angle(f64::atan2(v[1], v[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{C64, ONE};
    use std::f64::consts::FRAC_PI_4;

    fn unit_points(raw: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
        raw.into_iter().map(normalize3).collect()
    }

    fn arc_points(from: [f64; 3], to: [f64; 3], steps: usize) -> Vec<[f64; 3]> {
        // great-circle interpolation
        let theta = dot3(from, to).clamp(-1.0, 1.0).acos();
        (0..=steps)
            .map(|i| {
                let t = i as f64 / steps as f64;
                let a = ((1.0 - t) * theta).sin() / theta.sin();
                let b = (t * theta).sin() / theta.sin();
                normalize3([
                    a * from[0] + b * to[0],
                    a * from[1] + b * to[1],
                    a * from[2] + b * to[2],
                ])
            })
            .collect()
    }

    fn closed_loop(paths: Vec<Vec<[f64; 3]>>) -> BlochPath {
        let mut pts = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            let skip = if i == 0 { 0 } else { 1 };
            pts.extend_from_slice(&p[skip..]);
        }
        BlochPath::new(pts, vec![]).unwrap()
    }

    #[test]
    fn octant_has_half_pi() {
        let z = [0.0, 0.0, 1.0];
        let x = [1.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0];
        let loop_ = closed_loop(vec![
            arc_points(z, x, 40),
            arc_points(x, y, 40),
            arc_points(y, z, 40),
        ]);
        let omega = solid_angle(&loop_).unwrap();
        assert!((omega - FRAC_PI_2).abs() < 1e-12, "omega = {omega}");
        // opposite orientation flips the sign
        let mut rev = loop_.points().to_vec();
        rev.reverse();
        let omega_rev = solid_angle(&BlochPath::new(rev, vec![]).unwrap()).unwrap();
        assert!((omega_rev + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn full_equator_is_hemisphere() {
        let pts: Vec<[f64; 3]> = (0..=200)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 200.0;
                [t.cos(), t.sin(), 0.0]
            })
            .collect();
        let omega = solid_angle(&BlochPath::new(pts, vec![]).unwrap()).unwrap();
        assert!((omega.abs() - 2.0 * PI).abs() < 1e-10, "omega = {omega}");
    }

    #[test]
    fn degenerate_vertex_detected() {
        let p = normalize3([1.0, 0.1, 0.0]);
        let pts = unit_points(vec![[1.0, 0.0, 0.0], [1.0, 0.1, 0.0], [1.0, 0.1, 0.0], [1.0, 0.0, 0.1]]);
        let _ = p;
        assert!(matches!(
            solid_angle_of_vertices(&pts),
            Err(Error::DegenerateVertex { .. })
        ));
    }

    #[test]
    fn open_path_rejected() {
        let pts = arc_points([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], 30);
        let path = BlochPath::new(pts, vec![]).unwrap();
        assert!(matches!(
            solid_angle(&path),
            Err(Error::PathNotClosed { .. })
        ));
    }

    #[test]
    fn orange_slice_invariants() {
        for phi in [0.4, 1.2, FRAC_PI_2, 3.0] {
            let fam = orange_slice_family(phi).unwrap();
            let r = fam.evolve(160).unwrap();
            let basis = Basis::standard(2);
            assert!(r.pt_residual(&basis) < 1e-10, "slice must transport σ_z basis");
            let inv = extract_invariants(&r, &basis).unwrap();
            assert!((inv.eta - 1.0).abs() < 1e-9, "eta = {}", inv.eta);
            assert!((inv.omega - phi).abs() < 1e-9, "omega = {} vs {}", inv.omega, phi);
            assert_eq!(inv.closure, GeodesicClosure::AlreadyClosed);
            // γ_1^{(1)} = η·e^{−iΩ/2}
            let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
            let g1 = sigma.gamma(&[0]).unwrap().value;
            assert!((g1 - C64::from_polar(1.0, -phi / 2.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn truncated_slice_covers_eta_range() {
        let phi = 1.1;
        for kappa in [0.3, FRAC_PI_2, 2.2] {
            let fam = truncated_slice_family(phi, kappa).unwrap();
            let r = fam.evolve(160).unwrap();
            let basis = Basis::standard(2);
            let inv = extract_invariants(&r, &basis).unwrap();
            let eta_expected = (kappa / 2.0).cos();
            assert!((inv.eta - eta_expected).abs() < 1e-9);
            assert!((inv.omega - phi).abs() < 1e-9);
            // arg σ_11 = −Ω/2
            let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
            let consistency =
                crate::policy::angle_distance(sigma.entry(0, 0).arg(), -inv.omega / 2.0);
            assert!(consistency < 1e-9, "consistency = {consistency}");
        }
    }

    #[test]
    fn closed_form_matches_paper_limits() {
        // η = 0 → ±i regardless of Ω
        for omega in [0.0, 1.0, 4.0] {
            let phases = closed_form_spectrum(&QubitInvariants {
                eta: 0.0,
                omega,
                closure: GeodesicClosure::Shortest,
            })
            .unwrap();
            assert!((phases[0] + FRAC_PI_2).abs() < 1e-14);
            assert!((phases[1] - FRAC_PI_2).abs() < 1e-14);
        }
        // η = 1 → cos(Ω/2) ± i|sin(Ω/2)|
        let phases = closed_form_spectrum(&QubitInvariants {
            eta: 1.0,
            omega: 1.6,
            closure: GeodesicClosure::AlreadyClosed,
        })
        .unwrap();
        assert!((phases[1] - 0.8).abs() < 1e-14);
        assert!((phases[0] + 0.8).abs() < 1e-14);
    }

    #[test]
    fn bit_flip_is_ambiguous_without_closure() {
        let fam = bit_flip_family(0.7).unwrap();
        let r = fam.evolve(128).unwrap();
        let basis = Basis::standard(2);
        assert!(matches!(
            extract_invariants(&r, &basis),
            Err(Error::GeodesicAmbiguous)
        ));
        // explicit closure resolves it; Eq. 8 output does not depend on it
        let inv = extract_invariants_with_closure(&r, &basis, [0.0, 1.0, 0.0]).unwrap();
        assert!(inv.eta < 1e-9);
        let phases = closed_form_spectrum(&inv).unwrap();
        assert!((phases[1] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn bit_flip_sigma_at_zero_azimuth() {
        // α = 0 → U = −iσ_x
        let fam = bit_flip_family(0.0).unwrap();
        let r = fam.evolve(128).unwrap();
        let sigma = SigmaMatrix::from_transport(&r, &Basis::standard(2)).unwrap();
        assert!(sigma.entry(0, 0).norm() < 1e-12);
        assert!((sigma.entry(0, 1) - -crate::matrix::I).norm() < 1e-12);
        assert!((sigma.entry(1, 0) - -crate::matrix::I).norm() < 1e-12);
    }

    #[test]
    fn concatenated_flip_loop_encloses_hemisphere() {
        // ψ_1-path followed by ψ_2-path closes into a full great circle:
        // solid angle 2π, so arg γ_{12}^{(2)} = π.
        let fam = bit_flip_family(1.3).unwrap();
        let r = fam.evolve(256).unwrap();
        let basis = Basis::standard(2);
        let p1 = BlochPath::from_transport(&r, &basis.vector(0)).unwrap();
        let p2 = BlochPath::from_transport(&r, &basis.vector(1)).unwrap();
        let loop_ = p1.concatenate(&p2).unwrap();
        assert!(loop_.is_closed(1e-9));
        let omega = solid_angle(&loop_).unwrap();
        assert!((omega.abs() - 2.0 * PI).abs() < 1e-9, "omega = {omega}");
        let sigma = SigmaMatrix::from_transport(&r, &basis).unwrap();
        let g12 = sigma.gamma(&[0, 1]).unwrap().value;
        assert!((g12 - -ONE).norm() < 1e-9);
        assert!(crate::policy::angle_distance(g12.arg(), omega.abs() / 2.0) < 1e-9);
    }

    #[test]
    fn pole_to_equator_arc_eta() {
        // single quarter arc: η = |⟨pole|U|pole⟩| = cos(π/4)
        let fam = truncated_slice_family(0.0, FRAC_PI_2).unwrap();
        let r = fam.evolve(128).unwrap();
        let inv = extract_invariants(&r, &Basis::standard(2)).unwrap();
        assert!((inv.eta - FRAC_PI_4.cos()).abs() < 1e-10);
    }

    #[test]
    fn csv_export_shape() {
        let fam = bit_flip_family(0.0).unwrap();
        let r = fam.evolve(64).unwrap();
        let path = BlochPath::from_transport(&r, &ComplexVector::basis_state(2, 0)).unwrap();
        let csv = path.to_csv(r.grid()).unwrap();
        let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
        assert_eq!(lines[0], "s,nx,ny,nz,segment_id");
        assert_eq!(lines.len(), 1 + r.grid().len());
    }
}
