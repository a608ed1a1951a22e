//! Closed-form trigonometric quantities of the regular hyperbolic
//! tetrahedron with face angle `alpha in (0, pi/3)`.
//!
//! Each quantity that admits two independent algebraic routes is exposed
//! twice (`*` and `*_alt`); the residual suite in the acceptance tests
//! evaluates both sides of every identity on an alpha grid.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Upper end of the admissible face-angle range.
pub const ALPHA_MAX: f64 = PI / 3.0;

pub(crate) fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 && alpha < ALPHA_MAX {
        Ok(alpha)
    } else {
        Err(Error::AngleOutOfRange(alpha))
    }
}

/// Edge length `a = arcosh(cos a / (1 - cos a))`, with the denominator as
/// `2 sin^2(a/2)` to avoid cancellation at small angles.
pub fn edge_length(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let s = (alpha / 2.0).sin();
    Ok((alpha.cos() / (2.0 * s * s)).acosh())
}

/// `tanh a` evaluated directly: `sqrt(2 cos a - 1) / cos a`.
pub fn tanh_edge(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((2.0 * alpha.cos() - 1.0).sqrt() / alpha.cos())
}

/// `cosh(a/2) = 1 / (2 sin(a/2))`.
pub fn cosh_half_edge(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok(1.0 / (2.0 * (alpha / 2.0).sin()))
}

/// `sinh(a/2) = sqrt(2 cos a - 1) / (2 sin(a/2))`.
pub fn sinh_half_edge(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((2.0 * alpha.cos() - 1.0).sqrt() / (2.0 * (alpha / 2.0).sin()))
}

/// Face altitude `h` from `tanh h = tanh a cos(a/2)`.
pub fn face_altitude(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((tanh_edge(alpha)? * (alpha / 2.0).cos()).atanh())
}

/// `tanh h` via the fully expanded route `cos(a/2) sqrt(2 cos a - 1) / cos a`.
pub fn tanh_altitude_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((alpha / 2.0).cos() * (2.0 * alpha.cos() - 1.0).sqrt() / alpha.cos())
}

/// Circumradius of a face: distance from the face center to a vertex,
/// from `tanh(a/2) = tanh R cos(a/2)` with `tanh(a/2) = sqrt(2 cos a - 1)`.
pub fn face_circumradius(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok(((2.0 * alpha.cos() - 1.0).sqrt() / (alpha / 2.0).cos()).atanh())
}

/// `tanh d` lower bound for the vertex-to-geodesic distance:
/// `cos(3a/2) cos(a/2) sqrt(2 cos a - 1) / cos a`.
pub fn vertex_clearance_tanh(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((1.5 * alpha).cos() * (alpha / 2.0).cos() * (2.0 * alpha.cos() - 1.0).sqrt() / alpha.cos())
}

/// Same bound through the altitude route: `cos(3a/2) tanh h`.
pub fn vertex_clearance_tanh_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((1.5 * alpha).cos() * face_altitude(alpha)?.tanh())
}

/// The trigonometric clearance bound as a distance.
pub fn vertex_clearance_bound(alpha: f64) -> Result<f64> {
    Ok(vertex_clearance_tanh(alpha)?.atanh())
}

/// Weakened logarithmic clearance bound
/// `d > (1/2) ln((sqrt(2 pi^3) + (pi - 3a)^{3/2}) / (sqrt(2 pi^3) - (pi - 3a)^{3/2}))`.
pub fn vertex_clearance_bound_log(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let s = (PI - 3.0 * alpha).powf(1.5);
    let r = (2.0 * PI.powi(3)).sqrt();
    Ok(0.5 * ((r + s) / (r - s)).ln())
}

/// `sinh` of the half-width of the strip between two opposite edges:
/// `sinh |QH1| = cos(a/2) sqrt(2 cos a - 1)`.
pub fn sinh_mid_perp(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok((alpha / 2.0).cos() * (2.0 * alpha.cos() - 1.0).sqrt())
}

/// Same quantity via `sinh(a/2) sin a`.
pub fn sinh_mid_perp_alt(alpha: f64) -> Result<f64> {
    Ok(sinh_half_edge(alpha)? * alpha.sin())
}

/// `W = cos^3(3a/2) cos(a/2)` and `D = cos^2 a - W`, the building blocks of
/// the per-segment bounds. `sqrt(W/D)` is the sinh of the clearance bound.
fn w_and_d(alpha: f64) -> (f64, f64) {
    let w = (1.5 * alpha).cos().powi(3) * (alpha / 2.0).cos();
    let d = alpha.cos().powi(2) - w;
    (w, d)
}

/// `sinh` of the clearance bound: `sqrt(W / D)`.
pub fn sinh_clearance_bound(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let (w, d) = w_and_d(alpha);
    Ok((w / d).sqrt())
}

/// Same quantity converted from the tanh form: `T / sqrt(1 - T^2)`.
pub fn sinh_clearance_bound_alt(alpha: f64) -> Result<f64> {
    let t = vertex_clearance_tanh(alpha)?;
    Ok(t / (1.0 - t * t).sqrt())
}

/// Lower bound for a developed two-segment chord through a turning point
/// whose three crossed edges share a vertex: `2 artanh(tan a * sqrt(W/D))`.
pub fn catch_chord_bound(alpha: f64) -> Result<f64> {
    Ok(2.0 * (alpha.tan() * sinh_clearance_bound(alpha)?).atanh())
}

/// Lower bound for a single segment whose two crossed edges share a vertex:
/// `2 artanh(tan(a/2) * sqrt(W/D))`.
pub fn short_segment_bound(alpha: f64) -> Result<f64> {
    Ok(2.0 * ((alpha / 2.0).tan() * sinh_clearance_bound(alpha)?).atanh())
}

/// Lower bound for a developed two-segment chord across the strip between
/// two opposite edges: `2 arsinh(cos(a/2) sqrt(2 cos a - 1))`.
pub fn cross_chord_bound(alpha: f64) -> Result<f64> {
    Ok(2.0 * sinh_mid_perp(alpha)?.asinh())
}

/// The same bound via its tanh form
/// `2 artanh(cos(a/2) sqrt(2 cos a - 1) / sqrt(cos^2 a + cos^2(a/2)))`.
pub fn cross_chord_bound_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let num = (alpha / 2.0).cos() * (2.0 * alpha.cos() - 1.0).sqrt();
    let den = (alpha.cos().powi(2) + (alpha / 2.0).cos().powi(2)).sqrt();
    Ok(2.0 * (num / den).atanh())
}

fn u_cubed(alpha: f64) -> f64 {
    (PI - 3.0 * alpha).powi(3)
}

/// Weak logarithmic form of [`catch_chord_bound`]:
/// `ln((2 pi^3 - u (1 - 4 a^2/pi^2)) / (2 pi^3 - u (1 + 4 a^2/pi^2)))`.
pub fn catch_chord_bound_log(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let u = u_cubed(alpha);
    let e = 4.0 * alpha * alpha / (PI * PI);
    Ok(((2.0 * PI.powi(3) - u * (1.0 - e)) / (2.0 * PI.powi(3) - u * (1.0 + e))).ln())
}

/// Second route: `2 artanh(4 u a^2 / (pi^2 (2 pi^3 - u)))`.
pub fn catch_chord_bound_log_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let u = u_cubed(alpha);
    Ok(2.0 * (4.0 * u * alpha * alpha / (PI * PI * (2.0 * PI.powi(3) - u))).atanh())
}

/// Weak logarithmic form of [`short_segment_bound`]:
/// `ln((2 pi^3 - u (1 - a^2/pi^2)) / (2 pi^3 - u (1 + a^2/pi^2)))`.
pub fn short_segment_bound_log(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let u = u_cubed(alpha);
    let e = alpha * alpha / (PI * PI);
    Ok(((2.0 * PI.powi(3) - u * (1.0 - e)) / (2.0 * PI.powi(3) - u * (1.0 + e))).ln())
}

/// Second route: `2 artanh(u a^2 / (pi^2 (2 pi^3 - u)))`.
pub fn short_segment_bound_log_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let u = u_cubed(alpha);
    Ok(2.0 * (u * alpha * alpha / (PI * PI * (2.0 * PI.powi(3) - u))).atanh())
}

/// Weak logarithmic form of [`cross_chord_bound`]:
/// `ln((3 pi - 3a) / (pi + 3a))`.
pub fn cross_chord_bound_log(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok(((3.0 * PI - 3.0 * alpha) / (PI + 3.0 * alpha)).ln())
}

/// Second route: `2 artanh((pi - 3a) / (2 pi))`.
pub fn cross_chord_bound_log_alt(alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    Ok(2.0 * ((PI - 3.0 * alpha) / (2.0 * PI)).atanh())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_enforced() {
        for f in [edge_length, face_altitude, vertex_clearance_bound, catch_chord_bound] {
            assert!(f(0.0).is_err());
            assert!(f(ALPHA_MAX).is_err());
            assert!(f(-0.2).is_err());
            assert!(f(f64::NAN).is_err());
            assert!(f(0.5).is_ok());
        }
    }

    #[test]
    fn edge_length_regression_values() {
        // a(pi/4) = arcosh(1 + sqrt 2), extended-precision reference
        let a = edge_length(PI / 4.0).unwrap();
        assert!((a - 1.528570919481).abs() < 1e-12);
        assert!((a - (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-14);
        // a -> 0 as alpha -> pi/3
        assert!(edge_length(ALPHA_MAX - 1e-7).unwrap() < 1e-3);
        // strictly decreasing
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let al = ALPHA_MAX * i as f64 / 100.0;
            let a = edge_length(al).unwrap();
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn auxiliary_identities_on_grid() {
        for i in 1..=50 {
            let al = 0.01 + (ALPHA_MAX - 0.02) * (i - 1) as f64 / 49.0;
            let a = edge_length(al).unwrap();
            assert!((a.tanh() - tanh_edge(al).unwrap()).abs() < 1e-12);
            assert!(((a / 2.0).cosh() - cosh_half_edge(al).unwrap()).abs() < 1e-12);
            assert!(((a / 2.0).sinh() - sinh_half_edge(al).unwrap()).abs() < 1e-12);
            let h = face_altitude(al).unwrap();
            assert!((h.tanh() - tanh_altitude_alt(al).unwrap()).abs() < 1e-12);
            assert!(h < a, "altitude must be shorter than the edge");
        }
    }

    #[test]
    fn altitude_regression_value() {
        assert!((face_altitude(PI / 4.0).unwrap() - 1.224226223839).abs() < 1e-12);
    }

    #[test]
    fn clearance_bounds_ordering_and_values() {
        let d = vertex_clearance_bound(PI / 6.0).unwrap();
        assert!((d - 0.819486317729).abs() < 1e-12);
        let dl = vertex_clearance_bound_log(PI / 6.0).unwrap();
        assert!((dl - 0.255412811883).abs() < 1e-12);
        for &al in &[0.1, 0.5, 1.0] {
            let strong = vertex_clearance_bound(al).unwrap();
            let weak = vertex_clearance_bound_log(al).unwrap();
            assert!(weak < strong, "log bound is a weakening");
            assert!(strong < face_altitude(al).unwrap());
        }
        // both bounds vanish at the degenerate end
        assert!(vertex_clearance_bound(ALPHA_MAX - 1e-8).unwrap() < 1e-3);
        assert!(vertex_clearance_bound_log(ALPHA_MAX - 1e-8).unwrap() < 1e-3);
    }

    #[test]
    fn segment_bound_regressions_at_pi_6() {
        assert!((catch_chord_bound(PI / 6.0).unwrap() - 1.174439985075).abs() < 1e-12);
        assert!((short_segment_bound(PI / 6.0).unwrap() - 0.500164784728).abs() < 1e-12);
        assert!((cross_chord_bound(PI / 6.0).unwrap() - 1.506372079820).abs() < 1e-12);
        // weak cross bound at pi/6 is exactly ln(5/3)
        assert!((cross_chord_bound_log(PI / 6.0).unwrap() - (5f64 / 3.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn weak_bounds_never_exceed_strong_bounds() {
        for i in 1..120 {
            let al = ALPHA_MAX * i as f64 / 120.0;
            if al <= 0.0 || al >= ALPHA_MAX {
                continue;
            }
            assert!(catch_chord_bound_log(al).unwrap() <= catch_chord_bound(al).unwrap() + 1e-15);
            assert!(short_segment_bound_log(al).unwrap() <= short_segment_bound(al).unwrap() + 1e-15);
            assert!(cross_chord_bound_log(al).unwrap() <= cross_chord_bound(al).unwrap() + 1e-15);
            // all six vanish toward the degenerate corner but stay positive inside
            for f in [
                catch_chord_bound,
                short_segment_bound,
                cross_chord_bound,
                catch_chord_bound_log,
                short_segment_bound_log,
                cross_chord_bound_log,
            ] {
                assert!(f(al).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn dual_routes_agree() {
        for i in 1..=50 {
            let al = 0.01 + (ALPHA_MAX - 0.02) * (i - 1) as f64 / 49.0;
            assert!((sinh_mid_perp(al).unwrap() - sinh_mid_perp_alt(al).unwrap()).abs() < 1e-12);
            assert!(
                (sinh_clearance_bound(al).unwrap() - sinh_clearance_bound_alt(al).unwrap()).abs()
                    < 1e-10
            );
            assert!(
                (cross_chord_bound(al).unwrap() - cross_chord_bound_alt(al).unwrap()).abs() < 1e-12
            );
            assert!(
                (vertex_clearance_tanh(al).unwrap() - vertex_clearance_tanh_alt(al).unwrap()).abs()
                    < 1e-12
            );
            assert!(
                (catch_chord_bound_log(al).unwrap() - catch_chord_bound_log_alt(al).unwrap()).abs()
                    < 1e-12
            );
            assert!(
                (short_segment_bound_log(al).unwrap() - short_segment_bound_log_alt(al).unwrap())
                    .abs()
                    < 1e-12
            );
            assert!(
                (cross_chord_bound_log(al).unwrap() - cross_chord_bound_log_alt(al).unwrap()).abs()
                    < 1e-12
            );
        }
    }
}
