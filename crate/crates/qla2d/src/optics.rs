//! Closed-form plane-interface electrodynamics: Snell refraction, the
//! critical angle, p-polarization Fresnel coefficients and the plane-wave
//! dispersion reference. Used to validate simulation output; entirely
//! independent of the lattice scheme.
//!
//! Amplitude coefficients follow the H-field convention for p-polarized
//! waves (the simulator measures H_z): r = H_r/H_i and t = H_t/H_i at the
//! interface, so r = (n₂cosθᵢ − n₁cosθₜ)/(n₂cosθᵢ + n₁cosθₜ).

use crate::operators::EpsilonParameter;

/// A planar two-medium interface problem: indices and incidence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceProblem {
    pub n1: f64,
    pub n2: f64,
    pub theta_inc_deg: f64,
}

impl InterfaceProblem {
    pub fn new(n1: f64, n2: f64, theta_inc_deg: f64) -> Self {
        assert!(n1 > 0.0 && n2 > 0.0, "indices must be positive");
        assert!(
            (0.0..90.0).contains(&theta_inc_deg),
            "incidence angle must be in [0, 90)"
        );
        InterfaceProblem {
            n1,
            n2,
            theta_inc_deg,
        }
    }
}

/// Refraction angle, or the evanescent marker beyond the critical angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnellResult {
    /// transmitted propagation angle in degrees from the normal
    Refracted(f64),
    Evanescent,
}

impl SnellResult {
    pub fn angle_deg(self) -> Option<f64> {
        match self {
            SnellResult::Refracted(a) => Some(a),
            SnellResult::Evanescent => None,
        }
    }
}

/// θₜ = asin(n₁ sinθᵢ / n₂), evanescent when the argument exceeds one.
pub fn snell_angle(p: &InterfaceProblem) -> SnellResult {
    let s = p.n1 * p.theta_inc_deg.to_radians().sin() / p.n2;
    if s > 1.0 {
        SnellResult::Evanescent
    } else {
        SnellResult::Refracted(s.asin().to_degrees())
    }
}

/// Critical angle asin(n₂/n₁) in degrees when n₁ > n₂, otherwise None
/// (equal indices included: no total internal reflection exists).
pub fn critical_angle(n1: f64, n2: f64) -> Option<f64> {
    if n1 > n2 {
        Some((n2 / n1).asin().to_degrees())
    } else {
        None
    }
}

/// p-polarization amplitude and energy coefficients (H-field convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelP {
    pub r_amp: f64,
    pub t_amp: f64,
    pub r_energy: f64,
    pub t_energy: f64,
}

/// Fresnel coefficients for p-polarization; None in the evanescent regime.
pub fn fresnel_p(p: &InterfaceProblem) -> Option<FresnelP> {
    let theta_t = match snell_angle(p) {
        SnellResult::Refracted(a) => a.to_radians(),
        SnellResult::Evanescent => return None,
    };
    let ci = p.theta_inc_deg.to_radians().cos();
    let ct = theta_t.cos();
    let denom = p.n2 * ci + p.n1 * ct;
    let r = (p.n2 * ci - p.n1 * ct) / denom;
    let t = 2.0 * p.n2 * ci / denom;
    let r_energy = r * r;
    // transmitted power: |t|^2 * (n1 cosθt) / (n2 cosθi) in H convention
    let t_energy = t * t * (p.n1 * ct) / (p.n2 * ci);
    Some(FresnelP {
        r_amp: r,
        t_amp: t,
        r_energy,
        t_energy,
    })
}

/// λ₂/λ₁ at fixed frequency: n₁/n₂.
pub fn wavelength_ratio(n1: f64, n2: f64) -> f64 {
    assert!(n1 > 0.0 && n2 > 0.0);
    n1 / n2
}

/// Continuum phase advance of a plane wave of the given lattice wavelength
/// after `steps` iterations: 2π · (steps·ε) · (1/n) / λ.
pub fn plane_wave_phase(n: f64, wavelength: f64, steps: u64, eps: EpsilonParameter) -> f64 {
    assert!(n > 0.0 && wavelength > 0.0);
    2.0 * std::f64::consts::PI * (steps as f64 * eps.value()) / (n * wavelength)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn snell_sub_critical_value() {
        let p = InterfaceProblem::new(1.0, 2.0, 25.0);
        let a = snell_angle(&p).angle_deg().unwrap();
        // asin(sin 25° / 2)
        let expected = (25f64.to_radians().sin() / 2.0).asin().to_degrees();
        assert_abs_diff_eq!(a, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 12.199082, epsilon = 1e-5);
    }

    #[test]
    fn snell_critical_is_ninety() {
        let p = InterfaceProblem::new(2.0, 1.0, 30.0);
        let a = snell_angle(&p).angle_deg().unwrap();
        // up to the degree->radian rounding of sin(30deg)
        assert_abs_diff_eq!(a, 90.0, epsilon = 1e-6);
    }

    #[test]
    fn snell_normal_incidence_is_zero() {
        for (n1, n2) in [(1.0, 2.0), (2.0, 1.0), (1.5, 1.5)] {
            let p = InterfaceProblem::new(n1, n2, 0.0);
            assert_eq!(snell_angle(&p), SnellResult::Refracted(0.0));
        }
    }

    #[test]
    fn snell_beyond_critical_is_evanescent() {
        let p = InterfaceProblem::new(2.0, 1.0, 35.0);
        assert_eq!(snell_angle(&p), SnellResult::Evanescent);
    }

    #[test]
    fn critical_angle_values() {
        assert_abs_diff_eq!(critical_angle(2.0, 1.0).unwrap(), 30.0, epsilon = 1e-12);
        assert_eq!(critical_angle(1.0, 2.0), None);
        assert_eq!(critical_angle(1.0, 1.0), None);
    }

    #[test]
    fn fresnel_normal_incidence() {
        let f = fresnel_p(&InterfaceProblem::new(1.0, 2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(f.r_energy, 1.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.t_energy, 8.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn fresnel_no_interface() {
        let f = fresnel_p(&InterfaceProblem::new(1.0, 1.0, 37.0)).unwrap();
        assert_abs_diff_eq!(f.r_energy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.t_energy, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fresnel_evanescent_is_none() {
        assert!(fresnel_p(&InterfaceProblem::new(2.0, 1.0, 35.0)).is_none());
    }

    #[test]
    fn fresnel_oblique_energy_conservation() {
        let f = fresnel_p(&InterfaceProblem::new(1.0, 2.0, 25.0)).unwrap();
        assert_abs_diff_eq!(f.r_energy + f.t_energy, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.r_energy, 0.089610, epsilon = 1e-5);
    }

    #[test]
    fn brewster_angle_kills_reflection() {
        for (n1, n2) in [(1.0f64, 2.0f64), (2.0, 1.0), (1.0, 1.5)] {
            let brewster = (n2 / n1).atan().to_degrees();
            let f = fresnel_p(&InterfaceProblem::new(n1, n2, brewster)).unwrap();
            assert!(
                f.r_energy <= 1e-12,
                "Brewster reflection {} for ({n1}, {n2})",
                f.r_energy
            );
        }
    }

    #[test]
    fn wavelength_ratios() {
        assert_eq!(wavelength_ratio(1.0, 2.0), 0.5);
        assert_eq!(wavelength_ratio(2.0, 1.0), 2.0);
        assert_eq!(wavelength_ratio(1.7, 1.7), 1.0);
    }

    #[test]
    fn phase_oracle_basics() {
        let eps = EpsilonParameter::new(0.25).unwrap();
        assert_eq!(plane_wave_phase(1.0, 20.0, 0, eps), 0.0);
        let p1 = plane_wave_phase(1.0, 20.0, 100, eps);
        let p2 = plane_wave_phase(1.0, 20.0, 200, eps);
        assert_abs_diff_eq!(p2, 2.0 * p1, epsilon = 1e-12);
        let ph = plane_wave_phase(2.0, 20.0, 100, eps);
        assert_abs_diff_eq!(ph, p1 / 2.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn r_plus_t_is_one(n1 in 0.5f64..4.0, n2 in 0.5f64..4.0, theta in 0.0f64..89.0) {
            let p = InterfaceProblem::new(n1, n2, theta);
            if let Some(f) = fresnel_p(&p) {
                prop_assert!((f.r_energy + f.t_energy - 1.0).abs() < 1e-12);
                prop_assert!(f.r_energy >= 0.0 && f.t_energy >= 0.0);
            }
        }

        #[test]
        fn snell_monotone_below_critical(n1 in 0.5f64..4.0, n2 in 0.5f64..4.0,
                                         theta in 1.0f64..88.0, dtheta in 0.01f64..1.0) {
            let a = snell_angle(&InterfaceProblem::new(n1, n2, theta));
            let b = snell_angle(&InterfaceProblem::new(n1, n2, theta + dtheta));
            if let (SnellResult::Refracted(x), SnellResult::Refracted(y)) = (a, b) {
                prop_assert!(y > x);
            }
        }
    }
}
