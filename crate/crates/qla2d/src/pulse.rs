//! Oblique Gaussian wave-packet initial conditions: p-polarized, impedance
//! matched, specified in the rotated frame (ζ, χ) whose ζ̂ axis is the
//! propagation direction.
//!
//! The magnetic field is
//! `H_z(ζ, χ) = −A · exp(−((ζ−ζ0)/ζw)² − ((χ−χ0)/χw)²) · cos(2πζ/γw)`
//! and the in-plane electric field is `E_χ = Z·H_z` with `Z = 1/n₁`, which
//! makes the packet a forward-propagating eigenmode that does not split
//! into counter-propagating parts.

use crate::error::{QlaError, Result};
use crate::lattice::{from_physical, DielectricMap, LatticeGeometry, PhysicalFields, QubitField};

/// Gaussian wave-packet parameters. Lengths are in lattice sites, the
/// incidence angle in degrees measured from the interface normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// packet center in the rotated frame
    pub zeta0: f64,
    pub chi0: f64,
    /// envelope widths
    pub zeta_w: f64,
    pub chi_w: f64,
    /// carrier wavelength
    pub gamma_w: f64,
    /// angle of incidence, degrees in [0, 90)
    pub theta_deg: f64,
    pub amplitude: f64,
    /// use cos(2π(ζ−ζ0)/γw) instead of the absolute-ζ carrier
    pub centered_carrier: bool,
}

impl PulseSpec {
    pub fn new(zeta_w: f64, chi_w: f64, gamma_w: f64, theta_deg: f64) -> Result<Self> {
        for (name, value) in [("zeta_w", zeta_w), ("chi_w", chi_w), ("gamma_w", gamma_w)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(QlaError::NonPositivePulseParam { name, value });
            }
        }
        if !(0.0..90.0).contains(&theta_deg) {
            return Err(QlaError::InvalidIncidenceAngle { value: theta_deg });
        }
        Ok(PulseSpec {
            zeta0: 0.0,
            chi0: 0.0,
            zeta_w,
            chi_w,
            gamma_w,
            theta_deg,
            amplitude: 1.0,
            centered_carrier: false,
        })
    }

    /// Place the packet center at lab coordinates (x, y).
    pub fn centered_at_lab(mut self, x: f64, y: f64) -> Self {
        let (zeta, chi) = lab_to_pulse(x, y, self.theta_deg);
        self.zeta0 = zeta;
        self.chi0 = chi;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Packet center in lab coordinates.
    pub fn center_lab(&self) -> (f64, f64) {
        rotate_to_lab(self.zeta0, self.chi0, self.theta_deg)
    }
}

/// The three pulse shapes of the production runs, as (ζw, χw, γw) in the
/// reference 1024-site units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioPreset {
    /// short along propagation, wide across: (20, 100, 20)
    Burst,
    /// elongated along propagation, thin across: (100, 20, 20)
    ThinLong,
    /// intermediate: (50, 50, 20)
    Finite,
}

impl ScenarioPreset {
    pub const ALL: [ScenarioPreset; 3] = [
        ScenarioPreset::Burst,
        ScenarioPreset::ThinLong,
        ScenarioPreset::Finite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioPreset::Burst => "burst",
            ScenarioPreset::ThinLong => "thin_long",
            ScenarioPreset::Finite => "finite",
        }
    }

    pub fn from_name(name: &str) -> Option<ScenarioPreset> {
        match name {
            "burst" => Some(ScenarioPreset::Burst),
            "thin_long" => Some(ScenarioPreset::ThinLong),
            "finite" => Some(ScenarioPreset::Finite),
            _ => None,
        }
    }

    /// (ζw, χw, γw)
    pub fn widths(self) -> (f64, f64, f64) {
        match self {
            ScenarioPreset::Burst => (20.0, 100.0, 20.0),
            ScenarioPreset::ThinLong => (100.0, 20.0, 20.0),
            ScenarioPreset::Finite => (50.0, 50.0, 20.0),
        }
    }

    /// Pulse spec with all lengths multiplied by `scale`.
    pub fn spec(self, scale: f64, theta_deg: f64) -> Result<PulseSpec> {
        let (zw, cw, gw) = self.widths();
        PulseSpec::new(zw * scale, cw * scale, gw * scale, theta_deg)
    }
}

/// Rotated-frame to lab-frame coordinates:
/// `[x; y] = [cosθ, sinθ; −sinθ, cosθ] · [ζ; χ]`.
pub fn rotate_to_lab(zeta: f64, chi: f64, theta_deg: f64) -> (f64, f64) {
    let t = theta_deg.to_radians();
    let (s, c) = t.sin_cos();
    (c * zeta + s * chi, -s * zeta + c * chi)
}

/// Inverse of [`rotate_to_lab`].
pub fn lab_to_pulse(x: f64, y: f64, theta_deg: f64) -> (f64, f64) {
    let t = theta_deg.to_radians();
    let (s, c) = t.sin_cos();
    (c * x - s * y, s * x + c * y)
}

const INTERFACE_ENVELOPE_TOL: f64 = 1e-8;

/// Construct the initial qubit field for the packet described by `spec`.
///
/// Errors if the packet center is outside the lattice, or if the packet
/// overlaps an inhomogeneity: the envelope weighted by the relative index
/// deviation from the packet center, max over sites of
/// `env · |n − n₁|/n₁`, must stay below 1e-8 of the peak.
pub fn init_pulse(
    geom: LatticeGeometry,
    map: &DielectricMap,
    spec: &PulseSpec,
) -> Result<QubitField> {
    let (cx, cy) = spec.center_lab();
    if cx < 0.0 || cx >= geom.nx() as f64 || cy < 0.0 || cy >= geom.ny() as f64 {
        return Err(QlaError::PulseCenterOutsideLattice { x: cx, y: cy });
    }
    let center_idx = geom.idx(cx.round() as isize, cy.round() as isize);
    let n1 = map.n(0)[center_idx];
    let impedance = 1.0 / n1;

    let t = spec.theta_deg.to_radians();
    let (sin_t, cos_t) = t.sin_cos();
    let two_pi_over_gw = 2.0 * std::f64::consts::PI / spec.gamma_w;

    let mut phys = PhysicalFields::new(geom);
    let mut worst_overlap = 0.0f64;
    for j in 0..geom.ny() {
        for i in 0..geom.nx() {
            let (x, y) = (i as f64, j as f64);
            let zeta = cos_t * x - sin_t * y;
            let chi = sin_t * x + cos_t * y;
            let dz = (zeta - spec.zeta0) / spec.zeta_w;
            let dc = (chi - spec.chi0) / spec.chi_w;
            let env = (-dz * dz - dc * dc).exp();
            let k = j * geom.nx() + i;
            let weighted = env * (map.n(0)[k] - n1).abs() / n1;
            if weighted > worst_overlap {
                worst_overlap = weighted;
            }
            if env < 1e-300 {
                continue;
            }
            let carrier_arg = if spec.centered_carrier {
                two_pi_over_gw * (zeta - spec.zeta0)
            } else {
                two_pi_over_gw * zeta
            };
            let hz = -spec.amplitude * env * carrier_arg.cos();
            let e_chi = impedance * hz;
            phys.f[0][k] = e_chi * sin_t; // E_x
            phys.f[1][k] = e_chi * cos_t; // E_y
            phys.f[5][k] = hz;
        }
    }
    if worst_overlap > INTERFACE_ENVELOPE_TOL {
        return Err(QlaError::PulseOverlapsInterface {
            envelope: worst_overlap,
            tol: INTERFACE_ENVELOPE_TOL,
        });
    }
    from_physical(&phys, map)
}

/// Energy-flux-weighted mean propagation direction: the lattice sum of the
/// Poynting field, normalized to a unit vector.
pub fn pulse_poynting_direction(field: &QubitField, map: &DielectricMap) -> Result<(f64, f64)> {
    let (sx, sy) = crate::diagnostics::poynting_field(field, map);
    let total_x: f64 = sx.iter().sum();
    let total_y: f64 = sy.iter().sum();
    let norm = total_x.hypot(total_y);
    if norm == 0.0 {
        return Err(QlaError::ZeroEnergyField);
    }
    Ok((total_x / norm, total_y / norm))
}
